use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use dialectica::completion::{DialCompletion, ExCompletion, UnCompletion};
use dialectica::doctrine::{
    check_hyperdoctrine, fiber_listing, Bits, Doctrine, SubsetDoctrine, TableDoctrine, TrivialDoctrine,
};
use dialectica::finbase::{BaseCat, FinSet};
use dialectica::freeness::{check_godel_doctrine, check_skolem_doctrine};
use dialectica::principles::{HypothesisPolicy, Principle, Principles, Rule};
use dialectica::report::{Report, Window};
use dialectica::syntax::{parse_formula, translate_with, verify_witness, Model, Options};
use dialectica::tripos::{
    check_category_laws, comprehension_completion, limits_report, predicates_category, tripos_to_topos,
    FiniteCategory,
};
use dialectica::Error;

#[derive(Parser)]
#[command(name = "dialectica", version, about = "Finite doctrines, Dialectica completions and the functional interpretation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Translate a formula, or check the translation against a model.
    Translate(TranslateArgs),
    /// Run a check suite against a doctrine.
    Check(CheckArgs),
    /// Dump a fiber of a completion in interchange form.
    Complete(CompleteArgs),
    /// Build a tripos-derived category and count or check it.
    Tripos(TriposArgs),
    /// A narrated run from a formula to the category of PERs.
    Demo(DemoArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Builtin {
    Subsets,
    ExOfSubsets,
    UnOfSubsets,
    DialOfSubsets,
    Trivial,
}

#[derive(Args)]
struct Source {
    /// A generated doctrine.
    #[arg(long, value_enum, conflicts_with = "doctrine")]
    builtin: Option<Builtin>,
    /// A doctrine in interchange form.
    #[arg(long)]
    doctrine: Option<PathBuf>,
}

#[derive(Args)]
struct Common {
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..))]
    cap: u64,
    #[arg(long, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    budget: u64,
    /// Emit JSON instead of text.
    #[arg(long)]
    json: bool,
}

impl Common {
    fn base(&self) -> BaseCat {
        BaseCat::new(self.cap as usize).with_budget(self.budget as u128)
    }
}

#[derive(Args)]
struct TranslateArgs {
    #[arg(long)]
    formula: String,
    /// Keep unit sorts and unapplied witnesses.
    #[arg(long)]
    raw: bool,
    /// Evaluate formula and translation in `--model`.
    #[arg(long, requires = "model")]
    verify: bool,
    #[arg(long)]
    model: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Hyperdoctrine,
    Skolem,
    Godel,
    Principles,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long, value_enum)]
    suite: Suite,
    #[command(flatten)]
    source: Source,
    #[command(flatten)]
    common: Common,
    /// Size bound of the sweep; defaults to the cap.
    #[arg(long)]
    bound: Option<usize>,
    /// Sizes to sweep; the largest is used as the bound.
    #[arg(long, value_delimiter = ',')]
    sizes: Vec<usize>,
    /// Rerun the single instance with this id.
    #[arg(long)]
    only: Option<String>,
    /// Principles suite items, comma separated.
    #[arg(long, value_delimiter = ',')]
    which: Vec<String>,
    /// Refuse rules whose side conditions fail in the window.
    #[arg(long)]
    enforce: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Ex,
    Un,
    Dial,
}

#[derive(Args)]
struct CompleteArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    #[command(flatten)]
    source: Source,
    #[command(flatten)]
    common: Common,
    /// Size of the object whose fiber is listed.
    #[arg(long)]
    fiber: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Construction {
    Topos,
    Pred,
    Comprehension,
}

#[derive(Args)]
struct TriposArgs {
    #[command(flatten)]
    source: Source,
    #[command(flatten)]
    common: Common,
    #[arg(long, value_enum, default_value = "topos")]
    category: Construction,
    /// Check associativity and identity.
    #[arg(long)]
    laws: bool,
    /// Count objects and arrows.
    #[arg(long)]
    count: bool,
    /// Search for a terminal object and binary products.
    #[arg(long)]
    limits: bool,
    #[arg(long)]
    only: Option<String>,
}

#[derive(Args)]
struct DemoArgs {
    #[arg(long, default_value_t = 2)]
    cap: usize,
}

enum Failure {
    Usage(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } | Error::Sort(_) | Error::Invalid(_) | Error::UnboundSymbol(_) => {
                Failure::Usage(e.to_string())
            }
            e => Failure::Check(e.to_string()),
        }
    }
}

fn read(path: &PathBuf) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

/// A computation generic over the doctrine it runs on.
trait Task {
    type Out;
    fn run<P: Doctrine>(self, p: P) -> Result<Self::Out, Failure>;
}

fn dispatch<T: Task>(source: &Source, base: BaseCat, task: T) -> Result<T::Out, Failure> {
    if let Some(path) = &source.doctrine {
        return task.run(TableDoctrine::from_json(&read(path)?)?);
    }
    let subsets = SubsetDoctrine::new(base);
    match source.builtin.unwrap_or(Builtin::Subsets) {
        Builtin::Subsets => task.run(subsets),
        Builtin::ExOfSubsets => task.run(ExCompletion::new(subsets)),
        Builtin::UnOfSubsets => task.run(UnCompletion::new(subsets)),
        Builtin::DialOfSubsets => task.run(DialCompletion::new(subsets)),
        Builtin::Trivial => task.run(TrivialDoctrine::new(base)),
    }
}

struct CheckTask<'a>(&'a CheckArgs);

impl Task for CheckTask<'_> {
    type Out = Report;

    fn run<P: Doctrine>(self, p: P) -> Result<Report, Failure> {
        let args = self.0;
        let bound = args
            .bound
            .or_else(|| args.sizes.iter().copied().max())
            .unwrap_or(args.common.cap as usize);
        let mut window = Window::new(bound);
        if let Some(id) = &args.only {
            window = window.only(id.clone());
        }
        Ok(match args.suite {
            Suite::Hyperdoctrine => check_hyperdoctrine(&p, &window),
            Suite::Skolem => check_skolem_doctrine(&p, &window),
            Suite::Godel => check_godel_doctrine(&p, &window),
            Suite::Principles => {
                let policy = if args.enforce { HypothesisPolicy::Enforce } else { HypothesisPolicy::Report };
                let pr = Principles::new(&p, window.clone()).with_policy(policy);
                let mut top = Report::new("principles", window.describe());
                let which: Vec<String> = if args.which.is_empty() {
                    let mut all: Vec<String> = Rule::ALL.iter().map(|r| r.name().to_string()).collect();
                    all.extend(Principle::ALL.iter().map(|q| q.name().to_string()));
                    all
                } else {
                    args.which.clone()
                };
                for item in &which {
                    let r = match item.as_str() {
                        "skolem" => pr.check_skolemisation(),
                        "extraction" => pr.check_witness_extraction(),
                        "impl-equiv" => pr.check_implication_equivalence()?,
                        name => match (name.parse::<Rule>(), name.parse::<Principle>()) {
                            (Ok(rule), _) => pr.check_rule(rule)?,
                            (_, Ok(principle)) => pr.check_principle(principle)?,
                            _ => return Err(Failure::Usage(format!("unknown principles item `{name}`"))),
                        },
                    };
                    top.push(r);
                }
                top
            }
        })
    }
}

struct CompleteTask {
    kind: Kind,
    obj: FinSet,
}

impl Task for CompleteTask {
    type Out = String;

    fn run<P: Doctrine>(self, p: P) -> Result<String, Failure> {
        let spec = match self.kind {
            Kind::Ex => fiber_listing(&ExCompletion::new(p), self.obj)?,
            Kind::Un => fiber_listing(&UnCompletion::new(p), self.obj)?,
            Kind::Dial => fiber_listing(&DialCompletion::new(p), self.obj)?,
        };
        Ok(serde_json::to_string_pretty(&spec).expect("specs serialise"))
    }
}

struct TriposTask<'a>(&'a TriposArgs);

fn inspect<C: FiniteCategory>(c: &C, args: &TriposArgs) -> Result<Report, Failure> {
    let mut window = Window::new(args.common.cap as usize);
    if let Some(id) = &args.only {
        window = window.only(id.clone());
    }
    let mut top = Report::new(c.name(), window.describe());
    if args.count || !(args.laws || args.limits) {
        let mut counts = Report::new("counts", window.describe());
        let objs = c.objects()?;
        let mut arrows = 0;
        for a in &objs {
            for b in &objs {
                arrows += c.arrows(a, b)?.len();
            }
        }
        counts.checked = objs.len() as u64;
        counts.datum("objects", objs.len());
        counts.datum("arrows", arrows);
        for a in &objs {
            counts.datum(format!("object {a}"), format!("{} endo-arrow(s)", c.arrows(a, a)?.len()));
        }
        top.push(counts);
    }
    if args.laws {
        top.push(check_category_laws(c, &window)?);
    }
    if args.limits {
        top.push(limits_report(c, &window)?);
    }
    Ok(top)
}

impl Task for TriposTask<'_> {
    type Out = Report;

    fn run<P: Doctrine>(self, p: P) -> Result<Report, Failure> {
        let cap = self.0.common.cap as usize;
        match self.0.category {
            Construction::Topos => inspect(&tripos_to_topos(p, cap), self.0),
            Construction::Pred => inspect(&predicates_category(p, cap), self.0),
            Construction::Comprehension => inspect(&comprehension_completion(p, cap), self.0),
        }
    }
}

/// Writes to stdout, ignoring a closed pipe.
fn say(text: &str) {
    let _ = io::stdout().lock().write_all(text.as_bytes());
}

fn emit(r: &Report, json: bool) -> ExitCode {
    if json {
        say(&format!("{}\n", r.to_json()));
    } else {
        say(&r.render());
    }
    if r.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn translate(args: &TranslateArgs) -> Result<ExitCode, Failure> {
    let phi = parse_formula(&args.formula)?;
    if args.verify {
        let path = args.model.as_ref().expect("clap requires --model");
        let m = Model::from_json(&read(path)?, args.common.base())?;
        let v = verify_witness(&phi, &m)?;
        if args.common.json {
            say(&format!("{}\n", serde_json::to_string_pretty(&v).expect("verdicts serialise")));
        } else {
            say(&v.report().render());
        }
        return Ok(if v.agrees() { ExitCode::SUCCESS } else { ExitCode::from(1) });
    }
    let d = translate_with(&phi, Options { simplify: !args.raw });
    if args.common.json {
        say(&format!("{}\n", serde_json::to_string_pretty(&d.to_json()).expect("forms serialise")));
    } else {
        say(&format!("{d}\n"));
    }
    Ok(ExitCode::SUCCESS)
}

fn demo(cap: usize) -> Result<ExitCode, Failure> {
    let text = "forall x:A. P(x) -> exists y:B. Q(y)";
    let phi = parse_formula(text)?;
    println!("formula      {phi}");
    println!("translation  {}", translate_with(&phi, Options::default()));

    let base = BaseCat::new(cap);
    let dial = DialCompletion::new(SubsetDoctrine::new(base)).with_aux_cap(1);
    let one = FinSet::ONE;
    println!("Dial(subsets) over 1 point: {} classes", dial.classes(one)?.len());

    let two = FinSet(2);
    let pr = Principles::new(&dial, Window::new(cap)).with_policy(HypothesisPolicy::Report);
    let psi = dial.embed(FinSet(2), Bits::from_indices(2, [0]));
    let phi_d = dial.embed(FinSet(2), Bits::from_indices(2, [1]));
    let ex = pr.extract_dialectica_witnesses(one, (two, one, &psi), (two, one, &phi_d))?;
    println!("exists u. psi(u) |- exists v. phi(v), with psi = {{0}}, phi = {{1}}: {}", ex.sequent);
    if let Some((f0, f1)) = &ex.pair {
        println!("  witness f0 = {f0}, counterexample f1 = {f1}");
    }

    let mut all_passed = true;
    for rule in [Rule::MpRule, Rule::Choice, Rule::Counterexample] {
        let r = pr.check_rule(rule)?;
        all_passed &= r.passed();
        println!("rule {rule}: {} ({} instances)", r.status, r.checked);
    }

    let t = tripos_to_topos(SubsetDoctrine::new(base), cap);
    let objs = t.objects()?;
    let mut arrows = 0;
    for a in &objs {
        for b in &objs {
            arrows += t.arrows(a, b)?.len();
        }
    }
    println!("T(subsets) up to {cap} points: {} PERs, {arrows} arrows", objs.len());
    let laws = check_category_laws(&t, &Window::new(cap))?;
    all_passed &= laws.passed();
    println!("category laws: {} ({} instances)", laws.status, laws.checked);
    Ok(if all_passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    match cli.command {
        Command::Translate(args) => translate(&args),
        Command::Check(args) => {
            let r = dispatch(&args.source, args.common.base(), CheckTask(&args))?;
            Ok(emit(&r, args.common.json))
        }
        Command::Complete(args) => {
            let task = CompleteTask { kind: args.kind, obj: FinSet(args.fiber) };
            say(&format!("{}\n", dispatch(&args.source, args.common.base(), task)?));
            Ok(ExitCode::SUCCESS)
        }
        Command::Tripos(args) => {
            let r = dispatch(&args.source, args.common.base(), TriposTask(&args))?;
            Ok(emit(&r, args.common.json))
        }
        Command::Demo(args) => demo(args.cap),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
    }
}
