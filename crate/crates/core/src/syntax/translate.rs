use std::fmt;

use serde::Serialize;

use super::{Formula, Fresh, Sort, Term};

/// `∃u.∀x.matrix` with a quantifier-free matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DialForm {
    pub witnesses: Vec<(String, Sort)>,
    pub counters: Vec<(String, Sort)>,
    pub matrix: Formula,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Options {
    /// Erase function sorts over the empty tuple.
    pub simplify: bool,
}

impl Default for Options {
    fn default() -> Options {
        Options { simplify: true }
    }
}

impl DialForm {
    fn bare(matrix: Formula) -> DialForm {
        DialForm { witnesses: Vec::new(), counters: Vec::new(), matrix }
    }

    /// The prenex formula `∃u.∀x.matrix`.
    pub fn to_formula(&self) -> Formula {
        let body = self.counters.iter().rev().fold(self.matrix.clone(), |acc, (x, s)| Formula::forall(x, s.clone(), acc));
        self.witnesses.iter().rev().fold(body, |acc, (u, s)| Formula::exists(u, s.clone(), acc))
    }

    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Binder {
            name: String,
            sort: String,
        }
        #[derive(Serialize)]
        struct Json {
            witnesses: Vec<Binder>,
            counters: Vec<Binder>,
            matrix: String,
            formula: String,
        }
        let binders = |v: &[(String, Sort)]| {
            v.iter().map(|(n, s)| Binder { name: n.clone(), sort: s.to_string() }).collect()
        };
        serde_json::to_value(Json {
            witnesses: binders(&self.witnesses),
            counters: binders(&self.counters),
            matrix: self.matrix.to_string(),
            formula: self.to_string(),
        })
        .expect("dial forms serialise")
    }
}

impl fmt::Display for DialForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_formula())
    }
}

/// The Dialectica translation with default options.
pub fn dialectica_translate(phi: &Formula) -> DialForm {
    translate_with(phi, Options::default())
}

/// The Dialectica translation of the alpha-normal form of `phi`.
/// Quantifier-free formulas translate to themselves.
pub fn translate_with(phi: &Formula, opts: Options) -> DialForm {
    let phi = phi.alpha_normalise();
    let mut fresh = Fresh::avoiding(phi.names());
    go(&phi, opts, &mut fresh)
}

fn vars(binders: &[(String, Sort)]) -> Vec<Term> {
    binders.iter().map(|(n, _)| Term::var(n)).collect()
}

fn sorts(binders: &[(String, Sort)]) -> Vec<Sort> {
    binders.iter().map(|(_, s)| s.clone()).collect()
}

/// Rebinds each name in `binders` at sort `S^dom` and substitutes
/// `name(args)` for it in `matrix`.
fn lift(
    binders: &[(String, Sort)],
    dom: &[Sort],
    args: &[Term],
    matrix: &Formula,
    simplify: bool,
) -> (Vec<(String, Sort)>, Formula) {
    let lifted = binders.iter().map(|(n, s)| (n.clone(), Sort::power(s.clone(), dom.to_vec(), simplify))).collect();
    let matrix = matrix.substitute(&|y: &str| {
        binders
            .iter()
            .any(|(n, _)| n == y)
            .then(|| Term::apply(Term::var(y), args.to_vec(), simplify))
    });
    (lifted, matrix)
}

fn go(phi: &Formula, opts: Options, fresh: &mut Fresh) -> DialForm {
    if phi.is_quantifier_free() {
        return DialForm::bare(phi.clone());
    }
    match phi {
        Formula::And(a, b) => {
            let (a, b) = (go(a, opts, fresh), go(b, opts, fresh));
            DialForm {
                witnesses: [a.witnesses, b.witnesses].concat(),
                counters: [a.counters, b.counters].concat(),
                matrix: Formula::and(a.matrix, b.matrix),
            }
        }
        Formula::Or(a, b) => {
            let (a, b) = (go(a, opts, fresh), go(b, opts, fresh));
            let z = fresh.take("d");
            let case = |k: usize, m: Formula| Formula::imp(Formula::Eq(Term::var(&z), Term::Num(k)), m);
            DialForm {
                witnesses: [vec![(z.clone(), Sort::Bool)], a.witnesses, b.witnesses].concat(),
                counters: [a.counters, b.counters].concat(),
                matrix: Formula::and(case(0, a.matrix), case(1, b.matrix)),
            }
        }
        Formula::Exists(z, s, a) => {
            let a = go(a, opts, fresh);
            DialForm { witnesses: [vec![(z.clone(), s.clone())], a.witnesses].concat(), ..a }
        }
        Formula::Forall(z, s, a) => {
            let a = go(a, opts, fresh);
            let (witnesses, matrix) = lift(&a.witnesses, &[s.clone()], &[Term::var(z)], &a.matrix, opts.simplify);
            DialForm { witnesses, counters: [vec![(z.clone(), s.clone())], a.counters].concat(), matrix }
        }
        Formula::Imp(a, b) => {
            let (psi, phi) = (go(a, opts, fresh), go(b, opts, fresh));
            let (u, y) = (&psi.witnesses, &phi.counters);
            let (fs, conclusion) = lift(&phi.witnesses, &sorts(u), &vars(u), &phi.matrix, opts.simplify);
            let uy = [u.clone(), y.clone()].concat();
            let (gs, premise) = lift(&psi.counters, &sorts(&uy), &vars(&uy), &psi.matrix, opts.simplify);
            DialForm {
                witnesses: [fs, gs].concat(),
                counters: uy,
                matrix: Formula::imp(premise, conclusion),
            }
        }
        Formula::Top | Formula::Bot | Formula::Atom(..) | Formula::Eq(..) => unreachable!("quantifier-free"),
    }
}
