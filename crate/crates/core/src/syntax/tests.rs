use std::collections::BTreeMap;

use proptest::prelude::*;

use super::*;
use crate::doctrine::Bits;
use crate::error::Error;
use crate::finbase::{eval_code, BaseCat, Shape};

fn p(text: &str) -> Formula {
    parse_formula(text).unwrap_or_else(|e| panic!("{text}: {e}"))
}

fn a(name: &str) -> Sort {
    Sort::named(name)
}

fn app(r: &str, xs: &[&str]) -> Formula {
    Formula::atom(r, xs.iter().map(|x| Term::var(x)).collect())
}

fn squash(s: &str) -> String {
    s.chars().filter(|c| !c.is_whitespace()).collect()
}

/// Direct Tarski semantics by recursion on the formula.
fn tarski(phi: &Formula, m: &Model, env: &mut Vec<(String, Sort, usize)>) -> bool {
    fn term(t: &Term, m: &Model, env: &[(String, Sort, usize)]) -> (Sort, usize) {
        match t {
            Term::Var(x) => {
                let (_, s, v) = env.iter().rev().find(|(y, _, _)| y == x).expect("bound");
                (s.clone(), *v)
            }
            Term::Num(n) => (Sort::Bool, *n),
            Term::Fn(g, args) => {
                let f = &m.functions[g];
                let sizes: Vec<usize> = f.args.iter().map(|s| m.size(s).unwrap()).collect();
                let vals: Vec<usize> = args.iter().map(|a| term(a, m, env).1).collect();
                (f.result.clone(), f.map.apply(Shape::new(sizes).encode(&vals)))
            }
            Term::Ev(h, args) => {
                let (Sort::Fun(dom, cod), code) = term(h, m, env) else { panic!("applied non-function") };
                let mut idx = 0;
                for (s, a) in dom.iter().zip(args) {
                    idx = idx * m.size(s).unwrap() + term(a, m, env).1;
                }
                let c = m.size(&cod).unwrap();
                (*cod, eval_code(code, c, idx))
            }
        }
    }
    match phi {
        Formula::Top => true,
        Formula::Bot => false,
        Formula::Atom(r, args) => {
            let rel = &m.relations[r];
            let sizes: Vec<usize> = rel.args.iter().map(|s| m.size(s).unwrap()).collect();
            let vals: Vec<usize> = args.iter().map(|a| term(a, m, env).1).collect();
            rel.holds.contains(Shape::new(sizes).encode(&vals))
        }
        Formula::Eq(s, t) => term(s, m, env).1 == term(t, m, env).1,
        Formula::And(x, y) => tarski(x, m, env) && tarski(y, m, env),
        Formula::Or(x, y) => tarski(x, m, env) || tarski(y, m, env),
        Formula::Imp(x, y) => !tarski(x, m, env) || tarski(y, m, env),
        Formula::Exists(x, s, body) | Formula::Forall(x, s, body) => {
            let n = m.size(s).unwrap();
            let mut vals = (0..n).map(|v| {
                env.push((x.clone(), s.clone(), v));
                let r = tarski(body, m, env);
                env.pop();
                r
            });
            if matches!(phi, Formula::Exists(..)) {
                vals.any(|b| b)
            } else {
                vals.all(|b| b)
            }
        }
    }
}

fn unary_model(a_size: usize, p: &[usize]) -> Model {
    let mut m = Model::new(BTreeMap::from([("A".to_string(), a_size)]), BaseCat::new(3));
    m.add_relation("P", vec![Sort::named("A")], Bits::from_indices(a_size, p.iter().copied())).unwrap();
    m
}

#[test]
fn grammar_fixtures() {
    let f = p("forall x:A. P(x) -> exists y:B. Q(y)");
    assert_eq!(f, Formula::forall("x", a("A"), Formula::imp(app("P", &["x"]), Formula::exists("y", a("B"), app("Q", &["y"])))));
    assert_eq!(p("P(x) & Q(x) | R(x)"), Formula::or(Formula::and(app("P", &["x"]), app("Q", &["x"])), app("R", &["x"])));
    assert_eq!(p("~~P(x)"), Formula::not(Formula::not(app("P", &["x"]))));
    assert_eq!(p("P(x) -> Q(x) -> R(x)"), Formula::imp(app("P", &["x"]), Formula::imp(app("Q", &["x"]), app("R", &["x"]))));
    assert_eq!(p("true & false"), Formula::and(Formula::Top, Formula::Bot));
    assert_eq!(p("z = 0"), Formula::Eq(Term::var("z"), Term::Num(0)));
    assert_eq!(
        p("forall f:B^A. forall x:A. Q(f(x))"),
        Formula::forall(
            "f",
            Sort::Fun(vec![a("A")], Box::new(a("B"))),
            Formula::forall("x", a("A"), Formula::atom("Q", vec![Term::Ev(Box::new(Term::var("f")), vec![Term::var("x")])]))
        )
    );
    assert_eq!(p("P(g(x))"), Formula::atom("P", vec![Term::Fn("g".into(), vec![Term::var("x")])]));
}

#[test]
fn parse_errors_carry_positions() {
    let pos = |text: &str| match parse_formula(text) {
        Err(Error::Parse { pos, .. }) => pos,
        other => panic!("{text}: {other:?}"),
    };
    assert_eq!(pos("P(x) &"), 6);
    assert_eq!(pos("forall x A. P(x)"), 9);
    assert_eq!(pos("P(x) Q(x)"), 5);
    assert_eq!(pos("P(x) # Q(x)"), 5);
    assert_eq!(pos("x"), 0);
    assert!(matches!(parse_formula("forall x:A. forall y:B. P(x) & P(y)"), Err(Error::Sort(_))));
    assert!(matches!(parse_formula("P(x) & P(x, x)"), Err(Error::Sort(_))));
    assert!(matches!(parse_formula("forall x:A. x(x) = x"), Err(Error::Sort(_))));
    assert!(matches!(parse_formula("z = 2"), Err(Error::Sort(_))));
}

#[test]
fn binders_are_normalised() {
    assert_eq!(p("(forall x:A. P(x)) & (forall x:A. Q(x))").to_string(), "(forall x:A. P(x)) & (forall x1:A. Q(x1))");
    assert_eq!(p("P(x) & (exists x:A. P(x))").to_string(), "P(x) & (exists x1:A. P(x1))");
    let f = p("forall x:A. exists x:A. R(x, x)");
    assert_eq!(f.to_string(), "forall x:A. exists x1:A. R(x1, x1)");
    assert_eq!(f.alpha_normalise(), f);
}

#[test]
fn printing_round_trips() {
    for text in [
        "forall x:A. P(x) -> exists y:B. Q(y)",
        "(forall x:A. P(x)) -> exists y:B. Q(y)",
        "P(x) & Q(x) | R(x)",
        "P(x) & (Q(x) | R(x))",
        "(P(x) -> Q(x)) -> R(x)",
        "~~P(x)",
        "~(P(x) & Q(x))",
        "~(exists x:A. P(x))",
        "(d = 0 -> P(x)) & (d = 1 -> Q(x))",
        "exists c:(C^B)^A. forall a:A. forall b:B. R(a, b, c(a)(b))",
        "exists f:B^(A * A). forall x:A. Q(f(x, x))",
        "exists f:B^(). Q(f())",
        "false -> true",
    ] {
        assert_eq!(squash(&p(text).to_string()), squash(text), "{text}");
    }
}

#[test]
fn sort_printing() {
    let cba = Sort::Fun(vec![a("A")], Box::new(Sort::Fun(vec![a("B")], Box::new(a("C")))));
    assert_eq!(cba.to_string(), "(C^B)^A");
    assert_eq!(parse_sort("(C^B)^A").unwrap(), cba);
    let c_ba = Sort::Fun(vec![Sort::Fun(vec![a("A")], Box::new(a("B")))], Box::new(a("C")));
    assert_eq!(c_ba.to_string(), "C^(B^A)");
    assert_eq!(parse_sort("C^(B^A)").unwrap(), c_ba);
    assert_eq!(Sort::Fun(vec![a("A"), Sort::Bool], Box::new(a("B"))).to_string(), "B^(A * 2)");
    assert_eq!(Sort::Fun(vec![], Box::new(a("B"))).to_string(), "B^()");
}

fn binders(v: &[(&str, Sort)]) -> Vec<(String, Sort)> {
    v.iter().map(|(n, s)| (n.to_string(), s.clone())).collect()
}

#[test]
fn translation_clauses() {
    let d = dialectica_translate(&p("P(x)"));
    assert_eq!((d.witnesses.len(), d.counters.len(), &d.matrix), (0, 0, &p("P(x)")));
    assert_eq!(d.to_string(), "P(x)");

    // Hand-applied implication clause: u and y empty, v = [y:B], x = [z:A].
    let d = dialectica_translate(&p("(forall z:A. P(z)) -> exists y:B. Q(y)"));
    assert_eq!(d.witnesses, binders(&[("y", a("B")), ("z", a("A"))]));
    assert!(d.counters.is_empty());
    assert_eq!(d.matrix, p("P(z) -> Q(y)"));
    let raw = translate_with(&p("(forall z:A. P(z)) -> exists y:B. Q(y)"), Options { simplify: false });
    assert_eq!(raw.to_string(), "exists y:B^(). exists z:A^(). P(z()) -> Q(y())");

    let d = dialectica_translate(&p("exists u:A. forall x:B. P(u, x)"));
    assert_eq!((d.witnesses, d.counters), (binders(&[("u", a("A"))]), binders(&[("x", a("B"))])));
    assert_eq!(d.matrix, p("P(u, x)"));

    let d = dialectica_translate(&p("forall x:A. exists y:B. R(x, y)"));
    assert_eq!(d.to_string(), "exists y:B^A. forall x:A. R(x, y(x))");

    let d = dialectica_translate(&p("(exists x:A. P(x)) | (forall y:A. Q(y))"));
    assert_eq!(d.to_string(), "exists d:2. exists x:A. forall y:A. (d = 0 -> P(x)) & (d = 1 -> Q(y))");

    let d = dialectica_translate(&p("~(forall x:A. P(x))"));
    assert_eq!(d.to_string(), "exists x:A. ~P(x)");

    let d = dialectica_translate(&p("forall a:A. forall b:B. exists c:C. R(a, b, c)"));
    assert_eq!(d.to_string(), "exists c:(C^B)^A. forall a:A. forall b:B. R(a, b, c(a)(b))");

    let d = dialectica_translate(&p("(exists u:A. forall x:B. P(u, x)) -> exists v:C. forall y:D. Q(v, y)"));
    assert_eq!(d.to_string(), "exists v:C^A. exists x:B^(A * D). forall u:A. forall y:D. P(u, x(u, y)) -> Q(v(u), y)");

    let d = dialectica_translate(&p("P(x) | Q(x)"));
    assert_eq!(d.to_string(), "P(x) | Q(x)");
}

#[test]
fn decision_variables_are_fresh() {
    let d = dialectica_translate(&p("(exists d:A. P(d)) | (exists d1:A. P(d1))"));
    assert_eq!(d.witnesses[0], ("d2".to_string(), Sort::Bool));
}

#[test]
fn evaluation_examples() {
    let m = unary_model(2, &[1]);
    let none = BTreeMap::new();
    assert!(!evaluate(&p("forall x:A. P(x)"), &m, &none).unwrap());
    assert!(evaluate(&p("exists x:A. P(x)"), &m, &none).unwrap());
    assert!(!evaluate(&Formula::Bot, &m, &none).unwrap());
    let at = |v| BTreeMap::from([("x".to_string(), v)]);
    assert!(!evaluate(&p("P(x)"), &m, &at(0)).unwrap());
    assert!(evaluate(&p("P(x)"), &m, &at(1)).unwrap());
    assert!(matches!(evaluate(&p("P(x)"), &m, &none), Err(Error::UnboundSymbol(x)) if x == "x"));
    assert!(matches!(evaluate(&p("exists y:A. Q(y)"), &m, &none), Err(Error::UnboundSymbol(q)) if q == "Q"));
    assert!(matches!(evaluate(&p("exists y:B. P(y)"), &m, &none), Err(Error::Sort(_))));
}

#[test]
fn witness_verification_examples() {
    let mut m = Model::new(BTreeMap::from([("B".to_string(), 3)]), BaseCat::new(3));
    m.add_relation("Q", vec![a("B")], Bits::from_indices(3, [2])).unwrap();
    let v = verify_witness(&p("exists y:B. Q(y)"), &m).unwrap();
    assert!(v.agrees());
    assert_eq!(v.envs[0].witness, Some(vec![("y".to_string(), "2".to_string())]));

    // P total, Q empty: both sides false.
    let spec = r#"{"sorts": {"A": 2, "B": 2},
        "relations": {"P": {"args": ["A"], "tuples": [[0], [1]]}, "Q": {"args": ["B"], "tuples": []}}}"#;
    let m = Model::from_json(spec, BaseCat::new(3)).unwrap();
    let phi = p("(forall x:A. P(x)) -> exists y:B. Q(y)");
    let v = verify_witness(&phi, &m).unwrap();
    assert!(!tarski(&phi, &m, &mut Vec::new()));
    assert_eq!((v.envs[0].direct, v.envs[0].translated, v.agrees()), (false, false, true));
    assert!(v.report().passed());

    let v = verify_witness(&p("forall x:A. exists y:B. x = x & P(x) -> ~Q(y)"), &m).unwrap();
    assert!(v.agrees() && v.envs[0].direct);
}

#[test]
fn free_variables_are_verified_per_environment() {
    let m = unary_model(3, &[0, 2]);
    let v = verify_witness(&p("P(x) -> exists y:A. P(y) & ~y = x"), &m).unwrap();
    assert_eq!(v.envs.len(), 3);
    assert!(v.agrees());
    assert_eq!(v.envs.iter().map(|e| e.direct).collect::<Vec<_>>(), [true, true, true]);
    let w: Vec<_> = v.envs.iter().map(|e| e.witness.clone().unwrap()[0].1.clone()).collect();
    assert_eq!(w, ["2", "0", "0"]);
}

#[test]
fn model_files() {
    let spec = r#"{"sorts": {"A": 2}, "functions": {"f": {"args": ["A"], "result": "A", "table": [1, 0]}},
        "relations": {"R": {"args": ["A", "A"], "tuples": [[0, 1]]}}}"#;
    let m = Model::from_json(spec, BaseCat::new(3)).unwrap();
    assert_eq!(Model::from_spec(&m.to_spec(), m.base).unwrap(), m);
    assert!(evaluate(&p("exists x:A. R(x, f(x))"), &m, &BTreeMap::new()).unwrap());
    let bad = r#"{"sorts": {"A": 2}, "functions": {"f": {"args": ["A"], "result": "A", "table": [2, 0]}}}"#;
    assert!(matches!(Model::from_json(bad, BaseCat::new(3)), Err(Error::Invalid(_))));
    let bad = r#"{"sorts": {"A": 2}, "relations": {"R": {"args": ["A"], "tuples": [[5]]}}}"#;
    assert!(matches!(Model::from_json(bad, BaseCat::new(3)), Err(Error::Invalid(_))));
    let bad = r#"{"sorts": {"A": 2}, "relations": {"R": {"args": ["C"], "tuples": []}}}"#;
    assert!(matches!(Model::from_json(bad, BaseCat::new(3)), Err(Error::UnboundSymbol(_))));
}

#[test]
fn function_sorts_respect_the_exponential_cap() {
    let m = Model::new(BTreeMap::from([("A".to_string(), 3)]), BaseCat::new(3));
    assert_eq!(m.size(&parse_sort("A^A").unwrap()), Ok(27));
    assert!(matches!(m.size(&parse_sort("A^(A * A)").unwrap()), Err(Error::CapExceeded { .. })));
    let mut m = unary_model(3, &[0]);
    m.base = BaseCat::new(2);
    let phi = p("forall x:A. exists y:A. P(x) -> P(y)");
    assert!(matches!(verify_witness(&phi, &m), Err(Error::CapExceeded { .. })));
}

#[test]
fn model_enumeration() {
    let phi = p("forall x:A. exists y:B. R(x, y) & P(f(x)) & P(x)");
    let (sig, _) = infer(&phi, &Signature::default()).unwrap().complete().unwrap();
    let models = all_models(&sig, &phi.sort_names(), 1..=2, BaseCat::new(2)).unwrap();
    // Sizes (a, b) contribute a^a * 2^a * 2^(ab) models.
    let expected: usize = [(1, 1), (1, 2), (2, 1), (2, 2)]
        .iter()
        .map(|&(x, y): &(u32, u32)| (x.pow(x) * 2u32.pow(x) * 2u32.pow(x * y)) as usize)
        .sum();
    assert_eq!(models.len(), expected);
    let specs: std::collections::BTreeSet<String> =
        models.iter().map(|m| serde_json::to_string(&m.to_spec()).unwrap()).collect();
    assert_eq!(specs.len(), expected);
}

#[test]
fn empty_carriers_break_agreement() {
    // The translation needs a point of A to pick z, the formula does not.
    let phi = p("(forall z:A. P(z)) -> exists y:B. Q(y)");
    let spec = r#"{"sorts": {"A": 0, "B": 1},
        "relations": {"P": {"args": ["A"], "tuples": []}, "Q": {"args": ["B"], "tuples": [[0]]}}}"#;
    let m = Model::from_json(spec, BaseCat::new(3)).unwrap();
    let v = verify_witness(&phi, &m).unwrap();
    assert_eq!((v.envs[0].direct, v.envs[0].translated), (true, false));
    let r = agreement_sweep(&[phi.clone()], 0..=1, BaseCat::new(3)).unwrap();
    assert!(!r.passed());
    assert!(agreement_sweep(&[phi], 1..=2, BaseCat::new(3)).unwrap().passed());
}

#[test]
fn evaluation_matches_tarski_on_small_models() {
    let phi = p("forall x:A. exists y:A. (R(x, y) | P(f(y))) & ~R(y, x) | P(y)");
    let (sig, _) = infer(&phi, &Signature::default()).unwrap().complete().unwrap();
    for m in all_models(&sig, &phi.sort_names(), 1..=2, BaseCat::new(2)).unwrap() {
        assert_eq!(evaluate(&phi, &m, &BTreeMap::new()).unwrap(), tarski(&phi, &m, &mut Vec::new()));
    }
}

fn arb_formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        Just(Formula::Top),
        Just(Formula::Bot),
        (0..3usize).prop_map(|k| app("P", &[["x", "y", "z"][k]])),
        (0..3usize, 0..3usize).prop_map(|(i, j)| app("R", &[["x", "y", "z"][i], ["x", "y", "z"][j]])),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::imp(a, b)),
            inner.clone().prop_map(Formula::not),
            (0..3usize, inner.clone()).prop_map(|(k, a)| Formula::exists(["x", "y", "z"][k], Sort::named("A"), a)),
            (0..3usize, inner).prop_map(|(k, a)| Formula::forall(["x", "y", "z"][k], Sort::named("A"), a)),
        ]
    })
}

fn close(phi: Formula) -> Formula {
    ["x", "y", "z"].iter().fold(phi, |acc, x| Formula::forall(x, Sort::named("A"), acc)).alpha_normalise()
}

fn quantifier_free_everywhere(d: &DialForm) -> bool {
    d.matrix.is_quantifier_free()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn print_then_parse_is_identity(phi in arb_formula()) {
        let phi = phi.alpha_normalise();
        prop_assert_eq!(parse_formula(&phi.to_string()).unwrap(), phi);
    }

    #[test]
    fn translations_are_prenex_fixed_points(phi in arb_formula()) {
        let d = dialectica_translate(&phi);
        prop_assert!(quantifier_free_everywhere(&d));
        let again = dialectica_translate(&d.to_formula());
        prop_assert_eq!(&again, &d);
        let mut allowed = phi.free_vars();
        allowed.extend(d.witnesses.iter().chain(&d.counters).map(|(n, _)| n.clone()));
        prop_assert!(d.matrix.free_vars().is_subset(&allowed));
        prop_assert_eq!(parse_formula(&d.to_string()).unwrap(), d.to_formula());
    }

    #[test]
    fn translation_agrees_classically(phi in arb_formula(), size in 1..3usize, p_mask in 0u64..8, r_mask in 0u64..512) {
        let phi = close(phi);
        let mut m = Model::new(BTreeMap::from([("A".to_string(), size)]), BaseCat::new(3).with_exp_cap(1 << 12));
        m.add_relation("P", vec![Sort::named("A")], Bits::from_mask(size, p_mask & ((1 << size) - 1))).unwrap();
        m.add_relation("R", vec![Sort::named("A"); 2], Bits::from_mask(size * size, r_mask & ((1 << (size * size)) - 1))).unwrap();
        match verify_witness(&phi, &m) {
            Ok(v) => {
                prop_assert!(v.agrees(), "{}", phi);
                prop_assert_eq!(v.envs[0].direct, tarski(&phi, &m, &mut Vec::new()));
            }
            Err(Error::CapExceeded { .. } | Error::BudgetExceeded { .. }) => {}
            Err(e) => prop_assert!(false, "{e}"),
        }
    }
}
