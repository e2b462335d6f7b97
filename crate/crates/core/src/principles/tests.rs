use super::*;
use crate::completion::{DialCompletion, DialObj};
use crate::doctrine::{Bits, SubsetDoctrine};
use crate::finbase::{encode_function, BaseCat};
use crate::report::Status;

type Dial = DialCompletion<SubsetDoctrine>;

fn dial() -> Dial {
    DialCompletion::new(SubsetDoctrine::new(BaseCat::new(2)))
}

fn slim() -> Dial {
    dial().with_aux_cap(1)
}

fn embed(n: usize, f: impl Fn(usize) -> bool) -> DialObj<Bits> {
    dial().embed(FinSet(n), Bits::from_fn(n, f))
}

#[test]
fn skolem_function_of_the_diagonal_is_the_identity() {
    let g = dial();
    let two = FinSet(2);
    let diag = embed(8, |k| (k / 2) % 2 == k % 2);
    let pr = Principles::new(&g, Window::new(2));
    let r = pr.skolemise(two, two, two, &diag).unwrap();
    assert_eq!(r.status, Status::Pass, "{}", r.render());
    let lhs = forall_proj(&g, two, two, &exists_proj(&g, FinSet(4), two, &diag).unwrap()).unwrap();
    assert_eq!(lhs.witness, FinSet(4));
    let (exp, _) = g.base().exponential(two, two).unwrap();
    let rhs = {
        let ev = Shape::new([2, 4, 2]).map_to(&Shape::new([2, 2, 2]), |s, d| {
            d.copy_from_slice(&[s[0], s[2], eval_code(s[1], 2, s[2])])
        });
        let moved = g.reindex(&ev, &diag).unwrap();
        exists_proj(&g, two, exp, &forall_proj(&g, FinSet(8), two, &moved).unwrap()).unwrap()
    };
    let w = g.leq_witness(two, &lhs, &rhs).unwrap().unwrap();
    let identity = encode_function(&[0, 1], 2);
    assert_eq!(identity, 2);
    for a in 0..2 {
        assert_eq!(w.f0.apply(a * 4 + identity), identity);
    }
}

#[test]
fn skolemisation_of_extremes() {
    let g = dial();
    let pr = Principles::new(&g, Window::new(2));
    let (one, two) = (FinSet::ONE, FinSet(2));
    let top = embed(4, |_| true);
    let r = pr.skolemise(one, two, two, &top).unwrap();
    assert!(r.passed());
    let bottom = embed(4, |_| false);
    assert!(pr.skolemise(one, two, two, &bottom).unwrap().passed());
    let wide = FinSet(3);
    assert!(matches!(pr.skolemise(one, wide, wide, &embed(9, |_| true)), Err(Error::CapExceeded { .. })));
}

#[test]
fn skolemisation_sweep_small() {
    let g = slim();
    let r = Principles::new(&g, Window::new(1)).check_skolemisation();
    assert!(r.passed(), "{}", r.render());
    assert!(r.checked > 0);
}

#[test]
fn extraction_examples() {
    let g = dial();
    let pr = Principles::new(&g, Window::new(2));
    let (one, two) = (FinSet::ONE, FinSet(2));
    let top = embed(4, |_| true);
    let ex = pr.extract_dialectica_witnesses(one, (two, two, &top), (two, two, &top)).unwrap();
    assert!(ex.sequent && ex.agrees());
    let (f0, f1) = ex.pair.unwrap();
    assert_eq!(f0.table(), &[0, 0]);
    assert_eq!(f1.table(), &[0, 0, 0, 0]);
    let empty = embed(4, |_| false);
    let ex = pr.extract_dialectica_witnesses(one, (two, two, &top), (two, two, &empty)).unwrap();
    assert!(!ex.sequent && ex.pair.is_none());
    let sb = DialObj { ctx: FinSet(4), witness: FinSet(0), counter: FinSet::ONE, body: Bits::empty(0) };
    let err = pr.extract_dialectica_witnesses(one, (two, two, &sb), (two, two, &top)).unwrap_err();
    assert!(matches!(err, Error::SideConditionFailed(_)));
}

#[test]
fn extraction_is_two_sided_at_bound_one() {
    let g = slim();
    let r = Principles::new(&g, Window::new(1)).check_witness_extraction();
    assert!(r.passed(), "{}", r.render());
    assert!(r.checked > 10);
}

#[test]
fn rules_in_dial_of_subsets() {
    let g = dial();
    let pr = Principles::new(&g, Window::new(2)).with_policy(HypothesisPolicy::Report);
    for rule in [Rule::MpRule, Rule::Choice, Rule::Counterexample] {
        let r = pr.check_rule(rule).unwrap();
        assert!(r.passed(), "{}", r.render());
        assert!(r.checked > 0, "{rule}");
    }
    let ip = pr.check_rule(Rule::IpRule).unwrap();
    let f = ip.failure.unwrap();
    assert_eq!(f.instance, "A=1 B=2 alpha=d1.1:{0} beta=d1.1:{0}");
    assert!(f.detail.contains("existential conclusion fails"));
    assert!(!pr.check_rule(Rule::MmpRule).unwrap().passed());
}

/// The implication `E{0,1} -> E{0}` over two points is `E{0}`, but along
/// the point `0` it becomes `E{0} -> E{0}`, the strict top.
#[test]
fn implication_is_not_stable_under_reindexing() {
    let g = dial();
    let pr = Principles::new(&g, Window::new(2));
    let two = FinSet(2);
    let full = embed(2, |_| true);
    let first = embed(2, |k| k == 0);
    let before = pr.imp(two, &full, &first).unwrap();
    assert!(crate::doctrine::equivalent(&g, two, &before, &first).unwrap());
    let point = FinMap::constant(FinSet::ONE, two, 0);
    let moved = g.reindex(&point, &before).unwrap();
    let after = pr
        .imp(FinSet::ONE, &g.reindex(&point, &full).unwrap(), &g.reindex(&point, &first).unwrap())
        .unwrap();
    assert!(!crate::doctrine::equivalent(&g, FinSet::ONE, &moved, &after).unwrap());
    assert_eq!(after.counter, FinSet(0));
}

#[test]
fn bottom_side_condition_is_enforced() {
    let g = dial();
    let pr = Principles::new(&g, Window::new(2));
    assert!(matches!(pr.check_rule(Rule::MpRule), Err(Error::SideConditionFailed(_))));
    assert!(matches!(pr.check_rule(Rule::Counterexample), Err(Error::SideConditionFailed(_))));
    assert!(pr.check_rule(Rule::Choice).unwrap().passed());
    let noted = Principles::new(&g, Window::new(2)).with_policy(HypothesisPolicy::Report).check_rule(Rule::MpRule).unwrap();
    assert!(noted.notes.iter().any(|n| n.starts_with("hypothesis not verified: bottom")));
}

#[test]
fn markov_rule_is_modified_markov_at_bottom() {
    let g = dial();
    let pr = Principles::new(&g, Window::new(2)).with_policy(HypothesisPolicy::Report);
    for (a, b) in pr.pairs() {
        let ab = a.times(b);
        let bot = pr.bot(a).unwrap();
        for alpha in pr.reps(ab, |e| pr.qf(ab, e)).unwrap() {
            let all = forall_proj(&g, a, b, &alpha).unwrap();
            let mp = pr.valid(a, &pr.neg(a, &all).unwrap()).unwrap();
            let mmp = pr.valid(a, &pr.imp(a, &all, &bot).unwrap()).unwrap();
            assert_eq!(mp, mmp);
            let t_mp = pr.term(a, b, &alpha, |at| pr.valid(a, &pr.neg(a, at)?)).unwrap();
            let t_mmp = pr.term(a, b, &alpha, |at| pr.valid(a, &pr.imp(a, at, &bot)?)).unwrap();
            assert_eq!(t_mp, t_mmp);
        }
    }
}

#[test]
fn principles_in_dial_of_subsets() {
    let g = dial();
    let pr = Principles::new(&g, Window::new(2)).with_policy(HypothesisPolicy::Report);
    let mp = pr.check_principle(Principle::Mp).unwrap();
    assert!(mp.passed(), "{}", mp.render());
    for principle in [Principle::Ip, Principle::IpStar, Principle::Mmp] {
        let r = pr.check_principle(principle).unwrap();
        assert_eq!(r.status, Status::Fail, "{principle}");
        assert!(r.notes.is_empty(), "closure hypotheses hold: {:?}", r.notes);
    }
}

#[test]
fn implication_equivalence_with_unit_sorts() {
    let g = dial();
    let pr = Principles::new(&g, Window::new(2));
    let one = FinSet::ONE;
    for psi in [true, false] {
        for phi in [true, false] {
            let (l, r) = (embed(1, |_| psi), embed(1, |_| phi));
            let rep = pr.implication_equivalence(one, (one, one, &l), (one, one, &r)).unwrap();
            assert!(rep.passed(), "{}", rep.render());
        }
    }
}

#[test]
fn names_round_trip() {
    for r in Rule::ALL {
        assert_eq!(r.name().parse::<Rule>().unwrap(), r);
    }
    for p in Principle::ALL {
        assert_eq!(p.to_string().parse::<Principle>().unwrap(), p);
    }
    assert!("ip-star".parse::<Principle>().is_err());
}

#[test]
fn implication_equivalence_breaks_on_an_empty_counter_sort() {
    let g = slim();
    let pr = Principles::new(&g, Window::new(2)).with_policy(HypothesisPolicy::Report);
    let one = FinSet::ONE;
    let psi = DialObj { ctx: FinSet(0), witness: FinSet(0), counter: FinSet(0), body: Bits::empty(0) };
    let phi = DialObj { ctx: one, witness: one, counter: one, body: Bits::empty(1) };
    let rep = pr.implication_equivalence(one, (one, FinSet(0), &psi), (one, one, &phi)).unwrap();
    assert_eq!(rep.status, Status::Fail);
    let failure = rep.failure.unwrap();
    assert!(failure.detail.starts_with("left-to-right fails"), "{}", failure.detail);
}
