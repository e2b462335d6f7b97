use super::*;
use crate::doctrine::{
    check_indexed_preorder, exists_proj, forall_proj, Bits, Doctrine, OpDoctrine, SubsetDoctrine, TrivialDoctrine,
};
use crate::finbase::{proj1, BaseCat, FinMap, FinSet};
use crate::report::Window;

fn subsets() -> SubsetDoctrine {
    SubsetDoctrine::new(BaseCat::new(2))
}

fn set(n: usize, xs: &[usize]) -> Bits {
    Bits::from_indices(n, xs.iter().copied())
}

/// Subsets with every fast path hidden, forcing brute-force witness search.
fn slow() -> OpDoctrine<OpDoctrine<SubsetDoctrine>> {
    OpDoctrine::new(OpDoctrine::new(subsets()))
}

fn ex_compose(a: FinSet, b: FinSet, f: &FinMap, g: &FinMap) -> FinMap {
    let c = f.cod().0;
    FinMap::from_fn(a.times(b), g.cod(), |k| g.apply((k / b.0) * c + f.apply(k)))
}

#[test]
fn ex_order_examples() {
    let ex = ExCompletion::new(subsets());
    let one = FinSet::ONE;
    let lhs = ExObj { ctx: one, aux: FinSet(2), body: set(2, &[0]) };
    let rhs = ExObj { ctx: one, aux: FinSet(2), body: set(2, &[1]) };
    assert_eq!(ex.leq_witness(one, &lhs, &rhs).unwrap().unwrap().table(), &[1, 0]);
    let bottom = ExObj { ctx: one, aux: FinSet(2), body: set(2, &[]) };
    assert_eq!(ex.leq_witness(one, &bottom, &rhs).unwrap().unwrap().table(), &[0, 0]);
    assert_eq!(ex.leq_witness(one, &rhs, &bottom).unwrap(), None);
    assert!(ex.fiber(one).unwrap().contains(&lhs));
    assert_eq!(ex.reindex(&FinMap::identity(one), &lhs).unwrap(), lhs);
}

#[test]
fn trivial_aux_reduces_to_the_base_order() {
    let p = subsets();
    let ex = ExCompletion::new(subsets());
    let un = UnCompletion::new(subsets());
    let dial = DialCompletion::new(subsets());
    for n in 0..=2 {
        let a = FinSet(n);
        for x in p.fiber(a).unwrap() {
            for y in p.fiber(a).unwrap() {
                let base = p.leq(a, &x, &y).unwrap();
                assert_eq!(ex.leq(a, &ex.embed(a, x.clone()), &ex.embed(a, y.clone())).unwrap(), base);
                assert_eq!(un.leq(a, &un.embed(a, x.clone()), &un.embed(a, y.clone())).unwrap(), base);
                assert_eq!(dial.leq(a, &dial.embed(a, x.clone()), &dial.embed(a, y.clone())).unwrap(), base);
            }
        }
    }
}

#[test]
fn pointwise_search_matches_brute_force() {
    let (ex_fast, ex_slow) = (ExCompletion::new(subsets()), ExCompletion::new(slow()));
    let (un_fast, un_slow) = (UnCompletion::new(subsets()), UnCompletion::new(slow()));
    for n in 0..=2 {
        let a = FinSet(n);
        let xs = ex_fast.fiber(a).unwrap();
        for x in &xs {
            for y in &xs {
                assert_eq!(ex_fast.leq_witness(a, x, y).unwrap(), ex_slow.leq_witness(a, x, y).unwrap());
                let (ux, uy) = (
                    UnObj { ctx: a, aux: x.aux, body: x.body.clone() },
                    UnObj { ctx: a, aux: y.aux, body: y.body.clone() },
                );
                assert_eq!(un_fast.leq_witness(a, &ux, &uy).unwrap(), un_slow.leq_witness(a, &ux, &uy).unwrap());
            }
        }
    }
    let dial = DialCompletion::new(subsets());
    for n in 0..=1 {
        let i = FinSet(n);
        let xs = dial.fiber(i).unwrap();
        for x in &xs {
            for y in &xs {
                let fast = dial.leq_witness(i, x, y).unwrap();
                assert_eq!(fast, leq_dial_exhaustive(dial.inner(), x, y).unwrap(), "{x} <= {y}");
                if let Some(w) = fast {
                    assert!(dial.certifies(x, y, &w).unwrap());
                }
            }
        }
    }
}

#[test]
fn universal_is_dual_to_existential_of_the_opposite() {
    let un = UnCompletion::new(subsets());
    let ex_op = ExCompletion::new(OpDoctrine::new(subsets()));
    for n in 0..=2 {
        let a = FinSet(n);
        let xs = un.fiber(a).unwrap();
        for x in &xs {
            for y in &xs {
                let (ox, oy) = (
                    ExObj { ctx: a, aux: x.aux, body: x.body.clone() },
                    ExObj { ctx: a, aux: y.aux, body: y.body.clone() },
                );
                assert_eq!(un.leq(a, x, y).unwrap(), ex_op.leq(a, &oy, &ox).unwrap());
            }
        }
    }
}

#[test]
fn orders_are_preorders_with_composable_witnesses() {
    let ex = ExCompletion::new(subsets());
    for n in 0..=2 {
        let a = FinSet(n);
        let xs = ex.fiber(a).unwrap();
        for x in &xs {
            assert!(ex.leq(a, x, x).unwrap());
            for y in &xs {
                let Some(f) = ex.leq_witness(a, x, y).unwrap() else { continue };
                for z in &xs {
                    let Some(g) = ex.leq_witness(a, y, z).unwrap() else { continue };
                    let h = ex_compose(a, x.aux, &f, &g);
                    let moved = ex.inner().reindex(&graph_over(a, x.aux, &h), &z.body).unwrap();
                    assert!(x.body.subset_of(&moved), "{x} {y} {z}");
                }
            }
        }
    }
    let dial = DialCompletion::new(subsets());
    for n in 0..=1 {
        let i = FinSet(n);
        let xs = dial.fiber(i).unwrap();
        for x in &xs {
            let identity = DialWitness {
                f0: crate::finbase::proj2(i, x.witness),
                f1: FinMap::from_fn(i.times(x.witness).times(x.counter), x.counter, |k| k % x.counter.0),
            };
            assert!(dial.certifies(x, x, &identity).unwrap());
            for y in &xs {
                let Some(w1) = dial.leq_witness(i, x, y).unwrap() else { continue };
                for z in &xs {
                    let Some(w2) = dial.leq_witness(i, y, z).unwrap() else { continue };
                    assert!(dial.certifies(x, z, &w1.then(&w2, x, y, z)).unwrap(), "{x} {y} {z}");
                }
            }
        }
    }
}

#[test]
fn reindexing_is_functorial_and_monotone() {
    let w = Window::new(1);
    assert!(check_indexed_preorder(&ExCompletion::new(subsets()), &w).passed());
    assert!(check_indexed_preorder(&UnCompletion::new(subsets()), &w).passed());
    assert!(check_indexed_preorder(&DialCompletion::new(subsets()), &w).passed());
}

#[test]
fn projection_quantifiers_are_adjoint() {
    let (a, b) = (FinSet(1), FinSet(2));
    let ab = a.times(b);
    let pi = proj1(a, b);
    let dial = DialCompletion::new(subsets());
    let over_ab = dial.fiber(ab).unwrap();
    let over_a = dial.fiber(a).unwrap();
    for alpha in &over_ab {
        let ex = exists_proj(&dial, a, b, alpha).unwrap();
        let un = forall_proj(&dial, a, b, alpha).unwrap();
        for beta in &over_a {
            let pulled = dial.reindex(&pi, beta).unwrap();
            assert_eq!(dial.leq(a, &ex, beta).unwrap(), dial.leq(ab, alpha, &pulled).unwrap());
            assert_eq!(dial.leq(ab, &pulled, alpha).unwrap(), dial.leq(a, beta, &un).unwrap());
        }
    }
    let ex = ExCompletion::new(subsets());
    let un = UnCompletion::new(subsets());
    for alpha in ex.fiber(ab).unwrap() {
        let q = exists_proj(&ex, a, b, &alpha).unwrap();
        for beta in ex.fiber(a).unwrap() {
            let pulled = ex.reindex(&pi, &beta).unwrap();
            assert_eq!(ex.leq(a, &q, &beta).unwrap(), ex.leq(ab, &alpha, &pulled).unwrap());
        }
    }
    for alpha in un.fiber(ab).unwrap() {
        let q = forall_proj(&un, a, b, &alpha).unwrap();
        for beta in un.fiber(a).unwrap() {
            let pulled = un.reindex(&pi, &beta).unwrap();
            assert_eq!(un.leq(ab, &pulled, &alpha).unwrap(), un.leq(a, &beta, &q).unwrap());
        }
    }
}

#[test]
fn dialectica_order_examples() {
    let dial = DialCompletion::new(subsets());
    let i = FinSet(2);
    let (u, x) = (FinSet(2), FinSet(1));
    let bottom = DialObj { ctx: i, witness: u, counter: x, body: set(4, &[]) };
    let top = DialObj { ctx: i, witness: FinSet(1), counter: FinSet(2), body: Bits::full(4) };
    for y in dial.fiber(i).unwrap() {
        if y.witness.0 > 0 && y.counter.0 > 0 {
            assert!(dial.leq(i, &bottom, &y).unwrap(), "{y}");
        }
        let w = dial.leq_witness(i, &y, &top).unwrap();
        if y.counter.0 > 0 {
            let w = w.unwrap();
            assert!(w.f0.table().iter().all(|&t| t == 0));
        }
    }
    assert!(dial.fiber(FinSet::ONE).unwrap().iter().all(|e| e.witness.0 <= 2 && e.counter.0 <= 2));
}

/// Hom-sets of the Dialectica category over relations `α ⊆ U × X`,
/// searched directly on tables.
fn de_paiva_hom(u: usize, x: usize, alpha: &[bool], v: usize, y: usize, beta: &[bool]) -> bool {
    let tables = |dom: usize, cod: usize| -> Vec<Vec<usize>> {
        let mut out = vec![vec![]];
        for _ in 0..dom {
            out = out.into_iter().flat_map(|t| (0..cod).map(move |c| [t.clone(), vec![c]].concat())).collect();
        }
        out
    };
    tables(u, v).iter().any(|f| {
        tables(u * y, x).iter().any(|big_f| {
            (0..u).all(|a| (0..y).all(|b| !alpha[a * x + big_f[a * y + b]] || beta[f[a] * y + b]))
        })
    })
}

#[test]
fn terminal_fiber_is_the_poset_reflection_of_de_paiva() {
    let dial = DialCompletion::new(subsets());
    let one = FinSet::ONE;
    let xs = dial.fiber(one).unwrap();
    let rel = |e: &DialObj<Bits>| (0..e.body.len()).map(|k| e.body.contains(k)).collect::<Vec<bool>>();
    for p in &xs {
        for q in &xs {
            let expected = de_paiva_hom(p.witness.0, p.counter.0, &rel(p), q.witness.0, q.counter.0, &rel(q));
            assert_eq!(dial.leq(one, p, q).unwrap(), expected, "{p} <= {q}");
        }
    }
    // strict bottom, the two embedded truth values and the empty-counter top
    assert_eq!(dial.classes(one).unwrap().len(), 4);
}

#[test]
fn universal_projection_uses_exponential_sorts() {
    let dial = DialCompletion::new(subsets());
    let (a, b) = (FinSet(1), FinSet(2));
    let alpha = DialObj { ctx: b, witness: FinSet(2), counter: FinSet(1), body: set(4, &[0, 3]) };
    let q = forall_proj(&dial, a, b, &alpha).unwrap();
    assert_eq!((q.witness, q.counter), (FinSet(4), FinSet(2)));
    // only h = identity (code 2) satisfies ev(h, b) = b
    let expected = DialObj { ctx: a, witness: FinSet(1), counter: FinSet(1), body: Bits::full(1) };
    assert!(dial.leq(a, &expected, &q).unwrap());
    let w = dial.leq_witness(a, &expected, &q).unwrap().unwrap();
    assert_eq!(w.f0.table(), &[2]);
}

#[test]
fn iso_check_passes_in_small_windows() {
    let r = dial_iso_check(&subsets(), &Window::new(1)).unwrap();
    assert!(r.passed(), "{}", r.render());
    let r = dial_iso_check(&TrivialDoctrine::new(BaseCat::new(2)), &Window::new(2)).unwrap();
    assert!(r.passed(), "{}", r.render());
    let e = DialObj { ctx: FinSet(2), witness: FinSet(2), counter: FinSet(1), body: set(4, &[1]) };
    let mapped = dial_to_exun(&e);
    assert_eq!((mapped.aux, mapped.body.ctx, mapped.body.aux), (FinSet(2), FinSet(4), FinSet(1)));
}

#[test]
fn unit_auxiliary_sorts_represent_every_dialectica_class() {
    let full = DialCompletion::new(subsets());
    let slim = DialCompletion::new(subsets()).with_aux_cap(1);
    for i in (0..=2).map(FinSet) {
        let (big, small) = (full.classes(i).unwrap(), slim.classes(i).unwrap());
        assert_eq!(big.len(), small.len(), "over {i}");
        for e in big.iter() {
            let hit = small.iter().any(|s| crate::doctrine::equivalent(&full, i, e, s).unwrap());
            assert!(hit, "{e} over {i} has no representative with unit sorts");
        }
    }
}
