//! Doctrines over finite sets: indexed finite preorders with monotone
//! reindexing, quantifier adjoints and Heyting operations.
//!
//! Anything a doctrine does not supply directly is computed by scanning
//! fibers. Selections are made among equivalence-class representatives,
//! each being the lowest-id element of its class.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finbase::{diagonal, proj1, pullback, BaseCat, FinMap, FinSet};

mod check;
mod op;
mod subset;
mod table;
mod trivial;

pub use check::{beck_chevalley_check, check_hyperdoctrine, check_indexed_preorder, Quantifier, Square};
pub use op::OpDoctrine;
pub use subset::{Bits, SubsetDoctrine};
pub use table::{fiber_listing, parse_map, TableDoctrine, TableElem, TableSpec};
pub use trivial::{Point, TrivialDoctrine};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct Capabilities {
    pub has_exists: bool,
    pub has_forall: bool,
    pub has_heyting: bool,
    pub has_equality: bool,
}

impl Capabilities {
    pub const ALL: Capabilities = Capabilities {
        has_exists: true,
        has_forall: true,
        has_heyting: true,
        has_equality: true,
    };
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HeytingOp {
    Meet,
    Join,
    Impl,
    Top,
    Bot,
}

impl HeytingOp {
    pub fn arity(self) -> usize {
        match self {
            HeytingOp::Top | HeytingOp::Bot => 0,
            _ => 2,
        }
    }
}

/// A doctrine over the skeletal category of finite sets.
///
/// `fiber` lists the elements of the window over an object in id order;
/// elements outside the window (for instance with larger auxiliary sorts)
/// are still valid arguments to every operation.
pub trait Doctrine {
    type Elem: Clone + Eq + Ord + Hash + fmt::Debug + fmt::Display;

    fn name(&self) -> String;
    fn base(&self) -> &BaseCat;
    fn capabilities(&self) -> Capabilities;

    /// Largest object with a fiber, if bounded.
    fn max_object(&self) -> Option<usize> {
        None
    }

    fn fiber(&self, obj: FinSet) -> Result<Vec<Self::Elem>>;
    fn leq(&self, obj: FinSet, lhs: &Self::Elem, rhs: &Self::Elem) -> Result<bool>;
    fn reindex(&self, f: &FinMap, e: &Self::Elem) -> Result<Self::Elem>;

    /// A printable certificate of `lhs ≤ rhs`, or `None` when it fails.
    fn leq_certificate(&self, obj: FinSet, lhs: &Self::Elem, rhs: &Self::Elem) -> Result<Option<String>> {
        Ok(self.leq(obj, lhs, rhs)?.then(|| "holds".to_string()))
    }

    /// One representative per equivalence class of the window, in id order.
    fn classes(&self, obj: FinSet) -> Result<Arc<Vec<Self::Elem>>> {
        compute_classes(self, obj).map(Arc::new)
    }

    fn exists_fast(&self, _f: &FinMap, _e: &Self::Elem) -> Option<Result<Self::Elem>> {
        None
    }

    fn forall_fast(&self, _f: &FinMap, _e: &Self::Elem) -> Option<Result<Self::Elem>> {
        None
    }

    /// `∃` along the first projection `A × B → A`.
    fn exists_projection(&self, _a: FinSet, _b: FinSet, _e: &Self::Elem) -> Option<Result<Self::Elem>> {
        None
    }

    /// `∀` along the first projection `A × B → A`.
    fn forall_projection(&self, _a: FinSet, _b: FinSet, _e: &Self::Elem) -> Option<Result<Self::Elem>> {
        None
    }

    fn heyting_fast(&self, _obj: FinSet, _op: HeytingOp, _args: &[Self::Elem]) -> Option<Result<Self::Elem>> {
        None
    }

    fn equality_fast(&self, _a: FinSet) -> Option<Result<Self::Elem>> {
        None
    }

    /// True when every fiber is the powerset of its carrier ordered by
    /// inclusion and reindexing is preimage.
    fn is_pointwise(&self) -> bool {
        false
    }

    /// Membership of a point; meaningful only for pointwise doctrines.
    fn holds_at(&self, _e: &Self::Elem, _point: usize) -> bool {
        false
    }

    /// A candidate `(A, β)` with `e ⊣⊢ ∃_π β` and `β` existential-free.
    fn existential_cover_hint(&self, _obj: FinSet, _e: &Self::Elem) -> Option<(FinSet, Self::Elem)> {
        None
    }

    /// A candidate `(A, β)` with `e ⊣⊢ ∀_π β` and `β` quantifier-free.
    fn universal_cover_hint(&self, _obj: FinSet, _e: &Self::Elem) -> Option<(FinSet, Self::Elem)> {
        None
    }
}

/// Memo table for class representatives, one entry per object.
pub struct ClassCache<E>(Mutex<HashMap<usize, Arc<Vec<E>>>>);

impl<E> Default for ClassCache<E> {
    fn default() -> Self {
        ClassCache(Mutex::new(HashMap::new()))
    }
}

impl<E> fmt::Debug for ClassCache<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("ClassCache")
    }
}

impl<E: Clone> ClassCache<E> {
    pub fn get_or(&self, obj: FinSet, compute: impl FnOnce() -> Result<Vec<E>>) -> Result<Arc<Vec<E>>> {
        if let Some(hit) = self.0.lock().expect("cache lock").get(&obj.0) {
            return Ok(hit.clone());
        }
        let fresh = Arc::new(compute()?);
        self.0.lock().expect("cache lock").entry(obj.0).or_insert(fresh.clone());
        Ok(fresh)
    }
}

pub fn equivalent<P: Doctrine + ?Sized>(p: &P, obj: FinSet, a: &P::Elem, b: &P::Elem) -> Result<bool> {
    Ok(p.leq(obj, a, b)? && p.leq(obj, b, a)?)
}

/// Lowest-id representatives of the equivalence classes of the window.
pub fn compute_classes<P: Doctrine + ?Sized>(p: &P, obj: FinSet) -> Result<Vec<P::Elem>> {
    let mut reps: Vec<P::Elem> = Vec::new();
    'next: for e in p.fiber(obj)? {
        for r in &reps {
            if equivalent(p, obj, &e, r)? {
                continue 'next;
            }
        }
        reps.push(e);
    }
    Ok(reps)
}

/// The representative equivalent to `e`, if `e`'s class meets the window.
pub fn class_of<P: Doctrine + ?Sized>(p: &P, obj: FinSet, e: &P::Elem) -> Result<Option<P::Elem>> {
    for r in p.classes(obj)?.iter() {
        if equivalent(p, obj, e, r)? {
            return Ok(Some(r.clone()));
        }
    }
    Ok(None)
}

/// The element of `cands` above all others, if any.
pub fn greatest<P: Doctrine + ?Sized>(p: &P, obj: FinSet, cands: &[P::Elem]) -> Result<Option<P::Elem>> {
    'cand: for c in cands {
        for d in cands {
            if !p.leq(obj, d, c)? {
                continue 'cand;
            }
        }
        return Ok(Some(c.clone()));
    }
    Ok(None)
}

/// The element of `cands` below all others, if any.
pub fn least<P: Doctrine + ?Sized>(p: &P, obj: FinSet, cands: &[P::Elem]) -> Result<Option<P::Elem>> {
    'cand: for c in cands {
        for d in cands {
            if !p.leq(obj, c, d)? {
                continue 'cand;
            }
        }
        return Ok(Some(c.clone()));
    }
    Ok(None)
}

/// Left adjoint to reindexing along `f`.
pub fn exists_along<P: Doctrine + ?Sized>(p: &P, f: &FinMap, e: &P::Elem) -> Result<P::Elem> {
    if !p.capabilities().has_exists {
        return Err(Error::NoAdjoint(format!("{} has no existential quantifier", p.name())));
    }
    if let Some(r) = p.exists_fast(f, e) {
        return r;
    }
    if let Some(b) = f.as_first_projection() {
        if let Some(r) = p.exists_projection(f.cod(), b, e) {
            return r;
        }
    }
    if *f == FinMap::identity(f.dom()) {
        return Ok(e.clone());
    }
    let reps = p.classes(f.cod())?;
    let mut sat = Vec::new();
    for b in reps.iter() {
        if p.leq(f.dom(), e, &p.reindex(f, b)?)? {
            sat.push(b.clone());
        }
    }
    least(p, f.cod(), &sat)?
        .ok_or_else(|| Error::NoAdjoint(format!("no least element for ∃ along {f} of {e}")))
}

/// Right adjoint to reindexing along `f`.
pub fn forall_along<P: Doctrine + ?Sized>(p: &P, f: &FinMap, e: &P::Elem) -> Result<P::Elem> {
    if !p.capabilities().has_forall {
        return Err(Error::NoAdjoint(format!("{} has no universal quantifier", p.name())));
    }
    if let Some(r) = p.forall_fast(f, e) {
        return r;
    }
    if let Some(b) = f.as_first_projection() {
        if let Some(r) = p.forall_projection(f.cod(), b, e) {
            return r;
        }
    }
    if *f == FinMap::identity(f.dom()) {
        return Ok(e.clone());
    }
    let reps = p.classes(f.cod())?;
    let mut sat = Vec::new();
    for b in reps.iter() {
        if p.leq(f.dom(), &p.reindex(f, b)?, e)? {
            sat.push(b.clone());
        }
    }
    greatest(p, f.cod(), &sat)?
        .ok_or_else(|| Error::NoAdjoint(format!("no greatest element for ∀ along {f} of {e}")))
}

/// `∃b. e(a, b)` for `e` over `A × B`.
pub fn exists_proj<P: Doctrine + ?Sized>(p: &P, a: FinSet, b: FinSet, e: &P::Elem) -> Result<P::Elem> {
    if !p.capabilities().has_exists {
        return Err(Error::NoAdjoint(format!("{} has no existential quantifier", p.name())));
    }
    match p.exists_projection(a, b, e) {
        Some(r) => r,
        None => exists_along(p, &proj1(a, b), e),
    }
}

/// `∀b. e(a, b)` for `e` over `A × B`.
pub fn forall_proj<P: Doctrine + ?Sized>(p: &P, a: FinSet, b: FinSet, e: &P::Elem) -> Result<P::Elem> {
    if !p.capabilities().has_forall {
        return Err(Error::NoAdjoint(format!("{} has no universal quantifier", p.name())));
    }
    match p.forall_projection(a, b, e) {
        Some(r) => r,
        None => forall_along(p, &proj1(a, b), e),
    }
}

/// Heyting operation in the fiber over `obj`.
pub fn heyting<P: Doctrine + ?Sized>(p: &P, obj: FinSet, op: HeytingOp, args: &[P::Elem]) -> Result<P::Elem> {
    if args.len() != op.arity() {
        return Err(Error::Invalid(format!("{op:?} takes {} arguments", op.arity())));
    }
    if !p.capabilities().has_heyting {
        return Err(Error::NoSuchElement(format!("{op:?}: {} has no Heyting structure", p.name())));
    }
    if let Some(r) = p.heyting_fast(obj, op, args) {
        return r;
    }
    let reps = p.classes(obj)?;
    let missing = || Error::NoSuchElement(format!("{op:?} over {obj} in {}", p.name()));
    match op {
        HeytingOp::Top => greatest(p, obj, &reps)?.ok_or_else(missing),
        HeytingOp::Bot => least(p, obj, &reps)?.ok_or_else(missing),
        HeytingOp::Meet => {
            let mut lower = Vec::new();
            for c in reps.iter() {
                if p.leq(obj, c, &args[0])? && p.leq(obj, c, &args[1])? {
                    lower.push(c.clone());
                }
            }
            greatest(p, obj, &lower)?.ok_or_else(missing)
        }
        HeytingOp::Join => {
            let mut upper = Vec::new();
            for c in reps.iter() {
                if p.leq(obj, &args[0], c)? && p.leq(obj, &args[1], c)? {
                    upper.push(c.clone());
                }
            }
            least(p, obj, &upper)?.ok_or_else(missing)
        }
        HeytingOp::Impl => {
            let mut below = Vec::new();
            for c in reps.iter() {
                let m = heyting(p, obj, HeytingOp::Meet, &[c.clone(), args[0].clone()])?;
                if p.leq(obj, &m, &args[1])? {
                    below.push(c.clone());
                }
            }
            greatest(p, obj, &below)?.ok_or_else(missing)
        }
    }
}

pub fn top<P: Doctrine + ?Sized>(p: &P, obj: FinSet) -> Result<P::Elem> {
    heyting(p, obj, HeytingOp::Top, &[])
}

pub fn bot<P: Doctrine + ?Sized>(p: &P, obj: FinSet) -> Result<P::Elem> {
    heyting(p, obj, HeytingOp::Bot, &[])
}

pub fn meet<P: Doctrine + ?Sized>(p: &P, obj: FinSet, a: &P::Elem, b: &P::Elem) -> Result<P::Elem> {
    heyting(p, obj, HeytingOp::Meet, &[a.clone(), b.clone()])
}

pub fn join<P: Doctrine + ?Sized>(p: &P, obj: FinSet, a: &P::Elem, b: &P::Elem) -> Result<P::Elem> {
    heyting(p, obj, HeytingOp::Join, &[a.clone(), b.clone()])
}

pub fn implies<P: Doctrine + ?Sized>(p: &P, obj: FinSet, a: &P::Elem, b: &P::Elem) -> Result<P::Elem> {
    heyting(p, obj, HeytingOp::Impl, &[a.clone(), b.clone()])
}

/// `a → ⊥`.
pub fn negate<P: Doctrine + ?Sized>(p: &P, obj: FinSet, a: &P::Elem) -> Result<P::Elem> {
    implies(p, obj, a, &bot(p, obj)?)
}

/// `δ_A = ∃_Δ ⊤_A`.
pub fn equality_predicate<P: Doctrine + ?Sized>(p: &P, a: FinSet) -> Result<P::Elem> {
    if let Some(r) = p.equality_fast(a) {
        return r;
    }
    if !p.capabilities().has_exists {
        return Err(Error::NoAdjoint(format!("{} has neither equality nor ∃", p.name())));
    }
    exists_along(p, &diagonal(a), &top(p, a)?)
}

/// Whether a square is a pullback of its lower cospan `f`, `g`.
pub(crate) fn is_pullback(sq: &Square) -> Result<bool> {
    let (pb, _, _) = pullback(&sq.f, &sq.g)?;
    let commutes = sq.h.then(&sq.f)? == sq.k.then(&sq.g)?;
    Ok(commutes && pb == sq.h.dom() && sq.h.pair(&sq.k).is_injective())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finbase::FinSet;

    fn subsets() -> SubsetDoctrine {
        SubsetDoctrine::new(BaseCat::new(3))
    }

    fn set(n: usize, xs: &[usize]) -> Bits {
        Bits::from_indices(n, xs.iter().copied())
    }

    #[test]
    fn scanning_agrees_with_closed_forms() {
        // The generic scans, run through a wrapper that hides the fast paths,
        // must reproduce image, dual image and the Heyting operations.
        let p = subsets();
        let slow = OpDoctrine::new(OpDoctrine::new(subsets()));
        let two = FinSet(2);
        let objs = [FinSet(0), FinSet(1), two, FinSet(3)];
        for &a in &objs {
            for &b in &objs[..3] {
                for f in p.base().maps(a, b).unwrap() {
                    for e in p.fiber(a).unwrap() {
                        assert_eq!(exists_along(&p, &f, &e).unwrap(), exists_along(&slow, &f, &e).unwrap());
                        assert_eq!(forall_along(&p, &f, &e).unwrap(), forall_along(&slow, &f, &e).unwrap());
                    }
                }
            }
        }
        for x in p.fiber(two).unwrap() {
            for y in p.fiber(two).unwrap() {
                for op in [HeytingOp::Meet, HeytingOp::Join, HeytingOp::Impl] {
                    let args = [x.clone(), y.clone()];
                    assert_eq!(heyting(&p, two, op, &args).unwrap(), heyting(&slow, two, op, &args).unwrap());
                }
            }
        }
    }

    #[test]
    fn documented_values() {
        let p = subsets();
        let one = FinSet(1);
        let two = FinSet(2);
        let bang = FinMap::constant(two, one, 0);
        assert_eq!(exists_along(&p, &bang, &set(2, &[1])).unwrap(), set(1, &[0]));
        assert_eq!(forall_along(&p, &bang, &set(2, &[1])).unwrap(), set(1, &[]));
        assert_eq!(forall_along(&p, &bang, &set(2, &[0, 1])).unwrap(), set(1, &[0]));
        assert_eq!(exists_along(&p, &bang, &set(2, &[])).unwrap(), set(1, &[]));
        assert_eq!(implies(&p, two, &set(2, &[0]), &set(2, &[1])).unwrap(), set(2, &[1]));
        assert_eq!(implies(&p, two, &set(2, &[]), &set(2, &[1])).unwrap(), set(2, &[0, 1]));
        assert_eq!(equality_predicate(&p, two).unwrap(), set(4, &[0, 3]));
        assert_eq!(equality_predicate(&p, one).unwrap(), set(1, &[0]));
        assert_eq!(equality_predicate(&p, FinSet(0)).unwrap(), set(0, &[]));
        let c0 = FinMap::constant(two, two, 0);
        assert_eq!(p.reindex(&c0, &set(2, &[1])).unwrap(), set(2, &[]));
    }

    #[test]
    fn scanned_equality_is_the_diagonal() {
        let slow = OpDoctrine::new(OpDoctrine::new(subsets()));
        for n in 0..=2 {
            let d = equality_predicate(&slow, FinSet(n)).unwrap();
            assert_eq!(d, Bits::from_indices(n * n, (0..n).map(|i| i * n + i)));
        }
    }
}
