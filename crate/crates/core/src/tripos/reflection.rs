use super::comprehension::{BaseCategory, CompObj, Comprehension};
use super::{FiniteCategory, HomCache};
use crate::doctrine::{equality_predicate, meet, top, Doctrine};
use crate::error::{Error, Result};
use crate::finbase::{proj1, proj2, FinMap, FinSet};

/// A category of base maps with an internal equality on parallel pairs.
pub trait Elementary: FiniteCategory<Arr = FinMap> {
    /// Whether `f, g : a → b` are internally equal.
    fn identified(&self, a: &Self::Obj, b: &Self::Obj, f: &FinMap, g: &FinMap) -> Result<bool>;
}

impl<P: Doctrine> Elementary for BaseCategory<P> {
    /// `⊤ ≤ P_⟨f,g⟩ δ_B`.
    fn identified(&self, a: &FinSet, b: &FinSet, f: &FinMap, g: &FinMap) -> Result<bool> {
        let delta = equality_predicate(&self.p, *b)?;
        let pulled = self.p.reindex(&f.pair(g), &delta)?;
        self.p.leq(*a, &top(&self.p, *a)?, &pulled)
    }
}

impl<P: Doctrine> Elementary for Comprehension<P> {
    /// `α ≤ P_c⟨f,g⟩(δ_B ∧ β × β)`, the top of `P_c(A, α)` being `α`.
    fn identified(&self, a: &CompObj<P::Elem>, b: &CompObj<P::Elem>, f: &FinMap, g: &FinMap) -> Result<bool> {
        let bb = b.carrier.times(b.carrier);
        let left = self.p.reindex(&proj1(b.carrier, b.carrier), &b.pred)?;
        let right = self.p.reindex(&proj2(b.carrier, b.carrier), &b.pred)?;
        let beta2 = meet(&self.p, bb, &left, &right)?;
        let delta = meet(&self.p, bb, &equality_predicate(&self.p, b.carrier)?, &beta2)?;
        let pulled = self.reindex(a, &f.pair(g), &delta)?;
        self.p.leq(a.carrier, &a.pred, &pulled)
    }
}

/// The quotient of `C` by its internal equality, with lexicographically
/// least representatives.
#[derive(Debug)]
pub struct Extensional<C: Elementary> {
    pub inner: C,
    homs: HomCache<C::Obj, FinMap>,
}

pub fn extensional_reflection<C: Elementary>(inner: C) -> Extensional<C> {
    Extensional { inner, homs: HomCache::default() }
}

/// `Pred(P)`: the extensional reflection of the comprehension completion.
pub fn predicates_category<P: Doctrine>(p: P, cap: usize) -> Extensional<Comprehension<P>> {
    extensional_reflection(Comprehension { p, cap })
}

impl<C: Elementary> Extensional<C> {
    /// The representative of `f`'s class.
    pub fn canonical(&self, a: &C::Obj, b: &C::Obj, f: &FinMap) -> Result<FinMap> {
        for r in self.arrows(a, b)? {
            if self.inner.identified(a, b, &r, f)? {
                return Ok(r);
            }
        }
        Err(Error::Invalid(format!("{f} is not an arrow {a} -> {b}")))
    }
}

impl<C: Elementary> FiniteCategory for Extensional<C> {
    type Obj = C::Obj;
    type Arr = FinMap;

    fn name(&self) -> String {
        format!("extensional({})", self.inner.name())
    }

    fn objects(&self) -> Result<Vec<C::Obj>> {
        self.inner.objects()
    }

    fn arrows(&self, a: &C::Obj, b: &C::Obj) -> Result<Vec<FinMap>> {
        let h = self.homs.get_or(a, b, || {
            let mut reps: Vec<FinMap> = Vec::new();
            'next: for f in self.inner.arrows(a, b)? {
                for r in &reps {
                    if self.inner.identified(a, b, r, &f)? {
                        continue 'next;
                    }
                }
                reps.push(f);
            }
            Ok(reps)
        })?;
        Ok(h.as_ref().clone())
    }

    fn identity(&self, a: &C::Obj) -> Result<FinMap> {
        self.canonical(a, a, &self.inner.identity(a)?)
    }

    fn compose(&self, a: &C::Obj, b: &C::Obj, c: &C::Obj, f: &FinMap, g: &FinMap) -> Result<FinMap> {
        let fg = self.inner.compose(a, b, c, f, g)?;
        self.canonical(a, c, &fg)
    }

    fn same(&self, a: &C::Obj, b: &C::Obj, f: &FinMap, g: &FinMap) -> Result<bool> {
        self.inner.identified(a, b, f, g)
    }

    fn is_arrow(&self, a: &C::Obj, b: &C::Obj, f: &FinMap) -> Result<bool> {
        self.inner.is_arrow(a, b, f)
    }
}
