use std::fmt;

use super::FiniteCategory;
use crate::doctrine::{meet, Doctrine};
use crate::error::Result;
use crate::finbase::{FinMap, FinSet};

/// The base category of a doctrine, restricted to carriers `<= cap`.
#[derive(Debug, Clone)]
pub struct BaseCategory<P> {
    pub p: P,
    pub cap: usize,
}

impl<P: Doctrine> BaseCategory<P> {
    pub fn new(p: P, cap: usize) -> Self {
        BaseCategory { p, cap }
    }
}

impl<P: Doctrine> FiniteCategory for BaseCategory<P> {
    type Obj = FinSet;
    type Arr = FinMap;

    fn name(&self) -> String {
        format!("base({})", self.p.name())
    }

    fn objects(&self) -> Result<Vec<FinSet>> {
        Ok((0..=self.cap).map(FinSet).collect())
    }

    fn arrows(&self, a: &FinSet, b: &FinSet) -> Result<Vec<FinMap>> {
        Ok(self.p.base().maps(*a, *b)?.collect())
    }

    fn identity(&self, a: &FinSet) -> Result<FinMap> {
        Ok(FinMap::identity(*a))
    }

    fn compose(&self, _: &FinSet, _: &FinSet, _: &FinSet, f: &FinMap, g: &FinMap) -> Result<FinMap> {
        f.then(g)
    }

    fn same(&self, _: &FinSet, _: &FinSet, f: &FinMap, g: &FinMap) -> Result<bool> {
        Ok(f == g)
    }
}

/// An object `(A, α)` of the comprehension completion.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CompObj<E> {
    pub carrier: FinSet,
    pub pred: E,
}

impl<E: fmt::Display> fmt::Display for CompObj<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.carrier, self.pred)
    }
}

/// The comprehension completion `G_P` together with its doctrine `P_c`.
///
/// Objects are `(A, α)` for `α` ranging over class representatives of
/// `P(A)`; arrows `(A, α) → (B, β)` are base maps `f` with `α ≤ P_f β`.
#[derive(Debug, Clone)]
pub struct Comprehension<P> {
    pub p: P,
    pub cap: usize,
}

pub fn comprehension_completion<P: Doctrine>(p: P, cap: usize) -> Comprehension<P> {
    Comprehension { p, cap }
}

impl<P: Doctrine> Comprehension<P> {
    /// `P_c(A, α)`: the classes of `P(A)` below `α`.
    pub fn fiber(&self, obj: &CompObj<P::Elem>) -> Result<Vec<P::Elem>> {
        let mut out = Vec::new();
        for g in self.p.classes(obj.carrier)?.iter() {
            if self.p.leq(obj.carrier, g, &obj.pred)? {
                out.push(g.clone());
            }
        }
        Ok(out)
    }

    /// `P_c(f)(γ) = P_f γ ∧ α` for `f : (A, α) → (B, β)` and `γ ∈ P_c(B, β)`.
    pub fn reindex(&self, src: &CompObj<P::Elem>, f: &FinMap, gamma: &P::Elem) -> Result<P::Elem> {
        meet(&self.p, src.carrier, &self.p.reindex(f, gamma)?, &src.pred)
    }

    pub fn leq(&self, obj: &CompObj<P::Elem>, lhs: &P::Elem, rhs: &P::Elem) -> Result<bool> {
        self.p.leq(obj.carrier, lhs, rhs)
    }
}

impl<P: Doctrine> FiniteCategory for Comprehension<P> {
    type Obj = CompObj<P::Elem>;
    type Arr = FinMap;

    fn name(&self) -> String {
        format!("comprehension({})", self.p.name())
    }

    fn objects(&self) -> Result<Vec<Self::Obj>> {
        let mut out = Vec::new();
        for n in 0..=self.cap {
            for a in self.p.classes(FinSet(n))?.iter() {
                out.push(CompObj { carrier: FinSet(n), pred: a.clone() });
            }
        }
        Ok(out)
    }

    fn arrows(&self, a: &Self::Obj, b: &Self::Obj) -> Result<Vec<FinMap>> {
        let mut out = Vec::new();
        for f in self.p.base().maps(a.carrier, b.carrier)? {
            if self.is_arrow(a, b, &f)? {
                out.push(f);
            }
        }
        Ok(out)
    }

    fn identity(&self, a: &Self::Obj) -> Result<FinMap> {
        Ok(FinMap::identity(a.carrier))
    }

    fn compose(&self, _: &Self::Obj, _: &Self::Obj, _: &Self::Obj, f: &FinMap, g: &FinMap) -> Result<FinMap> {
        f.then(g)
    }

    fn same(&self, _: &Self::Obj, _: &Self::Obj, f: &FinMap, g: &FinMap) -> Result<bool> {
        Ok(f == g)
    }

    fn is_arrow(&self, a: &Self::Obj, b: &Self::Obj, f: &FinMap) -> Result<bool> {
        if f.dom() != a.carrier || f.cod() != b.carrier {
            return Ok(false);
        }
        self.p.leq(a.carrier, &a.pred, &self.p.reindex(f, &b.pred)?)
    }
}
