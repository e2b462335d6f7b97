use std::fmt;

use super::{FiniteCategory, HomCache};
use crate::doctrine::{exists_proj, meet, top, Doctrine};
use crate::error::{Error, Result};
use crate::finbase::{FinSet, Shape};

/// A partial equivalence relation `(A, ρ)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Per<E> {
    pub carrier: FinSet,
    pub rel: E,
}

impl<E: fmt::Display> fmt::Display for Per<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.carrier, self.rel)
    }
}

/// The defining conditions of a functional relation, in order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Condition {
    Strict,
    LeftExtensional,
    RightExtensional,
    SingleValued,
    Total,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Condition::Strict => "strict",
            Condition::LeftExtensional => "left-extensional",
            Condition::RightExtensional => "right-extensional",
            Condition::SingleValued => "single-valued",
            Condition::Total => "total",
        })
    }
}

/// `P_t e` along the map `(x_0, .., x_{n-1}) ↦ (x_{picks[0]}, ..)` out of
/// the product `dom`.
pub(crate) fn pull<P: Doctrine + ?Sized>(p: &P, dom: &[FinSet], picks: &[usize], e: &P::Elem) -> Result<P::Elem> {
    let src = Shape::new(dom.iter().map(|s| s.size()));
    let dst = Shape::new(picks.iter().map(|&i| dom[i].size()));
    let t = src.map_to(&dst, |x, out| {
        for (o, &i) in out.iter_mut().zip(picks) {
            *o = x[i];
        }
    });
    p.reindex(&t, e)
}

pub(crate) fn product(dom: &[FinSet]) -> FinSet {
    Shape::new(dom.iter().map(|s| s.size())).object()
}

/// `(φ;ψ)(a, c) = ∃b. φ(a, b) ∧ ψ(b, c)`.
pub fn relational_composite<P: Doctrine + ?Sized>(
    p: &P,
    a: FinSet,
    b: FinSet,
    c: FinSet,
    phi: &P::Elem,
    psi: &P::Elem,
) -> Result<P::Elem> {
    let acb = [a, c, b];
    let body = meet(p, product(&acb), &pull(p, &acb, &[0, 2], phi)?, &pull(p, &acb, &[2, 1], psi)?)?;
    exists_proj(p, a.times(c), b, &body)
}

/// The category `T_P` of partial equivalence relations and functional
/// relations, over carriers `<= cap`.
///
/// Parallel arrows are identified when they agree below the existence
/// predicate `ρ(a, a)` of their source.
#[derive(Debug)]
pub struct TriposToTopos<P: Doctrine> {
    pub p: P,
    pub cap: usize,
    homs: HomCache<Per<P::Elem>, P::Elem>,
}

pub fn tripos_to_topos<P: Doctrine>(p: P, cap: usize) -> TriposToTopos<P> {
    TriposToTopos { p, cap, homs: HomCache::default() }
}

impl<P: Doctrine> TriposToTopos<P> {
    /// `ρ(a, a)`.
    pub fn existence(&self, a: &Per<P::Elem>) -> Result<P::Elem> {
        pull(&self.p, &[a.carrier], &[0, 0], &a.rel)
    }

    fn entails(&self, dom: &[FinSet], lhs: &[(&[usize], &P::Elem)], rhs: (&[usize], &P::Elem)) -> Result<bool> {
        let obj = product(dom);
        let mut acc = top(&self.p, obj)?;
        for (picks, e) in lhs {
            acc = meet(&self.p, obj, &acc, &pull(&self.p, dom, picks, e)?)?;
        }
        self.p.leq(obj, &acc, &pull(&self.p, dom, rhs.0, rhs.1)?)
    }

    /// Symmetry and transitivity of `rel` on `carrier`.
    pub fn is_per(&self, carrier: FinSet, rel: &P::Elem) -> Result<bool> {
        let a = carrier;
        Ok(self.entails(&[a, a], &[(&[0, 1], rel)], (&[1, 0], rel))?
            && self.entails(&[a, a, a], &[(&[0, 1], rel), (&[1, 2], rel)], (&[0, 2], rel))?)
    }

    /// The first condition `phi` violates as an arrow `a → b`.
    pub fn violated(&self, a: &Per<P::Elem>, b: &Per<P::Elem>, phi: &P::Elem) -> Result<Option<Condition>> {
        let (ca, cb) = (a.carrier, b.carrier);
        let (rho, sigma) = (&a.rel, &b.rel);
        if !self.entails(&[ca, cb], &[(&[0, 1], phi), (&[0, 0], rho)], (&[1, 1], sigma))? {
            return Ok(Some(Condition::Strict));
        }
        if !self.entails(&[ca, ca, cb], &[(&[0, 1], rho), (&[0, 2], phi)], (&[1, 2], phi))? {
            return Ok(Some(Condition::LeftExtensional));
        }
        if !self.entails(&[ca, cb, cb], &[(&[1, 2], sigma), (&[0, 1], phi)], (&[0, 2], phi))? {
            return Ok(Some(Condition::RightExtensional));
        }
        if !self.entails(&[ca, cb, cb], &[(&[0, 1], phi), (&[0, 2], phi)], (&[1, 2], sigma))? {
            return Ok(Some(Condition::SingleValued));
        }
        let total = exists_proj(&self.p, ca, cb, phi)?;
        if !self.p.leq(ca, &self.existence(a)?, &total)? {
            return Ok(Some(Condition::Total));
        }
        Ok(None)
    }

    /// The representative of the class of `phi : a → b`, if it is an arrow.
    pub fn canonical(&self, a: &Per<P::Elem>, b: &Per<P::Elem>, phi: &P::Elem) -> Result<Option<P::Elem>> {
        for r in self.arrows(a, b)? {
            if self.same(a, b, &r, phi)? {
                return Ok(Some(r));
            }
        }
        Ok(None)
    }
}

impl<P: Doctrine> FiniteCategory for TriposToTopos<P> {
    type Obj = Per<P::Elem>;
    type Arr = P::Elem;

    fn name(&self) -> String {
        format!("T({})", self.p.name())
    }

    fn objects(&self) -> Result<Vec<Self::Obj>> {
        let mut out = Vec::new();
        for n in 0..=self.cap {
            let a = FinSet(n);
            for rel in self.p.classes(a.times(a))?.iter() {
                if self.is_per(a, rel)? {
                    out.push(Per { carrier: a, rel: rel.clone() });
                }
            }
        }
        Ok(out)
    }

    fn arrows(&self, a: &Self::Obj, b: &Self::Obj) -> Result<Vec<P::Elem>> {
        let h = self.homs.get_or(a, b, || {
            let mut reps: Vec<P::Elem> = Vec::new();
            'next: for phi in self.p.classes(a.carrier.times(b.carrier))?.iter() {
                if self.violated(a, b, phi)?.is_some() {
                    continue;
                }
                for r in &reps {
                    if self.same(a, b, r, phi)? {
                        continue 'next;
                    }
                }
                reps.push(phi.clone());
            }
            Ok(reps)
        })?;
        Ok(h.as_ref().clone())
    }

    fn identity(&self, a: &Self::Obj) -> Result<P::Elem> {
        self.canonical(a, a, &a.rel)?
            .ok_or_else(|| Error::Invalid(format!("{a} is not its own identity")))
    }

    fn compose(&self, a: &Self::Obj, b: &Self::Obj, c: &Self::Obj, f: &P::Elem, g: &P::Elem) -> Result<P::Elem> {
        let fg = relational_composite(&self.p, a.carrier, b.carrier, c.carrier, f, g)?;
        Ok(self.canonical(a, c, &fg)?.unwrap_or(fg))
    }

    fn same(&self, a: &Self::Obj, b: &Self::Obj, f: &P::Elem, g: &P::Elem) -> Result<bool> {
        let ab = a.carrier.times(b.carrier);
        let ex = pull(&self.p, &[a.carrier, b.carrier], &[0, 0], &a.rel)?;
        let (f, g) = (meet(&self.p, ab, &ex, f)?, meet(&self.p, ab, &ex, g)?);
        Ok(self.p.leq(ab, &f, &g)? && self.p.leq(ab, &g, &f)?)
    }

    fn is_arrow(&self, a: &Self::Obj, b: &Self::Obj, f: &P::Elem) -> Result<bool> {
        Ok(self.violated(a, b, f)?.is_none())
    }
}
