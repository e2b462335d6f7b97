use std::fmt;
use std::sync::Arc;

use super::DialObj;
use crate::doctrine::{compute_classes, Capabilities, ClassCache, Doctrine};
use crate::error::{Error, Result};
use crate::finbase::{eval_code, power, BaseCat, FinMap, FinSet, Shape};

/// Order witness `(f0, f1)` of `(I,U,X,α) ≤ (I,V,Y,β)`:
/// `f0 : I × U → V` and `f1 : I × U × Y → X`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DialWitness {
    pub f0: FinMap,
    pub f1: FinMap,
}

impl fmt::Display for DialWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "f0={} f1={}", self.f0, self.f1)
    }
}

impl DialWitness {
    /// `(i,u,y) ↦ (i,u,f1(i,u,y))`.
    fn counter_map(&self, ctx: FinSet, u: FinSet, x: FinSet, y: FinSet) -> FinMap {
        FinMap::from_fn(ctx.times(u).times(y), ctx.times(u).times(x), |k| {
            (k / y.0) * x.0 + self.f1.apply(k)
        })
    }

    /// `(i,u,y) ↦ (i,f0(i,u),y)`.
    fn witness_map(&self, ctx: FinSet, u: FinSet, v: FinSet, y: FinSet) -> FinMap {
        FinMap::from_fn(ctx.times(u).times(y), ctx.times(v).times(y), |k| {
            let iu = k / y.0;
            ((iu / u.0) * v.0 + self.f0.apply(iu)) * y.0 + k % y.0
        })
    }

    /// Composite witness of `a ≤ c` from `self : a ≤ b` and `next : b ≤ c`.
    pub fn then<E>(&self, next: &DialWitness, a: &DialObj<E>, b: &DialObj<E>, c: &DialObj<E>) -> DialWitness {
        let (u, v, z) = (a.witness.0, b.witness.0, c.counter.0);
        let y = b.counter.0;
        let iu = a.ctx.times(a.witness);
        let f0 = FinMap::from_fn(iu, c.witness, |k| next.f0.apply((k / u) * v + self.f0.apply(k)));
        let f1 = FinMap::from_fn(iu.times(c.counter), a.counter, |k| {
            let iu_k = k / z;
            let mid = (iu_k / u) * v + self.f0.apply(iu_k);
            self.f1.apply(iu_k * y + next.f1.apply(mid * z + k % z))
        });
        DialWitness { f0, f1 }
    }
}

/// Decides the Dialectica order by trying every `(f0, f1)` in lexicographic
/// order, comparing reindexed bodies in `inner`.
pub fn leq_dial_exhaustive<P: Doctrine + ?Sized>(
    inner: &P,
    lhs: &DialObj<P::Elem>,
    rhs: &DialObj<P::Elem>,
) -> Result<Option<DialWitness>> {
    let ctx = lhs.ctx;
    check_ctx(ctx, rhs.ctx)?;
    let (u, x, v, y) = (lhs.witness, lhs.counter, rhs.witness, rhs.counter);
    let iu = ctx.times(u);
    let iuy = iu.times(y);
    let n0 = power(v.0, iu.0).unwrap_or(u128::MAX);
    let n1 = power(x.0, iuy.0).unwrap_or(u128::MAX);
    inner.base().charge(n0.saturating_mul(n1))?;
    let f1s: Vec<FinMap> = inner.base().maps(iuy, x)?.collect();
    let probe = |f1: &FinMap| DialWitness { f0: FinMap::constant(FinSet::EMPTY, v, 0), f1: f1.clone() };
    let pulled_lhs = f1s
        .iter()
        .map(|f1| inner.reindex(&probe(f1).counter_map(ctx, u, x, y), &lhs.body))
        .collect::<Result<Vec<_>>>()?;
    for f0 in inner.base().maps(iu, v)? {
        let w = DialWitness { f0, f1: FinMap::constant(FinSet::EMPTY, x, 0) };
        let pulled_rhs = inner.reindex(&w.witness_map(ctx, u, v, y), &rhs.body)?;
        for (f1, l) in f1s.iter().zip(&pulled_lhs) {
            if inner.leq(iuy, l, &pulled_rhs)? {
                return Ok(Some(DialWitness { f0: w.f0, f1: f1.clone() }));
            }
        }
    }
    Ok(None)
}

fn check_ctx(obj: FinSet, ctx: FinSet) -> Result<()> {
    if obj == ctx {
        Ok(())
    } else {
        Err(Error::Invalid(format!("element over {ctx} used over {obj}")))
    }
}

/// The Dialectica completion `Dial(P)`.
#[derive(Debug)]
pub struct DialCompletion<P: Doctrine> {
    inner: P,
    aux_cap: usize,
    cache: ClassCache<DialObj<P::Elem>>,
}

impl<P: Doctrine> DialCompletion<P> {
    pub fn new(inner: P) -> Self {
        let aux_cap = inner.base().size_cap;
        DialCompletion { inner, aux_cap, cache: ClassCache::default() }
    }

    pub fn with_aux_cap(self, aux_cap: usize) -> Self {
        DialCompletion { aux_cap, cache: ClassCache::default(), ..self }
    }

    pub fn inner(&self) -> &P {
        &self.inner
    }

    pub fn aux_cap(&self) -> usize {
        self.aux_cap
    }

    /// `(I, 1, 1, α)`.
    pub fn embed(&self, ctx: FinSet, body: P::Elem) -> DialObj<P::Elem> {
        DialObj { ctx, witness: FinSet::ONE, counter: FinSet::ONE, body }
    }

    /// The lexicographically least witness of `lhs ≤ rhs`, if any.
    pub fn leq_witness(&self, obj: FinSet, lhs: &DialObj<P::Elem>, rhs: &DialObj<P::Elem>) -> Result<Option<DialWitness>> {
        check_ctx(obj, lhs.ctx)?;
        check_ctx(obj, rhs.ctx)?;
        if self.inner.is_pointwise() {
            Ok(self.leq_pointwise(lhs, rhs))
        } else {
            leq_dial_exhaustive(&self.inner, lhs, rhs)
        }
    }

    /// Picks `f0` pointwise as the least `v` admitting counterexamples for
    /// every `y`, then `f1` as the least such counterexample.
    fn leq_pointwise(&self, lhs: &DialObj<P::Elem>, rhs: &DialObj<P::Elem>) -> Option<DialWitness> {
        let holds = |e: &P::Elem, k: usize| self.inner.holds_at(e, k);
        let (u, x, v, y) = (lhs.witness.0, lhs.counter.0, rhs.witness.0, rhs.counter.0);
        let iu = lhs.ctx.0 * u;
        if v == 0 && iu > 0 {
            return None;
        }
        let mut f0 = Vec::with_capacity(iu);
        let mut f1 = Vec::with_capacity(iu * y);
        for k in 0..iu {
            let i = k / u;
            let escape = (0..x).find(|&t| !holds(&lhs.body, k * x + t));
            let row = |w: usize| (i * v + w) * y;
            let w = (0..v).find(|&w| (0..y).all(|t| escape.is_some() || (x > 0 && holds(&rhs.body, row(w) + t))))?;
            f0.push(w);
            for t in 0..y {
                f1.push(if holds(&rhs.body, row(w) + t) { 0 } else { escape.unwrap_or(0) });
            }
        }
        let iu_set = lhs.ctx.times(lhs.witness);
        Some(DialWitness {
            f0: FinMap::new(iu_set, rhs.witness, f0).ok()?,
            f1: FinMap::new(iu_set.times(rhs.counter), lhs.counter, f1).ok()?,
        })
    }

    /// Re-checks a witness by substitution in the base doctrine.
    pub fn certifies(&self, lhs: &DialObj<P::Elem>, rhs: &DialObj<P::Elem>, w: &DialWitness) -> Result<bool> {
        let (ctx, u, x, v, y) = (lhs.ctx, lhs.witness, lhs.counter, rhs.witness, rhs.counter);
        let iu = ctx.times(u);
        if w.f0.dom() != iu || w.f0.cod() != v || w.f1.dom() != iu.times(y) || w.f1.cod() != x {
            return Ok(false);
        }
        let l = self.inner.reindex(&w.counter_map(ctx, u, x, y), &lhs.body)?;
        let r = self.inner.reindex(&w.witness_map(ctx, u, v, y), &rhs.body)?;
        self.inner.leq(iu.times(y), &l, &r)
    }
}

impl<P: Doctrine> Doctrine for DialCompletion<P> {
    type Elem = DialObj<P::Elem>;

    fn name(&self) -> String {
        format!("dial({})", self.inner.name())
    }

    fn base(&self) -> &BaseCat {
        self.inner.base()
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities { has_exists: true, has_forall: true, has_heyting: true, has_equality: false }
    }

    fn max_object(&self) -> Option<usize> {
        self.inner.max_object()
    }

    fn fiber(&self, obj: FinSet) -> Result<Vec<Self::Elem>> {
        let limit = self.inner.max_object();
        let mut out = Vec::new();
        for witness in (0..=self.aux_cap).map(FinSet) {
            for counter in (0..=self.aux_cap).map(FinSet) {
                let carrier = obj.times(witness).times(counter);
                if limit.is_some_and(|m| carrier.0 > m) {
                    continue;
                }
                for body in self.inner.fiber(carrier)? {
                    out.push(DialObj { ctx: obj, witness, counter, body });
                }
                self.base().charge(out.len() as u128)?;
            }
        }
        Ok(out)
    }

    fn classes(&self, obj: FinSet) -> Result<Arc<Vec<Self::Elem>>> {
        self.cache.get_or(obj, || compute_classes(self, obj))
    }

    fn leq(&self, obj: FinSet, lhs: &Self::Elem, rhs: &Self::Elem) -> Result<bool> {
        Ok(self.leq_witness(obj, lhs, rhs)?.is_some())
    }

    fn leq_certificate(&self, obj: FinSet, lhs: &Self::Elem, rhs: &Self::Elem) -> Result<Option<String>> {
        Ok(self.leq_witness(obj, lhs, rhs)?.map(|w| w.to_string()))
    }

    fn reindex(&self, g: &FinMap, e: &Self::Elem) -> Result<Self::Elem> {
        check_ctx(g.cod(), e.ctx)?;
        let rest = FinMap::identity(e.witness.times(e.counter));
        let body = self.inner.reindex(&g.cross(&rest), &e.body)?;
        Ok(DialObj { ctx: g.dom(), body, ..e.clone() })
    }

    fn exists_projection(&self, a: FinSet, b: FinSet, e: &Self::Elem) -> Option<Result<Self::Elem>> {
        Some(check_ctx(a.times(b), e.ctx).map(|_| DialObj {
            ctx: a,
            witness: b.times(e.witness),
            counter: e.counter,
            body: e.body.clone(),
        }))
    }

    /// `(A × B, U, X, α) ↦ (A, U^B, B × X, α(a, b, ev(h, b), x))`.
    fn forall_projection(&self, a: FinSet, b: FinSet, e: &Self::Elem) -> Option<Result<Self::Elem>> {
        let run = || -> Result<Self::Elem> {
            check_ctx(a.times(b), e.ctx)?;
            let (u, x) = (e.witness, e.counter);
            let (exp, _) = self.base().exponential(b, u)?;
            let src = Shape::new([a.0, exp.0, b.0, x.0]);
            let dst = Shape::new([a.0, b.0, u.0, x.0]);
            let m = src.map_to(&dst, |s, d| {
                d.copy_from_slice(&[s[0], s[2], eval_code(s[1], u.0, s[2]), s[3]]);
            });
            Ok(DialObj { ctx: a, witness: exp, counter: b.times(x), body: self.inner.reindex(&m, &e.body)? })
        };
        Some(run())
    }

    fn existential_cover_hint(&self, obj: FinSet, e: &Self::Elem) -> Option<(FinSet, Self::Elem)> {
        let cover = DialObj { ctx: obj.times(e.witness), witness: FinSet::ONE, counter: e.counter, body: e.body.clone() };
        Some((e.witness, cover))
    }

    fn universal_cover_hint(&self, obj: FinSet, e: &Self::Elem) -> Option<(FinSet, Self::Elem)> {
        (e.witness == FinSet::ONE).then(|| {
            let cover = DialObj { ctx: obj.times(e.counter), witness: FinSet::ONE, counter: FinSet::ONE, body: e.body.clone() };
            (e.counter, cover)
        })
    }
}
