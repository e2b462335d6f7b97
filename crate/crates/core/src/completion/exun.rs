use std::sync::Arc;

use super::{graph_over, ExObj, UnObj};
use crate::doctrine::{Capabilities, ClassCache, Doctrine};
use crate::error::{Error, Result};
use crate::finbase::{BaseCat, FinMap, FinSet};

fn check_ctx(obj: FinSet, ctx: FinSet) -> Result<()> {
    if obj == ctx {
        Ok(())
    } else {
        Err(Error::Invalid(format!("element over {ctx} used over {obj}")))
    }
}

/// Sizes of the auxiliary sorts whose bodies fit under `inner`'s fibers.
fn aux_sizes<P: Doctrine>(inner: &P, obj: FinSet, aux_cap: usize) -> impl Iterator<Item = FinSet> + '_ {
    let limit = inner.max_object();
    (0..=aux_cap)
        .map(FinSet)
        .filter(move |b| limit.map_or(true, |m| obj.times(*b).0 <= m))
}

/// The existential completion `P^∃`.
#[derive(Debug)]
pub struct ExCompletion<P: Doctrine> {
    inner: P,
    aux_cap: usize,
    cache: ClassCache<ExObj<P::Elem>>,
}

impl<P: Doctrine> ExCompletion<P> {
    pub fn new(inner: P) -> Self {
        let aux_cap = inner.base().size_cap;
        ExCompletion { inner, aux_cap, cache: ClassCache::default() }
    }

    pub fn with_aux_cap(self, aux_cap: usize) -> Self {
        ExCompletion { aux_cap, cache: ClassCache::default(), ..self }
    }

    pub fn inner(&self) -> &P {
        &self.inner
    }

    /// `(A, 1, α)`.
    pub fn embed(&self, ctx: FinSet, body: P::Elem) -> ExObj<P::Elem> {
        ExObj { ctx, aux: FinSet::ONE, body }
    }

    /// The least `f : A × B → C` with `α ≤ P_⟨π,f⟩ β`, if any.
    pub fn leq_witness(&self, obj: FinSet, lhs: &ExObj<P::Elem>, rhs: &ExObj<P::Elem>) -> Result<Option<FinMap>> {
        check_ctx(obj, lhs.ctx)?;
        check_ctx(obj, rhs.ctx)?;
        let (a, b, c) = (obj, lhs.aux, rhs.aux);
        let ab = a.times(b);
        if self.inner.is_pointwise() {
            if c.0 == 0 && ab.0 > 0 {
                return Ok(None);
            }
            let mut table = Vec::with_capacity(ab.0);
            for k in ab.elements() {
                if !self.inner.holds_at(&lhs.body, k) {
                    table.push(0);
                    continue;
                }
                let row = (k / b.0) * c.0;
                match c.elements().find(|&t| self.inner.holds_at(&rhs.body, row + t)) {
                    Some(t) => table.push(t),
                    None => return Ok(None),
                }
            }
            return FinMap::new(ab, c, table).map(Some);
        }
        for f in self.inner.base().maps(ab, c)? {
            let moved = self.inner.reindex(&graph_over(a, b, &f), &rhs.body)?;
            if self.inner.leq(ab, &lhs.body, &moved)? {
                return Ok(Some(f));
            }
        }
        Ok(None)
    }
}

impl<P: Doctrine> Doctrine for ExCompletion<P> {
    type Elem = ExObj<P::Elem>;

    fn name(&self) -> String {
        format!("ex({})", self.inner.name())
    }

    fn base(&self) -> &BaseCat {
        self.inner.base()
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities { has_exists: true, has_forall: false, has_heyting: true, has_equality: false }
    }

    fn max_object(&self) -> Option<usize> {
        self.inner.max_object()
    }

    fn fiber(&self, obj: FinSet) -> Result<Vec<Self::Elem>> {
        let mut out = Vec::new();
        for aux in aux_sizes(&self.inner, obj, self.aux_cap) {
            for body in self.inner.fiber(obj.times(aux))? {
                out.push(ExObj { ctx: obj, aux, body });
            }
            self.base().charge(out.len() as u128)?;
        }
        Ok(out)
    }

    fn classes(&self, obj: FinSet) -> Result<Arc<Vec<Self::Elem>>> {
        self.cache.get_or(obj, || crate::doctrine::compute_classes(self, obj))
    }

    fn leq(&self, obj: FinSet, lhs: &Self::Elem, rhs: &Self::Elem) -> Result<bool> {
        Ok(self.leq_witness(obj, lhs, rhs)?.is_some())
    }

    fn reindex(&self, g: &FinMap, e: &Self::Elem) -> Result<Self::Elem> {
        check_ctx(g.cod(), e.ctx)?;
        let body = self.inner.reindex(&g.cross(&FinMap::identity(e.aux)), &e.body)?;
        Ok(ExObj { ctx: g.dom(), aux: e.aux, body })
    }

    fn exists_projection(&self, a: FinSet, b: FinSet, e: &Self::Elem) -> Option<Result<Self::Elem>> {
        Some(check_ctx(a.times(b), e.ctx).map(|_| ExObj { ctx: a, aux: b.times(e.aux), body: e.body.clone() }))
    }

    fn existential_cover_hint(&self, obj: FinSet, e: &Self::Elem) -> Option<(FinSet, Self::Elem)> {
        Some((e.aux, ExObj { ctx: obj.times(e.aux), aux: FinSet::ONE, body: e.body.clone() }))
    }
}

/// The universal completion `P^∀`.
#[derive(Debug)]
pub struct UnCompletion<P: Doctrine> {
    inner: P,
    aux_cap: usize,
    cache: ClassCache<UnObj<P::Elem>>,
}

impl<P: Doctrine> UnCompletion<P> {
    pub fn new(inner: P) -> Self {
        let aux_cap = inner.base().size_cap;
        UnCompletion { inner, aux_cap, cache: ClassCache::default() }
    }

    pub fn with_aux_cap(self, aux_cap: usize) -> Self {
        UnCompletion { aux_cap, cache: ClassCache::default(), ..self }
    }

    pub fn inner(&self) -> &P {
        &self.inner
    }

    /// `(A, 1, α)`.
    pub fn embed(&self, ctx: FinSet, body: P::Elem) -> UnObj<P::Elem> {
        UnObj { ctx, aux: FinSet::ONE, body }
    }

    /// The least `g : A × C → B` with `P_⟨π,g⟩ α ≤ β`, if any.
    pub fn leq_witness(&self, obj: FinSet, lhs: &UnObj<P::Elem>, rhs: &UnObj<P::Elem>) -> Result<Option<FinMap>> {
        check_ctx(obj, lhs.ctx)?;
        check_ctx(obj, rhs.ctx)?;
        let (a, b, c) = (obj, lhs.aux, rhs.aux);
        let ac = a.times(c);
        if self.inner.is_pointwise() {
            if b.0 == 0 && ac.0 > 0 {
                return Ok(None);
            }
            let mut table = Vec::with_capacity(ac.0);
            for k in ac.elements() {
                if self.inner.holds_at(&rhs.body, k) {
                    table.push(0);
                    continue;
                }
                let row = (k / c.0) * b.0;
                match b.elements().find(|&t| !self.inner.holds_at(&lhs.body, row + t)) {
                    Some(t) => table.push(t),
                    None => return Ok(None),
                }
            }
            return FinMap::new(ac, b, table).map(Some);
        }
        for g in self.inner.base().maps(ac, b)? {
            let moved = self.inner.reindex(&graph_over(a, c, &g), &lhs.body)?;
            if self.inner.leq(ac, &moved, &rhs.body)? {
                return Ok(Some(g));
            }
        }
        Ok(None)
    }
}

impl<P: Doctrine> Doctrine for UnCompletion<P> {
    type Elem = UnObj<P::Elem>;

    fn name(&self) -> String {
        format!("un({})", self.inner.name())
    }

    fn base(&self) -> &BaseCat {
        self.inner.base()
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities { has_exists: false, has_forall: true, has_heyting: true, has_equality: false }
    }

    fn max_object(&self) -> Option<usize> {
        self.inner.max_object()
    }

    fn fiber(&self, obj: FinSet) -> Result<Vec<Self::Elem>> {
        let mut out = Vec::new();
        for aux in aux_sizes(&self.inner, obj, self.aux_cap) {
            for body in self.inner.fiber(obj.times(aux))? {
                out.push(UnObj { ctx: obj, aux, body });
            }
            self.base().charge(out.len() as u128)?;
        }
        Ok(out)
    }

    fn classes(&self, obj: FinSet) -> Result<Arc<Vec<Self::Elem>>> {
        self.cache.get_or(obj, || crate::doctrine::compute_classes(self, obj))
    }

    fn leq(&self, obj: FinSet, lhs: &Self::Elem, rhs: &Self::Elem) -> Result<bool> {
        Ok(self.leq_witness(obj, lhs, rhs)?.is_some())
    }

    fn reindex(&self, g: &FinMap, e: &Self::Elem) -> Result<Self::Elem> {
        check_ctx(g.cod(), e.ctx)?;
        let body = self.inner.reindex(&g.cross(&FinMap::identity(e.aux)), &e.body)?;
        Ok(UnObj { ctx: g.dom(), aux: e.aux, body })
    }

    fn forall_projection(&self, a: FinSet, b: FinSet, e: &Self::Elem) -> Option<Result<Self::Elem>> {
        Some(check_ctx(a.times(b), e.ctx).map(|_| UnObj { ctx: a, aux: b.times(e.aux), body: e.body.clone() }))
    }

    fn universal_cover_hint(&self, obj: FinSet, e: &Self::Elem) -> Option<(FinSet, Self::Elem)> {
        Some((e.aux, UnObj { ctx: obj.times(e.aux), aux: FinSet::ONE, body: e.body.clone() }))
    }
}
