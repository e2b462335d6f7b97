use super::{Capabilities, ClassCache, Doctrine};
use crate::error::Result;
use crate::finbase::{BaseCat, FinMap, FinSet};
use std::sync::Arc;

/// The same fibers with the order reversed. Adjoints swap roles and are
/// found by scanning; no fast paths are inherited.
#[derive(Debug)]
pub struct OpDoctrine<P: Doctrine> {
    inner: P,
    cache: ClassCache<P::Elem>,
}

impl<P: Doctrine> OpDoctrine<P> {
    pub fn new(inner: P) -> Self {
        OpDoctrine { inner, cache: ClassCache::default() }
    }

    pub fn inner(&self) -> &P {
        &self.inner
    }
}

impl<P: Doctrine> Doctrine for OpDoctrine<P> {
    type Elem = P::Elem;

    fn name(&self) -> String {
        format!("op({})", self.inner.name())
    }

    fn base(&self) -> &BaseCat {
        self.inner.base()
    }

    fn capabilities(&self) -> Capabilities {
        let c = self.inner.capabilities();
        Capabilities {
            has_exists: c.has_forall,
            has_forall: c.has_exists,
            has_heyting: c.has_heyting,
            has_equality: false,
        }
    }

    fn max_object(&self) -> Option<usize> {
        self.inner.max_object()
    }

    fn fiber(&self, obj: FinSet) -> Result<Vec<P::Elem>> {
        self.inner.fiber(obj)
    }

    fn classes(&self, obj: FinSet) -> Result<Arc<Vec<P::Elem>>> {
        self.cache.get_or(obj, || self.inner.classes(obj).map(|c| c.to_vec()))
    }

    fn leq(&self, obj: FinSet, lhs: &P::Elem, rhs: &P::Elem) -> Result<bool> {
        self.inner.leq(obj, rhs, lhs)
    }

    fn reindex(&self, f: &FinMap, e: &P::Elem) -> Result<P::Elem> {
        self.inner.reindex(f, e)
    }
}
