//! Free completions of a doctrine: existential, universal and Dialectica.
//!
//! Fibers are windows: auxiliary sorts range over objects up to `aux_cap`
//! (by default the base size cap, sort 0 included). Order queries accept
//! elements of any size and search witnesses in lexicographic order, so the
//! witness returned is always the least one.

use std::fmt;

use crate::finbase::{FinMap, FinSet};

mod dial;
mod exun;
mod iso;

pub use dial::{leq_dial_exhaustive, DialCompletion, DialWitness};
pub use exun::{ExCompletion, UnCompletion};
pub use iso::{dial_iso_check, dial_to_exun};

/// `∃b:B. body(a, b)` over the context `A`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExObj<E> {
    pub ctx: FinSet,
    pub aux: FinSet,
    pub body: E,
}

/// `∀b:B. body(a, b)` over the context `A`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UnObj<E> {
    pub ctx: FinSet,
    pub aux: FinSet,
    pub body: E,
}

/// `∃u:U. ∀x:X. body(i, u, x)` over the context `I`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DialObj<E> {
    pub ctx: FinSet,
    pub witness: FinSet,
    pub counter: FinSet,
    pub body: E,
}

impl<E: fmt::Display> fmt::Display for ExObj<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ex{}:{}", self.aux.0, self.body)
    }
}

impl<E: fmt::Display> fmt::Display for UnObj<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "un{}:{}", self.aux.0, self.body)
    }
}

impl<E: fmt::Display> fmt::Display for DialObj<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "d{}.{}:{}", self.witness.0, self.counter.0, self.body)
    }
}

/// `⟨π_A, f⟩ : A × B → A × C` for `f : A × B → C`.
pub(crate) fn graph_over(a: FinSet, b: FinSet, f: &FinMap) -> FinMap {
    let c = f.cod().0;
    FinMap::from_fn(a.times(b), a.times(f.cod()), |k| (k / b.0) * c + f.apply(k))
}

#[cfg(test)]
mod tests;
