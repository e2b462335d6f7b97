//! Finite, exhaustively checkable categorical logic: doctrines over finite
//! sets, their existential, universal and Dialectica completions,
//! quantifier-freeness, logical principles, the functional interpretation of
//! first-order formulas and the tripos-to-topos construction.

pub mod completion;
pub mod doctrine;
pub mod error;
pub mod finbase;
pub mod freeness;
pub mod principles;
pub mod report;
pub mod syntax;
pub mod tripos;

pub use error::{Error, Result};
