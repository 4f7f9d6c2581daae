//! Decision procedures for Mal'cev nilpotency of finite semigroups, with
//! verifiable witnesses: Green's relations and principal series, the column
//! representation of principal layers, rotation/tuple-cycle certificates,
//! Schutzenberger graphs, Stallings-style inverse automata with p- and
//! nil-closures, and a gallery of named example semigroups.

pub mod action;
pub mod classify;
pub mod engine;
pub mod error;
pub mod gallery;
pub mod green;
pub mod input;
pub mod groups;
pub mod linalg;
pub mod lm;
pub mod pmap;
pub mod schutz;
pub mod semigroup;
pub mod stallings;

pub use error::{Error, Result};
