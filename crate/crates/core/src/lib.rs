//! Computable reductions from Ramsey-type statements to well-ordering
//! principles.
//!
//! Each pipeline takes a descending sequence in a term space built over a
//! linear order X (ω^X, the iterated ω^⟨h,X⟩, or ε_X), colours tuples or sets
//! of indices from it, finds a homogeneous witness by bounded search, and
//! extracts a descending sequence in X.

pub mod coloring;
pub mod epsilon;
pub mod error;
pub mod extract;
pub mod harness;
pub mod hindman;
pub mod omega;
pub mod oracle;
pub mod orders;

pub use error::{Error, Result};
