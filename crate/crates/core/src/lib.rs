//! Correlation and entanglement measures on small multipartite quantum
//! states, centered on the one-way unlocalizable entanglement, together with
//! a verification harness for the identities and inequalities that relate
//! them.
//!
//! All entropic quantities are in bits (logarithms base 2). Subsystem 0 is
//! the most significant tensor index throughout.

pub mod error;
pub mod linalg;
pub mod measures;
pub mod optim;
pub mod rng;
pub mod verify;
pub mod states;

pub use error::{Error, Result};
