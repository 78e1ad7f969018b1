//! Numerical laboratory for the linearized Kapustin–Witten equations.
//!
//! The modules build on each other: [`algebra`] supplies su(2) arithmetic,
//! [`clifford`] the 8×8 generators, [`model`] Witten's explicit solutions,
//! [`operator`] the linearized operator and its identities, [`spectral`] the
//! one-dimensional reductions, [`flow`] the gradient flow on a flat torus, and
//! [`report`] the suites behind the `kwlab` binary.

pub mod algebra;
pub mod clifford;
pub mod error;
pub mod flow;
pub mod model;
pub mod operator;
pub mod report;
pub mod spectral;
mod util;

pub use error::{Error, Result};
