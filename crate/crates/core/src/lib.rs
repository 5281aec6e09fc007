//! Frank-Wolfe (conditional gradient) methods over compact convex sets
//! accessed through linear minimization oracles.
//!
//! The crate is generic over the scalar type: every solver runs over `f64`
//! and over exact big rationals ([`scalar::Rational`]).

pub mod atoms;
pub mod dense;
pub mod error;
pub mod harness;
pub mod lmo;
pub mod problems;
pub mod scalar;
pub mod solvers;
pub mod steps;

pub use atoms::{ActiveSet, Atom, Sign};
pub use error::{Error, Result};
pub use lmo::LinearMinimizationOracle;
pub use problems::Objective;
pub use scalar::{Rational, Scalar};
