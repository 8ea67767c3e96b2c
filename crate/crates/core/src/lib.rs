//! Exact enumeration, spectral verification and Monte Carlo for the dimer
//! model and lattice permutations on `d`-dimensional tori.

pub mod dimer;
pub mod error;
pub mod pathweb;
pub mod perm;
pub mod report;
pub mod rwalk;
pub mod scalar;
pub mod spectral;
pub mod suite;
pub mod torus;
pub mod worm;

pub use error::{Error, Result};
pub use report::Report;
pub use scalar::{Count, Rational, Real, Semiring};
pub use torus::{ExtTorus, Reflection, Torus};
