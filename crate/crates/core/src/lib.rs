//! Raney distributions: exact moments, spectral curves, Wiener–Hopf
//! factorization, equilibrium checks and random-matrix sampling.

pub mod equilibrium;
pub mod error;
pub mod curve;
pub mod exact;
pub mod moments;
pub mod params;
pub mod quad;
pub mod rmt;
pub mod specfun;
pub mod wienerhopf;

pub use error::{Error, Result};
pub use params::{make_params, JacobiParams, RaneyParams, Rational, SupportEdge};
