use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("pole at z = {re} + {im}i", re = .0.re, im = .0.im)]
    Pole(Complex64),

    #[error("overflow: log magnitude {0} exceeds the representable range")]
    Overflow(f64),

    #[error("root continuation failed near z = {re} + {im}i: {reason}", re = .z.re, im = .z.im)]
    Continuation { z: Complex64, reason: String },

    #[error("quadrature did not reach tolerance {tol:e} (estimate {estimate:e} after {evaluations} evaluations)")]
    Quadrature {
        tol: f64,
        estimate: f64,
        evaluations: usize,
    },

    #[error("eigensolver did not converge after {0} iterations")]
    NoConvergence(usize),

    #[error("empty Monte Carlo run")]
    EmptyRun,

    #[error("unknown strategy '{name}' (available: {available})")]
    UnknownStrategy { name: String, available: String },
}

pub type Result<T> = std::result::Result<T, Error>;
