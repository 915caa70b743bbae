use alloc::string::String;
use alloc::vec::Vec;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid Jacobi exponents alpha = {alpha}, beta = {beta}: both must be finite and > -1")]
    InvalidWeight { alpha: f64, beta: f64 },

    #[error("invalid space-weight exponent {name} = {value}: must be finite and >= 0")]
    InvalidSpaceWeight { name: &'static str, value: f64 },

    #[error("space weight not admissible on axis {axis}: {detail}")]
    Inadmissible { axis: usize, detail: String },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("tridiagonal eigensolver did not converge for index {index} after {iterations} sweeps")]
    EigenNoConvergence { index: usize, iterations: usize },

    #[error("anti-Gauss nodes leave [-1, 1] on axis {axis} (alpha = {alpha}, beta = {beta})")]
    NodesOutside { axis: usize, alpha: f64, beta: f64 },

    #[error("non-finite {what} value at ({x1}, {x2})")]
    NonFinite { what: &'static str, x1: f64, x2: f64 },

    #[error("space weight u is not positive at node ({x1}, {x2})")]
    VanishingSpaceWeight { x1: f64, x2: f64 },

    #[error("space weight u vanishes at ({y1}, {y2}); only the weighted value is defined")]
    UnweightedUndefined { y1: f64, y2: f64 },

    #[error("matrix is singular to working precision (pivot column {column})")]
    Singular { column: usize },

    #[error("matricized dimension {n} exceeds the cap {cap}; skip the estimate or raise the cap")]
    Capacity { n: usize, cap: usize },

    #[error("GMRES reached {iterations} iterations with relative residual {residual:e} (tolerance {tol:e})")]
    GmresNoConvergence {
        iterations: usize,
        residual: f64,
        tol: f64,
        history: Vec<f64>,
    },

    #[error("Stein solver precondition failed: spectral radius product estimate {estimate} >= 1")]
    SteinSpectralRadius { estimate: f64 },

    #[error("Stein iteration stagnated after {iterations} steps with relative residual {residual:e}")]
    SteinStagnation { iterations: usize, residual: f64 },

    #[error("solutions do not belong to the same problem: {0}")]
    Mismatch(String),
}

impl Error {
    /// True for failures of the numerical process itself, as opposed to bad input.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::EigenNoConvergence { .. }
                | Error::NonFinite { .. }
                | Error::Singular { .. }
                | Error::GmresNoConvergence { .. }
                | Error::SteinSpectralRadius { .. }
                | Error::SteinStagnation { .. }
        )
    }
}

pub type Result<T> = core::result::Result<T, Error>;
