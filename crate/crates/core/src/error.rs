use thiserror::Error;

use crate::diagnostics::CertificateReport;
use crate::pmf::TriangularMixture;

#[derive(Debug, Error)]
pub enum Error {
    #[error("triangular index must be >= 1, got {0}")]
    InvalidBasisIndex(usize),

    #[error("invalid probability vector: {0}")]
    InvalidPmf(String),

    #[error("no observations")]
    EmptySample,

    #[error("negative observation at position {position}")]
    NegativeValue { position: usize },

    #[error("vector is not convex: second difference at index {index} is {value:e}")]
    NonConvex { index: usize, value: f64 },

    #[error("restricted Gram system over {size} components is singular or ill-conditioned")]
    SingularGram { size: usize },

    #[error("inner iteration cap ({cap}) exceeded at L = {l}")]
    InnerCapExceeded {
        l: usize,
        cap: usize,
        last: Box<TriangularMixture>,
        certificate: Box<CertificateReport>,
    },

    #[error("outer cap ({cap}) exceeded; last mixture mass {mass}")]
    OuterCapExceeded {
        cap: usize,
        mass: f64,
        last: Box<TriangularMixture>,
        certificate: Box<CertificateReport>,
    },

    #[error("NNLS oracle did not converge after {iterations} iterations (max KKT residual {residual:e})")]
    OracleNoConvergence { iterations: usize, residual: f64 },

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("replicate {replicate} (n = {n}): {source}")]
    Replicate {
        replicate: usize,
        n: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("schema mismatch: {0}")]
    Schema(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
