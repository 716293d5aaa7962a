use thiserror::Error;

use crate::vec::ComplexVec;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("point with norm {norm} lies outside the admissible domain (limit {limit})")]
    OutsideBall { norm: f64, limit: f64 },

    #[error("direction has norm {norm}, expected a unit vector")]
    NotOnSphere { norm: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("degree overflow: composition exceeds degree bound {bound} (dropped mass {dropped_mass:.3e}); use pointwise iteration")]
    DegreeOverflow { bound: usize, dropped_mass: f64 },

    #[error("self-map certificate refused: |phi(z)| = {observed} at z = {witness}")]
    CertificateRefused { observed: f64, witness: ComplexVec },

    #[error("map has no self-map certificate; certify it before running dynamics")]
    NotCertified,

    #[error("point is not fixed: |phi(p) - p| = {residual:.3e}")]
    NotFixed { residual: f64 },

    #[error("map does not fix the origin: |phi(0)| = {0:.3e}")]
    OriginNotFixed(f64),

    #[error("retraction estimate is not idempotent: eigenvalue {eigenvalue} of d0(rho) is away from {{0, 1}}")]
    NotIdempotent { eigenvalue: String },

    #[error("retraction estimate did not converge (no period found)")]
    NoPeriodFound,

    #[error("normal form mismatch in {step}: residual {residual:.3e} at z = {worst}")]
    NormalFormMismatch {
        step: &'static str,
        residual: f64,
        worst: ComplexVec,
    },

    #[error("iterates from different seeds do not share a limit (scatter {scatter:.3e})")]
    NoCommonLimit { scatter: f64 },

    #[error("evaluation failed at z = {point}: {reason}")]
    Evaluation { point: ComplexVec, reason: String },

    #[error("singular matrix")]
    Singular,

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}
