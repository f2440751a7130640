use num_complex::Complex64;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{0}")]
    InvalidInput(String),

    #[error("domain error at {point}: {reason}")]
    Domain { point: Complex64, reason: &'static str },

    #[error("self-map certification failed: |f({point})| = {modulus}")]
    CertificationFailed { point: Complex64, modulus: f64 },

    #[error("map is not certified as a self-map of the disc")]
    CertificationMissing,

    #[error("boundary probe did not converge at {point}: successive extrapolants differ by {spread:e}")]
    NonConvergent { point: Complex64, spread: f64 },

    #[error("radial limit {limit} at {point} is not unimodular")]
    NotUnimodularLimit { point: Complex64, limit: Complex64 },

    #[error("map does not fix the origin: f(0) = {value}")]
    NotOriginFixing { value: Complex64 },

    #[error("test function is negative ({value:e}) at {point} inside the tangent ball")]
    NotNonnegative { point: Complex64, value: f64 },

    #[error("test function does not vanish at the boundary point: u(P) = {value:e}")]
    NotVanishingAtP { value: f64 },

    #[error("collar hypothesis violated: u({point}) = {value:e}")]
    CollarHypothesisViolated { point: Complex64, value: f64 },

    #[error("moment sequence is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("point {point} is not in the zero-set of B - 1 (|B - 1| = {defect:e})")]
    NotInOneSet { point: Complex64, defect: f64 },

    #[error("no interior complex line through the given point and (1, 0)")]
    DegenerateLine,

    #[error("inner series has a nonzero constant term")]
    NonzeroConstantTerm,

    #[error("linear part of the map is not the identity")]
    LinearPartNotIdentity,

    #[error("series shapes do not match: {0}")]
    ShapeMismatch(String),

    #[error("analytic disc is constant near the boundary point")]
    ConstantDisc,
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
