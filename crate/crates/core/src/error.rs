use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Evaluation point lies outside the overflow-guarded domain.
    #[error("point outside guarded domain: |exponent| = {exponent} exceeds {limit}")]
    Domain { exponent: f64, limit: f64 },

    #[error("non-finite intermediate value while evaluating `{expr}`")]
    NonFinite { expr: String },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("bilinear denominator vanishes: |Ψᵀγ²Ψ| = {magnitude:e}")]
    DegenerateDenominator { magnitude: f64 },

    #[error("bilinear ratio κ{component} has imaginary part {imag:e} relative to {magnitude:e}")]
    ComplexKappa {
        component: usize,
        imag: f64,
        magnitude: f64,
    },

    #[error("κ varies between points: spread {spread:e} exceeds {tol:e}")]
    KappaSpread { spread: f64, tol: f64 },

    #[error("not evanescent: |E − V₀| = {offset} must be below m = {mass}")]
    NotEvanescent { offset: f64, mass: f64 },

    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("finite-difference step {step:e} vanishes against coordinate {coordinate:e}")]
    StepUnderflow { step: f64, coordinate: f64 },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
