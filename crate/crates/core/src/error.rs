use thiserror::Error;

/// Errors raised anywhere in the solver.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("exponential overflow guard: Re(argument) = {0} exceeds {limit}", limit = crate::jet::EXP_GUARD)]
    OverflowGuard(f64),
    #[error("square root evaluated exactly on its branch cut at {0}")]
    BranchCutHit(num_complex::Complex64),
    #[error("loss evaluated to a non-finite value ({0})")]
    NonFiniteLoss(f64),
    #[error("non-finite loss at iteration {iteration}: {value}")]
    Diverged { iteration: usize, value: f64 },
    #[error("energy assembly produced a non-finite value")]
    NonFiniteEnergy,
    #[error("shape mismatch: expected {expected}, got {got}")]
    ShapeMismatch { expected: usize, got: usize },
    #[error("probe batch has zero second moment at layer {0}")]
    DegenerateProbe(usize),
    #[error("probe batch is empty")]
    EmptyProbe,
    #[error("model mode does not match the request: {0}")]
    ModeMismatch(&'static str),
    #[error("no interior sample passed the domain indicator")]
    EmptyDomain,
    #[error("boundary-residual loss needs displacement data only; segment {0} carries a traction load")]
    UnsupportedBc(String),
    #[error("contour of radius {radius} around {tip} leaves the domain")]
    ContourOutsideDomain { tip: num_complex::Complex64, radius: f64 },
    #[error("point {0} lies outside the valid region")]
    OutOfDomain(num_complex::Complex64),
    #[error("{what} = {value} outside the validity range [{lo}, {hi}]")]
    Range {
        what: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },
    #[error("invalid specification: {0}")]
    InvalidSpec(String),
    #[error("model file: {0}")]
    Format(String),
}

impl Error {
    /// Failures of the numerics rather than of the inputs.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::OverflowGuard(_)
                | Error::BranchCutHit(_)
                | Error::NonFiniteLoss(_)
                | Error::Diverged { .. }
                | Error::NonFiniteEnergy
                | Error::DegenerateProbe(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
