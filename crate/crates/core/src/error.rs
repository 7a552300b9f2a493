//! Error taxonomy shared by every module.
//!
//! Errors split into two classes: validation failures (malformed inputs,
//! violated preconditions, refused gates) and numerical failures (singular
//! systems, under-resolved quadrature, lost roots). The CLI maps the classes
//! to distinct exit codes.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum IslError {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("format error: {0}")]
    Format(String),

    #[error("linear system numerically singular (condition estimate {condition:.3e})")]
    SingularSystem { condition: f64 },

    #[error("oscillatory quadrature tail too large: {0}")]
    TailTooLarge(String),

    #[error("contour under-resolved for winding number: {0}")]
    UnderResolvedContour(String),

    #[error("zero search: function vanishes on a box boundary near {0}")]
    BoundaryZero(String),

    #[error("zero search count mismatch: {0}")]
    CountMismatch(String),

    #[error("ODE step size underflow near x = {0:.6e}")]
    StepSizeUnderflow(f64),

    #[error("Jost function vanishes at {0}; scattering matrix undefined there")]
    ZeroJostFunction(String),

    #[error("division singularity: {0}")]
    DivisionSingularity(String),

    #[error("matching singularity in phase-shift extraction: {0}")]
    MatchingSingularity(String),

    #[error("cross-check failed: {0}")]
    CrossCheckFailure(String),

    #[error("scattering index obstruction: {0}")]
    IndexNonzero(String),

    #[error("phase branch jump: {0}")]
    BranchJump(String),

    #[error("reconstruction mismatch: {0}")]
    ReconstructionMismatch(String),

    #[error("iteration budget exceeded: {0}")]
    IterationBudgetExceeded(String),
}

impl IslError {
    /// True for errors caused by bad inputs or refused preconditions, as
    /// opposed to numerical breakdown during an otherwise valid computation.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            IslError::InvalidInput(_)
                | IslError::Io(_)
                | IslError::Format(_)
                | IslError::IndexNonzero(_)
        )
    }
}
