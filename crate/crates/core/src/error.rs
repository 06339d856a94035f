use thiserror::Error;

use crate::parse::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Which trace form failed the nondegeneracy test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormKind {
    ThetaDelta,
    ThetaFDelta,
}

impl FormKind {
    pub fn label(self) -> &'static str {
        match self {
            FormKind::ThetaDelta => "theta_delta",
            FormKind::ThetaFDelta => "theta_f_delta",
        }
    }
}

impl std::fmt::Display for FormKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("polynomials belong to different rings")]
    RingMismatch,
    #[error("invalid variable list: {0}")]
    InvalidRing(String),
    #[error("variable index {index} out of range for a ring with {nvars} variables")]
    VariableIndex { index: usize, nvars: usize },
    #[error("point has {got} coordinates, ring has {expected} variables")]
    Arity { expected: usize, got: usize },
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NonSquare { rows: usize, cols: usize },
    #[error("matrix shape mismatch: {0}")]
    Shape(String),
    #[error("exact division failed: divisor does not divide dividend")]
    InexactDivision,
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("ideal has no nonzero generators")]
    ZeroIdeal,
    #[error("S-pair reduction limit of {limit} exceeded")]
    StepLimitExceeded { limit: usize },
    #[error("ideal is not zero-dimensional: the quotient algebra is infinite-dimensional")]
    NotZeroDimensional,
    #[error("pivot minor is not invertible modulo the minors ideal after {attempts} attempt(s)")]
    PivotMinorDegenerate { attempts: usize },
    #[error("quadratic form {0} is degenerate")]
    DegenerateForm(FormKind),
    #[error("invalid problem: {0}")]
    InvalidProblem(String),
    #[error("eigen-solver failure: {0}")]
    EigenSolver(String),
    #[error("value of {what} at a located point is {value:e}, within tolerance of zero")]
    SignTooCloseToZero { what: &'static str, value: f64 },
    #[error("located {located} real points but the trace form counts {counted}")]
    PointCountMismatch { located: usize, counted: i64 },
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    /// True for failures of the pipeline's hypotheses (as opposed to malformed input or resource caps).
    pub fn is_hypothesis_failure(&self) -> bool {
        matches!(
            self,
            Error::NotZeroDimensional
                | Error::ZeroIdeal
                | Error::PivotMinorDegenerate { .. }
                | Error::DegenerateForm(_)
                | Error::SignTooCloseToZero { .. }
                | Error::PointCountMismatch { .. }
                | Error::EigenSolver(_)
        )
    }
}
