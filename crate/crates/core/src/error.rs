use thiserror::Error;

/// Errors shared across the simulation, flow, and bound-audit modules.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension must be at least 2, got {n}")]
    InvalidDimension { n: usize },

    #[error("target index {target} out of range for dimension {n}")]
    TargetOutOfRange { target: usize, n: usize },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("state no longer normalized: |norm^2 - 1| = {deviation:.3e}")]
    NotNormalized { deviation: f64 },

    #[error("matrix deviates from Hermitian symmetry by {deviation:.3e}")]
    NonHermitian { deviation: f64 },

    #[error("matrix trace deviates from 1 by {deviation:.3e}")]
    TraceNotOne { deviation: f64 },

    #[error("time fraction must lie in [0, 1], got {tau}")]
    TauOutOfRange { tau: f64 },

    #[error("time must be finite and nonnegative, got {value}")]
    InvalidTime { value: f64 },

    #[error("sample step must be positive, got {value}")]
    InvalidStep { value: f64 },

    #[error("probability must lie in [0, 1], got {value}")]
    ProbabilityOutOfRange { value: f64 },

    #[error("sup norm {value} outside [1/{n}, 1]")]
    SupNormOutOfRange { value: f64, n: usize },

    #[error("n = {n} exceeds the dense engine limit of {limit}; use the closed-form engine")]
    DeskScaleExceeded { n: usize, limit: usize },

    #[error("audit failed: {inequality} violated with slack {slack:.3e}")]
    AuditFailed {
        inequality: &'static str,
        slack: f64,
    },

    #[error("eigenvalue branch resolution failed at t = {t}")]
    BranchResolutionFailed { t: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
