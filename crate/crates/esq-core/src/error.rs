//! Error type shared by all modules.

/// Errors reported by state constructors, entropy routines, and optimizers.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A precondition on caller-supplied data failed (bad probabilities,
    /// non-Hermitian matrix, parameter out of range, ...).
    #[error("validation: {0}")]
    Validation(String),

    /// Kraus operators do not close to the identity.
    #[error("Kraus completeness violated: ||sum K'K - I|| = {deviation:.3e}")]
    KrausClosure { deviation: f64 },

    /// Subsystem label sets passed to an operation were inconsistent
    /// (unknown label, duplicate, or overlapping sets).
    #[error("subsystem labels: {0}")]
    Labels(String),

    /// The raw squasher parametrization has (numerically) dependent
    /// columns; the caller should re-randomize and decode again.
    #[error("squasher parametrization is rank deficient; re-randomize")]
    RankDeficient,

    /// A requested computation exceeds the ambient dimension cap.
    #[error("dimension budget exceeded: requested {requested}, cap {cap}")]
    DimensionBudget { requested: usize, cap: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub(crate) fn labels(msg: impl Into<String>) -> Self {
        Error::Labels(msg.into())
    }
}
