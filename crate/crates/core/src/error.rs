use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Coarse classification used by the command line to pick an exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// A parameter or configuration value is out of its domain.
    InvalidInput,
    /// A numerical routine failed to converge or lost accuracy.
    Numerical,
    /// The requested quantity is undefined at this bias point.
    Degenerate,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: String, reason: String },

    #[error("eigensolver failed for {context}")]
    EigenSolve { context: String },

    #[error("eigenpair check failed for {context}: {detail}")]
    EigenCheck { context: String, detail: String },

    #[error("norm drift {deviation:.3e} at t = {time} µs exceeds the unitarity bound")]
    NormDrift { time: f64, deviation: f64 },

    #[error("{what} did not converge: {detail}")]
    NotConverged { what: String, detail: String },

    #[error("time {time} µs outside schedule [0, {total}]")]
    TimeOutOfRange { time: f64, total: f64 },

    #[error("level gap {gap:.3e} MHz between {k} and {l} below floor at flux {flux}, ng {ng}")]
    DegenerateGap {
        flux: f64,
        ng: f64,
        k: usize,
        l: usize,
        gap: f64,
    },

    #[error(
        "splitting formula undefined at flux {flux}: effective pair tunneling amplitude vanishes"
    )]
    SplittingFormulaInvalid { flux: f64 },

    #[error("qubit basis ill-defined at flux {flux}: doublet gap to third level is {gap:.3e} MHz")]
    BasisIllDefined { flux: f64, gap: f64 },

    #[error("two-level approximation breaks down at flux {flux}: leakage {leakage:.3e} exceeds {threshold}")]
    TwoLevelBreakdown {
        flux: f64,
        leakage: f64,
        threshold: f64,
    },

    #[error("adiabaticity violated: final leakage {leakage:.3e} exceeds {threshold}")]
    AdiabaticityViolation { leakage: f64, threshold: f64 },

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(name: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name: name.into(),
            reason: reason.into(),
        }
    }

    pub fn kind(&self) -> Option<ErrorKind> {
        match self {
            Error::InvalidParameter { .. } | Error::TimeOutOfRange { .. } | Error::Config(_) => {
                Some(ErrorKind::InvalidInput)
            }
            Error::EigenSolve { .. }
            | Error::EigenCheck { .. }
            | Error::NormDrift { .. }
            | Error::NotConverged { .. } => Some(ErrorKind::Numerical),
            Error::DegenerateGap { .. }
            | Error::SplittingFormulaInvalid { .. }
            | Error::BasisIllDefined { .. }
            | Error::TwoLevelBreakdown { .. }
            | Error::AdiabaticityViolation { .. } => Some(ErrorKind::Degenerate),
            Error::Io(_) => None,
        }
    }
}
