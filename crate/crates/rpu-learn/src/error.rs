use core::fmt;

/// Errors surfaced by oracle plumbing, compression, and the learner loop.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// An adversary was handed an empty set of valid responses.
    EmptyResponseSet,
    /// A point's dimension does not match the hypothesis.
    DimensionMismatch { expected: usize, got: usize },
    /// Recorded responses contradict each other; only a broken oracle can
    /// produce this.
    OracleInconsistency(&'static str),
    /// A stored response is inconsistent with the rest of the stored state.
    DataCorruption(&'static str),
    /// A learner configuration failed validation.
    InvalidConfig(&'static str),
    /// A certification transcript admits no consistent hypothesis.
    VacuousTranscript,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptyResponseSet => write!(f, "adversary given an empty valid-response set"),
            Error::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Error::OracleInconsistency(msg) => write!(f, "oracle inconsistency: {msg}"),
            Error::DataCorruption(msg) => write!(f, "stored state corrupted: {msg}"),
            Error::InvalidConfig(msg) => write!(f, "invalid configuration: {msg}"),
            Error::VacuousTranscript => write!(f, "transcript admits no consistent hypothesis"),
        }
    }
}
