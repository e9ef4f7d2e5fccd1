use thiserror::Error;

/// Errors shared by the certified operations.
///
/// Certified arithmetic never guesses: whenever a comparison or an integer
/// part is not determined by the whole input interval, the operation fails
/// with an explicit error carrying the orbit/sequence index at which it
/// happened, so a driver can resample or raise the precision.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The interval no longer determines the next continued-fraction digit
    /// (or the requested quantity) at this precision.
    #[error("precision exhausted at step {step}")]
    PrecisionExhausted { step: usize },

    /// A threshold comparison could not be certified: the interval straddles
    /// the threshold.
    #[error("interval straddles threshold at step {step}")]
    StraddlesThreshold { step: usize },

    /// An index past the certified prefix of an expansion was requested.
    #[error("index {index} beyond certified length {certified}")]
    IndexBeyondCertified { index: usize, certified: usize },

    /// The inverse natural-extension step is undefined when y is an integer.
    #[error("inverse step undefined: y is an integer")]
    IntegerYBoundary,

    /// Input outside the stated domain of an operation.
    #[error("domain violation: {0}")]
    DomainViolation(&'static str),

    /// A Ford disc was requested at a fraction not in lowest terms.
    #[error("fraction not in lowest terms")]
    NotReduced,

    /// No convergent horocycle intersecting the geodesic was found within
    /// the scan cap.
    #[error("no intersecting disc within cap {cap}")]
    NoIntersectingDiscWithinCap { cap: usize },

    /// An empirical comparison was asked for with too few samples.
    #[error("insufficient samples: got {got}, need {need}")]
    InsufficientSamples { got: usize, need: usize },
}

impl Error {
    /// Re-tag a leaf error with the orbit step at which it occurred.
    pub fn at_step(self, step: usize) -> Self {
        match self {
            Error::PrecisionExhausted { .. } => Error::PrecisionExhausted { step },
            Error::StraddlesThreshold { .. } => Error::StraddlesThreshold { step },
            other => other,
        }
    }

    /// Step index carried by the error, if any.
    pub fn step(&self) -> Option<usize> {
        match self {
            Error::PrecisionExhausted { step } | Error::StraddlesThreshold { step } => Some(*step),
            _ => None,
        }
    }

    /// Stable machine-readable name, used in the CLI error JSON.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::PrecisionExhausted { .. } => "PrecisionExhausted",
            Error::StraddlesThreshold { .. } => "StraddlesThreshold",
            Error::IndexBeyondCertified { .. } => "IndexBeyondCertified",
            Error::IntegerYBoundary => "IntegerYBoundary",
            Error::DomainViolation(_) => "DomainViolation",
            Error::NotReduced => "NotReduced",
            Error::NoIntersectingDiscWithinCap { .. } => "NoIntersectingDiscWithinCap",
            Error::InsufficientSamples { .. } => "InsufficientSamples",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
