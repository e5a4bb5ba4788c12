use thiserror::Error;

use crate::fincat::AxiomViolation;

#[derive(Debug, Error)]
pub enum Error {
    #[error("category axioms violated: {}", fmt_violations(.0))]
    Axioms(Vec<AxiomViolation>),

    #[error("budget exceeded in {what}: limit {limit}")]
    BudgetExceeded { what: &'static str, limit: u64 },

    #[error("objects belong to different 2-ring instances")]
    MixedInstance,

    #[error("enumeration inconclusive after {steps_used} steps")]
    Inconclusive { steps_used: u64 },

    #[error("2-ring is not good: {0}")]
    NotGood(String),

    #[error("representation is not free: {0}")]
    FreenessFailure(String),

    #[error("pushforward failed to be a torsor: {0}")]
    PushforwardNotTorsor(String),

    #[error("no stabilization within {levels_tried} levels")]
    NoStabilization { levels_tried: usize },

    #[error("schema error at {path}: {reason}")]
    Schema { path: String, reason: String },

    #[error("precondition failed: {0}")]
    Precondition(String),
}

fn fmt_violations(v: &[AxiomViolation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn schema(path: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Schema { path: path.into(), reason: reason.into() }
    }
}
