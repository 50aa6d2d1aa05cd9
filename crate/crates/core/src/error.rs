use thiserror::Error;

use crate::judgement::Judgement;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("judgement set belongs to a different universe")]
    UniverseMismatch,

    #[error("judgement `{0}` is not in the universe")]
    UnknownJudgement(Judgement),

    /// The bound handed to [`InferenceSystem::kernel_below`](crate::InferenceSystem::kernel_below)
    /// is not closed; `witness` is a conclusion inferred from it but missing from it.
    #[error("bound is not closed: `{witness}` is inferred but not contained")]
    BetaNotClosed { witness: Judgement },

    #[error("set is not consistent: `{witness}` has no rule with premises inside the set")]
    NotConsistent { witness: Judgement },

    #[error("`{0}` is not in the generated interpretation")]
    NotInGenerated(Judgement),

    #[error("cap of {cap} exceeded ({what})")]
    CapExceeded { cap: usize, what: &'static str },

    #[error("universe of {size} judgements exceeds oracle cap {cap}")]
    UniverseTooLarge { size: usize, cap: usize },

    #[error("terms use different constructor signatures")]
    SignatureMismatch,

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
