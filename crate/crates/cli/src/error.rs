use thiserror::Error;

use linpres::Error as CoreError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("cannot access {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Usage(String),
}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub const EXIT_USAGE: i32 = 64;

impl CliError {
    /// One code per failing module, outside the verdict codes 0, 2 and 3.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Json(_) => 65,
            CliError::Io { .. } => 74,
            CliError::Core(e) => match e {
                CoreError::InvalidField(_) | CoreError::Parse(_) | CoreError::Document(_) => 65,
                CoreError::Shape(_)
                | CoreError::DegreeWindowTooSmall(_)
                | CoreError::WindowTooShort(_)
                | CoreError::WindowMismatch(_)
                | CoreError::OutOfRange(_)
                | CoreError::NotCommutative(_) => 66,
                CoreError::NonLinearInput(_)
                | CoreError::NotFinitelyGeneratedInWindow(_)
                | CoreError::InsufficientChain(_)
                | CoreError::PurityCheckFailed(_) => 67,
                CoreError::MuNotSurjective(_) | CoreError::NoSurjectionFound(_) => 68,
                CoreError::DegenerateSample(_) | CoreError::MonadConditionFailed(_) => 69,
                CoreError::FieldReductionImpossible { .. } | CoreError::ZeroPoint | CoreError::NotSquare(..) => 70,
                CoreError::RootNotLinear(_) => 71,
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn codes_avoid_verdicts() {
        let errs = [
            CliError::Usage("x".into()),
            CliError::Core(CoreError::ZeroPoint),
            CliError::Core(CoreError::NoSurjectionFound(3)),
            CliError::Core(CoreError::RootNotLinear("r".into())),
        ];
        for e in errs {
            assert!(![0, 1, 2, 3].contains(&e.exit_code()));
        }
    }
}
