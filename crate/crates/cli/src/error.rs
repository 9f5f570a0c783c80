use qmc::classifier::ClassifierError;
use qmc::cover::CoverError;
use qmc::dimension::DimensionError;
use qmc::fixtures::FixtureError;
use qmc::space::io::ParseError;
use qmc::space::SpaceError;
use qmc::transforms::TransformError;
use std::process::ExitCode;
use thiserror::Error;

/// A failed invocation. `Usage` covers bad flags and unreadable input
/// (exit 2); `Domain` means the input was fine but the answer is "no" (exit 1).
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Domain(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Usage(_) => ExitCode::from(2),
            CliError::Domain(_) => ExitCode::from(1),
        }
    }
}

pub fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

pub fn domain(msg: impl Into<String>) -> CliError {
    CliError::Domain(msg.into())
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        match e {
            ParseError::Space(SpaceError::InfiniteInStrict { .. }) => {
                usage(format!("{e} (pass --relaxed to allow unreachable pairs)"))
            }
            ParseError::Space(SpaceError::Unreachable { .. }) => {
                usage(format!("{e} (pass --relaxed to allow unreachable pairs)"))
            }
            other => usage(other.to_string()),
        }
    }
}

impl From<SpaceError> for CliError {
    fn from(e: SpaceError) -> Self {
        usage(e.to_string())
    }
}

impl From<CoverError> for CliError {
    fn from(e: CoverError) -> Self {
        match e {
            CoverError::InvalidRadius(_)
            | CoverError::InvalidEpsilon(_)
            | CoverError::InvalidLambda(_)
            | CoverError::PointOutOfRange { .. }
            | CoverError::TooLarge { .. } => usage(e.to_string()),
            _ => domain(e.to_string()),
        }
    }
}

impl From<DimensionError> for CliError {
    fn from(e: DimensionError) -> Self {
        match e {
            DimensionError::Asymmetric { .. } => domain(format!("{e} (symmetrize first with --op max|min|sum)")),
            _ => usage(e.to_string()),
        }
    }
}

impl From<ClassifierError> for CliError {
    fn from(e: ClassifierError) -> Self {
        match e {
            ClassifierError::ZeroMargin { .. } | ClassifierError::NoCandidate | ClassifierError::Inconsistent { .. } => {
                domain(e.to_string())
            }
            ClassifierError::Cover(c) => c.into(),
            _ => usage(e.to_string()),
        }
    }
}

impl From<FixtureError> for CliError {
    fn from(e: FixtureError) -> Self {
        match e {
            FixtureError::TargetUnachievable { .. } => domain(e.to_string()),
            _ => usage(e.to_string()),
        }
    }
}

impl From<TransformError> for CliError {
    fn from(e: TransformError) -> Self {
        domain(e.to_string())
    }
}
