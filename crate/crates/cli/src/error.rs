use screenprio::boolquery::ParseError;
use screenprio::clf::ClfError;
use screenprio::corpusio::CorpusError;
use screenprio::evalmetrics::MetricError;
use screenprio::fuse::FuseError;
use screenprio::genquery::GenError;
use screenprio::lexrank::LexError;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Failure {
    /// Bad flags, config values or missing input paths.
    Usage,
    /// Input files that do not satisfy their format or each other.
    Data,
    /// Generation endpoint failures.
    Endpoint,
}

impl Failure {
    pub fn exit_code(self) -> u8 {
        match self {
            Failure::Usage => 1,
            Failure::Data => 2,
            Failure::Endpoint => 3,
        }
    }
}

#[derive(Debug)]
pub struct CliError {
    pub kind: Failure,
    pub error: anyhow::Error,
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#}", self.error)
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn usage(msg: impl fmt::Display) -> CliError {
    CliError { kind: Failure::Usage, error: anyhow::anyhow!("{msg}") }
}

pub fn data(msg: impl fmt::Display) -> CliError {
    CliError { kind: Failure::Data, error: anyhow::anyhow!("{msg}") }
}

impl CliError {
    pub fn context(self, ctx: impl fmt::Display + Send + Sync + 'static) -> Self {
        Self { kind: self.kind, error: self.error.context(ctx) }
    }
}

pub trait Context<T> {
    fn context(self, ctx: impl fmt::Display + Send + Sync + 'static) -> CliResult<T>;
}

impl<T, E: Into<CliError>> Context<T> for Result<T, E> {
    fn context(self, ctx: impl fmt::Display + Send + Sync + 'static) -> CliResult<T> {
        self.map_err(|e| e.into().context(ctx))
    }
}

macro_rules! classify {
    ($($ty:ty => $kind:expr),* $(,)?) => {
        $(impl From<$ty> for CliError {
            fn from(e: $ty) -> Self {
                CliError { kind: $kind, error: e.into() }
            }
        })*
    };
}

classify! {
    CorpusError => Failure::Data,
    ParseError => Failure::Data,
    MetricError => Failure::Data,
    FuseError => Failure::Data,
    ClfError => Failure::Data,
    std::io::Error => Failure::Data,
    serde_json::Error => Failure::Data,
}

impl From<LexError> for CliError {
    fn from(e: LexError) -> Self {
        let kind = match e {
            LexError::InvalidParams(_) => Failure::Usage,
            _ => Failure::Data,
        };
        CliError { kind, error: e.into() }
    }
}

impl From<GenError> for CliError {
    fn from(e: GenError) -> Self {
        let kind = match e {
            GenError::MissingPlaceholder | GenError::DuplicatePlaceholder | GenError::InvalidConfig(_) => Failure::Usage,
            GenError::Cache(_) => Failure::Data,
            GenError::EndpointUnreachable(_)
            | GenError::AuthMissing(_)
            | GenError::RateLimited { .. }
            | GenError::HttpStatus { .. }
            | GenError::MalformedResponse(_)
            | GenError::EmptyCompletion { .. } => Failure::Endpoint,
        };
        CliError { kind, error: e.into() }
    }
}
