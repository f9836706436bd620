use curvtool_core::Error as CoreError;

pub const EXIT_OK: u8 = 0;
pub const EXIT_PROPERTY: u8 = 2;
pub const EXIT_PARSE: u8 = 3;
pub const EXIT_UNKNOWN: u8 = 4;
pub const EXIT_DOMAIN: u8 = 5;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown {kind}: {name}")]
    Unknown { kind: &'static str, name: String },
    #[error("{0}")]
    Domain(String),
    #[error("cannot access {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) => EXIT_PARSE,
            CliError::Unknown { .. } | CliError::Io { .. } => EXIT_UNKNOWN,
            CliError::Domain(_) => EXIT_DOMAIN,
            CliError::Core(e) => match e {
                CoreError::Parse(_)
                | CoreError::InvalidTensor(_)
                | CoreError::VariableMismatch { .. }
                | CoreError::DegreeTooHigh(_) => EXIT_PARSE,
                CoreError::DimUnsupported(_) | CoreError::UnknownMetric(_) => EXIT_UNKNOWN,
                _ => EXIT_DOMAIN,
            },
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
