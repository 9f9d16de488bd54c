//! Error classes and their process exit codes.

use std::fmt;
use std::path::Path;

use bootagg::{
    AggregationError, CoverageError, DataError, HarnessError, ProtocolError, RasterError,
    SpecialError, StackError,
};

/// Exit code 1: invalid configuration or input content.
pub const EXIT_CONFIG: i32 = 1;
/// Exit code 2: an external renderer broke the protocol.
pub const EXIT_PROTOCOL: i32 = 2;
/// Exit code 3: a file could not be read, decoded or written.
pub const EXIT_IO: i32 = 3;

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Protocol(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Protocol(_) => EXIT_PROTOCOL,
            CliError::Io(_) => EXIT_IO,
        }
    }

    pub fn io(path: &Path, err: impl fmt::Display) -> Self {
        CliError::Io(format!("{}: {}", path.display(), err))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Protocol(m) => write!(f, "renderer error: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<DataError> for CliError {
    fn from(e: DataError) -> Self {
        match e {
            DataError::Io(_) => CliError::Io(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl From<RasterError> for CliError {
    fn from(e: RasterError) -> Self {
        match e {
            RasterError::Decode(_) | RasterError::Encode(_) => CliError::Io(e.to_string()),
            RasterError::Data(d) => d.into(),
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl From<AggregationError> for CliError {
    fn from(e: AggregationError) -> Self {
        match e {
            AggregationError::Io { .. } => CliError::Io(e.to_string()),
            AggregationError::Raster(r) => r.into(),
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl From<ProtocolError> for CliError {
    fn from(e: ProtocolError) -> Self {
        match e {
            ProtocolError::Template(_) => CliError::Config(e.to_string()),
            _ => CliError::Protocol(e.to_string()),
        }
    }
}

impl From<StackError> for CliError {
    fn from(e: StackError) -> Self {
        CliError::Protocol(e.to_string())
    }
}

impl From<SpecialError> for CliError {
    fn from(e: SpecialError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<CoverageError> for CliError {
    fn from(e: CoverageError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<HarnessError> for CliError {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::Data(d) => d.into(),
            HarnessError::Raster(r) => r.into(),
            HarnessError::Aggregation(a) => a.into(),
            _ => CliError::Config(e.to_string()),
        }
    }
}
