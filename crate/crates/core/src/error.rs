use std::path::PathBuf;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecialError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("{routine} did not converge within {iterations} iterations")]
    NoConvergence {
        routine: &'static str,
        iterations: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoverageError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error(transparent)]
    Special(#[from] SpecialError),
}

#[derive(Debug, Error)]
pub enum DataError {
    #[error("missing header")]
    MissingHeader,
    #[error("row {row}: expected {expected} cells, found {found}")]
    Ragged {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("parse error at row {row}, column {column}: {message}")]
    Parse {
        row: usize,
        column: usize,
        message: String,
    },
    #[error("dataset is empty")]
    Empty,
    #[error("unknown column '{0}'")]
    UnknownColumn(String),
    #[error("column '{column}' is not numeric (row {row}: '{cell}')")]
    NotNumeric {
        column: String,
        row: usize,
        cell: String,
    },
    #[error("resample count must be at least 1")]
    ZeroResamples,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Error)]
pub enum RasterError {
    #[error("image dimensions must be positive, got {width}x{height}")]
    ZeroSize { width: u32, height: u32 },
    #[error("pixel buffer holds {actual} pixels, expected {expected}")]
    BufferLength { expected: usize, actual: usize },
    #[error("invalid plot frame: {0}")]
    Frame(String),
    #[error("invalid render spec: {0}")]
    Spec(String),
    #[error("png decode error: {0}")]
    Decode(String),
    #[error("png encode error: {0}")]
    Encode(String),
    #[error("singular polynomial fit: degree {degree} needs at least {needed} distinct x values, found {distinct}")]
    SingularFit {
        degree: usize,
        needed: usize,
        distinct: usize,
    },
    #[error(transparent)]
    Data(#[from] DataError),
}

#[derive(Debug, Error)]
pub enum AggregationError {
    #[error("image stack is empty")]
    EmptyStack,
    #[error("image {index} is {actual_w}x{actual_h}, expected {expected_w}x{expected_h}")]
    DimensionMismatch {
        index: usize,
        expected_w: u32,
        expected_h: u32,
        actual_w: u32,
        actual_h: u32,
    },
    #[error("invalid transform parameters: {0}")]
    Params(String),
    #[error("no pixel differs from the background")]
    AllBackground,
    #[error(transparent)]
    Special(#[from] SpecialError),
    #[error(transparent)]
    Raster(#[from] RasterError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

#[derive(Debug, Error)]
pub enum ProtocolError {
    #[error("invalid renderer command: {0}")]
    Template(String),
    #[error("replicate {index}: renderer exited with {status}: {stderr}")]
    Failed {
        index: usize,
        status: String,
        stderr: String,
    },
    #[error("replicate {index}: renderer timed out after {seconds:.1}s")]
    Timeout { index: usize, seconds: f64 },
    #[error("replicate {index}: expected {expected_w}x{expected_h} output, renderer produced {actual_w}x{actual_h}")]
    Dimensions {
        index: usize,
        expected_w: u32,
        expected_h: u32,
        actual_w: u32,
        actual_h: u32,
    },
    #[error("replicate {index}: {message}")]
    Output { index: usize, message: String },
    #[error("replicate {index}: {source}")]
    Io {
        index: usize,
        source: std::io::Error,
    },
}

impl ProtocolError {
    pub fn replicate(&self) -> Option<usize> {
        match self {
            ProtocolError::Template(_) => None,
            ProtocolError::Failed { index, .. }
            | ProtocolError::Timeout { index, .. }
            | ProtocolError::Dimensions { index, .. }
            | ProtocolError::Output { index, .. }
            | ProtocolError::Io { index, .. } => Some(*index),
        }
    }
}

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error(transparent)]
    Coverage(#[from] CoverageError),
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Raster(#[from] RasterError),
    #[error(transparent)]
    Aggregation(#[from] AggregationError),
}
