use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate polygon: |signed area| below 1e-12")]
    DegeneratePolygon,
    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),
    #[error("raster dimensions differ: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(usize, usize, usize, usize),
    #[error("invalid raster size {0}x{1}")]
    InvalidRasterSize(usize, usize),
    #[error("mask has no set pixels")]
    EmptyMask,
    #[error("invalid ray count {0}")]
    InvalidRayCount(usize),
    #[error("ray lengths must be finite and > 0")]
    NonPositiveRay,
    #[error("invalid ray pair: {0}")]
    InvalidRayPair(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("empty corpus: no instance could be processed")]
    EmptyCorpus,
    #[error("file not found: {}", .0.display())]
    FileNotFound(PathBuf),
    #[error("malformed JSON at line {line}, column {column}: {message}")]
    MalformedJson {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("schema error: {0}")]
    SchemaError(String),
    #[error("malformed CSV: {0}")]
    MalformedCsv(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
