use std::path::PathBuf;

use lamtool_core::graph_map::MapError;
use lamtool_core::hausdorff::HausdorffError;
use lamtool_core::lamination::LaminationError;
use lamtool_core::marked_graph::GraphError;
use lamtool_core::substitution::SubstitutionError;
use thiserror::Error;

use crate::format::ParseError;

/// Errors surfaced to the command line. Each variant has a fixed exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("size cap exceeded: {0}")]
    SizeCap(String),
    #[error("under-enumerated: {0}")]
    UnderEnumerated(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Parse(_) | CliError::Io { .. } => 1,
            CliError::Precondition(_) => 2,
            CliError::SizeCap(_) => 3,
            CliError::UnderEnumerated(_) => 4,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

impl From<MapError> for CliError {
    fn from(e: MapError) -> Self {
        match e {
            MapError::SizeCap { .. } => CliError::SizeCap(e.to_string()),
            _ => CliError::Precondition(e.to_string()),
        }
    }
}

impl From<SubstitutionError> for CliError {
    fn from(e: SubstitutionError) -> Self {
        match e {
            SubstitutionError::SizeCap { .. } | SubstitutionError::Overflow(_) => CliError::SizeCap(e.to_string()),
            SubstitutionError::UnderEnumerated { .. } => CliError::UnderEnumerated(e.to_string()),
            _ => CliError::Precondition(e.to_string()),
        }
    }
}

impl From<LaminationError> for CliError {
    fn from(e: LaminationError) -> Self {
        if e.is_under_enumeration() {
            CliError::UnderEnumerated(e.to_string())
        } else if e.is_size_cap() {
            CliError::SizeCap(e.to_string())
        } else if let LaminationError::Precondition(msg) = e {
            CliError::Precondition(msg)
        } else {
            CliError::Precondition(e.to_string())
        }
    }
}

impl From<HausdorffError> for CliError {
    fn from(e: HausdorffError) -> Self {
        match e {
            HausdorffError::UnderEnumerated { .. } => CliError::UnderEnumerated(e.to_string()),
            HausdorffError::Domain(_) => CliError::Usage(e.to_string()),
            _ => CliError::Precondition(e.to_string()),
        }
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        CliError::Precondition(e.to_string())
    }
}
