// Copyright 2026 The fsqd Authors
// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;

use thiserror::Error;

/// Failure to read, parse or write one of the file formats.
///
/// Every variant carries the JSON path (`amplitudes[1][0]`,
/// `segments[2].t_start`, ...) or file path it refers to.
#[derive(Debug, Error)]
pub enum FormatError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),

    #[error("{field}: {message}")]
    Field { field: String, message: String },

    #[error("{field}: {source}")]
    Numeric { field: String, source: fsqd_core::Error },

    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },

    #[error("{}: {source}", path.display())]
    InFile { path: PathBuf, source: Box<FormatError> },
}

impl FormatError {
    pub(crate) fn field(field: impl Into<String>, message: impl Into<String>) -> Self {
        FormatError::Field { field: field.into(), message: message.into() }
    }

    pub(crate) fn numeric(field: impl Into<String>, source: fsqd_core::Error) -> Self {
        FormatError::Numeric { field: field.into(), source }
    }

    pub(crate) fn in_file(self, path: impl Into<PathBuf>) -> Self {
        FormatError::InFile { path: path.into(), source: Box::new(self) }
    }

    /// The underlying numerical error, if any.
    pub fn numeric_source(&self) -> Option<&fsqd_core::Error> {
        match self {
            FormatError::Numeric { source, .. } => Some(source),
            FormatError::InFile { source, .. } => source.numeric_source(),
            _ => None,
        }
    }
}
