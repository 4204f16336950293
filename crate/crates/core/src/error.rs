// SPDX-License-Identifier: MIT OR Apache-2.0

use thiserror::Error;

/// Errors produced by the segmentation library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClaspError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The series has no valid split for the requested window width.
    #[error("series of length {n} is too short for window width {w} (need at least {min})")]
    SeriesTooShort { n: usize, w: usize, min: usize },

    #[error("non-finite value at offset {offset}")]
    NonFinite { offset: usize },

    #[error("empty time series")]
    Empty,

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error("invalid field `{field}`: {message}")]
    InvalidField { field: String, message: String },

    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
}

impl ClaspError {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Self::InvalidParameter(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, ClaspError>;
