// SPDX-License-Identifier: MIT OR Apache-2.0

//! Dataset loading.
//!
//! Two input formats are understood: plain text with one value per line,
//! and an annotated JSON document
//! `{"name", "window"?, "change_points"?, "time_series"}`.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde_json::Value;

use crate::error::{ClaspError, Result};
use crate::series::TimeSeries;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Plain,
    Annotated,
}

impl FromStr for Format {
    type Err = ClaspError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plain" => Ok(Format::Plain),
            "annotated" => Ok(Format::Annotated),
            other => Err(ClaspError::invalid(format!(
                "unknown format '{other}' (expected plain or annotated)"
            ))),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Plain => "plain",
            Format::Annotated => "annotated",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DatasetRecord {
    pub name: String,
    pub window: Option<usize>,
    pub change_points: Option<Vec<usize>>,
    pub series: TimeSeries,
}

fn parse_error(location: impl Into<String>, message: impl Into<String>) -> ClaspError {
    ClaspError::Parse {
        location: location.into(),
        message: message.into(),
    }
}

fn field_error(field: &str, message: impl Into<String>) -> ClaspError {
    ClaspError::InvalidField {
        field: field.to_string(),
        message: message.into(),
    }
}

/// One value per line; blank lines are skipped.
pub fn parse_plain(text: &str) -> Result<Vec<f64>> {
    let mut values = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let v: f64 = line
            .parse()
            .map_err(|_| parse_error(format!("line {}", i + 1), format!("'{line}' is not a number")))?;
        if !v.is_finite() {
            return Err(parse_error(format!("line {}", i + 1), format!("non-finite value '{line}'")));
        }
        values.push(v);
    }
    if values.is_empty() {
        return Err(ClaspError::Empty);
    }
    Ok(values)
}

fn as_count(v: &Value, field: &str) -> Result<usize> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| field_error(field, format!("expected a non-negative integer, found {v}")))
}

/// Parses an annotated JSON document.
pub fn parse_annotated(text: &str) -> Result<DatasetRecord> {
    let doc: Value = serde_json::from_str(text).map_err(|e| {
        parse_error(format!("line {} column {}", e.line(), e.column()), e.to_string())
    })?;
    let obj = doc
        .as_object()
        .ok_or_else(|| parse_error("document", "expected a JSON object"))?;

    let name = match obj.get("name") {
        Some(Value::String(s)) => s.clone(),
        Some(other) => return Err(field_error("name", format!("expected a string, found {other}"))),
        None => return Err(field_error("name", "missing")),
    };

    let raw = match obj.get("time_series") {
        Some(Value::Array(a)) => a,
        Some(other) => {
            return Err(field_error("time_series", format!("expected an array, found {other}")))
        }
        None => return Err(field_error("time_series", "missing")),
    };
    let values = raw
        .iter()
        .enumerate()
        .map(|(i, v)| {
            v.as_f64()
                .ok_or_else(|| field_error(&format!("time_series[{i}]"), format!("expected a number, found {v}")))
        })
        .collect::<Result<Vec<f64>>>()?;
    if values.is_empty() {
        return Err(field_error("time_series", "empty"));
    }
    let n = values.len();

    let window = match obj.get("window") {
        None | Some(Value::Null) => None,
        Some(v) => {
            let w = as_count(v, "window")?;
            if w == 0 {
                return Err(field_error("window", "must be >= 1"));
            }
            Some(w)
        }
    };

    let change_points = match obj.get("change_points") {
        None | Some(Value::Null) => None,
        Some(Value::Array(a)) => {
            let mut cps = Vec::with_capacity(a.len());
            for (i, v) in a.iter().enumerate() {
                let field = format!("change_points[{i}]");
                let cp = as_count(v, &field)?;
                if cp == 0 || cp >= n {
                    return Err(field_error(
                        &field,
                        format!("change point {cp} outside (0, {n}) for {n} values"),
                    ));
                }
                if cps.last().is_some_and(|&prev| prev >= cp) {
                    return Err(field_error(&field, "change points must be strictly ascending"));
                }
                cps.push(cp);
            }
            Some(cps)
        }
        Some(other) => {
            return Err(field_error("change_points", format!("expected an array, found {other}")))
        }
    };

    Ok(DatasetRecord {
        name,
        window,
        change_points,
        series: TimeSeries::new(values)?,
    })
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| ClaspError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

/// Reads a dataset from `path`.
pub fn load_series(path: &Path, format: Format) -> Result<DatasetRecord> {
    let text = read(path)?;
    match format {
        Format::Plain => {
            let values = parse_plain(&text).map_err(|e| match e {
                ClaspError::Parse { location, message } => ClaspError::Parse {
                    location: format!("{}:{location}", path.display()),
                    message,
                },
                other => other,
            })?;
            let name = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            Ok(DatasetRecord {
                name,
                window: None,
                change_points: None,
                series: TimeSeries::new(values)?,
            })
        }
        Format::Annotated => parse_annotated(&text),
    }
}

/// Change points given either as comma-separated integers or as the path
/// of an annotated document.
pub fn parse_cp_list(list: &str) -> Result<Vec<usize>> {
    let path = Path::new(list);
    if path.is_file() {
        let record = parse_annotated(&read(path)?)?;
        return record
            .change_points
            .ok_or_else(|| field_error("change_points", format!("missing in {list}")));
    }
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<usize>()
                .map_err(|_| parse_error("change point list", format!("'{s}' is not a non-negative integer")))
        })
        .collect()
}
