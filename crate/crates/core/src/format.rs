//! The `angleset-v1` point-set file.
//!
//! ```json
//! {"format": "angleset-v1", "d": 3, "coord_type": "int",
//!  "points": [[0, 0, 1], [0, 1, 0]],
//!  "meta": {"k": 1, "c": "0.3", "order": "colex"}}
//! ```
//!
//! Integer coordinates are JSON integers. Decimal coordinates are strings so
//! that nothing passes through binary floating point.

use std::io::Write;
use std::path::Path;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::exact;
use crate::points::{EuclideanPointSet, LatticePointSet, PointSet};
use crate::precision::Precision;

pub const FORMAT_TAG: &str = "angleset-v1";

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Meta {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointFile {
    pub points: PointSet,
    pub meta: Meta,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    format: String,
    d: usize,
    coord_type: String,
    points: Vec<Vec<Value>>,
    #[serde(default)]
    meta: Meta,
}

/// Serialized text, one point per line.
pub fn to_string(file: &PointFile) -> String {
    let d = file.points.d();
    let (coord_type, rows): (&str, Vec<String>) = match &file.points {
        PointSet::Lattice(s) => (
            "int",
            s.points()
                .iter()
                .map(|p| join(p.iter().map(|x| x.to_string())))
                .collect(),
        ),
        PointSet::Euclidean(s) => (
            "decimal",
            s.points()
                .iter()
                .map(|p| join(p.iter().map(|x| format!("\"{}\"", exact::to_decimal_string(x, 0)))))
                .collect(),
        ),
    };
    let meta = serde_json::to_string(&file.meta).expect("meta serializes");
    let mut out = String::new();
    out.push_str("{\n");
    out.push_str(&format!("  \"format\": \"{FORMAT_TAG}\",\n"));
    out.push_str(&format!("  \"d\": {d},\n"));
    out.push_str(&format!("  \"coord_type\": \"{coord_type}\",\n"));
    out.push_str(&format!("  \"meta\": {meta},\n"));
    if rows.is_empty() {
        out.push_str("  \"points\": []\n");
    } else {
        out.push_str("  \"points\": [\n");
        for (i, row) in rows.iter().enumerate() {
            let sep = if i + 1 < rows.len() { "," } else { "" };
            out.push_str(&format!("    [{row}]{sep}\n"));
        }
        out.push_str("  ]\n");
    }
    out.push_str("}\n");
    out
}

fn join(items: impl Iterator<Item = String>) -> String {
    items.collect::<Vec<_>>().join(", ")
}

/// Writes through a temporary file in the target directory and renames it
/// into place.
pub fn write_point_file(path: &Path, file: &PointFile) -> Result<()> {
    write_atomic(path, to_string(file).as_bytes())
}

pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

pub fn read_point_file(path: &Path) -> Result<PointFile> {
    let text = std::fs::read_to_string(path)?;
    parse(&text)
}

pub fn parse(text: &str) -> Result<PointFile> {
    let raw: RawFile = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        msg: e.to_string(),
    })?;
    let key_line = |key: &str| locate_key(text, key);
    if raw.format != FORMAT_TAG {
        return Err(Error::Parse {
            line: key_line("format"),
            msg: format!("unsupported format {:?}, expected {FORMAT_TAG:?}", raw.format),
        });
    }
    if raw.d == 0 {
        return Err(Error::Parse {
            line: key_line("d"),
            msg: "dimension must be positive".into(),
        });
    }
    if let Some(c) = &raw.meta.c {
        exact::parse_decimal(c).map_err(|e| Error::Parse {
            line: key_line("meta"),
            msg: format!("meta.c: {e}"),
        })?;
    }
    let point_lines = locate_points(text);
    let line_of = |i: usize| point_lines.get(i).copied().unwrap_or_else(|| key_line("points"));
    for (i, p) in raw.points.iter().enumerate() {
        if p.len() != raw.d {
            return Err(Error::Parse {
                line: line_of(i),
                msg: format!("point {i} has {} coordinates, expected {}", p.len(), raw.d),
            });
        }
    }
    let points = match raw.coord_type.as_str() {
        "int" => {
            let mut rows = Vec::with_capacity(raw.points.len());
            for (i, p) in raw.points.iter().enumerate() {
                let row = p
                    .iter()
                    .map(|v| v.as_i64())
                    .collect::<Option<Vec<i64>>>()
                    .ok_or_else(|| Error::Parse {
                        line: line_of(i),
                        msg: format!("point {i}: coordinates must be JSON integers"),
                    })?;
                rows.push(row);
            }
            PointSet::Lattice(LatticePointSet::new(raw.d, rows).map_err(|e| Error::Parse {
                line: key_line("points"),
                msg: e.to_string(),
            })?)
        }
        "decimal" => {
            let mut rows: Vec<Vec<BigRational>> = Vec::with_capacity(raw.points.len());
            for (i, p) in raw.points.iter().enumerate() {
                let row = p
                    .iter()
                    .map(|v| match v {
                        Value::String(s) => exact::parse_decimal(s).ok(),
                        _ => None,
                    })
                    .collect::<Option<Vec<_>>>()
                    .ok_or_else(|| Error::Parse {
                        line: line_of(i),
                        msg: format!("point {i}: coordinates must be decimal strings"),
                    })?;
                rows.push(row);
            }
            PointSet::Euclidean(EuclideanPointSet::new(raw.d, rows, Precision::from_env()?)?)
        }
        other => {
            return Err(Error::Parse {
                line: key_line("coord_type"),
                msg: format!("coord_type must be \"int\" or \"decimal\", got {other:?}"),
            })
        }
    };
    Ok(PointFile { points, meta: raw.meta })
}

/// Line of the first occurrence of `"key"`, or 1.
fn locate_key(text: &str, key: &str) -> usize {
    let needle = format!("\"{key}\"");
    text.lines().position(|l| l.contains(&needle)).map_or(1, |i| i + 1)
}

/// Line on which each point's opening bracket sits. `points` is the only
/// nested array in the format, so second-level brackets are points.
fn locate_points(text: &str) -> Vec<usize> {
    let mut lines = Vec::new();
    let (mut line, mut depth) = (1, 0usize);
    let (mut in_string, mut escaped) = (false, false);
    for ch in text.chars() {
        if in_string {
            match (escaped, ch) {
                (true, _) => escaped = false,
                (false, '\\') => escaped = true,
                (false, '"') => in_string = false,
                _ => {}
            }
            if ch == '\n' {
                line += 1;
            }
            continue;
        }
        match ch {
            '"' => in_string = true,
            '\n' => line += 1,
            '[' => {
                depth += 1;
                if depth == 2 {
                    lines.push(line);
                }
            }
            ']' => depth = depth.saturating_sub(1),
            _ => {}
        }
    }
    lines
}
