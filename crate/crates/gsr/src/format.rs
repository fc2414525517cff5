//! The structure file format.
//!
//! A structure file is a JSON document
//!
//! ```json
//! {"format_version":1,"m":2,"n":3,"r":1,"assoc_mode":"paper_ends",
//!  "add":[[0,1],[1,1]],"mu":[[0,0,0,0,0,0,0,1]]}
//! ```
//!
//! with `add` given row by row and one flat `mu` block per Γ-tuple. Writing
//! always produces the canonical byte form returned by
//! [`GammaSemiring::to_canonical_json`], so a file's digest is stable.

use std::fmt;

use gsr_core::{AdditionTable, AssocMode, Element, GammaSemiring};
use serde::Deserialize;

pub const FORMAT_VERSION: u64 = 1;

/// A malformed input document, with a 1-based position when one is known.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    pub line: Option<usize>,
    pub column: Option<usize>,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.line, self.column) {
            (Some(l), Some(c)) => write!(f, "line {l}, column {c}: {}", self.message),
            _ => f.write_str(&self.message),
        }
    }
}

impl ParseError {
    fn at(text: &str, offset: Option<usize>, message: impl Into<String>) -> Self {
        let (line, column) = match offset {
            Some(off) => {
                let before = &text[..off.min(text.len())];
                let line = before.matches('\n').count() + 1;
                let column = before.rsplit('\n').next().map_or(0, |s| s.chars().count()) + 1;
                (Some(line), Some(column))
            }
            None => (None, None),
        };
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }

    fn from_json(err: serde_json::Error) -> Self {
        let (line, column) = if err.line() == 0 {
            (None, None)
        } else {
            (Some(err.line()), Some(err.column()))
        };
        // serde_json appends its own " at line L column C"; drop it.
        let full = err.to_string();
        let message = match full.rfind(" at line ") {
            Some(i) => full[..i].to_string(),
            None => full,
        };
        ParseError {
            line,
            column,
            message,
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawStructure {
    format_version: u64,
    m: usize,
    n: usize,
    r: usize,
    #[serde(default)]
    assoc_mode: AssocMode,
    add: Vec<Vec<u64>>,
    mu: Vec<Vec<u64>>,
}

/// Byte offset of the value of a top-level `"key"`, used to point semantic
/// errors at the offending field.
fn field_offset(text: &str, key: &str) -> Option<usize> {
    let needle = format!("\"{key}\"");
    let start = text.find(&needle)?;
    let rest = &text[start + needle.len()..];
    let colon = rest.find(':')?;
    let after = &rest[colon + 1..];
    let skip = after.len() - after.trim_start().len();
    Some(start + needle.len() + colon + 1 + skip)
}

fn narrow(
    text: &str,
    field: &str,
    here: Option<usize>,
    v: u64,
    bound: usize,
) -> Result<Element, ParseError> {
    if (v as usize) < bound {
        Ok(v as Element)
    } else {
        Err(ParseError::at(
            text,
            here,
            format!(
                "\"{field}\" contains {v}, which is not an element of a carrier of size {bound}"
            ),
        ))
    }
}

fn addition_rows(
    text: &str,
    field: &str,
    here: Option<usize>,
    rows: &[Vec<u64>],
    m: usize,
) -> Result<AdditionTable, ParseError> {
    if rows.len() != m {
        return Err(ParseError::at(
            text,
            here,
            format!("\"{field}\" has {} rows, expected {m}", rows.len()),
        ));
    }
    let mut cells = Vec::with_capacity(m * m);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != m {
            return Err(ParseError::at(
                text,
                here,
                format!(
                    "\"{field}\" row {i} has {} entries, expected {m}",
                    row.len()
                ),
            ));
        }
        for &v in row {
            cells.push(narrow(text, field, here, v, m)?);
        }
    }
    AdditionTable::new(m, cells).map_err(|e| ParseError::at(text, here, e.to_string()))
}

/// Parse a structure file.
pub fn parse_structure(text: &str) -> Result<GammaSemiring, ParseError> {
    let raw: RawStructure = serde_json::from_str(text).map_err(ParseError::from_json)?;
    if raw.format_version != FORMAT_VERSION {
        return Err(ParseError::at(
            text,
            field_offset(text, "format_version"),
            format!(
                "unsupported format_version {}, expected {FORMAT_VERSION}",
                raw.format_version
            ),
        ));
    }
    let add = addition_rows(text, "add", field_offset(text, "add"), &raw.add, raw.m)?;
    let mu_at = field_offset(text, "mu");
    let mut mu = Vec::new();
    for block in &raw.mu {
        for &v in block {
            mu.push(narrow(text, "mu", mu_at, v, raw.m)?);
        }
    }
    let expected_blocks = (raw.r as u128).checked_pow(raw.n.saturating_sub(1) as u32);
    if expected_blocks != Some(raw.mu.len() as u128) {
        return Err(ParseError::at(
            text,
            field_offset(text, "mu"),
            format!(
                "\"mu\" has {} blocks, expected r^(n-1) = {}",
                raw.mu.len(),
                expected_blocks.map_or("too many".into(), |b| b.to_string())
            ),
        ));
    }
    if let Some((i, b)) = raw
        .mu
        .iter()
        .enumerate()
        .find(|(_, b)| Some(b.len() as u128) != (raw.m as u128).checked_pow(raw.n as u32))
    {
        return Err(ParseError::at(
            text,
            field_offset(text, "mu"),
            format!("\"mu\" block {i} has {} cells, expected m^n", b.len()),
        ));
    }
    GammaSemiring::new(raw.n, raw.r, add, mu, raw.assoc_mode)
        .map_err(|e| ParseError::at(text, None, e.to_string()))
}

/// The canonical bytes of a structure.
pub fn serialize_structure(s: &GammaSemiring) -> String {
    s.to_canonical_json()
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawAddition {
    Rows(Vec<Vec<u64>>),
    Object { add: Vec<Vec<u64>> },
}

/// Parse an addition table given either as a bare array of rows or as any
/// object with an `"add"` field (so a structure file also works).
pub fn parse_addition(text: &str) -> Result<AdditionTable, ParseError> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(ParseError::from_json)?;
    let rows = match serde_json::from_value::<RawAddition>(value) {
        Ok(RawAddition::Rows(rows)) | Ok(RawAddition::Object { add: rows }) => rows,
        Err(_) => {
            return Err(ParseError::at(
                text,
                Some(0),
                "expected an array of rows or an object with an \"add\" field",
            ))
        }
    };
    let m = rows.len();
    if m == 0 {
        return Err(ParseError::at(text, Some(0), "addition table is empty"));
    }
    let here = field_offset(text, "add").or(Some(0));
    addition_rows(text, "add", here, &rows, m)
}

/// The addition table in file form.
pub fn serialize_addition(add: &AdditionTable) -> String {
    let rows: Vec<&[Element]> = add.rows().collect();
    let mut out = serde_json::to_string(&rows).expect("rows serialize");
    out.push('\n');
    out
}
