use std::str::FromStr;

use super::{PointConfig, ProjPoint};
use crate::arith::{Field, FieldSpec};
use crate::error::{Error, Result};
use crate::poly::parse_scalar;

/// The field named by a leading `field ...` line, if present.
///
/// Accepted forms are `field p=11`, `field p=11,k=2` and `field Q`.
pub fn read_field_header(text: &str) -> Result<Option<FieldSpec>> {
    for line in text.lines().map(str::trim) {
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        return match line.strip_prefix("field") {
            Some(rest) => FieldSpec::from_str(&rest.split_whitespace().collect::<String>()).map(Some),
            None => Ok(None),
        };
    }
    Ok(None)
}

/// One point per line, coordinates separated by commas; `#` starts a comment line.
pub fn parse_points<F: Field>(field: &F, text: &str) -> Result<PointConfig<F>> {
    let mut points = Vec::new();
    let mut offset = 0;
    for line in text.lines() {
        let start = offset;
        offset += line.len() + 1;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') || t.starts_with("field") {
            continue;
        }
        let coords = t
            .split(',')
            .map(|c| parse_scalar(field, c.trim()).map_err(|e| shift(e, start)))
            .collect::<Result<Vec<_>>>()?;
        points.push(ProjPoint::new(field, coords)?);
    }
    let n = match points.first() {
        Some(p) => p.dim(),
        None => return Err(Error::invalid("no points in input")),
    };
    PointConfig::new(field, n, points)
}

fn shift(e: Error, by: usize) -> Error {
    match e {
        Error::Parse { pos, msg } => Error::Parse { pos: pos + by, msg },
        other => other,
    }
}
