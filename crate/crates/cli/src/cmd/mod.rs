pub mod bounds;
pub mod code;
pub mod construct;
pub mod divis;
pub mod group;
pub mod ilp;

use std::collections::BTreeSet;
use std::path::Path;

use serde_json::Value;
use subspace_core::code::{read_code, write_code, SubspaceCode};
use subspace_core::{Error, Result};

use crate::report::Report;

/// Dimension set from `--dims` (comma separated); all of 0..=v by default.
pub fn dims_or_all(dims: &Option<Vec<usize>>, v: usize) -> Result<BTreeSet<usize>> {
    match dims {
        None => Ok((0..=v).collect()),
        Some(list) => {
            if let Some(&k) = list.iter().find(|&&k| k > v) {
                return Err(Error::InvalidParameter(format!(
                    "dimension {k} exceeds ambient {v}"
                )));
            }
            Ok(list.iter().copied().collect())
        }
    }
}

/// Reads a code file, surfacing parser warnings in the report.
pub fn load_code(path: &Path, report: &mut Report) -> Result<SubspaceCode> {
    let parsed = read_code(path)?;
    for w in &parsed.warnings {
        report.line(format!("warning: {w}"));
    }
    Ok(parsed.code)
}

/// Writes `code` to `--out` when given and records it in the report.
pub fn save_code(code: &SubspaceCode, out: &Option<std::path::PathBuf>, report: &mut Report) -> Result<()> {
    if let Some(path) = out {
        write_code(code, path)?;
        report.line(format!("wrote {} codewords to {}", code.len(), path.display()));
        report.field("out", path.display().to_string());
    }
    Ok(())
}

pub fn dims_json(dist: &[usize]) -> Value {
    dist.iter().copied().collect::<Vec<_>>().into()
}

pub fn set_text(s: &BTreeSet<usize>) -> String {
    s.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(",")
}
