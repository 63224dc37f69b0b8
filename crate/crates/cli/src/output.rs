//! File formats: CSV fields `x,y,re,im` with LF endings, pretty JSON.

use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::commands::Failure;

pub const HEADER: [&str; 4] = ["x", "y", "re", "im"];

fn sink(path: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(File::create(p).map_err(|e| Failure::usage(format!("{}: {e}", p.display())))?),
        None => Box::new(io::stdout().lock()),
    })
}

/// Shortest round-trip form; exponent notation for very small or large magnitudes.
fn number(v: f64) -> String {
    let a = v.abs();
    if a == 0.0 || (1e-4..1e15).contains(&a) {
        v.to_string()
    } else {
        format!("{v:e}")
    }
}

pub fn write_field(path: Option<&Path>, rows: impl Iterator<Item = [f64; 4]>) -> Result<(), Failure> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(sink(path)?);
    w.write_record(HEADER).map_err(Failure::io)?;
    for row in rows {
        w.write_record(row.iter().map(|&v| number(v))).map_err(Failure::io)?;
    }
    w.flush().map_err(|e| Failure::io(e.into()))
}

pub fn read_field(path: &Path) -> Result<Vec<[f64; 4]>, Failure> {
    let mut r = csv::Reader::from_path(path).map_err(Failure::io)?;
    let header = r.headers().map_err(Failure::io)?.clone();
    if header.iter().ne(HEADER) {
        return Err(Failure::usage(format!("{}: expected header x,y,re,im", path.display())));
    }
    r.records()
        .map(|rec| {
            let rec = rec.map_err(Failure::io)?;
            let mut row = [0.0; 4];
            for (slot, cell) in row.iter_mut().zip(rec.iter()) {
                *slot = cell.trim().parse().map_err(|_| Failure::usage(format!("{}: bad number `{cell}`", path.display())))?;
            }
            Ok(row)
        })
        .collect()
}

pub fn write_json(path: Option<&Path>, value: &impl Serialize) -> Result<(), Failure> {
    let mut w = sink(path)?;
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure::usage(e.to_string()))?;
    writeln!(w, "{text}").map_err(|e| Failure::usage(e.to_string()))
}

/// `field.csv` → `field.json`.
pub fn sidecar_path(csv: &Path) -> PathBuf {
    csv.with_extension("json")
}
