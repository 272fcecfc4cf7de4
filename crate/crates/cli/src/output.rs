//! Report emission: CSV with a header row, or one JSON document per run.

use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use anyhow::{Context, Result};
use clap::ValueEnum;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Serializes `rows` in `format`. CSV rows must be flat records.
pub fn render<T: Serialize>(rows: &[T], format: Format) -> Result<Vec<u8>> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for row in rows {
                w.serialize(row)?;
            }
            Ok(w.into_inner().context("flushing CSV output")?)
        }
        Format::Json => {
            let mut out = serde_json::to_vec_pretty(rows)?;
            out.push(b'\n');
            Ok(out)
        }
    }
}

/// Writes the finished report to `path`, or stdout when absent.
pub fn emit(bytes: &[u8], path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => {
            let mut f = File::create(p).with_context(|| format!("creating {}", p.display()))?;
            f.write_all(bytes)?;
            f.flush()?;
        }
        None => {
            let mut out = io::stdout().lock();
            out.write_all(bytes)?;
            out.flush()?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize)]
    struct Row {
        name: &'static str,
        n: u128,
        #[serde(serialize_with = "palindrome_lab::report::sig12")]
        r: f64,
    }

    #[test]
    fn csv_has_header_and_quotes() {
        let rows = [Row { name: "a,b", n: 1 << 100, r: 1.0 / 3.0 }];
        let text = String::from_utf8(render(&rows, Format::Csv).unwrap()).unwrap();
        assert_eq!(text, "name,n,r\n\"a,b\",1267650600228229401496703205376,0.333333333333\n");
    }

    #[test]
    fn json_mirrors_field_names() {
        let rows = [Row { name: "x", n: 7, r: 0.5 }];
        let v: serde_json::Value = serde_json::from_slice(&render(&rows, Format::Json).unwrap()).unwrap();
        assert_eq!(v[0]["name"], "x");
        assert_eq!(v[0]["n"], 7);
        assert_eq!(v[0]["r"], 0.5);
    }
}
