use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

/// One CSV cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i128),
    Float(f64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v.into())
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v.into())
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i128)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_owned())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

/// A CSV file with a fixed header.
#[derive(Debug, Clone)]
pub struct Table {
    pub stem: String,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    /// Parameters recorded in the manifest.
    pub params: Value,
}

impl Table {
    pub fn new(stem: impl Into<String>, header: &[&'static str], params: Value) -> Self {
        Table {
            stem: stem.into(),
            header: header.to_vec(),
            rows: Vec::new(),
            params,
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// Serialised CSV with LF line endings and 17 significant digits.
    pub fn to_csv(&self) -> Result<String, String> {
        let mut s = String::new();
        s.push_str(&self.header.join(","));
        s.push('\n');
        for row in &self.rows {
            for (i, c) in row.iter().enumerate() {
                if i > 0 {
                    s.push(',');
                }
                match c {
                    Cell::Int(v) => write!(s, "{v}").unwrap(),
                    Cell::Float(v) => {
                        if !v.is_finite() {
                            return Err(format!("{}: non-finite value in column {}", self.stem, self.header[i]));
                        }
                        write!(s, "{v:.16e}").unwrap()
                    }
                    Cell::Text(t) => {
                        if t.contains([',', '"', '\n']) {
                            write!(s, "\"{}\"", t.replace('"', "\"\"")).unwrap()
                        } else {
                            s.push_str(t)
                        }
                    }
                }
            }
            s.push('\n');
        }
        Ok(s)
    }
}

#[derive(Debug, Serialize)]
pub struct RunManifest<'a> {
    pub command: &'a str,
    pub argv: &'a [String],
    pub params: &'a Value,
    pub version: &'static str,
    pub threads: usize,
    pub budget: Value,
    pub wall_time_s: f64,
    pub output: String,
    pub columns: &'a [&'static str],
    pub rows: usize,
    pub sha256: String,
}

pub struct RunContext<'a> {
    pub command: &'a str,
    pub argv: &'a [String],
    pub threads: usize,
    pub budget: Value,
    pub wall_time_s: f64,
}

/// Writes `<stem>.csv` and `<stem>.json`, returning the CSV path and digest.
pub fn write_table(dir: &Path, table: &Table, ctx: &RunContext<'_>) -> Result<(PathBuf, String), String> {
    fs::create_dir_all(dir).map_err(|e| format!("cannot create {}: {e}", dir.display()))?;
    let csv = table.to_csv()?;
    let digest = hex::encode(Sha256::digest(csv.as_bytes()));
    let name = format!("{}.csv", table.stem);
    let path = dir.join(&name);
    fs::write(&path, &csv).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    let manifest = RunManifest {
        command: ctx.command,
        argv: ctx.argv,
        params: &table.params,
        version: env!("CARGO_PKG_VERSION"),
        threads: ctx.threads,
        budget: ctx.budget.clone(),
        wall_time_s: ctx.wall_time_s,
        output: name,
        columns: &table.header,
        rows: table.rows.len(),
        sha256: digest.clone(),
    };
    let json = serde_json::to_string_pretty(&manifest).map_err(|e| e.to_string())? + "\n";
    let mpath = dir.join(format!("{}.json", table.stem));
    fs::write(&mpath, json).map_err(|e| format!("cannot write {}: {e}", mpath.display()))?;
    Ok((path, digest))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let mut t = Table::new("x", &["d", "psi", "method"], Value::Null);
        t.push(vec![3u32.into(), 0.1.into(), "soft".into()]);
        t.push(vec![4u32.into(), 1.0.into(), "a,b".into()]);
        let s = t.to_csv().unwrap();
        assert_eq!(s, "d,psi,method\n3,1.0000000000000001e-1,soft\n4,1.0000000000000000e0,\"a,b\"\n");
    }

    #[test]
    fn nan_is_rejected() {
        let mut t = Table::new("x", &["v"], Value::Null);
        t.push(vec![f64::NAN.into()]);
        assert!(t.to_csv().is_err());
    }
}
