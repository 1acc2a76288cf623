//! Paired observations: ingestion, built-in datasets and CSV output.

use std::io::{Read, Write};
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};

/// A bivariate sample stored column-wise.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairedSample {
    pub x1: Vec<f64>,
    pub x2: Vec<f64>,
    pub source: String,
}

const CABLE: [(f64, f64); 9] = [
    (5.1, 11.0),
    (9.2, 15.1),
    (9.3, 18.3),
    (11.8, 24.0),
    (17.7, 29.1),
    (19.4, 38.6),
    (22.1, 44.2),
    (26.7, 45.1),
    (37.3, 50.9),
];

const COMPONENTS: [(f64, f64); 20] = [
    (0.37, 6.93),
    (0.06, 2.42),
    (0.2, 0.2),
    (1.62, 2.34),
    (5.7, 1.96),
    (2.25, 4.6),
    (2.5, 0.09),
    (2.44, 7.27),
    (0.12, 0.06),
    (0.79, 8.61),
    (7.22, 1.38),
    (2.81, 5.05),
    (4.13, 0.52),
    (5.67, 1.11),
    (0.96, 3.54),
    (7.16, 2.38),
    (0.32, 1.89),
    (7.32, 1.54),
    (2.58, 8.61),
    (1.73, 1.22),
];

/// Names accepted by [`PairedSample::builtin`].
pub const BUILTINS: [&str; 2] = ["cable", "components"];

impl PairedSample {
    pub fn new(x1: Vec<f64>, x2: Vec<f64>, source: impl Into<String>) -> Result<Self> {
        if x1.len() != x2.len() {
            return Err(Error::InvalidParameter(format!(
                "column lengths differ: {} vs {}",
                x1.len(),
                x2.len()
            )));
        }
        if x1.is_empty() {
            return Err(Error::InsufficientData { needed: 1, got: 0 });
        }
        if let Some(i) = x1.iter().zip(&x2).position(|(a, b)| !a.is_finite() || !b.is_finite()) {
            return Err(Error::InvalidParameter(format!("row {} is not finite", i + 1)));
        }
        Ok(PairedSample { x1, x2, source: source.into() })
    }

    pub fn from_pairs(pairs: &[(f64, f64)], source: impl Into<String>) -> Result<Self> {
        let (x1, x2) = pairs.iter().copied().unzip();
        Self::new(x1, x2, source)
    }

    pub fn n(&self) -> usize {
        self.x1.len()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.x1.iter().copied().zip(self.x2.iter().copied())
    }

    /// Lifetimes of two types of cable installation (n = 9) or failure times
    /// of two components of a system (n = 20).
    pub fn builtin(name: &str) -> Option<Self> {
        let rows: &[(f64, f64)] = match name {
            "cable" => &CABLE,
            "components" => &COMPONENTS,
            _ => return None,
        };
        Some(Self::from_pairs(rows, format!("builtin:{name}")).expect("embedded data is valid"))
    }

    /// A builtin name or a path to a two-column CSV file.
    pub fn ingest(spec: &str) -> Result<Self> {
        if let Some(s) = Self::builtin(spec) {
            return Ok(s);
        }
        Self::read_csv_path(spec)
    }

    pub fn read_csv_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = std::fs::File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::read_csv(file, path.display().to_string())
    }

    /// Two numeric columns, comma separated, with an optional header line.
    pub fn read_csv<R: Read>(mut reader: R, source: impl Into<String>) -> Result<Self> {
        let mut buf = Vec::new();
        reader.read_to_end(&mut buf)?;
        // the reader's own line count skips comment lines
        let line_at = |pos: Option<&csv::Position>, fallback: usize| {
            pos.map_or(fallback, |p| {
                let mut at = (p.byte() as usize).min(buf.len());
                while at < buf.len() && (buf[at] == b'#' || buf[at] == b'\n' || buf[at] == b'\r') {
                    at += if buf[at] == b'#' {
                        buf[at..].iter().position(|&b| b == b'\n').unwrap_or(buf.len() - at)
                    } else {
                        1
                    };
                }
                buf[..at].iter().filter(|&&b| b == b'\n').count() + 1
            })
        };
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .from_reader(&buf[..]);
        let (mut x1, mut x2) = (Vec::new(), Vec::new());
        for (idx, rec) in rdr.records().enumerate() {
            let rec = rec.map_err(|e| Error::Parse { line: line_at(e.position(), idx + 1), msg: e.to_string() })?;
            let line = line_at(rec.position(), idx + 1);
            if rec.len() != 2 {
                return Err(Error::Parse { line, msg: format!("expected 2 columns, found {}", rec.len()) });
            }
            let parsed: Vec<std::result::Result<f64, _>> = rec.iter().map(str::parse::<f64>).collect();
            if idx == 0 && parsed.iter().all(|p| p.is_err()) {
                continue;
            }
            let mut vals = [0.0; 2];
            for (k, (cell, p)) in rec.iter().zip(parsed).enumerate() {
                match p {
                    Ok(v) if v.is_finite() => vals[k] = v,
                    _ => return Err(Error::Parse { line, msg: format!("non-numeric cell '{cell}'") }),
                }
            }
            x1.push(vals[0]);
            x2.push(vals[1]);
        }
        if x1.is_empty() {
            return Err(Error::Parse { line: 1, msg: "no data rows".into() });
        }
        Self::new(x1, x2, source)
    }

    /// Two-column CSV with an `x1,x2` header, values at full precision.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let io = |e: csv::Error| Error::Io(e.to_string());
        w.write_record(["x1", "x2"]).map_err(io)?;
        for (a, b) in self.pairs() {
            w.write_record([format!("{a:?}"), format!("{b:?}")]).map_err(io)?;
        }
        w.flush()?;
        Ok(())
    }
}
