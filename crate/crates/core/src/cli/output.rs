//! Curve artifacts: CSV bodies and JSON provenance sidecars.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::NetworkConfig;

/// How the probabilities of a curve were obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Analytic,
    Simulated,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint {
    pub x: f64,
    pub ps: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub std_err: Option<f64>,
}

/// Reproducibility stamp carried by every artifact.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Stamp {
    pub tool_version: String,
    pub git_revision: String,
    pub seed: u64,
}

impl Stamp {
    pub fn new(seed: u64) -> Self {
        Self {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            git_revision: env!("UCIN_GIT_REVISION").to_string(),
            seed,
        }
    }
}

/// A success-probability curve over one sweep variable.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PsCurve {
    pub sweep_name: String,
    /// Series name, e.g. `user_centric`.
    pub label: String,
    pub provenance: Provenance,
    pub points: Vec<CurvePoint>,
    pub config: NetworkConfig,
    pub stamp: Stamp,
}

impl PsCurve {
    /// Checks that `x` is strictly increasing and every `ps` lies in `[0, 1]`.
    pub fn new(
        sweep_name: &str,
        label: &str,
        provenance: Provenance,
        points: Vec<CurvePoint>,
        config: &NetworkConfig,
    ) -> Result<Self> {
        for pair in points.windows(2) {
            if !(pair[1].x > pair[0].x) {
                return Err(Error::Domain(format!(
                    "curve {label}: sweep values must increase strictly ({} then {})",
                    pair[0].x, pair[1].x
                )));
            }
        }
        if let Some(p) = points.iter().find(|p| !(0.0..=1.0).contains(&p.ps)) {
            return Err(Error::Numerical(format!("curve {label}: ps {} at x = {} outside [0, 1]", p.ps, p.x)));
        }
        Ok(Self {
            sweep_name: sweep_name.to_string(),
            label: label.to_string(),
            provenance,
            points,
            config: config.clone(),
            stamp: Stamp::new(config.seed()),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Real(f64),
    Int(u64),
    Flag(bool),
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Real(v)
    }
}
impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v)
    }
}
impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}
impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Flag(v)
    }
}
impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Real)
    }
}

/// Column-named rows; headers carry their unit as `name[unit]`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the header");
        self.rows.push(row);
    }

    /// Renders the table; floats use the shortest round-trip representation.
    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            for (i, cell) in row.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                let _ = match cell {
                    Cell::Real(v) => write!(out, "{v:?}"),
                    Cell::Int(v) => write!(out, "{v}"),
                    Cell::Flag(v) => write!(out, "{v}"),
                    Cell::Empty => Ok(()),
                };
            }
            out.push('\n');
        }
        out
    }
}

/// Everything a subcommand produces.
#[derive(Debug, Clone, Default)]
pub struct Report {
    pub table: Table,
    pub curves: Vec<PsCurve>,
    pub summary: serde_json::Map<String, serde_json::Value>,
    pub warnings: Vec<String>,
}

impl Report {
    pub fn note(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).expect("summary values serialize");
        self.summary.insert(key.to_string(), v);
    }

    pub fn warn(&mut self, warnings: impl IntoIterator<Item = String>) {
        for w in warnings {
            if !self.warnings.contains(&w) {
                self.warnings.push(w);
            }
        }
    }
}

/// Sidecar path next to the CSV: same stem, `.json` extension.
pub fn sidecar_path(csv: &Path) -> Result<PathBuf> {
    let side = csv.with_extension("json");
    if side == csv {
        return Err(Error::InvalidConfig(format!("--out {} would collide with its JSON sidecar", csv.display())));
    }
    Ok(side)
}

fn partial_path(path: &Path) -> PathBuf {
    let mut name = path.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".partial");
    path.with_file_name(name)
}

/// Writes both files via temporaries, leaving neither behind on failure.
pub fn write_artifacts(csv_path: &Path, csv: &str, sidecar: &serde_json::Value) -> Result<PathBuf> {
    let side_path = sidecar_path(csv_path)?;
    let json = serde_json::to_string_pretty(sidecar).map_err(|e| Error::Parse(e.to_string()))? + "\n";
    let (csv_tmp, side_tmp) = (partial_path(csv_path), partial_path(&side_path));
    let result = (|| -> Result<()> {
        fs::write(&csv_tmp, csv)?;
        fs::write(&side_tmp, &json)?;
        fs::rename(&csv_tmp, csv_path)?;
        fs::rename(&side_tmp, &side_path)?;
        Ok(())
    })();
    if result.is_err() {
        for p in [&csv_tmp, &side_tmp, csv_path, &side_path] {
            let _ = fs::remove_file(p);
        }
    }
    result.map(|_| side_path)
}
