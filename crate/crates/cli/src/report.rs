use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use stable_info::{ConsistencyRecord, ScoreMethod, Tolerance};

use crate::args::Format;
use crate::error::{CliError, CliResult};

pub const SCHEMA_VERSION: u32 = 1;

/// Everything one `validate` run produced, as written to disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub schema_version: u32,
    pub alpha: f64,
    pub v: f64,
    pub s: f64,
    pub tier: u8,
    pub tolerances: Tolerance,
    pub score_method: ScoreMethod,
    pub gate: f64,
    pub records: Vec<ConsistencyRecord>,
    pub rhs: f64,
    pub closed_form_lhs: Option<f64>,
    pub wall_time_seconds: f64,
    pub engine_version: String,
}

impl ValidationReport {
    pub fn read(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text).map_err(|source| CliError::Report {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report is serializable");
        s.push('\n');
        s
    }

    pub fn max_rel_err(&self) -> Option<f64> {
        self.records
            .iter()
            .map(|r| r.rel_err)
            .try_fold(0.0f64, |m, r| r.map(|r| m.max(r)))
    }

    /// Every row evaluated and within the gate.
    pub fn passes(&self) -> bool {
        self.max_rel_err().is_some_and(|m| m <= self.gate)
    }

    /// Console summary; depends only on report fields other than wall time.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        let score = match self.score_method {
            ScoreMethod::Analytic => "analytic".to_string(),
            ScoreMethod::LogDerivativeFd { fd_step } => format!("log-derivative fd, step {fd_step:e}"),
        };
        let _ = writeln!(out, "Tier {} consistency check (engine {})", self.tier, self.engine_version);
        let _ = writeln!(out, "alpha = {}, v = {}, s = {}", self.alpha, self.v, self.s);
        let _ = writeln!(
            out,
            "score: {score}; eps_abs = {:e}, eps_rel = {:e}",
            self.tolerances.eps_abs, self.tolerances.eps_rel
        );
        let _ = writeln!(out, "RHS (score integral) = {:.10}", self.rhs);
        if let Some(l) = self.closed_form_lhs {
            let _ = writeln!(out, "LHS (closed form)    = {l:.10}");
        }
        let _ = writeln!(out);
        let _ = writeln!(
            out,
            "{:<13} {:<14} {:<14} {:<11} Rel Error",
            "Step Size h", "LHS", "RHS", "Abs Error"
        );
        for r in &self.records {
            let h = r.h.map_or_else(|| "closed form".to_string(), |h| format!("{h:.1e}"));
            match (r.lhs, r.abs_err, r.rel_err) {
                (Some(l), Some(a), Some(e)) => {
                    let _ = writeln!(out, "{h:<13} {l:<14.10} {:<14.10} {a:<11.3e} {e:.3e}", r.rhs);
                }
                _ => {
                    let why = r.failure.as_deref().unwrap_or("not evaluated");
                    let _ = writeln!(out, "{h:<13} failed: {why}");
                }
            }
        }
        let _ = writeln!(out);
        let verdict = if self.passes() { "PASS" } else { "FAIL" };
        match self.max_rel_err() {
            Some(m) => {
                let _ = writeln!(out, "max rel error {m:.3e}, gate {:e}: {verdict}", self.gate);
            }
            None => {
                let _ = writeln!(out, "some rows failed, gate {:e}: {verdict}", self.gate);
            }
        }
        out
    }

    pub fn records_table(&self) -> Table {
        let mut t = Table::new(&["h", "lhs", "rhs", "abs_err", "rel_err", "failure"]);
        for r in &self.records {
            t.push(vec![
                Cell::opt(r.h),
                Cell::opt(r.lhs),
                Cell::Num(r.rhs),
                Cell::opt(r.abs_err),
                Cell::opt(r.rel_err),
                r.failure.clone().map_or(Cell::Missing, Cell::Text),
            ]);
        }
        t
    }
}

/// The MFI integrand and its factors on a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntegrandCurve {
    pub x_grid: Vec<f64>,
    pub u0: Vec<f64>,
    pub delta_score: Vec<f64>,
    pub integrand: Vec<f64>,
}

impl IntegrandCurve {
    pub fn table(&self) -> Table {
        let mut t = Table::new(&["x", "u0", "delta_score", "integrand"]);
        for i in 0..self.x_grid.len() {
            t.push(
                [self.x_grid[i], self.u0[i], self.delta_score[i], self.integrand[i]]
                    .into_iter()
                    .map(Cell::Num)
                    .collect(),
            );
        }
        t
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
    Missing,
}

impl Cell {
    pub fn opt(x: Option<f64>) -> Self {
        x.map_or(Cell::Missing, Cell::Num)
    }

    fn render(&self, format: Format) -> String {
        match (self, format) {
            // shortest representation that round-trips; `+ 0.0` drops the sign of zero
            (Cell::Num(x), Format::Table) => {
                let x = x + 0.0;
                if x == 0.0 || (1e-4..1e15).contains(&x.abs()) {
                    format!("{x}")
                } else {
                    format!("{x:e}")
                }
            }
            (Cell::Num(x), _) => format!("{:.16e}", x + 0.0),
            (Cell::Text(s), _) => s.clone(),
            (Cell::Missing, _) => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(x) => serde_json::Number::from_f64(*x).map_or(Value::Null, Value::Number),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Missing => Value::Null,
        }
    }
}

/// Rows with named columns, rendered as tab-separated text, CSV or JSON.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    headers: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(headers: &[&str]) -> Self {
        Self {
            headers: headers.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let obj: Map<String, Value> =
                            self.headers.iter().cloned().zip(row.iter().map(Cell::json)).collect();
                        Value::Object(obj)
                    })
                    .collect();
                let mut s = serde_json::to_string_pretty(&rows).expect("rows are serializable");
                s.push('\n');
                s
            }
            Format::Table | Format::Csv => {
                let sep = if format == Format::Csv { b',' } else { b'\t' };
                let mut w = csv::WriterBuilder::new().delimiter(sep).from_writer(Vec::new());
                w.write_record(&self.headers).expect("in-memory write");
                for row in &self.rows {
                    w.write_record(row.iter().map(|c| c.render(format)))
                        .expect("in-memory write");
                }
                String::from_utf8(w.into_inner().expect("in-memory flush")).expect("cells are UTF-8")
            }
        }
    }
}

/// Writes to `path`, or to stdout when there is none.
pub fn emit(text: &str, path: Option<&Path>) -> CliResult<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::io(p, e)),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::io("<stdout>", e))
        }
    }
}
