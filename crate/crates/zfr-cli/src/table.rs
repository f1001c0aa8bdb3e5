//! Result tables: the row type and its CSV, JSON and pretty renderings.
//!
//! CSV and JSON carry full `f64` precision so that parsing an emitted table
//! gives back the same values; the pretty form rounds to table precision.

use std::fmt::Write as _;

use anyhow::{anyhow, bail, Context};
use serde::{Deserialize, Serialize};
use zfr_core::cases::Family;
use zfr_core::{CaseId, CaseResult};

/// CSV header, in column order.
pub const CSV_HEADER: [&str; 11] = ["step", "theta", "t0", "R", "r", "kappa", "delta", "eta0", "e_eta0", "omega0", "R0"];

/// One row per outer step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub step: usize,
    pub theta: f64,
    pub t0: u64,
    #[serde(rename = "R")]
    pub big_r: f64,
    pub r: f64,
    pub kappa: f64,
    pub delta: f64,
    pub eta0: f64,
    pub e_eta0: f64,
    pub omega0: f64,
    #[serde(rename = "R0")]
    pub r0: f64,
    /// The frequency `α` (Cases II and III); not part of the CSV columns.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    /// Whether `r < R0 ≤ r + 10⁻³`; not part of the CSV columns.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub converged: Option<bool>,
}

impl TableRow {
    pub fn from_result(case: CaseId, res: &CaseResult) -> TableRow {
        let p = &res.point;
        let alpha = matches!(case.family(), Family::II | Family::III).then_some(p.alpha);
        TableRow {
            step: res.step,
            theta: p.theta,
            t0: p.t0,
            big_r: p.big_r,
            r: p.r,
            kappa: p.kappa,
            delta: p.delta,
            eta0: p.eta0,
            e_eta0: res.e_eta0,
            omega0: p.omega0,
            r0: res.r0,
            alpha,
            converged: Some(res.converged),
        }
    }

    /// The row restricted to the CSV columns.
    pub fn csv_projection(&self) -> TableRow {
        TableRow { alpha: None, converged: None, ..*self }
    }

    fn csv_fields(&self) -> [String; 11] {
        [
            self.step.to_string(),
            self.theta.to_string(),
            self.t0.to_string(),
            self.big_r.to_string(),
            self.r.to_string(),
            self.kappa.to_string(),
            self.delta.to_string(),
            self.eta0.to_string(),
            self.e_eta0.to_string(),
            self.omega0.to_string(),
            self.r0.to_string(),
        ]
    }

    fn from_csv_record(rec: &csv::StringRecord) -> anyhow::Result<TableRow> {
        if rec.len() != CSV_HEADER.len() {
            bail!("expected {} fields, found {}", CSV_HEADER.len(), rec.len());
        }
        let f = |i: usize| -> anyhow::Result<f64> {
            rec[i].trim().parse::<f64>().with_context(|| format!("column {}: '{}'", CSV_HEADER[i], &rec[i]))
        };
        Ok(TableRow {
            step: rec[0].trim().parse().with_context(|| format!("column step: '{}'", &rec[0]))?,
            theta: f(1)?,
            t0: rec[2].trim().parse().with_context(|| format!("column t0: '{}'", &rec[2]))?,
            big_r: f(3)?,
            r: f(4)?,
            kappa: f(5)?,
            delta: f(6)?,
            eta0: f(7)?,
            e_eta0: f(8)?,
            omega0: f(9)?,
            r0: f(10)?,
            alpha: None,
            converged: None,
        })
    }
}

/// All rows of one case.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseBlock {
    pub case: CaseId,
    pub rows: Vec<TableRow>,
}

impl CaseBlock {
    pub fn final_row(&self) -> Option<&TableRow> {
        self.rows.last()
    }
}

/// A complete set of results, as written by `zfr run`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ResultSet {
    /// Unix time of the run; omitted with `--no-timestamp`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generated: Option<u64>,
    /// Whether the `𝔴` terms used `log q0` (the strict reading).
    #[serde(default)]
    pub strict_paper: bool,
    pub cases: Vec<CaseBlock>,
}

const CASE_PREFIX: &str = "# case ";
const GENERATED_PREFIX: &str = "# generated unix=";
const STRICT_LINE: &str = "# mode strict-paper";

impl ResultSet {
    pub fn block(&self, case: CaseId) -> Option<&CaseBlock> {
        self.cases.iter().find(|b| b.case == case)
    }

    pub fn row_count(&self) -> usize {
        self.cases.iter().map(|b| b.rows.len()).sum()
    }

    /// The same results with rows restricted to the CSV columns.
    pub fn csv_projection(&self) -> ResultSet {
        ResultSet {
            generated: self.generated,
            strict_paper: self.strict_paper,
            cases: self
                .cases
                .iter()
                .map(|b| CaseBlock { case: b.case, rows: b.rows.iter().map(TableRow::csv_projection).collect() })
                .collect(),
        }
    }

    /// CSV: optional header comments, then per case a `# case X` line, the
    /// column header, and one line per step.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        if let Some(t) = self.generated {
            let _ = writeln!(out, "{GENERATED_PREFIX}{t}");
        }
        if self.strict_paper {
            let _ = writeln!(out, "{STRICT_LINE}");
        }
        for block in &self.cases {
            let _ = writeln!(out, "{CASE_PREFIX}{}", block.case);
            let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
            w.write_record(CSV_HEADER).expect("writing to memory");
            for row in &block.rows {
                w.write_record(row.csv_fields()).expect("writing to memory");
            }
            out.push_str(&String::from_utf8(w.into_inner().expect("flush to memory")).expect("ascii output"));
        }
        out
    }

    pub fn from_csv(text: &str) -> anyhow::Result<ResultSet> {
        let mut set = ResultSet::default();
        let mut current: Option<CaseBlock> = None;
        let mut saw_header = false;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            let ctx = || format!("line {}", lineno + 1);
            if line.trim().is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix(CASE_PREFIX) {
                set.cases.extend(current.take());
                let case: CaseId = rest.trim().parse().map_err(|e| anyhow!("{}: {e}", ctx()))?;
                current = Some(CaseBlock { case, rows: Vec::new() });
                saw_header = false;
            } else if let Some(rest) = line.strip_prefix(GENERATED_PREFIX) {
                set.generated = Some(rest.trim().parse().with_context(ctx)?);
            } else if line.trim() == STRICT_LINE {
                set.strict_paper = true;
            } else if line.starts_with('#') {
                continue;
            } else {
                let block = current.as_mut().ok_or_else(|| anyhow!("{}: row before any '# case' line", ctx()))?;
                let mut rdr = csv::ReaderBuilder::new().has_headers(false).from_reader(line.as_bytes());
                let rec = rdr.records().next().ok_or_else(|| anyhow!("{}: empty record", ctx()))?.with_context(ctx)?;
                if !saw_header {
                    let names: Vec<&str> = rec.iter().map(str::trim).collect();
                    if names != CSV_HEADER {
                        bail!("{}: expected header '{}'", ctx(), CSV_HEADER.join(","));
                    }
                    saw_header = true;
                    continue;
                }
                block.rows.push(TableRow::from_csv_record(&rec).with_context(ctx)?);
            }
        }
        set.cases.extend(current);
        Ok(set)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("results serialize") + "\n"
    }

    pub fn from_json(text: &str) -> anyhow::Result<ResultSet> {
        Ok(serde_json::from_str(text)?)
    }

    /// Parse either format, sniffing JSON by its leading brace.
    pub fn parse_any(text: &str) -> anyhow::Result<ResultSet> {
        if text.trim_start().starts_with('{') {
            Self::from_json(text)
        } else {
            Self::from_csv(text)
        }
    }

    /// Fixed-width table at publication precision.
    pub fn to_pretty(&self) -> String {
        let mut out = String::new();
        if let Some(t) = self.generated {
            let _ = writeln!(out, "generated at unix time {t}");
        }
        if self.strict_paper {
            let _ = writeln!(out, "mode: strict-paper (log q0 in the w terms)");
        }
        for block in &self.cases {
            let _ = writeln!(out, "Case {}", block.case);
            let _ = writeln!(
                out,
                "{:>4} {:>7} {:>5} {:>7} {:>6} {:>7} {:>7} {:>7} {:>8} {:>6} {:>7} {:>7}",
                "step", "theta", "t0", "R", "r", "kappa", "delta", "eta0", "e(eta0)", "omega0", "R0", "alpha"
            );
            for r in &block.rows {
                let alpha = r.alpha.map_or_else(|| "-".to_string(), |a| format!("{a:.4}"));
                let mark = if r.converged == Some(false) { "  (fixed point not reached)" } else { "" };
                let _ = writeln!(
                    out,
                    "{:>4} {:>7.4} {:>5} {:>7.4} {:>6.3} {:>7.4} {:>7.4} {:>7.4} {:>8.3} {:>6.3} {:>7.4} {:>7}{mark}",
                    r.step, r.theta, r.t0, r.big_r, r.r, r.kappa, r.delta, r.eta0, r.e_eta0, r.omega0, r.r0, alpha
                );
            }
        }
        out
    }
}
