//! Cell-by-cell comparison of computed results against the reference.

use std::fmt::{self, Write as _};

use serde::Serialize;
use zfr_core::CaseId;

use crate::reference::ReferenceTable;
use crate::table::{ResultSet, TableRow};

/// Absolute threshold for `R0`, `R`, `r`, `ω0`, `η0`.
pub const TOL_R: f64 = 2e-3;
/// Absolute threshold for `κ`, `δ`.
pub const TOL_KAPPA_DELTA: f64 = 5e-4;
/// Absolute floor and relative part of the `e(η0)` threshold.
pub const TOL_E_ABS: f64 = 0.05;
pub const TOL_E_REL: f64 = 0.10;
/// Relative fallback for the final `R0`.
pub const TOL_FINAL_REL: f64 = 0.01;

/// A compared column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Column {
    Theta,
    T0,
    BigR,
    R,
    Kappa,
    Delta,
    Eta0,
    EEta0,
    Omega0,
    R0,
}

impl Column {
    pub const ALL: [Column; 10] = [
        Column::Theta,
        Column::T0,
        Column::BigR,
        Column::R,
        Column::Kappa,
        Column::Delta,
        Column::Eta0,
        Column::EEta0,
        Column::Omega0,
        Column::R0,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Column::Theta => "theta",
            Column::T0 => "t0",
            Column::BigR => "R",
            Column::R => "r",
            Column::Kappa => "kappa",
            Column::Delta => "delta",
            Column::Eta0 => "eta0",
            Column::EEta0 => "e_eta0",
            Column::Omega0 => "omega0",
            Column::R0 => "R0",
        }
    }

    pub fn get(self, row: &TableRow) -> f64 {
        match self {
            Column::Theta => row.theta,
            Column::T0 => row.t0 as f64,
            Column::BigR => row.big_r,
            Column::R => row.r,
            Column::Kappa => row.kappa,
            Column::Delta => row.delta,
            Column::Eta0 => row.eta0,
            Column::EEta0 => row.e_eta0,
            Column::Omega0 => row.omega0,
            Column::R0 => row.r0,
        }
    }

    /// Pass threshold against a reference value; `None` means informational.
    pub fn threshold(self, reference: f64) -> Option<f64> {
        match self {
            Column::Theta | Column::T0 => None,
            Column::BigR | Column::R | Column::Eta0 | Column::Omega0 | Column::R0 => Some(TOL_R),
            Column::Kappa | Column::Delta => Some(TOL_KAPPA_DELTA),
            Column::EEta0 => Some(TOL_E_ABS.max(TOL_E_REL * reference.abs())),
        }
    }

    /// Whether the column depends on the `𝔴` log argument at a fixed point.
    pub fn w_dependent(self) -> bool {
        self == Column::EEta0
    }
}

impl fmt::Display for Column {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One compared cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CellDiff {
    pub case: CaseId,
    pub step: usize,
    pub column: Column,
    pub computed: f64,
    pub reference: f64,
    pub abs_diff: f64,
    pub threshold: Option<f64>,
    /// `None` for informational cells.
    pub passed: Option<bool>,
}

/// Final `R0` of a case, judged at both thresholds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FinalR0 {
    pub case: CaseId,
    pub computed: f64,
    pub reference: f64,
    pub abs_diff: f64,
    pub rel_diff: f64,
    pub within_abs: bool,
    pub within_rel: bool,
}

/// The full comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareReport {
    pub cells: Vec<CellDiff>,
    pub finals: Vec<FinalR0>,
    /// Reference rows absent from the results (for cases that are present).
    pub missing: Vec<(CaseId, usize)>,
    /// Result rows without a reference row.
    pub extra: Vec<(CaseId, usize)>,
    pub strict_paper: bool,
}

/// Compare every row present in `results` with the reference.
pub fn compare(results: &ResultSet, reference: &ReferenceTable) -> CompareReport {
    let mut report =
        CompareReport { cells: Vec::new(), finals: Vec::new(), missing: Vec::new(), extra: Vec::new(), strict_paper: results.strict_paper };
    for block in &results.cases {
        for row in &block.rows {
            let Some(rr) = reference.row(block.case, row.step) else {
                report.extra.push((block.case, row.step));
                continue;
            };
            let rr = rr.to_table_row();
            for col in Column::ALL {
                let (c, r) = (col.get(row), col.get(&rr));
                let abs_diff = (c - r).abs();
                let threshold = col.threshold(r);
                let passed = threshold.map(|t| abs_diff <= t + 1e-12);
                report.cells.push(CellDiff { case: block.case, step: row.step, column: col, computed: c, reference: r, abs_diff, threshold, passed });
            }
        }
        for rr in reference.rows_for(block.case) {
            if !block.rows.iter().any(|r| r.step == rr.step) {
                report.missing.push((block.case, rr.step));
            }
        }
        if let Some(last) = block.final_row() {
            let reference = reference.final_r0(block.case);
            let abs_diff = (last.r0 - reference).abs();
            let rel_diff = abs_diff / reference.abs();
            report.finals.push(FinalR0 {
                case: block.case,
                computed: last.r0,
                reference,
                abs_diff,
                rel_diff,
                within_abs: abs_diff <= TOL_R + 1e-12,
                within_rel: rel_diff <= TOL_FINAL_REL,
            });
        }
    }
    report
}

impl CompareReport {
    pub fn failures(&self) -> impl Iterator<Item = &CellDiff> {
        self.cells.iter().filter(|c| c.passed == Some(false))
    }

    pub fn structural_ok(&self) -> bool {
        self.missing.is_empty() && self.extra.is_empty()
    }

    /// All thresholded cells pass and no rows are missing or extra.
    pub fn passed(&self) -> bool {
        self.structural_ok() && self.failures().next().is_none()
    }

    /// Human-readable report: structure, final `R0`, then every failing cell.
    pub fn render(&self) -> String {
        let mut out = String::new();
        if self.strict_paper {
            let _ = writeln!(out, "mode: strict-paper; cells marked * depend on the w-term log argument");
        }
        for (case, step) in &self.missing {
            let _ = writeln!(out, "MISSING {case} step {step}: reference row has no computed counterpart");
        }
        for (case, step) in &self.extra {
            let _ = writeln!(out, "EXTRA   {case} step {step}: no reference row");
        }
        let _ = writeln!(out, "final R0 (thresholds: {TOL_R} absolute, {:.0}% relative)", TOL_FINAL_REL * 100.0);
        for f in &self.finals {
            let verdict = match (f.within_abs, f.within_rel) {
                (true, _) => "pass",
                (false, true) => "within 1% only",
                (false, false) => "FAIL",
            };
            let _ = writeln!(
                out,
                "  {:<6} computed {:.4}  reference {:.4}  |diff| {:.4}  rel {:.3}%  {verdict}",
                f.case.to_string(),
                f.computed,
                f.reference,
                f.abs_diff,
                100.0 * f.rel_diff
            );
        }
        let total = self.cells.iter().filter(|c| c.passed.is_some()).count();
        let failed = self.failures().count();
        let _ = writeln!(out, "cells: {} of {total} thresholded cells pass", total - failed);
        for c in self.failures() {
            let mark = if self.strict_paper && c.column.w_dependent() { "*" } else { "" };
            let _ = writeln!(
                out,
                "  FAIL {:<6} step {} {:<7}{mark} computed {:.6}  reference {:.6}  |diff| {:.6} > {:.6}",
                c.case.to_string(),
                c.step,
                c.column.name(),
                c.computed,
                c.reference,
                c.abs_diff,
                c.threshold.unwrap_or(0.0)
            );
        }
        let _ = writeln!(out, "overall: {}", if self.passed() { "PASS" } else { "FAIL" });
        out
    }
}

/// Cells whose values differ between two result sets (same case and step).
pub fn changed_cells(a: &ResultSet, b: &ResultSet) -> Vec<(CaseId, usize, Column)> {
    let mut out = Vec::new();
    for ba in &a.cases {
        let Some(bb) = b.block(ba.case) else { continue };
        for ra in &ba.rows {
            let Some(rb) = bb.rows.iter().find(|r| r.step == ra.step) else { continue };
            for col in Column::ALL {
                if col.get(ra) != col.get(rb) {
                    out.push((ba.case, ra.step, col));
                }
            }
        }
    }
    out
}
