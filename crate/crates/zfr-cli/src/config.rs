//! Run configuration: which cases, which pins, which output.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context};
use serde::{Deserialize, Serialize};
use zfr_core::error_budget::WLogMode;
use zfr_core::quadrature::QuadratureConfig;
use zfr_core::{CaseId, OptimizerConfig};

/// Output format of `zfr run`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
    Pretty,
}

impl FromStr for OutputFormat {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> anyhow::Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            "pretty" => Ok(OutputFormat::Pretty),
            other => bail!("unknown format '{other}' (expected csv, json or pretty)"),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
            OutputFormat::Pretty => "pretty",
        })
    }
}

/// Optional overrides of `(θ, t0, r, R)` for one case.
///
/// * all four set: the row is evaluated at the pinned point, no search;
/// * only `theta` and/or `R`: the search runs with `θ` fixed and/or the
///   outer iteration started at `R`;
/// * `t0` or `r` without all four: rejected.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Pin {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t0: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    #[serde(rename = "R", default, skip_serializing_if = "Option::is_none")]
    pub big_r: Option<f64>,
}

/// A pin that fixes every free parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FullPin {
    pub theta: f64,
    pub t0: u64,
    pub r: f64,
    pub big_r: f64,
}

impl Pin {
    /// Parse `K=V,...` with keys `theta`, `t0`, `r`, `R`.
    pub fn parse(spec: &str) -> anyhow::Result<Pin> {
        let mut pin = Pin::default();
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (k, v) = item.split_once('=').ok_or_else(|| anyhow!("pin '{item}' is not of the form K=V"))?;
            let (k, v) = (k.trim(), v.trim());
            let num = || v.parse::<f64>().with_context(|| format!("pin {k}: '{v}' is not a number"));
            match k {
                "theta" => pin.theta = Some(num()?),
                "t0" => pin.t0 = Some(v.parse().with_context(|| format!("pin t0: '{v}' is not a positive integer"))?),
                "r" => pin.r = Some(num()?),
                "R" => pin.big_r = Some(num()?),
                _ => bail!("unknown pin key '{k}' (expected theta, t0, r or R)"),
            }
        }
        pin.validate()?;
        Ok(pin)
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        if (self.t0.is_some() || self.r.is_some()) && self.full().is_none() {
            bail!("pinning t0 or r requires all of theta, t0, r and R");
        }
        Ok(())
    }

    pub fn full(&self) -> Option<FullPin> {
        Some(FullPin { theta: self.theta?, t0: self.t0?, r: self.r?, big_r: self.big_r? })
    }

    pub fn is_empty(&self) -> bool {
        *self == Pin::default()
    }
}

/// Everything `zfr run` needs.  Also the schema of the JSON config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub cases: Vec<CaseId>,
    pub pins: BTreeMap<CaseId, Pin>,
    pub quadrature_tol: f64,
    pub format: OutputFormat,
    /// Use `log q0` instead of `log(q0 Y0)` inside the `𝔴` terms.
    pub strict_paper: bool,
    pub no_timestamp: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            cases: CaseId::ALL.to_vec(),
            pins: BTreeMap::new(),
            quadrature_tol: QuadratureConfig::default().abs_tol,
            format: OutputFormat::Csv,
            strict_paper: false,
            no_timestamp: false,
        }
    }
}

/// Parse a comma-separated case list; unknown ids are an error.
pub fn parse_case_list(list: &str) -> anyhow::Result<Vec<CaseId>> {
    let mut out = Vec::new();
    for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let id: CaseId = item.parse().map_err(|e| anyhow!("{e}"))?;
        if !out.contains(&id) {
            out.push(id);
        }
    }
    if out.is_empty() {
        bail!("empty case list");
    }
    Ok(out)
}

impl RunConfig {
    /// Load a JSON config file.
    pub fn from_json_file(path: &Path) -> anyhow::Result<RunConfig> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let cfg: RunConfig = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        if self.cases.is_empty() {
            bail!("no cases selected");
        }
        if !(self.quadrature_tol > 0.0 && self.quadrature_tol.is_finite()) {
            bail!("quadrature tolerance must be positive, got {}", self.quadrature_tol);
        }
        for (case, pin) in &self.pins {
            pin.validate().with_context(|| format!("pin for {case}"))?;
        }
        Ok(())
    }

    pub fn w_log(&self) -> WLogMode {
        if self.strict_paper {
            WLogMode::Strict
        } else {
            WLogMode::Combined
        }
    }

    /// Optimizer settings for one case, with any partial pin applied.
    pub fn optimizer_config(&self, case: CaseId) -> OptimizerConfig {
        let mut cfg = OptimizerConfig { w_log: self.w_log(), ..OptimizerConfig::default() };
        cfg.quadrature.abs_tol = self.quadrature_tol;
        if let Some(pin) = self.pins.get(&case) {
            cfg.theta_pin = pin.theta;
            cfg.initial_r = pin.big_r;
        }
        cfg
    }
}
