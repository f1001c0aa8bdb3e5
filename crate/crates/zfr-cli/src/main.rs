use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use zfr_cli::config::parse_case_list;
use zfr_cli::{compare, OutputFormat, Pin, ReferenceTable, ResultSet, RunConfig};

/// Explicit zero-free region constants: run the optimization, compare with
/// the published tables, or run the invariant suite.
#[derive(Parser)]
#[command(name = "zfr", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the parameter optimization and emit one row per outer step.
    Run(RunArgs),
    /// Compare a results file (CSV or JSON) with the published tables.
    Compare {
        #[arg(long)]
        results: PathBuf,
    },
    /// Run the invariant and property suite.
    Check {
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Comma-separated case ids, e.g. `II.A,IV.B`.
    #[arg(long, conflicts_with = "all")]
    cases: Option<String>,
    /// All eleven cases (the default).
    #[arg(long)]
    all: bool,
    #[arg(long)]
    format: Option<OutputFormat>,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Pins `theta=…,t0=…,r=…,R=…` applied to every selected case.
    #[arg(long)]
    pin: Option<String>,
    /// Use `log q0` instead of `log(q0 Y0)` in the w terms.
    #[arg(long)]
    strict_paper: bool,
    /// Omit the timestamp header.
    #[arg(long)]
    no_timestamp: bool,
    /// JSON file mirroring the run configuration; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Absolute quadrature tolerance.
    #[arg(long)]
    quad_tol: Option<f64>,
}

fn build_config(a: &RunArgs) -> anyhow::Result<RunConfig> {
    let mut cfg = match &a.config {
        Some(p) => RunConfig::from_json_file(p)?,
        None => RunConfig::default(),
    };
    if let Some(list) = &a.cases {
        cfg.cases = parse_case_list(list)?;
    } else if a.all {
        cfg.cases = zfr_core::CaseId::ALL.to_vec();
    }
    if let Some(f) = a.format {
        cfg.format = f;
    }
    if let Some(spec) = &a.pin {
        let pin = Pin::parse(spec)?;
        for &case in &cfg.cases {
            cfg.pins.insert(case, pin);
        }
    }
    cfg.strict_paper |= a.strict_paper;
    cfg.no_timestamp |= a.no_timestamp;
    if let Some(t) = a.quad_tol {
        cfg.quadrature_tol = t;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn cmd_run(a: &RunArgs) -> anyhow::Result<ExitCode> {
    let cfg = build_config(a)?;
    let outcome = zfr_cli::run(&cfg);
    let text = match cfg.format {
        OutputFormat::Csv => outcome.results.to_csv(),
        OutputFormat::Json => outcome.results.to_json(),
        OutputFormat::Pretty => outcome.results.to_pretty(),
    };
    match &a.out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => print!("{text}"),
    }
    for d in outcome.diagnostics() {
        eprintln!("zfr: {d}");
    }
    Ok(ExitCode::from(outcome.exit_code() as u8))
}

fn cmd_compare(path: &PathBuf) -> anyhow::Result<ExitCode> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let results = ResultSet::parse_any(&text).with_context(|| format!("parsing {}", path.display()))?;
    let report = compare(&results, &ReferenceTable::published());
    print!("{}", report.render());
    Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn cmd_check(seed: u64) -> ExitCode {
    let outcomes = zfr_cli::check(seed);
    for c in &outcomes {
        let verdict = match (c.passed, c.informational) {
            (true, _) => "PASS",
            (false, true) => "INFO",
            (false, false) => "FAIL",
        };
        println!("{verdict} {}: {}", c.name, c.detail);
    }
    if outcomes.iter().all(|c| c.ok()) {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match &cli.command {
        Command::Run(a) => cmd_run(a),
        Command::Compare { results } => cmd_compare(results),
        Command::Check { seed } => Ok(cmd_check(*seed)),
    };
    res.unwrap_or_else(|e| {
        eprintln!("zfr: error: {e:#}");
        ExitCode::from(2)
    })
}
