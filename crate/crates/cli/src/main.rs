//! `esdsim`: evolve, switch and scan two-qubit collective-decay dynamics.

mod config;
mod validate;

use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use esd_core::dynamics::{build_liouvillian, Evolver};
use esd_core::esd::scan_windows;
use esd_core::io::{write_sweep_csv, write_table_csv, write_trajectory_csv, write_window_csv, TrajectoryFile};
use esd_core::state::StateSpec;
use esd_core::sweep::{sweep, SweepParam};
use esd_core::switching::{SwitchEvent, TwoQubitGate};
use esd_core::tables::{reproduce_table, TableContext, TABLE_IDS};

use config::{CommonArgs, Format, Settings};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] esd_core::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    /// Invariant checks that ran to completion but did not hold.
    #[error("{0} invariant check(s) failed")]
    Invariants(usize),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_numerical() => 3,
            CliError::Invariants(_) => 3,
            _ => 2,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "esdsim", version, about = "Entanglement sudden death under local switching")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Integrate one trajectory, optionally with a single switch.
    Evolve,
    /// Classify switching times over the pre-death window.
    Scan,
    /// Reproduce a published table (1-8 or "all") and compare.
    Table { id: String },
    /// Baseline death and revival times across one parameter.
    Sweep {
        /// omega12, gamma12, p, sl or x.
        #[arg(long)]
        param: Option<String>,
        /// Comma-separated values; an empty list yields only the header.
        #[arg(long, allow_hyphen_values = true)]
        values: Option<String>,
    },
    /// Run the invariant suite on canonical states (or --state).
    Validate,
}

fn require<'a>(v: &'a Option<String>, flag: &str) -> Result<&'a str, CliError> {
    v.as_deref().ok_or_else(|| CliError::Usage(format!("--{flag} is required")))
}

fn gate(s: &Settings) -> Result<TwoQubitGate, CliError> {
    Ok(require(&s.gate, "gate")?.parse::<TwoQubitGate>()?.with_reading(s.reading))
}

fn coupling_lines(s: &Settings) -> Vec<String> {
    let c = &s.coupling;
    let mut lines = Vec::new();
    if let Some(g) = &s.geometry {
        lines.push(format!("coupling=geometry r12={} mu_dot_r={}", g.r12_over_lambda, g.mu_dot_r));
    } else {
        lines.push("coupling=quoted".to_string());
    }
    lines.push(format!("gamma={} gamma12={} omega12={} omega0={}", c.gamma, c.gamma12, c.omega12, c.omega0));
    lines
}

/// Geometry-derived couplings differ from the quoted pair, so make them visible.
fn announce_geometry(s: &Settings) {
    if s.geometry.is_some() {
        eprintln!(
            "geometry coupling: Gamma12 = {:.6}, Omega12 = {:.6}",
            s.coupling.gamma12, s.coupling.omega12
        );
    }
}

fn emit(s: &Settings, text: &str) -> Result<(), CliError> {
    match &s.out {
        Some(p) => write_file(p, text),
        None => {
            std::io::stdout().lock().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text)
        .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))
}

fn json<T: serde::Serialize>(v: &T) -> Result<String, CliError> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn cmd_evolve(s: &Settings) -> Result<(), CliError> {
    let spec: StateSpec = require(&s.state, "state")?.parse()?;
    let schedule = match (&s.gate, s.switch_at) {
        (Some(_), Some(t)) => vec![SwitchEvent::new(t, gate(s)?)?],
        (None, None) => Vec::new(),
        _ => return Err(CliError::Usage("--gate and --switch-at go together".into())),
    };
    announce_geometry(s);
    let evolver = Evolver::new(build_liouvillian(&s.coupling)?, s.integrator)?;
    let traj = evolver.evolve(&spec.build()?, &schedule)?;

    let mut meta = vec![format!("state={spec}")];
    meta.extend(coupling_lines(s));
    meta.push(format!(
        "dt={} record_every={} horizon={}",
        s.integrator.dt, s.integrator.record_every, s.integrator.horizon
    ));
    let file = TrajectoryFile::from_trajectory(&traj, meta);
    let text = match s.format {
        Format::Csv => write_trajectory_csv(&file),
        Format::Json => json(&file)?,
    };
    emit(s, &text)
}

fn cmd_scan(s: &Settings) -> Result<(), CliError> {
    let spec: StateSpec = require(&s.state, "state")?.parse()?;
    let g = gate(s)?;
    announce_geometry(s);
    let report = scan_windows(&spec, &g, &s.coupling, &s.scan, &s.integrator)?;
    let text = match s.format {
        Format::Csv => write_window_csv(&report.grid)?,
        Format::Json => json(&report)?,
    };
    emit(s, &text)?;
    // Data goes to stdout or the file; the human summary never mixes into it.
    if s.out.is_some() {
        println!("{}", report.summary());
    } else {
        eprintln!("{}", report.summary());
    }
    Ok(())
}

fn cmd_table(s: &Settings, id: &str) -> Result<(), CliError> {
    let ids: Vec<u8> = if id.eq_ignore_ascii_case("all") {
        TABLE_IDS.to_vec()
    } else {
        match id.parse::<u8>() {
            Ok(n) if TABLE_IDS.contains(&n) => vec![n],
            _ => return Err(CliError::Usage(format!("unknown table '{id}' (expected 1-8 or all)"))),
        }
    };
    announce_geometry(s);
    let ctx = TableContext::new(s.coupling, s.integrator, s.scan, s.reading);
    let reports = ids.iter().map(|&i| reproduce_table(i, &ctx)).collect::<Result<Vec<_>, _>>()?;
    for r in &reports {
        print!("{}", r.to_text());
    }
    if let Some(path) = &s.out {
        let text = match s.format {
            Format::Csv => write_table_csv(&reports)?,
            Format::Json => json(&reports)?,
        };
        write_file(path, &text)?;
    }
    Ok(())
}

fn parse_values(text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| CliError::Usage(format!("bad sweep value '{t}'"))))
        .collect()
}

fn cmd_sweep(s: &Settings, param: Option<String>, values: Option<String>) -> Result<(), CliError> {
    let spec: StateSpec = require(&s.state, "state")?.parse()?;
    let param = param.or_else(|| s.extra.get("param").cloned());
    let param: SweepParam = require(&param, "param")?.parse()?;
    let values = values.or_else(|| s.extra.get("values").cloned()).unwrap_or_default();
    let values = parse_values(&values)?;
    announce_geometry(s);
    let rows = sweep(&spec, param, &values, &s.coupling, &s.integrator, s.scan.execution)?;
    let text = match s.format {
        Format::Csv => write_sweep_csv(param.name(), &rows)?,
        Format::Json => json(&serde_json::json!({ "param": param.name(), "rows": rows }))?,
    };
    emit(s, &text)
}

fn run(cli: Cli) -> Result<(), CliError> {
    let settings = cli.common.resolve()?;
    match cli.command {
        Command::Evolve => cmd_evolve(&settings),
        Command::Scan => cmd_scan(&settings),
        Command::Table { id } => cmd_table(&settings, &id),
        Command::Sweep { param, values } => cmd_sweep(&settings, param, values),
        Command::Validate => validate::run(&settings),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("esdsim: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
