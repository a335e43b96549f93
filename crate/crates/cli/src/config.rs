//! Run configuration: flags layered over an optional `key = value` file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, ValueEnum};
use esd_core::dynamics::{CouplingParams, GeometryParams, IntegratorConfig};
use esd_core::esd::ScanOptions;
use esd_core::parallel::Execution;
use esd_core::switching::XReading;

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CouplingSource {
    Quoted,
    Geometry,
}

/// Options shared by every subcommand. Unset flags fall back to the config file.
#[derive(Args, Debug, Default, Clone)]
pub struct CommonArgs {
    /// `key = value` configuration file; explicit flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Initial state, e.g. bell:phi+, werner:psi+:sl=0.7, x2:x=1.6, file:rho.txt.
    #[arg(long, global = true)]
    pub state: Option<String>,
    /// Two-qubit local gate, e.g. X-I, Z-I, X-Z, u(1.5708,0)-I.
    #[arg(long, global = true)]
    pub gate: Option<String>,
    /// Switch time in units of 1/Gamma (evolve).
    #[arg(long = "switch-at", global = true)]
    pub switch_at: Option<f64>,
    /// Scan grid spacing, at most 0.02 [default 0.01].
    #[arg(long = "grid-step", global = true)]
    pub grid_step: Option<f64>,
    /// RK4 step [default 1e-4].
    #[arg(long, global = true)]
    pub dt: Option<f64>,
    /// Final time [default 15; scans of psi-type states use 40].
    #[arg(long, global = true)]
    pub horizon: Option<f64>,
    /// Steps between recorded samples [default 10].
    #[arg(long = "record-every", global = true)]
    pub record_every: Option<usize>,
    /// Coupling source [default quoted: Gamma12 0.79, Omega12 1.12].
    #[arg(long, value_enum, global = true)]
    pub coupling: Option<CouplingSource>,
    /// Interatomic distance over wavelength (geometry coupling).
    #[arg(long, global = true)]
    pub r12: Option<f64>,
    /// Dipole/axis cosine (geometry coupling).
    #[arg(long = "mu-dot-r", global = true)]
    pub mu_dot_r: Option<f64>,
    /// Atomic frequency term in units of Gamma [default 1].
    #[arg(long, global = true)]
    pub omega0: Option<f64>,
    /// Matrix used for "X" in gate labels: x (sigma-x) or y (sigma-y).
    #[arg(long = "x-reading", global = true)]
    pub x_reading: Option<String>,
    /// Scan evaluation: parallel or sequential.
    #[arg(long, global = true)]
    pub execution: Option<String>,
    /// Output file [default stdout].
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Output format [default csv].
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,
}

/// Fully resolved settings.
#[derive(Debug, Clone)]
pub struct Settings {
    pub state: Option<String>,
    pub gate: Option<String>,
    pub switch_at: Option<f64>,
    pub integrator: IntegratorConfig,
    pub coupling: CouplingParams,
    pub geometry: Option<GeometryParams>,
    pub scan: ScanOptions,
    pub reading: XReading,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub extra: BTreeMap<String, String>,
}

const KNOWN_KEYS: [&str; 17] = [
    "state", "gate", "switch-at", "grid-step", "dt", "horizon", "record-every", "coupling", "r12",
    "mu-dot-r", "omega0", "x-reading", "execution", "out", "format", "param", "values",
];

/// Parses `key = value` lines; `#` starts a comment, underscores in keys are
/// treated as dashes.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("config line {}: expected 'key = value'", n + 1)))?;
        let key = k.trim().replace('_', "-");
        if !KNOWN_KEYS.contains(&key.as_str()) {
            return Err(CliError::Usage(format!("config line {}: unknown key '{key}'", n + 1)));
        }
        map.insert(key, v.trim().to_string());
    }
    Ok(map)
}

fn read_config(path: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    parse_config_text(&text)
}

struct Layer<'a> {
    file: &'a BTreeMap<String, String>,
}

impl Layer<'_> {
    fn pick<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, CliError>
    where
        T::Err: std::fmt::Display,
    {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.file.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|e| CliError::Usage(format!("config key '{key}': {e}"))),
        }
    }

    fn pick_enum<T: ValueEnum>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, CliError> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.file.get(key) {
            None => Ok(None),
            Some(v) => T::from_str(v, true)
                .map(Some)
                .map_err(|e| CliError::Usage(format!("config key '{key}': {e}"))),
        }
    }
}

impl CommonArgs {
    pub fn resolve(self) -> Result<Settings, CliError> {
        let file = match &self.config {
            Some(p) => read_config(p)?,
            None => BTreeMap::new(),
        };
        let l = Layer { file: &file };

        let mut integrator = IntegratorConfig::default();
        if let Some(dt) = l.pick(self.dt, "dt")? {
            integrator.dt = dt;
        }
        if let Some(h) = l.pick(self.horizon, "horizon")? {
            integrator.horizon = h;
        }
        if let Some(r) = l.pick(self.record_every, "record-every")? {
            integrator.record_every = r;
        }
        let integrator = integrator.validated()?;

        let source = l.pick_enum(self.coupling, "coupling")?.unwrap_or(CouplingSource::Quoted);
        let r12 = l.pick(self.r12, "r12")?;
        let mu = l.pick(self.mu_dot_r, "mu-dot-r")?;
        let (mut coupling, geometry) = match source {
            CouplingSource::Quoted => {
                if r12.is_some() || mu.is_some() {
                    return Err(CliError::Usage("--r12/--mu-dot-r need --coupling geometry".into()));
                }
                (CouplingParams::quoted(), None)
            }
            CouplingSource::Geometry => {
                let (Some(r12), Some(mu)) = (r12, mu) else {
                    return Err(CliError::Usage("geometry coupling needs --r12 and --mu-dot-r".into()));
                };
                let g = GeometryParams::new(r12, mu)?;
                (CouplingParams::from_geometry(&g)?, Some(g))
            }
        };
        if let Some(w0) = l.pick(self.omega0, "omega0")? {
            coupling = coupling.with_omega0(w0).validated()?;
        }

        let mut scan = ScanOptions::default();
        if let Some(step) = l.pick(self.grid_step, "grid-step")? {
            scan.grid_step = step;
        }
        if let Some(exec) = l.pick::<Execution>(self.execution.as_deref().map(str::parse).transpose()?, "execution")? {
            scan.execution = exec;
        }
        let scan = scan.validated()?;

        let reading = l
            .pick::<XReading>(self.x_reading.as_deref().map(str::parse).transpose()?, "x-reading")?
            .unwrap_or_default();

        let mut extra = BTreeMap::new();
        for key in ["param", "values"] {
            if let Some(v) = file.get(key) {
                extra.insert(key.to_string(), v.clone());
            }
        }

        Ok(Settings {
            state: l.pick(self.state, "state")?,
            gate: l.pick(self.gate, "gate")?,
            switch_at: l.pick(self.switch_at, "switch-at")?,
            integrator,
            coupling,
            geometry,
            scan,
            reading,
            out: l.pick(self.out, "out")?,
            format: l.pick_enum(self.format, "format")?.unwrap_or(Format::Csv),
            extra,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_file_parsing() {
        let m = parse_config_text("# run\nstate = bell:phi+\ngrid_step = 0.02 # coarse\n\n").unwrap();
        assert_eq!(m["state"], "bell:phi+");
        assert_eq!(m["grid-step"], "0.02");
        assert!(parse_config_text("state bell").is_err());
        assert!(parse_config_text("colour = red").is_err());
    }

    #[test]
    fn geometry_requires_both_numbers() {
        let args = CommonArgs { coupling: Some(CouplingSource::Geometry), r12: Some(0.1), ..Default::default() };
        assert!(matches!(args.resolve(), Err(CliError::Usage(_))));
        let args = CommonArgs { r12: Some(0.1), ..Default::default() };
        assert!(args.resolve().is_err());
    }

    #[test]
    fn defaults_are_canonical() {
        let s = CommonArgs::default().resolve().unwrap();
        assert_eq!(s.coupling, CouplingParams::quoted());
        assert_eq!(s.integrator, IntegratorConfig::default());
        assert_eq!(s.format, Format::Csv);
    }
}
