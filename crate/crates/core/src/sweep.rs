//! Baseline sensitivity to one parameter.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dynamics::{CouplingParams, IntegratorConfig};
use crate::error::{Error, Result};
use crate::esd::{rate_aware_config, SwitchAnalyzer};
use crate::io::SweepRow;
use crate::parallel::{map_ordered, Execution};
use crate::state::StateSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepParam {
    Omega12,
    Gamma12,
    /// Werner weight.
    P,
    /// Werner linear entropy.
    Sl,
    /// Coherence-state parameter.
    X,
}

impl SweepParam {
    pub fn name(self) -> &'static str {
        match self {
            SweepParam::Omega12 => "omega12",
            SweepParam::Gamma12 => "gamma12",
            SweepParam::P => "p",
            SweepParam::Sl => "sl",
            SweepParam::X => "x",
        }
    }
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [SweepParam::Omega12, SweepParam::Gamma12, SweepParam::P, SweepParam::Sl, SweepParam::X]
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown sweep parameter '{s}'")))
    }
}

/// First death and revival of the unswitched state at each value.
pub fn sweep(
    spec: &StateSpec,
    param: SweepParam,
    values: &[f64],
    params: &CouplingParams,
    cfg: &IntegratorConfig,
    exec: Execution,
) -> Result<Vec<SweepRow>> {
    let jobs: Vec<Result<(StateSpec, CouplingParams)>> = values
        .iter()
        .map(|&v| match param {
            SweepParam::Omega12 => Ok((spec.clone(), CouplingParams { omega12: v, ..*params }.validated()?)),
            SweepParam::Gamma12 => Ok((spec.clone(), CouplingParams { gamma12: v, ..*params }.validated()?)),
            SweepParam::P | SweepParam::Sl | SweepParam::X => {
                Ok((spec.with_parameter(param.name(), v)?, *params))
            }
        })
        .collect::<Vec<_>>();
    let jobs = jobs.into_iter().collect::<Result<Vec<_>>>()?;
    let points: Vec<(f64, (StateSpec, CouplingParams))> = values.iter().copied().zip(jobs).collect();
    map_ordered(exec, &points, |(value, (spec, p))| {
        let cfg = rate_aware_config(spec, cfg);
        let a = SwitchAnalyzer::new(&spec.build()?, p, &cfg)?;
        let tau_d = a.tau_d();
        Ok(SweepRow { value: *value, tau_d, tau_r: tau_d.and_then(|d| a.baseline().first_revival_after(d)) })
    })
    .into_iter()
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_grid_gives_no_rows() {
        let spec: StateSpec = "bell:phi+".parse().unwrap();
        let rows = sweep(
            &spec,
            SweepParam::Omega12,
            &[],
            &CouplingParams::quoted(),
            &IntegratorConfig::default(),
            Execution::Sequential,
        )
        .unwrap();
        assert!(rows.is_empty());
    }

    #[test]
    fn parameter_mismatch_rejected() {
        let spec: StateSpec = "bell:phi+".parse().unwrap();
        let cfg = IntegratorConfig::default();
        let p = CouplingParams::quoted();
        assert!(sweep(&spec, SweepParam::Sl, &[0.5], &p, &cfg, Execution::Sequential).is_err());
        assert!(sweep(&spec, SweepParam::Gamma12, &[1.5], &p, &cfg, Execution::Sequential).is_err());
        assert!("omega".parse::<SweepParam>().is_err());
    }
}
