//! Sudden-death detection, switch classification and window scanning.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dynamics::{
    build_liouvillian, concurrence_of, CouplingParams, EventMark, Evolver, IntegratorConfig, Sample,
    Trajectory, TIME_EPS,
};
use crate::error::{Error, Result};
use crate::metrics::concurrence_x;
use crate::parallel::{map_ordered, Execution};
use crate::state::{DensityMatrix, StateSpec};
use crate::switching::{apply_switch, SwitchEvent, TwoQubitGate};

/// Equality band separating Delays/Hastens from Unchanged.
pub const EQUALITY_BAND: f64 = 1e-3;
/// Width to which crossing times are bisected.
pub const CROSSING_TOL: f64 = 1e-7;
/// Width to which window boundaries are bisected by default.
pub const BOUNDARY_TOL: f64 = 1e-4;
/// Largest sample spacing allowed around a crossing.
pub const MAX_SAMPLE_GAP: f64 = 1e-3 + 1e-12;
/// Largest accepted scan grid step.
pub const MAX_GRID_STEP: f64 = 0.02;
/// Horizon used for states that decay through the slow antisymmetric channel.
pub const SLOW_CHANNEL_HORIZON: f64 = 40.0;
/// Largest concurrence change tolerated across a local switch.
pub const SWITCH_JUMP_TOL: f64 = 1e-10;
/// Concurrence of a non-X state below this counts as dead.
const NON_X_ALIVE_EPS: f64 = 1e-10;

/// `max(c1, c2)` without the clamp at zero.
pub fn unclamped_concurrence(rho: &DensityMatrix) -> Result<f64> {
    Ok(concurrence_x(rho)?.unclamped())
}

/// Signed entanglement indicator: positive exactly when entangled.
fn indicator(s: &Sample) -> f64 {
    s.unclamped().unwrap_or(s.concurrence - NON_X_ALIVE_EPS)
}

fn indicator_of(rho: &DensityMatrix) -> Result<f64> {
    let (c, b) = concurrence_of(rho.matrix())?;
    Ok(b.map_or(c - NON_X_ALIVE_EPS, |b| b.unclamped()))
}

fn alive(s: &Sample) -> bool {
    indicator(s) > 0.0
}

/// Death (`+ → −`) and revival (`− → +`) crossings of the entanglement
/// indicator.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct EsdReport {
    pub deaths: Vec<f64>,
    pub revivals: Vec<f64>,
    /// No death before the horizon and concurrence positive throughout.
    pub no_esd: bool,
}

impl EsdReport {
    pub fn first_death(&self) -> Option<f64> {
        self.deaths.first().copied()
    }

    pub fn first_revival(&self) -> Option<f64> {
        self.revivals.first().copied()
    }

    pub fn first_death_after(&self, t: f64) -> Option<f64> {
        self.deaths.iter().copied().find(|&d| d > t)
    }

    pub fn first_revival_after(&self, t: f64) -> Option<f64> {
        self.revivals.iter().copied().find(|&r| r > t)
    }
}

/// Locate all crossings in `traj`, each bisected on re-evaluated dynamics.
pub fn detect_esd(traj: &Trajectory, evolver: &Evolver) -> Result<EsdReport> {
    let mut report = EsdReport::default();
    let mut min_c = f64::INFINITY;
    for s in &traj.samples {
        min_c = min_c.min(s.concurrence);
    }
    for w in traj.samples.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        let was_alive = alive(a);
        if was_alive == alive(b) {
            continue;
        }
        let gap = b.tau - a.tau;
        if gap > MAX_SAMPLE_GAP {
            return Err(Error::TooSparse { tau: a.tau, gap });
        }
        let (mut lo, mut hi) = (a.tau, b.tau);
        while hi - lo > CROSSING_TOL {
            let mid = 0.5 * (lo + hi);
            let rho = evolver.state_at(traj, mid)?;
            if (indicator_of(&rho)? > 0.0) == was_alive {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let root = 0.5 * (lo + hi);
        if was_alive {
            report.deaths.push(root);
        } else {
            report.revivals.push(root);
        }
    }
    report.no_esd = report.deaths.is_empty() && min_c > 0.0;
    Ok(report)
}

/// Extend the horizon for states whose entanglement lives in the slow
/// antisymmetric channel.
pub fn rate_aware_config(spec: &StateSpec, cfg: &IntegratorConfig) -> IntegratorConfig {
    if spec.is_psi_type() {
        IntegratorConfig { horizon: cfg.horizon.max(SLOW_CHANNEL_HORIZON), ..*cfg }
    } else {
        *cfg
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WindowClass {
    Avoids,
    Delays,
    Hastens,
    Unchanged,
    NoEsdBaseline,
}

impl WindowClass {
    pub const ALL: [WindowClass; 5] = [
        WindowClass::Avoids,
        WindowClass::Delays,
        WindowClass::Hastens,
        WindowClass::Unchanged,
        WindowClass::NoEsdBaseline,
    ];

    pub fn label(self) -> &'static str {
        match self {
            WindowClass::Avoids => "Avoids",
            WindowClass::Delays => "Delays",
            WindowClass::Hastens => "Hastens",
            WindowClass::Unchanged => "Unchanged",
            WindowClass::NoEsdBaseline => "NoEsdBaseline",
        }
    }
}

impl fmt::Display for WindowClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for WindowClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        WindowClass::ALL
            .into_iter()
            .find(|c| c.label().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Parse(format!("unknown window class '{s}'")))
    }
}

/// Result of switching once at `tau_s`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SwitchOutcome {
    pub tau_s: f64,
    pub class: WindowClass,
    /// Crossings of the post-switch run.
    pub report: EsdReport,
    pub new_tau_d: Option<f64>,
    pub new_tau_r: Option<f64>,
}

/// Revival time after a switch made inside the dead interval.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RevivalShift {
    pub tau_s: f64,
    pub baseline_tau_r: Option<f64>,
    pub new_tau_r: Option<f64>,
}

impl RevivalShift {
    /// Positive when the switch brings the revival forward.
    pub fn advance(&self) -> Option<f64> {
        Some(self.baseline_tau_r? - self.new_tau_r?)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum StopRule {
    Horizon,
    DeathThenRevival,
    FirstRevival,
}

/// Scan settings.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanOptions {
    pub grid_step: f64,
    pub boundary_tol: f64,
    pub execution: Execution,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self { grid_step: 0.01, boundary_tol: BOUNDARY_TOL, execution: Execution::Parallel }
    }
}

impl ScanOptions {
    pub fn validated(self) -> Result<Self> {
        if !(self.grid_step > 0.0 && self.grid_step <= MAX_GRID_STEP) {
            return Err(Error::InvalidArgument(format!(
                "grid step must lie in (0, {MAX_GRID_STEP}], got {}",
                self.grid_step
            )));
        }
        if !(self.boundary_tol > 0.0) {
            return Err(Error::InvalidArgument("boundary tolerance must be positive".into()));
        }
        Ok(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub tau_s: f64,
    pub class: WindowClass,
    pub new_tau_d: Option<f64>,
    pub new_tau_r: Option<f64>,
}

impl From<&SwitchOutcome> for GridPoint {
    fn from(o: &SwitchOutcome) -> Self {
        Self { tau_s: o.tau_s, class: o.class, new_tau_d: o.new_tau_d, new_tau_r: o.new_tau_r }
    }
}

/// A maximal run of switch times sharing one class.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindowInterval {
    pub class: WindowClass,
    pub start: f64,
    pub end: f64,
}

impl WindowInterval {
    pub fn width(&self) -> f64 {
        self.end - self.start
    }
}

impl fmt::Display for WindowInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.start == 0.0 {
            write!(f, "(0, {:.3}]", self.end)
        } else {
            write!(f, "[{:.3}, {:.3}]", self.start, self.end)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
struct Transition {
    tau: f64,
    right: WindowClass,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindowReport {
    pub state: String,
    pub gate: String,
    pub baseline: EsdReport,
    pub tau_d: Option<f64>,
    pub grid: Vec<GridPoint>,
    pub boundaries: Vec<f64>,
    pub intervals: Vec<WindowInterval>,
}

impl WindowReport {
    pub fn intervals_of(&self, class: WindowClass) -> Vec<WindowInterval> {
        self.intervals.iter().copied().filter(|i| i.class == class).collect()
    }

    /// One line per class present, e.g. `Avoids: [0.671, 2.044]`.
    pub fn summary(&self) -> String {
        let mut out = format!("state={} gate={}", self.state, self.gate);
        match self.tau_d {
            None => {
                out.push_str(" tau_D=none\nNo ESD in baseline\n");
                return out;
            }
            Some(t) => out.push_str(&format!(" tau_D={t:.4}\n")),
        }
        for class in WindowClass::ALL {
            let parts: Vec<String> = self.intervals_of(class).iter().map(|i| i.to_string()).collect();
            if !parts.is_empty() {
                out.push_str(&format!("{class}: {}\n", parts.join("; ")));
            }
        }
        out
    }
}

/// Baseline run of one initial state, reused for every switch applied to it.
#[derive(Clone, Debug)]
pub struct SwitchAnalyzer {
    evolver: Evolver,
    baseline_traj: Trajectory,
    baseline: EsdReport,
}

impl SwitchAnalyzer {
    pub fn new(initial: &DensityMatrix, params: &CouplingParams, cfg: &IntegratorConfig) -> Result<Self> {
        Self::from_evolver(initial, Evolver::new(build_liouvillian(params)?, *cfg)?)
    }

    pub fn from_evolver(initial: &DensityMatrix, evolver: Evolver) -> Result<Self> {
        let baseline_traj = evolver.evolve(initial, &[])?;
        let baseline = detect_esd(&baseline_traj, &evolver)?;
        Ok(Self { evolver, baseline_traj, baseline })
    }

    pub fn baseline(&self) -> &EsdReport {
        &self.baseline
    }

    pub fn baseline_trajectory(&self) -> &Trajectory {
        &self.baseline_traj
    }

    pub fn evolver(&self) -> &Evolver {
        &self.evolver
    }

    pub fn tau_d(&self) -> Option<f64> {
        self.baseline.first_death()
    }

    /// Run from `tau_s` after switching the baseline state there.
    fn switched_run(&self, gate: &TwoQubitGate, tau_s: f64, rule: StopRule) -> Result<(Trajectory, EsdReport)> {
        let event = SwitchEvent::new(tau_s, *gate)?;
        let pre = self.evolver.state_at(&self.baseline_traj, tau_s)?;
        let post = apply_switch(&pre, gate)?;
        let before = concurrence_of(pre.matrix())?.0;
        let after = concurrence_of(post.matrix())?.0;
        if (before - after).abs() > SWITCH_JUMP_TOL {
            return Err(Error::InvariantDrift {
                tau: tau_s,
                what: "concurrence jump at switch",
                value: (before - after).abs(),
            });
        }
        let mut seen_death = false;
        let mut traj = self.evolver.run_from(tau_s, &post, &[], |s| {
            let n = s.len();
            if n < 2 || rule == StopRule::Horizon {
                return false;
            }
            let (a, b) = (alive(&s[n - 2]), alive(&s[n - 1]));
            if a && !b {
                seen_death = true;
            }
            !a && b && (seen_death || rule == StopRule::FirstRevival)
        })?;
        traj.events.push(EventMark {
            tau: tau_s,
            event,
            concurrence_before: before,
            concurrence_after: after,
        });
        let report = detect_esd(&traj, &self.evolver)?;
        Ok((traj, report))
    }

    /// Full post-switch trajectory to the horizon.
    pub fn switched_trajectory(&self, gate: &TwoQubitGate, tau_s: f64) -> Result<Trajectory> {
        Ok(self.switched_run(gate, tau_s, StopRule::Horizon)?.0)
    }

    /// Classify a single switch made before the baseline death.
    pub fn classify(&self, gate: &TwoQubitGate, tau_s: f64) -> Result<SwitchOutcome> {
        let Some(tau_d) = self.tau_d() else {
            let (_, report) = self.switched_run(gate, tau_s, StopRule::DeathThenRevival)?;
            let new_tau_d = report.first_death();
            let new_tau_r = new_tau_d.and_then(|d| report.first_revival_after(d));
            return Ok(SwitchOutcome { tau_s, class: WindowClass::NoEsdBaseline, report, new_tau_d, new_tau_r });
        };
        if tau_s > tau_d + TIME_EPS {
            return Err(Error::InvalidArgument(format!(
                "switch at {tau_s} is after the baseline death at {tau_d:.4}; use the revival shift instead"
            )));
        }
        let (traj, report) = self.switched_run(gate, tau_s, StopRule::DeathThenRevival)?;
        let starts_dead = traj.samples.first().is_some_and(|s| !alive(s));
        let new_tau_d = if starts_dead { Some(tau_s) } else { report.first_death_after(tau_s) };
        let class = match new_tau_d {
            None => WindowClass::Avoids,
            Some(d) if d > tau_d + EQUALITY_BAND => WindowClass::Delays,
            Some(d) if d < tau_d - EQUALITY_BAND => WindowClass::Hastens,
            Some(_) => WindowClass::Unchanged,
        };
        let new_tau_r = new_tau_d.and_then(|d| report.first_revival_after(d));
        Ok(SwitchOutcome { tau_s, class, report, new_tau_d, new_tau_r })
    }

    /// Revival time after switching inside the dead interval.
    pub fn revival_shift(&self, gate: &TwoQubitGate, tau_s: f64) -> Result<RevivalShift> {
        let tau_d = self
            .tau_d()
            .ok_or_else(|| Error::InvalidArgument("baseline has no sudden death".into()))?;
        if tau_s <= tau_d {
            return Err(Error::InvalidArgument(format!(
                "switch at {tau_s} precedes the baseline death at {tau_d:.4}; classify it instead"
            )));
        }
        let (_, report) = self.switched_run(gate, tau_s, StopRule::FirstRevival)?;
        Ok(RevivalShift {
            tau_s,
            baseline_tau_r: self.baseline.first_revival_after(tau_d),
            new_tau_r: report.first_revival(),
        })
    }

    /// Classify switches on a grid over `(0, τ_D)` and refine every class
    /// change by bisection.
    pub fn scan(&self, gate: &TwoQubitGate, state_label: &str, opts: &ScanOptions) -> Result<WindowReport> {
        let opts = opts.validated()?;
        let mut report = WindowReport {
            state: state_label.to_string(),
            gate: gate.label(),
            baseline: self.baseline.clone(),
            tau_d: self.tau_d(),
            grid: Vec::new(),
            boundaries: Vec::new(),
            intervals: Vec::new(),
        };
        let Some(tau_d) = report.tau_d else {
            return Ok(report);
        };
        let mut taus: Vec<f64> = (1..)
            .map(|k| k as f64 * opts.grid_step)
            .take_while(|&t| t < tau_d - 1e-9)
            .collect();
        if taus.is_empty() {
            taus.push(0.5 * tau_d);
        }
        let outcomes = map_ordered(opts.execution, &taus, |&t| self.classify(gate, t));
        for o in outcomes {
            report.grid.push(GridPoint::from(&o?));
        }

        let cells: Vec<usize> = (0..report.grid.len() - 1)
            .filter(|&i| report.grid[i].class != report.grid[i + 1].class)
            .collect();
        let grid = &report.grid;
        let refined = map_ordered(opts.execution, &cells, |&i| {
            let mut out = Vec::new();
            self.refine(gate, (grid[i].tau_s, grid[i].class), (grid[i + 1].tau_s, grid[i + 1].class), opts.boundary_tol, &mut out)
                .map(|_| out)
        });
        let mut transitions = Vec::new();
        for r in refined {
            transitions.extend(r?);
        }

        let mut start = 0.0;
        let mut class = report.grid[0].class;
        for tr in &transitions {
            report.intervals.push(WindowInterval { class, start, end: tr.tau });
            report.boundaries.push(tr.tau);
            start = tr.tau;
            class = tr.right;
        }
        report.intervals.push(WindowInterval { class, start, end: tau_d });
        Ok(report)
    }

    fn refine(
        &self,
        gate: &TwoQubitGate,
        lo: (f64, WindowClass),
        hi: (f64, WindowClass),
        tol: f64,
        out: &mut Vec<Transition>,
    ) -> Result<()> {
        if hi.0 - lo.0 <= tol {
            out.push(Transition { tau: 0.5 * (lo.0 + hi.0), right: hi.1 });
            return Ok(());
        }
        let mid = 0.5 * (lo.0 + hi.0);
        let class = self.classify(gate, mid)?.class;
        if class == lo.1 {
            self.refine(gate, (mid, class), hi, tol, out)
        } else if class == hi.1 {
            self.refine(gate, lo, (mid, class), tol, out)
        } else {
            self.refine(gate, lo, (mid, class), tol, out)?;
            self.refine(gate, (mid, class), hi, tol, out)
        }
    }
}

/// Classify one switch from scratch.
pub fn classify_switch(
    initial: &DensityMatrix,
    gate: &TwoQubitGate,
    tau_s: f64,
    params: &CouplingParams,
    cfg: &IntegratorConfig,
) -> Result<SwitchOutcome> {
    SwitchAnalyzer::new(initial, params, cfg)?.classify(gate, tau_s)
}

/// Scan one initial state and gate with a rate-aware horizon.
pub fn scan_windows(
    initial: &StateSpec,
    gate: &TwoQubitGate,
    params: &CouplingParams,
    opts: &ScanOptions,
    cfg: &IntegratorConfig,
) -> Result<WindowReport> {
    let cfg = rate_aware_config(initial, cfg);
    SwitchAnalyzer::new(&initial.build()?, params, &cfg)?.scan(gate, &initial.to_string(), opts)
}

/// Same classes in the same order with every boundary within `tol`.
pub fn reports_match(a: &WindowReport, b: &WindowReport, tol: f64) -> bool {
    let close = |x: Option<f64>, y: Option<f64>| match (x, y) {
        (Some(x), Some(y)) => (x - y).abs() <= tol,
        (None, None) => true,
        _ => false,
    };
    close(a.tau_d, b.tau_d)
        && a.intervals.len() == b.intervals.len()
        && a.intervals.iter().zip(&b.intervals).all(|(x, y)| {
            x.class == y.class && (x.start - y.start).abs() <= tol && (x.end - y.end).abs() <= tol
        })
}

/// Tolerance used when comparing mirrored scans.
pub const SYMMETRY_TOL: f64 = 5e-3;

/// Scan both (state, gate) pairs and compare the resulting windows.
pub fn symmetry_check(
    initial_pair: (&StateSpec, &StateSpec),
    gate_pair: (&TwoQubitGate, &TwoQubitGate),
    params: &CouplingParams,
    opts: &ScanOptions,
    cfg: &IntegratorConfig,
) -> Result<bool> {
    let a = scan_windows(initial_pair.0, gate_pair.0, params, opts, cfg)?;
    let b = scan_windows(initial_pair.1, gate_pair.1, params, opts, cfg)?;
    Ok(reports_match(&a, &b, SYMMETRY_TOL))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{bell, BellKind};
    use approx::assert_abs_diff_eq;

    fn short_cfg(horizon: f64) -> IntegratorConfig {
        IntegratorConfig { horizon, ..Default::default() }
    }

    #[test]
    fn unclamped_examples() {
        assert_eq!(unclamped_concurrence(&DensityMatrix::maximally_mixed()).unwrap(), -0.5);
        assert_abs_diff_eq!(unclamped_concurrence(&bell(BellKind::PhiPlus)).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn window_class_round_trip() {
        for c in WindowClass::ALL {
            assert_eq!(c.label().parse::<WindowClass>().unwrap(), c);
        }
        assert!("sometimes".parse::<WindowClass>().is_err());
    }

    #[test]
    fn sparse_trajectory_rejected() {
        let cfg = IntegratorConfig { horizon: 5.0, record_every: 200, ..Default::default() };
        let ev = Evolver::new(build_liouvillian(&CouplingParams::quoted()).unwrap(), cfg).unwrap();
        let traj = ev.evolve(&bell(BellKind::PhiPlus), &[]).unwrap();
        assert!(matches!(detect_esd(&traj, &ev), Err(Error::TooSparse { .. })));
    }

    #[test]
    fn identity_switch_is_unchanged() {
        let a = SwitchAnalyzer::new(&bell(BellKind::PhiPlus), &CouplingParams::quoted(), &short_cfg(5.0)).unwrap();
        let o = a.classify(&"I-I".parse().unwrap(), 1.0).unwrap();
        assert_eq!(o.class, WindowClass::Unchanged);
        assert_abs_diff_eq!(o.new_tau_d.unwrap(), a.tau_d().unwrap(), epsilon = 1e-6);
        assert!(a.classify(&"I-I".parse().unwrap(), 3.5).is_err());
    }

    #[test]
    fn scan_options_checked() {
        let o = ScanOptions { grid_step: 0.05, ..Default::default() };
        assert!(o.validated().is_err());
    }
}
