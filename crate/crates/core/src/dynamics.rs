//! Collective spontaneous emission of two dipole-coupled two-level atoms.
//!
//! The master equation in dimensionless time `τ = Γt`:
//!
//! ```text
//! dρ/dτ = −i ω₀ Σᵢ [Sᶻᵢ, ρ] − i Ω₁₂ Σ_{i≠j} [S⁺ᵢS⁻ⱼ, ρ]
//!         − ½ Σᵢⱼ Γᵢⱼ (ρ S⁺ᵢS⁻ⱼ + S⁺ᵢS⁻ⱼ ρ − 2 S⁻ⱼ ρ S⁺ᵢ)
//! ```
//!
//! is linear and time independent between switch events, so it is stored as a
//! 16×16 superoperator acting on the row-major vectorisation
//! `vec(ρ)[4i + j] = ρᵢⱼ`. One classical RK4 step of a constant linear
//! system is the matrix polynomial `Σ_{k≤4} (hL)ᵏ/k!`; the integrator
//! precomputes that propagator so the hot loop is a single matrix-vector
//! product per step.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::{concurrence_wootters, x_breakdown, ConcurrenceBreakdown};
use crate::operator::{r, spin_operators, CMat4, Qubit, I, ZERO};
use crate::state::{min_eigenvalue, x_leakage, DensityMatrix, POSITIVITY_TOL, X_PATTERN_TOL};
use crate::switching::{apply_switch, SwitchEvent};

/// Drift in trace or Hermiticity that is corrected silently.
pub const SILENT_DRIFT: f64 = 1e-12;
/// Drift beyond which integration aborts.
pub const MAX_DRIFT: f64 = 1e-10;
/// Two times closer than this are the same instant.
pub(crate) const TIME_EPS: f64 = 1e-12;

/// Atom separation and dipole orientation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeometryParams {
    /// Interatomic distance in units of the transition wavelength.
    pub r12_over_lambda: f64,
    /// Cosine between the dipole moment and the interatomic axis.
    pub mu_dot_r: f64,
}

impl GeometryParams {
    pub fn new(r12_over_lambda: f64, mu_dot_r: f64) -> Result<Self> {
        if !(r12_over_lambda > 0.0 && r12_over_lambda.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "interatomic distance must be positive, got {r12_over_lambda}"
            )));
        }
        if !(-1.0..=1.0).contains(&mu_dot_r) {
            return Err(Error::InvalidArgument(format!("mu_dot_r = {mu_dot_r} outside [-1, 1]")));
        }
        Ok(Self { r12_over_lambda, mu_dot_r })
    }

    fn kr(&self) -> f64 {
        2.0 * PI * self.r12_over_lambda
    }

    fn angular(&self) -> (f64, f64) {
        let m2 = self.mu_dot_r * self.mu_dot_r;
        (1.0 - m2, 1.0 - 3.0 * m2)
    }
}

/// Collective damping `Γ₁₂ / Γ`.
pub fn gamma_ij(g: &GeometryParams) -> Result<f64> {
    let g = GeometryParams::new(g.r12_over_lambda, g.mu_dot_r)?;
    let x = g.kr();
    let (a, b) = g.angular();
    let (s, c) = x.sin_cos();
    Ok(1.5 * (a * s / x + b * (c / (x * x) - s / (x * x * x))))
}

/// Dipole-dipole shift `Ω₁₂ / Γ`.
pub fn omega_ij(g: &GeometryParams) -> Result<f64> {
    let g = GeometryParams::new(g.r12_over_lambda, g.mu_dot_r)?;
    let x = g.kr();
    let (a, b) = g.angular();
    let (s, c) = x.sin_cos();
    Ok(0.75 * (-a * c / x + b * (s / (x * x) + c / (x * x * x))))
}

/// Rates of the master equation, all in units of the single-atom rate Γ.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CouplingParams {
    pub gamma: f64,
    pub gamma12: f64,
    pub omega12: f64,
    /// Atomic transition frequency. Switch gates do not commute with the free
    /// precession it generates, so outcomes depend on it.
    pub omega0: f64,
}

impl CouplingParams {
    pub const QUOTED_GAMMA12: f64 = 0.79;
    pub const QUOTED_OMEGA12: f64 = 1.12;
    pub const DEFAULT_OMEGA0: f64 = 1.0;

    pub fn new(gamma12: f64, omega12: f64) -> Result<Self> {
        Self { gamma: 1.0, gamma12, omega12, omega0: Self::DEFAULT_OMEGA0 }.validated()
    }

    /// `Γ₁₂ = 0.79 Γ`, `Ω₁₂ = 1.12 Γ` (atoms a sixth of a wavelength apart).
    pub fn quoted() -> Self {
        Self {
            gamma: 1.0,
            gamma12: Self::QUOTED_GAMMA12,
            omega12: Self::QUOTED_OMEGA12,
            omega0: Self::DEFAULT_OMEGA0,
        }
    }

    pub fn from_geometry(g: &GeometryParams) -> Result<Self> {
        Self::new(gamma_ij(g)?, omega_ij(g)?)
    }

    pub fn with_omega0(mut self, omega0: f64) -> Self {
        self.omega0 = omega0;
        self
    }

    pub fn validated(self) -> Result<Self> {
        if !(self.gamma > 0.0) {
            return Err(Error::InvalidArgument(format!("gamma must be positive, got {}", self.gamma)));
        }
        if self.gamma12.abs() > self.gamma {
            return Err(Error::InvalidArgument(format!(
                "|gamma12| = {} exceeds gamma = {}; the dissipator would not be completely positive",
                self.gamma12.abs(),
                self.gamma
            )));
        }
        if ![self.gamma12, self.omega12, self.omega0].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidArgument("coupling parameters must be finite".into()));
        }
        Ok(self)
    }
}

/// Right-hand side of the master equation evaluated directly in operator form.
pub fn master_rhs(p: &CouplingParams, rho: &CMat4) -> CMat4 {
    let s = [spin_operators(Qubit::First), spin_operators(Qubit::Second)];
    let rates = [[p.gamma, p.gamma12], [p.gamma12, p.gamma]];
    let hamiltonian = (s[0].z + s[1].z).scale(r(p.omega0))
        + (s[0].plus.matmul(&s[1].minus) + s[1].plus.matmul(&s[0].minus)).scale(r(p.omega12));
    let mut out = hamiltonian.commutator(rho).scale(-I);
    for i in 0..2 {
        for j in 0..2 {
            let hop = s[i].plus.matmul(&s[j].minus);
            let jump = s[j].minus.matmul(rho).matmul(&s[i].plus);
            let term = rho.matmul(&hop) + hop.matmul(rho) - jump.scale(r(2.0));
            out = out - term.scale(r(0.5 * rates[i][j]));
        }
    }
    out
}

pub type Vec16 = [Complex64; 16];
type Mat16 = [[Complex64; 16]; 16];

pub fn vectorize(m: &CMat4) -> Vec16 {
    let mut v = [ZERO; 16];
    for i in 0..4 {
        for j in 0..4 {
            v[4 * i + j] = m.0[i][j];
        }
    }
    v
}

pub fn unvectorize(v: &Vec16) -> CMat4 {
    let mut m = CMat4::zeros();
    for i in 0..4 {
        for j in 0..4 {
            m.0[i][j] = v[4 * i + j];
        }
    }
    m
}

#[inline]
fn mat16_vec(a: &Mat16, v: &Vec16) -> Vec16 {
    let mut out = [ZERO; 16];
    for (o, row) in out.iter_mut().zip(a.iter()) {
        let mut acc = ZERO;
        for (x, y) in row.iter().zip(v.iter()) {
            acc += x * y;
        }
        *o = acc;
    }
    out
}

fn mat16_mul(a: &Mat16, b: &Mat16) -> Box<Mat16> {
    let mut out = Box::new([[ZERO; 16]; 16]);
    for i in 0..16 {
        for k in 0..16 {
            let aik = a[i][k];
            if aik == ZERO {
                continue;
            }
            for j in 0..16 {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

fn mat16_identity() -> Box<Mat16> {
    let mut m = Box::new([[ZERO; 16]; 16]);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = r(1.0);
    }
    m
}

/// Master-equation generator as a superoperator on `vec(ρ)`.
#[derive(Clone)]
pub struct Liouvillian {
    params: CouplingParams,
    matrix: Box<Mat16>,
}

impl std::fmt::Debug for Liouvillian {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Liouvillian").field("params", &self.params).finish_non_exhaustive()
    }
}

pub fn build_liouvillian(params: &CouplingParams) -> Result<Liouvillian> {
    let params = params.validated()?;
    let mut matrix = Box::new([[ZERO; 16]; 16]);
    for col in 0..16 {
        let mut basis = CMat4::zeros();
        basis.0[col / 4][col % 4] = r(1.0);
        let image = vectorize(&master_rhs(&params, &basis));
        for (row, value) in image.iter().enumerate() {
            matrix[row][col] = *value;
        }
    }
    Ok(Liouvillian { params, matrix })
}

impl Liouvillian {
    pub fn params(&self) -> &CouplingParams {
        &self.params
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.matrix[row][col]
    }

    pub fn apply_vec(&self, v: &Vec16) -> Vec16 {
        mat16_vec(&self.matrix, v)
    }

    pub fn apply(&self, rho: &CMat4) -> CMat4 {
        unvectorize(&self.apply_vec(&vectorize(rho)))
    }

    /// One classical RK4 step of size `h`, evaluated stage by stage.
    pub fn rk4_step(&self, v: &Vec16, h: f64) -> Vec16 {
        let axpy = |a: &Vec16, s: f64, b: &Vec16| {
            let mut out = *a;
            for (o, x) in out.iter_mut().zip(b.iter()) {
                *o += x * s;
            }
            out
        };
        let k1 = self.apply_vec(v);
        let k2 = self.apply_vec(&axpy(v, 0.5 * h, &k1));
        let k3 = self.apply_vec(&axpy(v, 0.5 * h, &k2));
        let k4 = self.apply_vec(&axpy(v, h, &k3));
        let mut out = *v;
        for i in 0..16 {
            out[i] += (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * (h / 6.0);
        }
        out
    }

    /// Advance by `span` using RK4 steps no longer than `max_step`.
    pub fn rk4_advance(&self, v: &Vec16, span: f64, max_step: f64) -> Vec16 {
        if span <= 0.0 {
            return *v;
        }
        let n = (span / max_step - 1e-9).ceil().max(1.0) as usize;
        let h = span / n as f64;
        (0..n).fold(*v, |acc, _| self.rk4_step(&acc, h))
    }

    /// `I + hL + (hL)²/2 + (hL)³/6 + (hL)⁴/24`, the RK4 step map.
    fn rk4_propagator(&self, h: f64) -> Box<Mat16> {
        let mut hl = Box::new([[ZERO; 16]; 16]);
        for i in 0..16 {
            for j in 0..16 {
                hl[i][j] = self.matrix[i][j] * h;
            }
        }
        let mut acc = mat16_identity();
        for k in (1..=4).rev() {
            let mut next = mat16_mul(&hl, &acc);
            for (i, row) in next.iter_mut().enumerate() {
                for z in row.iter_mut() {
                    *z /= k as f64;
                }
                row[i] += r(1.0);
            }
            acc = next;
        }
        acc
    }
}

/// Fixed-step integration settings (times in units of 1/Γ).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub dt: f64,
    /// Record one sample every this many steps.
    pub record_every: usize,
    pub horizon: f64,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self { dt: 1e-4, record_every: 10, horizon: 15.0 }
    }
}

impl IntegratorConfig {
    pub fn validated(self) -> Result<Self> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidArgument(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.horizon >= 0.0 && self.horizon.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "horizon must be non-negative, got {}",
                self.horizon
            )));
        }
        if self.record_every == 0 {
            return Err(Error::InvalidArgument("record_every must be at least 1".into()));
        }
        Ok(self)
    }

    pub fn with_horizon(mut self, horizon: f64) -> Self {
        self.horizon = horizon;
        self
    }

    pub fn with_dt(mut self, dt: f64) -> Self {
        self.dt = dt;
        self
    }

    /// Time between recorded samples.
    pub fn sample_spacing(&self) -> f64 {
        self.dt * self.record_every as f64
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub tau: f64,
    pub rho: DensityMatrix,
    /// Clamped concurrence.
    pub concurrence: f64,
    /// Closed-form branches, present whenever the state is X-shaped.
    pub breakdown: Option<ConcurrenceBreakdown>,
}

impl Sample {
    /// `max(c1, c2)`, or `None` for a non-X state.
    pub fn unclamped(&self) -> Option<f64> {
        self.breakdown.map(|b| b.unclamped())
    }
}

/// A switch that was applied, with the concurrence on either side of it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EventMark {
    pub tau: f64,
    pub event: SwitchEvent,
    pub concurrence_before: f64,
    pub concurrence_after: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    pub events: Vec<EventMark>,
}

impl Trajectory {
    pub fn last(&self) -> Option<&Sample> {
        self.samples.last()
    }

    /// Index of the last sample with `tau ≤ t`.
    pub fn sample_index_at_or_before(&self, t: f64) -> Option<usize> {
        let idx = self.samples.partition_point(|s| s.tau <= t + TIME_EPS);
        idx.checked_sub(1)
    }

    /// Switch events strictly after `t`, in order.
    pub fn events_after(&self, t: f64) -> impl Iterator<Item = &EventMark> {
        self.events.iter().filter(move |e| e.tau > t + TIME_EPS)
    }
}

pub(crate) fn concurrence_of(m: &CMat4) -> Result<(f64, Option<ConcurrenceBreakdown>)> {
    if x_leakage(m) < X_PATTERN_TOL {
        let b = x_breakdown(m);
        Ok((b.c, Some(b)))
    } else {
        let c = concurrence_wootters(&DensityMatrix::new_unchecked(*m))?;
        Ok((c, None))
    }
}

/// Check invariants, apply the silent correction, and build a sample.
fn checked_sample(tau: f64, v: &mut Vec16) -> Result<Sample> {
    let mut m = unvectorize(v);
    let defect = m.hermiticity_defect();
    let tr = m.trace();
    let drift = (tr - r(1.0)).norm();
    if defect > MAX_DRIFT {
        return Err(Error::InvariantDrift { tau, what: "hermiticity defect", value: defect });
    }
    if drift > MAX_DRIFT {
        return Err(Error::InvariantDrift { tau, what: "trace drift", value: drift });
    }
    if defect > SILENT_DRIFT || drift > SILENT_DRIFT {
        m = m.hermitian_part().scale(r(1.0 / tr.re));
        *v = vectorize(&m);
    }
    let min = min_eigenvalue(&m.hermitian_part())?;
    if min < -POSITIVITY_TOL {
        return Err(Error::InvariantDrift { tau, what: "negative eigenvalue", value: min });
    }
    let (concurrence, breakdown) = concurrence_of(&m)?;
    Ok(Sample { tau, rho: DensityMatrix::new_unchecked(m), concurrence, breakdown })
}

/// Reusable integrator for one generator and one configuration.
#[derive(Clone)]
pub struct Evolver {
    liouvillian: Liouvillian,
    cfg: IntegratorConfig,
    step: Box<Mat16>,
    block: Box<Mat16>,
}

impl std::fmt::Debug for Evolver {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Evolver")
            .field("params", self.liouvillian.params())
            .field("cfg", &self.cfg)
            .finish_non_exhaustive()
    }
}

impl Evolver {
    pub fn new(liouvillian: Liouvillian, cfg: IntegratorConfig) -> Result<Self> {
        let cfg = cfg.validated()?;
        let step = liouvillian.rk4_propagator(cfg.dt);
        let mut block = step.clone();
        for _ in 1..cfg.record_every {
            block = mat16_mul(&step, &block);
        }
        Ok(Self { liouvillian, cfg, step, block })
    }

    pub fn config(&self) -> &IntegratorConfig {
        &self.cfg
    }

    pub fn liouvillian(&self) -> &Liouvillian {
        &self.liouvillian
    }

    /// Same generator and step, different horizon.
    pub fn with_horizon(&self, horizon: f64) -> Self {
        let mut out = self.clone();
        out.cfg.horizon = horizon;
        out
    }

    pub fn evolve(&self, rho0: &DensityMatrix, schedule: &[SwitchEvent]) -> Result<Trajectory> {
        self.run_from(0.0, rho0, schedule, |_| false)
    }

    /// Integrate from `t0` to the horizon. `stop` sees every recorded sample
    /// and may end the run early by returning `true`.
    pub fn run_from(
        &self,
        t0: f64,
        rho0: &DensityMatrix,
        schedule: &[SwitchEvent],
        mut stop: impl FnMut(&[Sample]) -> bool,
    ) -> Result<Trajectory> {
        let dt = self.cfg.dt;
        let horizon = self.cfg.horizon;
        let every = self.cfg.record_every as u64;
        validate_schedule(schedule, t0, horizon)?;
        if t0 > horizon + TIME_EPS {
            return Err(Error::InvalidArgument(format!("start time {t0} beyond horizon {horizon}")));
        }

        let mut traj = Trajectory::default();
        let mut v = vectorize(rho0.matrix());
        traj.samples.push(checked_sample(t0, &mut v)?);
        if stop(&traj.samples) {
            return Ok(traj);
        }

        let mut pending = schedule.iter().peekable();
        let grid = |k: u64| k as f64 * dt;
        let last_k = (horizon / dt + 1e-9).floor() as u64;
        let mut k = (t0 / dt - 1e-9).ceil().max(0.0) as u64;
        let mut t = t0;

        // Advance across (t, target], applying any switch inside the span.
        let mut advance =
            |v: &mut Vec16, t: &mut f64, target: f64, full: Option<&Mat16>, traj: &mut Trajectory| -> Result<()> {
                let mut switched = false;
                while let Some(ev) = pending.peek() {
                    if ev.tau > target + TIME_EPS {
                        break;
                    }
                    let ev = **pending.next().as_ref().unwrap();
                    switched = true;
                    *v = self.liouvillian.rk4_advance(v, ev.tau - *t, dt);
                    *t = ev.tau;
                    let before = checked_sample(*t, v)?;
                    let after = apply_switch(&before.rho, &ev.gate)?;
                    *v = vectorize(after.matrix());
                    let after = checked_sample(*t, v)?;
                    traj.events.push(EventMark {
                        tau: ev.tau,
                        event: ev,
                        concurrence_before: before.concurrence,
                        concurrence_after: after.concurrence,
                    });
                }
                let span = target - *t;
                if span > TIME_EPS {
                    *v = match full {
                        Some(p) if !switched => mat16_vec(p, v),
                        _ => self.liouvillian.rk4_advance(v, span, dt),
                    };
                }
                *t = target;
                Ok(())
            };

        // Align to the step grid.
        if k <= last_k && grid(k) > t + TIME_EPS {
            advance(&mut v, &mut t, grid(k), None, &mut traj)?;
            if k.is_multiple_of(every) {
                traj.samples.push(checked_sample(t, &mut v)?);
                if stop(&traj.samples) {
                    return Ok(traj);
                }
            }
        }

        while k < last_k {
            let (next_k, op): (u64, &Mat16) = if k.is_multiple_of(every) && k + every <= last_k {
                (k + every, &self.block)
            } else {
                (k + 1, &self.step)
            };
            advance(&mut v, &mut t, grid(next_k), Some(op), &mut traj)?;
            k = next_k;
            if k.is_multiple_of(every) {
                traj.samples.push(checked_sample(t, &mut v)?);
                if stop(&traj.samples) {
                    return Ok(traj);
                }
            }
        }

        if horizon - t > TIME_EPS {
            advance(&mut v, &mut t, horizon, None, &mut traj)?;
            traj.samples.push(checked_sample(t, &mut v)?);
        } else if traj.samples.last().is_none_or(|s| s.tau < t - TIME_EPS) {
            traj.samples.push(checked_sample(t, &mut v)?);
        }
        Ok(traj)
    }

    /// State at time `t`, advanced from the closest earlier sample of `traj`
    /// with any later switch events re-applied.
    pub fn state_at(&self, traj: &Trajectory, t: f64) -> Result<DensityMatrix> {
        let idx = traj
            .sample_index_at_or_before(t)
            .ok_or_else(|| Error::InvalidArgument(format!("time {t} precedes the trajectory")))?;
        let start = &traj.samples[idx];
        let mut v = vectorize(start.rho.matrix());
        let mut now = start.tau;
        for mark in traj.events_after(now) {
            if mark.tau > t + TIME_EPS {
                break;
            }
            v = self.liouvillian.rk4_advance(&v, mark.tau - now, self.cfg.dt);
            let rho = apply_switch(&DensityMatrix::new_unchecked(unvectorize(&v)), &mark.event.gate)?;
            v = vectorize(rho.matrix());
            now = mark.tau;
        }
        v = self.liouvillian.rk4_advance(&v, t - now, self.cfg.dt);
        Ok(DensityMatrix::new_unchecked(unvectorize(&v)))
    }
}

fn validate_schedule(schedule: &[SwitchEvent], t0: f64, horizon: f64) -> Result<()> {
    let mut prev = t0;
    for ev in schedule {
        if !(ev.tau > prev) {
            return Err(Error::InvalidArgument(format!(
                "switch times must be strictly increasing and after {t0}; got {}",
                ev.tau
            )));
        }
        if ev.tau >= horizon {
            return Err(Error::InvalidArgument(format!(
                "switch at {} is not before the horizon {horizon}",
                ev.tau
            )));
        }
        prev = ev.tau;
    }
    Ok(())
}

/// One-shot integration with a fresh [`Evolver`].
pub fn evolve(
    rho0: &DensityMatrix,
    liouvillian: &Liouvillian,
    cfg: &IntegratorConfig,
    schedule: &[SwitchEvent],
) -> Result<Trajectory> {
    Evolver::new(liouvillian.clone(), *cfg)?.evolve(rho0, schedule)
}

/// Largest entrywise difference between runs at `dt` and `dt/2`, compared on
/// the samples both runs share.
pub fn halve_step_check(
    rho0: &DensityMatrix,
    liouvillian: &Liouvillian,
    cfg: &IntegratorConfig,
) -> Result<f64> {
    let coarse = evolve(rho0, liouvillian, cfg, &[])?;
    let fine_cfg = IntegratorConfig {
        dt: cfg.dt / 2.0,
        record_every: cfg.record_every * 2,
        horizon: cfg.horizon,
    };
    let fine = evolve(rho0, liouvillian, &fine_cfg, &[])?;
    let mut worst = 0.0f64;
    for (a, b) in coarse.samples.iter().zip(fine.samples.iter()) {
        debug_assert!((a.tau - b.tau).abs() < 1e-9);
        worst = worst.max(a.rho.matrix().max_abs_diff(b.rho.matrix()));
    }
    Ok(worst)
}

/// Observed convergence order `log2(e(dt) / e(dt/2))` from two successive
/// halve-step deviations.
pub fn observed_order(
    rho0: &DensityMatrix,
    liouvillian: &Liouvillian,
    cfg: &IntegratorConfig,
) -> Result<f64> {
    let e1 = halve_step_check(rho0, liouvillian, cfg)?;
    let half = IntegratorConfig { dt: cfg.dt / 2.0, record_every: cfg.record_every * 2, ..*cfg };
    let e2 = halve_step_check(rho0, liouvillian, &half)?;
    Ok((e1 / e2).log2())
}
