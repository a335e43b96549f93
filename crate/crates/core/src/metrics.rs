//! Concurrence by three independent routes, plus the coherences that feed it.
//!
//! * [`concurrence_wootters`]: spectrum of `ρρ̃`, valid for any two-qubit state.
//! * [`concurrence_x`]: closed form for X-shaped states in the product basis.
//! * [`concurrence_collective`]: the same closed form rewritten in the
//!   collective basis `|e⟩, |s⟩, |a⟩, |g⟩`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::{hermitian_eigen, kron, CMat2, CMat4};
use crate::state::{x_leakage, DensityMatrix, DickeMatrix, POSITIVITY_TOL, X_PATTERN_TOL};

/// Slack allowed on square-root arguments before declaring the input invalid.
const SQRT_ARG_TOL: f64 = 1e-12;

/// Two concurrence branches and their clamped maximum.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConcurrenceBreakdown {
    /// Two-photon (`ρ_{ee,gg}`) branch.
    pub c1: f64,
    /// One-photon (`ρ_{eg,ge}`) branch.
    pub c2: f64,
    /// `max(0, c1, c2)`.
    pub c: f64,
}

impl ConcurrenceBreakdown {
    pub fn new(c1: f64, c2: f64) -> Self {
        Self { c1, c2, c: c1.max(c2).max(0.0) }
    }

    /// `max(c1, c2)`: positive exactly when entangled, negative while dead.
    pub fn unclamped(&self) -> f64 {
        self.c1.max(self.c2)
    }
}

/// `ρ̃ = (σy ⊗ σy) ρ* (σy ⊗ σy)`.
pub fn spin_flip(rho: &DensityMatrix) -> CMat4 {
    let yy = kron(&CMat2::pauli_y(), &CMat2::pauli_y());
    yy.matmul(&rho.matrix().conj()).matmul(&yy)
}

/// Wootters concurrence from the spectrum of `ρρ̃`.
///
/// The spectrum is taken from the Hermitian matrix `√ρ ρ̃ √ρ`, which is
/// similar to `ρρ̃` and so shares its eigenvalues.
pub fn concurrence_wootters(rho: &DensityMatrix) -> Result<f64> {
    let eig = hermitian_eigen(rho.matrix())?;
    if eig.values[3] < -POSITIVITY_TOL {
        return Err(Error::Spectrum(format!(
            "density matrix has eigenvalue {:.3e}",
            eig.values[3]
        )));
    }
    let sqrt_rho = eig.map_spectrum(|x| x.max(0.0).sqrt());
    let m = sqrt_rho.matmul(&spin_flip(rho)).matmul(&sqrt_rho);
    let lambdas = hermitian_eigen(&m.hermitian_part())?.values;
    if lambdas[3] < -POSITIVITY_TOL {
        return Err(Error::Spectrum(format!(
            "ρρ̃ has negative eigenvalue {:.3e}",
            lambdas[3]
        )));
    }
    let roots = lambdas.map(|l| l.max(0.0).sqrt());
    Ok((roots[0] - roots[1] - roots[2] - roots[3]).max(0.0))
}

fn require_x(rho: &CMat4) -> Result<()> {
    let leak = x_leakage(rho);
    if leak >= X_PATTERN_TOL {
        return Err(Error::NotXState(leak));
    }
    Ok(())
}

fn nonneg_sqrt(arg: f64, what: &str) -> Result<f64> {
    if arg < -SQRT_ARG_TOL {
        return Err(Error::Spectrum(format!("{what}: negative square-root argument {arg:.3e}")));
    }
    Ok(arg.max(0.0).sqrt())
}

/// Closed-form X-state concurrence in the product basis.
pub fn concurrence_x(rho: &DensityMatrix) -> Result<ConcurrenceBreakdown> {
    let m = rho.matrix();
    require_x(m)?;
    Ok(x_breakdown(m))
}

/// Closed-form branches without the X-pattern check.
pub(crate) fn x_breakdown(m: &CMat4) -> ConcurrenceBreakdown {
    let p = |i: usize| m.0[i][i].re.max(0.0);
    let c1 = 2.0 * (m.0[0][3].norm() - (p(1) * p(2)).sqrt());
    let c2 = 2.0 * (m.0[1][2].norm() - (p(0) * p(3)).sqrt());
    ConcurrenceBreakdown::new(c1, c2)
}

/// Closed-form concurrence of a collective-basis X state.
pub fn concurrence_collective(rho: &DickeMatrix) -> Result<ConcurrenceBreakdown> {
    let pair = rho.ss() + rho.aa();
    let re_sa = 2.0 * rho.sa().re;
    let c1 = 2.0 * rho.ge().norm() - nonneg_sqrt(pair * pair - re_sa * re_sa, "c1")?;
    let c2 = c2_positivity_gap(rho)?;
    Ok(ConcurrenceBreakdown::new(c1, c2))
}

/// `√((ρss − ρaa)² + (2 Im ρsa)²) − 2√(ρee ρgg)`.
///
/// Entanglement carried by the one-photon branch survives exactly while this
/// stays positive.
pub fn c2_positivity_gap(rho: &DickeMatrix) -> Result<f64> {
    let diff = rho.ss() - rho.aa();
    let im_sa = 2.0 * rho.sa().im;
    let coherent = (diff * diff + im_sa * im_sa).sqrt();
    Ok(coherent - 2.0 * nonneg_sqrt(rho.ee() * rho.gg(), "c2")?)
}

/// Magnitudes of the one-photon (`|ρ23|`) and two-photon (`|ρ14|`) coherences.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Coherences {
    pub one_photon: f64,
    pub two_photon: f64,
}

pub fn coherence_quantities(rho: &DensityMatrix) -> Result<Coherences> {
    let m = rho.matrix();
    require_x(m)?;
    Ok(Coherences { one_photon: m.0[1][2].norm(), two_photon: m.0[0][3].norm() })
}
