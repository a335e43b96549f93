//! Local unitary gates and the instantaneous switching map `ρ → UρU†`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::{c, kron, r, CMat2, CMat4};
use crate::state::DensityMatrix;

pub const UNITARY_TOL: f64 = 1e-12;

/// Single-qubit gate `[[e^{−iφ}cos(θ/2), sin(θ/2)], [−sin(θ/2), e^{iφ}cos(θ/2)]]`
/// for `θ ∈ [0, π]`, `φ ∈ [0, π/2]`.
pub fn u_gate(theta: f64, phi: f64) -> Result<CMat2> {
    use std::f64::consts::{FRAC_PI_2, PI};
    if !(0.0..=PI).contains(&theta) || !(0.0..=FRAC_PI_2).contains(&phi) {
        return Err(Error::InvalidArgument(format!(
            "u({theta}, {phi}) outside 0 ≤ θ ≤ π, 0 ≤ φ ≤ π/2"
        )));
    }
    let (s, co) = (theta / 2.0).sin_cos();
    let (sp, cp) = phi.sin_cos();
    Ok(CMat2([
        [c(cp * co, -sp * co), r(s)],
        [r(-s), c(cp * co, sp * co)],
    ]))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

pub fn named_gate(p: Pauli) -> CMat2 {
    match p {
        Pauli::I => CMat2::identity(),
        Pauli::X => CMat2::pauli_x(),
        Pauli::Y => CMat2::pauli_y(),
        Pauli::Z => CMat2::pauli_z(),
    }
}

/// Matrix used for a gate written as "X".
///
/// `σy` conjugation equals conjugation by the `X·Z` composite, so a gate
/// described as a product of parametrised rotations can land on either.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum XReading {
    #[default]
    SigmaX,
    SigmaY,
}

impl FromStr for XReading {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "x" | "sigmax" | "sx" => Ok(XReading::SigmaX),
            "y" | "sigmay" | "sy" => Ok(XReading::SigmaY),
            other => Err(Error::Parse(format!("unknown X reading '{other}' (use x or y)"))),
        }
    }
}

impl fmt::Display for XReading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            XReading::SigmaX => "sigma-x",
            XReading::SigmaY => "sigma-y",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum GateSpec {
    Named(Pauli),
    Parametrized { theta: f64, phi: f64 },
}

impl GateSpec {
    pub fn matrix(&self, reading: XReading) -> Result<CMat2> {
        match *self {
            GateSpec::Named(Pauli::X) if reading == XReading::SigmaY => Ok(CMat2::pauli_y()),
            GateSpec::Named(p) => Ok(named_gate(p)),
            GateSpec::Parametrized { theta, phi } => u_gate(theta, phi),
        }
    }
}

impl fmt::Display for GateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GateSpec::Named(p) => write!(f, "{}", p.symbol()),
            GateSpec::Parametrized { theta, phi } => write!(f, "u({theta},{phi})"),
        }
    }
}

impl FromStr for GateSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "I" | "i" => return Ok(GateSpec::Named(Pauli::I)),
            "X" | "x" => return Ok(GateSpec::Named(Pauli::X)),
            "Y" | "y" => return Ok(GateSpec::Named(Pauli::Y)),
            "Z" | "z" => return Ok(GateSpec::Named(Pauli::Z)),
            _ => {}
        }
        let inner = s
            .strip_prefix("u(")
            .or_else(|| s.strip_prefix("U("))
            .and_then(|rest| rest.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("unknown gate '{s}'")))?;
        let (theta, phi) = inner
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("expected u(theta,phi), got '{s}'")))?;
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad angle '{t}' in '{s}'")))
        };
        let spec = GateSpec::Parametrized { theta: num(theta)?, phi: num(phi)? };
        spec.matrix(XReading::SigmaX)?;
        Ok(spec)
    }
}

/// Local operation `g1 ⊗ g2`, labelled like `X-I` (first qubit on the left).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoQubitGate {
    pub first: GateSpec,
    pub second: GateSpec,
    #[serde(default)]
    pub x_reading: XReading,
}

impl TwoQubitGate {
    pub fn named(first: Pauli, second: Pauli) -> Self {
        Self {
            first: GateSpec::Named(first),
            second: GateSpec::Named(second),
            x_reading: XReading::SigmaX,
        }
    }

    pub fn with_reading(mut self, reading: XReading) -> Self {
        self.x_reading = reading;
        self
    }

    pub fn label(&self) -> String {
        format!("{}-{}", self.first, self.second)
    }

    /// `kron(g1, g2)`, checked for unitarity.
    pub fn resolve(&self) -> Result<CMat4> {
        let u = kron(
            &self.first.matrix(self.x_reading)?,
            &self.second.matrix(self.x_reading)?,
        );
        if !u.is_unitary(UNITARY_TOL) {
            return Err(Error::InvalidArgument(format!("gate {} is not unitary", self.label())));
        }
        Ok(u)
    }
}

impl fmt::Display for TwoQubitGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl FromStr for TwoQubitGate {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        // split on the first '-' outside parentheses
        let mut depth = 0i32;
        let mut split = None;
        for (i, ch) in s.char_indices() {
            match ch {
                '(' => depth += 1,
                ')' => depth -= 1,
                '-' if depth == 0 => {
                    split = Some(i);
                    break;
                }
                _ => {}
            }
        }
        let at = split.ok_or_else(|| Error::Parse(format!("gate label '{s}' needs the form A-B")))?;
        Ok(Self {
            first: s[..at].parse()?,
            second: s[at + 1..].parse()?,
            x_reading: XReading::SigmaX,
        })
    }
}

/// `ρ' = U ρ U†` with `U = g1 ⊗ g2`.
pub fn apply_switch(rho: &DensityMatrix, gate: &TwoQubitGate) -> Result<DensityMatrix> {
    let u = gate.resolve()?;
    Ok(DensityMatrix::new_unchecked(rho.matrix().conjugate_by(&u)))
}

/// A gate applied instantaneously at dimensionless time `tau`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SwitchEvent {
    pub tau: f64,
    pub gate: TwoQubitGate,
}

impl SwitchEvent {
    pub fn new(tau: f64, gate: TwoQubitGate) -> Result<Self> {
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(Error::InvalidArgument(format!("switch time must be positive, got {tau}")));
        }
        Ok(Self { tau, gate })
    }
}
