//! Initial states, validation, and the collective (Dicke) basis.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::{c, hermitian_eigenvalues, r, CMat4, HERMITIAN_TOL, ONE};

pub const TRACE_TOL: f64 = 1e-10;
pub const POSITIVITY_TOL: f64 = 1e-9;
/// Largest allowed off-pattern magnitude for a matrix to count as X-shaped.
pub const X_PATTERN_TOL: f64 = 1e-10;
/// Upper end of the coherence parameter range (√3 rounded down).
pub const COHERENCE_X_MAX: f64 = 1.73;

/// A violated density-matrix invariant.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Violation {
    NotHermitian { defect: f64 },
    Trace { trace: f64 },
    NotPositive { min_eigenvalue: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotHermitian { defect } => write!(f, "not Hermitian (defect {defect:.3e})"),
            Violation::Trace { trace } => write!(f, "trace {trace} != 1"),
            Violation::NotPositive { min_eigenvalue } => {
                write!(f, "negative eigenvalue {min_eigenvalue:.3e}")
            }
        }
    }
}

/// Maximum magnitude of the entries outside the diagonal and anti-diagonal.
pub fn x_leakage(m: &CMat4) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..4 {
        for j in 0..4 {
            if i != j && i + j != 3 {
                worst = worst.max(m.0[i][j].norm());
            }
        }
    }
    worst
}

pub fn is_x_form(m: &CMat4) -> bool {
    x_leakage(m) < X_PATTERN_TOL
}

/// Smallest eigenvalue of a Hermitian matrix. X-shaped input splits into two
/// 2×2 blocks, `{ee, gg}` and `{eg, ge}`, solved in closed form.
pub fn min_eigenvalue(m: &CMat4) -> Result<f64> {
    if x_leakage(m) == 0.0 {
        let block_min = |a: usize, b: usize| {
            let (p, q, off) = (m.0[a][a].re, m.0[b][b].re, m.0[a][b].norm());
            0.5 * (p + q) - (0.25 * (p - q) * (p - q) + off * off).sqrt()
        };
        return Ok(block_min(0, 3).min(block_min(1, 2)));
    }
    Ok(hermitian_eigenvalues(m)?[3])
}

/// Report every density-matrix invariant `m` violates.
pub fn validate(m: &CMat4) -> Vec<Violation> {
    let mut out = Vec::new();
    let defect = m.hermiticity_defect();
    if defect > HERMITIAN_TOL {
        out.push(Violation::NotHermitian { defect });
    }
    let tr = m.trace();
    if (tr - ONE).norm() > TRACE_TOL {
        out.push(Violation::Trace { trace: tr.re });
    }
    // The spectrum is only meaningful once Hermiticity holds.
    if defect <= HERMITIAN_TOL {
        if let Ok(min) = min_eigenvalue(&m.hermitian_part()) {
            if min < -POSITIVITY_TOL {
                out.push(Violation::NotPositive { min_eigenvalue: min });
            }
        }
    }
    out
}

/// Two-qubit density matrix in the product basis `|ee⟩, |eg⟩, |ge⟩, |gg⟩`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityMatrix(CMat4);

impl DensityMatrix {
    pub fn new(m: CMat4) -> Result<Self> {
        let violations = validate(&m);
        if violations.is_empty() {
            Ok(Self(m))
        } else {
            Err(Error::InvalidState(violations))
        }
    }

    /// Wrap without checks; for values produced by trusted operations.
    pub(crate) fn new_unchecked(m: CMat4) -> Self {
        Self(m)
    }

    pub fn maximally_mixed() -> Self {
        Self(CMat4::identity().scale(r(0.25)))
    }

    /// Pure product state from a basis index (0 = |ee⟩ … 3 = |gg⟩).
    pub fn basis_projector(index: usize) -> Self {
        let mut m = CMat4::zeros();
        m.0[index][index] = ONE;
        Self(m)
    }

    pub fn matrix(&self) -> &CMat4 {
        &self.0
    }

    pub fn into_matrix(self) -> CMat4 {
        self.0
    }

    pub fn purity(&self) -> f64 {
        self.0.matmul(&self.0).trace().re
    }

    pub fn population(&self, index: usize) -> f64 {
        self.0 .0[index][index].re
    }

    pub fn is_x_form(&self) -> bool {
        is_x_form(&self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BellKind {
    PsiPlus,
    PsiMinus,
    PhiPlus,
    PhiMinus,
}

impl BellKind {
    pub const ALL: [BellKind; 4] = [
        BellKind::PsiPlus,
        BellKind::PsiMinus,
        BellKind::PhiPlus,
        BellKind::PhiMinus,
    ];

    pub fn label(self) -> &'static str {
        match self {
            BellKind::PsiPlus => "psi+",
            BellKind::PsiMinus => "psi-",
            BellKind::PhiPlus => "phi+",
            BellKind::PhiMinus => "phi-",
        }
    }

    /// Amplitudes on `|ee⟩, |eg⟩, |ge⟩, |gg⟩` with `|0⟩ ≡ |e⟩`, `|1⟩ ≡ |g⟩`.
    pub fn amplitudes(self) -> [f64; 4] {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        match self {
            BellKind::PsiPlus => [0.0, h, h, 0.0],
            BellKind::PsiMinus => [0.0, h, -h, 0.0],
            BellKind::PhiPlus => [h, 0.0, 0.0, h],
            BellKind::PhiMinus => [h, 0.0, 0.0, -h],
        }
    }

    /// Ψ-type states carry population in the slowly decaying antisymmetric channel.
    pub fn is_psi(self) -> bool {
        matches!(self, BellKind::PsiPlus | BellKind::PsiMinus)
    }
}

impl fmt::Display for BellKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for BellKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "psi+" | "psiplus" => Ok(BellKind::PsiPlus),
            "psi-" | "psiminus" => Ok(BellKind::PsiMinus),
            "phi+" | "phiplus" => Ok(BellKind::PhiPlus),
            "phi-" | "phiminus" => Ok(BellKind::PhiMinus),
            other => Err(Error::Parse(format!("unknown Bell state '{other}'"))),
        }
    }
}

pub fn bell(kind: BellKind) -> DensityMatrix {
    let a = kind.amplitudes();
    let mut m = CMat4::zeros();
    for i in 0..4 {
        for j in 0..4 {
            m.0[i][j] = r(a[i] * a[j]);
        }
    }
    DensityMatrix(m)
}

/// `(1 - p)/4 · I + p |M⟩⟨M|`.
pub fn werner(kind: BellKind, p: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidArgument(format!("Werner weight p = {p} outside [0, 1]")));
    }
    let m = CMat4::identity().scale(r((1.0 - p) / 4.0)) + bell(kind).0.scale(r(p));
    Ok(DensityMatrix(m))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CoherenceClass {
    /// Single-excitation coherence `ρ_{eg,ge}` only.
    OnePhoton,
    /// Double-excitation coherence `ρ_{ee,gg}` only.
    TwoPhoton,
}

/// One-parameter X-state families with a single kind of coherence.
///
/// The families are conventionally tabulated in the ground-first order
/// `|gg⟩, |ge⟩, |eg⟩, |ee⟩`:
///
/// ```text
/// one-photon: diag(1/6, 1/6, 1/2, 1/6), ρ23 = ρ32 = x/6
/// two-photon: diag(1/2, 1/6, 1/6, 1/6), ρ14 = ρ41 = x/6
/// ```
///
/// so the half-weight population sits on `|eg⟩` and `|gg⟩` respectively once
/// reordered into the crate basis.
pub fn coherence_state(class: CoherenceClass, x: f64) -> Result<DensityMatrix> {
    if !(0.0..=COHERENCE_X_MAX).contains(&x) {
        return Err(Error::InvalidArgument(format!(
            "coherence parameter x = {x} outside [0, {COHERENCE_X_MAX}]"
        )));
    }
    let sixth = 1.0 / 6.0;
    let m = match class {
        CoherenceClass::OnePhoton => {
            let mut m = CMat4::diag([sixth, 0.5, sixth, sixth]);
            m.0[1][2] = r(x / 6.0);
            m.0[2][1] = r(x / 6.0);
            m
        }
        CoherenceClass::TwoPhoton => {
            let mut m = CMat4::diag([sixth, sixth, sixth, 0.5]);
            m.0[0][3] = r(x / 6.0);
            m.0[3][0] = r(x / 6.0);
            m
        }
    };
    Ok(DensityMatrix(m))
}

/// Change of basis whose columns are `|e⟩, |s⟩, |a⟩, |g⟩` in product coordinates.
pub fn dicke_basis() -> CMat4 {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    CMat4::from_real([
        [1.0, 0.0, 0.0, 0.0],
        [0.0, h, h, 0.0],
        [0.0, h, -h, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ])
}

/// Density matrix expressed in the collective basis `|e⟩, |s⟩, |a⟩, |g⟩`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DickeMatrix(pub CMat4);

impl DickeMatrix {
    pub const E: usize = 0;
    pub const S: usize = 1;
    pub const A: usize = 2;
    pub const G: usize = 3;

    pub fn ee(&self) -> f64 {
        self.0 .0[Self::E][Self::E].re
    }
    pub fn ss(&self) -> f64 {
        self.0 .0[Self::S][Self::S].re
    }
    pub fn aa(&self) -> f64 {
        self.0 .0[Self::A][Self::A].re
    }
    pub fn gg(&self) -> f64 {
        self.0 .0[Self::G][Self::G].re
    }
    pub fn sa(&self) -> num_complex::Complex64 {
        self.0 .0[Self::S][Self::A]
    }
    pub fn ge(&self) -> num_complex::Complex64 {
        self.0 .0[Self::G][Self::E]
    }
}

pub fn to_dicke(rho: &DensityMatrix) -> DickeMatrix {
    let v = dicke_basis();
    DickeMatrix(v.dagger().matmul(&rho.0).matmul(&v))
}

pub fn from_dicke(rho: &DickeMatrix) -> DensityMatrix {
    let v = dicke_basis();
    DensityMatrix(v.matmul(&rho.0).matmul(&v.dagger()))
}

/// Normalised linear entropy `(4/3)(1 - Tr ρ²)`, in `[0, 1]`.
pub fn linear_entropy(rho: &DensityMatrix) -> f64 {
    4.0 / 3.0 * (1.0 - rho.purity())
}

/// Werner weight with the given linear entropy (`S_L = 1 - p²`).
pub fn werner_p_from_linear_entropy(sl: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&sl) {
        return Err(Error::InvalidArgument(format!("linear entropy {sl} outside [0, 1]")));
    }
    Ok((1.0 - sl).sqrt())
}

/// How a Werner state's weight was specified.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum WernerWeight {
    P(f64),
    LinearEntropy(f64),
}

impl WernerWeight {
    pub fn p(self) -> Result<f64> {
        match self {
            WernerWeight::P(p) => Ok(p),
            WernerWeight::LinearEntropy(sl) => werner_p_from_linear_entropy(sl),
        }
    }
}

/// Textual initial-state description, e.g. `bell:phi+`, `werner:psi+:sl=0.7`,
/// `x2:x=1.6` or `file:path/to/matrix.txt`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum StateSpec {
    Bell(BellKind),
    Werner(BellKind, WernerWeight),
    Coherence(CoherenceClass, f64),
    File(PathBuf),
}

impl StateSpec {
    pub fn build(&self) -> Result<DensityMatrix> {
        match self {
            StateSpec::Bell(kind) => Ok(bell(*kind)),
            StateSpec::Werner(kind, w) => werner(*kind, w.p()?),
            StateSpec::Coherence(class, x) => coherence_state(*class, *x),
            StateSpec::File(path) => read_matrix_file(path),
        }
    }

    /// True when the state populates the antisymmetric channel enough to need a
    /// longer horizon before "no death" can be asserted.
    pub fn is_psi_type(&self) -> bool {
        match self {
            StateSpec::Bell(k) | StateSpec::Werner(k, _) => k.is_psi(),
            _ => false,
        }
    }

    /// Same family with the scalar parameter replaced.
    pub fn with_parameter(&self, name: &str, value: f64) -> Result<Self> {
        match (self, name) {
            (StateSpec::Werner(k, _), "p") => Ok(StateSpec::Werner(*k, WernerWeight::P(value))),
            (StateSpec::Werner(k, _), "sl") => {
                Ok(StateSpec::Werner(*k, WernerWeight::LinearEntropy(value)))
            }
            (StateSpec::Coherence(class, _), "x") => Ok(StateSpec::Coherence(*class, value)),
            _ => Err(Error::InvalidArgument(format!(
                "parameter '{name}' does not apply to state '{self}'"
            ))),
        }
    }
}

impl fmt::Display for StateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateSpec::Bell(k) => write!(f, "bell:{k}"),
            StateSpec::Werner(k, WernerWeight::P(p)) => write!(f, "werner:{k}:p={p}"),
            StateSpec::Werner(k, WernerWeight::LinearEntropy(sl)) => {
                write!(f, "werner:{k}:sl={sl}")
            }
            StateSpec::Coherence(CoherenceClass::OnePhoton, x) => write!(f, "x1:x={x}"),
            StateSpec::Coherence(CoherenceClass::TwoPhoton, x) => write!(f, "x2:x={x}"),
            StateSpec::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

fn parse_keyed(field: &str, key: &str) -> Result<f64> {
    let (k, v) = field
        .split_once('=')
        .ok_or_else(|| Error::Parse(format!("expected '{key}=<value>', got '{field}'")))?;
    if k.trim() != key {
        return Err(Error::Parse(format!("expected key '{key}', got '{k}'")));
    }
    v.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad number '{v}'")))
}

impl FromStr for StateSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(path) = s.strip_prefix("file:") {
            return Ok(StateSpec::File(PathBuf::from(path)));
        }
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            ["bell", kind] => Ok(StateSpec::Bell(kind.parse()?)),
            ["werner", kind, weight] => {
                let kind = kind.parse()?;
                let w = if weight.trim_start().starts_with("sl") {
                    WernerWeight::LinearEntropy(parse_keyed(weight, "sl")?)
                } else {
                    WernerWeight::P(parse_keyed(weight, "p")?)
                };
                Ok(StateSpec::Werner(kind, w))
            }
            ["x1", x] => Ok(StateSpec::Coherence(CoherenceClass::OnePhoton, parse_keyed(x, "x")?)),
            ["x2", x] => Ok(StateSpec::Coherence(CoherenceClass::TwoPhoton, parse_keyed(x, "x")?)),
            _ => Err(Error::Parse(format!("unrecognised state specification '{s}'"))),
        }
    }
}

/// Plain-text matrix format: four lines of four whitespace-separated `re,im`
/// pairs, row-major in the crate basis. Blank lines and `#` comments are ignored.
pub fn parse_matrix_text(text: &str) -> Result<CMat4> {
    let mut entries = Vec::with_capacity(16);
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("").trim();
        for tok in line.split_whitespace() {
            let (re, im) = tok
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("expected 're,im', got '{tok}'")))?;
            let re: f64 = re.parse().map_err(|_| Error::Parse(format!("bad real part '{re}'")))?;
            let im: f64 = im.parse().map_err(|_| Error::Parse(format!("bad imaginary part '{im}'")))?;
            entries.push(c(re, im));
        }
    }
    if entries.len() != 16 {
        return Err(Error::Parse(format!("expected 16 entries, found {}", entries.len())));
    }
    let mut m = CMat4::zeros();
    for (k, z) in entries.into_iter().enumerate() {
        m.0[k / 4][k % 4] = z;
    }
    Ok(m)
}

pub fn format_matrix_text(m: &CMat4) -> String {
    let mut out = String::new();
    for row in &m.0 {
        let line: Vec<String> = row.iter().map(|z| format!("{:e},{:e}", z.re, z.im)).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

pub fn read_matrix_file(path: &Path) -> Result<DensityMatrix> {
    let text = std::fs::read_to_string(path)?;
    DensityMatrix::new(parse_matrix_text(&text)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn exact_x(m: &DensityMatrix) -> bool {
        x_leakage(m.matrix()) == 0.0
    }

    #[test]
    fn bell_projectors() {
        let phi = bell(BellKind::PhiPlus);
        for (i, j) in [(0, 0), (3, 3), (0, 3), (3, 0)] {
            assert_abs_diff_eq!(phi.matrix().0[i][j].re, 0.5, epsilon = 1e-15);
        }
        assert_abs_diff_eq!(phi.matrix().0[1][1].re, 0.0);
        for k in BellKind::ALL {
            assert!(validate(bell(k).matrix()).is_empty());
            assert_abs_diff_eq!(bell(k).purity(), 1.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn dicke_images_of_bell_states() {
        let d = to_dicke(&bell(BellKind::PsiMinus));
        assert_abs_diff_eq!(d.aa(), 1.0, epsilon = 1e-15);
        assert!(d.0.max_abs_diff(&CMat4::diag([0.0, 0.0, 1.0, 0.0])) < 1e-15);
        let d = to_dicke(&bell(BellKind::PsiPlus));
        assert_abs_diff_eq!(d.ss(), 1.0, epsilon = 1e-15);
        let d = to_dicke(&bell(BellKind::PhiPlus));
        assert_abs_diff_eq!(d.ee(), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(d.gg(), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(d.ge().re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(d.0 .0[0][3].re, 0.5, epsilon = 1e-15);
        let mixed = to_dicke(&DensityMatrix::maximally_mixed());
        assert!(mixed.0.max_abs_diff(DensityMatrix::maximally_mixed().matrix()) < 1e-15);
    }

    #[test]
    fn werner_limits_and_entropy() {
        for k in BellKind::ALL {
            assert!(werner(k, 1.0).unwrap().matrix().max_abs_diff(bell(k).matrix()) < 1e-15);
        }
        let w = werner(BellKind::PsiPlus, 0.5477).unwrap();
        assert_abs_diff_eq!(linear_entropy(&w), 0.7, epsilon = 1e-3);
        assert!(werner(BellKind::PhiPlus, 1.2).is_err());
        assert!(werner(BellKind::PhiPlus, -0.1).is_err());
    }

    #[test]
    fn linear_entropy_extremes() {
        assert_abs_diff_eq!(linear_entropy(&bell(BellKind::PhiMinus)), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(linear_entropy(&DensityMatrix::maximally_mixed()), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(werner_p_from_linear_entropy(0.7).unwrap(), 0.5477, epsilon = 1e-4);
        assert_eq!(werner_p_from_linear_entropy(0.0).unwrap(), 1.0);
        assert_eq!(werner_p_from_linear_entropy(1.0).unwrap(), 0.0);
        assert!(werner_p_from_linear_entropy(1.5).is_err());
    }

    #[test]
    fn coherence_family_shapes() {
        let one = coherence_state(CoherenceClass::OnePhoton, 1.6).unwrap();
        let two = coherence_state(CoherenceClass::TwoPhoton, 1.6).unwrap();
        assert!(exact_x(&one) && exact_x(&two));
        assert_abs_diff_eq!(one.matrix().0[1][2].re, 1.6 / 6.0);
        assert_abs_diff_eq!(two.matrix().0[0][3].re, 1.6 / 6.0);
        assert_abs_diff_eq!(two.population(3), 0.5);
        assert!(validate(one.matrix()).is_empty());
        assert!(validate(coherence_state(CoherenceClass::TwoPhoton, 1.73).unwrap().matrix()).is_empty());
        assert!(coherence_state(CoherenceClass::OnePhoton, 1.8).is_err());
    }

    #[test]
    fn validate_reports_each_violation() {
        let m = CMat4::diag([0.3, 0.3, 0.2, 0.1]);
        match validate(&m).as_slice() {
            [Violation::Trace { trace }] => assert_abs_diff_eq!(*trace, 0.9, epsilon = 1e-15),
            other => panic!("unexpected {other:?}"),
        }

        let mut m = CMat4::diag([0.25, 0.25, 0.25, 0.25]);
        m.0[0][3] = r(0.6);
        m.0[3][0] = r(0.6);
        let v = validate(&m);
        assert_eq!(v.len(), 1);
        match v[0] {
            Violation::NotPositive { min_eigenvalue } => {
                assert_abs_diff_eq!(min_eigenvalue, 0.25 - 0.6, epsilon = 1e-12)
            }
            other => panic!("unexpected {other:?}"),
        }

        let mut m = CMat4::diag([0.25, 0.25, 0.25, 0.25]);
        m.0[0][1] = r(0.01);
        assert!(matches!(validate(&m)[0], Violation::NotHermitian { .. }));
    }

    #[test]
    fn min_eigenvalue_closed_form_agrees_with_jacobi() {
        let m = *coherence_state(CoherenceClass::OnePhoton, 1.7).unwrap().matrix();
        let jacobi = hermitian_eigenvalues(&m).unwrap()[3];
        assert_abs_diff_eq!(min_eigenvalue(&m).unwrap(), jacobi, epsilon = 1e-13);
    }

    #[test]
    fn state_spec_grammar() {
        let cases = [
            "bell:phi+",
            "bell:psi-",
            "werner:psi+:p=0.5477",
            "werner:phi+:sl=0.7",
            "x1:x=1.6",
            "x2:x=1.6",
        ];
        for s in cases {
            let spec: StateSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
            assert!(spec.build().is_ok());
        }
        assert!("bell:chi+".parse::<StateSpec>().is_err());
        assert!("werner:psi+:q=0.5".parse::<StateSpec>().is_err());
        assert!("x3:x=1".parse::<StateSpec>().is_err());
        let spec: StateSpec = "werner:phi+:sl=0.7".parse().unwrap();
        assert_eq!(
            spec.with_parameter("sl", 0.5).unwrap().to_string(),
            "werner:phi+:sl=0.5"
        );
        assert!(spec.with_parameter("x", 1.0).is_err());
    }

    #[test]
    fn matrix_text_round_trip() {
        let m = *coherence_state(CoherenceClass::TwoPhoton, 1.2).unwrap().matrix();
        let back = parse_matrix_text(&format_matrix_text(&m)).unwrap();
        assert_eq!(back, m);
        assert!(parse_matrix_text("1,0 0,0").is_err());
        assert!(parse_matrix_text("# header only\n").is_err());
    }
}
