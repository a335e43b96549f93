//! Fixed-size complex matrix algebra for one and two qubits.
//!
//! Two-qubit operators act on the product basis ordered
//! `|ee⟩, |eg⟩, |ge⟩, |gg⟩` (qubit 1 is the left factor, `e` is the excited
//! level). Every module in the crate uses this ordering.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// Entrywise tolerance for accepting a matrix as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Off-diagonal Frobenius norm, relative to the full norm, at which the
/// Jacobi sweep stops.
const JACOBI_TOL: f64 = 1e-15;
const JACOBI_MAX_SWEEPS: usize = 64;

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[inline]
pub fn r(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

macro_rules! square_matrix {
    ($name:ident, $n:expr) => {
        #[derive(Clone, Copy, PartialEq, Serialize, Deserialize)]
        pub struct $name(pub [[Complex64; $n]; $n]);

        impl $name {
            pub const DIM: usize = $n;

            pub fn zeros() -> Self {
                Self([[ZERO; $n]; $n])
            }

            pub fn identity() -> Self {
                let mut m = Self::zeros();
                for i in 0..$n {
                    m.0[i][i] = ONE;
                }
                m
            }

            pub fn from_real(rows: [[f64; $n]; $n]) -> Self {
                let mut m = Self::zeros();
                for i in 0..$n {
                    for j in 0..$n {
                        m.0[i][j] = r(rows[i][j]);
                    }
                }
                m
            }

            pub fn diag(d: [f64; $n]) -> Self {
                let mut m = Self::zeros();
                for i in 0..$n {
                    m.0[i][i] = r(d[i]);
                }
                m
            }

            pub fn matmul(&self, other: &Self) -> Self {
                let mut out = Self::zeros();
                for i in 0..$n {
                    for k in 0..$n {
                        let a = self.0[i][k];
                        if a == ZERO {
                            continue;
                        }
                        for j in 0..$n {
                            out.0[i][j] += a * other.0[k][j];
                        }
                    }
                }
                out
            }

            pub fn dagger(&self) -> Self {
                let mut out = Self::zeros();
                for i in 0..$n {
                    for j in 0..$n {
                        out.0[j][i] = self.0[i][j].conj();
                    }
                }
                out
            }

            /// Entrywise complex conjugate (not transposed).
            pub fn conj(&self) -> Self {
                let mut out = *self;
                for row in out.0.iter_mut() {
                    for z in row.iter_mut() {
                        *z = z.conj();
                    }
                }
                out
            }

            pub fn trace(&self) -> Complex64 {
                (0..$n).map(|i| self.0[i][i]).sum()
            }

            pub fn scale(&self, s: Complex64) -> Self {
                let mut out = *self;
                for row in out.0.iter_mut() {
                    for z in row.iter_mut() {
                        *z *= s;
                    }
                }
                out
            }

            pub fn commutator(&self, other: &Self) -> Self {
                self.matmul(other) - other.matmul(self)
            }

            /// `U · self · U†`
            pub fn conjugate_by(&self, u: &Self) -> Self {
                u.matmul(self).matmul(&u.dagger())
            }

            /// Largest entrywise modulus.
            pub fn max_abs(&self) -> f64 {
                self.0
                    .iter()
                    .flat_map(|row| row.iter())
                    .map(|z| z.norm())
                    .fold(0.0, f64::max)
            }

            /// Largest entrywise modulus of `self - other`.
            pub fn max_abs_diff(&self, other: &Self) -> f64 {
                (*self - *other).max_abs()
            }

            /// Largest entrywise modulus of `self - self†`.
            pub fn hermiticity_defect(&self) -> f64 {
                self.max_abs_diff(&self.dagger())
            }

            /// `(self + self†) / 2`
            pub fn hermitian_part(&self) -> Self {
                (*self + self.dagger()).scale(r(0.5))
            }

            pub fn is_unitary(&self, tol: f64) -> bool {
                self.matmul(&self.dagger()).max_abs_diff(&Self::identity()) <= tol
            }
        }

        impl Default for $name {
            fn default() -> Self {
                Self::zeros()
            }
        }

        impl Index<(usize, usize)> for $name {
            type Output = Complex64;
            fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
                &self.0[i][j]
            }
        }

        impl IndexMut<(usize, usize)> for $name {
            fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
                &mut self.0[i][j]
            }
        }

        impl Add for $name {
            type Output = Self;
            fn add(mut self, rhs: Self) -> Self {
                for i in 0..$n {
                    for j in 0..$n {
                        self.0[i][j] += rhs.0[i][j];
                    }
                }
                self
            }
        }

        impl Sub for $name {
            type Output = Self;
            fn sub(mut self, rhs: Self) -> Self {
                for i in 0..$n {
                    for j in 0..$n {
                        self.0[i][j] -= rhs.0[i][j];
                    }
                }
                self
            }
        }

        impl Mul for $name {
            type Output = Self;
            fn mul(self, rhs: Self) -> Self {
                self.matmul(&rhs)
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                writeln!(f, "{}[", stringify!($name))?;
                for row in &self.0 {
                    write!(f, "  ")?;
                    for z in row {
                        write!(f, "{:>+.6}{:+.6}i  ", z.re, z.im)?;
                    }
                    writeln!(f)?;
                }
                write!(f, "]")
            }
        }
    };
}

square_matrix!(CMat2, 2);
square_matrix!(CMat4, 4);

impl CMat2 {
    pub fn pauli_x() -> Self {
        Self([[ZERO, ONE], [ONE, ZERO]])
    }

    pub fn pauli_y() -> Self {
        Self([[ZERO, -I], [I, ZERO]])
    }

    pub fn pauli_z() -> Self {
        Self::diag([1.0, -1.0])
    }

    /// `|e⟩⟨g|` in the single-qubit basis `(|e⟩, |g⟩)`.
    pub fn raising() -> Self {
        Self([[ZERO, ONE], [ZERO, ZERO]])
    }
}

/// Tensor product: `kron(a, b)[2i + k][2j + l] = a[i][j] · b[k][l]`.
pub fn kron(a: &CMat2, b: &CMat2) -> CMat4 {
    let mut out = CMat4::zeros();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out.0[2 * i + k][2 * j + l] = a.0[i][j] * b.0[k][l];
                }
            }
        }
    }
    out
}

/// Which of the two atoms an embedded operator acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Qubit {
    First,
    Second,
}

impl Qubit {
    pub fn from_index(index: usize) -> Result<Self> {
        match index {
            1 => Ok(Qubit::First),
            2 => Ok(Qubit::Second),
            other => Err(Error::InvalidArgument(format!(
                "qubit index must be 1 or 2, got {other}"
            ))),
        }
    }

    pub fn embed(self, op: &CMat2) -> CMat4 {
        match self {
            Qubit::First => kron(op, &CMat2::identity()),
            Qubit::Second => kron(&CMat2::identity(), op),
        }
    }
}

/// Raising, lowering and energy operators of one atom.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpinOperators {
    pub plus: CMat4,
    pub minus: CMat4,
    pub z: CMat4,
}

pub fn spin_operators(qubit: Qubit) -> SpinOperators {
    let plus = qubit.embed(&CMat2::raising());
    let minus = plus.dagger();
    let z = qubit.embed(&CMat2::diag([0.5, -0.5]));
    SpinOperators { plus, minus, z }
}

/// Eigen-decomposition of a Hermitian 4×4 matrix.
#[derive(Clone, Copy, Debug)]
pub struct HermitianEigen {
    /// Eigenvalues in descending order.
    pub values: [f64; 4],
    /// Column `k` is the normalised eigenvector for `values[k]`.
    pub vectors: CMat4,
}

impl HermitianEigen {
    /// `V f(Λ) V†`.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> CMat4 {
        let v = &self.vectors;
        let mut out = CMat4::zeros();
        for k in 0..4 {
            let fk = f(self.values[k]);
            if fk == 0.0 {
                continue;
            }
            for i in 0..4 {
                for j in 0..4 {
                    out.0[i][j] += v.0[i][k] * v.0[j][k].conj() * fk;
                }
            }
        }
        out
    }
}

/// Cyclic complex Jacobi diagonalisation.
pub fn hermitian_eigen(m: &CMat4) -> Result<HermitianEigen> {
    let defect = m.hermiticity_defect();
    if defect > HERMITIAN_TOL {
        return Err(Error::NotHermitian(defect));
    }
    let mut a = m.hermitian_part();
    let mut v = CMat4::identity();

    let scale = a
        .0
        .iter()
        .flat_map(|row| row.iter())
        .map(|z| z.norm_sqr())
        .sum::<f64>()
        .sqrt();
    for _ in 0..JACOBI_MAX_SWEEPS {
        let off: f64 = (0..4)
            .flat_map(|i| (0..4).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a.0[i][j].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= JACOBI_TOL * scale {
            break;
        }
        for p in 0..3 {
            for q in (p + 1)..4 {
                let apq = a.0[p][q];
                let mag = apq.norm();
                if mag < 1e-300 {
                    continue;
                }
                // Unitary rotation in the (p, q) plane zeroing a[p][q].
                let phase = apq / mag;
                let app = a.0[p][p].re;
                let aqq = a.0[q][q].re;
                let theta = 0.5 * (2.0 * mag).atan2(aqq - app);
                let (s, co) = theta.sin_cos();
                // Columns: new_p = co·e_p − s·conj(phase)·e_q, new_q = s·phase·e_p + co·e_q
                let mut rot = CMat4::identity();
                rot.0[p][p] = r(co);
                rot.0[q][q] = r(co);
                rot.0[p][q] = phase * s;
                rot.0[q][p] = -phase.conj() * s;
                a = rot.dagger().matmul(&a).matmul(&rot);
                v = v.matmul(&rot);
            }
        }
    }

    let mut order = [0usize, 1, 2, 3];
    order.sort_by(|&i, &j| a.0[j][j].re.total_cmp(&a.0[i][i].re));
    let mut values = [0.0; 4];
    let mut vectors = CMat4::zeros();
    for (k, &src) in order.iter().enumerate() {
        values[k] = a.0[src][src].re;
        for i in 0..4 {
            vectors.0[i][k] = v.0[i][src];
        }
    }
    Ok(HermitianEigen { values, vectors })
}

/// Real eigenvalues of a Hermitian 4×4 matrix, descending.
pub fn hermitian_eigenvalues(m: &CMat4) -> Result<[f64; 4]> {
    hermitian_eigen(m).map(|e| e.values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn ket(i: usize) -> CMat4 {
        // |i⟩⟨i| helper for projector checks
        let mut m = CMat4::zeros();
        m.0[i][i] = ONE;
        m
    }

    #[test]
    fn kron_identity_and_paulis() {
        assert_eq!(kron(&CMat2::identity(), &CMat2::identity()), CMat4::identity());
        assert_eq!(
            kron(&CMat2::pauli_z(), &CMat2::pauli_z()),
            CMat4::diag([1.0, -1.0, -1.0, 1.0])
        );
        let x1 = kron(&CMat2::pauli_x(), &CMat2::identity());
        let expected = CMat4::from_real([
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
        ]);
        assert_eq!(x1, expected);
    }

    #[test]
    fn spin_algebra() {
        let s1 = spin_operators(Qubit::First);
        let s2 = spin_operators(Qubit::Second);
        // number operator of qubit 1: |ee⟩, |eg⟩
        let n1 = s1.plus.matmul(&s1.minus);
        assert_eq!(n1, ket(0) + ket(1));
        assert!(s1.plus.commutator(&s1.minus).max_abs_diff(&s1.z.scale(r(2.0))) < 1e-15);
        // S⁺₁ |ge⟩ = |ee⟩
        let ge_to_ee = s1.plus.0[0][2];
        assert_eq!(ge_to_ee, ONE);
        assert_eq!(s1.plus.matmul(&s1.plus), CMat4::zeros());
        assert_eq!(s2.plus.matmul(&s2.plus), CMat4::zeros());
        // S⁺₁S⁻₂ only connects |ge⟩ → |eg⟩
        let hop = s1.plus.matmul(&s2.minus);
        for i in 0..4 {
            for j in 0..4 {
                if (i, j) != (1, 2) {
                    assert_eq!(hop.0[i][j], ZERO);
                }
            }
        }
        assert_eq!(hop.0[1][2], ONE);
        assert!(Qubit::from_index(3).is_err());
    }

    #[test]
    fn eigenvalues_of_simple_matrices() {
        let e = hermitian_eigenvalues(&CMat4::diag([2.0, 4.0, 1.0, 3.0])).unwrap();
        assert_eq!(e, [4.0, 3.0, 2.0, 1.0]);
        let e = hermitian_eigenvalues(&kron(&CMat2::pauli_z(), &CMat2::pauli_z())).unwrap();
        assert_eq!(e, [1.0, 1.0, -1.0, -1.0]);
        let mut bad = CMat4::identity();
        bad.0[0][1] = r(1.0);
        assert!(matches!(hermitian_eigenvalues(&bad), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn eigenvectors_reconstruct_matrix() {
        let mut m = CMat4::diag([0.3, -0.2, 0.5, 0.1]);
        m.0[0][1] = c(0.1, 0.2);
        m.0[1][0] = c(0.1, -0.2);
        m.0[2][3] = c(-0.05, 0.3);
        m.0[3][2] = c(-0.05, -0.3);
        m.0[0][3] = c(0.0, 0.07);
        m.0[3][0] = c(0.0, -0.07);
        let eig = hermitian_eigen(&m).unwrap();
        assert!(eig.map_spectrum(|x| x).max_abs_diff(&m) < 1e-12);
        assert!(eig.vectors.is_unitary(1e-12));
        assert_abs_diff_eq!(eig.values.iter().sum::<f64>(), m.trace().re, epsilon = 1e-12);
    }

    #[test]
    fn basic_algebra() {
        assert_eq!(CMat4::identity().trace(), r(4.0));
        let mixed = CMat4::identity().scale(r(0.25));
        assert_abs_diff_eq!(mixed.matmul(&mixed).trace().re, 0.25, epsilon = 1e-15);
        let mut m = CMat4::zeros();
        m.0[1][3] = c(0.4, -1.0);
        assert_eq!(m.dagger().dagger(), m);
    }
}
