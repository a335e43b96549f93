#![allow(dead_code)]

use esd_core::operator::{c, r, CMat4};
use esd_core::state::DensityMatrix;
use rand::Rng;

/// Random X state: uniform populations, coherences scaled below the
/// positivity bound with random phases.
pub fn random_x_state(rng: &mut impl Rng) -> DensityMatrix {
    let raw: [f64; 4] = std::array::from_fn(|_| rng.gen_range(0.01..1.0));
    let total: f64 = raw.iter().sum();
    let p = raw.map(|x| x / total);
    let mut m = CMat4::diag(p);
    for (i, j) in [(0, 3), (1, 2)] {
        let mag = rng.gen_range(0.0..1.0) * (p[i] * p[j]).sqrt();
        let phase = rng.gen_range(0.0..std::f64::consts::TAU);
        m.0[i][j] = c(mag * phase.cos(), mag * phase.sin());
        m.0[j][i] = m.0[i][j].conj();
    }
    DensityMatrix::new(m).expect("random X state is valid")
}

/// Random full-rank state `A A† / Tr(A A†)`.
pub fn random_state(rng: &mut impl Rng) -> DensityMatrix {
    let mut a = CMat4::zeros();
    for i in 0..4 {
        for j in 0..4 {
            a.0[i][j] = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        }
    }
    let m = a.matmul(&a.dagger());
    let tr = m.trace().re;
    DensityMatrix::new(m.scale(r(1.0 / tr)).hermitian_part()).expect("random state is valid")
}
