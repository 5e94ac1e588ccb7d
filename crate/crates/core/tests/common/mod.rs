// Independent reference computations shared by the integration tests. Nothing
// here calls the eigensolver or the trace helpers of the library.
#![allow(dead_code)]

use mixphase::{ComplexMatrix, C64};

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// `B diag(w) B†` built entry by entry.
pub fn spectral_sum(basis: &ComplexMatrix, weights: &[f64]) -> ComplexMatrix {
    let n = basis.dim();
    ComplexMatrix::from_fn(n, |i, j| {
        (0..n).map(|k| basis[(i, k)] * basis[(j, k)].conj() * weights[k]).sum()
    })
    .unwrap()
}

/// `ρ_n^{1/l}` of a cyclic family: weight `λ_{(k−n) mod N}^{1/l}` on column `k`.
pub fn family_root(basis: &ComplexMatrix, eigenvalues: &[f64], n: usize, l: usize) -> ComplexMatrix {
    let dim = eigenvalues.len();
    let w: Vec<f64> = (0..dim)
        .map(|k| eigenvalues[(k + dim - n % dim) % dim].max(0.0).powf(1.0 / l as f64))
        .collect();
    spectral_sum(basis, &w)
}

pub fn matmul(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let n = a.dim();
    ComplexMatrix::from_fn(n, |i, j| (0..n).map(|k| a[(i, k)] * b[(k, j)]).sum()).unwrap()
}

/// `Tr(U X_1 U X_2 … U X_l)` by plain triple loops.
pub fn naive_trace(u: &ComplexMatrix, operands: &[ComplexMatrix]) -> C64 {
    let mut acc = ComplexMatrix::identity(u.dim());
    for x in operands {
        acc = matmul(&matmul(&acc, u), x);
    }
    (0..u.dim()).map(|k| acc[(k, k)]).sum()
}

/// Cyclic product `⟨ψ_l|U|ψ_1⟩⟨ψ_1|U|ψ_2⟩ … ⟨ψ_{l−1}|U|ψ_l⟩` of pure states.
pub fn pure_chain(u: &ComplexMatrix, states: &[Vec<C64>]) -> C64 {
    let l = states.len();
    let n = u.dim();
    let element = |a: &[C64], b: &[C64]| -> C64 {
        let mut z = c(0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                z += a[i].conj() * u[(i, j)] * b[j];
            }
        }
        z
    };
    (0..l).map(|m| element(&states[(m + l - 1) % l], &states[m])).product()
}

/// Signed solid angle of the geodesic polygon through unit vectors `v`,
/// fanned from `v[0]` with the Van Oosterom–Strackee triangle formula.
pub fn solid_angle(v: &[[f64; 3]]) -> f64 {
    let dot = |a: [f64; 3], b: [f64; 3]| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    let cross = |a: [f64; 3], b: [f64; 3]| {
        [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
    };
    (1..v.len() - 1)
        .map(|i| {
            let (a, b, cc) = (v[0], v[i], v[i + 1]);
            2.0 * dot(a, cross(b, cc)).atan2(1.0 + dot(a, b) + dot(b, cc) + dot(cc, a))
        })
        .sum()
}

/// Best-fit branch difference of two angles, in `[0, π]`.
pub fn angle_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(2.0 * std::f64::consts::PI);
    d.min(2.0 * std::f64::consts::PI - d)
}
