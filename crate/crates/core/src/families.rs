//! Structured cases with closed forms: general SU(2) on a qubit, diagonal
//! unitaries, and cyclically permuting unitaries in the family eigenbasis.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_exp, ComplexMatrix, C64};
use crate::phases::{alternating_trace, gamma_mixed, phi, PhaseResult};
use crate::states::{diagonal_density, OrthogonalFamily};
use crate::tol;
use crate::transport::transport_path;

fn check_unit_interval(name: &'static str, value: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&value) {
        return Err(Error::OutOfRange {
            name,
            value,
            range: "[0, 1]",
        });
    }
    Ok(())
}

/// The three qubit traces for `U_11 = U_22* = η e^{iα}` and spectrum
/// `(λ_1, 1 − λ_1)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QubitScanPoint {
    pub eta: f64,
    pub alpha: f64,
    pub lambda1: f64,
    /// `Tr(U ρ_1)`
    pub t1: C64,
    /// `Tr(U ρ_2)`
    pub t2: C64,
    /// `Tr(U √ρ_1 U √ρ_2)`
    pub t12: C64,
}

impl QubitScanPoint {
    pub fn phases(&self, tol: f64) -> [PhaseResult; 3] {
        [phi(self.t1, tol), phi(self.t2, tol), phi(self.t12, tol)]
    }

    /// True when at least one of the three phases is determinate.
    pub fn has_determinate_phase(&self, tol: f64) -> bool {
        self.phases(tol).iter().any(PhaseResult::is_determinate)
    }
}

pub fn qubit_traces(eta: f64, alpha: f64, lambda1: f64) -> Result<QubitScanPoint> {
    check_unit_interval("eta", eta)?;
    check_unit_interval("lambda1", lambda1)?;
    let lambda2 = 1.0 - lambda1;
    let (plus, minus) = (C64::from_polar(1.0, alpha), C64::from_polar(1.0, -alpha));
    let t1 = (plus * lambda1 + minus * lambda2) * eta;
    let t2 = (minus * lambda1 + plus * lambda2) * eta;
    let t12 = 2.0 * eta * eta * (lambda1 * lambda2).sqrt() * (2.0 * alpha).cos() - 1.0 + eta * eta;
    Ok(QubitScanPoint {
        eta,
        alpha,
        lambda1,
        t1,
        t2,
        t12: C64::new(t12, 0.0),
    })
}

/// Explicit SU(2) element with `U_11 = η e^{iα}`, `U_12 = √(1−η²) e^{iξ}`.
/// The traces do not depend on `ξ`.
pub fn qubit_unitary(eta: f64, alpha: f64, xi: f64) -> Result<ComplexMatrix> {
    check_unit_interval("eta", eta)?;
    let off = (1.0 - eta * eta).max(0.0).sqrt();
    ComplexMatrix::from_rows(&[
        vec![C64::from_polar(eta, alpha), C64::from_polar(off, xi)],
        vec![-C64::from_polar(off, -xi), C64::from_polar(eta, -alpha)],
    ])
}

/// The same three traces evaluated through the general mixed-state functional
/// on explicit 2×2 matrices.
pub fn qubit_traces_direct(eta: f64, alpha: f64, lambda1: f64, xi: f64) -> Result<(C64, C64, C64)> {
    check_unit_interval("lambda1", lambda1)?;
    let u = qubit_unitary(eta, alpha, xi)?;
    let rho1 = diagonal_density(&[lambda1, 1.0 - lambda1])?;
    let rho2 = diagonal_density(&[1.0 - lambda1, lambda1])?;
    let never = f64::MIN_POSITIVE;
    Ok((
        gamma_mixed(&u, &[&rho1], never)?.raw_trace,
        gamma_mixed(&u, &[&rho2], never)?.raw_trace,
        gamma_mixed(&u, &[&rho1, &rho2], never)?.raw_trace,
    ))
}

/// Parameter grid for qubit scans.
#[derive(Clone, Debug, PartialEq)]
pub struct QubitGrid {
    pub etas: Vec<f64>,
    pub alphas: Vec<f64>,
    pub lambdas: Vec<f64>,
}

impl Default for QubitGrid {
    /// `η ∈ {0, 0.05, …, 1}`, `α ∈ {0, π/64, …, 2π}`,
    /// `λ_1 ∈ {0.5, 0.6, 0.75, 0.9, 1}`.
    fn default() -> Self {
        Self {
            etas: (0..=20).map(|k| k as f64 / 20.0).collect(),
            alphas: (0..=128).map(|k| k as f64 * PI / 64.0).collect(),
            lambdas: vec![0.5, 0.6, 0.75, 0.9, 1.0],
        }
    }
}

impl QubitGrid {
    pub fn len(&self) -> usize {
        self.etas.len() * self.alphas.len() * self.lambdas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Points in `(η, α, λ_1)` lexicographic order.
    pub fn points(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.etas.iter().flat_map(move |&e| {
            self.alphas
                .iter()
                .flat_map(move |&a| self.lambdas.iter().map(move |&l| (e, a, l)))
        })
    }
}

/// A structured unitary together with whether it lies in SU(N).
#[derive(Clone, Debug)]
pub struct StructuredUnitary {
    pub matrix: ComplexMatrix,
    pub special: bool,
}

fn check_unit_phases(phases: &[C64]) -> Result<()> {
    if phases.is_empty() {
        return Err(Error::Empty);
    }
    for (index, z) in phases.iter().enumerate() {
        if (z.norm() - 1.0).abs() > tol::UNIT_MODULUS {
            return Err(Error::NotUnitModulus {
                index,
                modulus: z.norm(),
            });
        }
    }
    Ok(())
}

fn in_basis_or_standard(coords: ComplexMatrix, basis: Option<&ComplexMatrix>) -> Result<ComplexMatrix> {
    match basis {
        None => Ok(coords),
        Some(b) => {
            b.ensure_unitary(tol::BASIS_UNITARY)?;
            b.ensure_dim(coords.dim())?;
            Ok(&(b * &coords) * &b.adjoint())
        }
    }
}

/// `U_d = Σ_k U_kk |A_k⟩⟨A_k|`; standard basis when `basis` is `None`.
pub fn diagonal_unitary(phases: &[C64], basis: Option<&ComplexMatrix>) -> Result<StructuredUnitary> {
    check_unit_phases(phases)?;
    let product: C64 = phases.iter().product();
    let matrix = in_basis_or_standard(ComplexMatrix::from_diagonal(phases)?, basis)?;
    Ok(StructuredUnitary {
        matrix,
        special: (product - C64::new(1.0, 0.0)).norm() <= 1e-10,
    })
}

/// `(−1)^{N−1}`, the phase-product of a special cyclic permutation.
pub fn parity_sign(n: usize) -> f64 {
    if n.is_multiple_of(2) {
        -1.0
    } else {
        1.0
    }
}

/// `U_p = U_12 |A_1⟩⟨A_2| + U_23 |A_2⟩⟨A_3| + … + U_N1 |A_N⟩⟨A_1|`, where
/// `phases[k]` is the coefficient of `|A_{k+1}⟩⟨A_{k+2 mod N}|`.
pub fn permutation_unitary(phases: &[C64], basis: Option<&ComplexMatrix>) -> Result<StructuredUnitary> {
    check_unit_phases(phases)?;
    let n = phases.len();
    let coords = ComplexMatrix::from_fn(n, |i, j| if j == (i + 1) % n { phases[i] } else { C64::new(0.0, 0.0) })?;
    let product: C64 = phases.iter().product();
    Ok(StructuredUnitary {
        matrix: in_basis_or_standard(coords, basis)?,
        special: (product - C64::new(parity_sign(n), 0.0)).norm() <= 1e-10,
    })
}

/// Distinct in-range indices; `expected_len` pins the length when given.
pub fn validate_sequence(sequence: &[usize], dim: usize, expected_len: Option<usize>) -> Result<()> {
    if sequence.is_empty() {
        return Err(Error::LengthZero);
    }
    if let Some(expected) = expected_len {
        if sequence.len() != expected {
            return Err(Error::SequenceLength {
                expected,
                got: sequence.len(),
            });
        }
    }
    if sequence.len() > dim {
        return Err(Error::LengthExceedsDimension {
            len: sequence.len(),
            dim,
        });
    }
    for (a, &j) in sequence.iter().enumerate() {
        if j >= dim {
            return Err(Error::IndexOutOfRange { index: j, dim });
        }
        if sequence[..a].contains(&j) {
            return Err(Error::RepeatedIndex { index: j });
        }
    }
    Ok(())
}

/// Closed-form `Tr(U_d ρ_{j1}^{1/l} … U_d ρ_{jl}^{1/l}) = Σ_k U_kk^l (λ_{k1}…λ_{kl})^{1/l}`
/// where `λ_{km}` is the eigenvalue of member `j_m` on `|A_k⟩`.
pub fn diagonal_trace(u_d: &ComplexMatrix, family: &OrthogonalFamily, sequence: &[usize]) -> Result<C64> {
    let n = family.dim();
    u_d.ensure_dim(n)?;
    validate_sequence(sequence, n, None)?;
    let coords = u_d.in_basis(family.basis());
    let deviation = coords.max_off_diagonal();
    if deviation > tol::DIAGONAL {
        return Err(Error::NotDiagonalInBasis { deviation });
    }
    let l = sequence.len();
    let mut sum = C64::new(0.0, 0.0);
    for k in 0..n {
        let weight: f64 = sequence.iter().map(|&j| family.eigenvalue_of(j, k)).product();
        sum += coords[(k, k)].powu(l as u32) * weight.max(0.0).powf(1.0 / l as f64);
    }
    Ok(sum)
}

fn check_special_permuting(u_p: &ComplexMatrix, family: &OrthogonalFamily) -> Result<()> {
    let n = family.dim();
    u_p.ensure_dim(n)?;
    let coords = u_p.in_basis(family.basis());
    let mut product = C64::new(1.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            let z = coords[(i, j)];
            if j == (i + 1) % n {
                if (z.norm() - 1.0).abs() > 1e-10 {
                    return Err(Error::NotPermuting {
                        reason: format!("|U[{i},{j}]| = {} is not 1", z.norm()),
                    });
                }
                product *= z;
            } else if z.norm() > 1e-10 {
                return Err(Error::NotPermuting {
                    reason: format!("unexpected entry at ({i}, {j}) with modulus {:e}", z.norm()),
                });
            }
        }
    }
    if (product - C64::new(parity_sign(n), 0.0)).norm() > 1e-10 {
        return Err(Error::NotPermuting {
            reason: format!("phase product {product} is not (-1)^(N-1)"),
        });
    }
    Ok(())
}

/// `Tr(U ρ_{j1}^{1/l} … U ρ_{jl}^{1/l})` on family members picked by `sequence`.
pub fn family_trace(u: &ComplexMatrix, family: &OrthogonalFamily, sequence: &[usize]) -> Result<C64> {
    validate_sequence(sequence, family.dim(), None)?;
    let l = sequence.len();
    let roots: Vec<ComplexMatrix> = sequence.iter().map(|&j| family.member(j).root(l)).collect();
    alternating_trace(u, &roots)
}

/// `f^(N)` for a full-length sequence of family members.
#[derive(Clone, Debug, PartialEq)]
pub struct PermutationCoefficient {
    pub sequence: Vec<usize>,
    pub value: f64,
}

/// `f = (−1)^{N−1} Tr(U_p ρ_{j1}^{1/N} … U_p ρ_{jN}^{1/N})`, real and
/// nonnegative for special permuting `U_p`.
pub fn f_coefficient(family: &OrthogonalFamily, u_p: &ComplexMatrix, sequence: &[usize]) -> Result<PermutationCoefficient> {
    let n = family.dim();
    validate_sequence(sequence, n, Some(n))?;
    check_special_permuting(u_p, family)?;
    let raw = family_trace(u_p, family, sequence)? * parity_sign(n);
    if raw.im.abs() > tol::COEFFICIENT {
        return Err(Error::ImaginaryResidue { imag: raw.im });
    }
    if raw.re < -tol::COEFFICIENT {
        return Err(Error::NegativeCoefficient { value: raw.re });
    }
    Ok(PermutationCoefficient {
        sequence: sequence.to_vec(),
        value: raw.re.max(0.0),
    })
}

/// All orderings of `k` distinct indices drawn from `0..n`, lexicographic.
pub fn sequences(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn extend(n: usize, k: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == k {
            out.push(prefix.clone());
            return;
        }
        for j in 0..n {
            if !prefix.contains(&j) {
                prefix.push(j);
                extend(n, k, prefix, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    if k <= n {
        extend(n, k, &mut Vec::with_capacity(k), &mut out);
    }
    out
}

/// Bloch vector `(⟨σ_x⟩, ⟨σ_y⟩, ⟨σ_z⟩)` of a normalized qubit state.
pub fn bloch_vector(state: [C64; 2]) -> [f64; 3] {
    let [a, b] = state;
    let cross = a.conj() * b;
    [2.0 * cross.re, 2.0 * cross.im, a.norm_sqr() - b.norm_sqr()]
}

fn pauli_combination(n: [f64; 3]) -> ComplexMatrix {
    ComplexMatrix::from_rows(&[
        vec![C64::new(n[2], 0.0), C64::new(n[0], -n[1])],
        vec![C64::new(n[0], n[1]), C64::new(-n[2], 0.0)],
    ])
    .expect("finite")
}

fn normalize(v: [f64; 3]) -> Option<[f64; 3]> {
    let len = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    (len > 1e-12).then(|| [v[0] / len, v[1] / len, v[2] / len])
}

/// Transports the standard qubit basis along the geodesic polygon through
/// the given Bloch-sphere `vertices`, closing back to the first one. The
/// first vertex must be `+z`, the Bloch vector of `|A_1⟩ = (1, 0)`.
///
/// Each edge is integrated with [`transport_path`] using the generator
/// `(n·σ)/2`, `n` normal to the edge's great circle.
pub fn geodesic_loop(vertices: &[[f64; 3]], steps_per_edge: usize) -> Result<ComplexMatrix> {
    if vertices.len() < 2 {
        return Err(Error::TooFewSamples { got: vertices.len() });
    }
    let start = normalize(vertices[0]).ok_or(Error::InvalidPath {
        reason: "zero vertex".into(),
    })?;
    if (start[2] - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidPath {
            reason: "first vertex must be the north pole (+z)".into(),
        });
    }
    let mut u = ComplexMatrix::identity(2);
    let n_vertices = vertices.len();
    for e in 0..n_vertices {
        let from = normalize(vertices[e]).ok_or(Error::InvalidPath { reason: "zero vertex".into() })?;
        let to = normalize(vertices[(e + 1) % n_vertices]).ok_or(Error::InvalidPath { reason: "zero vertex".into() })?;
        let axis = [
            from[1] * to[2] - from[2] * to[1],
            from[2] * to[0] - from[0] * to[2],
            from[0] * to[1] - from[1] * to[0],
        ];
        let cos = (from[0] * to[0] + from[1] * to[1] + from[2] * to[2]).clamp(-1.0, 1.0);
        let angle = axis_len(axis).atan2(cos);
        if angle < 1e-14 {
            continue;
        }
        let n = normalize(axis).ok_or(Error::InvalidPath {
            reason: format!("edge {e} joins antipodal points"),
        })?;
        let generator = pauli_combination(n).scale(C64::new(0.5, 0.0));
        let edge = transport_path(|_| generator.clone(), &u, angle, steps_per_edge)?;
        u = edge.final_unitary() * &u;
    }
    Ok(u)
}

fn axis_len(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

/// Spin-1/2 rotation `exp(−i angle (n·σ)/2)`.
pub fn spin_rotation(axis: [f64; 3], angle: f64) -> Result<ComplexMatrix> {
    let n = normalize(axis).ok_or(Error::InvalidPath { reason: "zero axis".into() })?;
    hermitian_exp(&pauli_combination(n).scale(C64::new(0.5, 0.0)), angle)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phases::gamma_pure;
    use crate::states::generate_family;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn qubit_eta_zero() {
        for &alpha in &[0.0, 0.3, 1.7, 4.0] {
            let p = qubit_traces(0.0, alpha, 0.8).unwrap();
            assert_eq!(p.t1, c(0.0, 0.0));
            assert_eq!(p.t2, c(0.0, 0.0));
            assert!((p.t12 - c(-1.0, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn qubit_degenerate_node() {
        let p = qubit_traces(1.0, PI / 2.0, 0.5).unwrap();
        assert!(p.t1.norm() < 1e-15);
        assert!((p.t12 - c(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn qubit_generic_point_matches_matrices() {
        let p = qubit_traces(1.0, 0.0, 0.7).unwrap();
        assert!((p.t1 - c(1.0, 0.0)).norm() < 1e-15);
        assert!((p.t2 - c(1.0, 0.0)).norm() < 1e-15);
        let want = 2.0 * 0.21f64.sqrt();
        assert!((p.t12.re - want).abs() < 1e-15);
        assert!((p.t12.re - 0.916515).abs() < 1e-6);
        let (d1, d2, d12) = qubit_traces_direct(1.0, 0.0, 0.7, 0.4).unwrap();
        assert!((d1 - p.t1).norm() < 1e-12 && (d2 - p.t2).norm() < 1e-12 && (d12 - p.t12).norm() < 1e-12);
    }

    #[test]
    fn qubit_range_errors() {
        assert!(matches!(qubit_traces(1.5, 0.0, 0.5), Err(Error::OutOfRange { name: "eta", .. })));
        assert!(matches!(qubit_traces(0.5, 0.0, -0.1), Err(Error::OutOfRange { name: "lambda1", .. })));
    }

    #[test]
    fn default_grid_size() {
        let g = QubitGrid::default();
        assert_eq!(g.len(), 21 * 129 * 5);
        assert!(g.len() >= 10_000);
        assert_eq!(g.points().count(), g.len());
        assert!((g.alphas.last().unwrap() - 2.0 * PI).abs() < 1e-15);
    }

    #[test]
    fn diagonal_unitaries() {
        let id = diagonal_unitary(&[c(1.0, 0.0); 3], None).unwrap();
        assert_eq!(id.matrix, ComplexMatrix::identity(3));
        assert!(id.special);
        let su = diagonal_unitary(&[c(0.0, 1.0), c(0.0, -1.0)], None).unwrap();
        assert!(su.special);
        assert!((su.matrix.determinant() - c(1.0, 0.0)).norm() < 1e-15);
        let u1 = diagonal_unitary(&[c(0.0, 1.0), c(1.0, 0.0)], None).unwrap();
        assert!(!u1.special);
        assert!(matches!(
            diagonal_unitary(&[c(1.0, 0.0), c(0.5, 0.0)], None),
            Err(Error::NotUnitModulus { index: 1, .. })
        ));
    }

    #[test]
    fn permutation_unitaries() {
        let p2 = permutation_unitary(&[c(1.0, 0.0), c(-1.0, 0.0)], None).unwrap();
        assert!(p2.special);
        assert!((p2.matrix.determinant() - c(1.0, 0.0)).norm() < 1e-15);
        assert_eq!(p2.matrix[(0, 1)], c(1.0, 0.0));
        assert_eq!(p2.matrix[(1, 0)], c(-1.0, 0.0));

        let p3 = permutation_unitary(&[c(1.0, 0.0); 3], None).unwrap();
        assert!(p3.special);
        assert!((p3.matrix.determinant() - c(1.0, 0.0)).norm() < 1e-15);
        assert!(p3.matrix.pow(3).max_abs_diff(&ComplexMatrix::identity(3)) < 1e-15);

        let ph: Vec<C64> = (0..5).map(|k| C64::from_polar(1.0, 0.3 * k as f64)).collect();
        assert!(permutation_unitary(&ph, None).unwrap().matrix.unitarity_deviation() < 1e-15);
    }

    #[test]
    fn diagonal_trace_examples() {
        let pure = generate_family(&diagonal_density(&[1.0, 0.0, 0.0]).unwrap()).unwrap();
        let ud = diagonal_unitary(&[c(0.0, 1.0), c(0.0, -1.0), c(1.0, 0.0)], Some(pure.basis())).unwrap();
        assert_eq!(diagonal_trace(&ud.matrix, &pure, &[0, 1]).unwrap(), c(0.0, 0.0));

        let fam = generate_family(&diagonal_density(&[0.8, 0.2]).unwrap()).unwrap();
        let id = ComplexMatrix::identity(2);
        assert!((diagonal_trace(&id, &fam, &[0]).unwrap() - c(1.0, 0.0)).norm() < 1e-15);

        let ud = diagonal_unitary(&[c(0.0, 1.0), c(0.0, -1.0)], Some(fam.basis())).unwrap();
        let closed = diagonal_trace(&ud.matrix, &fam, &[0, 1]).unwrap();
        // (i)²√(0.8·0.2) + (−i)²√(0.2·0.8)
        assert!((closed - c(-0.8, 0.0)).norm() < 1e-15);
        let general = family_trace(&ud.matrix, &fam, &[0, 1]).unwrap();
        assert!((general - closed).norm() < 1e-12);

        let not_diag = permutation_unitary(&[c(1.0, 0.0), c(-1.0, 0.0)], None).unwrap();
        assert!(matches!(
            diagonal_trace(&not_diag.matrix, &fam, &[0]),
            Err(Error::NotDiagonalInBasis { .. })
        ));
    }

    #[test]
    fn sequence_validation() {
        assert!(validate_sequence(&[0, 2, 1], 3, Some(3)).is_ok());
        assert_eq!(validate_sequence(&[0, 0], 3, None), Err(Error::RepeatedIndex { index: 0 }));
        assert_eq!(validate_sequence(&[3], 3, None), Err(Error::IndexOutOfRange { index: 3, dim: 3 }));
        assert_eq!(validate_sequence(&[0, 1], 3, Some(3)), Err(Error::SequenceLength { expected: 3, got: 2 }));
        assert_eq!(validate_sequence(&[], 3, None), Err(Error::LengthZero));
        assert_eq!(sequences(4, 4).len(), 24);
        assert_eq!(sequences(4, 2).len(), 12);
        assert_eq!(sequences(3, 3)[0], vec![0, 1, 2]);
    }

    #[test]
    fn identity_sequence_coefficient_is_one() {
        for n in 2..=5 {
            let weights: Vec<f64> = (1..=n).map(|k| k as f64).collect();
            let sum: f64 = weights.iter().sum();
            let rho = diagonal_density(&weights.iter().map(|w| w / sum).collect::<Vec<_>>()).unwrap();
            let fam = generate_family(&rho).unwrap();
            let mut phases = vec![c(1.0, 0.0); n];
            phases[0] = c(parity_sign(n), 0.0);
            let up = permutation_unitary(&phases, Some(fam.basis())).unwrap();
            let seq: Vec<usize> = (0..n).collect();
            let f = f_coefficient(&fam, &up.matrix, &seq).unwrap();
            assert!((f.value - 1.0).abs() < 1e-12, "N = {n}: {}", f.value);
        }
    }

    #[test]
    fn f_coefficient_rejects_non_special_or_non_permuting() {
        let fam = generate_family(&diagonal_density(&[0.6, 0.3, 0.1]).unwrap()).unwrap();
        let plain = permutation_unitary(&[c(0.0, 1.0); 3], Some(fam.basis())).unwrap();
        assert!(matches!(f_coefficient(&fam, &plain.matrix, &[0, 1, 2]), Err(Error::NotPermuting { .. })));
        let id = ComplexMatrix::identity(3);
        assert!(matches!(f_coefficient(&fam, &id, &[0, 1, 2]), Err(Error::NotPermuting { .. })));
        let good = permutation_unitary(&[c(1.0, 0.0); 3], Some(fam.basis())).unwrap();
        assert!(matches!(f_coefficient(&fam, &good.matrix, &[0, 1]), Err(Error::SequenceLength { .. })));
    }

    #[test]
    fn bloch_vectors() {
        assert_eq!(bloch_vector([c(1.0, 0.0), c(0.0, 0.0)]), [0.0, 0.0, 1.0]);
        let s = 0.5f64.sqrt();
        let b = bloch_vector([c(s, 0.0), c(0.0, s)]);
        assert!((b[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn closed_geodesic_loop_is_diagonal_and_transported() {
        let verts = [[0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]];
        let u = geodesic_loop(&verts, 64).unwrap();
        assert!(u.max_off_diagonal() < 1e-12);
        // the cyclic pure-state phase of |A_1⟩ is the diagonal entry itself
        let p1 = ComplexMatrix::from_real_diagonal(&[1.0, 0.0]).unwrap();
        let g = gamma_pure(&u, &[p1], 1e-9).unwrap();
        assert!((g.phase_factor().unwrap() - u[(0, 0)]).norm() < 1e-12);
        let ud = diagonal_unitary(&u.diagonal(), None).unwrap();
        assert!(ud.special);
    }
}
