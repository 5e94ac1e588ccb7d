//! Parallel transport of a complete orthonormal basis.
//!
//! A path `U(s)` transports the basis `{|A_k⟩}` when no transported state
//! picks up local phase, `⟨A_k|U†U̇|A_k⟩ = 0`. With `U̇ = −iJU` that means the
//! generator has a vanishing diagonal in the transported basis `U(s)|A_k⟩`.
//! [`transport_path`] enforces this by stripping that diagonal from the
//! generator at every step.

use crate::error::{Error, Result};
use crate::linalg::{hermitian_exp, ComplexMatrix, C64};
use crate::tol;

/// Sampled unitary path starting at the identity.
#[derive(Clone, Debug)]
pub struct UnitaryPath {
    samples: Vec<(f64, ComplexMatrix)>,
    generators: Vec<(f64, ComplexMatrix)>,
}

impl UnitaryPath {
    pub fn new(samples: Vec<(f64, ComplexMatrix)>) -> Result<Self> {
        let Some((s0, u0)) = samples.first() else {
            return Err(Error::TooFewSamples { got: 0 });
        };
        let dim = u0.dim();
        if *s0 != 0.0 {
            return Err(Error::InvalidPath {
                reason: format!("path must start at s = 0, got {s0}"),
            });
        }
        if u0.max_abs_diff(&ComplexMatrix::identity(dim)) > 1e-10 {
            return Err(Error::InvalidPath {
                reason: "U(0) is not the identity".into(),
            });
        }
        for w in samples.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(Error::InvalidPath {
                    reason: "parameter is not strictly increasing".into(),
                });
            }
        }
        for (_, u) in &samples {
            u.ensure_dim(dim)?;
            u.ensure_unitary(tol::UNITARY)?;
        }
        Ok(Self {
            samples,
            generators: Vec::new(),
        })
    }

    /// Samples a closed-form path at `steps + 1` equally spaced points on `[0, s_end]`.
    pub fn from_fn(path: impl Fn(f64) -> ComplexMatrix, s_end: f64, steps: usize) -> Result<Self> {
        if steps == 0 {
            return Err(Error::ZeroSteps);
        }
        let h = s_end / steps as f64;
        Self::new((0..=steps).map(|k| (k as f64 * h, path(k as f64 * h))).collect())
    }

    pub fn samples(&self) -> &[(f64, ComplexMatrix)] {
        &self.samples
    }

    /// Projected generators at step midpoints, when the path was integrated.
    pub fn generators(&self) -> &[(f64, ComplexMatrix)] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.samples[0].1.dim()
    }

    pub fn final_unitary(&self) -> &ComplexMatrix {
        &self.samples.last().expect("path is nonempty").1
    }
}

fn strip_diagonal(j: &ComplexMatrix, basis: &ComplexMatrix) -> ComplexMatrix {
    let mut inner = j.in_basis(basis).into_inner();
    for k in 0..inner.nrows() {
        inner[(k, k)] = C64::new(0.0, 0.0);
    }
    let k = ComplexMatrix::new(inner).expect("finite square matrix");
    &(basis * &k) * &basis.adjoint()
}

/// `J − Σ_k ⟨A_k|J|A_k⟩ |A_k⟩⟨A_k|`.
pub fn project_parallel(j: &ComplexMatrix, basis: &ComplexMatrix) -> Result<ComplexMatrix> {
    j.ensure_hermitian(tol::HERMITIAN)?;
    basis.ensure_unitary(tol::BASIS_UNITARY)?;
    j.ensure_dim(basis.dim())?;
    Ok(strip_diagonal(j, basis))
}

/// Integrates `U̇ = −i J'(s) U` on `[0, s_end]`, where `J'` is `generator(s)`
/// with its diagonal removed in the transported basis `U(s)|A_k⟩`.
///
/// Each step is an exponential midpoint step: a half-step predictor gives the
/// transported basis at the midpoint, the midpoint generator is projected
/// against it, and its exponential advances the full step. The projected
/// generator is traceless, so every step stays in SU(N).
pub fn transport_path<F>(generator: F, basis: &ComplexMatrix, s_end: f64, steps: usize) -> Result<UnitaryPath>
where
    F: Fn(f64) -> ComplexMatrix,
{
    if steps == 0 {
        return Err(Error::ZeroSteps);
    }
    if s_end.is_nan() || s_end <= 0.0 {
        return Err(Error::OutOfRange {
            name: "s_end",
            value: s_end,
            range: "(0, inf)",
        });
    }
    basis.ensure_unitary(tol::BASIS_UNITARY)?;
    let dim = basis.dim();
    let h = s_end / steps as f64;

    let mut u = ComplexMatrix::identity(dim);
    let mut samples = Vec::with_capacity(steps + 1);
    let mut generators = Vec::with_capacity(steps);
    samples.push((0.0, u.clone()));
    for k in 0..steps {
        let s_mid = (k as f64 + 0.5) * h;
        let j = generator(s_mid);
        j.ensure_dim(dim)?;
        j.ensure_hermitian(tol::HERMITIAN)?;

        let predictor = strip_diagonal(&j, &(&u * basis));
        let u_half = &hermitian_exp(&predictor, 0.5 * h)? * &u;
        let corrected = strip_diagonal(&j, &(&u_half * basis));
        u = &hermitian_exp(&corrected, h)? * &u;

        samples.push(((k + 1) as f64 * h, u.clone()));
        generators.push((s_mid, corrected));
    }

    let det_error = (u.determinant() - C64::new(1.0, 0.0)).norm();
    if det_error > 1e-8 * steps as f64 {
        return Err(Error::InvalidPath {
            reason: format!("final unitary left SU(N): |det U - 1| = {det_error:e}"),
        });
    }
    Ok(UnitaryPath { samples, generators })
}

/// Largest discrete local phase rate `|arg⟨A_k|U_i† U_{i+1}|A_k⟩| / Δs` over
/// basis vectors and adjacent samples; zero for exact parallel transport.
///
/// This is the phase of the forward difference `⟨A_k|U†ΔU|A_k⟩`. Its modulus
/// also carries a real part `−Δs‖Ḃ‖²/2` that reflects normalization, not phase.
pub fn transport_defect(path: &UnitaryPath, basis: &ComplexMatrix) -> Result<f64> {
    if path.len() < 2 {
        return Err(Error::TooFewSamples { got: path.len() });
    }
    basis.ensure_unitary(tol::BASIS_UNITARY)?;
    basis.ensure_dim(path.dim())?;
    let mut worst = 0.0f64;
    for w in path.samples().windows(2) {
        let (s0, u0) = (&w[0].0, &w[0].1);
        let (s1, u1) = (&w[1].0, &w[1].1);
        let step = (&u0.adjoint() * u1).in_basis(basis);
        for k in 0..basis.dim() {
            let rate = step[(k, k)].arg().abs() / (s1 - s0);
            worst = worst.max(rate);
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ordered_exp;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn sigma_x() -> ComplexMatrix {
        ComplexMatrix::from_rows(&[vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(1.0, 0.0), c(0.0, 0.0)]]).unwrap()
    }

    fn sigma_y() -> ComplexMatrix {
        ComplexMatrix::from_rows(&[vec![c(0.0, 0.0), c(0.0, -1.0)], vec![c(0.0, 1.0), c(0.0, 0.0)]]).unwrap()
    }

    fn sigma_z() -> ComplexMatrix {
        ComplexMatrix::from_real_diagonal(&[1.0, -1.0]).unwrap()
    }

    #[test]
    fn projection_cases() {
        let id = ComplexMatrix::identity(2);
        let d = ComplexMatrix::from_real_diagonal(&[1.0, 2.0]).unwrap();
        assert_eq!(project_parallel(&d, &id).unwrap(), ComplexMatrix::zeros(2));
        let x = sigma_x();
        assert!(project_parallel(&x, &id).unwrap().max_abs_diff(&x) < 1e-15);

        let j = &d + &x.scale(c(0.3, 0.0));
        let p = project_parallel(&j, &id).unwrap();
        assert!(p.max_abs_diff(&x.scale(c(0.3, 0.0))) < 1e-15);
        assert!(p.trace().norm() < 1e-15);
    }

    #[test]
    fn projection_in_rotated_basis() {
        let basis = hermitian_exp(&(&sigma_y() + &sigma_z().scale(c(0.4, 0.0))), 0.7).unwrap();
        let j = &sigma_z() + &sigma_x().scale(c(0.2, 0.0));
        let p = project_parallel(&j, &basis).unwrap();
        let inb = p.in_basis(&basis);
        assert!(inb[(0, 0)].norm() < 1e-14 && inb[(1, 1)].norm() < 1e-14);
        assert!(p.hermitian_deviation() < 1e-14);
    }

    #[test]
    fn projection_errors() {
        let skew = ComplexMatrix::from_rows(&[vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(0.0, 0.0), c(0.0, 0.0)]]).unwrap();
        assert!(matches!(project_parallel(&skew, &ComplexMatrix::identity(2)), Err(Error::NotHermitian { .. })));
        let bad_basis = ComplexMatrix::identity(2).scale(c(0.5, 0.0));
        assert!(matches!(project_parallel(&sigma_x(), &bad_basis), Err(Error::NotUnitary { .. })));
    }

    #[test]
    fn zero_generator_path() {
        let path = transport_path(|_| ComplexMatrix::zeros(2), &ComplexMatrix::identity(2), 1.0, 8).unwrap();
        assert_eq!(path.len(), 9);
        for (_, u) in path.samples() {
            assert!(u.max_abs_diff(&ComplexMatrix::identity(2)) < 1e-15);
        }
        assert_eq!(transport_defect(&path, &ComplexMatrix::identity(2)).unwrap(), 0.0);
    }

    #[test]
    fn constant_off_diagonal_generator_is_exact() {
        let beta = 1.1;
        let path = transport_path(|_| sigma_x(), &ComplexMatrix::identity(2), beta, 64).unwrap();
        let exact = hermitian_exp(&sigma_x(), beta).unwrap();
        assert!(path.final_unitary().max_abs_diff(&exact) < 1e-13);
    }

    #[test]
    fn diagonal_part_is_removed_along_the_way() {
        // σ_z is diagonal in the transported basis for all s, so nothing moves.
        let j = |_s: f64| &sigma_z() + &ComplexMatrix::zeros(2);
        let path = transport_path(j, &ComplexMatrix::identity(2), 2.0, 32).unwrap();
        assert!(path.final_unitary().max_abs_diff(&ComplexMatrix::identity(2)) < 1e-15);
    }

    #[test]
    fn transported_paths_stay_special_unitary() {
        let j = |s: f64| {
            &(&sigma_x().scale(c(s.cos(), 0.0)) + &sigma_y().scale(c(s.sin(), 0.0))) + &sigma_z().scale(c(0.5, 0.0))
        };
        let path = transport_path(j, &ComplexMatrix::identity(2), 3.0, 256).unwrap();
        for (_, u) in path.samples() {
            assert!((u.determinant() - c(1.0, 0.0)).norm() < 1e-12);
        }
        for (_, g) in path.generators() {
            assert!(g.trace().norm() < 1e-12);
        }
        // the unprojected evolution would acquire local phase
        let plain = ordered_exp(j, 3.0, 256).unwrap();
        assert!(plain.max_abs_diff(path.final_unitary()) > 1e-3);
    }

    #[test]
    fn defect_of_maximally_violating_path() {
        let path = UnitaryPath::from_fn(
            |s| ComplexMatrix::from_diagonal(&[C64::from_polar(1.0, s), C64::from_polar(1.0, -s)]).unwrap(),
            1.0,
            100,
        )
        .unwrap();
        let d = transport_defect(&path, &ComplexMatrix::identity(2)).unwrap();
        assert!((d - 1.0).abs() < 1e-12);
    }

    #[test]
    fn defect_of_integrated_path_is_small() {
        let j = |s: f64| &sigma_x().scale(c((0.7 * s).cos(), 0.0)) + &sigma_y().scale(c((0.7 * s).sin(), 0.0));
        let coarse = transport_path(j, &ComplexMatrix::identity(2), 2.0, 512).unwrap();
        let fine = transport_path(j, &ComplexMatrix::identity(2), 2.0, 1024).unwrap();
        let dc = transport_defect(&coarse, &ComplexMatrix::identity(2)).unwrap();
        let df = transport_defect(&fine, &ComplexMatrix::identity(2)).unwrap();
        assert!(df < 1e-5, "{df}");
        assert!(df < dc);
        // naive sampling of the unprojected evolution is not transporting
        let raw = UnitaryPath::from_fn(|s| if s == 0.0 { ComplexMatrix::identity(2) } else { ordered_exp(j, s, 64).unwrap() }, 2.0, 64).unwrap();
        assert!(transport_defect(&raw, &ComplexMatrix::identity(2)).unwrap() > 1e-3);
    }

    #[test]
    fn path_validation() {
        assert!(matches!(UnitaryPath::new(vec![]), Err(Error::TooFewSamples { got: 0 })));
        let id = ComplexMatrix::identity(2);
        assert!(UnitaryPath::new(vec![(0.0, id.clone()), (0.0, id.clone())]).is_err());
        assert!(UnitaryPath::new(vec![(0.0, sigma_x())]).is_err());
        let single = UnitaryPath::new(vec![(0.0, id.clone())]).unwrap();
        assert_eq!(transport_defect(&single, &id), Err(Error::TooFewSamples { got: 1 }));
        assert!(transport_path(|_| sigma_x(), &id, 0.0, 4).is_err());
    }
}
