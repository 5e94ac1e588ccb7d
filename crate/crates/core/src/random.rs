//! Seeded random instances: density operators, unitaries, spectra, phases.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::linalg::{ComplexMatrix, C64};
use crate::states::{make_density, DensityOperator};

fn gaussian_matrix<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DMatrix<C64> {
    DMatrix::from_fn(n, n, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        C64::new(re, im)
    })
}

/// `ρ = GG†/Tr(GG†)` for a complex Gaussian `G`; full rank almost surely.
pub fn random_density<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DensityOperator {
    let g = gaussian_matrix(n, rng);
    let w = &g * g.adjoint();
    let tr = w.trace().re;
    let mut m = w / C64::new(tr, 0.0);
    // exact Hermitian symmetry so validation never trips on rounding
    m = (&m + m.adjoint()) * C64::new(0.5, 0.0);
    make_density(ComplexMatrix::new(m).expect("finite")).expect("Gaussian Gram matrix is a density operator")
}

/// Haar-random unitary: QR of a complex Gaussian matrix with the phases of
/// `R`'s diagonal folded back into `Q`.
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let qr = gaussian_matrix(n, rng).qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        let d = r[(j, j)];
        let ph = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= ph;
        }
    }
    ComplexMatrix::new(q).expect("finite")
}

/// Uniform point on the probability simplex, strictly positive weights.
pub fn random_spectrum<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    let sum: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / sum).collect()
}

/// Spectrum with exactly `rank` nonzero weights followed by zeros.
pub fn random_spectrum_of_rank<R: Rng + ?Sized>(n: usize, rank: usize, rng: &mut R) -> Vec<f64> {
    let mut w = random_spectrum(rank, rng);
    w.resize(n, 0.0);
    w
}

pub fn random_phase<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::from_polar(1.0, 2.0 * PI * rng.random::<f64>())
}

/// `n` unit phases whose product is `target`.
pub fn random_phases_with_product<R: Rng + ?Sized>(n: usize, target: C64, rng: &mut R) -> Vec<C64> {
    let mut phases: Vec<C64> = (0..n.saturating_sub(1)).map(|_| random_phase(rng)).collect();
    let partial: C64 = phases.iter().product();
    phases.push(target / partial);
    phases
}

/// Density operator with the given spectrum in a random eigenbasis.
pub fn random_density_with_spectrum<R: Rng + ?Sized>(spectrum: &[f64], rng: &mut R) -> DensityOperator {
    let u = random_unitary(spectrum.len(), rng);
    let d = ComplexMatrix::from_real_diagonal(spectrum).expect("nonempty spectrum");
    let m = d.conjugated_by(&u);
    let sym = (m.as_inner() + m.as_inner().adjoint()) * C64::new(0.5, 0.0);
    make_density(ComplexMatrix::new(sym).expect("finite")).expect("valid spectrum")
}
