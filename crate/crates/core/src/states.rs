//! Density operators, interference-based orthogonality, and mutually
//! orthogonal families generated by a cyclic shift of the eigenbasis.

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, psd_power_of, ComplexMatrix, Exponent, SpectralDecomposition, C64};
use crate::tol;

/// Hermitian, positive semidefinite, unit-trace operator with its spectrum
/// computed once at construction.
#[derive(Clone, Debug)]
pub struct DensityOperator {
    matrix: ComplexMatrix,
    spectrum: SpectralDecomposition,
    rank: usize,
}

impl DensityOperator {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn spectrum(&self) -> &SpectralDecomposition {
        &self.spectrum
    }

    /// Ascending.
    pub fn eigenvalues(&self) -> &[f64] {
        self.spectrum.eigenvalues()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn is_pure(&self) -> bool {
        self.rank == 1
    }

    /// `ρ^{1/l}` from the cached spectrum.
    pub fn root(&self, l: usize) -> ComplexMatrix {
        psd_power_of(&self.spectrum, Exponent::root(l))
            .expect("validated density operator is PSD")
    }

    /// `U ρ U†`, revalidated.
    pub fn transformed(&self, u: &ComplexMatrix) -> Result<DensityOperator> {
        make_density(self.matrix.conjugated_by(u))
    }
}

/// Validates `matrix` as a density operator.
pub fn make_density(matrix: ComplexMatrix) -> Result<DensityOperator> {
    let spectrum = hermitian_eig(&matrix)?;
    let min = spectrum.eigenvalues()[0];
    if min < -tol::PSD {
        return Err(Error::NotPsd {
            min_eigenvalue: min,
        });
    }
    let trace = matrix.trace().re;
    if (trace - 1.0).abs() > tol::TRACE {
        return Err(Error::TraceNotOne { trace });
    }
    let rank = spectrum.eigenvalues().iter().filter(|&&x| x > tol::RANK).count();
    Ok(DensityOperator {
        matrix,
        spectrum,
        rank,
    })
}

/// Convenience: a density operator diagonal in the standard basis.
pub fn diagonal_density(weights: &[f64]) -> Result<DensityOperator> {
    make_density(ComplexMatrix::from_real_diagonal(weights)?)
}

/// The cyclic shift `U_g = Σ_n |A_{n+1 mod N}⟩⟨A_n|` for basis columns `A_n`.
pub fn shift_unitary(basis: &ComplexMatrix) -> Result<ComplexMatrix> {
    basis.ensure_unitary(tol::BASIS_UNITARY)?;
    let n = basis.dim();
    let cycle = ComplexMatrix::from_fn(n, |i, j| {
        if i == (j + 1) % n {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })?;
    Ok(&(basis * &cycle) * &basis.adjoint())
}

/// N density operators `ρ_n = U_g^{n} ρ_1 U_g^{†n}` sharing the eigenbasis of
/// `ρ_1`, ordered so that `λ_1 ≥ λ_2 ≥ … ≥ λ_N` sit on `|A_1⟩ … |A_N⟩`.
///
/// Member indices are zero-based: member `n` carries `λ_k` on `|A_{k+n}⟩`.
#[derive(Clone, Debug)]
pub struct OrthogonalFamily {
    members: Vec<DensityOperator>,
    basis: ComplexMatrix,
    shift: ComplexMatrix,
    eigenvalues: Vec<f64>,
}

impl OrthogonalFamily {
    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn members(&self) -> &[DensityOperator] {
        &self.members
    }

    pub fn member(&self, n: usize) -> &DensityOperator {
        &self.members[n]
    }

    /// Columns `|A_1⟩ … |A_N⟩`.
    pub fn basis(&self) -> &ComplexMatrix {
        &self.basis
    }

    pub fn shift(&self) -> &ComplexMatrix {
        &self.shift
    }

    /// Spectrum of `ρ_1`, descending.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn rank(&self) -> usize {
        self.members[0].rank()
    }

    /// Eigenvalue of member `n` on basis vector `k`.
    pub fn eigenvalue_of(&self, n: usize, k: usize) -> f64 {
        let dim = self.dim();
        self.eigenvalues[(k + dim - n % dim) % dim]
    }

    /// `U_g^{(to - from) mod N}`, which maps member `from` onto member `to`.
    pub fn connector(&self, from: usize, to: usize) -> ComplexMatrix {
        let dim = self.dim();
        let power = (to + dim - from % dim) % dim;
        self.shift.pow(power as u32)
    }

    /// Checks every ordered pair of distinct members. Fails for spectra with
    /// a degenerate eigenvalue whose eigenspace the shift maps into itself,
    /// e.g. the maximally mixed state.
    pub fn is_pairwise_orthogonal(&self) -> Result<bool> {
        let n = self.dim();
        for a in 0..n {
            for b in 0..n {
                if a != b && !are_orthogonal(&self.members[a], &self.members[b], &self.connector(a, b))? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

pub fn generate_family(rho1: &DensityOperator) -> Result<OrthogonalFamily> {
    let n = rho1.dim();
    let spectrum = rho1.spectrum();
    let order: Vec<usize> = (0..n).rev().collect();
    let columns: Vec<Vec<C64>> = order.iter().map(|&k| spectrum.eigenvector(k)).collect();
    let basis = ComplexMatrix::from_columns(&columns)?;
    // same rank threshold as the fractional powers, so closed forms agree
    let eigenvalues: Vec<f64> = order
        .iter()
        .map(|&k| spectrum.eigenvalues()[k])
        .map(|x| if x <= tol::RANK { 0.0 } else { x })
        .collect();
    let shift = shift_unitary(&basis)?;

    let mut members = Vec::with_capacity(n);
    members.push(rho1.clone());
    let mut power = shift.clone();
    for _ in 1..n {
        members.push(rho1.transformed(&power)?);
        power = &shift * &power;
    }
    Ok(OrthogonalFamily {
        members,
        basis,
        shift,
        eigenvalues,
    })
}

/// Largest overlap `|⟨A_j|U|A_k⟩|` over pairs `j, k` inside one degenerate
/// eigenspace block of `rho_a`. Zero exactly when the pair is orthogonal in
/// the interference sense for every choice of eigenvector representatives.
pub fn orthogonality_overlap(
    rho_a: &DensityOperator,
    rho_b: &DensityOperator,
    u: &ComplexMatrix,
) -> Result<f64> {
    u.ensure_unitary(tol::UNITARY)?;
    u.ensure_dim(rho_a.dim())?;
    rho_b.matrix().ensure_dim(rho_a.dim())?;
    let deviation = rho_a.matrix().conjugated_by(u).max_abs_diff(rho_b.matrix());
    if deviation > tol::CONNECTION {
        return Err(Error::NotConnected { deviation });
    }
    let spectrum = rho_a.spectrum();
    let overlaps = u.in_basis(spectrum.eigenvectors());
    let mut worst = 0.0f64;
    for group in spectrum.degenerate_groups() {
        for j in group.clone() {
            for k in group.clone() {
                worst = worst.max(overlaps[(j, k)].norm());
            }
        }
    }
    Ok(worst)
}

/// `rho_a ⟂ rho_b` for `rho_b = U rho_a U†`.
pub fn are_orthogonal(rho_a: &DensityOperator, rho_b: &DensityOperator, u: &ComplexMatrix) -> Result<bool> {
    Ok(orthogonality_overlap(rho_a, rho_b, u)? <= tol::ORTHOGONALITY)
}

/// `I(χ) = 2 + 2 Σ_k λ_k |⟨A_k|U|A_k⟩| cos(χ − arg⟨A_k|U|A_k⟩)`.
pub fn interference_profile(rho_a: &DensityOperator, u: &ComplexMatrix, chi: f64) -> Result<f64> {
    u.ensure_unitary(tol::UNITARY)?;
    u.ensure_dim(rho_a.dim())?;
    let spectrum = rho_a.spectrum();
    let overlaps = u.in_basis(spectrum.eigenvectors());
    let sum: f64 = spectrum
        .eigenvalues()
        .iter()
        .enumerate()
        .map(|(k, &lambda)| {
            let z = overlaps[(k, k)];
            lambda.max(0.0) * z.norm() * (chi - z.arg()).cos()
        })
        .sum();
    Ok(2.0 + 2.0 * sum)
}
