//! Dense complex linear algebra for small Hilbert spaces.
//!
//! Everything here works on [`ComplexMatrix`], a square, finite, dense matrix
//! backed by `nalgebra`. The kernels are the ones the phase functionals need:
//! Hermitian eigendecomposition with a reproducible eigenvector gauge,
//! fractional powers of positive semidefinite operators, path-ordered
//! exponentials of Hermitian generators and traces of operator products.

use std::fmt;
use std::ops::{Add, Index, Mul, Neg, Range, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tol;

pub type C64 = Complex64;

/// Default number of steps for path-ordered products.
pub const DEFAULT_STEPS: usize = 1024;

/// Square dense complex matrix with finite entries.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<C64>);

impl ComplexMatrix {
    pub fn new(inner: DMatrix<C64>) -> Result<Self> {
        let (rows, cols) = inner.shape();
        if rows != cols {
            return Err(Error::NotSquare { rows, cols });
        }
        if rows == 0 {
            return Err(Error::Empty);
        }
        if inner.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self(inner))
    }

    /// Builds a matrix from row-major rows.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Empty);
        }
        for row in rows {
            if row.len() != n {
                return Err(Error::NotSquare {
                    rows: n,
                    cols: row.len(),
                });
            }
        }
        Self::new(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    /// Builds a matrix from separate real and imaginary row-major parts.
    pub fn from_parts(re: &[Vec<f64>], im: &[Vec<f64>]) -> Result<Self> {
        if re.len() != im.len() {
            return Err(Error::DimensionMismatch {
                expected: re.len(),
                got: im.len(),
            });
        }
        let rows = re
            .iter()
            .zip(im)
            .map(|(r, i)| {
                if r.len() != i.len() {
                    return Err(Error::DimensionMismatch {
                        expected: r.len(),
                        got: i.len(),
                    });
                }
                Ok(r.iter().zip(i).map(|(&a, &b)| C64::new(a, b)).collect())
            })
            .collect::<Result<Vec<Vec<C64>>>>()?;
        Self::from_rows(&rows)
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> C64) -> Result<Self> {
        Self::new(DMatrix::from_fn(dim, dim, f))
    }

    /// Panics if `dim == 0`.
    pub fn identity(dim: usize) -> Self {
        assert!(dim > 0, "identity of dimension 0");
        Self(DMatrix::identity(dim, dim))
    }

    /// Panics if `dim == 0`.
    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "zero matrix of dimension 0");
        Self(DMatrix::zeros(dim, dim))
    }

    pub fn from_diagonal(diag: &[C64]) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::Empty);
        }
        Self::new(DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(
            diag,
        )))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Result<Self> {
        let d: Vec<C64> = diag.iter().map(|&x| C64::new(x, 0.0)).collect();
        Self::from_diagonal(&d)
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[Vec<C64>]) -> Result<Self> {
        let n = columns.len();
        if n == 0 {
            return Err(Error::Empty);
        }
        if let Some(c) = columns.iter().find(|c| c.len() != n) {
            return Err(Error::NotSquare {
                rows: c.len(),
                cols: n,
            });
        }
        Self::new(DMatrix::from_fn(n, n, |i, j| columns[j][i]))
    }

    /// Outer product |a⟩⟨b|.
    pub fn outer(a: &[C64], b: &[C64]) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::DimensionMismatch {
                expected: a.len(),
                got: b.len(),
            });
        }
        Self::from_fn(a.len(), |i, j| a[i] * b[j].conj())
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_inner(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<C64> {
        self.0
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        self.0.column(j).iter().copied().collect()
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    pub fn determinant(&self) -> C64 {
        self.0.determinant()
    }

    pub fn scale(&self, c: C64) -> Self {
        Self(&self.0 * c)
    }

    pub fn diagonal(&self) -> Vec<C64> {
        self.0.diagonal().iter().copied().collect()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entry modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest off-diagonal entry modulus.
    pub fn max_off_diagonal(&self) -> f64 {
        let n = self.dim();
        let mut m = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    m = m.max(self.0[(i, j)].norm());
                }
            }
        }
        m
    }

    pub fn hermitian_deviation(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn unitarity_deviation(&self) -> f64 {
        (self.adjoint() * self).max_abs_diff(&Self::identity(self.dim()))
    }

    pub fn ensure_hermitian(&self, tol: f64) -> Result<()> {
        let deviation = self.hermitian_deviation();
        if deviation > tol {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(())
    }

    pub fn ensure_unitary(&self, tol: f64) -> Result<()> {
        let deviation = self.unitarity_deviation();
        if deviation > tol {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(())
    }

    pub fn ensure_dim(&self, expected: usize) -> Result<()> {
        if self.dim() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                got: self.dim(),
            });
        }
        Ok(())
    }

    /// Integer matrix power by repeated squaring.
    pub fn pow(&self, mut k: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(self.dim());
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        acc
    }

    /// `U M U†`.
    pub fn conjugated_by(&self, u: &Self) -> Self {
        u * &(self * &u.adjoint())
    }

    /// `B† M B`: the matrix elements ⟨A_i|M|A_j⟩ for basis columns of `B`.
    pub fn in_basis(&self, basis: &Self) -> Self {
        &basis.adjoint() * &(self * basis)
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        Self(self.0.kronecker(&other.0))
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.dim(), "dimension mismatch");
        let n = self.dim();
        (0..n)
            .map(|i| (0..n).map(|j| self.0[(i, j)] * v[j]).sum())
            .collect()
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ComplexMatrix{}", self.0)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, idx: (usize, usize)) -> &C64 {
        &self.0[idx]
    }
}

impl Mul<&ComplexMatrix> for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch");
        ComplexMatrix(&self.0 * &rhs.0)
    }
}

impl Mul<&ComplexMatrix> for ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        &self * rhs
    }
}

impl Mul for ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: ComplexMatrix) -> ComplexMatrix {
        &self * &rhs
    }
}

impl Add<&ComplexMatrix> for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch");
        ComplexMatrix(&self.0 + &rhs.0)
    }
}

impl Sub<&ComplexMatrix> for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch");
        ComplexMatrix(&self.0 - &rhs.0)
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        ComplexMatrix(-&self.0)
    }
}

/// Eigenvalues in ascending order with the matching orthonormal eigenvectors
/// stored as columns.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    eigenvectors: ComplexMatrix,
}

impl SpectralDecomposition {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &ComplexMatrix {
        &self.eigenvectors
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvector(&self, k: usize) -> Vec<C64> {
        self.eigenvectors.column(k)
    }

    /// V f(Λ) V†.
    pub fn map_eigenvalues(&self, f: impl Fn(f64) -> C64) -> ComplexMatrix {
        let v = self.eigenvectors.as_inner();
        let n = self.dim();
        let mut scaled = v.clone();
        for (j, &lambda) in self.eigenvalues.iter().enumerate() {
            let fj = f(lambda);
            for i in 0..n {
                scaled[(i, j)] *= fj;
            }
        }
        ComplexMatrix(scaled * v.adjoint())
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map_eigenvalues(|x| C64::new(x, 0.0))
    }

    /// Index ranges of eigenvalues that agree within [`tol::DEGENERACY`] of
    /// their neighbour. Each range is one degenerate eigenspace block.
    pub fn degenerate_groups(&self) -> Vec<Range<usize>> {
        let mut groups = Vec::new();
        let mut start = 0;
        for k in 1..=self.eigenvalues.len() {
            if k == self.eigenvalues.len()
                || self.eigenvalues[k] - self.eigenvalues[k - 1] > tol::DEGENERACY
            {
                groups.push(start..k);
                start = k;
            }
        }
        groups
    }
}

/// Hermitian eigendecomposition with eigenvalues ascending.
///
/// Each eigenvector is rephased so that its largest-magnitude entry (the first
/// one, on near ties) is real and positive.
pub fn hermitian_eig(m: &ComplexMatrix) -> Result<SpectralDecomposition> {
    m.ensure_hermitian(tol::HERMITIAN)?;
    let sym = (m.as_inner() + m.as_inner().adjoint()) * C64::new(0.5, 0.0);
    let eig = sym.symmetric_eigen();
    let n = m.dim();

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

    let eigenvalues: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vectors = DMatrix::<C64>::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let col = eig.eigenvectors.column(src);
        let peak = col.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let pivot = col
            .iter()
            .copied()
            .find(|z| z.norm() >= peak - 1e-12)
            .unwrap_or(C64::new(1.0, 0.0));
        let gauge = pivot.conj() / pivot.norm();
        for i in 0..n {
            vectors[(i, dst)] = col[i] * gauge;
        }
    }

    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors: ComplexMatrix(vectors),
    })
}

/// Positive rational exponent `p/q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Exponent {
    p: u32,
    q: u32,
}

impl Exponent {
    pub fn new(p: u32, q: u32) -> Result<Self> {
        if p == 0 || q == 0 {
            return Err(Error::InvalidExponent { p, q });
        }
        Ok(Self { p, q })
    }

    /// `1/l`. Panics on `l == 0`.
    pub fn root(l: usize) -> Self {
        assert!(l > 0, "root of order 0");
        Self {
            p: 1,
            q: l as u32,
        }
    }

    pub fn value(self) -> f64 {
        self.p as f64 / self.q as f64
    }
}

/// `M^{p/q}` for positive semidefinite `M`.
///
/// Eigenvalues at or below the rank threshold are treated as exact zeros.
pub fn psd_power(m: &ComplexMatrix, exponent: Exponent) -> Result<ComplexMatrix> {
    psd_power_of(&hermitian_eig(m)?, exponent)
}

/// `M^{p/q}` from an existing decomposition of `M`.
pub fn psd_power_of(spectrum: &SpectralDecomposition, exponent: Exponent) -> Result<ComplexMatrix> {
    let min = spectrum.eigenvalues.first().copied().unwrap_or(0.0);
    if min < -tol::PSD {
        return Err(Error::NotPsd {
            min_eigenvalue: min,
        });
    }
    let e = exponent.value();
    // Roundoff-level eigenvalues would otherwise surface as x^(1/l) ≫ x.
    Ok(spectrum.map_eigenvalues(|x| {
        if x <= tol::RANK {
            C64::new(0.0, 0.0)
        } else {
            C64::new(x.powf(e), 0.0)
        }
    }))
}

/// `exp(-i J t)` for Hermitian `J`, evaluated spectrally so the result is
/// unitary to rounding.
pub fn hermitian_exp(generator: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    let spectrum = hermitian_eig(generator)?;
    Ok(spectrum.map_eigenvalues(|lambda| C64::from_polar(1.0, -lambda * t)))
}

/// Path-ordered exponential `P exp(-i ∫_0^{s_end} J(s) ds)`.
///
/// Uses one spectral exponential per step with the generator sampled at the
/// step midpoint; later steps multiply from the left.
pub fn ordered_exp<F>(generator: F, s_end: f64, steps: usize) -> Result<ComplexMatrix>
where
    F: Fn(f64) -> ComplexMatrix,
{
    if steps == 0 {
        return Err(Error::ZeroSteps);
    }
    let h = s_end / steps as f64;
    let first = generator(0.5 * h);
    let dim = first.dim();
    let mut u = hermitian_exp(&first, h)?;
    for k in 1..steps {
        let j = generator((k as f64 + 0.5) * h);
        j.ensure_dim(dim)?;
        u = &hermitian_exp(&j, h)? * &u;
    }
    Ok(u)
}

/// `Tr(F_1 F_2 … F_m)`.
pub fn trace_product(factors: &[ComplexMatrix]) -> Result<C64> {
    let (last, rest) = factors.split_last().ok_or(Error::LengthZero)?;
    let dim = last.dim();
    for f in rest {
        f.ensure_dim(dim)?;
    }
    let Some((first, middle)) = rest.split_first() else {
        return Ok(last.trace());
    };
    let mut acc = first.clone();
    for f in middle {
        acc = &acc * f;
    }
    // Tr(A L) = Σ_ij A_ij L_ji, skipping the final full product.
    let (a, l) = (acc.as_inner(), last.as_inner());
    let mut sum = C64::new(0.0, 0.0);
    for i in 0..dim {
        for j in 0..dim {
            sum += a[(i, j)] * l[(j, i)];
        }
    }
    Ok(sum)
}
