//! Off-diagonal geometric phases for mutually orthogonal mixed quantum states.
//!
//! The crate is layered bottom-up:
//!
//! - [`linalg`]: dense complex kernels (Hermitian eigendecomposition, PSD
//!   powers, path-ordered exponentials, trace products).
//! - [`states`]: density operators, interference-based orthogonality and the
//!   cyclic-shift construction of N mutually orthogonal states.
//! - [`transport`]: parallel-transporting unitary paths and their certificate.
//! - [`phases`]: the phase functionals `γ^(l)` for pure and mixed states.
//! - [`families`]: closed forms for qubits, diagonal and permuting unitaries.
//! - [`twophoton`]: simulation of the polarization-entangled Franson setup
//!   that measures `γ^(1)` and `γ^(2)` for a qubit.

pub mod error;
pub mod families;
pub mod linalg;
pub mod phases;
pub mod random;
pub mod serial;
pub mod states;
pub mod transport;
pub mod twophoton;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, Exponent, SpectralDecomposition, C64};
pub use phases::{PhaseResult, PhaseStatus};
pub use states::{DensityOperator, OrthogonalFamily};
pub use transport::UnitaryPath;

/// Numerical thresholds shared across modules.
pub mod tol {
    /// Max |M - M†| entry accepted as Hermitian.
    pub const HERMITIAN: f64 = 1e-10;
    /// Eigenvalues in `[-PSD, 0)` are clamped to zero; below is an error.
    pub const PSD: f64 = 1e-10;
    /// Eigenvalues above this count towards the rank.
    pub const RANK: f64 = 1e-10;
    pub const TRACE: f64 = 1e-10;
    /// Neighbouring eigenvalues closer than this share an eigenspace block.
    pub const DEGENERACY: f64 = 1e-9;
    /// Unitarity of bases and interferometer elements.
    pub const BASIS_UNITARY: f64 = 1e-10;
    /// Unitarity of general transporting unitaries.
    pub const UNITARY: f64 = 1e-9;
    pub const PROJECTOR: f64 = 1e-10;
    pub const ORTHOGONALITY: f64 = 1e-9;
    pub const CONNECTION: f64 = 1e-8;
    /// Default |trace| below which a phase is reported indeterminate.
    pub const INDETERMINATE: f64 = 1e-9;
    pub const UNIT_MODULUS: f64 = 1e-12;
    pub const DIAGONAL: f64 = 1e-10;
    /// Residue allowed on permutation coefficients (imaginary part, negativity).
    pub const COEFFICIENT: f64 = 1e-10;
}
