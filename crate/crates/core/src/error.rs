use thiserror::Error;

/// Failures raised by the numerical kernels and the physics layers above them.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix must have dimension at least 1")]
    Empty,

    #[error("matrix contains a non-finite entry")]
    NonFinite,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not Hermitian (max |M - M^dagger| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("trace is not 1 (got {trace})")]
    TraceNotOne { trace: f64 },

    #[error("matrix is not unitary (max |U^dagger U - I| = {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("rho_B is not U rho_A U^dagger (max deviation {deviation:e})")]
    NotConnected { deviation: f64 },

    #[error("operand {index} is not a rank-1 projector")]
    NotProjector { index: usize },

    #[error("projectors {first} and {second} are not mutually orthogonal")]
    ProjectorsNotOrthogonal { first: usize, second: usize },

    #[error("phase {index} does not have unit modulus (|z| = {modulus})")]
    NotUnitModulus { index: usize, modulus: f64 },

    #[error("unitary is not diagonal in the family basis (max off-diagonal {deviation:e})")]
    NotDiagonalInBasis { deviation: f64 },

    #[error("unitary is not a special cyclic permutation in the family basis: {reason}")]
    NotPermuting { reason: String },

    #[error("permutation coefficient has imaginary residue {imag:e}")]
    ImaginaryResidue { imag: f64 },

    #[error("permutation coefficient is negative ({value:e})")]
    NegativeCoefficient { value: f64 },

    #[error("at least one operand is required")]
    LengthZero,

    #[error("sequence length {len} exceeds Hilbert space dimension {dim}")]
    LengthExceedsDimension { len: usize, dim: usize },

    #[error("sequence index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("sequence repeats index {index}")]
    RepeatedIndex { index: usize },

    #[error("sequence must have length {expected}, got {got}")]
    SequenceLength { expected: usize, got: usize },

    #[error("path needs at least two samples, got {got}")]
    TooFewSamples { got: usize },

    #[error("invalid path: {reason}")]
    InvalidPath { reason: String },

    #[error("{name} = {value} is outside {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("invalid exponent {p}/{q}: numerator and denominator must be positive")]
    InvalidExponent { p: u32, q: u32 },

    #[error("steps must be at least 1")]
    ZeroSteps,

    #[error("sample count {got} must be a power of two and at least 8")]
    InvalidSampleCount { got: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
