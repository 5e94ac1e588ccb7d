//! Off-diagonal phase functionals.
//!
//! For an ordered list of `l` states and a unitary `U`, the phase is
//! `Φ[Tr(U X_1 U X_2 … U X_l)]` with `Φ[z] = z/|z|`, where `X_k` is a
//! rank-1 projector in the pure case and `ρ_k^{1/l}` in the mixed case. A
//! trace below the tolerance is a nodal point and the phase is indeterminate.

use std::f64::consts::PI;

use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{trace_product, ComplexMatrix, C64};
use crate::states::DensityOperator;
use crate::tol;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PhaseStatus {
    /// `phase_factor = z/|z|`, `argument ∈ (−π, π]`.
    Determinate { phase_factor: C64, argument: f64 },
    Indeterminate,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseResult {
    pub raw_trace: C64,
    pub status: PhaseStatus,
    pub tolerance_used: f64,
}

impl PhaseResult {
    pub fn is_determinate(&self) -> bool {
        matches!(self.status, PhaseStatus::Determinate { .. })
    }

    pub fn phase_factor(&self) -> Option<C64> {
        match self.status {
            PhaseStatus::Determinate { phase_factor, .. } => Some(phase_factor),
            PhaseStatus::Indeterminate => None,
        }
    }

    pub fn argument(&self) -> Option<f64> {
        match self.status {
            PhaseStatus::Determinate { argument, .. } => Some(argument),
            PhaseStatus::Indeterminate => None,
        }
    }

    pub fn status_label(&self) -> &'static str {
        if self.is_determinate() {
            "determinate"
        } else {
            "indeterminate"
        }
    }
}

impl Serialize for PhaseResult {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("PhaseResult", 5)?;
        s.serialize_field("re", &self.raw_trace.re)?;
        s.serialize_field("im", &self.raw_trace.im)?;
        s.serialize_field("abs", &self.raw_trace.norm())?;
        s.serialize_field("status", self.status_label())?;
        s.serialize_field("arg", &self.argument())?;
        s.end()
    }
}

/// Argument of `z` on the branch `(−π, π]`.
pub fn principal_arg(z: C64) -> f64 {
    let a = z.im.atan2(z.re);
    if a <= -PI {
        PI
    } else {
        a
    }
}

/// `Φ[z] = z/|z|`, indeterminate when `|z| < tol`.
pub fn phi(z: C64, tol: f64) -> PhaseResult {
    let modulus = z.norm();
    let status = if modulus < tol {
        PhaseStatus::Indeterminate
    } else {
        PhaseStatus::Determinate {
            phase_factor: z / modulus,
            argument: principal_arg(z),
        }
    };
    PhaseResult {
        raw_trace: z,
        status,
        tolerance_used: tol,
    }
}

fn check_projector(p: &ComplexMatrix, index: usize) -> Result<()> {
    let idempotent = (p * p).max_abs_diff(p);
    let hermitian = p.hermitian_deviation();
    let rank_one = (p.trace() - C64::new(1.0, 0.0)).norm();
    if idempotent > tol::PROJECTOR || hermitian > tol::PROJECTOR || rank_one > tol::PROJECTOR {
        return Err(Error::NotProjector { index });
    }
    Ok(())
}

/// `Tr(U X_1 U X_2 … U X_l)`.
pub fn alternating_trace(u: &ComplexMatrix, operands: &[ComplexMatrix]) -> Result<C64> {
    if operands.is_empty() {
        return Err(Error::LengthZero);
    }
    let factors: Vec<ComplexMatrix> = operands
        .iter()
        .map(|x| {
            x.ensure_dim(u.dim())?;
            Ok(u * x)
        })
        .collect::<Result<_>>()?;
    trace_product(&factors)
}

/// Pure-state phase `Φ[Tr(U P_{j1} U P_{j2} … U P_{jl})]`.
pub fn gamma_pure(u: &ComplexMatrix, projectors: &[ComplexMatrix], tol: f64) -> Result<PhaseResult> {
    if projectors.is_empty() {
        return Err(Error::LengthZero);
    }
    u.ensure_unitary(tol::UNITARY)?;
    for (k, p) in projectors.iter().enumerate() {
        p.ensure_dim(u.dim())?;
        check_projector(p, k)?;
    }
    for a in 0..projectors.len() {
        for b in a + 1..projectors.len() {
            if (&projectors[a] * &projectors[b]).max_abs() > tol::PROJECTOR {
                return Err(Error::ProjectorsNotOrthogonal { first: a, second: b });
            }
        }
    }
    Ok(phi(alternating_trace(u, projectors)?, tol))
}

/// Mixed-state phase `Φ[Tr(U ρ_{j1}^{1/l} U ρ_{j2}^{1/l} … U ρ_{jl}^{1/l})]`.
///
/// Orthogonality of the supplied states is not checked here; the connecting
/// unitary between them is not known to this function.
pub fn gamma_mixed(u: &ComplexMatrix, rhos: &[&DensityOperator], tol: f64) -> Result<PhaseResult> {
    let l = rhos.len();
    if l == 0 {
        return Err(Error::LengthZero);
    }
    if l > u.dim() {
        return Err(Error::LengthExceedsDimension { len: l, dim: u.dim() });
    }
    u.ensure_unitary(tol::UNITARY)?;
    let roots: Vec<ComplexMatrix> = rhos
        .iter()
        .map(|rho| {
            rho.matrix().ensure_dim(u.dim())?;
            Ok(rho.root(l))
        })
        .collect::<Result<_>>()?;
    Ok(phi(alternating_trace(u, &roots)?, tol))
}
