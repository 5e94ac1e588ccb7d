//! Franson-type interferometer for polarization-entangled photon pairs.
//!
//! The system photon sees `U_s` in its long arm and `V_s` in its short arm;
//! the ancilla photon sees `U_a` and `V_a`. Coincidences postselect the
//! long-long and short-short amplitudes, which interfere:
//!
//! `I(χ) = |e^{iχ}(U_s⊗U_a)|Ψ⟩ + (V_s⊗V_a)|Ψ⟩|² = 2 + 2 Re[e^{−iχ} z]`,
//! `z = ⟨Ψ|U_s†V_s ⊗ U_a†V_a|Ψ⟩`.
//!
//! The variable phase `e^{iχ}` rides on the long arm, so the fringe maximum
//! sits at `χ = arg z` and the extracted argument equals the argument of the
//! trace being measured.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, Poisson};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64};
use crate::phases::principal_arg;
use crate::states::{make_density, DensityOperator};
use crate::tol;

/// Linearly polarized ensemble with polarization degree `r ∈ [0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PolarizationEnsemble {
    r: f64,
}

impl PolarizationEnsemble {
    pub fn new(r: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&r) {
            return Err(Error::OutOfRange {
                name: "r",
                value: r,
                range: "[0, 1]",
            });
        }
        Ok(Self { r })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    /// `ρ_1 = (1+r)/2 |h⟩⟨h| + (1−r)/2 |v⟩⟨v|`.
    pub fn rho1(&self) -> DensityOperator {
        let m = ComplexMatrix::from_real_diagonal(&[(1.0 + self.r) / 2.0, (1.0 - self.r) / 2.0]).expect("2x2");
        make_density(m).expect("valid polarization state")
    }

    /// `ρ_2 = (1−r)/2 |h⟩⟨h| + (1+r)/2 |v⟩⟨v|`.
    pub fn rho2(&self) -> DensityOperator {
        let m = ComplexMatrix::from_real_diagonal(&[(1.0 - self.r) / 2.0, (1.0 + self.r) / 2.0]).expect("2x2");
        make_density(m).expect("valid polarization state")
    }
}

/// Two-photon polarization state over `(hh, hv, vh, vv)`, system photon first.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoPhotonState {
    amplitudes: [C64; 4],
}

impl TwoPhotonState {
    pub fn new(amplitudes: [C64; 4]) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::OutOfRange {
                name: "norm",
                value: norm.sqrt(),
                range: "1 ± 1e-12",
            });
        }
        Ok(Self { amplitudes })
    }

    pub fn amplitudes(&self) -> &[C64; 4] {
        &self.amplitudes
    }

    /// `Tr_a |Ψ⟩⟨Ψ|`.
    pub fn system_state(&self) -> ComplexMatrix {
        let a = &self.amplitudes;
        ComplexMatrix::from_fn(2, |i, j| (0..2).map(|k| a[2 * i + k] * a[2 * j + k].conj()).sum()).expect("2x2")
    }

    /// `⟨Ψ|A ⊗ B|Ψ⟩`.
    pub fn expectation(&self, system: &ComplexMatrix, ancilla: &ComplexMatrix) -> C64 {
        let op = system.kron(ancilla);
        let image = op.apply(&self.amplitudes);
        self.amplitudes.iter().zip(&image).map(|(a, b)| a.conj() * b).sum()
    }
}

/// `√((1+r)/2) |h⟩⊗|h⟩ + √((1−r)/2) |v⟩⊗|v⟩`, a purification of `ρ_1`.
pub fn purify(ensemble: &PolarizationEnsemble) -> TwoPhotonState {
    let r = ensemble.r();
    let zero = C64::new(0.0, 0.0);
    TwoPhotonState {
        amplitudes: [
            C64::new(((1.0 + r) / 2.0).sqrt(), 0.0),
            zero,
            zero,
            C64::new(((1.0 - r) / 2.0).sqrt(), 0.0),
        ],
    }
}

/// `cos θ (|h⟩⟨v| + |v⟩⟨h|) + sin θ (−i|h⟩⟨v| + i|v⟩⟨h|)`, off-diagonal in h–v.
pub fn rotation_generator(theta: f64) -> ComplexMatrix {
    let zero = C64::new(0.0, 0.0);
    ComplexMatrix::from_rows(&[
        vec![zero, C64::from_polar(1.0, -theta)],
        vec![C64::from_polar(1.0, theta), zero],
    ])
    .expect("2x2")
}

/// `U(β, θ) = exp(−iβ K_θ)`; `K_θ² = I` gives `cos β I − i sin β K_θ`.
pub fn rotation_unitary(beta: f64, theta: f64) -> ComplexMatrix {
    let k = rotation_generator(theta);
    let (s, c) = beta.sin_cos();
    &ComplexMatrix::identity(2).scale(C64::new(c, 0.0)) + &k.scale(C64::new(0.0, -s))
}

/// Polarization flip `F = U(π/2, π/2)`, which maps `ρ_1` onto `ρ_2`.
pub fn flip() -> ComplexMatrix {
    rotation_unitary(PI / 2.0, PI / 2.0)
}

/// Which pair of arms carries the variable phase `e^{iχ}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChiArm {
    /// On the `U_s ⊗ U_a` amplitude.
    Long,
    /// On the `V_s ⊗ V_a` amplitude; the fringe then moves to `χ = −arg z`.
    Short,
}

#[derive(Clone, Debug)]
pub struct MeasurementConfig {
    us: ComplexMatrix,
    vs: ComplexMatrix,
    ua: ComplexMatrix,
    va: ComplexMatrix,
    chi_arm: ChiArm,
}

impl MeasurementConfig {
    pub fn new(us: ComplexMatrix, vs: ComplexMatrix, ua: ComplexMatrix, va: ComplexMatrix, chi_arm: ChiArm) -> Result<Self> {
        for m in [&us, &vs, &ua, &va] {
            m.ensure_dim(2)?;
            m.ensure_unitary(tol::BASIS_UNITARY)?;
        }
        Ok(Self { us, vs, ua, va, chi_arm })
    }

    pub fn us(&self) -> &ComplexMatrix {
        &self.us
    }
    pub fn vs(&self) -> &ComplexMatrix {
        &self.vs
    }
    pub fn ua(&self) -> &ComplexMatrix {
        &self.ua
    }
    pub fn va(&self) -> &ComplexMatrix {
        &self.va
    }
    pub fn chi_arm(&self) -> ChiArm {
        self.chi_arm
    }

    /// `⟨Ψ|U_s†V_s ⊗ U_a†V_a|Ψ⟩`.
    pub fn inner_product(&self, state: &TwoPhotonState) -> C64 {
        state.expectation(&(&self.us.adjoint() * &self.vs), &(&self.ua.adjoint() * &self.va))
    }
}

pub fn coincidence_intensity(state: &TwoPhotonState, config: &MeasurementConfig, chi: f64) -> f64 {
    let shifter = C64::from_polar(1.0, chi);
    let (long_phase, short_phase) = match config.chi_arm {
        ChiArm::Long => (shifter, C64::new(1.0, 0.0)),
        ChiArm::Short => (C64::new(1.0, 0.0), shifter),
    };
    let long = config.us.kron(&config.ua).apply(state.amplitudes());
    let short = config.vs.kron(&config.va).apply(state.amplitudes());
    long.iter()
        .zip(&short)
        .map(|(a, b)| (long_phase * a + short_phase * b).norm_sqr())
        .sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    /// `γ^(1)_{ρ1}`.
    Gamma1Rho1,
    /// `γ^(1)_{ρ2}`.
    Gamma1Rho2,
    /// `γ^(2)_{ρ1ρ2}`.
    Gamma2,
}

impl Target {
    pub const ALL: [Target; 3] = [Target::Gamma1Rho1, Target::Gamma1Rho2, Target::Gamma2];

    pub fn name(self) -> &'static str {
        match self {
            Target::Gamma1Rho1 => "gamma1_rho1",
            Target::Gamma1Rho2 => "gamma1_rho2",
            Target::Gamma2 => "gamma2",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|t| t.name() == name)
    }
}

/// Arm settings that put the trace of `target` into the fringe, for the
/// transporting rotation `U(β, θ)`.
pub fn recipe(target: Target, beta: f64, theta: f64) -> MeasurementConfig {
    let id = ComplexMatrix::identity(2);
    let u = rotation_unitary(beta, theta);
    let f = flip();
    let (us, vs, ua, va) = match target {
        Target::Gamma1Rho1 => (id.clone(), u, id.clone(), id),
        Target::Gamma1Rho2 => (f.clone(), &u * &f, id.clone(), id),
        Target::Gamma2 => (f.clone(), u, f, rotation_unitary(beta, -theta)),
    };
    MeasurementConfig::new(us, vs, ua, va, ChiArm::Long).expect("rotations are unitary")
}

/// Uniformly sampled fringe with its frequency-1 Fourier content.
#[derive(Clone, Debug, PartialEq)]
pub struct FringeScan {
    pub chis: Vec<f64>,
    pub intensities: Vec<f64>,
    /// Fringe amplitude over mean intensity.
    pub visibility: f64,
    /// `None` when the visibility is below the tolerance.
    pub extracted_arg: Option<f64>,
    /// `(1/M) Σ_m I(χ_m) e^{iχ_m}`, which equals the configured inner product
    /// for a noiseless long-arm fringe.
    pub extracted_inner: C64,
}

impl FringeScan {
    pub fn from_samples(chis: Vec<f64>, intensities: Vec<f64>, chi_arm: ChiArm, tol: f64) -> Self {
        let m = chis.len() as f64;
        let mean: f64 = intensities.iter().sum::<f64>() / m;
        let mut first: C64 = chis
            .iter()
            .zip(&intensities)
            .map(|(&chi, &i)| C64::from_polar(i, chi))
            .sum::<C64>()
            / m;
        if chi_arm == ChiArm::Short {
            first = first.conj();
        }
        // noiseless mean is 2, so the visibility equals |z|
        let visibility = if mean > 0.0 { 2.0 * first.norm() / mean } else { 0.0 };
        let extracted_arg = (visibility >= tol).then(|| principal_arg(first));
        Self {
            chis,
            intensities,
            visibility,
            extracted_arg,
            extracted_inner: first,
        }
    }
}

fn check_samples(samples: usize) -> Result<()> {
    if samples < 8 || !samples.is_power_of_two() {
        return Err(Error::InvalidSampleCount { got: samples });
    }
    Ok(())
}

fn sample_grid(samples: usize) -> Vec<f64> {
    (0..samples).map(|k| 2.0 * PI * k as f64 / samples as f64).collect()
}

/// Samples `I(χ)` at `samples` points on `[0, 2π)` and extracts the fringe.
pub fn run_fringe(state: &TwoPhotonState, config: &MeasurementConfig, samples: usize, tol: f64) -> Result<FringeScan> {
    check_samples(samples)?;
    let chis = sample_grid(samples);
    let intensities = chis.iter().map(|&chi| coincidence_intensity(state, config, chi)).collect();
    Ok(FringeScan::from_samples(chis, intensities, config.chi_arm, tol))
}

/// Poisson-counted fringe: each χ bin records counts with mean
/// `mean_pairs · I(χ)/2`.
#[derive(Clone, Debug, PartialEq)]
pub struct CountFringe {
    pub counts: Vec<u64>,
    pub mean_pairs: f64,
    /// Fringe extracted from the intensity estimates `2·counts/mean_pairs`.
    pub fringe: FringeScan,
}

pub fn run_fringe_counts<R: Rng + ?Sized>(
    state: &TwoPhotonState,
    config: &MeasurementConfig,
    samples: usize,
    mean_pairs: f64,
    tol: f64,
    rng: &mut R,
) -> Result<CountFringe> {
    check_samples(samples)?;
    if !(mean_pairs > 0.0 && mean_pairs.is_finite()) {
        return Err(Error::OutOfRange {
            name: "mean_pairs",
            value: mean_pairs,
            range: "(0, inf)",
        });
    }
    let chis = sample_grid(samples);
    let counts: Vec<u64> = chis
        .iter()
        .map(|&chi| {
            let expected = mean_pairs * coincidence_intensity(state, config, chi) / 2.0;
            if expected <= 0.0 {
                0
            } else {
                Poisson::new(expected).expect("positive mean").sample(rng) as u64
            }
        })
        .collect();
    let estimates = counts.iter().map(|&n| 2.0 * n as f64 / mean_pairs).collect();
    Ok(CountFringe {
        fringe: FringeScan::from_samples(chis, estimates, config.chi_arm, tol),
        counts,
        mean_pairs,
    })
}

/// `Tr_s[√ρ_1 U √ρ_2 U] = √(1−r²) cos²β − sin²β`.
pub fn gamma2_closed_form(r: f64, beta: f64) -> f64 {
    (1.0 - r * r).max(0.0).sqrt() * beta.cos().powi(2) - beta.sin().powi(2)
}
