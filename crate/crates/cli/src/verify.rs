//! The invariant suite behind `mixphase verify`.

use std::f64::consts::PI;

use mixphase::families::{
    diagonal_trace, diagonal_unitary, f_coefficient, family_trace, geodesic_loop, parity_sign, permutation_unitary,
    qubit_traces, qubit_traces_direct, sequences, QubitGrid,
};
use mixphase::phases::{gamma_mixed, gamma_pure};
use mixphase::random::{
    random_density, random_density_with_spectrum, random_phase, random_phases_with_product, random_spectrum,
    random_spectrum_of_rank, random_unitary,
};
use mixphase::states::{generate_family, interference_profile, make_density};
use mixphase::transport::{transport_defect, transport_path};
use mixphase::twophoton::{
    gamma2_closed_form, purify, recipe, rotation_generator, rotation_unitary, run_fringe, PolarizationEnsemble,
    Target,
};
use mixphase::{ComplexMatrix, DensityOperator, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Deserialize;

use crate::error::{CliError, CliResult};
use crate::output::{Cell, Report};
use crate::scenario::{default_tol, Common, Kind};

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct VerifyParams {
    /// Random instances per randomized check.
    pub cases: usize,
    /// Steps for the transport checks.
    pub steps: usize,
    pub seed: u64,
    /// Indeterminacy threshold.
    pub tol: f64,
}

impl Default for VerifyParams {
    fn default() -> Self {
        Self {
            cases: 200,
            steps: 4096,
            seed: 0,
            tol: default_tol(),
        }
    }
}

impl Common for VerifyParams {
    fn seed_mut(&mut self) -> &mut u64 {
        &mut self.seed
    }
    fn steps_mut(&mut self) -> Option<&mut usize> {
        Some(&mut self.steps)
    }
    fn tol_mut(&mut self) -> &mut f64 {
        &mut self.tol
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Bound {
    AtMost(f64),
    Below(f64),
    Above(f64),
    Within(f64, f64),
}

impl Bound {
    fn holds(self, x: f64) -> bool {
        match self {
            Bound::AtMost(t) => x <= t,
            Bound::Below(t) => x < t,
            Bound::Above(t) => x > t,
            Bound::Within(lo, hi) => (lo..=hi).contains(&x),
        }
    }

    fn relation(self) -> &'static str {
        match self {
            Bound::AtMost(_) => "<=",
            Bound::Below(_) => "<",
            Bound::Above(_) => ">",
            Bound::Within(..) => "in",
        }
    }

    fn tolerance(self) -> Cell {
        match self {
            Bound::AtMost(t) | Bound::Below(t) | Bound::Above(t) => Cell::Real(t),
            Bound::Within(lo, hi) => Cell::Text(format!("[{lo}, {hi}]")),
        }
    }
}

struct Outcome {
    name: &'static str,
    measured: f64,
    bound: Bound,
    cases: usize,
}

fn outcome(name: &'static str, measured: f64, bound: Bound, cases: usize) -> Outcome {
    Outcome {
        name,
        measured,
        bound,
        cases,
    }
}

type Group = fn(&VerifyParams, &mut ChaCha8Rng) -> CliResult<Vec<Outcome>>;

fn spectral_sum(basis: &ComplexMatrix, weights: &[f64]) -> ComplexMatrix {
    let d = ComplexMatrix::from_real_diagonal(weights).expect("nonempty");
    d.conjugated_by(basis)
}

fn normalization(p: &VerifyParams, rng: &mut ChaCha8Rng) -> CliResult<Vec<Outcome>> {
    let mut worst = 0.0f64;
    let per_n = p.cases.div_ceil(5).max(1);
    for n in 2..=6 {
        for _ in 0..per_n {
            let fam = generate_family(&random_density_with_spectrum(&random_spectrum(n, rng), rng))?;
            let all: Vec<&DensityOperator> = fam.members().iter().collect();
            let r = gamma_mixed(&fam.shift().adjoint(), &all, p.tol)?;
            worst = worst.max((r.raw_trace - 1.0).norm());
        }
    }
    Ok(vec![outcome("normalization", worst, Bound::AtMost(1e-10), 5 * per_n)])
}

fn qubit(p: &VerifyParams, _: &mut ChaCha8Rng) -> CliResult<Vec<Outcome>> {
    let grid = QubitGrid::default();
    let points: Vec<_> = grid.points().collect();
    let per_point: Vec<(f64, f64)> = points
        .par_iter()
        .enumerate()
        .map(|(k, &(eta, alpha, l1))| -> CliResult<(f64, f64)> {
            let closed = qubit_traces(eta, alpha, l1)?;
            let (d1, d2, d12) = qubit_traces_direct(eta, alpha, l1, 0.37 * k as f64)?;
            let dev = (closed.t1 - d1).norm().max((closed.t2 - d2).norm()).max((closed.t12 - d12).norm());
            Ok((dev, d1.norm().max(d2.norm()).max(d12.norm())))
        })
        .collect::<CliResult<_>>()?;
    let dev = per_point.iter().map(|x| x.0).fold(0.0, f64::max);
    let weakest = per_point.iter().map(|x| x.1).fold(f64::INFINITY, f64::min);

    let mut eta_zero = 0.0f64;
    for &alpha in &grid.alphas {
        for &l1 in &grid.lambdas {
            eta_zero = eta_zero.max((qubit_traces_direct(0.0, alpha, l1, 0.9)?.2 + 1.0).norm());
        }
    }
    let mut degenerate = 0.0f64;
    for &eta in &grid.etas {
        for alpha in [PI / 2.0, 1.5 * PI] {
            degenerate = degenerate.max((qubit_traces_direct(eta, alpha, 0.5, 0.2)?.2 + 1.0).norm());
        }
    }
    Ok(vec![
        outcome("qubit-closed-form", dev, Bound::AtMost(1e-11), points.len()),
        outcome("qubit-never-all-indeterminate", weakest, Bound::Above(p.tol), points.len()),
        outcome("qubit-eta-zero", eta_zero, Bound::AtMost(1e-12), grid.alphas.len() * grid.lambdas.len()),
        outcome("qubit-degenerate-node", degenerate, Bound::AtMost(1e-12), 2 * grid.etas.len()),
    ])
}

fn rank_vanishing(p: &VerifyParams, rng: &mut ChaCha8Rng) -> CliResult<Vec<Outcome>> {
    let n = 4;
    let mut worst = 0.0f64;
    let mut count = 0;
    let per_rank = p.cases.div_ceil(10).max(1);
    for rank in 1..=3 {
        for _ in 0..per_rank {
            let rho1 = random_density_with_spectrum(&random_spectrum_of_rank(n, rank, rng), rng);
            let fam = generate_family(&rho1)?;
            let phases = random_phases_with_product(n, C64::new(1.0, 0.0), rng);
            let ud = diagonal_unitary(&phases, Some(fam.basis()))?;
            for l in rank + 1..=n {
                for seq in sequences(n, l) {
                    let a = diagonal_trace(&ud.matrix, &fam, &seq)?.norm();
                    let b = family_trace(&ud.matrix, &fam, &seq)?.norm();
                    worst = worst.max(a).max(b);
                    count += 1;
                }
            }
        }
    }
    Ok(vec![outcome("rank-vanishing", worst, Bound::Below(1e-10), count)])
}

fn parity(p: &VerifyParams, rng: &mut ChaCha8Rng) -> CliResult<Vec<Outcome>> {
    let (mut imag, mut negative, mut identity, mut mismatches, mut short) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let (mut full_count, mut short_count) = (0, 0);
    let per_n = p.cases.div_ceil(50).max(1);
    for n in 2..=5 {
        for _ in 0..per_n {
            let fam = generate_family(&random_density_with_spectrum(&random_spectrum(n, rng), rng))?;
            let phases = random_phases_with_product(n, C64::new(parity_sign(n), 0.0), rng);
            let u = permutation_unitary(&phases, Some(fam.basis()))?.matrix;
            for seq in sequences(n, n) {
                let raw = family_trace(&u, &fam, &seq)?;
                let f = raw * parity_sign(n);
                imag = imag.max(f.im.abs());
                negative = negative.max(-f.re);
                if seq.iter().enumerate().all(|(k, &j)| k == j) {
                    identity = identity.max((f.re - 1.0).abs());
                }
                // f_coefficient must accept every sequence
                if f_coefficient(&fam, &u, &seq).is_err() {
                    mismatches += 1.0;
                }
                if f.re > p.tol && !(raw.re.signum() == parity_sign(n) && raw.im.abs() <= 1e-10) {
                    mismatches += 1.0;
                }
                full_count += 1;
            }
            for l in 1..n {
                for seq in sequences(n, l) {
                    short = short.max(family_trace(&u, &fam, &seq)?.norm());
                    short_count += 1;
                }
            }
        }
    }
    Ok(vec![
        outcome("parity-f-imaginary", imag, Bound::AtMost(1e-10), full_count),
        outcome("parity-f-negative", negative.max(0.0), Bound::AtMost(1e-10), full_count),
        outcome("parity-identity-sequence", identity, Bound::AtMost(1e-10), 4 * per_n),
        outcome("parity-sign-violations", mismatches, Bound::AtMost(0.0), full_count),
        outcome("parity-short-sequences", short, Bound::Below(1e-10), short_count),
    ])
}

fn two_photon(p: &VerifyParams, _: &mut ChaCha8Rng) -> CliResult<Vec<Outcome>> {
    let betas: Vec<f64> = (0..64).map(|k| 2.0 * PI * k as f64 / 64.0).collect();
    let (mut fringe, mut closed, mut theta_spread, mut sign_violations) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut count = 0;
    for r in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let ens = PolarizationEnsemble::new(r)?;
        let psi = purify(&ens);
        let (rho1, rho2) = (ens.rho1(), ens.rho2());
        for &beta in &betas {
            let mut first = None;
            for theta in [0.0, PI / 4.0, PI / 2.0] {
                let u = rotation_unitary(beta, theta);
                let direct = [
                    gamma_mixed(&u, &[&rho1], p.tol)?.raw_trace,
                    gamma_mixed(&u, &[&rho2], p.tol)?.raw_trace,
                    gamma_mixed(&u, &[&rho1, &rho2], p.tol)?.raw_trace,
                ];
                for (target, want) in Target::ALL.into_iter().zip(direct) {
                    let scan = run_fringe(&psi, &recipe(target, beta, theta), 64, p.tol)?;
                    fringe = fringe.max((scan.extracted_inner - want).norm());
                }
                closed = closed.max((direct[2] - gamma2_closed_form(r, beta)).norm());
                let g2 = *first.get_or_insert(direct[2]);
                theta_spread = theta_spread.max((direct[2] - g2).norm());
                let node = (beta / PI - 0.5).rem_euclid(1.0) < 1e-12;
                for t in &direct[..2] {
                    let sign_ok = if node { t.re.abs() <= 1e-10 } else { t.re.signum() == beta.cos().signum() };
                    if t.im.abs() > 1e-10 || !sign_ok {
                        sign_violations += 1.0;
                    }
                }
                count += 1;
            }
        }
    }
    Ok(vec![
        outcome("two-photon-fringe-vs-direct", fringe, Bound::AtMost(1e-9), 3 * count),
        outcome("two-photon-gamma2-closed-form", closed, Bound::AtMost(1e-9), count),
        outcome("two-photon-gamma2-theta-independence", theta_spread, Bound::AtMost(1e-10), count),
        outcome("two-photon-gamma1-sign-structure", sign_violations, Bound::AtMost(0.0), 2 * count),
    ])
}

fn transport(p: &VerifyParams, _: &mut ChaCha8Rng) -> CliResult<Vec<Outcome>> {
    let basis = ComplexMatrix::identity(2);
    let s_end = PI;
    let (mut defect, mut closed) = (0.0f64, 0.0f64);
    for theta in [0.0, PI / 4.0, PI / 2.0, 1.3] {
        let path = transport_path(|_| rotation_generator(theta), &basis, s_end, p.steps)?;
        defect = defect.max(transport_defect(&path, &basis)?);
        closed = closed.max(path.final_unitary().max_abs_diff(&rotation_unitary(s_end, theta)));
    }
    let drifting = |s: f64| rotation_generator(0.3 + 0.8 * s);
    let base = (p.steps / 4).max(1);
    let mut finals = Vec::new();
    for steps in [base, 2 * base, 4 * base, 8 * base] {
        let path = transport_path(drifting, &basis, s_end, steps)?;
        if steps == 4 * base {
            defect = defect.max(transport_defect(&path, &basis)?);
        }
        finals.push(path.final_unitary().clone());
    }
    let diffs: Vec<f64> = finals.windows(2).map(|w| w[0].max_abs_diff(&w[1])).collect();
    let ratio = diffs
        .windows(2)
        .map(|w| w[0] / w[1])
        .max_by(|a, b| (a - 4.0).abs().total_cmp(&(b - 4.0).abs()))
        .unwrap_or(f64::NAN);
    Ok(vec![
        outcome("transport-defect", defect, Bound::Below(1e-6), 5),
        outcome("transport-closed-form", closed, Bound::AtMost(1e-10), 4),
        outcome("transport-halving-ratio", ratio, Bound::Within(3.0, 5.0), 2),
    ])
}

fn dims(rng: &mut ChaCha8Rng, min_l: usize) -> (usize, usize) {
    let n = rng.random_range(min_l.max(1)..=6);
    (n, rng.random_range(min_l..=n))
}

fn properties(p: &VerifyParams, rng: &mut ChaCha8Rng) -> CliResult<Vec<Outcome>> {
    let (mut gauge, mut cyclic, mut covariance, mut pure, mut flat) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..p.cases {
        let (n, l) = dims(rng, 1);
        let u = random_unitary(n, rng);
        let rhos: Vec<DensityOperator> = (0..l).map(|_| random_density(n, rng)).collect();
        let refs: Vec<&DensityOperator> = rhos.iter().collect();
        let base = gamma_mixed(&u, &refs, p.tol)?.raw_trace;
        let rephased: Vec<ComplexMatrix> = rhos
            .iter()
            .map(|rho| {
                let v = rho.spectrum().eigenvectors();
                let w: Vec<f64> = rho.eigenvalues().iter().map(|x| x.max(0.0).powf(1.0 / l as f64)).collect();
                let cols: Vec<Vec<C64>> = (0..n)
                    .map(|k| {
                        let ph = random_phase(rng);
                        v.column(k).into_iter().map(|z| z * ph).collect()
                    })
                    .collect();
                spectral_sum(&ComplexMatrix::from_columns(&cols).expect("square"), &w)
            })
            .collect();
        let other = mixphase::phases::alternating_trace(&u, &rephased)?;
        gauge = gauge.max((other - base).norm());

        let mut rotated = refs.clone();
        rotated.rotate_left(rng.random_range(0..l));
        cyclic = cyclic.max((gamma_mixed(&u, &rotated, p.tol)?.raw_trace - base).norm());

        let phi = rng.random_range(-PI..PI);
        let moved = gamma_mixed(&u.scale(C64::from_polar(1.0, phi)), &refs, p.tol)?.raw_trace;
        covariance = covariance.max((moved - base * C64::from_polar(1.0, l as f64 * phi)).norm());
    }
    for _ in 0..p.cases {
        let (n, l) = dims(rng, 1);
        let u = random_unitary(n, rng);
        let b = random_unitary(n, rng);
        let states: Vec<Vec<C64>> = (0..l).map(|k| b.column(k)).collect();
        let projectors: Vec<ComplexMatrix> = states
            .iter()
            .map(|v| ComplexMatrix::outer(v, v))
            .collect::<mixphase::Result<_>>()?;
        let rhos: Vec<DensityOperator> = projectors.iter().map(|x| make_density(x.clone())).collect::<mixphase::Result<_>>()?;
        let refs: Vec<&DensityOperator> = rhos.iter().collect();
        let chain: C64 = (0..l)
            .map(|m| {
                let a = &states[(m + l - 1) % l];
                let ub = u.apply(&states[m]);
                a.iter().zip(&ub).map(|(x, y)| x.conj() * y).sum::<C64>()
            })
            .product();
        let mixed = gamma_mixed(&u, &refs, p.tol)?.raw_trace;
        let vector = gamma_pure(&u, &projectors, p.tol)?.raw_trace;
        pure = pure.max((mixed - chain).norm()).max((vector - chain).norm());
    }
    for _ in 0..p.cases {
        let n = rng.random_range(2..=6);
        let fam = generate_family(&random_density_with_spectrum(&random_spectrum(n, rng), rng))?;
        let a = rng.random_range(0..n);
        let b = (a + rng.random_range(1..n)) % n;
        let u = fam.connector(a, b);
        for k in 0..16 {
            let level = interference_profile(fam.member(a), &u, 2.0 * PI * k as f64 / 16.0)?;
            flat = flat.max((level - 2.0).abs());
        }
    }
    Ok(vec![
        outcome("gauge-invariance", gauge, Bound::AtMost(1e-10), p.cases),
        outcome("cyclic-invariance", cyclic, Bound::AtMost(1e-12), p.cases),
        outcome("u1-covariance", covariance, Bound::AtMost(1e-12), p.cases),
        outcome("pure-state-limit", pure, Bound::AtMost(1e-10), p.cases),
        outcome("orthogonal-fringe-flatness", flat, Bound::AtMost(1e-10), p.cases),
    ])
}

/// Signed solid angle of a geodesic polygon, fanned from the first vertex.
fn solid_angle(v: &[[f64; 3]]) -> f64 {
    let dot = |a: [f64; 3], b: [f64; 3]| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    let cross = |a: [f64; 3], b: [f64; 3]| [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]];
    (1..v.len() - 1)
        .map(|i| 2.0 * dot(v[0], cross(v[i], v[i + 1])).atan2(1.0 + dot(v[0], v[i]) + dot(v[i], v[i + 1]) + dot(v[i + 1], v[0])))
        .sum()
}

fn solid_angle_check(p: &VerifyParams, rng: &mut ChaCha8Rng) -> CliResult<Vec<Outcome>> {
    let mut worst = 0.0f64;
    let cases = p.cases.div_ceil(4).max(1);
    let steps = (p.steps / 64).max(8);
    for _ in 0..cases {
        let mut verts = vec![[0.0, 0.0, 1.0]];
        for _ in 0..rng.random_range(2..=4) {
            let (x, y) = (rng.random_range(-0.8..0.8), rng.random_range(-0.8..0.8));
            let len = (x * x + y * y + 1.0f64).sqrt();
            verts.push([x / len, y / len, 1.0 / len]);
        }
        let u = geodesic_loop(&verts, steps)?;
        let want = -solid_angle(&verts) / 2.0;
        let d = (u[(0, 0)].arg() - want).rem_euclid(2.0 * PI);
        worst = worst.max(d.min(2.0 * PI - d)).max(u.max_off_diagonal());
    }
    Ok(vec![outcome("geodesic-loop-solid-angle", worst, Bound::AtMost(1e-9), cases)])
}

pub fn run(p: &VerifyParams) -> CliResult<Report> {
    if p.cases == 0 {
        return Err(CliError::config("parameters.cases", "must be at least 1"));
    }
    let groups: [Group; 8] = [
        normalization,
        qubit,
        rank_vanishing,
        parity,
        two_photon,
        transport,
        properties,
        solid_angle_check,
    ];
    let results: Vec<Vec<Outcome>> = groups
        .par_iter()
        .enumerate()
        .map(|(k, group)| {
            let mut rng = ChaCha8Rng::seed_from_u64(p.seed.wrapping_add(k as u64));
            group(p, &mut rng)
        })
        .collect::<CliResult<_>>()?;

    let mut report = Report::new(Kind::Verify, vec!["check", "measured", "relation", "tolerance", "cases", "status"]);
    report.meta("seed", p.seed);
    report.meta("cases", p.cases);
    report.meta("steps", p.steps);
    report.meta("tol", p.tol);
    let mut failed = 0usize;
    for o in results.into_iter().flatten() {
        let ok = o.bound.holds(o.measured);
        if !ok {
            failed += 1;
        }
        report.push(vec![
            o.name.into(),
            o.measured.into(),
            o.bound.relation().into(),
            o.bound.tolerance(),
            o.cases.into(),
            if ok { "pass" } else { "fail" }.into(),
        ]);
    }
    report.meta("failed", failed);
    report.passed = failed == 0;
    Ok(report)
}
