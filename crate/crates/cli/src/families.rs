use mixphase::families::{diagonal_trace, diagonal_unitary, f_coefficient, parity_sign, permutation_unitary, sequences};
use mixphase::phases::{alternating_trace, phi};
use mixphase::random::{random_density, random_spectrum, random_spectrum_of_rank, random_unitary};
use mixphase::states::{diagonal_density, generate_family, make_density, OrthogonalFamily};
use mixphase::transport::transport_path;
use mixphase::{ComplexMatrix, C64};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Deserialize;

use crate::error::{CliError, CliResult};
use crate::output::{real, Cell, Report};
use crate::scenario::{default_tol, Common, Kind};

const MAX_DIM: usize = 8;
/// Bound on |Im f|, on −f, and on traces that must vanish.
const PARITY_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BasisChoice {
    Standard,
    Random,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnitaryChoice {
    Permuting,
    Diagonal,
    /// Parallel transport of the family basis under a random constant
    /// generator for unit time.
    Transported,
}

impl UnitaryChoice {
    fn name(self) -> &'static str {
        match self {
            UnitaryChoice::Permuting => "permuting",
            UnitaryChoice::Diagonal => "diagonal",
            UnitaryChoice::Transported => "transported",
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FamiliesParams {
    pub n: usize,
    /// Eigenvalues of ρ_1; drawn at random when absent.
    pub spectrum: Option<Vec<f64>>,
    /// Rank of the random spectrum; full rank when absent.
    pub rank: Option<usize>,
    pub basis: BasisChoice,
    pub unitary: UnitaryChoice,
    /// Arguments (radians) of the diagonal entries or of the cyclic
    /// coefficients; random with the special-unitary product when absent.
    pub phases: Option<Vec<f64>>,
    /// Sequence lengths to tabulate; defaults to `1..=n`.
    pub lengths: Option<Vec<usize>>,
    pub seed: u64,
    pub steps: usize,
    pub tol: f64,
}

impl Default for FamiliesParams {
    fn default() -> Self {
        Self {
            n: 4,
            spectrum: None,
            rank: None,
            basis: BasisChoice::Random,
            unitary: UnitaryChoice::Permuting,
            phases: None,
            lengths: None,
            seed: 0,
            steps: mixphase::linalg::DEFAULT_STEPS,
            tol: default_tol(),
        }
    }
}

impl Common for FamiliesParams {
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

fn validate(p: &FamiliesParams) -> CliResult<Vec<usize>> {
    if !(2..=MAX_DIM).contains(&p.n) {
        return Err(CliError::config("parameters.n", format!("must be in 2..={MAX_DIM}, got {}", p.n)));
    }
    if let Some(s) = &p.spectrum {
        if s.len() != p.n {
            return Err(CliError::config("parameters.spectrum", format!("needs {} values, got {}", p.n, s.len())));
        }
        if s.iter().any(|x| !(x.is_finite() && *x >= 0.0)) {
            return Err(CliError::config("parameters.spectrum", "values must be nonnegative"));
        }
        let sum: f64 = s.iter().sum();
        if (sum - 1.0).abs() > 1e-10 {
            return Err(CliError::config("parameters.spectrum", format!("must sum to 1, sums to {sum}")));
        }
        if p.rank.is_some() {
            return Err(CliError::config("parameters.rank", "cannot be combined with an explicit spectrum"));
        }
    }
    if let Some(r) = p.rank {
        if !(1..=p.n).contains(&r) {
            return Err(CliError::config("parameters.rank", format!("must be in 1..={}", p.n)));
        }
    }
    if let Some(ph) = &p.phases {
        if p.unitary == UnitaryChoice::Transported {
            return Err(CliError::config("parameters.phases", "not used by a transported unitary"));
        }
        if ph.len() != p.n || ph.iter().any(|x| !x.is_finite()) {
            return Err(CliError::config("parameters.phases", format!("needs {} finite angles", p.n)));
        }
    }
    let lengths = p.lengths.clone().unwrap_or_else(|| (1..=p.n).collect());
    if lengths.is_empty() {
        return Err(CliError::config("parameters.lengths", "no lengths"));
    }
    if let Some(&bad) = lengths.iter().find(|&&l| !(1..=p.n).contains(&l)) {
        return Err(CliError::config("parameters.lengths", format!("{bad} outside 1..={}", p.n)));
    }
    Ok(lengths)
}

fn build_family(p: &FamiliesParams, rng: &mut ChaCha8Rng) -> CliResult<OrthogonalFamily> {
    let spectrum = match (&p.spectrum, p.rank) {
        (Some(s), _) => s.clone(),
        (None, Some(r)) => random_spectrum_of_rank(p.n, r, rng),
        (None, None) => random_spectrum(p.n, rng),
    };
    let rho1 = match p.basis {
        BasisChoice::Standard => diagonal_density(&spectrum)?,
        BasisChoice::Random => {
            let u = random_unitary(p.n, rng);
            let m = ComplexMatrix::from_real_diagonal(&spectrum)?.conjugated_by(&u);
            make_density((&m + &m.adjoint()).scale(C64::new(0.5, 0.0)))?
        }
    };
    Ok(generate_family(&rho1)?)
}

fn phases_from(angles: &[f64]) -> Vec<C64> {
    angles.iter().map(|&a| C64::from_polar(1.0, a)).collect()
}

/// Random phases with product `target` as angles, so the table stays
/// reproducible from the seed alone.
fn random_angles(n: usize, target: f64, rng: &mut ChaCha8Rng) -> Vec<f64> {
    mixphase::random::random_phases_with_product(n, C64::new(target, 0.0), rng)
        .into_iter()
        .map(|z| z.arg())
        .collect()
}

struct Built {
    matrix: ComplexMatrix,
    special: bool,
}

fn build_unitary(p: &FamiliesParams, fam: &OrthogonalFamily, rng: &mut ChaCha8Rng) -> CliResult<Built> {
    let basis = Some(fam.basis());
    Ok(match p.unitary {
        UnitaryChoice::Permuting => {
            let angles = p.phases.clone().unwrap_or_else(|| random_angles(p.n, parity_sign(p.n), rng));
            let u = permutation_unitary(&phases_from(&angles), basis)?;
            Built {
                matrix: u.matrix,
                special: u.special,
            }
        }
        UnitaryChoice::Diagonal => {
            let angles = p.phases.clone().unwrap_or_else(|| random_angles(p.n, 1.0, rng));
            let u = diagonal_unitary(&phases_from(&angles), basis)?;
            Built {
                matrix: u.matrix,
                special: u.special,
            }
        }
        UnitaryChoice::Transported => {
            let g = random_density(p.n, rng).matrix().clone();
            let path = transport_path(|_| g.clone(), fam.basis(), 1.0, p.steps)?;
            Built {
                matrix: path.final_unitary().clone(),
                special: true,
            }
        }
    })
}

fn label(seq: &[usize]) -> String {
    seq.iter().map(|j| (j + 1).to_string()).collect::<Vec<_>>().join(" ")
}

fn join_reals(xs: &[f64]) -> String {
    xs.iter().map(|&x| real(x)).collect::<Vec<_>>().join(" ")
}

struct Row {
    seq: Vec<usize>,
    trace: C64,
    f: Option<std::result::Result<f64, String>>,
    closed_dev: Option<f64>,
}

pub fn run(p: &FamiliesParams) -> CliResult<Report> {
    let lengths = validate(p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let fam = build_family(p, &mut rng)?;
    let built = build_unitary(p, &fam, &mut rng)?;
    let u = &built.matrix;
    let n = p.n;

    let mut rows = Vec::new();
    for &l in &lengths {
        let roots: Vec<ComplexMatrix> = fam.members().iter().map(|m| m.root(l)).collect();
        let block: Vec<Row> = sequences(n, l)
            .into_par_iter()
            .map(|seq| -> CliResult<Row> {
                let ops: Vec<ComplexMatrix> = seq.iter().map(|&j| roots[j].clone()).collect();
                let trace = alternating_trace(u, &ops)?;
                let f = (l == n && p.unitary == UnitaryChoice::Permuting && built.special)
                    .then(|| f_coefficient(&fam, u, &seq).map(|c| c.value).map_err(|e| e.to_string()));
                let closed_dev = if p.unitary == UnitaryChoice::Diagonal {
                    Some((diagonal_trace(u, &fam, &seq)? - trace).norm())
                } else {
                    None
                };
                Ok(Row {
                    seq,
                    trace,
                    f,
                    closed_dev,
                })
            })
            .collect::<CliResult<_>>()?;
        rows.extend(block);
    }

    let mut report = Report::new(
        Kind::Families,
        vec!["l", "sequence", "trace_re", "trace_im", "modulus", "status", "arg", "f"],
    );
    report.meta("seed", p.seed);
    report.meta("n", n);
    report.meta("unitary", p.unitary.name());
    report.meta("special", built.special.to_string());
    report.meta("eigenvalues", join_reals(fam.eigenvalues()));
    report.meta("rank", fam.rank());
    report.meta("tol", p.tol);
    if p.unitary == UnitaryChoice::Transported {
        report.meta("steps", p.steps);
    }

    let all: Vec<&mixphase::DensityOperator> = fam.members().iter().collect();
    let norm = mixphase::phases::gamma_mixed(&fam.shift().adjoint(), &all, p.tol)?.raw_trace;
    report.meta("normalization_re", norm.re);
    report.meta("normalization_im", norm.im);

    let mut passed = true;
    for row in &rows {
        let result = phi(row.trace, p.tol);
        let f_cell = match &row.f {
            Some(Ok(v)) => Cell::Real(*v),
            Some(Err(_)) => {
                passed = false;
                Cell::Text("invalid".into())
            }
            None => Cell::Missing,
        };
        report.push(vec![
            row.seq.len().into(),
            label(&row.seq).into(),
            row.trace.re.into(),
            row.trace.im.into(),
            row.trace.norm().into(),
            result.status_label().into(),
            result.argument().into(),
            f_cell,
        ]);
    }

    let below_rank = fam.rank();
    let vanishing: Option<f64> = match p.unitary {
        UnitaryChoice::Permuting => rows.iter().filter(|r| r.seq.len() < n).map(|r| r.trace.norm()).reduce(f64::max),
        UnitaryChoice::Diagonal => rows
            .iter()
            .filter(|r| r.seq.len() > below_rank)
            .map(|r| r.trace.norm())
            .reduce(f64::max),
        UnitaryChoice::Transported => None,
    };
    if let Some(v) = vanishing {
        report.meta("vanishing_max_modulus", v);
        if built.special {
            passed &= v < PARITY_TOL;
        }
    }
    if let Some(dev) = rows.iter().filter_map(|r| r.closed_dev).reduce(f64::max) {
        report.meta("closed_form_max_deviation", dev);
        passed &= dev <= PARITY_TOL;
    }

    if p.unitary == UnitaryChoice::Permuting && built.special && lengths.contains(&n) {
        let expected = parity_sign(n);
        let signs: Vec<f64> = rows
            .iter()
            .filter(|r| r.seq.len() == n && matches!(r.f, Some(Ok(v)) if v > p.tol))
            .map(|r| r.trace.re.signum())
            .collect();
        let verdict = match signs.first() {
            None => Cell::Text("none".into()),
            Some(&s) if signs.iter().all(|&x| x == s) => Cell::Int(s as i64),
            Some(_) => Cell::Text("mixed".into()),
        };
        report.meta("parity_expected", Cell::Int(expected as i64));
        passed &= verdict == Cell::Int(expected as i64) || verdict == Cell::Text("none".into());
        report.meta("parity_verdict", verdict);
    }
    report.passed = passed;
    Ok(report)
}
