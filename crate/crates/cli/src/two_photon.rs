use mixphase::twophoton::{purify, recipe, run_fringe, run_fringe_counts, FringeScan, PolarizationEnsemble, Target};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use crate::error::{CliError, CliResult};
use crate::output::Report;
use crate::scenario::{default_tol, Axis, Common, Kind, TWO_PI};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// One row per (r, β, θ) with the extracted inner product.
    Scan,
    /// One row per χ sample.
    Fringe,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Noise {
    /// Mean number of detected pairs per χ bin at unit intensity scale.
    pub mean_pairs: f64,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TwoPhotonParams {
    pub r: Axis,
    pub beta: Axis,
    pub theta: Axis,
    pub target: String,
    pub mode: Mode,
    /// χ samples per fringe; a power of two, at least 8.
    pub samples: usize,
    pub noise: Option<Noise>,
    pub seed: u64,
    pub tol: f64,
}

impl Default for TwoPhotonParams {
    fn default() -> Self {
        Self {
            r: Axis::List(vec![0.0, 0.25, 0.5, 0.75, 1.0]),
            beta: Axis::range(0.0, TWO_PI, 64, false),
            theta: Axis::List(vec![0.0]),
            target: Target::Gamma2.name().to_owned(),
            mode: Mode::Scan,
            samples: 64,
            noise: None,
            seed: 0,
            tol: default_tol(),
        }
    }
}

impl Common for TwoPhotonParams {
    fn seed_mut(&mut self) -> &mut u64 {
        &mut self.seed
    }
    fn tol_mut(&mut self) -> &mut f64 {
        &mut self.tol
    }
}

pub fn run(p: &TwoPhotonParams) -> CliResult<Report> {
    let rs = p.r.values_in("parameters.r", 0.0, 1.0)?;
    let betas = p.beta.values("parameters.beta")?;
    let thetas = p.theta.values("parameters.theta")?;
    let target = Target::parse(&p.target).ok_or_else(|| {
        CliError::config("parameters.target", format!("expected gamma1_rho1, gamma1_rho2 or gamma2, got {}", p.target))
    })?;
    if p.samples < 8 || !p.samples.is_power_of_two() {
        return Err(CliError::config("parameters.samples", "must be a power of two, at least 8"));
    }
    if let Some(noise) = &p.noise {
        if !(noise.mean_pairs.is_finite() && noise.mean_pairs > 0.0) {
            return Err(CliError::config("parameters.noise.mean_pairs", "must be positive"));
        }
    }

    let columns = match p.mode {
        Mode::Scan => vec!["r", "beta", "theta", "inner_re", "inner_im", "extracted_arg", "status"],
        Mode::Fringe => vec!["r", "beta", "theta", "chi", "intensity"],
    };
    let mut report = Report::new(Kind::TwoPhoton, columns);
    report.meta("seed", p.seed);
    report.meta("target", target.name());
    report.meta("samples", p.samples);
    report.meta("tol", p.tol);
    report.meta("mode", if p.mode == Mode::Scan { "scan" } else { "fringe" });
    if let Some(noise) = &p.noise {
        report.meta("mean_pairs", noise.mean_pairs);
    }

    // one generator, consumed in row order, keeps noisy runs reproducible
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let mut indeterminate = 0usize;
    for &r in &rs {
        let psi = purify(&PolarizationEnsemble::new(r)?);
        for &beta in &betas {
            for &theta in &thetas {
                let config = recipe(target, beta, theta);
                let (scan, counts): (FringeScan, Option<Vec<u64>>) = match &p.noise {
                    None => (run_fringe(&psi, &config, p.samples, p.tol)?, None),
                    Some(noise) => {
                        let c = run_fringe_counts(&psi, &config, p.samples, noise.mean_pairs, p.tol, &mut rng)?;
                        (c.fringe, Some(c.counts))
                    }
                };
                match p.mode {
                    Mode::Scan => {
                        if scan.extracted_arg.is_none() {
                            indeterminate += 1;
                        }
                        let status = if scan.extracted_arg.is_some() { "determinate" } else { "indeterminate" };
                        report.push(vec![
                            r.into(),
                            beta.into(),
                            theta.into(),
                            scan.extracted_inner.re.into(),
                            scan.extracted_inner.im.into(),
                            scan.extracted_arg.into(),
                            status.into(),
                        ]);
                    }
                    Mode::Fringe => {
                        for (k, (&chi, &intensity)) in scan.chis.iter().zip(&scan.intensities).enumerate() {
                            let value = match &counts {
                                Some(c) => c[k] as f64,
                                None => intensity,
                            };
                            report.push(vec![r.into(), beta.into(), theta.into(), chi.into(), value.into()]);
                        }
                    }
                }
            }
        }
    }
    if p.mode == Mode::Scan {
        report.meta("indeterminate_rows", indeterminate);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::output::Cell;
    use std::f64::consts::PI;

    #[test]
    fn unpolarized_quarter_turn_is_indeterminate() {
        let p = TwoPhotonParams {
            r: Axis::List(vec![0.0]),
            beta: Axis::List(vec![PI / 4.0]),
            ..Default::default()
        };
        let report = run(&p).unwrap();
        assert_eq!(report.rows.len(), 1);
        assert_eq!(report.rows[0][6], Cell::Text("indeterminate".into()));
        assert_eq!(report.rows[0][5], Cell::Missing);
    }

    #[test]
    fn default_scan_shape() {
        let report = run(&TwoPhotonParams::default()).unwrap();
        assert_eq!(report.rows.len(), 5 * 64);
    }

    #[test]
    fn fringe_mode_rows() {
        let p = TwoPhotonParams {
            r: Axis::List(vec![0.5]),
            beta: Axis::List(vec![0.3]),
            mode: Mode::Fringe,
            samples: 16,
            ..Default::default()
        };
        assert_eq!(run(&p).unwrap().rows.len(), 16);
    }

    #[test]
    fn noisy_runs_repeat() {
        let p = TwoPhotonParams {
            r: Axis::List(vec![0.5]),
            beta: Axis::List(vec![0.3, 0.6]),
            noise: Some(Noise { mean_pairs: 1000.0 }),
            seed: 9,
            ..Default::default()
        };
        assert_eq!(run(&p).unwrap().rows, run(&p).unwrap().rows);
    }

    #[test]
    fn rejects_bad_parameters() {
        let p = TwoPhotonParams {
            target: "gamma3".into(),
            ..Default::default()
        };
        assert!(matches!(run(&p), Err(CliError::Config { ref field, .. }) if field == "parameters.target"));
        let p = TwoPhotonParams {
            samples: 12,
            ..Default::default()
        };
        assert!(matches!(run(&p), Err(CliError::Config { ref field, .. }) if field == "parameters.samples"));
    }
}
