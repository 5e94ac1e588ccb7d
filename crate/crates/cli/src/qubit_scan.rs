use mixphase::families::{qubit_traces, qubit_traces_direct, QubitGrid};
use rayon::prelude::*;
use serde::Deserialize;

use crate::error::CliResult;
use crate::output::Report;
use crate::scenario::{default_tol, Axis, Common, Kind, TWO_PI};

/// Agreement required between the closed forms and explicit matrices.
const CROSS_CHECK_TOL: f64 = 1e-11;

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QubitScanParams {
    pub eta: Axis,
    pub alpha: Axis,
    pub lambda1: Axis,
    pub tol: f64,
    /// Also evaluate every point with explicit 2×2 matrices and fail the run
    /// if the two disagree.
    pub cross_check: bool,
    /// Unused by the scan itself; recorded so every output names its seed.
    pub seed: u64,
}

impl Default for QubitScanParams {
    fn default() -> Self {
        let g = QubitGrid::default();
        Self {
            eta: Axis::range(0.0, 1.0, g.etas.len(), true),
            alpha: Axis::range(0.0, TWO_PI, g.alphas.len(), true),
            lambda1: Axis::List(g.lambdas),
            tol: default_tol(),
            cross_check: false,
            seed: 0,
        }
    }
}

impl Common for QubitScanParams {
    fn seed_mut(&mut self) -> &mut u64 {
        &mut self.seed
    }
    fn tol_mut(&mut self) -> &mut f64 {
        &mut self.tol
    }
}

pub fn run(p: &QubitScanParams) -> CliResult<Report> {
    let grid = QubitGrid {
        etas: p.eta.values_in("parameters.eta", 0.0, 1.0)?,
        alphas: p.alpha.values("parameters.alpha")?,
        lambdas: p.lambda1.values_in("parameters.lambda1", 0.0, 1.0)?,
    };
    let points: Vec<(f64, f64, f64)> = grid.points().collect();
    let evaluated: Vec<_> = points
        .par_iter()
        .map(|&(eta, alpha, l1)| -> CliResult<_> {
            let point = qubit_traces(eta, alpha, l1)?;
            let deviation = if p.cross_check {
                let (d1, d2, d12) = qubit_traces_direct(eta, alpha, l1, 0.0)?;
                Some(
                    (point.t1 - d1)
                        .norm()
                        .max((point.t2 - d2).norm())
                        .max((point.t12 - d12).norm()),
                )
            } else {
                None
            };
            Ok((point, deviation))
        })
        .collect::<CliResult<_>>()?;

    let mut report = Report::new(
        Kind::QubitScan,
        vec![
            "eta", "alpha", "lambda1", "t1_re", "t1_im", "t2_re", "t2_im", "t12_re", "t12_im", "t1_status",
            "t2_status", "t12_status",
        ],
    );
    let mut all_vanish = 0usize;
    let mut worst = 0.0f64;
    for (point, deviation) in &evaluated {
        let [s1, s2, s12] = point.phases(p.tol);
        if !point.has_determinate_phase(p.tol) {
            all_vanish += 1;
        }
        if let Some(d) = deviation {
            worst = worst.max(*d);
        }
        report.push(vec![
            point.eta.into(),
            point.alpha.into(),
            point.lambda1.into(),
            point.t1.re.into(),
            point.t1.im.into(),
            point.t2.re.into(),
            point.t2.im.into(),
            point.t12.re.into(),
            point.t12.im.into(),
            s1.status_label().into(),
            s2.status_label().into(),
            s12.status_label().into(),
        ]);
    }
    report.meta("seed", p.seed);
    report.meta("points", points.len());
    report.meta("tol", p.tol);
    report.meta("points_all_indeterminate", all_vanish);
    if p.cross_check {
        report.meta("cross_check_max_deviation", worst);
        report.meta("cross_check_tol", CROSS_CHECK_TOL);
        report.passed = worst <= CROSS_CHECK_TOL;
    }
    Ok(report)
}
