//! Python bindings. Matrices cross the boundary as nested lists of complex
//! numbers, row-major; indices are 0-based as in the Rust API.

use std::cell::RefCell;

use mixphase::families as fam;
use mixphase::phases;
use mixphase::states;
use mixphase::transport;
use mixphase::twophoton as tp;
use mixphase::{ComplexMatrix, C64};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

const DEFAULT_TOL: f64 = 1e-9;

fn err(e: mixphase::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_matrix(rows: Vec<Vec<C64>>) -> PyResult<ComplexMatrix> {
    ComplexMatrix::from_rows(&rows).map_err(err)
}

fn to_rows(m: &ComplexMatrix) -> Vec<Vec<C64>> {
    (0..m.dim()).map(|i| (0..m.dim()).map(|j| m[(i, j)]).collect()).collect()
}

#[pyclass(name = "DensityOperator", module = "mixphase", frozen, from_py_object)]
#[derive(Clone)]
struct PyDensity(mixphase::DensityOperator);

#[pymethods]
impl PyDensity {
    /// Validates Hermiticity, positivity and unit trace.
    #[new]
    fn new(matrix: Vec<Vec<C64>>) -> PyResult<Self> {
        states::make_density(to_matrix(matrix)?).map(Self).map_err(err)
    }

    #[staticmethod]
    fn diagonal(weights: Vec<f64>) -> PyResult<Self> {
        states::diagonal_density(&weights).map(Self).map_err(err)
    }

    /// Seeded `GG†/Tr(GG†)` with complex Gaussian `G`.
    #[staticmethod]
    fn random(n: usize, seed: u64) -> PyResult<Self> {
        if n == 0 {
            return Err(PyValueError::new_err("n must be positive"));
        }
        Ok(Self(mixphase::random::random_density(n, &mut ChaCha8Rng::seed_from_u64(seed))))
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    #[getter]
    fn rank(&self) -> usize {
        self.0.rank()
    }

    #[getter]
    fn is_pure(&self) -> bool {
        self.0.is_pure()
    }

    /// Ascending.
    fn eigenvalues(&self) -> Vec<f64> {
        self.0.eigenvalues().to_vec()
    }

    fn matrix(&self) -> Vec<Vec<C64>> {
        to_rows(self.0.matrix())
    }

    /// `ρ^{1/l}`.
    fn root(&self, l: usize) -> PyResult<Vec<Vec<C64>>> {
        if l == 0 {
            return Err(PyValueError::new_err("l must be positive"));
        }
        Ok(to_rows(&self.0.root(l)))
    }

    fn __repr__(&self) -> String {
        format!("DensityOperator(dim={}, rank={})", self.0.dim(), self.0.rank())
    }
}

#[pyclass(name = "PhaseResult", module = "mixphase", frozen)]
struct PyPhase(phases::PhaseResult);

#[pymethods]
impl PyPhase {
    #[getter]
    fn raw_trace(&self) -> C64 {
        self.0.raw_trace
    }

    #[getter]
    fn is_determinate(&self) -> bool {
        self.0.is_determinate()
    }

    /// `None` when indeterminate.
    #[getter]
    fn phase_factor(&self) -> Option<C64> {
        self.0.phase_factor()
    }

    /// In `(−π, π]`; `None` when indeterminate.
    #[getter]
    fn argument(&self) -> Option<f64> {
        self.0.argument()
    }

    #[getter]
    fn status(&self) -> &'static str {
        self.0.status_label()
    }

    #[getter]
    fn tolerance(&self) -> f64 {
        self.0.tolerance_used
    }

    fn __repr__(&self) -> String {
        let t = self.0.raw_trace;
        format!("PhaseResult(raw_trace=({}{:+}j), status={})", t.re, t.im, self.0.status_label())
    }
}

#[pyclass(name = "OrthogonalFamily", module = "mixphase", frozen)]
struct PyFamily(states::OrthogonalFamily);

#[pymethods]
impl PyFamily {
    /// The N mutually orthogonal states generated from `rho1` by the cyclic
    /// shift of its eigenbasis.
    #[new]
    fn new(rho1: PyDensity) -> PyResult<Self> {
        states::generate_family(&rho1.0).map(Self).map_err(err)
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn members(&self) -> Vec<PyDensity> {
        self.0.members().iter().cloned().map(PyDensity).collect()
    }

    fn member(&self, n: usize) -> PyResult<PyDensity> {
        if n >= self.0.dim() {
            return Err(PyValueError::new_err(format!("member {n} out of range")));
        }
        Ok(PyDensity(self.0.member(n).clone()))
    }

    /// Eigenbasis columns, descending eigenvalue order.
    fn basis(&self) -> Vec<Vec<C64>> {
        to_rows(self.0.basis())
    }

    fn shift(&self) -> Vec<Vec<C64>> {
        to_rows(self.0.shift())
    }

    /// Descending.
    fn eigenvalues(&self) -> Vec<f64> {
        self.0.eigenvalues().to_vec()
    }

    /// Unitary carrying member `a` onto member `b`.
    fn connector(&self, a: usize, b: usize) -> Vec<Vec<C64>> {
        to_rows(&self.0.connector(a, b))
    }

    fn is_pairwise_orthogonal(&self) -> PyResult<bool> {
        self.0.is_pairwise_orthogonal().map_err(err)
    }

    /// `Tr(U ρ_{j1}^{1/l} … U ρ_{jl}^{1/l})` for distinct member indices.
    fn trace(&self, u: Vec<Vec<C64>>, sequence: Vec<usize>) -> PyResult<C64> {
        fam::family_trace(&to_matrix(u)?, &self.0, &sequence).map_err(err)
    }

    /// Closed form of `trace` for `u` diagonal in the family basis.
    fn diagonal_trace(&self, u: Vec<Vec<C64>>, sequence: Vec<usize>) -> PyResult<C64> {
        fam::diagonal_trace(&to_matrix(u)?, &self.0, &sequence).map_err(err)
    }

    /// `f^(N)` for a full-length sequence and a special permuting `u`.
    fn f_coefficient(&self, u: Vec<Vec<C64>>, sequence: Vec<usize>) -> PyResult<f64> {
        fam::f_coefficient(&self.0, &to_matrix(u)?, &sequence)
            .map(|c| c.value)
            .map_err(err)
    }
}

#[pyfunction]
#[pyo3(signature = (u, projectors, tol = DEFAULT_TOL))]
fn gamma_pure(u: Vec<Vec<C64>>, projectors: Vec<Vec<Vec<C64>>>, tol: f64) -> PyResult<PyPhase> {
    let ps: Vec<ComplexMatrix> = projectors.into_iter().map(to_matrix).collect::<PyResult<_>>()?;
    phases::gamma_pure(&to_matrix(u)?, &ps, tol).map(PyPhase).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (u, rhos, tol = DEFAULT_TOL))]
fn gamma_mixed(u: Vec<Vec<C64>>, rhos: Vec<PyDensity>, tol: f64) -> PyResult<PyPhase> {
    let refs: Vec<&mixphase::DensityOperator> = rhos.iter().map(|r| &r.0).collect();
    phases::gamma_mixed(&to_matrix(u)?, &refs, tol).map(PyPhase).map_err(err)
}

/// `(t1, t2, t12)` for `U_11 = η e^{iα}` and spectrum `(λ_1, 1 − λ_1)`.
#[pyfunction]
fn qubit_traces(eta: f64, alpha: f64, lambda1: f64) -> PyResult<(C64, C64, C64)> {
    let p = fam::qubit_traces(eta, alpha, lambda1).map_err(err)?;
    Ok((p.t1, p.t2, p.t12))
}

/// Returns `(matrix, special)`; `phases[k]` multiplies `|A_k⟩⟨A_{k+1}|`.
#[pyfunction]
#[pyo3(signature = (phases, basis = None))]
fn permutation_unitary(phases: Vec<C64>, basis: Option<Vec<Vec<C64>>>) -> PyResult<(Vec<Vec<C64>>, bool)> {
    let b = basis.map(to_matrix).transpose()?;
    let u = fam::permutation_unitary(&phases, b.as_ref()).map_err(err)?;
    Ok((to_rows(&u.matrix), u.special))
}

#[pyfunction]
#[pyo3(signature = (phases, basis = None))]
fn diagonal_unitary(phases: Vec<C64>, basis: Option<Vec<Vec<C64>>>) -> PyResult<(Vec<Vec<C64>>, bool)> {
    let b = basis.map(to_matrix).transpose()?;
    let u = fam::diagonal_unitary(&phases, b.as_ref()).map_err(err)?;
    Ok((to_rows(&u.matrix), u.special))
}

#[pyclass(name = "UnitaryPath", module = "mixphase", frozen)]
struct PyPath {
    path: transport::UnitaryPath,
    basis: ComplexMatrix,
}

#[pymethods]
impl PyPath {
    fn final_unitary(&self) -> Vec<Vec<C64>> {
        to_rows(self.path.final_unitary())
    }

    fn parameters(&self) -> Vec<f64> {
        self.path.samples().iter().map(|(s, _)| *s).collect()
    }

    fn __len__(&self) -> usize {
        self.path.len()
    }

    /// Largest local phase rate of the transported basis; zero for exact
    /// parallel transport.
    fn defect(&self) -> PyResult<f64> {
        transport::transport_defect(&self.path, &self.basis).map_err(err)
    }
}

/// Parallel-transports `basis` under `generator`, which is either a fixed
/// Hermitian matrix or a callable `s -> matrix`.
#[pyfunction]
#[pyo3(signature = (generator, basis, s_end, steps = mixphase::linalg::DEFAULT_STEPS))]
fn transport_path(generator: &Bound<'_, PyAny>, basis: Vec<Vec<C64>>, s_end: f64, steps: usize) -> PyResult<PyPath> {
    let basis = to_matrix(basis)?;
    let dim = basis.dim();
    let result = if generator.is_callable() {
        let failure: RefCell<Option<PyErr>> = RefCell::new(None);
        let call = |s: f64| -> ComplexMatrix {
            if failure.borrow().is_some() {
                return ComplexMatrix::zeros(dim);
            }
            let value = generator
                .call1((s,))
                .and_then(|v| v.extract::<Vec<Vec<C64>>>())
                .and_then(to_matrix);
            value.unwrap_or_else(|e| {
                *failure.borrow_mut() = Some(e);
                ComplexMatrix::zeros(dim)
            })
        };
        let out = transport::transport_path(call, &basis, s_end, steps);
        if let Some(e) = failure.into_inner() {
            return Err(e);
        }
        out
    } else {
        let j = to_matrix(generator.extract()?)?;
        transport::transport_path(|_| j.clone(), &basis, s_end, steps)
    };
    Ok(PyPath {
        path: result.map_err(err)?,
        basis,
    })
}

/// Net unitary of the geodesic loop through Bloch vectors starting at `+z`.
#[pyfunction]
#[pyo3(signature = (vertices, steps_per_edge = 64))]
fn geodesic_loop(vertices: Vec<[f64; 3]>, steps_per_edge: usize) -> PyResult<Vec<Vec<C64>>> {
    fam::geodesic_loop(&vertices, steps_per_edge).map(|u| to_rows(&u)).map_err(err)
}

#[pyfunction]
fn rotation_unitary(beta: f64, theta: f64) -> Vec<Vec<C64>> {
    to_rows(&tp::rotation_unitary(beta, theta))
}

#[pyfunction]
fn gamma2_closed_form(r: f64, beta: f64) -> f64 {
    tp::gamma2_closed_form(r, beta)
}

/// `[hh, hv, vh, vv]` amplitudes purifying the polarization ensemble `r`.
#[pyfunction]
fn purify(r: f64) -> PyResult<[C64; 4]> {
    let e = tp::PolarizationEnsemble::new(r).map_err(err)?;
    Ok(*tp::purify(&e).amplitudes())
}

/// Noiseless fringe for `target` ("gamma1_rho1", "gamma1_rho2" or "gamma2").
#[pyfunction]
#[pyo3(signature = (r, target, beta, theta = 0.0, samples = 64, tol = DEFAULT_TOL))]
fn fringe<'py>(
    py: Python<'py>,
    r: f64,
    target: &str,
    beta: f64,
    theta: f64,
    samples: usize,
    tol: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let t = tp::Target::parse(target).ok_or_else(|| PyValueError::new_err(format!("unknown target {target:?}")))?;
    let psi = tp::purify(&tp::PolarizationEnsemble::new(r).map_err(err)?);
    let scan = tp::run_fringe(&psi, &tp::recipe(t, beta, theta), samples, tol).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("chi", scan.chis)?;
    d.set_item("intensity", scan.intensities)?;
    d.set_item("visibility", scan.visibility)?;
    d.set_item("extracted_arg", scan.extracted_arg)?;
    d.set_item("inner_product", scan.extracted_inner)?;
    Ok(d)
}

#[pymodule]
#[pyo3(name = "mixphase")]
fn mixphase_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDensity>()?;
    m.add_class::<PyPhase>()?;
    m.add_class::<PyFamily>()?;
    m.add_class::<PyPath>()?;
    m.add_function(wrap_pyfunction!(gamma_pure, m)?)?;
    m.add_function(wrap_pyfunction!(gamma_mixed, m)?)?;
    m.add_function(wrap_pyfunction!(qubit_traces, m)?)?;
    m.add_function(wrap_pyfunction!(permutation_unitary, m)?)?;
    m.add_function(wrap_pyfunction!(diagonal_unitary, m)?)?;
    m.add_function(wrap_pyfunction!(transport_path, m)?)?;
    m.add_function(wrap_pyfunction!(geodesic_loop, m)?)?;
    m.add_function(wrap_pyfunction!(rotation_unitary, m)?)?;
    m.add_function(wrap_pyfunction!(gamma2_closed_form, m)?)?;
    m.add_function(wrap_pyfunction!(purify, m)?)?;
    m.add_function(wrap_pyfunction!(fringe, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
