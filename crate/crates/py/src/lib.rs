//! Python bindings: a `Context` class carrying one `(G, H)` pair with its
//! transforms and operators, plus `run_suite` for driving the verification
//! suites in-process. Complex vectors cross the boundary as plain lists of
//! Python complex numbers; grids are flattened row-major with the dual
//! index first.

use std::sync::Arc;

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use qstft_core::group;
use qstft_core::harmonic::{self, GroupFunction, Space};
use qstft_core::operators::{
    apply_generalized_multiplier, apply_two_wavelet, two_wavelet_matrix, MultiplierSpec,
};
use qstft_core::spectral;
use qstft_core::transform::{analyze, reconstruct, synthesize, TimeFreqFunction};
use qstft_core::{radon, Error};

fn value_err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// One `(G, H)` pair: group, subgroup, quotient, dual, annihilator.
#[pyclass]
struct Context {
    inner: Arc<group::Context>,
}

impl Context {
    fn group_fn(&self, values: Vec<Complex64>, what: &str) -> PyResult<GroupFunction> {
        if values.len() != self.inner.group().order() {
            return Err(PyValueError::new_err(format!(
                "{what} needs {} values, got {}",
                self.inner.group().order(),
                values.len()
            )));
        }
        GroupFunction::new(Space::Group(Arc::clone(self.inner.group())), values)
            .map_err(value_err)
    }

    fn quotient_fn(&self, values: Vec<Complex64>, what: &str) -> PyResult<GroupFunction> {
        if values.len() != self.inner.quotient().len() {
            return Err(PyValueError::new_err(format!(
                "{what} needs {} values, got {}",
                self.inner.quotient().len(),
                values.len()
            )));
        }
        GroupFunction::new(Space::Quotient(Arc::clone(self.inner.quotient())), values)
            .map_err(value_err)
    }

    fn grid_fn(&self, values: Vec<Complex64>, what: &str) -> PyResult<TimeFreqFunction> {
        if values.len() != self.inner.grid_len() {
            return Err(PyValueError::new_err(format!(
                "{what} needs {} values, got {}",
                self.inner.grid_len(),
                values.len()
            )));
        }
        TimeFreqFunction::new(
            Arc::clone(self.inner.dual()),
            Arc::clone(self.inner.quotient()),
            values,
        )
        .map_err(value_err)
    }

    fn spec(
        &self,
        sigma: Vec<Complex64>,
        u: Vec<Complex64>,
        v: Vec<Complex64>,
        g: Vec<Complex64>,
    ) -> PyResult<MultiplierSpec> {
        MultiplierSpec::new(
            &self.inner,
            self.grid_fn(sigma, "sigma")?,
            self.group_fn(u, "u")?,
            self.group_fn(v, "v")?,
            self.quotient_fn(g, "g")?,
        )
        .map_err(value_err)
    }
}

#[pymethods]
impl Context {
    /// Build from cyclic factors and subgroup generator tuples.
    #[new]
    #[pyo3(signature = (factors, subgroup=vec![]))]
    fn new(factors: Vec<u32>, subgroup: Vec<Vec<i64>>) -> PyResult<Self> {
        let inner = group::Context::new(&factors, &subgroup).map_err(value_err)?;
        Ok(Context { inner })
    }

    /// Plane `Z_n x Z_n` with the cyclic line through `d` as subgroup.
    #[staticmethod]
    fn line(n: u32, d: (i64, i64)) -> PyResult<Self> {
        let inner = radon::line_context(n, d).map_err(value_err)?;
        Ok(Context { inner })
    }

    #[getter]
    fn order(&self) -> usize {
        self.inner.group().order()
    }

    #[getter]
    fn quotient_size(&self) -> usize {
        self.inner.quotient().len()
    }

    #[getter]
    fn dual_size(&self) -> usize {
        self.inner.dual().len()
    }

    #[getter]
    fn subgroup_order(&self) -> usize {
        self.inner.subgroup().order()
    }

    /// Canonical coset representatives as residue tuples.
    fn coset_reps(&self) -> Vec<Vec<u32>> {
        self.inner
            .quotient()
            .reps()
            .iter()
            .map(|e| e.residues().to_vec())
            .collect()
    }

    /// Annihilator elements as residue tuples.
    fn annihilator(&self) -> Vec<Vec<u32>> {
        self.inner
            .annihilator()
            .elements()
            .iter()
            .map(|e| e.residues().to_vec())
            .collect()
    }

    /// Character pairing `<x, chi_k>`.
    fn character(&self, k: Vec<i64>, x: Vec<i64>) -> PyResult<Complex64> {
        let g = self.inner.group();
        let k = g.element(&k).map_err(value_err)?;
        let x = g.element(&x).map_err(value_err)?;
        g.eval_character(&k, &x).map_err(value_err)
    }

    /// Forward transform of a group function (values on the dual).
    fn fourier(&self, f: Vec<Complex64>) -> PyResult<Vec<Complex64>> {
        let f = self.group_fn(f, "f")?;
        Ok(harmonic::fourier(&f).map_err(value_err)?.values().to_vec())
    }

    /// Fiber sums over the subgroup cosets (values on the quotient).
    fn periodize(&self, f: Vec<Complex64>) -> PyResult<Vec<Complex64>> {
        let f = self.group_fn(f, "f")?;
        Ok(harmonic::periodize(&f, self.inner.quotient())
            .map_err(value_err)?
            .values()
            .to_vec())
    }

    /// Quotient-window analysis; returns the flattened coefficient grid.
    fn analyze(&self, f: Vec<Complex64>, g: Vec<Complex64>) -> PyResult<Vec<Complex64>> {
        let f = self.group_fn(f, "f")?;
        let g = self.quotient_fn(g, "g")?;
        Ok(analyze(&self.inner, &f, &g)
            .map_err(value_err)?
            .values()
            .to_vec())
    }

    /// Adjoint synthesis from a flattened coefficient grid.
    fn synthesize(&self, coeffs: Vec<Complex64>, g: Vec<Complex64>) -> PyResult<Vec<Complex64>> {
        let coeffs = self.grid_fn(coeffs, "coeffs")?;
        let g = self.quotient_fn(g, "g")?;
        Ok(synthesize(&self.inner, &coeffs, &g)
            .map_err(value_err)?
            .values()
            .to_vec())
    }

    /// Two-window inversion.
    fn reconstruct(
        &self,
        f: Vec<Complex64>,
        g1: Vec<Complex64>,
        g2: Vec<Complex64>,
    ) -> PyResult<Vec<Complex64>> {
        let f = self.group_fn(f, "f")?;
        let g1 = self.quotient_fn(g1, "g1")?;
        let g2 = self.quotient_fn(g2, "g2")?;
        Ok(reconstruct(&self.inner, &f, &g1, &g2)
            .map_err(value_err)?
            .values()
            .to_vec())
    }

    /// Generalized multiplier `M_{sigma,g} f`.
    fn multiplier_apply(
        &self,
        sigma: Vec<Complex64>,
        g: Vec<Complex64>,
        f: Vec<Complex64>,
    ) -> PyResult<Vec<Complex64>> {
        let sigma = self.grid_fn(sigma, "sigma")?;
        let g = self.quotient_fn(g, "g")?;
        let f = self.group_fn(f, "f")?;
        Ok(apply_generalized_multiplier(&self.inner, &sigma, &g, &f)
            .map_err(value_err)?
            .values()
            .to_vec())
    }

    /// Two-wavelet multiplier applied to `f`.
    #[pyo3(signature = (sigma, u, v, g, f))]
    fn two_wavelet_apply(
        &self,
        sigma: Vec<Complex64>,
        u: Vec<Complex64>,
        v: Vec<Complex64>,
        g: Vec<Complex64>,
        f: Vec<Complex64>,
    ) -> PyResult<Vec<Complex64>> {
        let spec = self.spec(sigma, u, v, g)?;
        let f = self.group_fn(f, "f")?;
        Ok(apply_two_wavelet(&spec, &f)
            .map_err(value_err)?
            .values()
            .to_vec())
    }

    /// Matrix of the two-wavelet multiplier, as nested row lists.
    fn two_wavelet_matrix(
        &self,
        sigma: Vec<Complex64>,
        u: Vec<Complex64>,
        v: Vec<Complex64>,
        g: Vec<Complex64>,
    ) -> PyResult<Vec<Vec<Complex64>>> {
        let spec = self.spec(sigma, u, v, g)?;
        let m = two_wavelet_matrix(&spec).map_err(value_err)?;
        Ok((0..m.nrows())
            .map(|i| (0..m.ncols()).map(|j| m.entry(i, j)).collect())
            .collect())
    }

    /// Schatten p-norm of the two-wavelet multiplier.
    fn two_wavelet_schatten_norm(
        &self,
        sigma: Vec<Complex64>,
        u: Vec<Complex64>,
        v: Vec<Complex64>,
        g: Vec<Complex64>,
        p: f64,
    ) -> PyResult<f64> {
        let spec = self.spec(sigma, u, v, g)?;
        let m = two_wavelet_matrix(&spec).map_err(value_err)?;
        spectral::schatten_norm(&m, p).map_err(value_err)
    }

    fn __repr__(&self) -> String {
        format!("Context({})", self.inner.type_label())
    }
}

/// Run the verification suites on a JSON config string; returns the
/// canonical JSON report.
#[pyfunction]
fn run_suite(config_json: &str) -> PyResult<String> {
    let config =
        qstft_cli::parse_config(config_json).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let report = qstft_cli::run_suite(&config);
    Ok(report.to_canonical_json())
}

#[pymodule]
fn qstft_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Context>()?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    Ok(())
}
