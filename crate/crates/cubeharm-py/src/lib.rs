//! Python bindings: the main cube types and operations, exposed as a native
//! extension module.

use cubeharm::bilinear::{self, RealMatrix};
use cubeharm::cube::CubeError;
use cubeharm::lacunary::LacunaryPolynomial;
use cubeharm::{gaussian, khintchine, lacunary, martingale, verify, walsh};
use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn err(e: CubeError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Real-valued function on the Boolean cube `{-1,+1}^ell`.
#[pyclass(name = "CubeFunction", from_py_object)]
#[derive(Clone)]
struct PyCubeFunction {
    inner: cubeharm::CubeFunction,
}

#[pymethods]
impl PyCubeFunction {
    #[new]
    fn new(ell: u32, values: Vec<f64>) -> PyResult<Self> {
        Ok(PyCubeFunction { inner: cubeharm::CubeFunction::new(ell, values).map_err(err)? })
    }

    #[getter]
    fn ell(&self) -> u32 {
        self.inner.ell()
    }

    #[getter]
    fn values(&self) -> Vec<f64> {
        self.inner.values().to_vec()
    }

    fn lp_norm(&self, p: f64) -> PyResult<f64> {
        self.inner.lp_norm(p).map_err(err)
    }

    fn lp_quantity(&self, p: f64) -> PyResult<f64> {
        self.inner.lp_quantity(p).map_err(err)
    }

    fn inner_product(&self, other: &PyCubeFunction) -> PyResult<f64> {
        self.inner.inner_product(&other.inner).map_err(err)
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("CubeFunction(ell={}, len={})", self.inner.ell(), self.inner.len())
    }
}

#[pyfunction]
fn walsh_function(ell: u32, subset: usize) -> PyResult<PyCubeFunction> {
    Ok(PyCubeFunction { inner: walsh::walsh_function(ell, subset).map_err(err)? })
}

#[pyfunction]
fn rademacher_span(a: Vec<f64>) -> PyResult<PyCubeFunction> {
    Ok(PyCubeFunction { inner: walsh::rademacher_span(&a).map_err(err)? })
}

/// Walsh coefficients indexed by subset bitmask.
#[pyfunction]
fn analyze(f: &PyCubeFunction) -> Vec<f64> {
    walsh::analyze(&f.inner).into_coeffs()
}

#[pyfunction]
fn synthesize(ell: u32, coeffs: Vec<f64>) -> PyResult<PyCubeFunction> {
    let s = walsh::WalshSpectrum::new(ell, coeffs).map_err(err)?;
    Ok(PyCubeFunction { inner: walsh::synthesize(&s) })
}

#[pyfunction]
fn conditional_expectation(f: &PyCubeFunction, k: u32) -> PyResult<PyCubeFunction> {
    Ok(PyCubeFunction { inner: martingale::conditional_expectation(&f.inner, k).map_err(err)? })
}

#[pyfunction]
fn martingale_split(f: &PyCubeFunction, k: u32) -> PyResult<(PyCubeFunction, PyCubeFunction)> {
    let (f1, f2) = martingale::martingale_split(&f.inner, k).map_err(err)?;
    Ok((PyCubeFunction { inner: f1 }, PyCubeFunction { inner: f2 }))
}

#[pyfunction]
fn maximal_function(f: &PyCubeFunction) -> PyCubeFunction {
    PyCubeFunction { inner: martingale::maximal_function(&f.inner) }
}

#[pyfunction]
fn square_function(f: &PyCubeFunction) -> PyCubeFunction {
    PyCubeFunction { inner: martingale::square_function(&f.inner) }
}

/// Members and normalized measure of `{x : M(f)(x) > lambda}`.
#[pyfunction]
fn superlevel_set(f: &PyCubeFunction, lambda: f64) -> PyResult<(Vec<usize>, f64)> {
    let s = martingale::superlevel_set(&f.inner, lambda).map_err(err)?;
    Ok((s.members, s.measure))
}

/// Maximal stopping-time blocks as `(level, prefix)` pairs.
#[pyfunction]
fn cz_blocks(f: &PyCubeFunction, lambda: f64) -> PyResult<Vec<(u32, usize)>> {
    let blocks = martingale::cz_blocks(&f.inner, lambda).map_err(err)?;
    Ok(blocks.iter().map(|b| (b.level, b.prefix)).collect())
}

#[pyfunction]
fn truncate_above(f: &PyCubeFunction, lambda: f64) -> PyResult<PyCubeFunction> {
    Ok(PyCubeFunction { inner: martingale::truncate_above(&f.inner, lambda).map_err(err)? })
}

#[pyfunction]
fn even_moment(a: Vec<f64>, s: u32) -> PyResult<f64> {
    khintchine::even_moment(&a, s).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (ell, s, restarts = 32, seed = 0))]
fn best_ratio_even(ell: usize, s: u32, restarts: usize, seed: u64) -> PyResult<(f64, Vec<f64>)> {
    let r = khintchine::best_ratio_even(ell, s, restarts, seed).map_err(err)?;
    Ok((r.ratio, r.coefficients))
}

#[pyfunction]
#[pyo3(signature = (ell, q, restarts = 32, seed = 0))]
fn best_ratio_low(ell: usize, q: f64, restarts: usize, seed: u64) -> PyResult<(f64, Vec<f64>)> {
    let r = khintchine::best_ratio_low(ell, q, restarts, seed).map_err(err)?;
    Ok((r.ratio, r.coefficients))
}

#[pyfunction]
fn holder_reverse_constant(q: f64) -> PyResult<f64> {
    khintchine::holder_reverse_constant(q).map_err(err)
}

/// `(value, root)` of the Gaussian absolute moment at exponent `p`.
#[pyfunction]
fn gaussian_moment(p: f64) -> PyResult<(f64, f64)> {
    let m = gaussian::gaussian_moment(p).map_err(err)?;
    Ok((m.value, m.root))
}

#[pyfunction]
fn gaussian_moment_quadrature(p: f64) -> f64 {
    gaussian::gaussian_moment_quadrature(p)
}

#[pyfunction]
fn linear_functional_moment(v: Vec<f64>, p: f64) -> PyResult<f64> {
    gaussian::linear_functional_moment(&v, p).map_err(err)
}

#[pyfunction]
fn gaussian_khintchine_limit(p: f64) -> PyResult<f64> {
    gaussian::gaussian_khintchine_limit(p).map_err(err)
}

/// `(l2, l4_closed, l4_quadrature)` for coefficients `[(re, im), ...]`.
#[pyfunction]
fn lacunary_norms(coeffs: Vec<(f64, f64)>) -> PyResult<(f64, f64, f64)> {
    let c = coeffs.iter().map(|&(re, im)| Complex64::new(re, im)).collect();
    let f = LacunaryPolynomial::new(c).map_err(err)?;
    let quad = f.circle_quadrature_norm(4, None).map_err(err)?;
    Ok((f.l2_norm(), f.l4_norm_closed(), quad))
}

#[pyfunction]
fn collision_check(max_j: u32) -> PyResult<bool> {
    match lacunary::collision_check(max_j) {
        Ok(ok) => Ok(ok),
        Err(tuple) => Err(PyValueError::new_err(format!("counterexample: {tuple:?}"))),
    }
}

#[pyfunction]
fn infty_to_one_norm(rows: Vec<Vec<f64>>) -> PyResult<(f64, Vec<i8>)> {
    let a = RealMatrix::from_rows(&rows).map_err(err)?;
    bilinear::infty_to_one_norm(&a).map_err(err)
}

#[pyfunction]
fn restrict(rows: Vec<Vec<f64>>) -> PyResult<Vec<Vec<f64>>> {
    let a = RealMatrix::from_rows(&rows).map_err(err)?;
    let r = bilinear::restrict(&a).map_err(err)?;
    Ok((0..r.rows()).map(|j| (0..r.cols()).map(|l| r.get(j, l)).collect()).collect())
}

#[pyfunction]
fn trace_pairing(a_rows: Vec<Vec<f64>>, t_rows: Vec<Vec<f64>>) -> PyResult<f64> {
    let a = RealMatrix::from_rows(&a_rows).map_err(err)?;
    let t = RealMatrix::from_rows(&t_rows).map_err(err)?;
    bilinear::trace_pairing(&a, &t).map_err(err)
}

/// Alternating-maximization lower bound; returns
/// `(objective, scalar_norm, v, w)`.
#[pyfunction]
#[pyo3(signature = (rows, dim = None, restarts = 16, tol = 1e-12, seed = 0))]
fn grothendieck_ratio(
    rows: Vec<Vec<f64>>,
    dim: Option<usize>,
    restarts: usize,
    tol: f64,
    seed: u64,
) -> PyResult<(f64, f64, Vec<Vec<f64>>, Vec<Vec<f64>>)> {
    let a = RealMatrix::from_rows(&rows).map_err(err)?;
    let d = dim.unwrap_or(a.rows() + a.cols());
    let (norm, _) = bilinear::infty_to_one_norm(&a).map_err(err)?;
    let config = bilinear::grothendieck_ratio(&a, d, restarts, tol, seed).map_err(err)?;
    Ok((config.objective, norm, config.v, config.w))
}

#[pyfunction]
fn grothendieck_bound() -> f64 {
    bilinear::grothendieck_bound()
}

/// Run every verification suite; returns `[(name, passed, details), ...]`.
#[pyfunction]
#[pyo3(signature = (seed = 0))]
fn verify_all(seed: u64) -> Vec<(String, bool, String)> {
    verify::run_all(seed)
        .into_iter()
        .map(|r| (r.name.to_string(), r.passed, r.details))
        .collect()
}

#[pymodule]
fn cubeharm_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCubeFunction>()?;
    m.add_function(wrap_pyfunction!(walsh_function, m)?)?;
    m.add_function(wrap_pyfunction!(rademacher_span, m)?)?;
    m.add_function(wrap_pyfunction!(analyze, m)?)?;
    m.add_function(wrap_pyfunction!(synthesize, m)?)?;
    m.add_function(wrap_pyfunction!(conditional_expectation, m)?)?;
    m.add_function(wrap_pyfunction!(martingale_split, m)?)?;
    m.add_function(wrap_pyfunction!(maximal_function, m)?)?;
    m.add_function(wrap_pyfunction!(square_function, m)?)?;
    m.add_function(wrap_pyfunction!(superlevel_set, m)?)?;
    m.add_function(wrap_pyfunction!(cz_blocks, m)?)?;
    m.add_function(wrap_pyfunction!(truncate_above, m)?)?;
    m.add_function(wrap_pyfunction!(even_moment, m)?)?;
    m.add_function(wrap_pyfunction!(best_ratio_even, m)?)?;
    m.add_function(wrap_pyfunction!(best_ratio_low, m)?)?;
    m.add_function(wrap_pyfunction!(holder_reverse_constant, m)?)?;
    m.add_function(wrap_pyfunction!(gaussian_moment, m)?)?;
    m.add_function(wrap_pyfunction!(gaussian_moment_quadrature, m)?)?;
    m.add_function(wrap_pyfunction!(linear_functional_moment, m)?)?;
    m.add_function(wrap_pyfunction!(gaussian_khintchine_limit, m)?)?;
    m.add_function(wrap_pyfunction!(lacunary_norms, m)?)?;
    m.add_function(wrap_pyfunction!(collision_check, m)?)?;
    m.add_function(wrap_pyfunction!(infty_to_one_norm, m)?)?;
    m.add_function(wrap_pyfunction!(restrict, m)?)?;
    m.add_function(wrap_pyfunction!(trace_pairing, m)?)?;
    m.add_function(wrap_pyfunction!(grothendieck_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(grothendieck_bound, m)?)?;
    m.add_function(wrap_pyfunction!(verify_all, m)?)?;
    Ok(())
}
