//! Python module `strongblock`: geometries, point sets, linear codes and the
//! verification, classification and search entry points.

use std::collections::BTreeMap;
use std::sync::Arc;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use strongblock::blocking::{self, ReportMode};
use strongblock::classify::{classify_subsets, ClassifyConfig};
use strongblock::codes::{self, is_minimal_code};
use strongblock::search::{self, SearchConfig, SearchMode};
use strongblock::{format, geometry, Error};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::BudgetExceeded { .. } => PyRuntimeError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn to_elements(v: Vec<u32>) -> PyResult<Vec<u8>> {
    v.into_iter()
        .map(|x| u8::try_from(x).map_err(|_| PyValueError::new_err(format!("coordinate {x} out of range"))))
        .collect()
}

/// PG(k-1, q) for a prime q.
#[pyclass(name = "Geometry", module = "strongblock", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyGeometry {
    inner: Arc<geometry::Geometry>,
}

#[pymethods]
impl PyGeometry {
    #[new]
    fn new(k: usize, q: u32) -> PyResult<Self> {
        Ok(Self { inner: strongblock::build_geometry(k, q).map_err(to_py)? })
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k()
    }

    #[getter]
    fn q(&self) -> u32 {
        self.inner.q()
    }

    #[getter]
    fn num_points(&self) -> usize {
        self.inner.num_points()
    }

    /// Normalized coordinates of every point, in index order.
    fn points(&self) -> Vec<Vec<u32>> {
        self.inner.points().iter().map(|p| widen(&p.coords)).collect()
    }

    /// Point indices of every line.
    fn lines(&self) -> Vec<Vec<usize>> {
        self.inner.lines().iter().map(|l| bits_of(l.member_mask())).collect()
    }

    /// Point indices of every hyperplane.
    fn hyperplanes(&self) -> Vec<Vec<usize>> {
        self.inner.hyperplane_masks().iter().map(|&h| bits_of(h)).collect()
    }

    fn index_of(&self, coords: Vec<u32>) -> PyResult<usize> {
        self.inner.index_of(&to_elements(coords)?).map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!("Geometry(k={}, q={})", self.inner.k(), self.inner.q())
    }
}

// `Vec<u8>` would become `bytes` on the Python side
fn widen(v: &[u8]) -> Vec<u32> {
    v.iter().map(|&x| x as u32).collect()
}

fn bits_of(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| mask >> i & 1 == 1).collect()
}

/// A set of points of a geometry.
#[pyclass(name = "PointSet", module = "strongblock", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyPointSet {
    inner: strongblock::PointSet,
}

#[pymethods]
impl PyPointSet {
    /// Build from coordinate vectors; any nonzero scalar multiple is accepted.
    #[new]
    fn new(geometry: &PyGeometry, points: Vec<Vec<u32>>) -> PyResult<Self> {
        let coords = points.into_iter().map(to_elements).collect::<PyResult<Vec<_>>>()?;
        let inner = strongblock::PointSet::from_coords(&geometry.inner, &coords).map_err(to_py)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn from_indices(geometry: &PyGeometry, indices: Vec<usize>) -> PyResult<Self> {
        Ok(Self { inner: strongblock::PointSet::from_indices(&geometry.inner, &indices).map_err(to_py)? })
    }

    /// Parse a point-set file holding a single `pg k q` block.
    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        Ok(Self { inner: format::parse_point_set(text).map_err(to_py)? })
    }

    fn to_text(&self) -> String {
        format::write_point_set(&self.inner)
    }

    #[getter]
    fn geometry(&self) -> PyGeometry {
        PyGeometry { inner: Arc::clone(self.inner.geometry()) }
    }

    fn indices(&self) -> Vec<usize> {
        self.inner.indices().collect()
    }

    fn coords(&self) -> Vec<Vec<u32>> {
        self.inner.coords().iter().map(|c| widen(c)).collect()
    }

    fn rank(&self) -> usize {
        self.inner.rank()
    }

    fn is_strong(&self) -> bool {
        blocking::is_strong_blocking_set(&self.inner).is_strong
    }

    /// Blocking report as a dict; `total` lists every failing hyperplane.
    #[pyo3(signature = (total = false))]
    fn verify<'py>(&self, py: Python<'py>, total: bool) -> PyResult<Bound<'py, PyDict>> {
        let mode = if total { ReportMode::Total } else { ReportMode::ShortCircuit };
        let report = blocking::verify(&self.inner, mode);
        let d = PyDict::new(py);
        d.set_item("is_strong", report.is_strong)?;
        let failing: Vec<(usize, usize)> =
            report.failing_hyperplanes.iter().map(|f| (f.hyperplane, f.attained_rank)).collect();
        d.set_item("failing_hyperplanes", failing)?;
        d.set_item("intersection_profile", report.intersection_profile)?;
        Ok(d)
    }

    /// Generator matrix whose columns are the points of this set.
    fn to_code(&self) -> PyResult<PyLinearCode> {
        Ok(PyLinearCode { inner: codes::code_from_pointset(&self.inner).map_err(to_py)? })
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __contains__(&self, index: usize) -> bool {
        self.inner.contains(index)
    }

    fn __eq__(&self, other: &PyPointSet) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        let g = self.inner.geometry();
        format!("PointSet(k={}, q={}, indices={:?})", g.k(), g.q(), self.indices())
    }
}

/// A linear code given by a full-rank generator matrix.
#[pyclass(name = "LinearCode", module = "strongblock", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyLinearCode {
    inner: codes::LinearCode,
}

#[pymethods]
impl PyLinearCode {
    #[new]
    fn new(rows: Vec<Vec<u32>>, q: u32) -> PyResult<Self> {
        Ok(Self { inner: codes::LinearCode::new(&rows, q).map_err(to_py)? })
    }

    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        Ok(Self { inner: format::parse_generator(text).map_err(to_py)? })
    }

    fn to_text(&self) -> String {
        format::write_generator(&self.inner)
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn q(&self) -> u32 {
        self.inner.q()
    }

    fn generator(&self) -> Vec<Vec<u32>> {
        self.inner.generator().iter().map(|r| widen(r)).collect()
    }

    fn weight_distribution(&self) -> PyResult<Vec<usize>> {
        self.inner.weight_distribution().map_err(to_py)
    }

    fn is_minimal(&self, py: Python<'_>) -> PyResult<bool> {
        let code = &self.inner;
        Ok(py.detach(|| is_minimal_code(code)).map_err(to_py)?.minimal)
    }

    /// Minimality verdict with witness pairs `(c, c')`, `supp(c') ⊆ supp(c)`.
    fn minimality_report<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let code = &self.inner;
        let report = py.detach(|| is_minimal_code(code)).map_err(to_py)?;
        let d = PyDict::new(py);
        d.set_item("minimal", report.minimal)?;
        let witnesses: Vec<(Vec<u32>, Vec<u32>)> =
            report.witnesses.iter().map(|(c, d)| (widen(&c.vector), widen(&d.vector))).collect();
        d.set_item("witnesses", witnesses)?;
        d.set_item("non_minimal_count", report.non_minimal_count)?;
        Ok(d)
    }

    /// The column points as a set in PG(k-1, q); repeated points are merged.
    fn to_pointset(&self) -> PyResult<PyPointSet> {
        let g = strongblock::build_geometry(self.inner.k(), self.inner.q()).map_err(to_py)?;
        let columns = codes::pointset_from_code(&self.inner, &g).map_err(to_py)?;
        Ok(PyPointSet { inner: columns.set })
    }

    fn __repr__(&self) -> String {
        format!("LinearCode(n={}, k={}, q={})", self.inner.n(), self.inner.k(), self.inner.q())
    }
}

/// x0*x1 + x2*x3 = 0 in PG(3,2).
#[pyfunction]
fn hyperbolic_quadric(geometry: &PyGeometry) -> PyResult<PyPointSet> {
    Ok(PyPointSet { inner: geometry::hyperbolic_quadric(&geometry.inner).map_err(to_py)? })
}

/// The parabolic quadric Q(4,2) in PG(4,2).
#[pyfunction]
fn parabolic_quadric(geometry: &PyGeometry) -> PyResult<PyPointSet> {
    Ok(PyPointSet { inner: geometry::parabolic_quadric(&geometry.inner).map_err(to_py)? })
}

#[pyfunction]
fn lower_bound(k: usize, q: u32) -> usize {
    blocking::lower_bound(k, q)
}

/// GL(k,2) orbits on `size`-subsets as dicts, largest orbit first.
#[pyfunction]
#[pyo3(signature = (geometry, size, workers = 0))]
fn classify<'py>(
    py: Python<'py>,
    geometry: &PyGeometry,
    size: usize,
    workers: usize,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let g = &geometry.inner;
    let config = ClassifyConfig { workers, ..ClassifyConfig::default() };
    let orbits = py.detach(|| classify_subsets(g, size, &config)).map_err(to_py)?;
    orbits
        .into_iter()
        .map(|o| {
            let d = PyDict::new(py);
            d.set_item("representative", PyPointSet { inner: o.representative })?;
            d.set_item("orbit_size", o.orbit_size)?;
            d.set_item("stabilizer_order", o.stabilizer_order)?;
            d.set_item("signature", o.signature)?;
            d.set_item("is_strong", o.is_strong)?;
            Ok(d)
        })
        .collect()
}

/// Search for strong blocking sets; `mode` is "exhaustive", "pruned" or
/// "line-union". Returns a dict with `found`, `nodes_explored`, `exhausted`.
#[pyfunction]
#[pyo3(name = "search", signature = (geometry, size, mode = "pruned", budget = None, seed = 0, workers = 0))]
fn search_sets<'py>(
    py: Python<'py>,
    geometry: &PyGeometry,
    size: usize,
    mode: &str,
    budget: Option<u64>,
    seed: u64,
    workers: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let g = &geometry.inner;
    let mode: SearchMode = mode.parse().map_err(to_py)?;
    let config = SearchConfig {
        budget: budget.unwrap_or_else(search::default_budget),
        seed,
        workers,
        ..SearchConfig::new(g.k(), g.q(), size, mode)
    };
    let result = py
        .detach(|| match mode {
            SearchMode::Exhaustive => search::find_all_sbs_with(g, size, config.budget, workers),
            SearchMode::PrunedExhaustive => search::prove_nonexistence(g, size, &config),
            SearchMode::RandomizedLineUnion => {
                let per_line = g.q() as usize + 1;
                if !size.is_multiple_of(per_line) {
                    return Err(Error::Unsupported(format!("size {size} is not a multiple of {per_line}")));
                }
                search::search_line_union(g, size / per_line, &config)
            }
        })
        .map_err(to_py)?;
    let d = PyDict::new(py);
    let found: Vec<PyPointSet> = result.found.into_iter().map(|inner| PyPointSet { inner }).collect();
    d.set_item("found", found)?;
    d.set_item("nodes_explored", result.nodes_explored)?;
    d.set_item("exhausted", result.exhausted)?;
    Ok(d)
}

/// Hyperplane intersection sizes of a set: size -> number of hyperplanes.
#[pyfunction]
fn intersection_profile(set: &PyPointSet) -> BTreeMap<usize, usize> {
    blocking::intersection_profile(set.inner.geometry(), set.inner.mask())
}

#[pymodule]
#[pyo3(name = "strongblock")]
pub fn strongblock_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PyGeometry>()?;
    m.add_class::<PyPointSet>()?;
    m.add_class::<PyLinearCode>()?;
    m.add_function(wrap_pyfunction!(hyperbolic_quadric, m)?)?;
    m.add_function(wrap_pyfunction!(parabolic_quadric, m)?)?;
    m.add_function(wrap_pyfunction!(lower_bound, m)?)?;
    m.add_function(wrap_pyfunction!(intersection_profile, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(search_sets, m)?)?;
    Ok(())
}
