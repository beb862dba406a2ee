//! Python bindings.

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use toriclc_core::cli::{run_text, Command, IdealInput, Options};
use toriclc_core::cohomology::{assemble_module, IdealSpec};
use toriclc_core::grdmod;
use toriclc_core::lattice::IntMatrix;
use toriclc_core::sector::{self, enumerate_classes, BoxPolicy};
use toriclc_core::semigroup::{default_search_bound, DEFAULT_MARGIN};
use toriclc_core::Error;

create_exception!(toriclc, ToricError, PyException);

fn to_py(e: Error) -> PyErr {
    ToricError::new_err(e.to_string())
}

#[pyclass(name = "ToricPresentation", module = "toriclc", frozen)]
struct PyToric {
    inner: toriclc_core::semigroup::ToricPresentation,
}

#[pymethods]
impl PyToric {
    #[new]
    #[pyo3(signature = (rows, search_bound=None))]
    fn new(rows: Vec<Vec<i64>>, search_bound: Option<u64>) -> PyResult<Self> {
        let m = IntMatrix::from_rows(&rows).map_err(to_py)?;
        let bound = search_bound.unwrap_or_else(|| default_search_bound(&m));
        let inner = toriclc_core::semigroup::ToricPresentation::with_options(m, bound, DEFAULT_MARGIN).map_err(to_py)?;
        Ok(PyToric { inner })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn columns(&self) -> Vec<Vec<i64>> {
        self.inner.columns().to_vec()
    }

    #[getter]
    fn search_bound(&self) -> u64 {
        self.inner.search_bound()
    }

    /// Primitive support functions, one per facet.
    fn facets(&self) -> Vec<Vec<i64>> {
        self.inner.facets().iter().map(|f| f.coefficients.clone()).collect()
    }

    /// `(face_id, dim, columns)` with 0-based column indices.
    fn faces(&self) -> Vec<(usize, usize, Vec<usize>)> {
        self.inner
            .face_lattice()
            .faces()
            .iter()
            .map(|f| (f.face_id, f.dim, f.column_indices.clone()))
            .collect()
    }

    fn flags<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let d = PyDict::new(py);
        d.set_item("pointed", self.inner.is_pointed())?;
        d.set_item("simplicial", self.inner.is_simplicial())?;
        if let Ok(c) = self.inner.classification() {
            d.set_item("normal", c.normal)?;
            d.set_item("scored", c.scored)?;
            d.set_item("s2", c.s2)?;
        }
        Ok(d)
    }

    /// `a ∈ NA + Z(A∩τ)`; `face` defaults to the origin, i.e. `a ∈ NA`.
    #[pyo3(signature = (a, face=None))]
    fn is_member(&self, a: Vec<i64>, face: Option<usize>) -> PyResult<bool> {
        let face = face.unwrap_or(self.inner.face_lattice().bottom());
        self.inner.member_na_plus_face(&a, face).map_err(to_py)
    }

    /// Whether `a` is a degree of the localization at `t^b`.
    fn in_localization(&self, a: Vec<i64>, b: Vec<i64>) -> PyResult<bool> {
        self.inner.member_localization(&a, &b).map_err(to_py)
    }

    fn signature(&self, a: Vec<i64>) -> PyResult<Vec<Vec<usize>>> {
        Ok(sector::signature(&self.inner, &a).map_err(to_py)?.sets)
    }

    fn nabla(&self, a: Vec<i64>) -> PyResult<Vec<usize>> {
        sector::nabla(&self.inner, &a).map_err(to_py)
    }

    /// `(class_id, representative, sector)` for each equivalence class.
    #[pyo3(signature = (box_radius=None))]
    fn classes(&self, box_radius: Option<i64>) -> PyResult<Vec<(usize, Vec<i64>, Vec<usize>)>> {
        let policy = BoxPolicy {
            initial_radius: box_radius,
            ..BoxPolicy::default()
        };
        let e = enumerate_classes(&self.inner, &policy).map_err(to_py)?;
        Ok(e.classes
            .into_iter()
            .map(|c| (c.class_id, c.representative, c.sector))
            .collect())
    }

    /// `{i: [(class_id, multiplicity), ...]}` for the nonzero `H^i_I(S_A)`;
    /// `ideal` lists generator degrees, `None` means the maximal ideal.
    #[pyo3(signature = (ideal=None, box_radius=None))]
    fn local_cohomology(
        &self,
        ideal: Option<Vec<Vec<i64>>>,
        box_radius: Option<i64>,
    ) -> PyResult<Vec<(usize, Vec<(usize, usize)>)>> {
        let policy = BoxPolicy {
            initial_radius: box_radius,
            ..BoxPolicy::default()
        };
        let e = enumerate_classes(&self.inner, &policy).map_err(to_py)?;
        let spec = match ideal {
            None => IdealSpec::Maximal,
            Some(g) => IdealSpec::Generators { generator_degrees: g },
        };
        let m = assemble_module(&self.inner, &e, spec).map_err(to_py)?;
        Ok(m.modules.into_iter().map(|s| (s.index, s.series)).collect())
    }

    fn n_sigma(&self, a: Vec<i64>, facet: usize) -> PyResult<u64> {
        if facet >= self.inner.facets().len() {
            return Err(ToricError::new_err(format!("no facet {facet}")));
        }
        grdmod::n_sigma(&self.inner, &a, facet).map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!("ToricPresentation({:?})", self.inner.matrix().to_i64_rows().unwrap_or_default())
    }
}

/// Runs a CLI command on problem-file text and returns the machine report.
#[pyfunction]
#[pyo3(signature = (command, problem, ideal=None, socle=None))]
fn run(command: &str, problem: &str, ideal: Option<Vec<Vec<i64>>>, socle: Option<Vec<i64>>) -> PyResult<String> {
    let command: Command = command.parse().map_err(to_py)?;
    let options = Options {
        ideal: ideal.map(IdealInput::Generators),
        socle: socle.unwrap_or_default(),
        ..Options::default()
    };
    Ok(run_text(command, problem, &options).map_err(to_py)?.machine())
}

#[pymodule]
fn toriclc(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyToric>()?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add("ToricError", m.py().get_type::<ToricError>())?;
    Ok(())
}
