//! Python bindings: `import pyrootdatum`.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use rootdatum::catalog;
use rootdatum::classify::{self, IsoBudget, IsoVerdict, SteenrodMode};
use rootdatum::exact_linear::{parse_scalar, Matrix};
use rootdatum::io::{read_datum, write_datum};
use rootdatum::root_datum::parse_torus_list;
use rootdatum::Error;

type Checks = Vec<(String, bool, Option<String>)>;
type Rows = Vec<Vec<String>>;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::PrecisionExhausted { .. } | Error::OrderBoundExceeded { .. } => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn rows(m: &Matrix) -> Vec<Vec<String>> {
    m.row_vectors().iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect()
}

fn factors(g: &rootdatum::exact_linear::FiniteAbelianPGroup) -> Vec<String> {
    g.invariant_factors().iter().map(|x| x.to_string()).collect()
}

/// A root datum over the p-adic integers.
#[pyclass(name = "RootDatum", module = "pyrootdatum", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyRootDatum {
    inner: rootdatum::root_datum::RootDatum,
}

impl PyRootDatum {
    fn wrap(inner: rootdatum::root_datum::RootDatum) -> Self {
        PyRootDatum { inner }
    }
}

#[pymethods]
impl PyRootDatum {
    /// Catalog entry such as `"SU(4)@2"` or `"DI4@2"`.
    #[staticmethod]
    fn catalog(key: &str) -> PyResult<Self> {
        catalog::get_str(key).map(Self::wrap).map_err(py_err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        read_datum(text).map(Self::wrap).map_err(py_err)
    }

    #[staticmethod]
    fn trivial(rank: usize, p: u64) -> Self {
        Self::wrap(rootdatum::root_datum::RootDatum::trivial(rank, p))
    }

    fn to_json(&self) -> String {
        write_datum(&self.inner)
    }

    #[getter]
    fn p(&self) -> u64 {
        self.inner.p()
    }

    #[getter]
    fn rank(&self) -> usize {
        self.inner.rank()
    }

    #[getter]
    fn weyl_order(&self) -> usize {
        self.inner.weyl().order()
    }

    #[getter]
    fn num_reflections(&self) -> usize {
        self.inner.reflections().len()
    }

    fn weyl_generators(&self) -> Vec<Vec<Vec<String>>> {
        self.inner.weyl().generators().iter().map(rows).collect()
    }

    fn degrees(&self) -> Vec<usize> {
        classify::invariant_degrees(self.inner.weyl())
    }

    /// `(passed, [(check, passed, witness)])`.
    fn verify(&self) -> PyResult<(bool, Checks)> {
        let r = self.inner.verify().map_err(py_err)?;
        let checks = r.checks.iter().map(|c| (c.name.to_string(), c.passed, c.witness.clone())).collect();
        Ok((r.ok(), checks))
    }

    /// Invariant factors of π₁ and its free rank.
    fn pi1(&self) -> PyResult<(Vec<String>, usize)> {
        let g = self.inner.fundamental_group().map_err(py_err)?;
        Ok((factors(&g), g.free_rank))
    }

    /// Invariant factors of the finite part of the center, its corank, and generators.
    fn center(&self) -> PyResult<(Vec<String>, usize, Vec<String>)> {
        let c = self.inner.center().map_err(py_err)?;
        Ok((factors(&c.group), c.corank(), c.generators.iter().map(|t| t.to_string()).collect()))
    }

    /// Quotient by central torus elements written as `"1/2,0;0,1/2"`.
    fn quotient(&self, by: &str) -> PyResult<Self> {
        let a = parse_torus_list(by, self.inner.rank(), self.inner.p()).map_err(py_err)?;
        self.inner.quotient(&a).map(Self::wrap).map_err(py_err)
    }

    /// Cover attached to the subgroup of π₁ generated by the given lattice vectors.
    fn cover(&self, vectors: Vec<Vec<String>>) -> PyResult<Self> {
        let ext = self.inner.extension();
        let mut h = Vec::new();
        for v in vectors {
            h.push(v.iter().map(|x| parse_scalar(x, ext)).collect::<Result<Vec<_>, _>>().map_err(py_err)?);
        }
        self.inner.cover(&h).map(Self::wrap).map_err(py_err)
    }

    fn universal_cover(&self) -> PyResult<Self> {
        self.inner.universal_cover().map(Self::wrap).map_err(py_err)
    }

    fn adjoint(&self) -> PyResult<Self> {
        self.inner.adjoint().map(Self::wrap).map_err(py_err)
    }

    fn product(&self, other: &PyRootDatum) -> PyResult<Self> {
        self.inner.product(&other.inner).map(Self::wrap).map_err(py_err)
    }

    /// Factors with their catalog labels, when found.
    fn split(&self) -> PyResult<Vec<(Option<String>, PyRootDatum)>> {
        let parts = self.inner.split_irreducibles().map_err(py_err)?;
        parts
            .into_iter()
            .map(|(f, _)| {
                let label = classify::catalog_label(&f).map_err(py_err)?;
                Ok((label.map(|k| k.to_string()), Self::wrap(f)))
            })
            .collect()
    }

    fn structure_json(&self) -> PyResult<String> {
        let s = classify::structure_decomposition(&self.inner).map_err(py_err)?;
        Ok(s.to_json(true).to_string())
    }

    fn fingerprint_json(&self) -> PyResult<String> {
        let f = classify::fingerprint(&self.inner).map_err(py_err)?;
        Ok(serde_json::to_string(&f).expect("serializable"))
    }

    fn __repr__(&self) -> String {
        format!("RootDatum(p={}, rank={}, |W|={})", self.inner.p(), self.inner.rank(), self.inner.weyl().order())
    }
}

/// `(verdict, witness rows)`; the verdict is `None` when the search ran out of budget.
#[pyfunction]
#[pyo3(signature = (a, b, max_nodes = 200_000, seed = 0))]
fn is_isomorphic(
    a: &PyRootDatum,
    b: &PyRootDatum,
    max_nodes: usize,
    seed: u64,
) -> PyResult<(Option<bool>, Option<Rows>)> {
    let budget = IsoBudget { max_nodes, seed, ..IsoBudget::default() };
    let v = classify::is_isomorphic_with(&a.inner, &b.inner, &budget).map_err(py_err)?;
    let witness = match &v {
        IsoVerdict::Isomorphic { witness, .. } => Some(rows(witness)),
        _ => None,
    };
    Ok((v.is_isomorphic(), witness))
}

#[pyfunction]
#[pyo3(signature = (degrees, extended = false))]
fn steenrod(degrees: Vec<u32>, extended: bool) -> PyResult<Vec<Vec<String>>> {
    let mode = if extended { SteenrodMode::Extended } else { SteenrodMode::Strict };
    Ok(classify::steenrod_decide(&degrees, mode).map_err(py_err)?.decompositions)
}

#[pyfunction]
fn catalog_keys(max_rank: usize, p: u64) -> Vec<String> {
    catalog::list_entries(max_rank, p).iter().map(|k| k.to_string()).collect()
}

/// Names the factors of an 𝔽₂ Weyl pair given by generator rows such as `["010", "100", "001"]`.
#[pyfunction]
#[pyo3(signature = (dim, generators, h6_trivial = Vec::new(), seed = 0))]
fn identify_weyl(dim: usize, generators: Vec<Vec<String>>, h6_trivial: Vec<usize>, seed: u64) -> PyResult<Vec<String>> {
    let gens = generators
        .iter()
        .map(|g| classify::F2Matrix::from_strings(g))
        .collect::<Result<Vec<_>, _>>()
        .map_err(py_err)?;
    let m = classify::F2Module::new(dim, gens).map_err(py_err)?;
    let named = classify::identify_weyl_pair(&m, &h6_trivial, seed).map_err(py_err)?;
    Ok(named.into_iter().map(|f| f.name).collect())
}

/// Runs a command line and returns `(exit code, stdout, stderr)`.
#[pyfunction]
fn run_cli(args: Vec<String>) -> (i32, String, String) {
    let out = rootdatum::cli::run(std::iter::once("rootdatum".to_string()).chain(args));
    (out.code, out.stdout, out.stderr)
}

#[pymodule]
fn pyrootdatum(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyRootDatum>()?;
    m.add_function(wrap_pyfunction!(is_isomorphic, m)?)?;
    m.add_function(wrap_pyfunction!(steenrod, m)?)?;
    m.add_function(wrap_pyfunction!(catalog_keys, m)?)?;
    m.add_function(wrap_pyfunction!(identify_weyl, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    Ok(())
}
