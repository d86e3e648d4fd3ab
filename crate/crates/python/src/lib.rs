//! Python bindings. Field elements cross the boundary as strings in the
//! field's own syntax ("3*t^2 + s"); structured results come back as dicts.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde_json::Value;

use kforms::albert::CubicNormStructure;
use kforms::bounds::{self, Route};
use kforms::fields::{p_class, AnyField, Field, LaurentElem, LaurentField, DEFAULT_PRECISION};
use kforms::forms::{budget_from_env, pfister as pfister_form, SearchOptions, SearchPlan, Strategy};
use kforms::milnor::{self, common_slot_step};
use kforms::symbolalg;

fn err(e: kforms::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (v.to_string(),))
}

fn plan(strategy: Option<&str>, seed: u64, trials: u64) -> PyResult<SearchPlan<LaurentElem>> {
    let strategy = match strategy {
        None | Some("auto") => None,
        Some("exhaustive") => Some(Strategy::Exhaustive),
        Some("randomized") => Some(Strategy::Randomized { seed, trials }),
        Some("springer") => Some(Strategy::Springer),
        Some(s) => return Err(PyValueError::new_err(format!("unknown strategy {s:?}"))),
    };
    Ok(SearchPlan { strategy, opts: SearchOptions::with_budget(budget_from_env()), seed, trials })
}

/// A finite field gf(q) or an iterated Laurent series field gf(q)((t))((s)).
#[pyclass(frozen, name = "Field", skip_from_py_object)]
#[derive(Clone)]
struct PyField {
    inner: LaurentField,
}

impl PyField {
    fn elem(&self, s: &str) -> PyResult<LaurentElem> {
        self.inner.parse_elem(s).map_err(err)
    }

    fn elems(&self, v: &[String]) -> PyResult<Vec<LaurentElem>> {
        v.iter().map(|s| self.elem(s)).collect()
    }

    fn show(&self, v: &[LaurentElem]) -> Vec<String> {
        v.iter().map(|a| self.inner.format_elem(a)).collect()
    }
}

#[pymethods]
impl PyField {
    #[new]
    #[pyo3(signature = (descriptor, precision=None))]
    fn new(descriptor: &str, precision: Option<i64>) -> PyResult<Self> {
        let precision = precision.unwrap_or(DEFAULT_PRECISION);
        let inner = match AnyField::parse(descriptor, Some(precision)).map_err(err)? {
            AnyField::Finite(base) => LaurentField::new(base, &[], precision).map_err(err)?,
            AnyField::Laurent(f) => f,
        };
        Ok(PyField { inner })
    }

    #[getter]
    fn characteristic(&self) -> u64 {
        self.inner.characteristic()
    }

    /// Normal form of an element.
    fn normalize(&self, elem: &str) -> PyResult<String> {
        Ok(self.inner.format_elem(&self.elem(elem)?))
    }

    fn mul(&self, a: &str, b: &str) -> PyResult<String> {
        Ok(self.inner.format_elem(&self.inner.mul(&self.elem(a)?, &self.elem(b)?)))
    }

    /// Class of `elem` in F*/F*^p: valuations outermost first, then the residue class.
    fn p_class(&self, elem: &str, p: u64) -> PyResult<Vec<u64>> {
        p_class(&self.inner, &self.elem(elem)?, p).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("Field({:?})", self.inner.descriptor())
    }
}

#[pyclass(frozen)]
struct Form {
    field: PyField,
    inner: kforms::forms::Form<LaurentField>,
}

#[pymethods]
impl Form {
    #[new]
    #[pyo3(signature = (field, text, dim=None))]
    fn new(field: &PyField, text: &str, dim: Option<usize>) -> PyResult<Self> {
        let inner = kforms::forms::Form::parse(field.inner.clone(), text, dim).map_err(err)?;
        Ok(Form { field: field.clone(), inner })
    }

    #[staticmethod]
    fn pfister(field: &PyField, slots: Vec<String>) -> PyResult<Self> {
        let inner = pfister_form(&field.inner, &field.elems(&slots)?).map_err(err)?;
        Ok(Form { field: field.clone(), inner })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn degree(&self) -> u32 {
        self.inner.degree()
    }

    fn evaluate(&self, v: Vec<String>) -> PyResult<String> {
        let value = self.inner.evaluate(&self.field.elems(&v)?).map_err(err)?;
        Ok(self.field.inner.format_elem(&value))
    }

    /// Returns {"verdict": "witness" | "isotropic" | "none" | "not-found", "witness": [...] | None}.
    #[pyo3(signature = (strategy=None, seed=0, trials=20_000))]
    fn isotropy<'py>(&self, py: Python<'py>, strategy: Option<&str>, seed: u64, trials: u64) -> PyResult<Bound<'py, PyAny>> {
        let out = plan(strategy, seed, trials)?.run(&self.inner).map_err(err)?;
        let witness = out.witness().map(|w| self.field.show(w));
        to_py(py, &serde_json::json!({"verdict": out.verdict(), "isotropic": out.decided(), "witness": witness}))
    }

    fn to_json<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.inner.to_json())
    }

    fn __str__(&self) -> String {
        self.inner.format()
    }
}

/// The cyclic algebra D_(a,b) of degree p: x^p = a, y^p = b, yx = ρxy.
#[pyclass(frozen)]
struct SymbolAlgebra {
    field: PyField,
    inner: symbolalg::SymbolAlgebra<LaurentField>,
}

#[pymethods]
impl SymbolAlgebra {
    #[new]
    fn new(field: &PyField, p: u64, a: &str, b: &str) -> PyResult<Self> {
        let inner = symbolalg::SymbolAlgebra::build(&field.inner, p, &field.elem(a)?, &field.elem(b)?).map_err(err)?;
        Ok(SymbolAlgebra { field: field.clone(), inner })
    }

    fn norm_form(&self) -> PyResult<Form> {
        Ok(Form { field: self.field.clone(), inner: self.inner.norm_form().map_err(err)? })
    }

    fn reduced_norm(&self, v: Vec<String>) -> PyResult<String> {
        let n = self.inner.algebra().reduced_norm(&self.field.elems(&v)?).map_err(err)?;
        Ok(self.field.inner.format_elem(&n))
    }

    #[pyo3(signature = (second=false))]
    fn identity_witness<'py>(&self, py: Python<'py>, second: bool) -> PyResult<Bound<'py, PyAny>> {
        let w = if second { self.inner.second_identity_witness() } else { self.inner.identity_witness() }.map_err(err)?;
        to_py(py, &w.to_json(&self.field.inner))
    }

    #[pyo3(signature = (seed=0, trials=20_000))]
    fn is_split<'py>(&self, py: Python<'py>, seed: u64, trials: u64) -> PyResult<Bound<'py, PyAny>> {
        let opts = SearchOptions::with_budget(budget_from_env());
        let s = self.inner.is_split_auto(&opts, seed, trials).map_err(err)?;
        to_py(py, &s.to_json(&self.field.inner))
    }
}

/// First Tits construction J(D, c) for a degree-3 symbol algebra D.
#[pyclass(frozen)]
struct AlbertAlgebra {
    field: PyField,
    inner: CubicNormStructure<LaurentField>,
}

#[pymethods]
impl AlbertAlgebra {
    #[new]
    fn new(field: &PyField, a: &str, b: &str, c: &str) -> PyResult<Self> {
        let d = symbolalg::SymbolAlgebra::build(&field.inner, 3, &field.elem(a)?, &field.elem(b)?).map_err(err)?;
        let inner = CubicNormStructure::build_first_tits(&d, &field.elem(c)?).map_err(err)?;
        Ok(AlbertAlgebra { field: field.clone(), inner })
    }

    fn norm(&self, v: Vec<String>) -> PyResult<String> {
        let v = self.field.elems(&v)?;
        if v.len() != 27 {
            return Err(PyValueError::new_err("Albert algebra elements have 27 coordinates"));
        }
        Ok(self.field.inner.format_elem(&self.inner.norm(&v)))
    }

    fn norm_form(&self) -> PyResult<Form> {
        Ok(Form { field: self.field.clone(), inner: self.inner.norm_form().map_err(err)? })
    }

    #[pyo3(signature = (seed=0, trials=20_000))]
    fn division_status<'py>(&self, py: Python<'py>, seed: u64, trials: u64) -> PyResult<Bound<'py, PyAny>> {
        let opts = SearchOptions::with_budget(budget_from_env());
        let s = self.inner.division_status(&opts, seed, trials).map_err(err)?;
        to_py(py, &s.to_json(&self.field.inner))
    }
}

/// A mod-p Milnor symbol {a_1, ..., a_n}.
#[pyclass(frozen)]
struct Symbol {
    field: PyField,
    inner: milnor::Symbol<LaurentField>,
}

#[pymethods]
impl Symbol {
    #[new]
    fn new(field: &PyField, p: u64, text: &str) -> PyResult<Self> {
        Ok(Symbol { field: field.clone(), inner: milnor::Symbol::parse(&field.inner, p, text).map_err(err)? })
    }

    #[getter]
    fn slots(&self) -> Vec<String> {
        self.field.show(self.inner.slots())
    }

    fn is_trivial(&self) -> PyResult<bool> {
        self.inner.is_trivial().map_err(err)
    }

    fn normalize(&self) -> PyResult<Symbol> {
        let n = self.inner.normalize().map_err(err)?;
        Ok(Symbol { field: self.field.clone(), inner: n.symbol })
    }

    /// (a, b) -> (-a/b, a + b) at slots i, i+1 (0-based); `alt` uses (a + b, -b/a).
    #[pyo3(signature = (i, alt=false))]
    fn rewrite(&self, i: usize, alt: bool) -> PyResult<Symbol> {
        let inner = if alt { self.inner.rewrite_identity_alt(i) } else { self.inner.rewrite_identity(i) }.map_err(err)?;
        Ok(Symbol { field: self.field.clone(), inner })
    }

    fn report<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.inner.report().map_err(err)?)
    }

    fn __str__(&self) -> String {
        self.inner.format()
    }
}

/// One common-slot step for two p = 2 symbols of equal length.
#[pyfunction]
#[pyo3(signature = (alpha, beta, seed=0, trials=20_000))]
fn common_slot<'py>(py: Python<'py>, alpha: &Symbol, beta: &Symbol, seed: u64, trials: u64) -> PyResult<Bound<'py, PyAny>> {
    let out = common_slot_step(&alpha.inner, &beta.inner, &plan(None, seed, trials)?).map_err(err)?;
    to_py(py, &out.to_json())
}

#[pyfunction]
fn cd_bound(p: u64, n: u32) -> PyResult<u32> {
    bounds::cd_bound(p, n).map_err(err)
}

/// route is "symbol" or "albert".
#[pyfunction]
fn ledger<'py>(py: Python<'py>, p: u64, n: u32, route: &str, m: u32) -> PyResult<Bound<'py, PyAny>> {
    let route: Route = route.parse().map_err(err)?;
    let l = bounds::ledger(p, n, route, m).map_err(err)?;
    to_py(py, &serde_json::to_value(&l).expect("serializable"))
}

#[pyfunction]
fn bounds_table<'py>(py: Python<'py>, p: u64, n_max: u32) -> PyResult<Bound<'py, PyAny>> {
    let rows = bounds::table(p, n_max).map_err(err)?;
    to_py(py, &serde_json::to_value(&rows).expect("serializable"))
}

#[pymodule]
fn pykforms(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyField>()?;
    m.add_class::<Form>()?;
    m.add_class::<SymbolAlgebra>()?;
    m.add_class::<AlbertAlgebra>()?;
    m.add_class::<Symbol>()?;
    m.add_function(wrap_pyfunction!(common_slot, m)?)?;
    m.add_function(wrap_pyfunction!(cd_bound, m)?)?;
    m.add_function(wrap_pyfunction!(ledger, m)?)?;
    m.add_function(wrap_pyfunction!(bounds_table, m)?)?;
    Ok(())
}
