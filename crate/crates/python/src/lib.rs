//! Python bindings: `import ordterm`.

use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use ordterm_core::oracle::closure::{closure_equivalent_capped, DEFAULT_FRONTIER_CAP};
use ordterm_core::oracle::{ClosureVerdict, EfSolver, GameConfig};
use ordterm_core::{Kind, Term, TermSequence};

create_exception!(ordterm, ParseError, PyValueError);
create_exception!(ordterm, UnsupportedTailError, PyValueError);

fn parse_err(e: ordterm_core::ParseError) -> PyErr {
    ParseError::new_err(e.to_string())
}

/// A term: a singleton, a concatenation, or a shuffle.
#[pyclass(
    name = "Term",
    module = "ordterm",
    frozen,
    eq,
    ord,
    hash,
    from_py_object
)]
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct PyTerm(Term);

/// Anything accepted where a term is expected: a `Term` or its text.
#[derive(FromPyObject)]
enum TermLike {
    Term(PyTerm),
    Text(String),
}

impl TermLike {
    fn term(self) -> PyResult<Term> {
        match self {
            TermLike::Term(t) => Ok(t.0),
            TermLike::Text(s) => ordterm_core::parse(&s).map_err(parse_err),
        }
    }
}

#[pymethods]
impl PyTerm {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        ordterm_core::parse(text).map(PyTerm).map_err(parse_err)
    }

    #[staticmethod]
    fn singleton() -> Self {
        PyTerm(Term::singleton())
    }

    #[staticmethod]
    fn finite(n: usize) -> PyResult<Self> {
        if n == 0 {
            return Err(PyValueError::new_err(
                "a finite term has at least one point",
            ));
        }
        Ok(PyTerm(Term::finite(n)))
    }

    #[staticmethod]
    fn concat(parts: Vec<TermLike>) -> PyResult<Self> {
        if parts.is_empty() {
            return Err(PyValueError::new_err("concat needs at least one part"));
        }
        let parts = parts
            .into_iter()
            .map(TermLike::term)
            .collect::<PyResult<_>>()?;
        Ok(PyTerm(Term::concat(parts)))
    }

    #[staticmethod]
    fn shuffle(args: Vec<TermLike>) -> PyResult<Self> {
        if args.is_empty() {
            return Err(PyValueError::new_err("shuffle needs at least one argument"));
        }
        let args = args
            .into_iter()
            .map(TermLike::term)
            .collect::<PyResult<_>>()?;
        Ok(PyTerm(Term::shuffle(args)))
    }

    /// Builds a term from its JSON AST.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        serde_json::from_str(text)
            .map(PyTerm)
            .map_err(|e| PyValueError::new_err(e.to_string()))
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.0).expect("terms always serialize")
    }

    /// `"singleton"`, `"concat"` or `"shuffle"`.
    #[getter]
    fn kind(&self) -> &'static str {
        match self.0.kind() {
            Kind::Singleton => "singleton",
            Kind::Concat(_) => "concat",
            Kind::Shuffle(_) => "shuffle",
        }
    }

    #[getter]
    fn children(&self) -> Vec<PyTerm> {
        self.0.children().iter().cloned().map(PyTerm).collect()
    }

    #[getter]
    fn complexity(&self) -> u64 {
        self.0.complexity()
    }

    #[getter]
    fn depth(&self) -> u32 {
        self.0.depth()
    }

    #[getter]
    fn is_finite(&self) -> bool {
        self.0.is_finite()
    }

    fn normal_form(&self) -> PyTerm {
        PyTerm(ordterm_core::normal_form(&self.0))
    }

    fn is_normal_form(&self) -> bool {
        ordterm_core::is_normal_form(&self.0)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Term('{}')", self.0)
    }
}

#[pyfunction]
fn parse(text: &str) -> PyResult<PyTerm> {
    PyTerm::new(text)
}

#[pyfunction]
fn render(term: TermLike) -> PyResult<String> {
    Ok(term.term()?.to_string())
}

/// Returns the normal form, or `(normal_form, steps)` with `trace=True`,
/// each step a dict with `rule`, `path`, `before` and `after`.
#[pyfunction]
#[pyo3(signature = (term, trace = false))]
fn normalize<'py>(py: Python<'py>, term: TermLike, trace: bool) -> PyResult<Bound<'py, PyAny>> {
    let out = ordterm_core::normalize(&term.term()?);
    let nf = Bound::new(py, PyTerm(out.term))?.into_any();
    if !trace {
        return Ok(nf);
    }
    let steps = out
        .steps
        .iter()
        .map(|s| {
            let d = PyDict::new(py);
            d.set_item("rule", s.rule.to_string())?;
            d.set_item("path", s.path.clone())?;
            d.set_item("before", PyTerm(s.before.clone()))?;
            d.set_item("after", PyTerm(s.after.clone()))?;
            Ok(d)
        })
        .collect::<PyResult<Vec<_>>>()?;
    Ok((nf, steps).into_pyobject(py)?.into_any())
}

#[pyfunction]
fn equivalent(a: TermLike, b: TermLike) -> PyResult<bool> {
    Ok(ordterm_core::equivalent(&a.term()?, &b.term()?))
}

/// Normalizes a sequence written as `[t0; t1; ...]`, optionally ending in
/// `ones` or `repeat <term>`, and returns it in the same syntax.
#[pyfunction]
fn normalize_sequence(text: &str) -> PyResult<String> {
    let s: TermSequence = ordterm_core::parse_sequence(text).map_err(parse_err)?;
    ordterm_core::normalize_sequence(&s)
        .map(|n| n.to_string())
        .map_err(|e| UnsupportedTailError::new_err(e.to_string()))
}

/// Whether the two terms are linked by isomorphism rewrites that never
/// exceed `bound` (default: the larger complexity plus 4).
#[pyfunction]
#[pyo3(signature = (a, b, bound = None, frontier_cap = DEFAULT_FRONTIER_CAP))]
fn closure_equivalent(
    py: Python<'_>,
    a: TermLike,
    b: TermLike,
    bound: Option<u64>,
    frontier_cap: usize,
) -> PyResult<bool> {
    let (a, b) = (a.term()?, b.term()?);
    let bound = bound.unwrap_or(a.complexity().max(b.complexity()) + 4);
    py.detach(|| closure_equivalent_capped(&a, &b, bound, frontier_cap))
        .map(|v| v == ClosureVerdict::Connected)
        .map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

/// `"spoiler"` or `"duplicator"`: who wins the `rounds`-round game.
#[pyfunction]
#[pyo3(signature = (a, b, rounds, memo_cap = GameConfig::default().memo_cap))]
fn ef_winner(
    py: Python<'_>,
    a: TermLike,
    b: TermLike,
    rounds: u32,
    memo_cap: usize,
) -> PyResult<String> {
    let (a, b) = (a.term()?, b.term()?);
    let config = GameConfig {
        memo_cap,
        ..GameConfig::default()
    };
    py.detach(|| EfSolver::new(a, b, config).winner(rounds))
        .map(|w| w.to_string())
        .map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

#[pyfunction]
#[pyo3(signature = (seed, max_complexity = 12, max_depth = 3))]
fn gen_random(seed: u64, max_complexity: u64, max_depth: u32) -> PyTerm {
    PyTerm(ordterm_core::oracle::gen_random(
        seed,
        max_complexity,
        max_depth,
    ))
}

#[pymodule]
fn ordterm(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyTerm>()?;
    m.add("ParseError", m.py().get_type::<ParseError>())?;
    m.add(
        "UnsupportedTailError",
        m.py().get_type::<UnsupportedTailError>(),
    )?;
    m.add_function(wrap_pyfunction!(parse, m)?)?;
    m.add_function(wrap_pyfunction!(render, m)?)?;
    m.add_function(wrap_pyfunction!(normalize, m)?)?;
    m.add_function(wrap_pyfunction!(equivalent, m)?)?;
    m.add_function(wrap_pyfunction!(normalize_sequence, m)?)?;
    m.add_function(wrap_pyfunction!(closure_equivalent, m)?)?;
    m.add_function(wrap_pyfunction!(ef_winner, m)?)?;
    m.add_function(wrap_pyfunction!(gen_random, m)?)?;
    Ok(())
}
