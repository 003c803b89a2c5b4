//! Python bindings: build fragments, query them, run suites.
//!
//! Build with `--features extension-module` to get an importable module.

use pyo3::exceptions::{PyKeyError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use ::wandset as ws;
use ws::formula::{check_formulas, eval, fragment_model, parse, Signature};
use ws::io::{export_fragment, import_fragment};
use ws::{Caps, Error, Fragment, ObjKind, Report, SetQuery};

fn err(e: Error) -> PyErr {
    match e {
        Error::UnknownSpec(_) => PyKeyError::new_err(e.to_string()),
        Error::ParseError { .. } | Error::SignatureError(_) | Error::Data(_) => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn report_json(r: &Report) -> String {
    serde_json::to_string(r).expect("reports serialize")
}

/// A finite fragment of a wand/set universe.
#[pyclass(unsendable, name = "Universe")]
pub struct Universe {
    f: Fragment,
}

#[pymethods]
impl Universe {
    #[getter]
    pub fn spec(&self) -> String {
        self.f.spec().name()
    }

    #[getter]
    pub fn depth(&self) -> usize {
        self.f.depth()
    }

    pub fn __len__(&self) -> usize {
        self.f.len()
    }

    pub fn __repr__(&self) -> String {
        format!("Universe({}@{}, {} objects)", self.f.spec().name(), self.f.depth(), self.f.len())
    }

    /// Cumulative object counts before each stage.
    pub fn stage_counts(&self) -> Vec<usize> {
        (0..=self.f.depth()).map(|a| self.f.count_before(a)).collect()
    }

    /// Object id for a numeric id, brace notation or `*w(...)`.
    pub fn resolve(&self, r: &str) -> PyResult<usize> {
        self.f.resolve_ref(r).map_err(err)
    }

    pub fn render(&self, id: usize) -> PyResult<String> {
        self.check(id)?;
        Ok(self.f.render(id))
    }

    pub fn ordrank(&self, id: usize) -> PyResult<usize> {
        self.check(id)?;
        Ok(self.f.obj(id).ordrank)
    }

    pub fn is_bland(&self, id: usize) -> PyResult<bool> {
        self.check(id)?;
        Ok(matches!(self.f.obj(id).kind, ObjKind::Bland(_)))
    }

    pub fn member(&self, x: usize, a: usize) -> PyResult<bool> {
        self.check(x)?;
        self.check(a)?;
        Ok(self.f.is_bland(a) && self.f.members(a).binary_search(&x).is_ok())
    }

    /// `None` when the wand does not apply.
    pub fn tap(&self, w: usize, a: usize) -> PyResult<Option<usize>> {
        self.check(a)?;
        self.f.tap(w, a).map_err(err)
    }

    pub fn decompose(&self, a: usize) -> PyResult<(usize, Vec<usize>)> {
        self.check(a)?;
        Ok(self.f.decompose(a))
    }

    /// Truth of a sentence, or of a formula under `env`, in the WS structure.
    #[pyo3(signature = (formula, env = Vec::new()))]
    pub fn eval(&self, formula: &str, env: Vec<(String, usize)>) -> PyResult<bool> {
        let g = parse(formula).map_err(err)?;
        let m = fragment_model(&self.f, Signature::Ws).map_err(err)?;
        let env: Vec<(&str, usize)> = env.iter().map(|(n, x)| (n.as_str(), *x)).collect();
        eval(m.as_ref(), &g, &env).map_err(err)
    }

    /// Run the core or formula suite; the report comes back as JSON text.
    pub fn verify(&self, suite: &str) -> PyResult<String> {
        let r = match suite {
            "core" => ws::suites::check_core(&self.f),
            "formula" => check_formulas(&self.f).map_err(err)?,
            _ => return Err(PyValueError::new_err(format!("unknown suite `{suite}`"))),
        };
        Ok(report_json(&r))
    }

    pub fn export(&self) -> String {
        export_fragment(&self.f)
    }
}

impl Universe {
    pub fn fragment(&self) -> &Fragment {
        &self.f
    }

    fn check(&self, id: usize) -> PyResult<()> {
        if id < self.f.len() {
            Ok(())
        } else {
            Err(PyValueError::new_err(format!("no object with id {id}")))
        }
    }
}

/// Build the fragment of `depth` stages for a registered spec.
#[pyfunction]
#[pyo3(signature = (spec, depth, max_objects = None))]
pub fn build(spec: &str, depth: usize, max_objects: Option<usize>) -> PyResult<Universe> {
    let s = ws::spec_by_name(spec).map_err(err)?;
    let caps = max_objects.map(Caps::exhaustive).unwrap_or_default();
    Ok(Universe {
        f: ws::build(s, depth, caps).map_err(err)?,
    })
}

/// Read a universe file's text.
#[pyfunction]
pub fn load(text: &str) -> PyResult<Universe> {
    Ok(Universe {
        f: import_fragment(text).map_err(err)?,
    })
}

#[pyfunction]
pub fn shipped_specs() -> Vec<&'static str> {
    ws::wandspec::SHIPPED_SPECS.to_vec()
}

#[pymodule(name = "wandset")]
fn wandset_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Universe>()?;
    m.add_function(wrap_pyfunction!(build, m)?)?;
    m.add_function(wrap_pyfunction!(load, m)?)?;
    m.add_function(wrap_pyfunction!(shipped_specs, m)?)?;
    Ok(())
}
