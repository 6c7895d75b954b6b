//! Python bindings. Structured values (labelings, moves, reports) cross the
//! boundary as plain Python objects through their JSON schema.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyString;
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::Value;

use crossed_kuperberg::diagram::{apply_move, connected_sum_default};
use crossed_kuperberg::invariant::{compute_invariant, kuperberg as kuperberg_value};
use crossed_kuperberg::labeling::{enumerate_labelings, gauge_act, orbit_classes};
use crossed_kuperberg::{
    ChiLabeling, FieldDescriptor, FiniteGroup, GaugeElement, HeegaardDiagram as Diagram,
    HopfChiCoalgebra as Hopf, MoveDescriptor, Scalar,
};

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn budget() -> u128 {
    std::env::var("CK_BUDGET")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(10_000_000)
}

/// A Python object (or a JSON string) as a JSON value.
fn to_value(obj: &Bound<'_, PyAny>) -> PyResult<Value> {
    let text: String = if obj.is_instance_of::<PyString>() {
        obj.extract()?
    } else {
        obj.py()
            .import("json")?
            .call_method1("dumps", (obj,))?
            .extract()?
    };
    serde_json::from_str(&text).map_err(err)
}

fn from_value<T>(obj: &Bound<'_, PyAny>) -> PyResult<T>
where
    T: DeserializeOwned,
{
    serde_json::from_value(to_value(obj)?).map_err(err)
}

fn to_py<'py>(py: Python<'py>, v: &impl Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(v).map_err(err)?;
    py.import("json")?.call_method1("loads", (text,))
}

fn field(p: Option<u64>) -> PyResult<FieldDescriptor> {
    match p {
        None => Ok(FieldDescriptor::Rationals),
        Some(p) => FieldDescriptor::prime(p).map_err(err),
    }
}

/// A Heegaard diagram with upper and lower circles.
#[pyclass(
    name = "HeegaardDiagram",
    module = "crossed_kuperberg_py",
    frozen,
    skip_from_py_object
)]
#[derive(Clone)]
struct PyDiagram(Diagram);

#[pymethods]
impl PyDiagram {
    #[staticmethod]
    fn lens(p: u32, q: u32) -> PyResult<Self> {
        Diagram::lens(p, q).map(Self).map_err(err)
    }

    #[staticmethod]
    fn poincare() -> Self {
        Self(Diagram::poincare())
    }

    #[staticmethod]
    fn s3() -> Self {
        Self(Diagram::s3())
    }

    #[staticmethod]
    fn from_json(obj: &Bound<'_, PyAny>) -> PyResult<Self> {
        from_value(obj).map(Self)
    }

    fn to_json<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.0)
    }

    /// Violations as `(rule, detail)` pairs; empty when valid.
    fn validate(&self) -> Vec<(String, String)> {
        self.0
            .validate()
            .into_iter()
            .map(|v| (v.axiom, v.detail))
            .collect()
    }

    fn is_valid(&self) -> bool {
        self.0.is_valid()
    }

    #[getter]
    fn genus(&self) -> usize {
        self.0.uppers.len()
    }

    fn reverse_orientation(&self) -> Self {
        Self(self.0.reverse_orientation())
    }

    /// Connected sum; colliding ids of `other` get a `#2` suffix.
    fn connected_sum(&self, other: &Self) -> PyResult<Self> {
        connected_sum_default(&self.0, &other.0)
            .map(Self)
            .map_err(err)
    }

    /// Applies one move; returns the new diagram and labeling.
    fn apply_move<'py>(
        &self,
        py: Python<'py>,
        labeling: &Bound<'py, PyAny>,
        xmod: &PyCrossedModule,
        move_: &Bound<'py, PyAny>,
    ) -> PyResult<(Self, Bound<'py, PyAny>)> {
        let lab: ChiLabeling = from_value(labeling)?;
        let mv: MoveDescriptor = from_value(move_)?;
        let (d, l) = apply_move(&self.0, &lab, &xmod.0, &mv).map_err(err)?;
        Ok((Self(d), to_py(py, &l)?))
    }

    fn __repr__(&self) -> String {
        format!(
            "HeegaardDiagram(genus={}, lowers={}, points={})",
            self.0.uppers.len(),
            self.0.lowers.len(),
            self.0.point_count()
        )
    }
}

/// A finite crossed module `χ: E → H`.
#[pyclass(
    name = "CrossedModule",
    module = "crossed_kuperberg_py",
    frozen,
    skip_from_py_object
)]
#[derive(Clone)]
struct PyCrossedModule(crossed_kuperberg::CrossedModule);

#[pymethods]
impl PyCrossedModule {
    /// `ℤ/4 → ℤ/2`, the zero map, with the generator of `ℤ/2` acting by negation.
    #[staticmethod]
    fn z4_to_z2() -> Self {
        Self(crossed_kuperberg::CrossedModule::z4_to_z2())
    }

    /// `1 → ℤ/n`.
    #[staticmethod]
    fn trivial_kernel(n: usize) -> Self {
        Self(crossed_kuperberg::CrossedModule::trivial_kernel(
            FiniteGroup::cyclic(n),
        ))
    }

    /// `ℤ/n → 1`.
    #[staticmethod]
    fn to_trivial(n: usize) -> PyResult<Self> {
        crossed_kuperberg::CrossedModule::to_trivial(FiniteGroup::cyclic(n))
            .map(Self)
            .map_err(err)
    }

    #[staticmethod]
    fn from_json(obj: &Bound<'_, PyAny>) -> PyResult<Self> {
        from_value(obj).map(Self)
    }

    fn to_json<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.0)
    }

    /// Violated axioms as `(axiom, detail)` pairs; empty when valid.
    fn check(&self) -> Vec<(String, String)> {
        self.0
            .check()
            .into_iter()
            .map(|v| (v.axiom, v.detail))
            .collect()
    }

    #[getter]
    fn order_e(&self) -> usize {
        self.0.e().order()
    }

    #[getter]
    fn order_h(&self) -> usize {
        self.0.h().order()
    }

    fn __repr__(&self) -> String {
        format!(
            "CrossedModule(|E|={}, |H|={})",
            self.0.e().order(),
            self.0.h().order()
        )
    }
}

/// A finite-type Hopf χ-coalgebra given by structure constants.
#[pyclass(
    name = "HopfChiCoalgebra",
    module = "crossed_kuperberg_py",
    frozen,
    skip_from_py_object
)]
#[derive(Clone)]
struct PyHopf(Hopf);

#[pymethods]
impl PyHopf {
    /// The 4+4-dimensional example over `ℤ/4 → ℤ/2`; `p` selects `𝔽_p` instead of `ℚ`.
    #[staticmethod]
    #[pyo3(signature = (p=None))]
    fn kp4(p: Option<u64>) -> PyResult<Self> {
        Hopf::kp4(field(p)?).map(Self).map_err(err)
    }

    /// `𝕜[ℤ/n]` over `1 → 1`, or with `sign_twist` the twist `ω(g,e) = (−1)^{ge}` over `ℤ/n → 1`.
    #[staticmethod]
    #[pyo3(signature = (n, sign_twist=false, p=None))]
    fn group_algebra(n: usize, sign_twist: bool, p: Option<u64>) -> PyResult<Self> {
        if n == 0 {
            return Err(PyValueError::new_err("n must be positive"));
        }
        let f = field(p)?;
        let g = FiniteGroup::cyclic(n);
        if !sign_twist {
            return Ok(Self(Hopf::group_algebra_trivial(f, &g)));
        }
        let sign = |k: usize| Scalar::from_i64(f, if k.is_multiple_of(2) { 1 } else { -1 });
        let omega: Vec<Vec<Scalar>> = (0..n)
            .map(|x| (0..n).map(|e| sign(x * e)).collect())
            .collect();
        Hopf::group_algebra(f, &g, &g, &omega)
            .map(Self)
            .map_err(err)
    }

    #[staticmethod]
    fn from_json(obj: &Bound<'_, PyAny>) -> PyResult<Self> {
        Hopf::from_json(&to_value(obj)?).map(Self).map_err(err)
    }

    fn to_json<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.0.to_json())
    }

    #[getter]
    fn xmod(&self) -> PyCrossedModule {
        PyCrossedModule(self.0.xmod.clone())
    }

    #[getter]
    fn dims(&self) -> Vec<usize> {
        self.0.dims.clone()
    }

    /// Violated axioms as `(axiom, detail)` pairs; empty when valid.
    fn check_axioms(&self) -> PyResult<Vec<(String, String)>> {
        let v = self.0.check_axioms().map_err(err)?;
        Ok(v.into_iter().map(|v| (v.axiom, v.detail)).collect())
    }

    /// `{"Lambda": [...], "lambda": [[...], ...]}` with coefficients rendered as in the CLI.
    fn integrals<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let ints = self.0.compute_integrals().map_err(err)?;
        to_py(py, &ints.to_json())
    }

    fn opposite(&self) -> PyResult<Self> {
        self.0.opposite().map(Self).map_err(err)
    }

    fn coopposite(&self) -> PyResult<Self> {
        self.0.coopposite().map(Self).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!(
            "HopfChiCoalgebra(field={}, dims={:?})",
            self.0.field, self.0.dims
        )
    }
}

/// Every χ-labeling of `diagram`, as dicts `{"alpha": ..., "beta": ...}`.
#[pyfunction]
fn labelings<'py>(
    py: Python<'py>,
    diagram: &PyDiagram,
    xmod: &PyCrossedModule,
) -> PyResult<Bound<'py, PyAny>> {
    let labs = enumerate_labelings(&diagram.0, &xmod.0, budget()).map_err(err)?;
    to_py(py, &labs)
}

/// Gauge orbits as `(representative, size)` pairs, ordered by representative.
#[pyfunction]
fn orbits<'py>(
    py: Python<'py>,
    diagram: &PyDiagram,
    xmod: &PyCrossedModule,
) -> PyResult<Vec<(Bound<'py, PyAny>, usize)>> {
    let labs = enumerate_labelings(&diagram.0, &xmod.0, budget()).map_err(err)?;
    let classes = orbit_classes(&labs, &diagram.0, &xmod.0).map_err(err)?;
    classes
        .into_iter()
        .map(|c| Ok((to_py(py, &c.representative)?, c.size)))
        .collect()
}

/// The gauge element `(a, d)` applied to a labeling.
#[pyfunction]
fn gauge<'py>(
    py: Python<'py>,
    element: &Bound<'py, PyAny>,
    labeling: &Bound<'py, PyAny>,
    diagram: &PyDiagram,
    xmod: &PyCrossedModule,
) -> PyResult<Bound<'py, PyAny>> {
    let g: GaugeElement = from_value(element)?;
    let lab: ChiLabeling = from_value(labeling)?;
    to_py(py, &gauge_act(&g, &lab, &diagram.0, &xmod.0).map_err(err)?)
}

/// `K_A(M, g)` rendered as a string (`"n/d"` over `ℚ`, a residue over `𝔽_p`).
#[pyfunction]
fn invariant(
    py: Python<'_>,
    diagram: &PyDiagram,
    labeling: &Bound<'_, PyAny>,
    hopf: &PyHopf,
) -> PyResult<String> {
    let lab: ChiLabeling = from_value(labeling)?;
    let (d, a) = (diagram.0.clone(), hopf.0.clone());
    let v = py
        .detach(move || compute_invariant(&d, &lab, &a))
        .map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    Ok(v.value.render())
}

/// The invariant with the trivial labeling; requires a Hopf algebra over `1 → 1`.
#[pyfunction]
fn kuperberg(py: Python<'_>, diagram: &PyDiagram, hopf: &PyHopf) -> PyResult<String> {
    let (d, a) = (diagram.0.clone(), hopf.0.clone());
    let v = py
        .detach(move || kuperberg_value(&d, &a))
        .map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    Ok(v.value.render())
}

#[pymodule]
fn crossed_kuperberg_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDiagram>()?;
    m.add_class::<PyCrossedModule>()?;
    m.add_class::<PyHopf>()?;
    m.add_function(wrap_pyfunction!(labelings, m)?)?;
    m.add_function(wrap_pyfunction!(orbits, m)?)?;
    m.add_function(wrap_pyfunction!(gauge, m)?)?;
    m.add_function(wrap_pyfunction!(invariant, m)?)?;
    m.add_function(wrap_pyfunction!(kuperberg, m)?)?;
    Ok(())
}
