//! Python bindings: groups, filter banks, crystal models and sampling.
//!
//! Signals are plain lists of complex numbers indexed like the Rust side
//! (`index = n·|H| + h` on `G`, fine-grid site order for crystal states).

use std::sync::Arc;

use groupfb::linalg::{CMat, CVec};
use groupfb::polyphase::FieldKind;
use groupfb::{
    CrystalModel, CrystalSpec, Error, GElem, GSignal, GroupSpec, NSignal, PolyphaseField, Probes,
    ReconstructionKit, SamplingProblem, Tolerances, C64,
};
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde::Serialize;

create_exception!(groupfb, SamplesInsufficient, PyValueError);

fn py_err(e: Error) -> PyErr {
    if e.is_rejection() {
        SamplesInsufficient::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

fn to_py<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn tolerances(tol_pr: f64, tol_frame: f64) -> PyResult<Tolerances> {
    if !(tol_pr > 0.0 && tol_frame > 0.0) {
        return Err(PyValueError::new_err("tolerances must be positive"));
    }
    Ok(Tolerances {
        pr: tol_pr,
        frame: tol_frame,
    })
}

fn signals(group: &Arc<GroupSpec>, filters: Vec<Vec<C64>>) -> PyResult<Vec<GSignal>> {
    filters
        .into_iter()
        .map(|v| GSignal::new(Arc::clone(group), v).map_err(py_err))
        .collect()
}

fn values(filters: &[GSignal]) -> Vec<Vec<C64>> {
    filters.iter().map(|f| f.values().to_vec()).collect()
}

fn check_dim(what: &'static str, expected: usize, found: usize) -> PyResult<()> {
    if expected != found {
        return Err(py_err(Error::DimensionMismatch {
            what,
            expected,
            found,
        }));
    }
    Ok(())
}

/// Semi-direct product `N ⋊ H`.
#[pyclass(frozen, module = "groupfb")]
struct Group {
    inner: Arc<GroupSpec>,
}

#[pymethods]
impl Group {
    /// `Z_s ⋊ Z_2` with the inversion action.
    #[staticmethod]
    fn dihedral(s: usize) -> PyResult<Self> {
        Ok(Self {
            inner: Arc::new(GroupSpec::dihedral(s).map_err(py_err)?),
        })
    }

    /// Same JSON as `groupfb group validate --spec`.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self {
            inner: groupfb::io::parse_group(text).map_err(py_err)?.group,
        })
    }

    #[getter]
    fn moduli(&self) -> Vec<usize> {
        self.inner.n().moduli().to_vec()
    }

    #[getter]
    fn order(&self) -> usize {
        self.inner.order()
    }

    #[getter]
    fn order_n(&self) -> usize {
        self.inner.order_n()
    }

    #[getter]
    fn order_h(&self) -> usize {
        self.inner.order_h()
    }

    fn index(&self, g: (usize, usize)) -> PyResult<usize> {
        let g = GElem::new(g.0, g.1);
        self.inner.checked_inv(g).map_err(py_err)?;
        Ok(self.inner.index(g))
    }

    fn mul(&self, a: (usize, usize), b: (usize, usize)) -> PyResult<(usize, usize)> {
        let p = self
            .inner
            .checked_mul(GElem::new(a.0, a.1), GElem::new(b.0, b.1))
            .map_err(py_err)?;
        Ok((p.n, p.h))
    }

    fn inv(&self, g: (usize, usize)) -> PyResult<(usize, usize)> {
        let i = self.inner.checked_inv(GElem::new(g.0, g.1)).map_err(py_err)?;
        Ok((i.n, i.h))
    }

    fn verify_axioms<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.inner.verify_axioms().map_err(py_err)?)
    }

    fn delta_bank(&self) -> Vec<Vec<C64>> {
        values(&groupfb::delta_bank(&self.inner))
    }

    fn __repr__(&self) -> String {
        format!(
            "Group(moduli={:?}, order_h={})",
            self.inner.n().moduli(),
            self.inner.order_h()
        )
    }
}

/// Subband signals and output of one analysis/synthesis pass.
#[pyfunction]
#[pyo3(signature = (group, alpha, analysis, synthesis, polyphase = false))]
fn run_filterbank(
    group: &Group,
    alpha: Vec<C64>,
    analysis: Vec<Vec<C64>>,
    synthesis: Vec<Vec<C64>>,
    polyphase: bool,
) -> PyResult<(Vec<Vec<C64>>, Vec<C64>)> {
    let g = &group.inner;
    let alpha = GSignal::new(Arc::clone(g), alpha).map_err(py_err)?;
    let (a, s) = (signals(g, analysis)?, signals(g, synthesis)?);
    let run = if polyphase {
        groupfb::run_filterbank_polyphase(&alpha, &a, &s)
    } else {
        groupfb::run_filterbank(&alpha, &a, &s)
    }
    .map_err(py_err)?;
    let coefficients = run.coefficients.iter().map(|c| c.values().to_vec()).collect();
    Ok((coefficients, run.output.into_values()))
}

#[pyfunction]
#[pyo3(signature = (group, analysis, synthesis, tol_pr = 1e-10, tol_frame = 1e-9))]
fn verify_pr<'py>(
    py: Python<'py>,
    group: &Group,
    analysis: Vec<Vec<C64>>,
    synthesis: Vec<Vec<C64>>,
    tol_pr: f64,
    tol_frame: f64,
) -> PyResult<Bound<'py, PyAny>> {
    let tol = tolerances(tol_pr, tol_frame)?;
    let (a, s) = (signals(&group.inner, analysis)?, signals(&group.inner, synthesis)?);
    to_py(py, &groupfb::verify_pr(&a, &s, &tol).map_err(py_err)?)
}

/// Frame report of the translates `{T_n f_k}`.
#[pyfunction]
#[pyo3(signature = (group, generators, tol_pr = 1e-10, tol_frame = 1e-9))]
fn frame_bounds<'py>(
    py: Python<'py>,
    group: &Group,
    generators: Vec<Vec<C64>>,
    tol_pr: f64,
    tol_frame: f64,
) -> PyResult<Bound<'py, PyAny>> {
    let tol = tolerances(tol_pr, tol_frame)?;
    let f = signals(&group.inner, generators)?;
    to_py(py, &groupfb::frame_bounds(&f, &tol).map_err(py_err)?)
}

#[pyfunction]
#[pyo3(signature = (group, f, g, tol_pr = 1e-10, tol_frame = 1e-9))]
fn classify_pair<'py>(
    py: Python<'py>,
    group: &Group,
    f: Vec<Vec<C64>>,
    g: Vec<Vec<C64>>,
    tol_pr: f64,
    tol_frame: f64,
) -> PyResult<Bound<'py, PyAny>> {
    let tol = tolerances(tol_pr, tol_frame)?;
    let (f, g) = (signals(&group.inner, f)?, signals(&group.inner, g)?);
    to_py(py, &groupfb::classify_pair(&f, &g, &tol).map_err(py_err)?)
}

/// Synthesis filters of the pseudo-inverse dual.
#[pyfunction]
#[pyo3(signature = (group, analysis, tol_pr = 1e-10, tol_frame = 1e-9))]
fn design_dual(
    group: &Group,
    analysis: Vec<Vec<C64>>,
    tol_pr: f64,
    tol_frame: f64,
) -> PyResult<Vec<Vec<C64>>> {
    let tol = tolerances(tol_pr, tol_frame)?;
    let a = signals(&group.inner, analysis)?;
    Ok(values(&groupfb::design_dual_pseudoinverse(&a, &tol).map_err(py_err)?))
}

/// Dual family member for the free field `u[γ]` (each `L × K`).
#[pyfunction]
#[pyo3(signature = (group, analysis, u, tol_pr = 1e-10, tol_frame = 1e-9))]
fn dual_family(
    group: &Group,
    analysis: Vec<Vec<C64>>,
    u: Vec<Vec<Vec<C64>>>,
    tol_pr: f64,
    tol_frame: f64,
) -> PyResult<Vec<Vec<C64>>> {
    let tol = tolerances(tol_pr, tol_frame)?;
    let g = &group.inner;
    let a = signals(g, analysis)?;
    let (l, k) = (g.order_h(), a.len());
    check_dim("free parameter characters", g.order_n(), u.len())?;
    let mut mats = Vec::with_capacity(u.len());
    for m in &u {
        check_dim("free parameter rows", l, m.len())?;
        for row in m {
            check_dim("free parameter columns", k, row.len())?;
        }
        mats.push(CMat::from_row_iterator(l, k, m.iter().flatten().copied()));
    }
    let field = PolyphaseField::new(Arc::clone(g), FieldKind::Other, l, k, mats).map_err(py_err)?;
    Ok(values(&groupfb::dual_family(&a, &field, &tol).map_err(py_err)?))
}

/// Crystal symmetry model acting on a periodic grid.
#[pyclass(frozen, module = "groupfb")]
struct Crystal {
    inner: Arc<CrystalModel>,
}

#[pymethods]
impl Crystal {
    /// Reflection model in one dimension (lattice 2Z, period `q`).
    #[staticmethod]
    fn dihedral(q: usize) -> PyResult<Self> {
        Self::build(CrystalSpec::dihedral(q))
    }

    /// Quarter-turn rotations of the square lattice 2Z².
    #[staticmethod]
    fn square_rotations(q: usize) -> PyResult<Self> {
        Self::build(CrystalSpec::square_rotations(q))
    }

    /// Crystal spec JSON, bare or wrapped as `{"crystal": ...}`.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Self::build(groupfb::io::parse_crystal(text).map_err(py_err)?)
    }

    #[getter]
    fn group(&self) -> Group {
        Group {
            inner: Arc::clone(self.inner.group()),
        }
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn summary<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.inner.summary())
    }

    fn site_index(&self, point: Vec<i64>) -> PyResult<usize> {
        self.inner.site_index(&point).map_err(py_err)
    }

    fn site_point(&self, index: usize) -> PyResult<Vec<i64>> {
        if index >= self.inner.dim() {
            return Err(PyValueError::new_err(format!("site {index} outside 0..{}", self.inner.dim())));
        }
        Ok(self.inner.site_point(index))
    }

    #[pyo3(signature = (seed = 7))]
    fn default_generator(&self, seed: u64) -> Vec<C64> {
        self.inner.default_generator(seed).iter().copied().collect()
    }

    /// `U(g) v` for `g = (n, h)`.
    fn apply(&self, g: (usize, usize), v: Vec<C64>) -> PyResult<Vec<C64>> {
        check_dim("state length", self.inner.dim(), v.len())?;
        let g = GElem::new(g.0, g.1);
        self.inner.group().checked_inv(g).map_err(py_err)?;
        Ok(self.inner.rep().apply(g, &CVec::from_vec(v)).iter().copied().collect())
    }

    /// Sampling pipeline with `points` (pointwise, site indices) or `probes`
    /// (average); with neither, `k` default points are used.
    #[pyo3(signature = (generator = None, points = None, probes = None, k = None, seed = 7, tol_pr = 1e-10, tol_frame = 1e-9))]
    #[allow(clippy::too_many_arguments)]
    fn sampler(
        &self,
        generator: Option<Vec<C64>>,
        points: Option<Vec<usize>>,
        probes: Option<Vec<Vec<C64>>>,
        k: Option<usize>,
        seed: u64,
        tol_pr: f64,
        tol_frame: f64,
    ) -> PyResult<Sampler> {
        let tol = tolerances(tol_pr, tol_frame)?;
        let m = &self.inner;
        let generator = match generator {
            Some(v) => CVec::from_vec(v),
            None => m.default_generator(seed),
        };
        let probes = match (points, probes) {
            (Some(_), Some(_)) => return Err(PyValueError::new_err("give points or probes, not both")),
            (Some(ts), None) => Probes::Pointwise(ts),
            (None, Some(bs)) => Probes::Average(bs.into_iter().map(CVec::from_vec).collect()),
            (None, None) => Probes::Pointwise(m.default_points(k.unwrap_or(m.group().order_h()))),
        };
        let problem = SamplingProblem::new(Arc::clone(m.rep()), generator, probes, &tol).map_err(py_err)?;
        let kit = problem.build_reconstruction(None, &tol).map_err(py_err)?;
        Ok(Sampler { problem, kit })
    }

    /// Reconstruction experiment on random unit-norm coefficients.
    #[pyo3(signature = (mode = "average", k = None, trials = 100, seed = 7, tol_pr = 1e-10, tol_frame = 1e-9))]
    #[allow(clippy::too_many_arguments)]
    fn demo<'py>(
        &self,
        py: Python<'py>,
        mode: &str,
        k: Option<usize>,
        trials: usize,
        seed: u64,
        tol_pr: f64,
        tol_frame: f64,
    ) -> PyResult<Bound<'py, PyAny>> {
        let tol = tolerances(tol_pr, tol_frame)?;
        let m = Arc::clone(&self.inner);
        let mode = mode.to_owned();
        let report = py.detach(move || match mode.as_str() {
            "average" => Ok(m.demo_average(k, trials, seed, &tol)),
            "pointwise" => Ok(m.demo_pointwise(k, trials, seed, &tol)),
            other => Err(other.to_owned()),
        });
        let report = report
            .map_err(|m| PyValueError::new_err(format!("unknown mode {m:?}")))?
            .map_err(py_err)?;
        to_py(py, &report)
    }
}

impl Crystal {
    fn build(spec: CrystalSpec) -> PyResult<Self> {
        Ok(Self {
            inner: Arc::new(CrystalModel::new(spec).map_err(py_err)?),
        })
    }
}

/// A sampling problem together with its reconstruction filters.
#[pyclass(frozen, module = "groupfb")]
struct Sampler {
    problem: SamplingProblem,
    kit: ReconstructionKit,
}

#[pymethods]
impl Sampler {
    #[getter]
    fn channels(&self) -> usize {
        self.problem.channels()
    }

    /// `(λ_min, λ_max)` of the orbit Gram matrix.
    #[getter]
    fn riesz_bounds(&self) -> (f64, f64) {
        let b = self.problem.riesz_bounds();
        (b.lambda_min, b.lambda_max)
    }

    /// `(A_H, B_H)` of the sampling filter bank.
    #[getter]
    fn bounds(&self) -> (f64, f64) {
        (self.kit.bounds.a_h, self.kit.bounds.b_h)
    }

    #[getter]
    fn analysis_filters(&self) -> Vec<Vec<C64>> {
        values(self.problem.filters())
    }

    #[getter]
    fn synthesis_filters(&self) -> Vec<Vec<C64>> {
        values(&self.kit.synthesis)
    }

    /// Reconstruction vectors `c_k`.
    #[getter]
    fn vectors(&self) -> Vec<Vec<C64>> {
        self.kit.vectors.iter().map(|c| c.iter().copied().collect()).collect()
    }

    /// `Σ_g α(g) U(g) a`.
    fn synthesize(&self, alpha: Vec<C64>) -> PyResult<Vec<C64>> {
        let alpha = GSignal::new(Arc::clone(self.problem.group()), alpha).map_err(py_err)?;
        Ok(self.problem.synthesize(&alpha).map_err(py_err)?.iter().copied().collect())
    }

    /// One sample sequence on `N` per channel.
    fn samples(&self, x: Vec<C64>) -> PyResult<Vec<Vec<C64>>> {
        check_dim("state length", self.problem.rep().dim(), x.len())?;
        let s = self.problem.samples(&CVec::from_vec(x)).map_err(py_err)?;
        Ok(s.into_iter().map(NSignal::into_values).collect())
    }

    fn reconstruct(&self, samples: Vec<Vec<C64>>) -> PyResult<Vec<C64>> {
        let n = self.problem.group().n();
        let s = samples
            .into_iter()
            .map(|v| NSignal::new(n.clone(), v))
            .collect::<groupfb::Result<Vec<_>>>()
            .map_err(py_err)?;
        Ok(self.problem.reconstruct(&s, &self.kit).map_err(py_err)?.iter().copied().collect())
    }

    /// `max |L_k c_{k'}(n) − δ_{k,k'} δ_{n,0}|` (meaningful for `K = L`).
    fn interpolation_deviation(&self) -> PyResult<f64> {
        self.problem.interpolation_deviation(&self.kit).map_err(py_err)
    }
}

#[pymodule]
#[pyo3(name = "groupfb")]
fn groupfb_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("SamplesInsufficient", m.py().get_type::<SamplesInsufficient>())?;
    m.add_class::<Group>()?;
    m.add_class::<Crystal>()?;
    m.add_class::<Sampler>()?;
    m.add_function(wrap_pyfunction!(run_filterbank, m)?)?;
    m.add_function(wrap_pyfunction!(verify_pr, m)?)?;
    m.add_function(wrap_pyfunction!(frame_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(classify_pair, m)?)?;
    m.add_function(wrap_pyfunction!(design_dual, m)?)?;
    m.add_function(wrap_pyfunction!(dual_family, m)?)?;
    Ok(())
}
