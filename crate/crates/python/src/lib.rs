//! Python bindings for `pursuit-core`.
//!
//! Build with `cargo build -p pursuit-py --release --features extension-module`
//! and copy `libpursuit_py.so` to `pursuit_py.so` somewhere on `sys.path`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use pursuit_core::cli::certify as certify_profile;
use pursuit_core::dynamics::{exact_step as core_exact_step, rk4_step as core_rk4_step, SegmentInput};
use pursuit_core::model::L2State;
use pursuit_core::pursuit_time::{self, PursuitTimes};
use pursuit_core::sim::CaptureReport;
use pursuit_core::{
    admissibility_audit, build_strategy, closed_form_under_strategy, run_game, EvaderPolicy, GameError,
    GameParams, LambdaSpec, RunOptions, TimeGrid, Z0Spec,
};

fn err(e: GameError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Map a policy name plus its keyword arguments to a core policy.
pub fn parse_policy(name: &str, seed: u64, direction: Option<Vec<f64>>, scale: Option<f64>, sigma: f64) -> Result<EvaderPolicy, String> {
    Ok(match name {
        "zero" => EvaderPolicy::Zero,
        "radial_outward" => EvaderPolicy::RadialOutward,
        "piecewise_random" => EvaderPolicy::PiecewiseRandom { seed },
        "constant_direction" => EvaderPolicy::ConstantDirection {
            direction: direction.ok_or("constant_direction needs `direction`")?,
            scale: scale.unwrap_or(sigma),
        },
        other => return Err(format!("unknown evader policy {other:?}")),
    })
}

/// A validated game: rates, initial state and control budgets.
#[pyclass(name = "Game", frozen, module = "pursuit_py", skip_from_py_object)]
#[derive(Clone)]
pub struct PyGame {
    inner: pursuit_core::Game,
}

#[pymethods]
impl PyGame {
    /// Finite game with explicit rates and initial coordinates.
    #[new]
    fn new(lambdas: Vec<f64>, z0: Vec<f64>, rho: f64, sigma: f64) -> PyResult<Self> {
        let inner = GameParams::explicit(lambdas, z0, rho, sigma).validate().map_err(err)?;
        Ok(Self { inner })
    }

    /// `lambda_i = a i + b` for `i <= n`, `z_i = scale / i`; with `tail` the
    /// coordinates beyond `n` are kept as a norm bound.
    #[staticmethod]
    #[pyo3(signature = (a, b, n, rho, sigma, scale = 1.0, tail = false))]
    fn linear(a: f64, b: f64, n: usize, rho: f64, sigma: f64, scale: f64, tail: bool) -> PyResult<Self> {
        let params = GameParams {
            lambdas: LambdaSpec::Linear { a, b, n },
            z0: Z0Spec::Reciprocal { scale, n, tail },
            rho,
            sigma,
        };
        Ok(Self { inner: params.validate().map_err(err)? })
    }

    /// The demo scenario: `lambda_i = i`, `z_i = 1/i`, `rho = 2`, `sigma = 1`.
    #[staticmethod]
    #[pyo3(signature = (n = 1000))]
    fn demo(n: usize) -> PyResult<Self> {
        Self::linear(1.0, 0.0, n, 2.0, 1.0, 1.0, false)
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn lambdas(&self) -> Vec<f64> {
        self.inner.lambdas.clone()
    }

    #[getter]
    fn z0(&self) -> Vec<f64> {
        self.inner.z0.coords.clone()
    }

    #[getter]
    fn z0_norm(&self) -> f64 {
        self.inner.z0_norm
    }

    #[getter]
    fn rho(&self) -> f64 {
        self.inner.rho()
    }

    #[getter]
    fn sigma(&self) -> f64 {
        self.inner.sigma()
    }

    fn times<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        times_dict(py, &pursuit_time::guaranteed_time(&self.inner))
    }

    /// Closed-form coordinate `i` (0-based) at time `t` under the pursuer strategy.
    fn closed_form(&self, i: usize, t: f64) -> PyResult<f64> {
        let s = build_strategy(&self.inner).map_err(err)?;
        let (l, z) = self
            .inner
            .lambdas
            .get(i)
            .zip(self.inner.z0.coords.get(i))
            .ok_or_else(|| PyValueError::new_err(format!("coordinate {i} out of range")))?;
        Ok(closed_form_under_strategy(&s, *l, *z, t))
    }

    /// Pursuer control at `t` against evader control `v`.
    fn pursuer_control(&self, t: f64, v: Vec<f64>) -> PyResult<Vec<f64>> {
        let s = build_strategy(&self.inner).map_err(err)?;
        Ok(s.pursuer_control(t, &v).map_err(err)?.coords)
    }

    /// Simulate the game and return the capture report plus trajectory rows.
    #[pyo3(signature = (policy = "piecewise_random", seed = 42, steps = 2000, horizon_factor = 1.05, direction = None, scale = None, eps = None))]
    #[allow(clippy::too_many_arguments)]
    fn run<'py>(
        &self,
        py: Python<'py>,
        policy: &str,
        seed: u64,
        steps: usize,
        horizon_factor: f64,
        direction: Option<Vec<f64>>,
        scale: Option<f64>,
        eps: Option<f64>,
    ) -> PyResult<Bound<'py, PyDict>> {
        let g = &self.inner;
        let policy = parse_policy(policy, seed, direction, scale, g.sigma()).map_err(PyValueError::new_err)?;
        let t = pursuit_time::guaranteed_time(g).guaranteed;
        let grid = TimeGrid::new(t * horizon_factor, steps).map_err(err)?;
        let run = py
            .detach(|| run_game(g, &policy, &grid, RunOptions { eps, sample_every: 1 }))
            .map_err(err)?;
        let d = report_dict(py, &run.report)?;
        d.set_item("admissible", admissibility_audit(&run.controls, g.rho(), g.sigma()).is_clean())?;
        d.set_item("t", run.samples.iter().map(|s| s.t).collect::<Vec<_>>())?;
        d.set_item("norm_z", run.samples.iter().map(|s| s.norm_z).collect::<Vec<_>>())?;
        d.set_item("final_state", run.final_state)?;
        Ok(d)
    }

    fn __repr__(&self) -> String {
        format!(
            "Game(dim={}, rho={}, sigma={}, z0_norm={})",
            self.inner.dim(),
            self.inner.rho(),
            self.inner.sigma(),
            self.inner.z0_norm
        )
    }
}

fn times_dict<'py>(py: Python<'py>, t: &PursuitTimes) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("per_coordinate", t.per_coordinate.clone())?;
    d.set_item("guaranteed", t.guaranteed)?;
    d.set_item("baseline", t.baseline)?;
    d.set_item("ratio", t.improvement_ratio())?;
    d.set_item("lambda_inf", t.lambda_inf)?;
    d.set_item("argmin_lambda_index", t.argmin_lambda_index)?;
    d.set_item("inf_attained", t.inf_attained)?;
    d.set_item("limit_regime", t.limit_regime)?;
    Ok(d)
}

fn report_dict<'py>(py: Python<'py>, r: &CaptureReport) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("captured", r.captured)?;
    d.set_item("captured_in_time", r.captured_in_time())?;
    d.set_item("capture_time", r.capture_time)?;
    d.set_item("holds_at_zero", r.holds_at_zero)?;
    d.set_item("residual_norm_at_t", r.residual_norm_at_t)?;
    d.set_item("tail_bound_at_t", r.tail_bound_at_t)?;
    d.set_item("guaranteed_t", r.guaranteed_t)?;
    d.set_item("baseline_t0", r.baseline_t0)?;
    d.set_item("eps", r.eps)?;
    d.set_item("h", r.h)?;
    d.set_item("max_norm_u", r.max_norm_u)?;
    d.set_item("max_norm_v", r.max_norm_v)?;
    Ok(d)
}

#[pyfunction]
#[pyo3(signature = (coords, tail_norm = 0.0))]
fn l2_norm(coords: Vec<f64>, tail_norm: f64) -> PyResult<f64> {
    Ok(L2State::new(coords, tail_norm).map_err(err)?.norm())
}

#[pyfunction]
fn coordinate_capture_time(lambda_i: f64, z0_norm: f64, rho: f64, sigma: f64) -> PyResult<f64> {
    pursuit_time::coordinate_capture_time(lambda_i, z0_norm, rho, sigma).map_err(err)
}

#[pyfunction]
fn guaranteed_time<'py>(py: Python<'py>, game: &PyGame) -> PyResult<Bound<'py, PyDict>> {
    times_dict(py, &pursuit_time::guaranteed_time(&game.inner))
}

#[pyfunction]
fn baseline_time(game: &PyGame) -> f64 {
    pursuit_time::baseline_time(&game.inner)
}

/// `[(x, f, g, g_prime), ...]` for the profile with ratio `c`.
#[pyfunction]
fn monotonicity_profile(c: f64, xs: Vec<f64>) -> PyResult<Vec<(f64, f64, f64, f64)>> {
    let p = pursuit_time::monotonicity_profile(c, &xs).map_err(err)?;
    Ok(p.into_iter().map(|q| (q.x, q.f, q.g, q.g_prime)).collect())
}

#[pyfunction]
fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    pursuit_time::log_grid(lo, hi, count)
}

/// Returns `(c, f_decreasing, g_negative, g_prime_negative)`.
#[pyfunction]
fn certify(c: f64, xs: Vec<f64>) -> PyResult<(f64, bool, bool, bool)> {
    let cert = certify_profile(c, &xs).map_err(|e| PyValueError::new_err(e.message))?;
    Ok((cert.c, cert.f_decreasing, cert.g_negative, cert.g_prime_negative))
}

#[pyfunction]
fn exact_step(lambda_i: f64, z: f64, w: f64, h: f64) -> PyResult<f64> {
    Ok(core_exact_step(&SegmentInput::new(lambda_i, z, w, h).map_err(err)?))
}

/// RK4 step with a constant control `w`.
#[pyfunction]
fn rk4_step(lambda_i: f64, z: f64, w: f64, h: f64) -> f64 {
    core_rk4_step(lambda_i, z, |_| w, h)
}

#[pymodule]
fn pursuit_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGame>()?;
    m.add_function(wrap_pyfunction!(l2_norm, m)?)?;
    m.add_function(wrap_pyfunction!(coordinate_capture_time, m)?)?;
    m.add_function(wrap_pyfunction!(guaranteed_time, m)?)?;
    m.add_function(wrap_pyfunction!(baseline_time, m)?)?;
    m.add_function(wrap_pyfunction!(monotonicity_profile, m)?)?;
    m.add_function(wrap_pyfunction!(log_grid, m)?)?;
    m.add_function(wrap_pyfunction!(certify, m)?)?;
    m.add_function(wrap_pyfunction!(exact_step, m)?)?;
    m.add_function(wrap_pyfunction!(rk4_step, m)?)?;
    Ok(())
}
