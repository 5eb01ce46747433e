//! Scenario configuration and the command implementations behind the
//! `pursuit` binary.
//!
//! Exit codes: 0 success, 2 invalid input or configuration, 3 horizon shorter
//! than the guaranteed time, 4 capture or certificate failure. A 4 means the
//! implementation disagrees with the capture theorem and is always a bug.

use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::GameError;
use crate::model::{GameParams, LambdaSpec, TimeGrid, Z0Spec};
use crate::pursuit_time::{guaranteed_time, log_grid, monotonicity_profile};
use crate::sim::{
    admissibility_audit, fmt_real, run_game, write_trajectory_csv, ControlSignal, EvaderPolicy,
    RunOptions,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Success = 0,
    Invalid = 2,
    HorizonTooShort = 3,
    CaptureFailure = 4,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub status: ExitStatus,
    pub message: String,
}

impl CliError {
    pub fn invalid(message: impl Into<String>) -> Self {
        Self {
            status: ExitStatus::Invalid,
            message: message.into(),
        }
    }

    pub fn capture_failure(message: impl Into<String>) -> Self {
        Self {
            status: ExitStatus::CaptureFailure,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<GameError> for CliError {
    fn from(e: GameError) -> Self {
        let status = match e {
            GameError::HorizonTooShort { .. } => ExitStatus::HorizonTooShort,
            _ => ExitStatus::Invalid,
        };
        Self {
            status,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        Self::invalid(format!("i/o error: {e}"))
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum EvaderSpec {
    Zero,
    ConstantDirection { direction: Vec<f64>, scale: f64 },
    PiecewiseRandom { seed: u64 },
    RadialOutward,
    /// Rows of comma-separated values, one per base grid step.
    Replay { path: PathBuf },
}

impl Default for EvaderSpec {
    fn default() -> Self {
        Self::PiecewiseRandom { seed: 42 }
    }
}

impl EvaderSpec {
    pub fn to_policy(&self) -> CliResult<EvaderPolicy> {
        Ok(match self {
            Self::Zero => EvaderPolicy::Zero,
            Self::ConstantDirection { direction, scale } => EvaderPolicy::ConstantDirection {
                direction: direction.clone(),
                scale: *scale,
            },
            Self::PiecewiseRandom { seed } => EvaderPolicy::PiecewiseRandom { seed: *seed },
            Self::RadialOutward => EvaderPolicy::RadialOutward,
            Self::Replay { path } => {
                let text = fs::read_to_string(path).map_err(|e| {
                    CliError::invalid(format!("cannot read replay file {}: {e}", path.display()))
                })?;
                EvaderPolicy::Replay(ControlSignal::parse_csv(&text)?)
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub steps: usize,
    /// Absolute horizon; when absent the horizon is `horizon_factor * T`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<f64>,
    #[serde(default = "default_horizon_factor")]
    pub horizon_factor: f64,
    /// Persist every k-th grid point to the trajectory CSV.
    #[serde(default = "default_sample_every")]
    pub sample_every: usize,
}

fn default_horizon_factor() -> f64 {
    1.05
}

fn default_sample_every() -> usize {
    10
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            steps: 2000,
            horizon: None,
            horizon_factor: default_horizon_factor(),
            sample_every: default_sample_every(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trajectory: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<PathBuf>,
    /// How many per-coordinate times `times` prints.
    #[serde(default = "default_show")]
    pub show_coordinates: usize,
}

fn default_show() -> usize {
    10
}

impl Default for OutputSpec {
    fn default() -> Self {
        Self {
            trajectory: None,
            sweep: None,
            show_coordinates: default_show(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParam {
    Rho,
    Sigma,
    /// `a` of a parametric rate family.
    LambdaA,
    /// `b` of the linear rate family.
    LambdaB,
    /// Truncation index of the rate family (and of a reciprocal `z0`).
    N,
}

impl SweepParam {
    pub fn name(self) -> &'static str {
        match self {
            Self::Rho => "rho",
            Self::Sigma => "sigma",
            Self::LambdaA => "lambda_a",
            Self::LambdaB => "lambda_b",
            Self::N => "n",
        }
    }
}

/// One sweep axis: either explicit `values` or `count` points from `start`
/// to `stop` (log-spaced with `log = true`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepAxis {
    pub param: SweepParam,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stop: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    #[serde(default)]
    pub log: bool,
}

impl SweepAxis {
    pub fn values(&self) -> CliResult<Vec<f64>> {
        let name = self.param.name();
        let values = match (&self.values, self.start, self.stop, self.count) {
            (Some(v), None, None, None) => v.clone(),
            (None, Some(a), Some(b), Some(n)) => {
                if self.log {
                    if !(a > 0.0 && b > 0.0) {
                        return Err(CliError::invalid(format!(
                            "sweep axis {name}: log range needs positive endpoints"
                        )));
                    }
                    log_grid(a, b, n)
                } else if n == 1 {
                    vec![a]
                } else {
                    (0..n)
                        .map(|k| if k + 1 == n { b } else { a + (b - a) * k as f64 / (n - 1) as f64 })
                        .collect()
                }
            }
            _ => {
                return Err(CliError::invalid(format!(
                    "sweep axis {name}: give either `values` or all of `start`, `stop`, `count`"
                )))
            }
        };
        if values.is_empty() {
            return Err(CliError::invalid(format!("sweep axis {name} is empty")));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(CliError::invalid(format!("sweep axis {name} has a non-finite value")));
        }
        Ok(values)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertifySpec {
    #[serde(default = "default_points")]
    pub points: usize,
    #[serde(default = "default_x_min")]
    pub x_min: f64,
    #[serde(default = "default_x_max")]
    pub x_max: f64,
    /// Explicit sample points; overrides the log grid.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xs: Option<Vec<f64>>,
    /// `c` for the profile; defaults to `||z0|| / (rho - sigma)` of the game.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
}

fn default_points() -> usize {
    200
}

fn default_x_min() -> f64 {
    1e-6
}

fn default_x_max() -> f64 {
    1e6
}

impl Default for CertifySpec {
    fn default() -> Self {
        Self {
            points: default_points(),
            x_min: default_x_min(),
            x_max: default_x_max(),
            xs: None,
            c: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub game: GameParams,
    #[serde(default)]
    pub evader: EvaderSpec,
    #[serde(default)]
    pub grid: GridSpec,
    /// Capture tolerance; defaults to `1e-9 ||z0||`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(default)]
    pub output: OutputSpec,
    #[serde(default)]
    pub certify: CertifySpec,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sweep: Vec<SweepAxis>,
}

impl ScenarioConfig {
    /// `lambda_i = i`, `z_i0 = 1/i`, `N = 1000`, `rho = 2`, `sigma = 1`
    /// against a random evader.
    pub fn demo() -> Self {
        Self {
            game: GameParams {
                lambdas: LambdaSpec::Linear {
                    a: 1.0,
                    b: 0.0,
                    n: 1000,
                },
                z0: Z0Spec::Reciprocal {
                    scale: 1.0,
                    n: 1000,
                    tail: false,
                },
                rho: 2.0,
                sigma: 1.0,
            },
            evader: EvaderSpec::default(),
            grid: GridSpec::default(),
            eps: None,
            output: OutputSpec::default(),
            certify: CertifySpec::default(),
            sweep: Vec::new(),
        }
    }

    pub fn from_toml(text: &str) -> CliResult<Self> {
        toml::from_str(text).map_err(|e| CliError::invalid(format!("bad config: {e}")))
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::invalid(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> CliResult<String> {
        toml::to_string(self).map_err(|e| CliError::invalid(format!("cannot serialize config: {e}")))
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(seed) = o.seed {
            if let EvaderSpec::PiecewiseRandom { seed: s } = &mut self.evader {
                *s = seed;
            }
        }
        if let Some(eps) = o.eps {
            self.eps = Some(eps);
        }
        if let Some(steps) = o.steps {
            self.grid.steps = steps;
        }
    }
}

/// Command-line values that override the config file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    /// Seed for the `piecewise_random` evader; ignored by other policies.
    pub seed: Option<u64>,
    pub eps: Option<f64>,
    pub steps: Option<usize>,
}

fn io_err(e: io::Error) -> CliError {
    CliError::from(e)
}

pub fn cmd_times(cfg: &ScenarioConfig, out: &mut dyn Write) -> CliResult<()> {
    let game = cfg.game.validate()?;
    let t = guaranteed_time(&game);
    let shown = cfg.output.show_coordinates.min(game.dim());
    (|| -> io::Result<()> {
        writeln!(out, "{:>10}  {:>24}  {:>24}", "i", "lambda_i", "T_i")?;
        for i in 0..shown {
            writeln!(out, "{:>10}  {:>24}  {:>24}", i + 1, fmt_real(game.lambdas[i]), fmt_real(t.per_coordinate[i]))?;
        }
        if shown < game.dim() {
            writeln!(out, "  ... {} of {} coordinates shown", shown, game.dim())?;
        }
        writeln!(out, "||z0||           = {}", fmt_real(game.z0_norm))?;
        writeln!(out, "lambda_inf       = {}", fmt_real(t.lambda_inf))?;
        writeln!(out, "argmin index     = {}", t.argmin_lambda_index)?;
        writeln!(out, "T                = {}", fmt_real(t.guaranteed))?;
        writeln!(out, "T0               = {}", fmt_real(t.baseline))?;
        writeln!(out, "T/T0             = {}", fmt_real(t.improvement_ratio()))?;
        writeln!(out, "inf attained     = {}", if t.inf_attained { "yes" } else { "no (unattained supremum; T is the lambda -> 0 limit)" })?;
        writeln!(out, "limit regime     = {}", if t.limit_regime { "yes" } else { "no" })?;
        Ok(())
    })()
    .map_err(io_err)
}

/// Runs one game; writes the trajectory CSV to `trajectory` (or the config's
/// output path) and a summary to `out`.
pub fn cmd_run(cfg: &ScenarioConfig, trajectory: Option<&Path>, out: &mut dyn Write) -> CliResult<()> {
    let game = cfg.game.validate()?;
    let times = guaranteed_time(&game);
    let horizon = cfg
        .grid
        .horizon
        .unwrap_or(cfg.grid.horizon_factor * times.guaranteed);
    let grid = TimeGrid::new(horizon, cfg.grid.steps)?;
    let policy = cfg.evader.to_policy()?;
    let opts = RunOptions {
        eps: cfg.eps,
        sample_every: cfg.grid.sample_every,
    };
    let run = run_game(&game, &policy, &grid, opts)?;
    let audit = admissibility_audit(&run.controls, game.rho(), game.sigma());

    if let Some(path) = trajectory.or(cfg.output.trajectory.as_deref()) {
        let file = fs::File::create(path)
            .map_err(|e| CliError::invalid(format!("cannot create {}: {e}", path.display())))?;
        write_trajectory_csv(&run.samples, io::BufWriter::new(file))?;
    }

    let r = &run.report;
    let opt = |t: Option<f64>| t.map(fmt_real).unwrap_or_else(|| "none".into());
    (|| -> io::Result<()> {
        writeln!(out, "evader           = {}", policy.name())?;
        writeln!(out, "coordinates      = {}", game.dim())?;
        writeln!(out, "horizon          = {}", fmt_real(horizon))?;
        writeln!(out, "h                = {}", fmt_real(r.h))?;
        writeln!(out, "eps              = {}", fmt_real(r.eps))?;
        writeln!(out, "captured         = {}", r.captured)?;
        writeln!(out, "capture_time     = {}", opt(r.capture_time))?;
        writeln!(out, "holds_at_zero    = {}", r.holds_at_zero)?;
        writeln!(out, "T                = {}", fmt_real(r.guaranteed_t))?;
        writeln!(out, "T0               = {}", fmt_real(r.baseline_t0))?;
        writeln!(out, "residual_at_T    = {}", fmt_real(r.residual_norm_at_t))?;
        writeln!(out, "tail_bound_at_T  = {}", fmt_real(r.tail_bound_at_t))?;
        writeln!(out, "max_norm_u       = {} (rho = {})", fmt_real(audit.max_norm_u), fmt_real(game.rho()))?;
        writeln!(out, "max_norm_v       = {} (sigma = {})", fmt_real(audit.max_norm_v), fmt_real(game.sigma()))?;
        writeln!(out, "violations       = {}", audit.violations.len())?;
        Ok(())
    })()
    .map_err(io_err)?;

    if !audit.is_clean() {
        let v = audit.violations[0];
        return Err(CliError::capture_failure(format!(
            "admissibility violated at t = {} ({:?} norm {})",
            v.t, v.player, v.norm
        )));
    }
    if !r.captured_in_time() {
        return Err(CliError::capture_failure(format!(
            "no capture by T + h = {}",
            r.guaranteed_t + r.h
        )));
    }
    Ok(())
}

fn set_param(p: &mut GameParams, param: SweepParam, value: f64) -> CliResult<()> {
    let bad = |what: &str| CliError::invalid(format!("sweep axis {} does not apply to {what}", param.name()));
    match param {
        SweepParam::Rho => p.rho = value,
        SweepParam::Sigma => p.sigma = value,
        SweepParam::LambdaA => match &mut p.lambdas {
            LambdaSpec::Linear { a, .. } | LambdaSpec::Constant { a, .. } | LambdaSpec::Reciprocal { a, .. } => *a = value,
            LambdaSpec::Explicit { .. } => return Err(bad("an explicit lambda list")),
        },
        SweepParam::LambdaB => match &mut p.lambdas {
            LambdaSpec::Linear { b, .. } => *b = value,
            _ => return Err(bad("a non-linear lambda family")),
        },
        SweepParam::N => {
            if !(value >= 1.0 && value.fract() == 0.0) {
                return Err(CliError::invalid(format!("sweep axis n: {value} is not a positive integer")));
            }
            let v = value as usize;
            match &mut p.lambdas {
                LambdaSpec::Linear { n, .. } | LambdaSpec::Constant { n, .. } | LambdaSpec::Reciprocal { n, .. } => *n = v,
                LambdaSpec::Explicit { .. } => return Err(bad("an explicit lambda list")),
            }
            if let Z0Spec::Reciprocal { n, .. } = &mut p.z0 {
                *n = v;
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub axis_values: Vec<f64>,
    pub t: f64,
    pub t0: f64,
    pub ratio: f64,
}

/// Evaluates `T`, `T0` over the Cartesian product of the sweep axes, first
/// axis slowest.
pub fn sweep_rows(cfg: &ScenarioConfig) -> CliResult<Vec<SweepRow>> {
    if cfg.sweep.is_empty() {
        return Err(CliError::invalid("sweep needs at least one [[sweep]] axis"));
    }
    let axes: Vec<Vec<f64>> = cfg.sweep.iter().map(SweepAxis::values).collect::<CliResult<_>>()?;
    let total: usize = axes.iter().map(Vec::len).product();
    let mut rows = Vec::with_capacity(total);
    let mut idx = vec![0usize; axes.len()];
    for _ in 0..total {
        let mut p = cfg.game.clone();
        let values: Vec<f64> = idx.iter().zip(&axes).map(|(&k, a)| a[k]).collect();
        for (axis, &v) in cfg.sweep.iter().zip(&values) {
            set_param(&mut p, axis.param, v)?;
        }
        let game = p.validate().map_err(|e| {
            CliError::invalid(format!("sweep point {values:?}: {e}"))
        })?;
        let t = guaranteed_time(&game);
        rows.push(SweepRow {
            axis_values: values,
            t: t.guaranteed,
            t0: t.baseline,
            ratio: t.improvement_ratio(),
        });
        for d in (0..idx.len()).rev() {
            idx[d] += 1;
            if idx[d] < axes[d].len() {
                break;
            }
            idx[d] = 0;
        }
    }
    Ok(rows)
}

pub fn write_sweep_csv<W: Write>(cfg: &ScenarioConfig, rows: &[SweepRow], mut w: W) -> io::Result<()> {
    let names: Vec<&str> = cfg.sweep.iter().map(|a| a.param.name()).collect();
    writeln!(w, "{},T,T0,ratio", names.join(","))?;
    for r in rows {
        let mut cells: Vec<String> = r
            .axis_values
            .iter()
            .zip(&cfg.sweep)
            .map(|(v, a)| if a.param == SweepParam::N { format!("{}", *v as usize) } else { fmt_real(*v) })
            .collect();
        cells.extend([fmt_real(r.t), fmt_real(r.t0), fmt_real(r.ratio)]);
        writeln!(w, "{}", cells.join(","))?;
    }
    Ok(())
}

/// Writes the sweep CSV to `path` (or the config's sweep path), else to `out`.
pub fn cmd_sweep(cfg: &ScenarioConfig, path: Option<&Path>, out: &mut dyn Write) -> CliResult<()> {
    let rows = sweep_rows(cfg)?;
    match path.or(cfg.output.sweep.as_deref()) {
        Some(p) => {
            let file = fs::File::create(p)
                .map_err(|e| CliError::invalid(format!("cannot create {}: {e}", p.display())))?;
            write_sweep_csv(cfg, &rows, io::BufWriter::new(file))?;
            writeln!(out, "wrote {} rows to {}", rows.len(), p.display())?;
        }
        None => write_sweep_csv(cfg, &rows, out)?,
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub c: f64,
    pub points: usize,
    pub f_decreasing: bool,
    pub g_negative: bool,
    pub g_prime_negative: bool,
}

impl Certificate {
    pub fn passed(&self) -> bool {
        self.f_decreasing && self.g_negative && self.g_prime_negative
    }
}

/// Checks that `f` strictly decreases and `g`, `g'` are negative on `xs`.
pub fn certify(c: f64, xs: &[f64]) -> CliResult<Certificate> {
    if xs.is_empty() {
        return Err(CliError::invalid("certify needs at least one sample point"));
    }
    if xs.windows(2).any(|w| w[1] <= w[0]) {
        return Err(CliError::invalid("certify sample points must be strictly increasing"));
    }
    let profile = monotonicity_profile(c, xs)?;
    Ok(Certificate {
        c,
        points: profile.len(),
        f_decreasing: profile.windows(2).all(|w| w[1].f < w[0].f),
        g_negative: profile.iter().all(|p| p.g < 0.0),
        g_prime_negative: profile.iter().all(|p| p.g_prime < 0.0),
    })
}

pub fn cmd_certify(cfg: &ScenarioConfig, out: &mut dyn Write) -> CliResult<()> {
    let spec = &cfg.certify;
    let c = match spec.c {
        Some(c) => c,
        None => cfg.game.validate()?.ratio(),
    };
    let xs = match &spec.xs {
        Some(xs) => xs.clone(),
        None => {
            if !(spec.x_min > 0.0 && spec.x_max > spec.x_min) {
                return Err(CliError::invalid(format!(
                    "certify range [{}, {}] must satisfy 0 < x_min < x_max",
                    spec.x_min, spec.x_max
                )));
            }
            log_grid(spec.x_min, spec.x_max, spec.points)
        }
    };
    let cert = certify(c, &xs)?;
    let mark = |ok: bool| if ok { "PASS" } else { "FAIL" };
    writeln!(out, "c = {}, {} points", fmt_real(cert.c), cert.points)?;
    writeln!(out, "{} f strictly decreasing", mark(cert.f_decreasing))?;
    writeln!(out, "{} g(x) < 0", mark(cert.g_negative))?;
    writeln!(out, "{} g'(x) < 0", mark(cert.g_prime_negative))?;
    if cert.passed() {
        Ok(())
    } else {
        Err(CliError::capture_failure("monotonicity certificate failed"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(l: Vec<f64>, z: Vec<f64>, rho: f64, sigma: f64) -> ScenarioConfig {
        ScenarioConfig {
            game: GameParams::explicit(l, z, rho, sigma),
            ..ScenarioConfig::demo()
        }
    }

    fn text(f: impl FnOnce(&mut Vec<u8>) -> CliResult<()>) -> (CliResult<()>, String) {
        let mut buf = Vec::new();
        let r = f(&mut buf);
        (r, String::from_utf8(buf).unwrap())
    }

    #[test]
    fn times_table() {
        let cfg = small(vec![1.0, 2.0, 3.0], vec![1.0], 2.0, 1.0);
        let (r, s) = text(|o| cmd_times(&cfg, o));
        r.unwrap();
        assert!(s.contains("T                = 6.9314718055994529e-1"), "{s}");
        assert!(s.contains("T0               = 1.0000000000000000e0"));
        assert!(s.contains("argmin index     = 1"));
        assert!(s.contains("inf attained     = yes"));
    }

    #[test]
    fn times_small_rate() {
        let cfg = small(vec![1e-8, 1.0], vec![1.0], 2.0, 1.0);
        let game = cfg.game.validate().unwrap();
        let t = guaranteed_time(&game);
        assert!((t.improvement_ratio() - 1.0).abs() <= 1e-7);
        let (_, s) = text(|o| cmd_times(&cfg, o));
        assert!(s.contains("limit regime"));
    }

    #[test]
    fn times_rejects_budget_order() {
        let cfg = small(vec![1.0], vec![1.0], 1.0, 1.0);
        let (r, _) = text(|o| cmd_times(&cfg, o));
        let e = r.unwrap_err();
        assert_eq!(e.status, ExitStatus::Invalid);
        assert!(e.message.contains("rho") && e.message.contains("sigma"));
    }

    #[test]
    fn run_exit_statuses() {
        let mut cfg = small(vec![1.0, 2.0], vec![1.0, 1.0], 2.0, 1.0);
        cfg.grid.steps = 50;
        let (r, s) = text(|o| cmd_run(&cfg, None, o));
        r.unwrap();
        assert!(s.contains("captured         = true"));
        cfg.grid.horizon_factor = 0.5;
        let (r, _) = text(|o| cmd_run(&cfg, None, o));
        assert_eq!(r.unwrap_err().status, ExitStatus::HorizonTooShort);
    }

    #[test]
    fn sweep_ratios_match_log1p_over_x() {
        let mut cfg = ScenarioConfig {
            game: GameParams {
                lambdas: LambdaSpec::Constant { a: 1.0, n: 1 },
                z0: Z0Spec::Explicit { coords: vec![1.0], tail_norm: 0.0 },
                rho: 2.0,
                sigma: 1.0,
            },
            ..ScenarioConfig::demo()
        };
        cfg.sweep = vec![SweepAxis {
            param: SweepParam::LambdaA,
            values: Some(vec![0.1, 1.0, 10.0]),
            start: None,
            stop: None,
            count: None,
            log: false,
        }];
        let rows = sweep_rows(&cfg).unwrap();
        // ln(1+x)/x, 40-digit references
        let expect = [0.953_101_798_043_248_6, std::f64::consts::LN_2, 0.239_789_527_279_837_05];
        for (r, e) in rows.iter().zip(expect) {
            assert!((r.ratio - e).abs() < 1e-15);
        }
    }

    #[test]
    fn sweep_sigma_towards_rho_grows() {
        let mut cfg = small(vec![1.0, 2.0], vec![1.0], 2.0, 1.0);
        cfg.sweep = vec![SweepAxis {
            param: SweepParam::Sigma,
            values: None,
            start: Some(0.0),
            stop: Some(1.999),
            count: Some(20),
            log: false,
        }];
        let rows = sweep_rows(&cfg).unwrap();
        assert_eq!(rows.len(), 20);
        assert!(rows.windows(2).all(|w| w[1].t > w[0].t));
    }

    #[test]
    fn sweep_product_order_and_errors() {
        let mut cfg = ScenarioConfig::demo();
        cfg.sweep = vec![
            SweepAxis { param: SweepParam::Rho, values: Some(vec![2.0, 3.0]), start: None, stop: None, count: None, log: false },
            SweepAxis { param: SweepParam::N, values: Some(vec![1.0, 5.0, 10.0]), start: None, stop: None, count: None, log: false },
        ];
        let rows = sweep_rows(&cfg).unwrap();
        let axes: Vec<_> = rows.iter().map(|r| (r.axis_values[0], r.axis_values[1])).collect();
        assert_eq!(axes, vec![(2.0, 1.0), (2.0, 5.0), (2.0, 10.0), (3.0, 1.0), (3.0, 5.0), (3.0, 10.0)]);

        cfg.sweep.clear();
        assert_eq!(sweep_rows(&cfg).unwrap_err().status, ExitStatus::Invalid);
        cfg.sweep = vec![SweepAxis { param: SweepParam::Rho, values: Some(vec![]), start: None, stop: None, count: None, log: false }];
        assert_eq!(sweep_rows(&cfg).unwrap_err().status, ExitStatus::Invalid);
    }

    #[test]
    fn certify_examples() {
        let xs = log_grid(1e-6, 1e6, 200);
        assert!(certify(1.0, &xs).unwrap().passed());
        assert!(certify(1000.0, &xs).unwrap().passed());
        assert_eq!(certify(1.0, &[-1.0, 1.0]).unwrap_err().status, ExitStatus::Invalid);
        assert_eq!(certify(1.0, &[0.0, 1.0]).unwrap_err().status, ExitStatus::Invalid);
    }

    #[test]
    fn overrides_apply() {
        let mut cfg = ScenarioConfig::demo();
        cfg.apply(&Overrides { seed: Some(7), eps: Some(1e-6), steps: Some(10) });
        assert_eq!(cfg.evader, EvaderSpec::PiecewiseRandom { seed: 7 });
        assert_eq!(cfg.eps, Some(1e-6));
        assert_eq!(cfg.grid.steps, 10);
    }

    #[test]
    fn config_parses_minimal_toml() {
        let cfg = ScenarioConfig::from_toml(
            r#"
            [game]
            rho = 2.0
            sigma = 1.0
            lambdas = { kind = "explicit", values = [3.0, 1.0, 2.0] }
            z0 = { kind = "explicit", coords = [1.0, 0.0, 0.0] }

            [evader]
            kind = "radial_outward"
            "#,
        )
        .unwrap();
        assert_eq!(cfg.evader, EvaderSpec::RadialOutward);
        assert_eq!(cfg.grid, GridSpec::default());
        assert!(ScenarioConfig::from_toml("[game]\nrho = 1").is_err());
        assert!(ScenarioConfig::from_toml(&format!("{}\nbogus = 1\n", ScenarioConfig::demo().to_toml().unwrap())).is_err());
    }
}
