//! Full games: evader policies, time stepping under the counter-strategy,
//! capture detection and truncation tail bounds.
//!
//! The base grid is refined with every switch time `T_i` that falls inside
//! the horizon (and with `T` itself), so each coordinate lands exactly on its
//! switch instant and is set to zero there. The evader's control is held
//! constant on each base step; the pursuer reads that value before the step.

use std::io::{self, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{GameError, Result};
use crate::model::{compensated_sum, Game, L2State, TimeGrid};
use crate::pursuit_time::guaranteed_time;
use crate::strategy::{build_strategy, PursuerStrategy, NORM_TOL};

/// Zero-order-hold control: row `k` is held on base step `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlSignal {
    pub values: Vec<Vec<f64>>,
}

impl ControlSignal {
    /// Samples `f(t)` at step midpoints.
    pub fn from_fn<F: Fn(f64) -> Vec<f64>>(grid: &TimeGrid, f: F) -> Self {
        let values = (0..grid.steps())
            .map(|k| f(0.5 * (grid.point(k) + grid.point(k + 1))))
            .collect();
        Self { values }
    }

    /// Value on step `k`; the last row is held past the end.
    pub fn at(&self, k: usize) -> &[f64] {
        let k = k.min(self.values.len().saturating_sub(1));
        &self.values[k]
    }

    /// Parses rows of comma-separated numbers. Blank lines and lines starting
    /// with `#` are skipped, as is a leading non-numeric header.
    pub fn parse_csv(text: &str) -> Result<Self> {
        let mut values = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let row: std::result::Result<Vec<f64>, _> =
                line.split(',').map(|s| s.trim().parse::<f64>()).collect();
            match row {
                Ok(row) => values.push(row),
                Err(_) if values.is_empty() && lineno == 0 => continue,
                Err(e) => {
                    return Err(GameError::Config(format!(
                        "replay line {}: {e}",
                        lineno + 1
                    )))
                }
            }
        }
        if values.is_empty() {
            return Err(GameError::Config("replay signal has no rows".into()));
        }
        Ok(Self { values })
    }
}

/// Evader behaviour. None of these is optimal play; they exercise the
/// guarantee, which must hold against every admissible control.
#[derive(Debug, Clone, PartialEq)]
pub enum EvaderPolicy {
    Zero,
    /// `scale * direction / ||direction||`, `0 <= scale <= sigma`.
    ConstantDirection { direction: Vec<f64>, scale: f64 },
    /// A fresh point drawn uniformly from the sigma-ball on every base step.
    PiecewiseRandom { seed: u64 },
    /// `sigma * z0 / ||z0||`, pushing straight away from the origin.
    RadialOutward,
    Replay(ControlSignal),
}

impl EvaderPolicy {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Zero => "zero",
            Self::ConstantDirection { .. } => "constant_direction",
            Self::PiecewiseRandom { .. } => "piecewise_random",
            Self::RadialOutward => "radial_outward",
            Self::Replay(_) => "replay",
        }
    }

    fn source(&self, game: &Game) -> Result<EvaderSource> {
        let n = game.dim();
        let sigma = game.sigma();
        Ok(match self {
            Self::Zero => EvaderSource::Fixed(vec![0.0; n]),
            Self::ConstantDirection { direction, scale } => {
                if !(scale.is_finite() && *scale >= 0.0) {
                    return Err(GameError::InvalidArgument {
                        name: "scale",
                        value: *scale,
                    });
                }
                if direction.len() > n {
                    return Err(GameError::DimensionMismatch {
                        coords: direction.len(),
                        lambdas: n,
                    });
                }
                let norm = L2State::finite(direction.clone())?.norm();
                if norm == 0.0 {
                    return Err(GameError::Config("evader direction is zero".into()));
                }
                let mut v: Vec<f64> = direction.iter().map(|d| scale * d / norm).collect();
                v.resize(n, 0.0);
                EvaderSource::Fixed(v)
            }
            Self::PiecewiseRandom { seed } => EvaderSource::Ball {
                rng: ChaCha8Rng::seed_from_u64(*seed),
                dim: n,
                radius: sigma,
            },
            Self::RadialOutward => EvaderSource::Fixed(
                game.z0.coords.iter().map(|z| sigma * z / game.z0_norm).collect(),
            ),
            Self::Replay(signal) => {
                if signal.values.is_empty() {
                    return Err(GameError::Config("replay signal has no rows".into()));
                }
                if let Some(row) = signal.values.iter().find(|r| r.len() > n) {
                    return Err(GameError::DimensionMismatch {
                        coords: row.len(),
                        lambdas: n,
                    });
                }
                EvaderSource::Replay(signal.clone())
            }
        })
    }
}

#[allow(clippy::large_enum_variant)]
enum EvaderSource {
    Fixed(Vec<f64>),
    Ball {
        rng: ChaCha8Rng,
        dim: usize,
        radius: f64,
    },
    Replay(ControlSignal),
}

impl EvaderSource {
    /// Value held on base step `k`; called with increasing `k`.
    fn next(&mut self, k: usize) -> Vec<f64> {
        match self {
            Self::Fixed(v) => v.clone(),
            Self::Ball { rng, dim, radius } => uniform_in_ball(rng, *dim, *radius),
            Self::Replay(signal) => signal.at(k).to_vec(),
        }
    }
}

/// Uniform point in the radius-`r` ball of `R^dim`: Gaussian direction,
/// radius `r U^{1/dim}`.
fn uniform_in_ball<R: Rng>(rng: &mut R, dim: usize, r: f64) -> Vec<f64> {
    if dim == 0 || r == 0.0 {
        return vec![0.0; dim];
    }
    let g: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
    let norm = compensated_sum(g.iter().map(|x| x * x)).sqrt();
    if norm == 0.0 {
        return vec![0.0; dim];
    }
    let u: f64 = rng.random();
    // stay inside the closed ball despite rounding in the normalization
    let radius = r * u.powf(1.0 / dim as f64) * (1.0 - 4.0 * f64::EPSILON);
    g.iter().map(|x| radius * x / norm).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOptions {
    /// Capture tolerance; `None` means `1e-9 ||z0||`.
    pub eps: Option<f64>,
    /// Persist every k-th base grid point.
    pub sample_every: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            eps: None,
            sample_every: 1,
        }
    }
}

/// One persisted trajectory row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectorySample {
    pub t: f64,
    pub norm_z: f64,
    pub norm_u: f64,
    pub norm_v: f64,
    /// Materialized coordinates that are exactly zero.
    pub captured_count: usize,
    pub tail_bound: f64,
}

/// Control norms applied on the piece starting at `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControlRecord {
    pub t: f64,
    pub norm_u: f64,
    pub norm_v: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CaptureReport {
    pub captured: bool,
    /// First checked instant with head norm and tail bound both `<= eps`.
    pub capture_time: Option<f64>,
    /// Whether the state stayed within `eps` from capture to the horizon.
    pub holds_at_zero: bool,
    /// When each materialized coordinate was set to exactly zero.
    pub per_coordinate_zero_times: Vec<Option<f64>>,
    pub residual_norm_at_t: f64,
    pub tail_bound_at_t: f64,
    pub guaranteed_t: f64,
    pub baseline_t0: f64,
    pub eps: f64,
    /// Base grid step.
    pub h: f64,
    pub max_norm_u: f64,
    pub max_norm_v: f64,
}

impl CaptureReport {
    /// Captured no later than `T + h`.
    pub fn captured_in_time(&self) -> bool {
        matches!(self.capture_time, Some(t) if t <= self.guaranteed_t + self.h)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GameRun {
    pub report: CaptureReport,
    pub samples: Vec<TrajectorySample>,
    pub controls: Vec<ControlRecord>,
    pub final_state: Vec<f64>,
}

/// Bound on the norm of the unmaterialized coordinates at `t`: the initial
/// tail norm (coordinates never grow under the strategy), dropping to zero
/// once every tail coordinate has passed its switch time.
pub fn tail_bound(game: &Game, t: f64) -> f64 {
    let tail = game.z0.tail_norm;
    if tail == 0.0 {
        return 0.0;
    }
    match build_strategy(game).ok().and_then(|s| s.tail_switch_sup) {
        Some(sup) if t >= sup => 0.0,
        _ => tail,
    }
}

fn tail_bound_with(s: &PursuerStrategy, tail_norm: f64, t: f64) -> f64 {
    match s.tail_switch_sup {
        Some(sup) if t >= sup => 0.0,
        _ => tail_norm,
    }
}

pub fn run_game(game: &Game, policy: &EvaderPolicy, grid: &TimeGrid, opts: RunOptions) -> Result<GameRun> {
    let strategy = build_strategy(game)?;
    let times = guaranteed_time(game);
    let t_star = times.guaranteed;
    if grid.horizon() < t_star {
        return Err(GameError::HorizonTooShort {
            horizon: grid.horizon(),
            required: t_star,
        });
    }
    let eps = opts.eps.unwrap_or(1e-9 * game.z0_norm);
    if !(eps.is_finite() && eps >= 0.0) {
        return Err(GameError::InvalidArgument { name: "eps", value: eps });
    }
    let sample_every = opts.sample_every.max(1);
    let n = game.dim();
    let tail_norm = game.z0.tail_norm;

    // coordinates ordered by switch time, for exact zeroing at split points
    let mut by_switch: Vec<usize> = (0..n).collect();
    by_switch.sort_by(|&a, &b| strategy.switch_times[a].total_cmp(&strategy.switch_times[b]));
    let mut next_switch = 0;

    let mut breaks: Vec<f64> = strategy
        .switch_times
        .iter()
        .copied()
        .chain([t_star])
        .chain(strategy.tail_switch_sup)
        .filter(|&t| t > 0.0 && t <= grid.horizon())
        .collect();
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let mut next_break = 0;

    let mut evader = policy.source(game)?;
    let mut z = game.z0.coords.clone();
    let mut zero_times: Vec<Option<f64>> = vec![None; n];
    let mut samples = Vec::with_capacity(grid.steps() / sample_every + 4);
    let mut controls = Vec::with_capacity(grid.steps() + breaks.len());

    let head_norm = |z: &[f64]| compensated_sum(z.iter().map(|x| x * x)).sqrt();
    let zeros = |z: &[f64]| z.iter().filter(|x| **x == 0.0).count();
    let sample = |t: f64, z: &[f64], c: ControlRecord| {
        let tail = tail_bound_with(&strategy, tail_norm, t);
        TrajectorySample {
            t,
            norm_z: L2State {
                coords: z.to_vec(),
                tail_norm: tail,
            }
            .norm(),
            norm_u: c.norm_u,
            norm_v: c.norm_v,
            captured_count: zeros(z),
            tail_bound: tail,
        }
    };

    let mut capture_time = None;
    let mut holds = true;
    let mut residual_at_t = f64::NAN;
    let mut tail_at_t = f64::NAN;
    let mut check = |t: f64, z: &[f64], capture_time: &mut Option<f64>| {
        let within = head_norm(z) <= eps && tail_bound_with(&strategy, tail_norm, t) <= eps;
        match (*capture_time, within) {
            (None, true) => *capture_time = Some(t),
            (Some(_), false) => holds = false,
            _ => {}
        }
    };
    check(0.0, &z, &mut capture_time);

    let mut w = vec![0.0; n];
    for k in 0..grid.steps() {
        let a = grid.point(k);
        let b = grid.point(k + 1);
        let v = evader.next(k);
        let norm_v = L2State {
            coords: v.clone(),
            tail_norm: 0.0,
        }
        .norm();
        if norm_v > game.sigma() + NORM_TOL {
            return Err(GameError::EvaderInadmissible {
                t: a,
                norm: norm_v,
                sigma: game.sigma(),
            });
        }

        while next_break < breaks.len() && breaks[next_break] <= a {
            next_break += 1;
        }
        let mut p = a;
        let mut first_piece = None;
        let mut interior_samples = Vec::new();
        let force_sample = loop {
            let q = if next_break < breaks.len() && breaks[next_break] < b {
                breaks[next_break]
            } else {
                b
            };
            // no switch lies strictly inside (p, q): the midpoint picks the branch
            let u = strategy.pursuer_control(0.5 * (p + q), &v)?;
            let record = ControlRecord {
                t: p,
                norm_u: u.norm(),
                norm_v,
            };
            controls.push(record);
            first_piece.get_or_insert(record);
            for i in 0..n {
                w[i] = u.coords[i] - v[i];
            }
            let h = q - p;
            for i in 0..n {
                z[i] = crate::dynamics::propagate(game.lambdas[i], z[i], w[i], h);
            }
            while next_switch < n && strategy.switch_times[by_switch[next_switch]] <= q {
                let i = by_switch[next_switch];
                z[i] = 0.0;
                zero_times[i] = Some(strategy.switch_times[i]);
                next_switch += 1;
            }
            let was_captured = capture_time.is_some();
            check(q, &z, &mut capture_time);
            if q == t_star {
                residual_at_t = head_norm(&z);
                tail_at_t = tail_bound_with(&strategy, tail_norm, q);
            }
            let notable = (!was_captured && capture_time.is_some()) || q == t_star;
            if q >= b {
                break notable;
            }
            if notable {
                interior_samples.push(sample(q, &z, record));
            }
            p = q;
            next_break += 1;
        };
        if k == 0 {
            samples.push(sample(a, &game.z0.coords, first_piece.unwrap()));
        }
        samples.extend(interior_samples);
        let last = *controls.last().unwrap();
        if force_sample || (k + 1) % sample_every == 0 || k + 1 == grid.steps() {
            samples.push(sample(b, &z, last));
        }
    }

    let max_norm_u = controls.iter().map(|c| c.norm_u).fold(0.0, f64::max);
    let max_norm_v = controls.iter().map(|c| c.norm_v).fold(0.0, f64::max);
    let report = CaptureReport {
        captured: capture_time.is_some(),
        capture_time,
        holds_at_zero: capture_time.is_some() && holds,
        per_coordinate_zero_times: zero_times,
        residual_norm_at_t: residual_at_t,
        tail_bound_at_t: tail_at_t,
        guaranteed_t: t_star,
        baseline_t0: times.baseline,
        eps,
        h: grid.h(),
        max_norm_u,
        max_norm_v,
    };
    Ok(GameRun {
        report,
        samples,
        controls,
        final_state: z,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Player {
    Pursuer,
    Evader,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Violation {
    pub t: f64,
    pub player: Player,
    pub norm: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditReport {
    pub max_norm_u: f64,
    pub max_norm_v: f64,
    pub violations: Vec<Violation>,
}

impl AuditReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks recorded control norms against `rho` and `sigma` (with `1e-12`
/// slack) and lists every violating timestamp.
pub fn admissibility_audit(controls: &[ControlRecord], rho: f64, sigma: f64) -> AuditReport {
    let mut violations = Vec::new();
    for c in controls {
        if c.norm_u > rho + NORM_TOL {
            violations.push(Violation {
                t: c.t,
                player: Player::Pursuer,
                norm: c.norm_u,
            });
        }
        if c.norm_v > sigma + NORM_TOL {
            violations.push(Violation {
                t: c.t,
                player: Player::Evader,
                norm: c.norm_v,
            });
        }
    }
    AuditReport {
        max_norm_u: controls.iter().map(|c| c.norm_u).fold(0.0, f64::max),
        max_norm_v: controls.iter().map(|c| c.norm_v).fold(0.0, f64::max),
        violations,
    }
}

pub const TRAJECTORY_HEADER: &str = "t,norm_z,norm_u,norm_v,captured_count,tail_bound";

/// 17 significant digits, round-trip exact.
pub fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_trajectory_csv<W: Write>(samples: &[TrajectorySample], mut out: W) -> io::Result<()> {
    writeln!(out, "{TRAJECTORY_HEADER}")?;
    for s in samples {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            fmt_real(s.t),
            fmt_real(s.norm_z),
            fmt_real(s.norm_u),
            fmt_real(s.norm_v),
            s.captured_count,
            fmt_real(s.tail_bound)
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{GameParams, LambdaSpec, Z0Spec};

    const LN2: f64 = std::f64::consts::LN_2;

    fn game(l: Vec<f64>, z: Vec<f64>, rho: f64, sigma: f64) -> Game {
        GameParams::explicit(l, z, rho, sigma).validate().unwrap()
    }

    fn grid_for(g: &Game, factor: f64, steps: usize) -> TimeGrid {
        TimeGrid::new(guaranteed_time(g).guaranteed * factor, steps).unwrap()
    }

    #[test]
    fn zero_evader_captures_at_max_switch() {
        let g = game(vec![1.0, 2.0, 0.5], vec![1.0, -2.0, 0.5], 3.0, 1.0);
        let run = run_game(&g, &EvaderPolicy::Zero, &grid_for(&g, 1.2, 97), RunOptions::default()).unwrap();
        let r = &run.report;
        let t_max = guaranteed_time(&g).per_coordinate.iter().copied().fold(0.0, f64::max);
        assert!(r.captured && r.captured_in_time() && r.holds_at_zero);
        assert!(r.capture_time.unwrap() <= t_max + r.h);
        assert!(r.residual_norm_at_t <= 1e-10 * g.z0_norm);
        assert!((r.max_norm_u - 2.0).abs() < 1e-12);
        assert_eq!(r.max_norm_v, 0.0);
        assert!(run.final_state.iter().all(|&z| z == 0.0));
    }

    #[test]
    fn single_coordinate_captures_at_ln2() {
        let g = game(vec![1.0], vec![1.0], 2.0, 1.0);
        let opts = RunOptions { eps: Some(0.0), sample_every: 10 };
        let run = run_game(&g, &EvaderPolicy::Zero, &grid_for(&g, 2.0, 100), opts).unwrap();
        let t = run.report.capture_time.unwrap();
        assert!((t - LN2).abs() < 1e-15);
        assert!(run.samples.iter().any(|s| s.t == t && s.captured_count == 1));
        assert_eq!(run.report.per_coordinate_zero_times, vec![Some(t)]);
    }

    #[test]
    fn random_evaders_never_escape() {
        let g = game(vec![0.7, 2.0, 5.0, 1.3], vec![0.3, -1.0, 2.0, 0.1], 1.5, 1.2);
        let grid = grid_for(&g, 1.01, 200);
        for seed in 0..50 {
            let run = run_game(&g, &EvaderPolicy::PiecewiseRandom { seed }, &grid, RunOptions::default()).unwrap();
            assert!(run.report.captured_in_time(), "seed {seed}");
            assert!(admissibility_audit(&run.controls, g.rho(), g.sigma()).is_clean());
            for s in &run.samples {
                assert!(s.norm_z <= g.z0_norm * (1.0 + 1e-12));
            }
        }
    }

    #[test]
    fn evader_choice_does_not_change_the_state() {
        let g = game(vec![0.7, 2.0, 5.0], vec![0.3, -1.0, 2.0], 2.0, 1.0);
        let grid = grid_for(&g, 1.1, 123);
        let a = run_game(&g, &EvaderPolicy::RadialOutward, &grid, RunOptions::default()).unwrap();
        let b = run_game(&g, &EvaderPolicy::PiecewiseRandom { seed: 9 }, &grid, RunOptions::default()).unwrap();
        assert_eq!(a.samples.len(), b.samples.len());
        for (x, y) in a.samples.iter().zip(&b.samples) {
            assert_eq!(x.t, y.t);
            assert!((x.norm_z - y.norm_z).abs() <= 1e-12);
        }
    }

    #[test]
    fn identical_inputs_give_identical_runs() {
        let g = game(vec![0.7, 2.0], vec![0.3, -1.0], 2.0, 1.0);
        let grid = grid_for(&g, 1.1, 50);
        let p = EvaderPolicy::PiecewiseRandom { seed: 3 };
        assert_eq!(
            run_game(&g, &p, &grid, RunOptions::default()).unwrap(),
            run_game(&g, &p, &grid, RunOptions::default()).unwrap()
        );
    }

    #[test]
    fn short_horizon_is_rejected() {
        let g = game(vec![1.0], vec![1.0], 2.0, 1.0);
        assert!(matches!(
            run_game(&g, &EvaderPolicy::Zero, &grid_for(&g, 0.5, 10), RunOptions::default()),
            Err(GameError::HorizonTooShort { .. })
        ));
    }

    #[test]
    fn inadmissible_replay_reports_timestamp() {
        let g = game(vec![1.0, 1.0], vec![1.0, 0.0], 2.0, 1.0);
        let grid = grid_for(&g, 1.0, 4);
        let signal = ControlSignal {
            values: vec![vec![0.0, 1.0], vec![0.0, 1.0], vec![0.0, 1.5]],
        };
        match run_game(&g, &EvaderPolicy::Replay(signal), &grid, RunOptions::default()) {
            Err(GameError::EvaderInadmissible { t, .. }) => assert_eq!(t, grid.point(2)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn constant_direction_is_scaled() {
        let g = game(vec![1.0, 1.0], vec![1.0, 0.0], 2.0, 1.0);
        let p = EvaderPolicy::ConstantDirection { direction: vec![3.0, 4.0], scale: 0.5 };
        let run = run_game(&g, &p, &grid_for(&g, 1.0, 10), RunOptions::default()).unwrap();
        assert!((run.report.max_norm_v - 0.5).abs() < 1e-15);
        let bad = EvaderPolicy::ConstantDirection { direction: vec![0.0, 0.0], scale: 0.5 };
        assert!(run_game(&g, &bad, &grid_for(&g, 1.0, 10), RunOptions::default()).is_err());
    }

    #[test]
    fn tail_bound_examples() {
        let g = game(vec![1.0], vec![1.0], 2.0, 1.0);
        assert_eq!(tail_bound(&g, 0.3), 0.0);

        let p = GameParams {
            lambdas: LambdaSpec::Linear { a: 1.0, b: 0.0, n: 3 },
            z0: Z0Spec::Explicit { coords: vec![1.0, 0.5], tail_norm: 0.05 },
            rho: 2.0,
            sigma: 1.0,
        };
        let g = p.validate().unwrap();
        assert_eq!(tail_bound(&g, 0.0), 0.05);
        assert!(tail_bound(&g, 0.1) <= 0.05);
        let t = guaranteed_time(&g).guaranteed;
        assert_eq!(tail_bound(&g, t), 0.0);
        // the tail's own supremum is the switch time at lambda_4 = 4
        let s = build_strategy(&g).unwrap();
        let sup = s.tail_switch_sup.unwrap();
        assert!(sup < t);
        assert_eq!(tail_bound(&g, sup), 0.0);
        assert_eq!(tail_bound(&g, sup * 0.999), 0.05);
    }

    #[test]
    fn tail_game_is_captured_including_tail() {
        let g = GameParams {
            lambdas: LambdaSpec::Reciprocal { a: 1.0, n: 20 },
            z0: Z0Spec::Reciprocal { scale: 1.0, n: 20, tail: true },
            rho: 2.0,
            sigma: 0.5,
        }
        .validate()
        .unwrap();
        let grid = grid_for(&g, 1.05, 300);
        let run = run_game(&g, &EvaderPolicy::PiecewiseRandom { seed: 1 }, &grid, RunOptions::default()).unwrap();
        let r = &run.report;
        assert!(r.captured_in_time());
        assert_eq!(r.tail_bound_at_t, 0.0);
        assert!(r.max_norm_u <= g.rho() + NORM_TOL);
        assert!(run.samples[0].tail_bound > 0.0);
    }

    #[test]
    fn audit_flags_scaled_controls() {
        let g = game(vec![0.7, 2.0], vec![0.3, -1.0], 2.0, 1.0);
        let run = run_game(&g, &EvaderPolicy::RadialOutward, &grid_for(&g, 1.1, 40), RunOptions::default()).unwrap();
        assert!(admissibility_audit(&run.controls, g.rho(), g.sigma()).is_clean());
        let faulty: Vec<ControlRecord> = run
            .controls
            .iter()
            .map(|c| ControlRecord { norm_v: c.norm_v * 1.01, ..*c })
            .collect();
        let audit = admissibility_audit(&faulty, g.rho(), g.sigma());
        let evader: Vec<_> = audit.violations.iter().filter(|v| v.player == Player::Evader).collect();
        assert_eq!(evader.len(), faulty.len());
    }

    #[test]
    fn replay_csv_parsing() {
        let s = ControlSignal::parse_csv("v1,v2\n0.1,0.2\n\n# note\n0.3,0.4\n").unwrap();
        assert_eq!(s.values, vec![vec![0.1, 0.2], vec![0.3, 0.4]]);
        assert_eq!(s.at(10), &[0.3, 0.4]);
        assert!(ControlSignal::parse_csv("").is_err());
        assert!(ControlSignal::parse_csv("0.1\nx\n").is_err());
    }

    #[test]
    fn trajectory_csv_format() {
        let mut out = Vec::new();
        let s = TrajectorySample { t: 0.5, norm_z: 1.0, norm_u: 0.25, norm_v: 0.0, captured_count: 3, tail_bound: 0.0 };
        write_trajectory_csv(&[s], &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(
            text,
            "t,norm_z,norm_u,norm_v,captured_count,tail_bound\n\
             5.0000000000000000e-1,1.0000000000000000e0,2.5000000000000000e-1,0.0000000000000000e0,3,0.0000000000000000e0\n"
        );
    }
}
