//! Game parameters, truncated l2 states and the time grid.
//!
//! The state space is l2, represented by `N` explicit coordinates plus an
//! upper bound on the norm of everything past `N`. Eigenvalue sequences are
//! either explicit finite lists or parametric families; a family describes
//! the whole infinite sequence and `n` only fixes how many coordinates are
//! materialized.

use serde::{Deserialize, Serialize};

use crate::error::{GameError, Result};

/// Neumaier-compensated sum, ascending index order.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0_f64;
    let mut comp = 0.0_f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Truncated l2 vector: explicit coordinates plus a bound on the tail norm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct L2State {
    pub coords: Vec<f64>,
    pub tail_norm: f64,
}

impl L2State {
    pub fn new(coords: Vec<f64>, tail_norm: f64) -> Result<Self> {
        if !tail_norm.is_finite() {
            return Err(GameError::NonFinite { field: "tail_norm" });
        }
        if tail_norm < 0.0 {
            return Err(GameError::InvalidArgument {
                name: "tail_norm",
                value: tail_norm,
            });
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(GameError::NonFinite { field: "coords" });
        }
        Ok(Self { coords, tail_norm })
    }

    pub fn finite(coords: Vec<f64>) -> Result<Self> {
        Self::new(coords, 0.0)
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn norm(&self) -> f64 {
        l2_norm(self)
    }

    /// Norm of the explicit coordinates only.
    pub fn head_norm(&self) -> f64 {
        scaled_norm(self.coords.iter().copied())
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            coords: self.coords.iter().map(|x| c * x).collect(),
            tail_norm: c.abs() * self.tail_norm,
        }
    }

    /// Coordinate-wise sum; tail bounds add (triangle inequality on the tail).
    pub fn add(&self, other: &Self) -> Self {
        let n = self.dim().max(other.dim());
        let at = |s: &Self, i: usize| s.coords.get(i).copied().unwrap_or(0.0);
        Self {
            coords: (0..n).map(|i| at(self, i) + at(other, i)).collect(),
            tail_norm: self.tail_norm + other.tail_norm,
        }
    }
}

/// `sqrt(sum coords^2 + tail_norm^2)` with a fixed ascending summation order.
/// Squares are formed after scaling by the largest magnitude, so neither
/// tiny nor huge states under- or overflow.
pub fn l2_norm(state: &L2State) -> f64 {
    scaled_norm(state.coords.iter().copied().chain(std::iter::once(state.tail_norm)))
}

pub(crate) fn scaled_norm<I: Iterator<Item = f64> + Clone>(values: I) -> f64 {
    let scale = values.clone().fold(0.0_f64, |m, x| m.max(x.abs()));
    if scale == 0.0 || !scale.is_finite() {
        return scale;
    }
    scale * compensated_sum(values.map(|x| (x / scale) * (x / scale))).sqrt()
}

/// Eigenvalue sequence `lambda_1, lambda_2, ...`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum LambdaSpec {
    /// A finite game with exactly these rates.
    Explicit { values: Vec<f64> },
    /// `lambda_i = a * i + b`, first `n` materialized.
    Linear { a: f64, b: f64, n: usize },
    /// `lambda_i = a`, first `n` materialized.
    Constant { a: f64, n: usize },
    /// `lambda_i = a / i`; the infimum 0 is never attained.
    Reciprocal { a: f64, n: usize },
}

/// Infimum of a rate sequence and where (1-based) it is first attained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Infimum {
    pub value: f64,
    pub attained_at: Option<usize>,
}

impl LambdaSpec {
    /// Number of materialized coordinates.
    pub fn len(&self) -> usize {
        match self {
            Self::Explicit { values } => values.len(),
            Self::Linear { n, .. } | Self::Constant { n, .. } | Self::Reciprocal { n, .. } => *n,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_family(&self) -> bool {
        !matches!(self, Self::Explicit { .. })
    }

    /// Value at the 1-based index `i`; `None` past the end of an explicit list.
    pub fn value(&self, i: usize) -> Option<f64> {
        match self {
            Self::Explicit { values } => i.checked_sub(1).and_then(|k| values.get(k).copied()),
            Self::Linear { a, b, .. } => Some(a * i as f64 + b),
            Self::Constant { a, .. } => Some(*a),
            Self::Reciprocal { a, .. } => Some(a / i as f64),
        }
    }

    /// Checks positivity of the whole (possibly infinite) sequence.
    fn check_positive(&self) -> Result<()> {
        let nonfinite = match self {
            Self::Explicit { values } => values.iter().any(|v| !v.is_finite()),
            Self::Linear { a, b, .. } => !a.is_finite() || !b.is_finite(),
            Self::Constant { a, .. } | Self::Reciprocal { a, .. } => !a.is_finite(),
        };
        if nonfinite {
            return Err(GameError::NonFinite { field: "lambdas" });
        }
        match self {
            Self::Explicit { values } => first_nonpositive(values, 1),
            Self::Linear { a, b, .. } if *a < 0.0 => {
                // eventually negative: first i with a*i + b <= 0
                let at = |i: usize| a * i as f64 + b;
                let mut i = (-b / a).ceil().max(1.0) as usize;
                while at(i) > 0.0 {
                    i += 1;
                }
                while i > 1 && at(i - 1) <= 0.0 {
                    i -= 1;
                }
                Err(GameError::NonPositiveLambda {
                    index: i,
                    value: at(i),
                })
            }
            Self::Linear { a, b, .. } => {
                let first = a + b;
                if first <= 0.0 {
                    Err(GameError::NonPositiveLambda {
                        index: 1,
                        value: first,
                    })
                } else {
                    Ok(())
                }
            }
            Self::Constant { a, .. } | Self::Reciprocal { a, .. } => {
                if *a <= 0.0 {
                    Err(GameError::NonPositiveLambda { index: 1, value: *a })
                } else {
                    Ok(())
                }
            }
        }
    }

    /// Infimum over the whole sequence, computed analytically for families.
    pub fn infimum(&self) -> Infimum {
        match self {
            Self::Explicit { values } => {
                let (k, v) = argmin(values);
                Infimum {
                    value: v,
                    attained_at: Some(k + 1),
                }
            }
            Self::Linear { a, b, .. } => Infimum {
                value: a + b,
                attained_at: Some(1),
            },
            Self::Constant { a, .. } => Infimum {
                value: *a,
                attained_at: Some(1),
            },
            Self::Reciprocal { .. } => Infimum {
                value: 0.0,
                attained_at: None,
            },
        }
    }

    /// Infimum over the indices past the first `n`; `None` if there are none.
    pub fn tail_infimum(&self, n: usize) -> Option<f64> {
        match self {
            Self::Explicit { .. } => None,
            Self::Linear { .. } => self.value(n + 1),
            Self::Constant { a, .. } => Some(*a),
            Self::Reciprocal { .. } => Some(0.0),
        }
    }
}

/// Lowest index attaining the minimum (ties go to the lowest index).
pub(crate) fn argmin(values: &[f64]) -> (usize, f64) {
    values
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::INFINITY), |best, (k, v)| if v < best.1 { (k, v) } else { best })
}

fn first_nonpositive(values: &[f64], offset: usize) -> Result<()> {
    match values.iter().position(|&v| v <= 0.0) {
        Some(k) => Err(GameError::NonPositiveLambda {
            index: k + offset,
            value: values[k],
        }),
        None => Ok(()),
    }
}

/// Realizes the first `n` entries of a rate sequence.
pub fn materialize_lambdas(spec: &LambdaSpec, n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(GameError::EmptyLambdas);
    }
    if let LambdaSpec::Explicit { values } = spec {
        if n > values.len() {
            return Err(GameError::DimensionMismatch {
                coords: n,
                lambdas: values.len(),
            });
        }
    }
    let out: Vec<f64> = (1..=n).map(|i| spec.value(i).unwrap_or(f64::NAN)).collect();
    if out.iter().any(|v| !v.is_finite()) {
        return Err(GameError::NonFinite { field: "lambdas" });
    }
    first_nonpositive(&out, 1)?;
    Ok(out)
}

/// Initial state `z0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Z0Spec {
    Explicit {
        coords: Vec<f64>,
        #[serde(default)]
        tail_norm: f64,
    },
    /// `z_i = scale / i` for `i <= n`. With `tail`, the remainder past `n` is
    /// kept as the bound `|scale| / sqrt(n)` (from `sum_{i>n} 1/i^2 < 1/n`).
    Reciprocal {
        scale: f64,
        n: usize,
        #[serde(default)]
        tail: bool,
    },
}

impl Z0Spec {
    pub fn to_state(&self) -> Result<L2State> {
        match self {
            Self::Explicit { coords, tail_norm } => L2State::new(coords.clone(), *tail_norm),
            Self::Reciprocal { scale, n, tail } => {
                if !scale.is_finite() {
                    return Err(GameError::NonFinite { field: "z0" });
                }
                let coords = (1..=*n).map(|i| scale / i as f64).collect();
                let tail_norm = if *tail && *n > 0 {
                    scale.abs() / (*n as f64).sqrt()
                } else {
                    0.0
                };
                L2State::new(coords, tail_norm)
            }
        }
    }
}

/// Raw parameter bundle of the game.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameParams {
    pub lambdas: LambdaSpec,
    pub z0: Z0Spec,
    pub rho: f64,
    pub sigma: f64,
}

impl GameParams {
    pub fn explicit(lambdas: Vec<f64>, z0: Vec<f64>, rho: f64, sigma: f64) -> Self {
        Self {
            lambdas: LambdaSpec::Explicit { values: lambdas },
            z0: Z0Spec::Explicit {
                coords: z0,
                tail_norm: 0.0,
            },
            rho,
            sigma,
        }
    }

    pub fn validate(&self) -> Result<Game> {
        validate_params(self)
    }
}

/// A validated game with materialized rates and initial state.
///
/// Coordinates are stored 0-based; `lambdas[k]` is `lambda_{k+1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Game {
    pub params: GameParams,
    pub lambdas: Vec<f64>,
    pub z0: L2State,
    pub z0_norm: f64,
}

impl Game {
    pub fn dim(&self) -> usize {
        self.lambdas.len()
    }

    pub fn rho(&self) -> f64 {
        self.params.rho
    }

    pub fn sigma(&self) -> f64 {
        self.params.sigma
    }

    /// `||z0|| / (rho - sigma)`, the baseline time and the constant `c` of
    /// the monotonicity argument.
    pub fn ratio(&self) -> f64 {
        self.z0_norm / (self.params.rho - self.params.sigma)
    }
}

/// Validates `p` and materializes it. Accepts exactly the bundles with all
/// rates positive, `rho > sigma >= 0`, `||z0|| > 0` and everything finite.
pub fn validate_params(p: &GameParams) -> Result<Game> {
    if !p.rho.is_finite() {
        return Err(GameError::NonFinite { field: "rho" });
    }
    if !p.sigma.is_finite() {
        return Err(GameError::NonFinite { field: "sigma" });
    }
    if p.lambdas.is_empty() {
        return Err(GameError::EmptyLambdas);
    }
    p.lambdas.check_positive()?;
    let z0 = p.z0.to_state()?;
    if p.sigma < 0.0 {
        return Err(GameError::NegativeSigma(p.sigma));
    }
    if p.rho <= p.sigma {
        return Err(GameError::BudgetOrder {
            rho: p.rho,
            sigma: p.sigma,
        });
    }
    let n = p.lambdas.len();
    if z0.dim() > n {
        return Err(GameError::DimensionMismatch {
            coords: z0.dim(),
            lambdas: n,
        });
    }
    if z0.tail_norm > 0.0 && !p.lambdas.is_family() {
        return Err(GameError::TailWithoutFamily {
            tail_norm: z0.tail_norm,
        });
    }
    let lambdas = materialize_lambdas(&p.lambdas, n)?;
    let mut coords = z0.coords;
    coords.resize(n, 0.0);
    let z0 = L2State::new(coords, z0.tail_norm)?;
    let z0_norm = l2_norm(&z0);
    if !z0_norm.is_finite() {
        return Err(GameError::NonFinite { field: "z0" });
    }
    if z0_norm == 0.0 {
        return Err(GameError::ZeroInitialState);
    }
    Ok(Game {
        params: p.clone(),
        lambdas,
        z0,
        z0_norm,
    })
}

/// Uniform mesh on `[0, horizon]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    t0: f64,
    horizon: f64,
    steps: usize,
}

impl TimeGrid {
    pub fn new(horizon: f64, steps: usize) -> Result<Self> {
        if !horizon.is_finite() {
            return Err(GameError::NonFinite { field: "horizon" });
        }
        if horizon <= 0.0 {
            return Err(GameError::InvalidArgument {
                name: "horizon",
                value: horizon,
            });
        }
        if steps == 0 {
            return Err(GameError::InvalidArgument {
                name: "steps",
                value: 0.0,
            });
        }
        Ok(Self {
            t0: 0.0,
            horizon,
            steps,
        })
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn h(&self) -> f64 {
        (self.horizon - self.t0) / self.steps as f64
    }

    /// Grid point `k`; the last point is exactly `horizon`.
    pub fn point(&self, k: usize) -> f64 {
        if k >= self.steps {
            self.horizon
        } else {
            self.t0 + k as f64 * self.h()
        }
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=self.steps).map(|k| self.point(k))
    }
}
