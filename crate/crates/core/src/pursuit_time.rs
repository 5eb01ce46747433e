//! Closed-form guaranteed pursuit times.
//!
//! With `c = ||z0|| / (rho - sigma)`, coordinate `i` is driven to zero at
//! `T_i = ln(1 + lambda_i c) / lambda_i`. As a function of the rate this is
//! `f(x) = ln(1 + c x) / x`, which is strictly decreasing on `x > 0` since
//! `f'(x) = g(x) / x^2` with `g(x) = 1 - 1/(cx + 1) - ln(cx + 1) < 0`. The
//! supremum over coordinates therefore sits at the smallest rate, and it is
//! always strictly below the baseline `c`, the `lambda -> 0` limit of `f`.

use crate::error::{GameError, Result};
use crate::model::{argmin, Game};

/// Rates at or below this are treated as the `lambda -> 0` limit.
pub const DEGENERATE_RATE: f64 = 1e-12;

/// `ln(1 + lambda c) / lambda` for `lambda > 0`, `c >= 0`.
pub(crate) fn capture_time_from_ratio(lambda: f64, c: f64) -> f64 {
    (lambda * c).ln_1p() / lambda
}

/// Time at which the counter-strategy zeroes a coordinate with rate `lambda_i`.
pub fn coordinate_capture_time(lambda_i: f64, z0_norm: f64, rho: f64, sigma: f64) -> Result<f64> {
    for (name, value) in [
        ("lambda_i", lambda_i),
        ("z0_norm", z0_norm),
        ("rho", rho),
        ("sigma", sigma),
    ] {
        if !value.is_finite() {
            return Err(GameError::InvalidArgument { name, value });
        }
    }
    if lambda_i <= 0.0 {
        return Err(GameError::InvalidArgument {
            name: "lambda_i",
            value: lambda_i,
        });
    }
    if z0_norm <= 0.0 {
        return Err(GameError::InvalidArgument {
            name: "z0_norm",
            value: z0_norm,
        });
    }
    if sigma < 0.0 {
        return Err(GameError::NegativeSigma(sigma));
    }
    if rho <= sigma {
        return Err(GameError::BudgetOrder { rho, sigma });
    }
    Ok(capture_time_from_ratio(lambda_i, z0_norm / (rho - sigma)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct PursuitTimes {
    /// `T_i` for each materialized coordinate.
    pub per_coordinate: Vec<f64>,
    /// `T`, the supremum of `T_i` over the whole sequence.
    pub guaranteed: f64,
    /// `T0 = ||z0|| / (rho - sigma)`.
    pub baseline: f64,
    /// Infimum of the full rate sequence.
    pub lambda_inf: f64,
    /// 1-based index of the smallest materialized rate (lowest on ties).
    pub argmin_lambda_index: usize,
    /// False when the infimum is not attained by any coordinate; `T` is then
    /// the limit `T0` and no single `T_i` reaches it.
    pub inf_attained: bool,
    /// True when `T` was taken from the `lambda -> 0` limit.
    pub limit_regime: bool,
}

impl PursuitTimes {
    pub fn improvement_ratio(&self) -> f64 {
        self.guaranteed / self.baseline
    }
}

pub fn baseline_time(game: &Game) -> f64 {
    game.ratio()
}

pub fn guaranteed_time(game: &Game) -> PursuitTimes {
    let c = game.ratio();
    let per_coordinate: Vec<f64> = game
        .lambdas
        .iter()
        .map(|&l| capture_time_from_ratio(l, c))
        .collect();
    let (k, _) = argmin(&game.lambdas);
    let inf = game.params.lambdas.infimum();
    let limit_regime = inf.value <= DEGENERATE_RATE;
    let guaranteed = if limit_regime {
        c
    } else {
        capture_time_from_ratio(inf.value, c)
    };
    if inf.attained_at.is_some() && !limit_regime {
        let max = per_coordinate.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        debug_assert!(
            (max - guaranteed).abs() <= 1e-12 * guaranteed,
            "sup T_i = {max} disagrees with T = {guaranteed}"
        );
    }
    PursuitTimes {
        per_coordinate,
        guaranteed,
        baseline: c,
        lambda_inf: inf.value,
        argmin_lambda_index: k + 1,
        inf_attained: inf.attained_at.is_some(),
        limit_regime,
    }
}

/// `f(x) = ln(cx + 1) / x`.
pub fn profile_f(c: f64, x: f64) -> f64 {
    capture_time_from_ratio(x, c)
}

/// `g(x) = 1 - 1/(cx + 1) - ln(cx + 1)`, evaluated as `y/(1+y) - ln(1+y)`
/// with `y = cx` (series for small `y`) so the sign survives rounding.
pub fn profile_g(c: f64, x: f64) -> f64 {
    let y = c * x;
    if y < 1e-3 {
        // sum_{k>=2} (-1)^{k+1} (1 - 1/k) y^k
        let mut term = y;
        let mut sum = 0.0;
        for k in 2..=9 {
            term *= -y;
            sum += (1.0 - 1.0 / k as f64) * term;
        }
        sum
    } else {
        y / (1.0 + y) - y.ln_1p()
    }
}

/// `g'(x) = -c^2 x / (cx + 1)^2`.
pub fn profile_g_prime(c: f64, x: f64) -> f64 {
    let d = c * x + 1.0;
    -(c * c * x) / (d * d)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfilePoint {
    pub x: f64,
    pub f: f64,
    pub g: f64,
    pub g_prime: f64,
}

/// Samples `f`, `g`, `g'` at each `x`.
pub fn monotonicity_profile(c: f64, xs: &[f64]) -> Result<Vec<ProfilePoint>> {
    if !(c.is_finite() && c > 0.0) {
        return Err(GameError::InvalidArgument { name: "c", value: c });
    }
    xs.iter()
        .map(|&x| {
            if !(x.is_finite() && x > 0.0) {
                return Err(GameError::InvalidArgument { name: "x", value: x });
            }
            Ok(ProfilePoint {
                x,
                f: profile_f(c, x),
                g: profile_g(c, x),
                g_prime: profile_g_prime(c, x),
            })
        })
        .collect()
}

/// `count` log-spaced points on `[lo, hi]`, endpoints included.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let (a, b) = (lo.ln(), hi.ln());
            (0..count)
                .map(|k| match k {
                    0 => lo,
                    k if k + 1 == count => hi,
                    k => (a + (b - a) * k as f64 / (count - 1) as f64).exp(),
                })
                .collect()
        }
    }
}
