//! Per-coordinate solutions of `z' = -lambda z + w`.
//!
//! Under a zero-order-hold control `w` the variation-of-constants formula
//! integrates exactly, so `exact_step` is the propagator used by the engine.
//! `rk4_step` is an independent oracle that shares none of that code.

use crate::error::{GameError, Result};
use crate::strategy::PursuerStrategy;

/// One hold interval of a single coordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmentInput {
    pub lambda: f64,
    pub z_start: f64,
    /// Relative control `u_i - v_i`, constant on the segment.
    pub w: f64,
    pub h: f64,
}

impl SegmentInput {
    pub fn new(lambda: f64, z_start: f64, w: f64, h: f64) -> Result<Self> {
        for (name, value) in [("lambda", lambda), ("z_start", z_start), ("w", w), ("h", h)] {
            if !value.is_finite() {
                return Err(GameError::InvalidArgument { name, value });
            }
        }
        if lambda <= 0.0 {
            return Err(GameError::InvalidArgument {
                name: "lambda",
                value: lambda,
            });
        }
        if h <= 0.0 {
            return Err(GameError::InvalidArgument { name: "h", value: h });
        }
        Ok(Self {
            lambda,
            z_start,
            w,
            h,
        })
    }
}

/// `e^{-lambda h} z + (w / lambda)(1 - e^{-lambda h})`.
pub fn exact_step(seg: &SegmentInput) -> f64 {
    propagate(seg.lambda, seg.z_start, seg.w, seg.h)
}

#[inline]
pub(crate) fn propagate(lambda: f64, z: f64, w: f64, h: f64) -> f64 {
    let decay = (-lambda * h).exp();
    // (1 - e^{-lambda h}) / lambda without cancellation for small lambda h
    let gain = -(-lambda * h).exp_m1() / lambda;
    decay * z + w * gain
}

/// Left-branch closed form
/// `z_i0 e^{-lambda t} (1 - (rho - sigma)(e^{lambda t} - 1) / (lambda ||z0||))`,
/// valid on `[0, T_i]`.
pub fn closed_form_before_switch(s: &PursuerStrategy, lambda_i: f64, z_i0: f64, t: f64) -> f64 {
    let c = s.z0_norm / s.thrust;
    z_i0 * ((-lambda_i * t).exp() + (-lambda_i * t).exp_m1() / (lambda_i * c))
}

/// Coordinate `i` of the trajectory under the counter-strategy, for any
/// admissible evader. Works for any coordinate given its rate and initial
/// value, materialized or not, since `u_i - v_i` does not depend on `v`.
pub fn closed_form_under_strategy(s: &PursuerStrategy, lambda_i: f64, z_i0: f64, t: f64) -> f64 {
    let c = s.z0_norm / s.thrust;
    let switch = crate::pursuit_time::capture_time_from_ratio(lambda_i, c);
    if t >= switch {
        0.0
    } else {
        closed_form_before_switch(s, lambda_i, z_i0, t)
    }
}

/// Classical RK4 step for `z' = -lambda z + w(s)`, `s` measured from the
/// start of the step.
pub fn rk4_step<F: Fn(f64) -> f64>(lambda: f64, z: f64, w: F, h: f64) -> f64 {
    let rhs = |s: f64, y: f64| -lambda * y + w(s);
    let k1 = rhs(0.0, z);
    let k2 = rhs(0.5 * h, z + 0.5 * h * k1);
    let k3 = rhs(0.5 * h, z + 0.5 * h * k2);
    let k4 = rhs(h, z + h * k3);
    z + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
}

/// `(e^{lambda T} - 1) / lambda - ||z0|| / (rho - sigma)`.
pub fn integral_identity_residual(lambda_i: f64, t_i: f64, z0_norm: f64, rho: f64, sigma: f64) -> f64 {
    (lambda_i * t_i).exp_m1() / lambda_i - z0_norm / (rho - sigma)
}
