//! The pursuer's counter-strategy.
//!
//! On `[0, T_i]` the pursuer plays `u_i = -(z_i0 / ||z0||)(rho - sigma) + v_i`
//! and afterwards mirrors the evader, `u_i = v_i`. The relative control
//! `u_i - v_i` is therefore independent of the evader, and by Minkowski
//! `||u|| <= (rho - sigma) + sigma = rho`.
//!
//! The strategy reads the evader's *current* control value, which is a
//! stronger information pattern than state feedback.

use crate::error::{GameError, Result};
use crate::model::{l2_norm, Game, L2State};
use crate::pursuit_time::{capture_time_from_ratio, DEGENERATE_RATE};

/// Slack allowed on control-norm constraints.
pub const NORM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct PursuerStrategy {
    /// `z_i0 / ||z0||` for the materialized coordinates.
    pub direction: Vec<f64>,
    /// `tail_norm(z0) / ||z0||`: norm of the direction past the truncation.
    pub tail_direction_norm: f64,
    /// `rho - sigma`.
    pub thrust: f64,
    /// `T_i` per materialized coordinate.
    pub switch_times: Vec<f64>,
    /// Supremum of the tail coordinates' switch times, when there is a tail.
    pub tail_switch_sup: Option<f64>,
    pub z0_norm: f64,
    pub rho: f64,
    pub sigma: f64,
}

pub fn build_strategy(game: &Game) -> Result<PursuerStrategy> {
    let z0_norm = game.z0_norm;
    #[allow(clippy::neg_cmp_op_on_partial_ord)] // also rejects NaN
    if !(z0_norm > 0.0) {
        return Err(GameError::ZeroInitialState);
    }
    let c = game.ratio();
    let direction = game.z0.coords.iter().map(|z| z / z0_norm).collect();
    let switch_times = game
        .lambdas
        .iter()
        .map(|&l| capture_time_from_ratio(l, c))
        .collect();
    let tail_switch_sup = if game.z0.tail_norm > 0.0 {
        game.params
            .lambdas
            .tail_infimum(game.dim())
            .map(|inf| if inf <= DEGENERATE_RATE { c } else { capture_time_from_ratio(inf, c) })
    } else {
        None
    };
    Ok(PursuerStrategy {
        direction,
        tail_direction_norm: game.z0.tail_norm / z0_norm,
        thrust: game.rho() - game.sigma(),
        switch_times,
        tail_switch_sup,
        z0_norm,
        rho: game.rho(),
        sigma: game.sigma(),
    })
}

impl PursuerStrategy {
    pub fn dim(&self) -> usize {
        self.direction.len()
    }

    /// Whether coordinate `i` (0-based) still carries thrust at `t`. The
    /// switch instant itself belongs to the thrust phase.
    pub fn is_active(&self, i: usize, t: f64) -> bool {
        t <= self.switch_times[i]
    }

    /// Bound on the norm of the pursuer's tail components at `t`.
    pub fn tail_control_bound(&self, t: f64) -> f64 {
        match self.tail_switch_sup {
            Some(sup) if t <= sup => self.thrust * self.tail_direction_norm,
            _ => 0.0,
        }
    }

    /// Pursuer control at `t` given the evader's current value `v` (over the
    /// materialized coordinates; evader tail components are zero). The
    /// result's tail norm bounds the pursuer's own tail components.
    pub fn pursuer_control(&self, t: f64, v: &[f64]) -> Result<L2State> {
        self.check_evader(t, v)?;
        let coords = (0..self.dim())
            .map(|i| {
                let vi = v.get(i).copied().unwrap_or(0.0);
                if self.is_active(i, t) {
                    -self.direction[i] * self.thrust + vi
                } else {
                    vi
                }
            })
            .collect();
        Ok(L2State {
            coords,
            tail_norm: self.tail_control_bound(t),
        })
    }

    fn check_evader(&self, t: f64, v: &[f64]) -> Result<()> {
        if v.len() > self.dim() {
            return Err(GameError::InvalidArgument {
                name: "v.len",
                value: v.len() as f64,
            });
        }
        if v.iter().any(|x| !x.is_finite()) {
            return Err(GameError::NonFinite { field: "v" });
        }
        let norm = l2_norm(&L2State {
            coords: v.to_vec(),
            tail_norm: 0.0,
        });
        if norm > self.sigma + NORM_TOL {
            return Err(GameError::EvaderInadmissible {
                t,
                norm,
                sigma: self.sigma,
            });
        }
        Ok(())
    }

    /// `min over samples of rho - ||u(0, v)||`, taken at `t = 0` where every
    /// coordinate carries thrust.
    pub fn admissibility_margin(&self, v_samples: &[Vec<f64>]) -> Result<f64> {
        if v_samples.is_empty() {
            return Err(GameError::InvalidArgument {
                name: "v_samples.len",
                value: 0.0,
            });
        }
        v_samples.iter().try_fold(f64::INFINITY, |m, v| {
            let u = self.pursuer_control(0.0, v)?;
            Ok(m.min(self.rho - u.norm()))
        })
    }
}
