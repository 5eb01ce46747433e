//! Linear pursuit-evasion game on l2 with geometric control constraints:
//!
//! ```text
//! z_i' = -lambda_i z_i + u_i - v_i,   ||u|| <= rho,   ||v|| <= sigma < rho
//! ```
//!
//! The crate builds the pursuer's counter-strategy, computes the guaranteed
//! pursuit time `T = ln(1 + lambda c) / lambda` at `lambda = inf lambda_i`,
//! `c = ||z0|| / (rho - sigma)`, simulates games exactly under zero-order-hold
//! controls, and checks every identity the capture argument relies on.

pub mod cli;
pub mod dynamics;
pub mod error;
pub mod model;
pub mod pursuit_time;
pub mod sim;
pub mod strategy;

pub use dynamics::{
    closed_form_before_switch, closed_form_under_strategy, exact_step, integral_identity_residual,
    rk4_step, SegmentInput,
};
pub use error::{GameError, Result};
pub use model::{
    l2_norm, materialize_lambdas, validate_params, Game, GameParams, L2State, LambdaSpec,
    TimeGrid, Z0Spec,
};
pub use pursuit_time::{
    baseline_time, coordinate_capture_time, guaranteed_time, monotonicity_profile, PursuitTimes,
};
pub use sim::{
    admissibility_audit, run_game, tail_bound, CaptureReport, ControlSignal, EvaderPolicy,
    GameRun, RunOptions,
};
pub use strategy::{build_strategy, PursuerStrategy};
