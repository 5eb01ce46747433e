use thiserror::Error;

pub type Result<T> = std::result::Result<T, GameError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GameError {
    #[error("lambda_{index} = {value} is not strictly positive")]
    NonPositiveLambda { index: usize, value: f64 },

    #[error("pursuer budget rho = {rho} must exceed evader budget sigma = {sigma}")]
    BudgetOrder { rho: f64, sigma: f64 },

    #[error("evader budget sigma = {0} is negative")]
    NegativeSigma(f64),

    #[error("initial state z0 has zero norm; capture is immediate and the strategy is undefined")]
    ZeroInitialState,

    #[error("{field} is not finite")]
    NonFinite { field: &'static str },

    #[error("lambda sequence is empty")]
    EmptyLambdas,

    #[error("z0 has {coords} explicit coordinates but only {lambdas} lambdas are materialized")]
    DimensionMismatch { coords: usize, lambdas: usize },

    #[error("z0 tail norm {tail_norm} requires a parametric lambda family (explicit lists have no tail)")]
    TailWithoutFamily { tail_norm: f64 },

    #[error("invalid argument {name} = {value}")]
    InvalidArgument { name: &'static str, value: f64 },

    #[error("horizon {horizon} is shorter than the guaranteed pursuit time {required}")]
    HorizonTooShort { horizon: f64, required: f64 },

    #[error("evader control at t = {t} has norm {norm} > sigma = {sigma}")]
    EvaderInadmissible { t: f64, norm: f64, sigma: f64 },

    #[error("configuration error: {0}")]
    Config(String),
}
