use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid model: M must be a positive integer, got {0}")]
    InvalidModel(i64),
    #[error("dimension {requested} exceeds the supported maximum {max}")]
    DimensionTooLarge { requested: usize, max: usize },
    #[error("basis label m = {label} is outside -j..=j for j = {j}")]
    LabelOutOfRange { label: f64, j: f64 },
    #[error("root index {index} is outside 1..={dimension}")]
    IndexOutOfRange { index: usize, dimension: usize },
    #[error("truncation {n_trunc} cannot hold the physical subspace of dimension {dimension}")]
    TruncationTooSmall { n_trunc: usize, dimension: usize },
    #[error("phase is undefined at the origin of the ({0}) plane")]
    UndefinedPhase(&'static str),
    #[error("finite-difference stencil touches a degenerate point: {0}")]
    DegeneratePoint(String),
    #[error("action I1 = {action} is outside [0, {total}]")]
    ActionOutOfRange { action: f64, total: f64 },
    #[error("series does not converge for |z| = {modulus}")]
    NonConvergent { modulus: f64 },
    #[error("caustic: t - t' = {delta} is within {tolerance:e} of a multiple of pi")]
    Caustic { delta: f64, tolerance: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid configuration: {0}")]
    Config(String),
}
