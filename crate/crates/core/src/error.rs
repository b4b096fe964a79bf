use thiserror::Error;

/// Errors raised by the evaluators, samplers and tables in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("no Haar sampler for {0}")]
    NoSampler(String),

    #[error("unknown group name `{0}`")]
    UnknownGroup(String),

    #[error("{group} is not transitive on the spheres of R^{n}")]
    NotTransitive { group: String, n: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("at least {min} samples required, got {got}")]
    TooFewSamples { min: usize, got: usize },

    #[error("quadrature needs at least {min} nodes, got {got}")]
    TooFewNodes { min: usize, got: usize },

    #[error("|lambda|*|x| = {requested:.3} exceeds the density's resolution budget {budget:.3}; refine the sphere rule")]
    RefinementNeeded { requested: f64, budget: f64 },

    #[error("radius near a Bessel zero: |J_{k}(lambda*r)| = {value:.3e} is below {threshold:.1e}")]
    NearBesselZero { k: i64, value: f64, threshold: f64 },

    #[error("matrix is not Hermitian: deviation {deviation:.3e} exceeds {tolerance:.1e}")]
    NotHermitian { deviation: f64, tolerance: f64 },

    #[error("Monte Carlo error {std_error:.3e} at entry ({i}, {j}) exceeds ceiling {ceiling:.3e}")]
    ErrorCeiling {
        i: usize,
        j: usize,
        std_error: f64,
        ceiling: f64,
    },

    #[error("operation not supported: {0}")]
    Unsupported(String),

    #[error("invalid constants file: {0}")]
    Constants(String),
}

pub type Result<T> = std::result::Result<T, Error>;
