use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("eccentricity {0} outside the admissible domain: {1}")]
    EccentricityDomain(f64, String),

    #[error("{what} did not converge after {iterations} iterations (last residual {residual:e})")]
    NoConvergence {
        what: &'static str,
        iterations: usize,
        residual: f64,
    },

    #[error("degenerate orbital radius |rho| = {0:e}")]
    DegenerateRadius(f64),

    #[error("Fourier index j = 0 has no coefficient in the potential expansion")]
    ZeroFourierIndex,

    #[error("quadrature unresolved with {nodes} nodes: refinements differ by {difference:e}")]
    QuadratureUnresolved { nodes: usize, difference: f64 },

    #[error("unsupported resonance {p}:{q}; only 1:1 and 3:2 are covered")]
    UnsupportedResonance { p: i64, q: i64 },

    #[error("input function has nonzero mean {0:e}")]
    NonzeroMean(f64),

    #[error("spectrum not resolved with {modes} modes: tail energy ratio {ratio:e}; increase the number of modes")]
    Aliasing { modes: usize, ratio: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("bifurcation equation: {0}")]
    Bifurcation(String),

    #[error("non-finite state at t = {0}")]
    NonFinite(f64),

    #[error("catalog line {line}: {message}")]
    Catalog { line: usize, message: String },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}
