use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("sector dimension for L={modes}, N={particles} does not fit in 63 bits")]
    DimensionOverflow { modes: usize, particles: usize },

    #[error("a sector needs at least one mode")]
    NoModes,

    #[error("occupation {counts:?} does not belong to sector L={modes}, N={particles}")]
    InvalidOccupation {
        counts: Vec<usize>,
        modes: usize,
        particles: usize,
    },

    #[error("rank {rank} out of range for sector of dimension {dimension}")]
    RankOutOfRange { rank: usize, dimension: usize },

    #[error("hopping needs two distinct vertices, got {0} twice")]
    SameVertex(usize),

    #[error("vertex {vertex} out of range for {modes} modes")]
    VertexOutOfRange { vertex: usize, modes: usize },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("graph parse error on line {line}: {message}")]
    GraphParse { line: usize, message: String },

    #[error("invalid couplings tau={tau}, epsilon={epsilon}: {reason}")]
    InvalidCouplings {
        tau: f64,
        epsilon: f64,
        reason: &'static str,
    },

    #[error("vector length {got} does not match sector dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("dense eigensolve refused: dimension {dimension} exceeds guard {limit}")]
    DenseTooLarge { dimension: usize, limit: usize },

    #[error("lanczos did not converge in {iterations} iterations (best residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },

    #[error("entanglement normalisation undefined for N = 0")]
    ZeroParticles,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("derivative has no interior peak on the grid")]
    NoInteriorPeak,

    #[error("ground-state solve failed at tau = {tau}: {source}")]
    SweepPoint {
        tau: f64,
        #[source]
        source: Box<Error>,
    },
}
