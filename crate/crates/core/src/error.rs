use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {op} of {lhs:?} and {rhs:?}")]
    DimensionMismatch {
        op: &'static str,
        lhs: (usize, usize),
        rhs: (usize, usize),
    },
    #[error("matrix dimensions {0:?} outside supported range 1..=16")]
    UnsupportedDimension((usize, usize)),
    #[error("matrix is not square: {0:?}")]
    NotSquare((usize, usize)),
    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),
    #[error("matrix is not symmetric (max deviation {0:e})")]
    AsymmetricMatrix(f64),
    #[error("Jacobi iteration did not converge after {0} sweeps")]
    NoConvergence(usize),
    #[error("invalid density matrix: {0}")]
    InvalidState(String),
    #[error("parameter {name} = {value} outside [{lo}, {hi}]")]
    ParameterOutOfRange {
        name: String,
        value: f64,
        lo: f64,
        hi: f64,
    },
    #[error("unphysical parameters: {0}")]
    Unphysical(String),
    #[error("expectation value has imaginary residue {0:e}")]
    ImaginaryResidue(f64),
    #[error("negative outcome probability {0:e}")]
    NegativeProbability(f64),
    #[error("state is not swap-symmetric; {criterion} requires F rho F = rho")]
    NotSymmetric { criterion: &'static str },
    #[error("Ginibre rank {0} outside 1..=4")]
    InvalidRank(usize),
    #[error("invalid grid: {0}")]
    Grid(String),
    #[error("grid has {0} points, more than the limit of {limit}", limit = crate::tol::MAX_GRID_POINTS)]
    OversizeGrid(u128),
    #[error("unknown parameter `{0}`")]
    UnknownParameter(String),
    #[error("missing value for parameter `{0}`")]
    MissingParameter(String),
    #[error("verdict is the same at both endpoints {lo} and {hi}")]
    NoSignChange { lo: f64, hi: f64 },
    #[error("state at {name} = {value} is unphysical")]
    UnphysicalEndpoint { name: String, value: f64 },
    #[error("{0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
