use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{op}: argument outside the domain ({detail})")]
    Domain { op: &'static str, detail: String },

    #[error("Newton inversion did not converge after {iterations} steps (last iterate {last_re}{last_im:+}i, residual {residual:e})")]
    NoConvergence {
        iterations: usize,
        last_re: f64,
        last_im: f64,
        residual: f64,
    },

    #[error("point lies within {distance:e} of the sampled symbol curve")]
    CurveProximity { distance: f64 },

    #[error("Fourier coefficients reach index {available}, matrix of size {n} needs {needed}")]
    InsufficientCoefficients { n: usize, needed: i64, available: i64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("QR iteration failed to deflate eigenvalue {index} of {n} within {sweeps} sweeps")]
    EigenNoConvergence { n: usize, index: usize, sweeps: usize },

    #[error("singular {size}x{size} linear system (pivot {pivot:e})")]
    SingularSystem { size: usize, pivot: f64 },

    #[error("coefficient table is incomplete: {0}")]
    IncompleteTable(String),

    #[error("index {j} is not tracked by the extreme table for n = {n} (window {window})")]
    UntrackedIndex { j: usize, n: usize, window: usize },

    #[error("relative error undefined: exact value has modulus {0:e}")]
    DivisionByZero(f64),

    #[error("precompute failed at size {size}, index {index}: {source}")]
    Precompute {
        size: usize,
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("cache format: {0}")]
    CacheFormat(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn domain(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain { op, detail: detail.into() }
    }

    pub(crate) fn at(self, size: usize, index: usize) -> Self {
        Error::Precompute { size, index, source: Box::new(self) }
    }
}
