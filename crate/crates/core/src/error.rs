use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// |d| = 0: the gap closes and no direction is defined.
    #[error("degenerate d-vector")]
    DegenerateDVector,

    /// A degenerate d-vector at a specific momentum of a quench.
    #[error("degenerate d-vector in the {role} Hamiltonian at k = {k}")]
    DegenerateMode { k: f64, role: &'static str },

    #[error("degenerate triple: points are collinear or coincident")]
    DegenerateTriple,

    #[error("invalid model table: {0}")]
    InvalidTable(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("quadrature did not converge: estimated error {achieved:e} > requested {requested:e}")]
    QuadratureNonConvergence { achieved: f64, requested: f64 },

    #[error("missing tomography records for k = {0:?}")]
    MissingModes(Vec<f64>),

    #[error("too few valid radius estimates ({0}); need at least 3")]
    TooFewRadii(usize),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// True for failures caused by a gap closing somewhere on the grid.
    pub fn is_degenerate(&self) -> bool {
        matches!(
            self,
            Error::DegenerateDVector | Error::DegenerateMode { .. }
        )
    }
}
