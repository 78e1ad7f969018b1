use thiserror::Error;

/// Errors raised by the laboratory. Numerical failures that are part of a
/// verdict (a failed check, a diverged flow) are reported in data, not here.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("basis index {0} out of range 1..=3")]
    BasisIndex(usize),
    #[error("matrix is not trace-free (|trace| = {0:e})")]
    NotTraceFree(f64),
    #[error("U is undefined at the origin")]
    ZeroPoint,
    #[error("t must be positive, got {0}")]
    NonPositiveTime(f64),
    #[error("point lies on the axis z = 0")]
    OnAxis,
    #[error("step {h:e} too large for distance {dist:e} from the axis")]
    StepTooLarge { h: f64, dist: f64 },
    #[error("degree {p} is below the vanishing order {m}; the construction has a pole")]
    Pole { p: u32, m: u32 },
    #[error("mesh too coarse: {got} < {min}")]
    MeshTooCoarse { got: usize, min: usize },
    #[error("not converged under refinement: {0}")]
    NotConverged(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("dt = {dt:e} exceeds the stability bound 0.2*h = {bound:e}; suggested dt = {suggested:e}")]
    Cfl { dt: f64, bound: f64, suggested: f64 },
    #[error("zero-mode contamination {0:e} exceeds 1e-12")]
    ZeroModeContamination(f64),
    #[error("contraction failed: observed Lipschitz estimate {0:.4}")]
    ContractionFailure(f64),
    #[error("support precondition violated: {0}")]
    Support(String),
    #[error("trace not converged: {0}")]
    NonConvergedTrace(String),
    #[error("ambiguous exponent fit: {0}")]
    AmbiguousFit(String),
    #[error("unknown suite '{0}'")]
    UnknownSuite(String),
    #[error("config field '{field}': {msg}")]
    Config { field: String, msg: String },
    #[error("i/o: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
