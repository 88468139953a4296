use thiserror::Error;

/// Machine-readable diagnostic codes shared by the solvers and the CLI.
pub mod codes {
    pub const UNNATURAL_DISCRETIZATION: &str = "E_UNNATURAL_DISCRETIZATION";
    pub const NO_BOUNDARY_DATA_USED: &str = "W_NO_BOUNDARY_DATA_USED";
    pub const SINGULAR_SYSTEM: &str = "E_SINGULAR_SYSTEM";
    pub const DROPPED_TERM_NONVANISHING: &str = "E_DROPPED_TERM_NONVANISHING";
    pub const DEGENERATE_NODE_NUDGED: &str = "W_DEGENERATE_NODE_NUDGED";
    pub const NEUMANN_CORNER_MISMATCH: &str = "W_NEUMANN_CORNER_MISMATCH";
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid stencil: {0}")]
    InvalidStencil(String),
    #[error("invalid problem: {}", .0.iter().map(|v| v.code).collect::<Vec<_>>().join(", "))]
    InvalidSpec(Vec<crate::model::Violation>),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("case {case} does not match the problem: {reason}")]
    CaseMismatch { case: String, reason: String },
    #[error("initial data has no decay bound and no closed form")]
    MissingDecay,
    #[error("boundary data lacks derivative of order {0}")]
    MissingDerivative(usize),
    #[error("quadrature tolerance unmet: estimate {estimate:e} > target {target:e}")]
    Quadrature { estimate: f64, target: f64 },
    #[error("root finder failed to converge at k = {k}")]
    RootFinding { k: num_complex::Complex64 },
    #[error("ambiguous root tracking at sample {index}")]
    RootTracking { index: usize },
    #[error("{}: {deficit} equation(s) short for unknown node(s) {unknowns:?}", codes::UNNATURAL_DISCRETIZATION)]
    Unnatural { deficit: usize, unknowns: Vec<i32> },
    #[error("{}: boundary system singular at k = {k}", codes::SINGULAR_SYSTEM)]
    SingularSystem { k: f64 },
    #[error("{}: dropped term for symmetry {symmetry} does not vanish", codes::DROPPED_TERM_NONVANISHING)]
    DroppedTermNonvanishing { symmetry: usize },
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("config error: {0}")]
    Config(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("csv error: {0}")]
    Csv(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stable diagnostic code for the error.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidStencil(_) => "E_INVALID_STENCIL",
            Error::InvalidSpec(_) => "E_INVALID_SPEC",
            Error::InvalidArgument(_) => "E_INVALID_ARGUMENT",
            Error::CaseMismatch { .. } => "E_CASE_MISMATCH",
            Error::MissingDecay => "E_MISSING_DECAY",
            Error::MissingDerivative(_) => "E_MISSING_DERIVATIVE",
            Error::Quadrature { .. } => "E_QUADRATURE",
            Error::RootFinding { .. } => "E_ROOT_FINDING",
            Error::RootTracking { .. } => "E_ROOT_TRACKING",
            Error::Unnatural { .. } => codes::UNNATURAL_DISCRETIZATION,
            Error::SingularSystem { .. } => codes::SINGULAR_SYSTEM,
            Error::DroppedTermNonvanishing { .. } => codes::DROPPED_TERM_NONVANISHING,
            Error::Parse { .. } => "E_PARSE",
            Error::Config(_) => "E_CONFIG",
            Error::Unsupported(_) => "E_UNSUPPORTED",
            Error::Csv(_) => "E_CSV",
            Error::Io(_) => "E_IO",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
