use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("too few samples: got {got}, need at least {need}")]
    TooFewSamples { got: usize, need: usize },

    #[error("degenerate data: {0}")]
    DegenerateData(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("quadrature did not converge (error estimate {error_estimate:.3e}, tolerance {tolerance:.3e})")]
    QuadratureNonConvergence { error_estimate: f64, tolerance: f64 },

    #[error("exponential fit failed: {0}")]
    FitFailure(String),

    #[error("flight {0} cannot be separated from itself")]
    SameFlight(String),

    #[error("traffic factor {0} outside [1, 2]")]
    BadFactor(f64),

    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    #[error("incomplete assignment: {0}")]
    IncompleteAssignment(String),

    #[error("infeasible input: {0}")]
    InfeasibleInput(String),

    #[error("no feasible gate for flight {flight} among {gates} gates")]
    NoFeasibleGate { flight: String, gates: usize },

    #[error("no feasible starting assignment")]
    NoFeasibleStart,

    #[error("no feasible assignment exists")]
    Infeasible,

    #[error("instance too large for enumeration: {gates}^{flights} assignments")]
    TooLarge { gates: usize, flights: usize },

    #[error("gate {gate} has no geometry in a ramp with {ramp_gates} gates")]
    MissingGeometry { gate: usize, ramp_gates: usize },

    #[error("bad ramp dimensions: {0}")]
    BadDimensions(String),

    #[error("{context}: {message}")]
    Parse { context: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn parse(context: impl Into<String>, message: impl ToString) -> Self {
        Error::Parse {
            context: context.into(),
            message: message.to_string(),
        }
    }
}
