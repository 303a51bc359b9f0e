use thiserror::Error;

/// Errors raised by the model, the solvers and the configuration layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameters: {}", .0.join("; "))]
    Invalid(Vec<String>),

    #[error("no unique steady state (condition estimate {condition:.3e})")]
    NoUniqueSteadyState { condition: f64 },

    #[error("singular point: {0}")]
    Singular(String),

    #[error("eigenvalue solver did not converge")]
    EigenNonConvergence,

    #[error("step size underflow at t = {time}")]
    StepUnderflow { time: f64 },

    #[error("did not settle by t = {time} (residual {residual:.3e})")]
    NotSettled { time: f64, residual: f64 },

    #[error("system is unstable (stability margin {margin:.6})")]
    Unstable { margin: f64 },

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },
}

impl Error {
    /// True for errors that originate in user input rather than numerics.
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            Error::Invalid(_) | Error::Config(_) | Error::Unknown { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
