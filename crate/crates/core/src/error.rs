use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("value {value} outside the domain [0, 1] of {function}")]
    Domain { function: &'static str, value: f64 },

    #[error("work limit exceeded: {what} would need {needed}, limit is {limit}")]
    WorkLimit {
        what: &'static str,
        needed: u128,
        limit: u64,
    },

    #[error("search budget of {limit} nodes exhausted in {what}")]
    Budget { what: &'static str, limit: u64 },

    #[error("no sign change for the increment equation at p = {p} (bracket widened to {width})")]
    Bracket { p: f64, width: f64 },

    #[error("increment equation at p = {p}: {detail}")]
    Solver { p: f64, detail: String },
}

impl Error {
    /// True for failures of a computation on valid input (budgets, solver
    /// brackets), as opposed to rejected arguments.
    pub fn is_computation_failure(&self) -> bool {
        matches!(
            self,
            Error::WorkLimit { .. } | Error::Budget { .. } | Error::Bracket { .. } | Error::Solver { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
