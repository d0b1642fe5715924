use std::path::PathBuf;

use thiserror::Error;

use crate::binomial::TailConvention;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter is outside its domain.
    #[error("invalid {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: String,
        reason: &'static str,
    },

    /// Even the most extreme success count does not reach the threshold.
    #[error("no success count reaches p <= {alpha} with n = {n} ({tail}-sided test)")]
    Infeasible {
        n: u64,
        alpha: f64,
        tail: TailConvention,
    },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// Sweep output that could not be written or read back.
    #[error("sweep data: {0}")]
    Format(String),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, value: impl ToString, reason: &'static str) -> Self {
        Error::InvalidParameter {
            name,
            value: value.to_string(),
            reason,
        }
    }
}

/// Checks `0 < value < 1`.
pub(crate) fn open_unit(name: &'static str, value: f64) -> Result<f64> {
    if value > 0.0 && value < 1.0 {
        Ok(value)
    } else {
        Err(Error::invalid(
            name,
            value,
            "must lie strictly between 0 and 1",
        ))
    }
}
