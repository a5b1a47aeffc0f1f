use std::path::PathBuf;

use thiserror::Error;

use crate::dynamics::TrajectoryRecord;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("wrong regime: {0}")]
    WrongRegime(String),

    #[error("insufficient data: {found} points in fit window, need at least {required}")]
    InsufficientData { found: usize, required: usize },

    #[error("degenerate spectrum: zero magnitude at xi = {xi}")]
    DegenerateSpectrum { xi: f64 },

    #[error("empty window: upper edge {hi} does not exceed lower edge {lo}")]
    EmptyWindow { lo: f64, hi: f64 },

    #[error("linearized operator lost ellipticity: min diagonal coefficient {min_coefficient:e}")]
    LostEllipticity { min_coefficient: f64 },

    #[error("tridiagonal solve inaccurate: residual {residual:e} against rhs norm {rhs_norm:e}")]
    InaccurateSolve { residual: f64, rhs_norm: f64 },

    #[error("fixed-point iteration diverged at iteration {iteration}: |v|_inf = {norm:e} exceeds guard {guard:e}")]
    Divergence {
        iteration: usize,
        norm: f64,
        guard: f64,
    },

    #[error("solution blew up at t = {time}")]
    BlowUp {
        time: f64,
        record: Box<TrajectoryRecord>,
    },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for failures of the numerics (divergence, blow-up, lost ellipticity)
    /// as opposed to bad parameters.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Divergence { .. }
                | Error::BlowUp { .. }
                | Error::LostEllipticity { .. }
                | Error::InaccurateSolve { .. }
        )
    }
}
