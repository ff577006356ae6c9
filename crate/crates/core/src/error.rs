use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter or input violates its documented invariant.
    #[error("invalid input: {0}")]
    Validation(String),

    /// The inputs are individually valid but do not fit together (grid too
    /// small for the beam, mismatched binning, ...).
    #[error("configuration error: {0}")]
    Config(String),

    #[error("adaptive quadrature did not converge on [{a:e}, {b:e}] within depth {max_depth} (last error estimate {error_estimate:e})")]
    Quadrature {
        a: f64,
        b: f64,
        max_depth: u32,
        error_estimate: f64,
    },

    #[error("argument {x} out of range: {reason}")]
    Range { x: f64, reason: &'static str },

    #[error("phase is indeterminate on the loop: amplitude {amplitude:e} below floor {floor:e} at ({x:e}, {y:e})")]
    IndeterminatePhase {
        amplitude: f64,
        floor: f64,
        x: f64,
        y: f64,
    },

    #[error("phase circulation {circulation} is not within 0.05 of an integer; raise the number of loop samples")]
    Sampling { circulation: f64 },

    #[error("fill threshold {threshold} not reached within [0, {t_max:e}] s")]
    NoCrossing { threshold: f64, t_max: f64 },

    #[error("best fit D = {d_hat:e} m^2/s sits on the edge of the bracket [{lo:e}, {hi:e}]")]
    BracketEdge { d_hat: f64, lo: f64, hi: f64 },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors raised by a numerical procedure rather than by bad
    /// inputs or the environment.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Quadrature { .. }
                | Error::Range { .. }
                | Error::IndeterminatePhase { .. }
                | Error::Sampling { .. }
                | Error::NoCrossing { .. }
                | Error::BracketEdge { .. }
        )
    }

    pub fn is_io(&self) -> bool {
        match self {
            Error::Io(_) => true,
            Error::Csv(e) => e.is_io_error(),
            _ => false,
        }
    }
}

pub(crate) fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Validation(msg()))
    }
}
