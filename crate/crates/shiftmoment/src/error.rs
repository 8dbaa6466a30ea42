use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{function} has a pole at {at}")]
    Pole { function: &'static str, at: String },

    #[error("{function}: argument outside the supported domain ({detail})")]
    Domain { function: &'static str, detail: String },

    #[error("quadrature did not converge: requested {requested:.3e}, achieved {achieved:.3e}")]
    Quadrature { requested: f64, achieved: f64 },

    #[error("contour radii disagree: {first} vs {second} (relative {relative:.3e})")]
    RadiusInconsistency { first: String, second: String, relative: f64 },

    #[error("|delta| = {delta:.3e} is too small for the split diagonal term; use q2_eval")]
    NearDegenerate { delta: f64 },

    #[error("requested size {requested} exceeds the supported capacity {limit}")]
    Capacity { requested: u64, limit: u64 },

    #[error("integer overflow while accumulating {0}")]
    Overflow(&'static str),

    #[error("indicator window has no derivatives (order {0} requested)")]
    IndicatorDerivative(usize),

    #[error("spectral dataset: {0}")]
    Dataset(String),

    #[error("need {needed} Hecke coefficients, dataset has {available}")]
    InsufficientCoefficients { needed: usize, available: usize },

    #[error("grid step too coarse: halving changed the result by {relative_change:.3e}")]
    StepTooCoarse { relative_change: f64 },

    #[error("tolerance not met: {what} achieved {achieved:.3e}, requested {requested:.3e}")]
    Tolerance { what: &'static str, requested: f64, achieved: f64 },

    #[error("i/o: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub(crate) fn domain(function: &'static str, detail: impl Into<String>) -> Error {
    Error::Domain { function, detail: detail.into() }
}
