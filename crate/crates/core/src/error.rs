use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Invalid user input: shape parameters, orders, material constants.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("unknown shape variant `{0}`")]
    UnknownShape(String),

    #[error("point {x:?} is not strictly inside the curve")]
    PointNotInside { x: (f64, f64) },

    #[error("nodes {i} and {j} coincide")]
    CoincidentNodes { i: usize, j: usize },

    #[error("singular linear system: {0}")]
    Singular(String),

    #[error("N2 finite section is ill-conditioned (condition number {cond:.3e} exceeds cap {cap:.3e})")]
    IllConditioned { cond: f64, cap: f64 },

    #[error("fixed-point iteration for lambda did not converge in {iterations} iterations (last relative step {last_step:.3e})")]
    NoConvergence { iterations: usize, last_step: f64 },

    #[error("fixed point lambda = {lambda} has |lambda| <= 1/2; the data look inconsistent")]
    SuspectLambda { lambda: f64 },

    #[error("{quantity} has a non-negligible imaginary part ({value}); wrong lambda or inconsistent data")]
    ImaginaryResidue { quantity: &'static str, value: num_complex::Complex64 },

    #[error("recovered gamma^2 = {0} is not positive")]
    NonPositiveGamma(f64),

    #[error("evaluation point {x:?} lies within radius {radius} of the origin, inside the multipole bound")]
    InsideMultipoleBound { x: (f64, f64), radius: f64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True for failures of the numerics (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Singular(_)
                | Error::IllConditioned { .. }
                | Error::NoConvergence { .. }
                | Error::SuspectLambda { .. }
                | Error::ImaginaryResidue { .. }
                | Error::NonPositiveGamma(_)
                | Error::CoincidentNodes { .. }
        )
    }
}
