use thiserror::Error;

use crate::series::Nome;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("point is not in the upper half-plane (im = {0})")]
    NotInUpperHalfPlane(f64),

    #[error("cannot combine series in nome {0:?} with series in nome {1:?}")]
    NomeMismatch(Nome, Nome),

    #[error("division by a series with no nonzero coefficient")]
    DivisionByZeroSeries,

    #[error("coefficient of exponent {exponent} is beyond the truncation order {order}")]
    BeyondOrder { exponent: i64, order: i64 },

    #[error("im(tau) = {im} is below the evaluation floor {eta_min}")]
    DomainTooLow { im: f64, eta_min: f64 },

    #[error("truncation tail estimate {tail:e} exceeds tolerance {tol:e}")]
    TruncationInsufficient { tail: f64, tol: f64 },

    #[error("value {re} + {im}i was expected to be real")]
    NonRealValue { re: f64, im: f64 },

    #[error("ray truncation at T = {truncation} leaves a tail bound of {bound:e} (tolerance {tol:e})")]
    TailBoundViolated { truncation: f64, bound: f64, tol: f64 },

    #[error("argument outside the domain: {0}")]
    Domain(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("requested {requested} exceeds the configured cap {cap}")]
    ResourceLimit { requested: i64, cap: i64 },

    #[error("lattice basis is degenerate")]
    DegenerateBasis,

    #[error("packing violates its separation: centers at distance {distance} < {separation}")]
    SeparationViolated { distance: f64, separation: f64 },

    #[error("radial table does not cover the decay region: {0}")]
    InsufficientTable(String),

    #[error("grid has no radius above sqrt(2); cannot check the sign condition")]
    InsufficientGrid,

    #[error("fhat(0) must be positive, got {0}")]
    NonpositiveFhat0(f64),
}
