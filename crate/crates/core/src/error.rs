//! Error type shared by all numerical routines in this crate.

use core::fmt;

/// Errors reported by construction, linear algebra and time-stepping routines.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Operand dimensions are incompatible, or a square matrix was required.
    Shape(&'static str),
    /// An input contains NaN or infinity.
    NonFinite(&'static str),
    /// The computation left the representable floating-point range.
    Overflow(&'static str),
    /// Requested Zassenhaus order outside the supported range 1..=4.
    UnsupportedOrder(u32),
    /// A correction matrix failed the series-matching certification.
    Certification { order: u32, defect: f64 },
    /// A query point lies outside the sampled interval.
    Domain(&'static str),
    /// A parameter violates its stated range or consistency condition.
    Invalid(&'static str),
    /// A retardation factor of zero makes the 1/R_i rescaling impossible
    /// for a species with active transport, exchange or inflowing decay.
    SingularScaling { species: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Shape(msg) => write!(f, "shape error: {msg}"),
            Error::NonFinite(msg) => write!(f, "non-finite value: {msg}"),
            Error::Overflow(msg) => write!(f, "numeric range exceeded: {msg}"),
            Error::UnsupportedOrder(k) => {
                write!(f, "unsupported Zassenhaus order {k} (supported: 1..=4)")
            }
            Error::Certification { order, defect } => write!(
                f,
                "correction of order {order} failed series certification (defect {defect:e})"
            ),
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Invalid(msg) => write!(f, "invalid parameter: {msg}"),
            Error::SingularScaling { species } => write!(
                f,
                "retardation factor of species {species} is zero but the species is coupled"
            ),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
