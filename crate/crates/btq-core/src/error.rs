use alloc::string::String;
use core::fmt;

/// Failure modes shared by every module of the crate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// The valuation of the zero function was requested.
    ZeroValuation,
    /// A matrix expected to be invertible is singular.
    Singular,
    /// Two boundary maps do not compose to zero.
    NotAComplex,
    /// Two tree vertices live on different places.
    DifferentPlaces,
    /// Input outside the documented domain of an operation.
    Invalid(String),
    /// A configuration the implementation deliberately does not handle.
    Unsupported(String),
    /// A computation would exceed a documented size cap.
    ResourceCap(String),
    /// A bounded search finished without a witness.
    NotFound(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ZeroValuation => f.write_str("valuation of zero undefined"),
            Error::Singular => f.write_str("singular matrix"),
            Error::NotAComplex => f.write_str("not a complex"),
            Error::DifferentPlaces => f.write_str("vertices live on different places"),
            Error::Invalid(s) => write!(f, "invalid input: {s}"),
            Error::Unsupported(s) => write!(f, "unsupported configuration: {s}"),
            Error::ResourceCap(s) => write!(f, "resource cap exceeded: {s}"),
            Error::NotFound(s) => f.write_str(s),
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;
