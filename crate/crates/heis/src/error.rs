//! Error type shared by all numerical operations in this crate.

use std::fmt;

use crate::radial::Diagnostic;

/// Errors surfaced by the fallible operations of this crate.
///
/// Cheap algebraic operations (group product, frame changes) treat dimension
/// mismatches as programmer errors and panic instead; everything that can
/// fail on admissible-looking user data goes through this enum.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A scalar argument lies outside its admissible range.
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },
    /// Adaptive quadrature could not reach the requested tolerance.
    Quadrature { requested: f64, achieved: f64 },
    /// A non-finite value appeared inside a quadrature or root-finding loop.
    NonFinite { context: &'static str },
    /// A point was expected on a surface but is too far from it.
    NotOnSurface { distance: f64, tolerance: f64 },
    /// The vertical axis, where hemisphere normals and calibration fields
    /// are undefined.
    OnAxis,
    /// A finite-difference stencil would leave the domain of the field.
    StencilOutOfDomain,
    /// A candidate set failed validation; the diagnostics name each violation.
    InvalidSet(Vec<Diagnostic>),
    /// An identity that must hold for admissible inputs failed numerically.
    /// This signals an implementation bug, not a property of the input.
    InvariantViolation(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::OutOfRange { name, value, range } => {
                write!(f, "argument `{name}` = {value} outside {range}")
            }
            Error::Quadrature { requested, achieved } => write!(
                f,
                "quadrature failed to converge: requested {requested:.3e}, achieved {achieved:.3e}"
            ),
            Error::NonFinite { context } => write!(f, "non-finite value in {context}"),
            Error::NotOnSurface { distance, tolerance } => write!(
                f,
                "point is {distance:.3e} from the surface (tolerance {tolerance:.3e})"
            ),
            Error::OnAxis => write!(f, "point lies on the vertical axis; value undefined"),
            Error::StencilOutOfDomain => {
                write!(f, "finite-difference stencil leaves the field domain")
            }
            Error::InvalidSet(diags) => {
                write!(f, "invalid candidate set:")?;
                for d in diags {
                    write!(f, " [{d}]")?;
                }
                Ok(())
            }
            Error::InvariantViolation(msg) => write!(f, "invariant violation: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
