//! Toolkit for studying the van der Corput property of the shifted primes
//! `p - 1`: weighted prime cosine polynomials with certified global minima,
//! exact small-scale oracles for the companion measures (the LP bracket for
//! `gamma(n)`, exact Heilbronn `eta(n)`, exhaustive difference-avoiding
//! sets), and the main-term / error-term arithmetic that drives the
//! construction.
//!
//! The polynomial and LP layers are generic over the scalar type through
//! [`Real`]; the arithmetic layers (`tau`, `weights`, `recurrence`) work in
//! exact rational arithmetic throughout.

pub mod arith;
pub mod construction;
pub mod gamma;
pub mod poly;
pub mod recurrence;
pub mod simplex;
pub mod tau;
pub mod weights;

use std::fmt;
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Scalar type the floating-point layers are generic over.
///
/// Implemented for `f32` and `f64`; the exact layers use `BigRational`
/// directly and do not go through this trait.
pub trait Real:
    Float
    + FromPrimitive
    + ToPrimitive
    + Sum
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
{
}

impl<T> Real for T where
    T: Float
        + FromPrimitive
        + ToPrimitive
        + Sum
        + fmt::Debug
        + fmt::Display
        + Send
        + Sync
        + 'static
{
}

/// Double-precision cosine polynomial, the default working type.
pub type CosinePoly64 = poly::CosinePoly<f64>;
/// Single-precision cosine polynomial.
pub type CosinePoly32 = poly::CosinePoly<f32>;
/// Double-precision certified minimum record.
pub type CertifiedMin64 = poly::CertifiedMin<f64>;
/// Double-precision gamma bracket.
pub type GammaBracket64 = gamma::GammaBracket<f64>;

/// Errors shared by every module.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Input outside the operation's domain (empty prime set, bad
    /// normalization, precondition violation).
    #[error("domain error: {0}")]
    Domain(String),
    /// A configured budget (memory, window cap, schedule size) was exceeded.
    #[error("resource error: {0}")]
    Resource(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit status for the CLI: 1 domain, 2 resource.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_) => 1,
            Error::Resource(_) => 2,
        }
    }
}
