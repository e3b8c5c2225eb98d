//! Newton and Hodge polygons for the two-variable toric family
//! `f_t(x, y) = x^n + y + t/(xy)` over finite fields.
//!
//! The crate has two halves that are meant to be checked against each other:
//!
//! * a *prediction* side ([`geometry`], [`slopes`]) that derives the Hodge
//!   polygon from lattice-point counts and the predicted Newton slopes from
//!   minimal assignments of the residue matrix `α_{i,j}`;
//! * an *oracle* side ([`gf`], [`cyclo`], [`ntt`], [`oracle`]) that computes
//!   the toric exponential sums exactly in `Z[ζ_p]`, rebuilds the L-polynomial
//!   and reads off its p-adic Newton polygon.
//!
//! All slopes, weights and valuations are exact rationals.

pub mod assignment;
pub mod compare;
pub mod cyclo;
pub mod error;
pub mod geometry;
pub mod gf;
pub mod json;
pub mod ntt;
pub mod oracle;
pub mod polygon;
pub mod selftest;
pub mod slopes;

pub use error::{Error, Result};
pub use polygon::PolygonData;

/// Exact rational number used for every slope, weight and valuation.
pub type Rational = num_rational::BigRational;

/// Shorthand for building a [`Rational`] from small integers.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(num.into(), den.into())
}
