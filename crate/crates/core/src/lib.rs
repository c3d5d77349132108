//! Exact arithmetic for the dynamics of Lattès maps attached to elliptic curves.
//!
//! The crate covers the construction of the Lattès map `f` with
//! `f(x(P)) = x([m]P)`, canonical heights with certified error, the Tate
//! uniformization of curves with multiplicative reduction, the valuation of
//! disk points on the skeleton of the Berkovich analytification, and preimage
//! towers of small canonical height over good-reduction primes.
//!
//! Polynomials and Weierstrass curves are generic over the scalar type
//! (see [`scalar`]); the aliases below fix the instantiations used throughout.

pub mod arith;
pub mod berkovich;
pub mod elliptic;
pub mod error;
pub mod heights;
pub mod padic;
pub mod scalar;
pub mod towers;

pub use error::{Error, Result};
pub use padic::Padic;
pub use scalar::{Field, Ring, Scalar};

pub type Integer = num_bigint::BigInt;
pub type Rational = num_rational::BigRational;
pub type Complex64 = num_complex::Complex<f64>;

pub type IntPoly = arith::Poly<Integer>;
pub type RatPoly = arith::Poly<Rational>;
pub type ComplexPoly = arith::Poly<Complex64>;

/// Elliptic curve over ℚ in long Weierstrass form.
pub type EllipticCurve = elliptic::WeierstrassCurve<Rational>;
pub type CurvePoint = elliptic::Point<Rational>;
/// Weierstrass curve over ℚ_p at tracked precision (the Tate model lives here).
pub type PadicCurve = elliptic::WeierstrassCurve<Padic>;
pub type PadicPoint = elliptic::Point<Padic>;
