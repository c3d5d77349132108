//! Rational self-maps of ℙ¹ and the Lattès maps `f` with `f ∘ x = x ∘ [m]`.

use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{reduce_proj, resultant, Poly, ProjPointQ};
use crate::elliptic::curve::{Point, WeierstrassCurve};
use crate::elliptic::division::division_polynomials;
use crate::error::{precondition, Error, Result};
use crate::{EllipticCurve, IntPoly, RatPoly};

/// A morphism ℙ¹ → ℙ¹ given by coprime integer forms `(N(X, Y) : D(X, Y))`
/// of degree `d`, stored dehomogenized.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMap {
    num: IntPoly,
    den: IntPoly,
    degree: usize,
}

impl RationalMap {
    /// Validates `max(deg N, deg D) = d ≥ 1` and that the homogeneous
    /// resultant is nonzero; the pair is normalized to content 1.
    pub fn new(num: IntPoly, den: IntPoly) -> Result<Self> {
        if num.is_zero() || den.is_zero() {
            return precondition("rational map with a zero form");
        }
        let degree = num.deg().max(den.deg());
        if degree == 0 {
            return precondition("constant rational map");
        }
        let g = num.content().gcd(&den.content());
        let sign = if num.lead().is_negative() { -BigInt::one() } else { BigInt::one() };
        let div = |p: &IntPoly| Poly::new(p.coeffs().iter().map(|c| c * &sign / &g).collect());
        let map = RationalMap { num: div(&num), den: div(&den), degree };
        if map.homogeneous_resultant().is_zero() {
            return precondition("numerator and denominator share a root");
        }
        Ok(map)
    }

    pub fn numerator(&self) -> &IntPoly {
        &self.num
    }

    pub fn denominator(&self) -> &IntPoly {
        &self.den
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Resultant of the degree-d homogenizations of N and D.
    pub fn homogeneous_resultant(&self) -> BigInt {
        let d = self.degree;
        let (dn, dd) = (self.num.deg(), self.den.deg());
        if dn < d && dd < d {
            return BigInt::zero();
        }
        let r = resultant(&self.num, &self.den).expect("nonzero forms");
        // Padding a form with leading zeros multiplies the Sylvester
        // determinant by the other leading coefficient (up to sign).
        if dd < d {
            num_traits::pow(self.num.lead(), d - dd) * r
        } else if dn < d {
            num_traits::pow(self.den.lead(), d - dn) * r
        } else {
            r
        }
    }

    /// Unreduced values `(N(a, b), D(a, b))` of the homogeneous forms.
    pub fn eval_forms(&self, a: &BigInt, b: &BigInt) -> (BigInt, BigInt) {
        (self.num.eval_homogeneous(a, b, self.degree), self.den.eval_homogeneous(a, b, self.degree))
    }

    pub fn eval_proj(&self, pt: &ProjPointQ) -> ProjPointQ {
        let (n, d) = self.eval_forms(pt.a(), pt.b());
        reduce_proj(n, d).expect("forms have no common zero")
    }

    pub fn iterate_proj(&self, pt: &ProjPointQ, n: usize) -> ProjPointQ {
        (0..n).fold(pt.clone(), |acc, _| self.eval_proj(&acc))
    }

    /// `f(z)` for a finite complex `z`; `None` at a pole.
    pub fn eval_complex(&self, z: Complex<f64>) -> Option<Complex<f64>> {
        let ev = |p: &IntPoly| {
            p.coeffs().iter().rev().fold(Complex::new(0.0, 0.0), |acc, c| {
                acc * z + Complex::new(c.to_f64().unwrap_or(f64::NAN), 0.0)
            })
        };
        let d = ev(&self.den);
        if d.norm() == 0.0 {
            return None;
        }
        Some(ev(&self.num) / d)
    }
}

/// The Lattès map of an elliptic curve for multiplication by `m`.
#[derive(Clone, Debug)]
pub struct LattesMap {
    pub curve: EllipticCurve,
    /// `|m| ≥ 2`; the map depends only on `|m|`.
    pub m: u64,
    pub map: RationalMap,
    /// The affine conjugation `x' = x + shift` into short-model coordinates.
    pub shift: BigRational,
    pub short_a: BigRational,
    pub short_b: BigRational,
}

impl LattesMap {
    pub fn degree(&self) -> usize {
        self.map.degree
    }
}

fn to_integer_pair(num: &RatPoly, den: &RatPoly) -> (IntPoly, IntPoly) {
    let l = num
        .coeffs()
        .iter()
        .chain(den.coeffs())
        .fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let lq = BigRational::from_integer(l);
    let conv = |p: &RatPoly| p.map(|c| (c * &lq).to_integer());
    (conv(num), conv(den))
}

/// Builds `f` with `f(x(P)) = x([m]P)` from the division polynomials of the
/// short model, conjugated back by `x' = x + b2/12`.
pub fn lattes_map(curve: &EllipticCurve, m: i64) -> Result<LattesMap> {
    if m.unsigned_abs() < 2 {
        return precondition(format!("Lattès map needs |m| ≥ 2, got m = {m}"));
    }
    let m = m.unsigned_abs();
    let (a, b, shift) = curve.short_model();
    let (phi, psi_sq) = division_polynomials(&a, &b, m as usize)?;
    let sub = Poly::new(vec![shift.clone(), BigRational::one()]);
    let phi_s = phi.compose(&sub);
    let psi_s = psi_sq.compose(&sub);
    let num = &phi_s - &psi_s.scale(&shift);
    let (n, d) = to_integer_pair(&num, &psi_s);
    let map = RationalMap::new(n, d)?;
    if map.degree() != (m * m) as usize {
        return Err(Error::Precondition(format!("degree {} ≠ m² for m = {m}", map.degree())));
    }
    Ok(LattesMap { curve: curve.clone(), m, map, shift, short_a: a, short_b: b })
}

/// `x(P)` as a point of ℙ¹(ℚ), with `x(O) = ∞`.
pub fn x_coordinate(p: &Point<BigRational>) -> ProjPointQ {
    match p {
        Point::Identity => ProjPointQ::infinity(),
        Point::Affine { x, .. } => ProjPointQ::from_rational(x),
    }
}

/// True iff `f(x(P)) = x([m]P)` holds exactly for every sample on the curve.
pub fn check_lattes_commutes(l: &LattesMap, samples: &[Point<BigRational>]) -> bool {
    samples.iter().all(|p| {
        l.curve.contains(p)
            && l.map.eval_proj(&x_coordinate(p)) == x_coordinate(&l.curve.multiply(p, l.m as i64))
    })
}

/// The quadratic twist `Y² = X³ + A d² X + B d³` of the short model.
///
/// A rational point `(X, Y)` of the twist is the point `(X/d, Y/d²·√d)` of
/// the short model over ℚ(√d): its x-coordinate is rational, and the
/// isomorphism commutes with `[m]`.
pub fn short_twist(l: &LattesMap, d: i64) -> Result<EllipticCurve> {
    if d == 0 {
        return precondition("twist by 0");
    }
    let d = BigRational::from_integer(d.into());
    let z = BigRational::zero();
    WeierstrassCurve::new([
        z.clone(),
        z.clone(),
        z,
        &l.short_a * &d * &d,
        &l.short_b * &d * &d * &d,
    ])
}

/// x-coordinate on the original model of the twisted point `P ∈ E^d(ℚ)`.
pub fn twisted_x(l: &LattesMap, d: i64, p: &Point<BigRational>) -> ProjPointQ {
    match p {
        Point::Identity => ProjPointQ::infinity(),
        Point::Affine { x, .. } => {
            ProjPointQ::from_rational(&(x / BigRational::from_integer(d.into()) - &l.shift))
        }
    }
}

/// [`check_lattes_commutes`] for points of `E(ℚ(√d))` with rational x,
/// given as rational points of the twist [`short_twist`].
pub fn check_lattes_commutes_twisted(l: &LattesMap, d: i64, samples: &[Point<BigRational>]) -> Result<bool> {
    let tw = short_twist(l, d)?;
    Ok(samples.iter().all(|p| {
        tw.contains(p) && l.map.eval_proj(&twisted_x(l, d, p)) == twisted_x(l, d, &tw.multiply(p, l.m as i64))
    }))
}
