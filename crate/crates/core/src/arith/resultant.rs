//! Resultants and discriminants over ℤ by the subresultant pseudo-remainder sequence.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::poly::Poly;
use crate::error::{precondition, Result};

fn pow(b: &BigInt, e: usize) -> BigInt {
    num_traits::pow(b.clone(), e)
}

/// Sylvester resultant of two integer polynomials.
///
/// Returns 0 when either input is zero (and both-zero is rejected as outside
/// the precondition). Coefficient growth is controlled by the subresultant
/// normalization, so no rational arithmetic is involved.
pub fn resultant(f: &Poly<BigInt>, g: &Poly<BigInt>) -> Result<BigInt> {
    if f.is_zero() && g.is_zero() {
        return precondition("resultant of two zero polynomials");
    }
    if f.is_zero() || g.is_zero() {
        return Ok(BigInt::zero());
    }
    let (mut a, mut b) = (f.clone(), g.clone());
    let mut sign = BigInt::one();
    if a.deg() < b.deg() {
        std::mem::swap(&mut a, &mut b);
        if a.deg() % 2 == 1 && b.deg() % 2 == 1 {
            sign = -sign;
        }
    }
    if b.deg() == 0 {
        return Ok(sign * pow(&b.lead(), a.deg()));
    }
    let (ca, cb) = (a.content(), b.content());
    let mut a = a.primitive_part().scale(&ca.signum());
    let mut b = b.primitive_part().scale(&cb.signum());
    let (ca, cb) = (ca.abs(), cb.abs());
    let t = pow(&ca, b.deg()) * pow(&cb, a.deg());
    let mut g_ = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let (da, db) = (a.deg(), b.deg());
        let delta = da - db;
        if da % 2 == 1 && db % 2 == 1 {
            sign = -sign;
        }
        let r = a.pseudo_rem(&b);
        if r.is_zero() {
            return Ok(BigInt::zero());
        }
        a = b;
        let divisor = &g_ * pow(&h, delta);
        b = Poly::new(r.coeffs().iter().map(|c| c / &divisor).collect());
        g_ = a.lead();
        h = if delta == 0 {
            h
        } else {
            pow(&g_, delta) / pow(&h, delta - 1)
        };
        if b.deg() == 0 {
            let da = a.deg();
            let last = pow(&b.lead(), da);
            let res = if da == 0 { last * h } else { last / pow(&h, da - 1) };
            return Ok(sign * t * res);
        }
    }
}

/// Resultant over ℚ, reduced to the integer case by clearing denominators.
pub fn resultant_q(f: &Poly<BigRational>, g: &Poly<BigRational>) -> Result<BigRational> {
    let (cf, fi) = f.clear_denominators();
    let (cg, gi) = g.clear_denominators();
    let r = resultant(&fi, &gi)?;
    let den = pow(&cf, g.deg()) * pow(&cg, f.deg());
    Ok(BigRational::new(r, den))
}

/// `disc(f) = (−1)^(d(d−1)/2) · Res(f, f′) / lead(f)`.
pub fn discriminant(f: &Poly<BigInt>) -> Result<BigInt> {
    let d = match f.degree() {
        Some(d) if d >= 1 => d,
        _ => return precondition("discriminant of a constant polynomial"),
    };
    let r = resultant(f, &f.derivative())? / f.lead();
    Ok(if (d * (d - 1) / 2) % 2 == 1 { -r } else { r })
}
