use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{precondition, Result};

/// A point of ℙ¹(ℚ) in its unique normalized representative `(a : b)`.
///
/// `gcd(a, b) = 1`, `b ≥ 0`, and the point at infinity is `(1 : 0)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProjPointQ {
    a: BigInt,
    b: BigInt,
}

impl ProjPointQ {
    pub fn infinity() -> Self {
        ProjPointQ { a: BigInt::one(), b: BigInt::zero() }
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        ProjPointQ { a: n.into(), b: BigInt::one() }
    }

    pub fn from_rational(x: &BigRational) -> Self {
        // BigRational is already reduced with a positive denominator.
        ProjPointQ { a: x.numer().clone(), b: x.denom().clone() }
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn is_infinity(&self) -> bool {
        self.b.is_zero()
    }

    /// The affine coordinate `a/b`, or `None` at infinity.
    pub fn to_rational(&self) -> Option<BigRational> {
        if self.is_infinity() {
            None
        } else {
            Some(BigRational::new(self.a.clone(), self.b.clone()))
        }
    }
}

impl fmt::Display for ProjPointQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinity() {
            write!(f, "inf")
        } else if self.b.is_one() {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{}/{}", self.a, self.b)
        }
    }
}

impl std::str::FromStr for ProjPointQ {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") || s == "∞" {
            return Ok(ProjPointQ::infinity());
        }
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let parse = |t: &str| {
            t.parse::<BigInt>().map_err(|e| crate::Error::Parse(format!("{t:?}: {e}")))
        };
        reduce_proj(parse(num)?, parse(den)?)
    }
}

/// Skips the gcd; callers guarantee `gcd(a, b) = 1` and `b > 0`.
pub(crate) fn from_coprime(a: BigInt, b: BigInt) -> ProjPointQ {
    ProjPointQ { a, b }
}

/// Normalizes `(a : b)` to the unique representative of its projective class.
pub fn reduce_proj(a: BigInt, b: BigInt) -> Result<ProjPointQ> {
    if a.is_zero() && b.is_zero() {
        return precondition("(0, 0) is not a point of the projective line");
    }
    if b.is_zero() {
        return Ok(ProjPointQ::infinity());
    }
    let g = a.gcd(&b);
    let (mut a, mut b) = (a / &g, b / &g);
    if b.is_negative() {
        a = -a;
        b = -b;
    }
    Ok(ProjPointQ { a, b })
}

/// p-adic valuation of a nonzero integer; `None` for zero.
pub fn vp_int(n: &BigInt, p: u64) -> Option<i64> {
    if n.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return Some(v);
        }
        n = q;
        v += 1;
    }
}

/// Additive p-adic valuation of a rational, normalized so that `v(p) = 1`.
/// `None` stands for `+∞`, the valuation of zero.
pub fn vp(x: &BigRational, p: u64) -> Option<i64> {
    let num = vp_int(x.numer(), p)?;
    Some(num - vp_int(x.denom(), p).unwrap_or(0))
}

/// Natural logarithm of `|n|`, accurate for integers far outside `f64` range.
/// Returns `-inf` for zero.
pub fn ln_abs(n: &BigInt) -> f64 {
    if n.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().expect("finite").abs().ln();
    }
    let shift = bits - 64;
    let top: BigInt = n.abs() >> shift;
    top.to_f64().expect("finite").ln() + shift as f64 * std::f64::consts::LN_2
}

/// Logarithmic Weil height of a point of ℙ¹(ℚ): `log max(|a|, |b|)`.
pub fn naive_height(pt: &ProjPointQ) -> f64 {
    let m = if pt.a.magnitude() >= pt.b.magnitude() { &pt.a } else { &pt.b };
    ln_abs(m).max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(a: i64, b: i64) -> ProjPointQ {
        reduce_proj(a.into(), b.into()).unwrap()
    }

    #[test]
    fn normalization_examples() {
        assert_eq!(pt(2, 4), pt(1, 2));
        assert_eq!((pt(1, 2).a().clone(), pt(1, 2).b().clone()), (1.into(), 2.into()));
        assert_eq!(pt(5, 0), ProjPointQ::infinity());
        let p = pt(6, -9);
        assert_eq!((p.a().clone(), p.b().clone()), ((-2).into(), 3.into()));
        assert!(reduce_proj(0.into(), 0.into()).is_err());
    }

    #[test]
    fn valuations() {
        let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        assert_eq!(vp(&r(8, 3), 2), Some(3));
        assert_eq!(vp(&r(0, 1), 7), None);
        assert_eq!(vp(&r(-1, 15558), 3), Some(-1));
        assert_eq!(vp(&r(-1, 15558), 5), Some(0));
    }

    #[test]
    fn naive_height_examples() {
        assert!((naive_height(&pt(3, 2)) - 3f64.ln()).abs() < 1e-15);
        assert_eq!(naive_height(&pt(1, 1)), 0.0);
        assert_eq!(naive_height(&ProjPointQ::infinity()), 0.0);
    }

    #[test]
    fn ln_of_huge_integers() {
        let n = BigInt::from(3).pow(5000);
        assert!((ln_abs(&n) - 5000.0 * 3f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn parses_points() {
        assert_eq!("4/-6".parse::<ProjPointQ>().unwrap(), pt(-2, 3));
        assert_eq!("inf".parse::<ProjPointQ>().unwrap(), ProjPointQ::infinity());
        assert_eq!("7".parse::<ProjPointQ>().unwrap(), pt(7, 1));
        assert!("x".parse::<ProjPointQ>().is_err());
    }

    proptest::proptest! {
        #[test]
        fn class_invariance(a in -1000i64..1000, b in -1000i64..1000, l in 1i64..50, neg in proptest::bool::ANY) {
            proptest::prop_assume!(a != 0 || b != 0);
            let l = if neg { -l } else { l };
            let base = pt(a, b);
            proptest::prop_assert_eq!(pt(a * l, b * l), base.clone());
            proptest::prop_assert_eq!(reduce_proj(base.a().clone(), base.b().clone()).unwrap(), base);
        }
    }
}
