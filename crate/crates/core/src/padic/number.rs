//! p-adic numbers with explicit, per-value precision tracking.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::proj::vp_int;
use crate::error::{precondition, Error, Result};
use crate::scalar::{Field, Ring};

/// Relative precision given to the inverse of an exact integer that is not ±1.
pub const EXACT_INVERSE_PRECISION: u32 = 128;

/// An element `unit · p^val` of ℚ_p known modulo `p^(val + rel)`.
///
/// `rel = None` marks an exact integer (constants of formulas, curve
/// coefficients such as `a1 = 1`). A zero that is only known to precision
/// `A` is stored with `unit = 0`, `val = A`, `rel = Some(0)`.
#[derive(Clone, PartialEq, Eq)]
pub struct Padic {
    p: u64,
    val: i64,
    unit: BigInt,
    rel: Option<u32>,
}

fn ppow(p: u64, e: u32) -> BigInt {
    num_traits::pow(BigInt::from(p), e as usize)
}

impl Padic {
    fn normalize(p: u64, val: i64, unit: BigInt, rel: Option<u32>) -> Padic {
        if unit.is_zero() {
            return match rel {
                None => Padic { p, val: 0, unit, rel: None },
                Some(r) => Padic::zero(p, val + r as i64),
            };
        }
        let k = vp_int(&unit, p).expect("nonzero");
        let unit = if k > 0 { unit / ppow(p, k as u32) } else { unit };
        match rel {
            None => Padic { p, val: val + k, unit, rel: None },
            Some(r) if (r as i64) <= k => Padic::zero(p, val + r as i64),
            Some(r) => {
                let r = r - k as u32;
                let unit = unit.mod_floor(&ppow(p, r));
                Padic { p, val: val + k, unit, rel: Some(r) }
            }
        }
    }

    /// Zero known modulo `p^abs`.
    pub fn zero(p: u64, abs: i64) -> Padic {
        Padic { p, val: abs, unit: BigInt::zero(), rel: Some(0) }
    }

    /// An exact integer.
    pub fn from_int(p: u64, n: impl Into<BigInt>) -> Padic {
        Padic::normalize(p, 0, n.into(), None)
    }

    /// `x` known modulo `p^abs`.
    pub fn from_rational(p: u64, x: &BigRational, abs: i64) -> Padic {
        let (num, den) = (x.numer(), x.denom());
        if num.is_zero() {
            return Padic::zero(p, abs);
        }
        let vn = vp_int(num, p).expect("nonzero");
        let vd = vp_int(den, p).expect("nonzero");
        let val = vn - vd;
        if abs <= val {
            return Padic::zero(p, abs);
        }
        let rel = (abs - val) as u32;
        let modulus = ppow(p, rel);
        let u = num / ppow(p, vn as u32);
        let w = den / ppow(p, vd as u32);
        let unit = (u * mod_inverse(&w, &modulus)).mod_floor(&modulus);
        Padic::normalize(p, val, unit, Some(rel))
    }

    pub fn from_integer_with_precision(p: u64, n: impl Into<BigInt>, abs: i64) -> Padic {
        Padic::from_rational(p, &BigRational::from_integer(n.into()), abs)
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn is_exact(&self) -> bool {
        self.rel.is_none()
    }

    pub fn is_zero(&self) -> bool {
        self.unit.is_zero()
    }

    /// Valuation of a nonzero element; `None` when the element is zero at its precision.
    pub fn valuation(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.val)
    }

    /// A lower bound for the true valuation (exact when the element is nonzero).
    pub fn valuation_lower_bound(&self) -> i64 {
        if self.is_zero() {
            self.absolute_precision().unwrap_or(i64::MAX)
        } else {
            self.val
        }
    }

    /// The element is known modulo `p^absolute_precision`; `None` when exact.
    pub fn absolute_precision(&self) -> Option<i64> {
        self.rel.map(|r| self.val + r as i64)
    }

    pub fn relative_precision(&self) -> Option<u32> {
        self.rel
    }

    pub fn unit(&self) -> &BigInt {
        &self.unit
    }

    /// The rational `unit · p^val` represented by the stored digits.
    pub fn to_rational(&self) -> BigRational {
        let u = BigRational::from_integer(self.unit.clone());
        if self.val >= 0 {
            u * BigRational::from_integer(ppow(self.p, self.val as u32))
        } else {
            u / BigRational::from_integer(ppow(self.p, (-self.val) as u32))
        }
    }

    /// Forgets digits beyond `p^abs` (never increases the claimed precision).
    pub fn truncate(&self, abs: i64) -> Padic {
        match self.absolute_precision() {
            Some(a) if a <= abs => self.clone(),
            _ => {
                if self.is_zero() && self.is_exact() {
                    return Padic::zero(self.p, abs);
                }
                if abs <= self.val {
                    return Padic::zero(self.p, abs);
                }
                Padic::normalize(self.p, self.val, self.unit.clone(), Some((abs - self.val) as u32))
            }
        }
    }

    /// Declares the stored digits valid up to `p^abs`, padding with zero digits.
    ///
    /// Only sound when the caller knows the padded digits are correct, as in
    /// a Newton step whose output precision exceeds its input precision.
    pub fn lift_precision(&self, abs: i64) -> Padic {
        if self.is_zero() {
            return Padic::zero(self.p, abs);
        }
        if abs <= self.val {
            return Padic::zero(self.p, abs);
        }
        Padic { p: self.p, val: self.val, unit: self.unit.clone(), rel: Some((abs - self.val) as u32) }
    }

    pub fn pow(&self, e: u32) -> Padic {
        let mut acc = self.int_like(1);
        for _ in 0..e {
            acc = acc * self.clone();
        }
        acc
    }

    /// Multiplicative inverse. Exact non-unit integers are inverted to
    /// [`EXACT_INVERSE_PRECISION`] relative digits.
    pub fn inv(&self) -> Result<Padic> {
        if self.is_zero() {
            return Err(Error::Precision(format!("inverse of {self:?}, which is zero at its precision")));
        }
        let rel = match self.rel {
            None if self.unit.abs().is_one() => {
                return Ok(Padic { p: self.p, val: -self.val, unit: self.unit.clone(), rel: None })
            }
            None => EXACT_INVERSE_PRECISION,
            Some(r) => r,
        };
        let modulus = ppow(self.p, rel);
        let unit = mod_inverse(&self.unit, &modulus);
        Ok(Padic::normalize(self.p, -self.val, unit, Some(rel)))
    }

    /// Division by a nonzero integer, dropping exactly `v_p(n)` digits of
    /// absolute precision and no relative precision.
    pub fn div_int(&self, n: i64) -> Result<Padic> {
        if n == 0 {
            return precondition("division by the integer 0");
        }
        let n = BigInt::from(n);
        let k = vp_int(&n, self.p).expect("nonzero");
        let w = &n / ppow(self.p, k as u32);
        if self.is_zero() {
            return Ok(match self.absolute_precision() {
                Some(a) => Padic::zero(self.p, a - k),
                None => self.clone(),
            });
        }
        let rel = self.rel.unwrap_or(EXACT_INVERSE_PRECISION);
        let modulus = ppow(self.p, rel);
        let unit = self.unit.clone() * mod_inverse(&w, &modulus);
        Ok(Padic::normalize(self.p, self.val - k, unit, Some(rel)))
    }

    /// True when `self ≡ other (mod p^n)` is certified by the stored digits.
    pub fn eq_mod(&self, other: &Padic, n: i64) -> bool {
        (self.clone() - other.clone()).valuation_lower_bound() >= n
    }

    /// `|x|_p = p^(−v(x))`, as a float.
    pub fn abs_value(&self) -> f64 {
        match self.valuation() {
            None => 0.0,
            Some(v) => (self.p as f64).powi(-(v as i32)),
        }
    }

    fn check_prime(&self, other: &Padic) {
        assert_eq!(self.p, other.p, "p-adic numbers over different primes");
    }
}

pub(crate) fn mod_inverse(a: &BigInt, modulus: &BigInt) -> BigInt {
    if modulus.is_one() {
        return BigInt::zero();
    }
    let e = a.extended_gcd(modulus);
    assert!(e.gcd.is_one(), "{a} is not invertible modulo {modulus}");
    e.x.mod_floor(modulus)
}

fn min_opt(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl Add for Padic {
    type Output = Padic;
    fn add(self, rhs: Padic) -> Padic {
        self.check_prime(&rhs);
        if self.is_zero() && self.is_exact() {
            return rhs;
        }
        if rhs.is_zero() && rhs.is_exact() {
            return self;
        }
        let p = self.p;
        let abs = min_opt(self.absolute_precision(), rhs.absolute_precision());
        let v = self.val.min(rhs.val);
        let sum = self.unit * ppow(p, (self.val - v) as u32) + rhs.unit * ppow(p, (rhs.val - v) as u32);
        let rel = abs.map(|a| (a - v) as u32);
        Padic::normalize(p, v, sum, rel)
    }
}

impl Neg for Padic {
    type Output = Padic;
    fn neg(self) -> Padic {
        let (p, val, rel) = (self.p, self.val, self.rel);
        if self.is_zero() {
            return self;
        }
        Padic::normalize(p, val, -self.unit, rel)
    }
}

impl Sub for Padic {
    type Output = Padic;
    fn sub(self, rhs: Padic) -> Padic {
        self + (-rhs)
    }
}

impl Mul for Padic {
    type Output = Padic;
    fn mul(self, rhs: Padic) -> Padic {
        self.check_prime(&rhs);
        let p = self.p;
        let exact_zero = |x: &Padic| x.is_zero() && x.is_exact();
        if exact_zero(&self) || exact_zero(&rhs) {
            return Padic::from_int(p, 0);
        }
        match (self.is_zero(), rhs.is_zero()) {
            (true, true) => Padic::zero(p, self.val + rhs.val),
            (true, false) => Padic::zero(p, self.val + rhs.val),
            (false, true) => Padic::zero(p, self.val + rhs.val),
            (false, false) => {
                let rel = match (self.rel, rhs.rel) {
                    (Some(a), Some(b)) => Some(a.min(b)),
                    (a, None) => a,
                    (None, b) => b,
                };
                Padic::normalize(p, self.val + rhs.val, self.unit * rhs.unit, rel)
            }
        }
    }
}

impl Div for Padic {
    type Output = Padic;
    /// Panics when `rhs` is zero at its precision; use [`Padic::inv`] to handle that case.
    fn div(self, rhs: Padic) -> Padic {
        let inv = rhs.inv().unwrap_or_else(|e| panic!("{e}"));
        self * inv
    }
}

impl Ring for Padic {
    fn int_like(&self, n: i64) -> Self {
        Padic::from_int(self.p, n)
    }

    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
}

impl Field for Padic {}

impl fmt::Debug for Padic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Padic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.p;
        match (self.is_zero(), self.absolute_precision()) {
            (true, None) => write!(f, "0"),
            (true, Some(a)) => write!(f, "O({p}^{a})"),
            (false, None) => write!(f, "{}*{p}^{}", self.unit, self.val),
            (false, Some(a)) => write!(f, "{}*{p}^{} + O({p}^{a})", self.unit, self.val),
        }
    }
}
