//! Dense univariate polynomials over any [`Scalar`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::scalar::Scalar;

/// Polynomial with coefficients stored constant term first.
///
/// Trailing zero coefficients are never stored, so the zero polynomial has an
/// empty coefficient vector and `degree()` is `None`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Poly::new(vec![c])
    }

    /// The monomial `c·x^k`.
    pub fn monomial(c: T, k: usize) -> Self {
        let mut coeffs = vec![T::zero(); k + 1];
        coeffs[k] = c;
        Poly::new(coeffs)
    }

    pub fn x() -> Self {
        Poly::monomial(T::one(), 1)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn coeff(&self, i: usize) -> T {
        self.coeffs.get(i).cloned().unwrap_or_else(T::zero)
    }

    pub fn lead(&self) -> T {
        self.coeffs.last().cloned().unwrap_or_else(T::zero)
    }

    /// Number of leading-from-below zero coefficients: the order of vanishing at 0.
    pub fn order_at_zero(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs.iter().rev().fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn derivative(&self) -> Self {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.clone() * T::from_usize(i).expect("index fits scalar"))
                .collect(),
        )
    }

    pub fn scale(&self, c: &T) -> Self {
        Poly::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![T::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { coeffs }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Poly::constant(T::one());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// `self(inner(x))`.
    pub fn compose(&self, inner: &Self) -> Self {
        self.coeffs
            .iter()
            .rev()
            .fold(Poly::zero(), |acc, c| &(&acc * inner) + &Poly::constant(c.clone()))
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Poly<U> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }

    /// Pseudo-remainder: `lead(g)^(deg f - deg g + 1)·f mod g` (exact in any ring).
    pub fn pseudo_rem(&self, g: &Self) -> Self {
        assert!(!g.is_zero(), "pseudo-division by zero polynomial");
        let dg = g.deg();
        let lg = g.lead();
        let mut r = self.clone();
        let mut e = match self.degree() {
            Some(df) if df >= dg => df - dg + 1,
            _ => return r,
        };
        while let Some(dr) = r.degree() {
            if dr < dg {
                break;
            }
            let lr = r.lead();
            r = &r.scale(&lg) - &g.scale(&lr).shift_up(dr - dg);
            e -= 1;
        }
        let factor = (0..e).fold(T::one(), |acc, _| acc * lg.clone());
        r.scale(&factor)
    }

    /// Coefficients of the homogenization of degree `d`, evaluated at `(a : b)`:
    /// `Σ c_i a^i b^(d-i)`.
    pub fn eval_homogeneous(&self, a: &T, b: &T, d: usize) -> T {
        debug_assert!(self.deg() <= d || self.is_zero());
        if self.is_zero() {
            return T::zero();
        }
        let k = self.deg();
        let mut acc = T::zero();
        let mut bpow = T::one();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            acc = acc * a.clone();
            if !c.is_zero() {
                acc = acc + c.clone() * bpow.clone();
            }
            if i > 0 {
                bpow = bpow * b.clone();
            }
        }
        for _ in k..d {
            acc = acc * b.clone();
        }
        acc
    }
}

impl<T: Scalar> Add for &Poly<T> {
    type Output = Poly<T>;
    fn add(self, rhs: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<T: Scalar> Sub for &Poly<T> {
    type Output = Poly<T>;
    fn sub(self, rhs: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<T: Scalar> Mul for &Poly<T> {
    type Output = Poly<T>;
    fn mul(self, rhs: &Poly<T>) -> Poly<T> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }
}

impl<T: Scalar> Neg for &Poly<T> {
    type Output = Poly<T>;
    fn neg(self) -> Poly<T> {
        Poly { coeffs: self.coeffs.iter().map(|c| -c.clone()).collect() }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident) => {
        impl<T: Scalar> $tr for Poly<T> {
            type Output = Poly<T>;
            fn $m(self, rhs: Poly<T>) -> Poly<T> {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl<T: Scalar + fmt::Display> fmt::Display for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*x")?,
                _ => write!(f, "({c})*x^{i}")?,
            }
        }
        Ok(())
    }
}

/// Integer-coefficient operations.
impl Poly<BigInt> {
    pub fn from_i64s(cs: &[i64]) -> Self {
        Poly::new(cs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Gcd of the coefficients, with the sign of the leading coefficient.
    pub fn content(&self) -> BigInt {
        let g = self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
        if self.lead().is_negative() {
            -g
        } else {
            g
        }
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        let c = self.content();
        Poly { coeffs: self.coeffs.iter().map(|a| a / &c).collect() }
    }

    pub fn to_rational(&self) -> Poly<BigRational> {
        self.map(|c| BigRational::from_integer(c.clone()))
    }

    /// Exact quotient `self / g`, or `None` when `g` does not divide `self` in ℤ[x].
    pub fn exact_div(&self, g: &Self) -> Option<Self> {
        let (q, r) = self.to_rational().div_rem(&g.to_rational());
        if !r.is_zero() || q.coeffs.iter().any(|c| !c.is_integer()) {
            return None;
        }
        Some(q.map(|c| c.to_integer()))
    }

    /// Gcd in ℤ[x] via the primitive remainder sequence, normalized primitive
    /// with positive leading coefficient (times the gcd of contents).
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.primitive_part().scale(&other.content().abs());
        }
        if other.is_zero() {
            return self.primitive_part().scale(&self.content().abs());
        }
        let cont = self.content().gcd(&other.content());
        let (mut a, mut b) = (self.primitive_part(), other.primitive_part());
        if a.deg() < b.deg() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b);
            a = b;
            b = if r.is_zero() { r } else { r.primitive_part() };
        }
        a.primitive_part().scale(&cont)
    }

    /// Primitive squarefree part `f / gcd(f, f')`.
    pub fn squarefree_part(&self) -> Self {
        let f = self.primitive_part();
        if f.deg() == 0 {
            return f;
        }
        let g = f.gcd(&f.derivative());
        if g.deg() == 0 {
            return f;
        }
        f.exact_div(&g.primitive_part())
            .expect("gcd divides the polynomial")
            .primitive_part()
    }

    pub fn max_abs_coeff(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).max().unwrap_or_else(BigInt::zero)
    }
}

/// Field operations over ℚ.
impl Poly<BigRational> {
    pub fn div_rem(&self, g: &Self) -> (Self, Self) {
        assert!(!g.is_zero(), "division by zero polynomial");
        let dg = g.deg();
        let lg = g.lead();
        let mut q = vec![BigRational::zero(); self.deg().saturating_sub(dg) + 1];
        let mut r = self.clone();
        while let Some(dr) = r.degree() {
            if dr < dg {
                break;
            }
            let c = r.lead() / &lg;
            q[dr - dg] = c.clone();
            r = &r - &g.scale(&c).shift_up(dr - dg);
        }
        (Poly::new(q), r)
    }

    /// Clears denominators: returns `(c, F)` with `self = F / c`, `c > 0`, `F ∈ ℤ[x]`.
    pub fn clear_denominators(&self) -> (BigInt, Poly<BigInt>) {
        let l = self.coeffs.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let f = Poly::new(
            self.coeffs
                .iter()
                .map(|c| (c * BigRational::from_integer(l.clone())).to_integer())
                .collect(),
        );
        (l, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(cs: &[i64]) -> Poly<BigInt> {
        Poly::from_i64s(cs)
    }

    #[test]
    fn arithmetic_basics() {
        let f = p(&[1, 0, 1]);
        let g = p(&[1, 1]);
        assert_eq!(&f * &g, p(&[1, 1, 1, 1]));
        assert_eq!(&f - &f, Poly::zero());
        assert_eq!(f.derivative(), p(&[0, 2]));
        assert_eq!(f.compose(&g), p(&[2, 2, 1]));
        assert_eq!(f.eval(&BigInt::from(3)), BigInt::from(10));
        assert_eq!(p(&[0, 0, 5]).order_at_zero(), 2);
    }

    #[test]
    fn homogeneous_evaluation() {
        // x^2 + 1 at (3 : 2) as a degree-3 form: 9*2 + 8 = 26
        assert_eq!(p(&[1, 0, 1]).eval_homogeneous(&3.into(), &2.into(), 3), BigInt::from(26));
    }

    #[test]
    fn gcd_and_squarefree() {
        let a = p(&[-1, 1]); // x - 1
        let b = p(&[2, 1]); // x + 2
        let f = &(&a * &a) * &b;
        let g = &a * &p(&[5, 0, 1]);
        assert_eq!(f.gcd(&g), a);
        assert_eq!(f.squarefree_part(), &a * &b);
        assert_eq!(p(&[6, 4]).squarefree_part(), p(&[3, 2]));
        assert_eq!((&f * &p(&[3])).exact_div(&b), Some(&(&a * &a) * &p(&[3])));
        assert_eq!(f.exact_div(&p(&[0, 2])), None);
    }

    #[test]
    fn pseudo_remainder_identity() {
        let f = p(&[3, 0, 2, 7]);
        let g = p(&[1, 2]);
        let r = f.pseudo_rem(&g);
        // lead(g)^3 * f(−1/2) = 8 * (3 + 2/4 − 7/8) = 21
        assert_eq!(r, p(&[21]));
    }
}
