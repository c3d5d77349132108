//! Long Weierstrass curves `y² + a1·xy + a3·y = x³ + a2·x² + a4·x + a6` over any field.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::arith::proj::vp;
use crate::error::{precondition, Error, Result};
use crate::scalar::Field;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeierstrassCurve<T> {
    a: [T; 5],
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Point<T> {
    Identity,
    Affine { x: T, y: T },
}

impl<T> Point<T> {
    pub fn affine(x: T, y: T) -> Self {
        Point::Affine { x, y }
    }

    pub fn is_identity(&self) -> bool {
        matches!(self, Point::Identity)
    }

    pub fn x(&self) -> Option<&T> {
        match self {
            Point::Identity => None,
            Point::Affine { x, .. } => Some(x),
        }
    }
}

impl<T: Field> WeierstrassCurve<T> {
    /// Builds the curve with coefficients `[a1, a2, a3, a4, a6]`, rejecting `Δ = 0`.
    pub fn new(a: [T; 5]) -> Result<Self> {
        let c = WeierstrassCurve { a };
        if c.discriminant().is_zero_elem() {
            return precondition("singular Weierstrass equation (discriminant 0)");
        }
        Ok(c)
    }

    /// Builds the curve without the discriminant check (for inexact scalars).
    pub fn new_unchecked(a: [T; 5]) -> Self {
        WeierstrassCurve { a }
    }

    pub fn a1(&self) -> &T {
        &self.a[0]
    }
    pub fn a2(&self) -> &T {
        &self.a[1]
    }
    pub fn a3(&self) -> &T {
        &self.a[2]
    }
    pub fn a4(&self) -> &T {
        &self.a[3]
    }
    pub fn a6(&self) -> &T {
        &self.a[4]
    }

    pub fn coefficients(&self) -> &[T; 5] {
        &self.a
    }

    fn k(&self, n: i64) -> T {
        self.a[0].int_like(n)
    }

    pub fn b2(&self) -> T {
        self.a1().square() + self.k(4) * self.a2().clone()
    }

    pub fn b4(&self) -> T {
        self.k(2) * self.a4().clone() + self.a1().clone() * self.a3().clone()
    }

    pub fn b6(&self) -> T {
        self.a3().square() + self.k(4) * self.a6().clone()
    }

    pub fn b8(&self) -> T {
        let [a1, a2, a3, a4, a6] = self.a.clone();
        a1.square() * a6.clone() + self.k(4) * a2.clone() * a6 - a1 * a3.clone() * a4.clone()
            + a2 * a3.square()
            - a4.square()
    }

    pub fn c4(&self) -> T {
        self.b2().square() - self.k(24) * self.b4()
    }

    pub fn c6(&self) -> T {
        let b2 = self.b2();
        -(b2.square() * b2.clone()) + self.k(36) * b2 * self.b4() - self.k(216) * self.b6()
    }

    pub fn discriminant(&self) -> T {
        let (b2, b4, b6, b8) = (self.b2(), self.b4(), self.b6(), self.b8());
        -(b2.square() * b8) - self.k(8) * b4.square() * b4.clone() - self.k(27) * b6.square()
            + self.k(9) * b2 * b4 * b6
    }

    pub fn j_invariant(&self) -> Result<T> {
        let d = self.discriminant();
        if d.is_zero_elem() {
            return precondition("j-invariant of a singular curve");
        }
        let c4 = self.c4();
        Ok(c4.square() * c4 / d)
    }

    /// `y² + a1·xy + a3·y − (x³ + a2·x² + a4·x + a6)`.
    pub fn residual(&self, x: &T, y: &T) -> T {
        let [a1, a2, a3, a4, a6] = self.a.clone();
        let (x, y) = (x.clone(), y.clone());
        y.square() + a1 * x.clone() * y.clone() + a3 * y
            - (x.square() * x.clone() + a2 * x.square() + a4 * x + a6)
    }

    pub fn contains(&self, p: &Point<T>) -> bool {
        match p {
            Point::Identity => true,
            Point::Affine { x, y } => self.residual(x, y).is_zero_elem(),
        }
    }

    /// `−(x, y) = (x, −y − a1·x − a3)`.
    pub fn negate(&self, p: &Point<T>) -> Point<T> {
        match p {
            Point::Identity => Point::Identity,
            Point::Affine { x, y } => Point::affine(
                x.clone(),
                -y.clone() - self.a1().clone() * x.clone() - self.a3().clone(),
            ),
        }
    }

    /// Chord-and-tangent addition.
    pub fn add(&self, p: &Point<T>, q: &Point<T>) -> Point<T> {
        let (x1, y1, x2, y2) = match (p, q) {
            (Point::Identity, _) => return q.clone(),
            (_, Point::Identity) => return p.clone(),
            (Point::Affine { x: x1, y: y1 }, Point::Affine { x: x2, y: y2 }) => (x1, y1, x2, y2),
        };
        let [a1, a2, a3, a4, a6] = self.a.clone();
        let (lambda, nu) = if (x1.clone() - x2.clone()).is_zero_elem() {
            let denom = y1.clone() + y1.clone() + a1.clone() * x1.clone() + a3.clone();
            if (y1.clone() + y2.clone() + a1.clone() * x2.clone() + a3.clone()).is_zero_elem()
                || denom.is_zero_elem()
            {
                return Point::Identity;
            }
            let x1sq = x1.square();
            let lambda = (self.k(3) * x1sq.clone() + self.k(2) * a2.clone() * x1.clone() + a4.clone()
                - a1.clone() * y1.clone())
                / denom.clone();
            let nu = (-(x1sq * x1.clone()) + a4 * x1.clone() + self.k(2) * a6 - a3.clone() * y1.clone())
                / denom;
            (lambda, nu)
        } else {
            let dx = x2.clone() - x1.clone();
            let lambda = (y2.clone() - y1.clone()) / dx.clone();
            let nu = (y1.clone() * x2.clone() - y2.clone() * x1.clone()) / dx;
            (lambda, nu)
        };
        let x3 = lambda.square() + a1.clone() * lambda.clone() - a2 - x1.clone() - x2.clone();
        let y3 = -((lambda + a1) * x3.clone()) - nu - a3;
        Point::affine(x3, y3)
    }

    pub fn double(&self, p: &Point<T>) -> Point<T> {
        self.add(p, p)
    }

    /// `[m]P` by double-and-add; negative `m` multiplies `−P`.
    pub fn multiply(&self, p: &Point<T>, m: i64) -> Point<T> {
        let mut base = if m < 0 { self.negate(p) } else { p.clone() };
        let mut k = m.unsigned_abs();
        let mut acc = Point::Identity;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &base);
            }
            base = self.double(&base);
            k >>= 1;
        }
        acc
    }
}

impl<T: fmt::Display> fmt::Display for WeierstrassCurve<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a1, a2, a3, a4, a6] = &self.a;
        write!(f, "[{a1}, {a2}, {a3}, {a4}, {a6}]")
    }
}

/// Reduction behaviour at a prime, decided by the valuation of `j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ReductionType {
    /// `v_p(j) < 0`: the curve is a Tate curve over a finite extension of ℚ_p.
    TateDegenerate,
    /// `v_p(j) ≥ 0`.
    PotentialGood,
}

impl WeierstrassCurve<BigRational> {
    /// Parses `"a1,a2,a3,a4,a6"` with each entry an integer or a fraction `n/d`.
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 5 {
            return Err(Error::Parse(format!("expected five coefficients a1,a2,a3,a4,a6, got {s:?}")));
        }
        let mut a: Vec<BigRational> = Vec::with_capacity(5);
        for t in parts {
            a.push(parse_rational(t)?);
        }
        let a: [BigRational; 5] = a.try_into().expect("five entries");
        WeierstrassCurve::new(a)
    }

    pub fn from_integers(a: [i64; 5]) -> Result<Self> {
        WeierstrassCurve::new(a.map(|c| BigRational::from_integer(c.into())))
    }

    pub fn classify_reduction(&self, p: u64) -> ReductionType {
        let j = self.j_invariant().expect("nonsingular by construction");
        match vp(&j, p) {
            Some(v) if v < 0 => ReductionType::TateDegenerate,
            _ => ReductionType::PotentialGood,
        }
    }

    /// Short model `y'² = x'³ + A·x' + B` reached by `x' = x + shift`,
    /// `y' = y + (a1·x + a3)/2`; returns `(A, B, shift)` with `shift = b2/12`.
    pub fn short_model(&self) -> (BigRational, BigRational, BigRational) {
        let r = |n: i64| BigRational::from_integer(n.into());
        (-self.c4() / r(48), -self.c6() / r(864), self.b2() / r(12))
    }

    /// Image of a point in the short model coordinates of [`Self::short_model`].
    pub fn to_short(&self, p: &Point<BigRational>) -> Point<BigRational> {
        let (_, _, s) = self.short_model();
        match p {
            Point::Identity => Point::Identity,
            Point::Affine { x, y } => {
                let two = BigRational::from_integer(2.into());
                Point::affine(x + &s, y + (self.a1() * x + self.a3()) / two)
            }
        }
    }

    /// Inverse of [`Self::to_short`].
    pub fn from_short(&self, p: &Point<BigRational>) -> Point<BigRational> {
        let (_, _, s) = self.short_model();
        match p {
            Point::Identity => Point::Identity,
            Point::Affine { x, y } => {
                let two = BigRational::from_integer(2.into());
                let x0 = x - &s;
                let y0 = y - (self.a1() * &x0 + self.a3()) / two;
                Point::affine(x0, y0)
            }
        }
    }
}

pub fn parse_rational(t: &str) -> Result<BigRational> {
    let err = |e: String| Error::Parse(format!("{t:?}: {e}"));
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t.trim(), "1"),
    };
    let n: BigInt = n.parse().map_err(|e: num_bigint::ParseBigIntError| err(e.to_string()))?;
    let d: BigInt = d.parse().map_err(|e: num_bigint::ParseBigIntError| err(e.to_string()))?;
    if d.is_zero() {
        return Err(err("zero denominator".into()));
    }
    Ok(BigRational::new(n, d))
}
