use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::arith::poly::Poly;
use crate::error::{precondition, Result};

/// Primitive squarefree integer polynomial of degree ≥ 1 with positive leading
/// coefficient. Its roots form a union of Galois orbits of algebraic numbers.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OrbitPolynomial {
    poly: Poly<BigInt>,
}

impl OrbitPolynomial {
    /// Validates the orbit-polynomial invariants; the sign is normalized.
    pub fn new(poly: Poly<BigInt>) -> Result<Self> {
        if poly.degree().unwrap_or(0) == 0 {
            return precondition("orbit polynomial must have degree ≥ 1");
        }
        if !poly.content().abs().is_one() {
            return precondition(format!("orbit polynomial {poly} is not primitive"));
        }
        if poly.gcd(&poly.derivative()).deg() != 0 {
            return precondition(format!("orbit polynomial {poly} is not squarefree"));
        }
        let poly = if poly.lead().is_negative() { -&poly } else { poly };
        Ok(OrbitPolynomial { poly })
    }

    /// Primitive squarefree part of an arbitrary nonconstant polynomial.
    pub fn squarefree_of(poly: &Poly<BigInt>) -> Result<Self> {
        if poly.degree().unwrap_or(0) == 0 {
            return precondition("orbit polynomial must have degree ≥ 1");
        }
        Ok(OrbitPolynomial { poly: poly.squarefree_part() })
    }

    /// The orbit of a single rational point `a/b`: `bY − a`.
    pub fn linear(a: &BigInt, b: &BigInt) -> Self {
        Self::new(Poly::new(vec![-a.clone(), b.clone()])).expect("coprime linear form")
    }

    pub fn poly(&self) -> &Poly<BigInt> {
        &self.poly
    }

    pub fn degree(&self) -> usize {
        self.poly.deg()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(OrbitPolynomial::new(Poly::from_i64s(&[-2, 0, 1])).is_ok());
        assert!(OrbitPolynomial::new(Poly::from_i64s(&[2, 0, 2])).is_err());
        assert!(OrbitPolynomial::new(Poly::from_i64s(&[1, 2, 1])).is_err());
        assert!(OrbitPolynomial::new(Poly::from_i64s(&[5])).is_err());
        let g = OrbitPolynomial::new(Poly::from_i64s(&[2, 0, -1])).unwrap();
        assert_eq!(g.poly(), &Poly::from_i64s(&[-2, 0, 1]));
        let sq = OrbitPolynomial::squarefree_of(&Poly::from_i64s(&[2, 4, 2])).unwrap();
        assert_eq!(sq.poly(), &Poly::from_i64s(&[1, 1]));
    }
}
