//! Division polynomials of a short Weierstrass curve `y² = x³ + A·x + B`.
//!
//! Internally ψ_n is stored as a polynomial in x alone: `h_n = ψ_n` for odd
//! n and `h_n = ψ_n / 2y` for even n, so that `4y² = 4(x³ + Ax + B)` only
//! ever appears as an explicit factor.

use crate::arith::Poly;
use crate::error::{precondition, Result};
use crate::scalar::Scalar;

fn c<T: Scalar>(n: i64) -> T {
    T::from_i64(n).expect("small constant")
}

/// The reduced polynomials `h_0..=h_{n}`.
fn reduced_psi<T: Scalar>(a: &T, b: &T, n: usize) -> Vec<Poly<T>> {
    let (a, b) = (a.clone(), b.clone());
    let cubic = Poly::new(vec![b.clone(), a.clone(), T::zero(), T::one()]);
    let f4 = cubic.scale(&c(4));
    let f4sq = &f4 * &f4;
    let mut h: Vec<Poly<T>> = vec![
        Poly::zero(),
        Poly::constant(T::one()),
        Poly::constant(T::one()),
        Poly::new(vec![
            -(a.clone() * a.clone()),
            c::<T>(12) * b.clone(),
            c::<T>(6) * a.clone(),
            T::zero(),
            c(3),
        ]),
        Poly::new(vec![
            c::<T>(-2) * (c::<T>(8) * b.clone() * b.clone() + a.clone() * a.clone() * a.clone()),
            c::<T>(-8) * a.clone() * b.clone(),
            c::<T>(-10) * a.clone() * a.clone(),
            c::<T>(40) * b.clone(),
            c::<T>(10) * a.clone(),
            T::zero(),
            c(2),
        ]),
    ];
    for m in 5..=n {
        let k = m / 2;
        let next = if m % 2 == 1 {
            // ψ_{2k+1} = ψ_{k+2}ψ_k³ − ψ_{k−1}ψ_{k+1}³
            let t1 = &h[k + 2] * &h[k].pow(3);
            let t2 = &h[k - 1] * &h[k + 1].pow(3);
            if k % 2 == 0 {
                &(&f4sq * &t1) - &t2
            } else {
                &t1 - &(&f4sq * &t2)
            }
        } else {
            // ψ_{2k} = (ψ_k / 2y)(ψ_{k+2}ψ_{k−1}² − ψ_{k−2}ψ_{k+1}²)
            let inner = &(&h[k + 2] * &h[k - 1].pow(2)) - &(&h[k - 2] * &h[k + 1].pow(2));
            &h[k] * &inner
        };
        h.push(next);
    }
    h.truncate(n + 1);
    h
}

/// `(φ_m, ψ_m²)` with `x([m]P) = φ_m(x)/ψ_m²(x)`, for `m ≥ 2`.
pub fn division_polynomials<T: Scalar>(a: &T, b: &T, m: usize) -> Result<(Poly<T>, Poly<T>)> {
    if m < 2 {
        return precondition("division polynomials need m ≥ 2");
    }
    let h = reduced_psi(a, b, m + 1);
    let f4 = Poly::new(vec![b.clone(), a.clone(), T::zero(), T::one()]).scale(&c(4));
    let (psi_sq, cross) = if m.is_multiple_of(2) {
        (&f4 * &h[m].pow(2), &h[m + 1] * &h[m - 1])
    } else {
        (h[m].pow(2), &f4 * &(&h[m + 1] * &h[m - 1]))
    };
    let phi = &(&Poly::x() * &psi_sq) - &cross;
    Ok((phi, psi_sq))
}
