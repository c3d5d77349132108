//! Inversion of the modular j-invariant and the Tate model `y² + xy = x³ + a4·x + a6`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::proj::vp;
use crate::error::{precondition, Error, Result};
use crate::padic::Padic;
use crate::scalar::Ring;
use crate::PadicCurve;

type Series = Vec<BigInt>;

fn series_mul(a: &Series, b: &Series, len: usize) -> Series {
    let mut out = vec![BigInt::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// `1/a` for a power series with constant term ±1.
fn series_inv(a: &Series, len: usize) -> Series {
    let a0 = &a[0];
    assert!(a0 == &BigInt::one() || a0 == &-BigInt::one());
    let mut out = vec![BigInt::zero(); len];
    out[0] = a0.clone();
    for n in 1..len {
        let mut s = BigInt::zero();
        for k in 1..=n.min(a.len() - 1) {
            s += &a[k] * &out[n - k];
        }
        out[n] = -s * a0;
    }
    out
}

/// `Σ_{d | n} f(d)` for `n = 1..len`, as series coefficients (constant term 0).
fn divisor_sum_series(len: usize, f: impl Fn(u64) -> BigInt) -> Series {
    let mut out = vec![BigInt::zero(); len];
    for d in 1..len {
        let fd = f(d as u64);
        for n in (d..len).step_by(d) {
            out[n] += &fd;
        }
    }
    out
}

fn pow_big(n: u64, e: usize) -> BigInt {
    num_traits::pow(BigInt::from(n), e)
}

/// Integer power series of `1/j(q) = q·∏(1−qⁿ)^24 / (1 + 240·Σσ₃(n)qⁿ)³`,
/// with `len` coefficients.
fn inverse_j_series(len: usize) -> Series {
    let mut prod = vec![BigInt::zero(); len];
    prod[0] = BigInt::one();
    for n in 1..len {
        for _ in 0..24 {
            // prod *= (1 − qⁿ)
            for i in (n..len).rev() {
                let t = prod[i - n].clone();
                prod[i] -= t;
            }
        }
    }
    let mut c4 = divisor_sum_series(len, |d| 240 * pow_big(d, 3));
    c4[0] = BigInt::one();
    let c4_cubed = series_mul(&series_mul(&c4, &c4, len), &c4, len);
    let ratio = series_mul(&prod, &series_inv(&c4_cubed, len), len);
    // multiply by q
    let mut out = vec![BigInt::zero(); len];
    out[1..].clone_from_slice(&ratio[..len - 1]);
    out
}

fn eval_series(coeffs: &[BigInt], x: &Padic) -> Padic {
    coeffs
        .iter()
        .rev()
        .fold(x.int_like(0), |acc, c| acc * x.clone() + Padic::from_int(x.prime(), c.clone()))
}

fn derivative(coeffs: &[BigInt]) -> Series {
    coeffs.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect()
}

/// Number of series terms needed so the discarded tail has valuation ≥ `abs`
/// when the argument has valuation `v ≥ 1`.
fn terms_for(abs: i64, v: i64) -> usize {
    (abs.max(1) as usize).div_ceil(v as usize) + 1
}

/// The modular invariant `j(q) = 1/q + 744 + 196884·q + …` at a p-adic `q` with `v(q) ≥ 1`.
pub fn j_series(q: &Padic) -> Result<Padic> {
    let v = match q.valuation() {
        Some(v) if v >= 1 => v,
        _ => return precondition("j-series needs 0 < v(q) < ∞"),
    };
    let abs = q.absolute_precision().unwrap_or(64 * v);
    let g = eval_series(&inverse_j_series(terms_for(abs, v)), q);
    g.truncate(abs).inv()
}

/// The Tate parameter `q` with `j(q) = j`, for `v_p(j) < 0`.
///
/// The returned `q` carries absolute precision `N + 2·v(q)`, which is what
/// the roundtrip `j(q) ≡ j (mod p^N)` requires given `j` has valuation `−v(q)`.
pub fn q_from_j(j: &BigRational, p: u64, n: i64) -> Result<Padic> {
    let vj = vp(j, p);
    let v = match vj {
        Some(vj) if vj < 0 => -vj,
        _ => {
            return precondition(format!(
                "j = {j} is {}-adically integral: no Tate parameter (potential good reduction)",
                p
            ))
        }
    };
    let target = n + 2 * v;
    let inv_j = j.recip();
    let series = inverse_j_series(terms_for(target, v));
    let dseries = derivative(&series);
    // q ≡ 1/j (mod (1/j)²)
    let mut q = Padic::from_rational(p, &inv_j, 2 * v);
    let mut cur = 2 * v;
    while cur < target {
        let next = (2 * cur).min(target);
        let lifted = q.lift_precision(next);
        let u = Padic::from_rational(p, &inv_j, next);
        let residual = eval_series(&series, &lifted) - u;
        let slope = eval_series(&dseries, &lifted);
        q = (lifted - residual / slope).truncate(next);
        cur = next;
    }
    let check = j_series(&q)?;
    let jp = Padic::from_rational(p, j, n);
    if !check.eq_mod(&jp, n) {
        return Err(Error::Precision(format!("q-inversion failed its roundtrip check modulo {p}^{n}")));
    }
    Ok(q)
}

/// Coefficients of the Tate curve `E_q : y² + xy = x³ + a4·x + a6` at precision `N`.
#[derive(Clone, Debug)]
pub struct TateModel {
    pub p: u64,
    pub q: Padic,
    pub a4: Padic,
    pub a6: Padic,
    pub precision: i64,
}

impl TateModel {
    pub fn q_valuation(&self) -> i64 {
        self.q.valuation().expect("nonzero q")
    }

    pub fn curve(&self) -> PadicCurve {
        let one = Padic::from_int(self.p, 1);
        let zero = Padic::from_int(self.p, 0);
        PadicCurve::new_unchecked([one, zero.clone(), zero, self.a4.clone(), self.a6.clone()])
    }

    /// `s_k(q) = Σ_{n≥1} n^k qⁿ/(1−qⁿ) = Σ σ_k(n) qⁿ`, truncated at valuation `precision`.
    pub fn s(&self, k: usize) -> Padic {
        let len = terms_for(self.precision, self.q_valuation());
        eval_series(&divisor_sum_series(len, |d| pow_big(d, k)), &self.q).truncate(self.precision)
    }
}

/// `a4 = −5·s₃(q)`, `a6 = −(5·s₃(q) + 7·s₅(q))/12`.
///
/// `a6` is evaluated from the integral series `Σ_n Σ_{d|n} (5d³ + 7d⁵)/12 · qⁿ`,
/// so the division by 12 costs no precision at p = 2, 3.
pub fn tate_model(q: &Padic, n: i64) -> Result<TateModel> {
    let v = match q.valuation() {
        Some(v) if v >= 1 => v,
        _ => return precondition("Tate model needs 0 < v(q) < ∞"),
    };
    let len = terms_for(n, v);
    let s3 = divisor_sum_series(len, |d| pow_big(d, 3));
    let a4 = -(eval_series(&s3, q) * Padic::from_int(q.prime(), 5)).truncate(n);
    let a6_series = divisor_sum_series(len, |d| (5 * pow_big(d, 3) + 7 * pow_big(d, 5)) / 12);
    let a6 = -eval_series(&a6_series, q).truncate(n);
    Ok(TateModel { p: q.prime(), q: q.clone(), a4, a6, precision: n })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn inverse_j_series_leading_terms() {
        // 1/j = q − 744 q² + 356652 q³ − …
        let s = inverse_j_series(4);
        assert_eq!(s, vec![0.into(), 1.into(), (-744).into(), 356652.into()]);
    }

    #[test]
    fn j_series_leading_terms() {
        // j = 1/q + 744 + 196884 q + 21493760 q² + …
        let q = Padic::from_rational(5, &r(5, 1), 12);
        let j = j_series(&q).unwrap();
        let approx = r(1, 5) + r(744, 1) + r(196884 * 5, 1) + r(21493760 * 25, 1);
        assert!(j.eq_mod(&Padic::from_rational(5, &approx, 20), 3));
    }

    #[test]
    fn tate6_parameter_at_3() {
        let j = r(-1, 15558);
        let q = q_from_j(&j, 3, 40).unwrap();
        assert_eq!(q.valuation(), Some(1));
        assert!(j_series(&q).unwrap().eq_mod(&Padic::from_rational(3, &j, 40), 40));
        // leading behaviour: q ≡ 1/j mod 3^2
        assert!(q.eq_mod(&Padic::from_rational(3, &j.recip(), 10), 2));
    }

    #[test]
    fn integral_j_is_rejected() {
        assert!(q_from_j(&r(0, 1), 5, 20).is_err());
        assert!(q_from_j(&r(1728, 1), 5, 20).is_err());
    }

    #[test]
    fn tate_model_first_terms() {
        let q = Padic::from_rational(7, &r(7 * 3, 1), 5);
        let m = tate_model(&q, 5).unwrap();
        assert!(m.a4.eq_mod(&(q.clone() * Padic::from_int(7, -5)), 2));
        assert!(m.a6.eq_mod(&(-q.clone()), 2));
        let tiny = Padic::from_rational(7, &r(7i64.pow(6), 1), 12);
        let m = tate_model(&tiny, 5).unwrap();
        assert!(m.a4.eq_mod(&Padic::from_int(7, 0), 5));
        assert!(m.a6.eq_mod(&Padic::from_int(7, 0), 5));
    }
}
