//! Simultaneous (Aberth–Ehrlich) complex root finding with an a-posteriori
//! inclusion certificate, and Mahler-measure heights built on it.

use num_bigint::BigInt;
use num_complex::Complex;
use num_traits::{Float, FromPrimitive, ToPrimitive, Zero};

use crate::arith::orbit::OrbitPolynomial;
use crate::arith::proj::ln_abs;
use crate::error::{Error, Result};

/// An approximate root together with the radius of a disk around it that is
/// guaranteed to contain exactly one root of the polynomial.
#[derive(Clone, Copy, Debug)]
pub struct CertifiedRoot<F> {
    pub z: Complex<F>,
    pub radius: F,
}

struct Eval<F> {
    /// p(z)/p'(z)
    newton: Complex<F>,
    /// Bound on |p(z)|/|p'(z)| including rounding in the evaluation.
    residual: F,
}

fn cst<F: Float + FromPrimitive>(x: f64) -> F {
    F::from_f64(x).expect("constant fits")
}

/// Newton correction `p(z)/p'(z)`, evaluated through the reversed polynomial
/// outside the unit disk so high degrees never overflow.
fn newton_ratio<F: Float + FromPrimitive>(coeffs: &[Complex<F>], z: Complex<F>) -> Eval<F> {
    let n = coeffs.len() - 1;
    let nf = cst::<F>(n as f64);
    let eps = F::epsilon();
    let gamma = cst::<F>(4.0 * (n as f64 + 2.0)) * eps;
    if z.norm() <= F::one() {
        let (mut p, mut dp): (Complex<F>, Complex<F>) = (Complex::zero(), Complex::zero());
        let mut pabs = F::zero();
        for c in coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + *c;
            pabs = pabs * z.norm() + c.norm();
        }
        let err = gamma * pabs;
        Eval { newton: p / dp, residual: (p.norm() + err) / dp.norm() }
    } else {
        let w = z.inv();
        let (mut r, mut dr): (Complex<F>, Complex<F>) = (Complex::zero(), Complex::zero());
        let mut rabs = F::zero();
        for c in coeffs.iter() {
            dr = dr * w + r;
            r = r * w + *c;
            rabs = rabs * w.norm() + c.norm();
        }
        // P(z) = z^n R(w), P'(z) = z^(n-1) (n R(w) − w R'(w))
        let denom = r * nf - w * dr;
        let err = gamma * rabs;
        Eval { newton: z * r / denom, residual: z.norm() * (r.norm() + err) / denom.norm() }
    }
}

fn aberth<F: Float + FromPrimitive>(coeffs: &[Complex<F>]) -> Result<Vec<Complex<F>>> {
    let n = coeffs.len().saturating_sub(1);
    if n == 0 || coeffs[n].is_zero() {
        return Err(Error::Precondition("root finding needs a nonconstant polynomial with nonzero leading coefficient".into()));
    }
    let lead = coeffs[n].norm();
    // Fujiwara-style bound on root moduli.
    let bound = (0..n)
        .map(|i| {
            let ratio = coeffs[i].norm() / lead;
            ratio.powf(F::one() / cst(n as f64 - i as f64))
        })
        .fold(F::zero(), F::max)
        * cst(2.0);
    let radius = bound.max(cst(1e-3));
    let mut zs: Vec<Complex<F>> = (0..n)
        .map(|k| {
            let theta = cst::<F>(2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64 + 0.4);
            Complex::from_polar(radius * cst(0.5), theta)
        })
        .collect();
    let converged_tol = F::epsilon() * cst(8.0);
    for _ in 0..1000 {
        let mut max_step = F::zero();
        for k in 0..n {
            let zk = zs[k];
            let w = newton_ratio(coeffs, zk).newton;
            let s = zs
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != k)
                .fold(Complex::zero(), |acc, (_, zj)| acc + (zk - zj).inv());
            let step = w / (Complex::new(F::one(), F::zero()) - w * s);
            if step.re.is_finite() && step.im.is_finite() {
                zs[k] = zk - step;
                max_step = max_step.max(step.norm() / zk.norm().max(F::one()));
            }
        }
        if max_step <= converged_tol {
            break;
        }
    }
    Ok(zs)
}

fn check_isolation<F: Float + FromPrimitive>(roots: &[CertifiedRoot<F>], tol: F) -> Result<()> {
    for (i, r) in roots.iter().enumerate() {
        if !(r.radius <= tol * r.z.norm().max(F::one())) {
            return Err(Error::Precision(format!(
                "root {:?} certified only to radius {:?}",
                (r.z.re.to_f64(), r.z.im.to_f64()),
                r.radius.to_f64()
            )));
        }
        for s in &roots[i + 1..] {
            if (r.z - s.z).norm() <= r.radius + s.radius {
                return Err(Error::Precision("inclusion disks of two roots overlap".into()));
            }
        }
    }
    Ok(())
}

/// All complex roots of `Σ coeffs[i]·z^i` (leading coefficient nonzero),
/// each with a certified isolating disk.
///
/// `tol` bounds the certified radius relative to `max(1, |z|)`; failure to
/// reach it is reported as [`Error::Precision`] rather than returning roots
/// of unknown quality.
pub fn polynomial_roots<F: Float + FromPrimitive>(
    coeffs: &[Complex<F>],
    tol: F,
) -> Result<Vec<CertifiedRoot<F>>> {
    let n = coeffs.len().saturating_sub(1);
    let roots: Vec<CertifiedRoot<F>> = aberth(coeffs)?
        .into_iter()
        .map(|z| {
            let e = newton_ratio(coeffs, z);
            CertifiedRoot { z, radius: e.residual * cst(n as f64) }
        })
        .collect();
    check_isolation(&roots, tol)?;
    Ok(roots)
}

/// `c · 2^(-shift)` as an `f64`, without intermediate overflow.
fn scaled_to_f64(c: &BigInt, shift: u64) -> f64 {
    if c.is_zero() {
        return 0.0;
    }
    let bits = c.bits();
    let drop = bits.saturating_sub(64);
    let top: BigInt = c >> drop;
    top.to_f64().expect("64-bit value") * ((drop as f64) - (shift as f64)).exp2()
}

/// `x = m·2^e` with integer `m`.
fn dyadic(x: f64) -> (BigInt, i64) {
    let (mant, exp, sign) = x.integer_decode();
    (BigInt::from(sign) * BigInt::from(mant), exp as i64)
}

/// Exact `2^(kn)·P(z)` and `2^(k(n−1))·P'(z)` at the dyadic point
/// `z = (X + iY)/2^k`, as Gaussian integers.
fn exact_eval(coeffs: &[BigInt], z: Complex<f64>) -> ((BigInt, BigInt), (BigInt, BigInt), u64) {
    let (mx, ex) = dyadic(z.re);
    let (my, ey) = dyadic(z.im);
    let k = (-ex).max(-ey).max(0);
    let x = mx << (ex + k) as usize;
    let y = my << (ey + k) as usize;
    let mul = |(a, b): &(BigInt, BigInt)| (a * &x - b * &y, a * &y + b * &x);
    let n = coeffs.len() - 1;
    let mut p = (coeffs[n].clone(), BigInt::zero());
    let mut dp = (BigInt::zero(), BigInt::zero());
    for (j, c) in coeffs.iter().rev().enumerate().skip(1) {
        // dp ← dp·z + p, p ← p·z + c, scaled by 2^(k(j−1)) and 2^(kj)
        let (dr, di) = mul(&dp);
        dp = (dr + &p.0, di + &p.1);
        let (pr, pi) = mul(&p);
        p = (pr + (c << (k as usize * j)), pi);
    }
    (p, dp, k as u64)
}

fn norm_sq(z: &(BigInt, BigInt)) -> BigInt {
    &z.0 * &z.0 + &z.1 * &z.1
}

/// Inclusion radius `n·|P(z)/P'(z)|` from exact values, and the Newton step.
fn exact_certificate(coeffs: &[BigInt], z: Complex<f64>) -> Option<(f64, Complex<f64>)> {
    let n = coeffs.len() - 1;
    let (p, dp, k) = exact_eval(coeffs, z);
    let den = norm_sq(&dp);
    if den.is_zero() {
        return None;
    }
    let num = norm_sq(&p);
    // |P/P'|² = |2^(kn)P|² / (|2^(k(n−1))P'|² · 4^k)
    let ratio = num_rational::BigRational::new(num, den << (2 * k) as usize);
    let radius = ratio.to_f64()?.sqrt() * n as f64 * (1.0 + 1e-12);
    // P/P' = p·conj(dp) / (|dp|²·2^k)
    let scale = norm_sq(&dp) << k as usize;
    let re = num_rational::BigRational::new(&p.0 * &dp.0 + &p.1 * &dp.1, scale.clone()).to_f64()?;
    let im = num_rational::BigRational::new(&p.1 * &dp.0 - &p.0 * &dp.1, scale).to_f64()?;
    Some((radius.max(f64::MIN_POSITIVE), Complex::new(re, im)))
}

/// Complex roots of an integer polynomial, certified to `1e−12` relative radius.
///
/// Roots are located in floating point; the inclusion radii come from exact
/// evaluation at the (dyadic) approximations, after up to three exact Newton
/// corrections.
pub fn integer_poly_roots(coeffs: &[BigInt]) -> Result<Vec<CertifiedRoot<f64>>> {
    const TOL: f64 = 1e-12;
    let shift = coeffs.iter().map(|c| c.bits()).max().unwrap_or(0);
    let cs: Vec<Complex<f64>> =
        coeffs.iter().map(|c| Complex::new(scaled_to_f64(c, shift), 0.0)).collect();
    let mut roots = Vec::with_capacity(cs.len().saturating_sub(1));
    for mut z in aberth(&cs)? {
        let mut cert = CertifiedRoot { z, radius: f64::INFINITY };
        for _ in 0..4 {
            let Some((radius, step)) = exact_certificate(coeffs, z) else { break };
            if radius < cert.radius {
                cert = CertifiedRoot { z, radius };
            }
            if radius <= TOL * 1e-3 * z.norm().max(1.0) {
                break;
            }
            z -= step;
        }
        roots.push(cert);
    }
    check_isolation(&roots, TOL)?;
    Ok(roots)
}

/// Weil height shared by the roots of `g`:
/// `(log|lead| + Σ log max(1, |root|)) / deg g`.
pub fn mahler_height(g: &OrbitPolynomial) -> Result<f64> {
    let f = g.poly();
    let roots = integer_poly_roots(f.coeffs())?;
    let sum: f64 = roots.iter().map(|r| r.z.norm().max(1.0).ln()).sum();
    Ok((ln_abs(&f.lead()) + sum) / f.deg() as f64)
}
