//! Rational torsion via the Nagell–Lutz candidates of an integral short model.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::proj::vp_int;
use crate::elliptic::curve::{Point, WeierstrassCurve};
use crate::error::{Error, Result};
use crate::EllipticCurve;

const TRIAL_DIVISION_LIMIT: u64 = 10_000_000;

/// Prime factorization by trial division; fails if a large composite cofactor remains.
fn factor(n: &BigInt) -> Result<Vec<(BigInt, u32)>> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut d = 2u64;
    while d <= TRIAL_DIVISION_LIMIT {
        let bd = BigInt::from(d);
        if &bd * &bd > n {
            break;
        }
        let mut e = 0;
        while (&n % &bd).is_zero() {
            n /= &bd;
            e += 1;
        }
        if e > 0 {
            out.push((bd, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > BigInt::one() {
        let limit = BigInt::from(TRIAL_DIVISION_LIMIT);
        if n <= &limit * &limit {
            out.push((n, 1));
        } else {
            let s = n.sqrt();
            if &s * &s == n && s <= &limit * &limit {
                out.push((s, 2));
            } else {
                return Err(Error::Resource(format!("cannot factor the cofactor {n} by trial division")));
            }
        }
    }
    Ok(out)
}

/// Integer roots of the monic cubic `X³ + aX + c`.
fn integer_roots_cubic(a: &BigInt, c: &BigInt) -> Vec<BigInt> {
    let g = |x: &BigInt| x * x * x + a * x + c;
    let bound = BigInt::one() + a.abs().max(c.abs());
    let k0 = if a.is_negative() { (-a / BigInt::from(3)).sqrt() } else { -BigInt::one() };
    let mut intervals = Vec::new();
    if k0 >= BigInt::zero() {
        intervals.push((-&bound, -&k0 - 1, true));
        intervals.push((-&k0, k0.clone(), false));
        intervals.push((&k0 + 1, bound.clone(), true));
    } else {
        intervals.push((-&bound, bound.clone(), true));
    }
    let mut roots = Vec::new();
    for (mut lo, mut hi, increasing) in intervals {
        if lo > hi {
            continue;
        }
        // binary search for a zero of a monotone function on [lo, hi]
        while lo < hi {
            let mid = (&lo + &hi).div_floor(&BigInt::from(2));
            let v = g(&mid);
            let below = if increasing { v.is_negative() } else { v.is_positive() };
            if below {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        if g(&lo).is_zero() && !roots.contains(&lo) {
            roots.push(lo);
        }
    }
    roots.sort();
    roots
}

fn is_torsion(e: &EllipticCurve, p: &Point<BigRational>) -> bool {
    let mut q = p.clone();
    for _ in 0..12 {
        if q.is_identity() {
            return true;
        }
        q = e.add(&q, p);
    }
    q.is_identity()
}

/// All rational torsion points of the curve, identity first.
pub fn rational_torsion(curve: &EllipticCurve) -> Result<Vec<Point<BigRational>>> {
    let (a, b, _) = curve.short_model();
    // u with u⁴A, u⁶B integral
    let dens = a.denom() * b.denom();
    let mut u = BigInt::one();
    for (l, _) in factor(&dens)? {
        let ea = vp_int(a.denom(), l.to_u64().unwrap_or(u64::MAX)).unwrap_or(0);
        let eb = vp_int(b.denom(), l.to_u64().unwrap_or(u64::MAX)).unwrap_or(0);
        let e = ((ea + 3) / 4).max((eb + 5) / 6);
        u *= num_traits::pow(l, e as usize);
    }
    let u2 = BigRational::from_integer(&u * &u);
    let u3 = &u2 * BigRational::from_integer(u.clone());
    let ai = (&a * &u2 * &u2).to_integer();
    let bi = (&b * &u3 * &u3).to_integer();
    let zero = BigRational::zero();
    let integral = WeierstrassCurve::new([
        zero.clone(),
        zero.clone(),
        zero,
        BigRational::from_integer(ai.clone()),
        BigRational::from_integer(bi.clone()),
    ])?;
    let disc = BigInt::from(4) * &ai * &ai * &ai + BigInt::from(27) * &bi * &bi;
    let mut ys = vec![BigInt::one()];
    for (l, e) in factor(&disc)? {
        let mut next = Vec::new();
        for y in &ys {
            let mut pw = BigInt::one();
            for _ in 0..=e / 2 {
                next.push(y * &pw);
                pw *= &l;
            }
        }
        ys = next;
    }
    ys.push(BigInt::zero());
    let mut out = vec![Point::Identity];
    for y in ys {
        for x in integer_roots_cubic(&ai, &(&bi - &y * &y)) {
            let ys_signed: Vec<BigInt> = if y.is_zero() { vec![y.clone()] } else { vec![y.clone(), -&y] };
            for ys_ in ys_signed {
                let pt = Point::affine(BigRational::from_integer(x.clone()), BigRational::from_integer(ys_));
                if is_torsion(&integral, &pt) {
                    let short = match &pt {
                        Point::Affine { x, y } => Point::affine(x / &u2, y / &u3),
                        Point::Identity => unreachable!(),
                    };
                    out.push(curve.from_short(&short));
                }
            }
        }
    }
    out[1..].sort_by(|p, q| p.x().cmp(&q.x()));
    Ok(out)
}
