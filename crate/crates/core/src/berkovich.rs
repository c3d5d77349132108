//! Disk points of the Berkovich line, the Tate algebra seminorm, and the
//! skeleton valuation of the Tate uniformization.
//!
//! Valuations are in units with `v(p) = 1`: a disk point `(0, r)` is stored
//! as `t = −log_p r`, and a seminorm `|s|` as `−log_p |s|`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

use crate::elliptic::Point;
use crate::error::{precondition, Error, Result};
use crate::padic::{Padic, TateModel};

/// Truncation order tried first by [`skeleton_val`] when the caller passes 0.
pub const DEFAULT_TRUNCATION: usize = 4;
const MAX_TRUNCATION: usize = 1 << 14;

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// A truncated element `Σ_{|n| ≤ K} cₙ Xⁿ` of the Tate algebra on an annulus.
///
/// `tail_bound` is a lower bound for `v(cₙ) + n·t` over every discarded term
/// and every `t` in `radius_range`; `None` means nothing was discarded.
#[derive(Clone, Debug, PartialEq)]
pub struct TateSeriesElement {
    p: u64,
    coefficients: BTreeMap<i64, Padic>,
    truncation: usize,
    radius_range: Option<(BigRational, BigRational)>,
    tail_bound: Option<BigRational>,
}

impl TateSeriesElement {
    /// A finite Laurent polynomial; valid at every radius.
    pub fn laurent(p: u64, terms: impl IntoIterator<Item = (i64, Padic)>) -> Self {
        let mut coefficients = BTreeMap::new();
        for (n, c) in terms {
            assert_eq!(c.prime(), p, "coefficient over the wrong prime");
            let slot = coefficients.entry(n).or_insert_with(|| Padic::from_int(p, 0));
            *slot = slot.clone() + c;
        }
        let truncation = coefficients.keys().map(|n: &i64| n.unsigned_abs() as usize).max().unwrap_or(0);
        TateSeriesElement { p, coefficients, truncation, radius_range: None, tail_bound: None }
    }

    pub fn monomial(p: u64, n: i64, c: Padic) -> Self {
        Self::laurent(p, [(n, c)])
    }

    /// A truncated series with a certified tail bound on `[t_min, t_max]`.
    pub fn truncated(
        p: u64,
        terms: impl IntoIterator<Item = (i64, Padic)>,
        truncation: usize,
        radius_range: (BigRational, BigRational),
        tail_bound: BigRational,
    ) -> Result<Self> {
        if radius_range.0 > radius_range.1 {
            return precondition("empty radius range");
        }
        let mut s = Self::laurent(p, terms);
        s.truncation = truncation;
        s.radius_range = Some(radius_range);
        s.tail_bound = Some(tail_bound);
        Ok(s)
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn coefficient(&self, n: i64) -> Option<&Padic> {
        self.coefficients.get(&n)
    }

    pub fn coefficients(&self) -> impl Iterator<Item = (i64, &Padic)> {
        self.coefficients.iter().map(|(n, c)| (*n, c))
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn radius_range(&self) -> Option<&(BigRational, BigRational)> {
        self.radius_range.as_ref()
    }

    pub fn tail_bound(&self) -> Option<&BigRational> {
        self.tail_bound.as_ref()
    }
}

impl std::ops::Add for &TateSeriesElement {
    type Output = TateSeriesElement;

    /// The range is the intersection and the tail bound the smaller of the two.
    fn add(self, rhs: &TateSeriesElement) -> TateSeriesElement {
        assert_eq!(self.p, rhs.p, "series over different primes");
        let terms = self.coefficients().chain(rhs.coefficients()).map(|(n, c)| (n, c.clone()));
        let mut s = TateSeriesElement::laurent(self.p, terms);
        s.truncation = self.truncation.max(rhs.truncation);
        s.radius_range = match (&self.radius_range, &rhs.radius_range) {
            (Some((a, b)), Some((c, d))) => Some((a.max(c).clone(), b.min(d).clone())),
            (r, None) | (None, r) => r.clone(),
        };
        s.tail_bound = match (&self.tail_bound, &rhs.tail_bound) {
            (Some(a), Some(b)) => Some(a.min(b).clone()),
            (r, None) | (None, r) => r.clone(),
        };
        s
    }
}

/// The type-II point `(0, p^(−t))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiskPoint {
    center: Padic,
    t: BigRational,
}

impl DiskPoint {
    pub fn new(center: Padic, t: BigRational) -> Result<Self> {
        if !center.is_zero() {
            return precondition("only disks centred at 0 are supported");
        }
        Ok(DiskPoint { center, t })
    }

    pub fn at_zero(p: u64, t: BigRational) -> Self {
        DiskPoint { center: Padic::from_int(p, 0), t }
    }

    pub fn center(&self) -> &Padic {
        &self.center
    }

    pub fn log_radius(&self) -> &BigRational {
        &self.t
    }

    /// Membership in the skeleton circle `|q| < r < 1`.
    pub fn on_skeleton(&self, q_valuation: i64) -> bool {
        self.t.is_positive() && self.t < rat(q_valuation)
    }
}

/// Value of `−log_p` of a seminorm.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Seminorm {
    Exact(BigRational),
    /// The series vanishes identically.
    Infinite,
    /// Only bounds are certified; `upper = None` means no finite upper bound.
    Interval { lower: BigRational, upper: Option<BigRational> },
}

impl Seminorm {
    pub fn exact(&self) -> Option<&BigRational> {
        match self {
            Seminorm::Exact(v) => Some(v),
            _ => None,
        }
    }
}

impl fmt::Display for Seminorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Seminorm::Exact(v) => write!(f, "{v}"),
            Seminorm::Infinite => write!(f, "inf"),
            Seminorm::Interval { lower, upper: Some(u) } => write!(f, "[{lower}, {u}]"),
            Seminorm::Interval { lower, upper: None } => write!(f, "[{lower}, inf]"),
        }
    }
}

/// `min_n (v(cₙ) + n·t)`, certified against unknown digits and the tail.
pub fn disk_seminorm(s: &TateSeriesElement, d: &DiskPoint) -> Result<Seminorm> {
    if !d.center.is_zero() {
        return precondition("only disks centred at 0 are supported");
    }
    if d.center.prime() != s.p {
        return precondition("disk point and series over different primes");
    }
    let t = &d.t;
    if let Some((lo, hi)) = &s.radius_range {
        if t < lo || t > hi {
            return precondition(format!("t = {t} outside the series' radius range [{lo}, {hi}]"));
        }
    }
    let mut known: Option<BigRational> = None;
    let mut unknown: Option<BigRational> = s.tail_bound.clone();
    for (&n, c) in &s.coefficients {
        let shift = t * rat(n);
        match (c.valuation(), c.absolute_precision()) {
            (Some(v), _) => {
                let val = rat(v) + shift;
                if known.as_ref().is_none_or(|k| &val < k) {
                    known = Some(val);
                }
            }
            (None, Some(abs)) => {
                let val = rat(abs) + shift;
                if unknown.as_ref().is_none_or(|u| &val < u) {
                    unknown = Some(val);
                }
            }
            (None, None) => {}
        }
    }
    Ok(match (known, unknown) {
        (None, None) => Seminorm::Infinite,
        (Some(k), None) => Seminorm::Exact(k),
        (Some(k), Some(u)) if k < u => Seminorm::Exact(k),
        (Some(k), Some(u)) => Seminorm::Interval { lower: u, upper: Some(k) },
        (None, Some(u)) => Seminorm::Interval { lower: u, upper: None },
    })
}

/// Pullback of the coordinate `x` to the annulus `|q| ≤ |X| ≤ 1`:
/// `Σ k/(1−qᵏ)·Xᵏ + Σ k·qᵏ/(1−qᵏ)·X⁻ᵏ − 2s₁(q)`, for `1 ≤ k ≤ K`.
pub fn tate_x_series(
    m: &TateModel,
    k: usize,
    radius_range: (BigRational, BigRational),
) -> Result<TateSeriesElement> {
    let v = m.q_valuation();
    let (lo, hi) = &radius_range;
    if k == 0 {
        return precondition("truncation K must be at least 1");
    }
    if !lo.is_positive() || hi >= &rat(v) {
        return precondition(format!("radius range [{lo}, {hi}] not inside (0, {v})"));
    }
    let p = m.p;
    let one = Padic::from_int(p, 1);
    let mut terms = Vec::with_capacity(2 * k + 1);
    let mut qk = one.clone();
    for i in 1..=k {
        qk = (qk * m.q.clone()).truncate(m.precision + i as i64 * v);
        let inv = (one.clone() - qk.clone()).inv()?;
        let c = Padic::from_int(p, i as i64) * inv;
        terms.push((i as i64, c.clone()));
        terms.push((-(i as i64), c * qk.clone()));
    }
    terms.push((0, -(m.s(1) * Padic::from_int(p, 2))));
    let next = rat(k as i64 + 1);
    let tail = (&next * lo).min(&next * (rat(v) - hi));
    TateSeriesElement::truncated(p, terms, k, radius_range, tail)
}

/// `−log_p |x|` at the skeleton point `(0, p^(−t))`; equals `min(t, v(q) − t)`.
///
/// `K` is doubled from `k` until the tail bound strictly exceeds the minimum
/// over the stored terms.
pub fn skeleton_val(m: &TateModel, t: &BigRational, k: usize) -> Result<BigRational> {
    let v = rat(m.q_valuation());
    if !t.is_positive() || t >= &v {
        return precondition(format!("t = {t} is not on the skeleton (0, {v})"));
    }
    let mut k = k.max(1);
    loop {
        let s = tate_x_series(m, k, (t.clone(), t.clone()))?;
        if let Seminorm::Exact(val) = disk_seminorm(&s, &DiskPoint::at_zero(m.p, t.clone()))? {
            return Ok(val);
        }
        if k >= MAX_TRUNCATION {
            return Err(Error::Precision(format!("no certified seminorm at t = {t} with K = {k}")));
        }
        k *= 2;
    }
}

/// The tent function `min(t, v − t)`.
pub fn tent(q_valuation: i64, t: &BigRational) -> BigRational {
    t.min(&(rat(q_valuation) - t)).clone()
}

/// A point `(x(ζ), y(ζ))` of the Tate curve with its curve-equation residual.
#[derive(Clone, Debug)]
pub struct TatePointCheck {
    pub zeta: Padic,
    pub x: Padic,
    pub y: Padic,
    /// Lower bound for `v(y² + xy − x³ − a4·x − a6)`.
    pub residual_valuation: i64,
}

impl TatePointCheck {
    pub fn point(&self) -> Point<Padic> {
        Point::affine(self.x.clone(), self.y.clone())
    }
}

/// `u/(1−u)²` and `u²/(1−u)³`, rewritten in `1/u` when `v(u) < 0`.
fn tate_terms(u: &Padic) -> Result<(Padic, Padic)> {
    let one = Padic::from_int(u.prime(), 1);
    if u.valuation_lower_bound() >= 0 {
        let w = (one - u.clone()).inv()?;
        let w2 = w.clone() * w.clone();
        Ok((u.clone() * w2.clone(), u.clone() * u.clone() * w2 * w))
    } else {
        let ui = u.inv()?;
        let w = (one - ui.clone()).inv()?;
        let w2 = w.clone() * w.clone();
        Ok((ui.clone() * w2.clone(), -(ui * w2 * w)))
    }
}

/// Evaluates `x(ζ) = Σ_{n∈ℤ} qⁿζ/(1−qⁿζ)² − 2s₁` and
/// `y(ζ) = Σ_{n∈ℤ} (qⁿζ)²/(1−qⁿζ)³ + s₁` to absolute precision `n`.
///
/// Terms are kept while `|v(qⁿζ)|` is below `n` plus guard digits covering
/// the loss in `1/(1−qⁿζ)`; `ζ` need not be reduced into the fundamental annulus.
pub fn tate_point(m: &TateModel, zeta: &Padic, n: i64) -> Result<(Padic, Padic)> {
    let vq = m.q_valuation();
    let vz = match zeta.valuation() {
        Some(v) => v,
        None => return precondition("ζ = 0 is not a point of the multiplicative group"),
    };
    if n > m.precision {
        return precondition(format!("precision {n} exceeds the model's {}", m.precision));
    }
    let one = Padic::from_int(m.p, 1);
    // index with v(qⁿζ) closest to zero; only there can 1 − qⁿζ lose digits
    let n0 = -vz.div_euclid(vq);
    let u0 = zeta.clone() * m.q.pow(n0.max(0) as u32) * m.q.inv()?.pow((-n0).max(0) as u32);
    let near = one.clone() - u0.clone();
    let loss = match near.valuation() {
        Some(e) => e.max(0),
        None => return precondition("ζ lies in q^ℤ at this precision (the identity point)"),
    };
    let work = n + 3 * loss + 4;
    let span = work / vq + 2;

    let q = m.q.clone();
    let q_inv = q.inv()?;
    let mut x = -(m.s(1) * Padic::from_int(m.p, 2));
    let mut y = m.s(1);
    let mut u = u0;
    let mut up = u.clone();
    let (tx, ty) = tate_terms(&u)?;
    x = x + tx;
    y = y + ty;
    for _ in 0..span {
        up = (up * q.clone()).truncate(work + span * vq);
        u = u * q_inv.clone();
        for w in [&up, &u] {
            let (tx, ty) = tate_terms(w)?;
            x = x + tx;
            y = y + ty;
        }
    }
    Ok((x.truncate(n), y.truncate(n)))
}

/// Reduces `v(ζ)` into `[0, v(q))`, evaluates `(x(ζ), y(ζ))` to precision `n`
/// and reports the curve-equation residual valuation.
pub fn verify_tate_point(m: &TateModel, zeta: &Padic, n: i64) -> Result<TatePointCheck> {
    let vq = m.q_valuation();
    let vz = match zeta.valuation() {
        Some(v) => v,
        None => return precondition("ζ = 0 is not a point of the multiplicative group"),
    };
    let shift = vz.div_euclid(vq);
    let reduced = if shift >= 0 {
        zeta.clone() * m.q.inv()?.pow(shift as u32)
    } else {
        zeta.clone() * m.q.pow((-shift) as u32)
    };
    let (x, y) = tate_point(m, &reduced, n)?;
    let residual = y.clone() * y.clone() + x.clone() * y.clone()
        - x.clone() * x.clone() * x.clone()
        - m.a4.clone() * x.clone()
        - m.a6.clone();
    Ok(TatePointCheck { zeta: reduced, x, y, residual_valuation: residual.valuation_lower_bound() })
}

impl fmt::Display for TateSeriesElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, c) in &self.coefficients {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})·X^{n}")?;
        }
        if first {
            write!(f, "0")?;
        }
        if let Some(b) = &self.tail_bound {
            write!(f, " + O(v ≥ {b})")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::{q_from_j, tate_model};
    use num_traits::ToPrimitive;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn model() -> TateModel {
        let q = q_from_j(&r(-1, 15558), 3, 40).unwrap();
        tate_model(&q, 40).unwrap()
    }

    #[test]
    fn seminorm_of_simple_elements() {
        let p = 3;
        let t = r(2, 5);
        let d = DiskPoint::at_zero(p, t.clone());
        let x = TateSeriesElement::monomial(p, 1, Padic::from_int(p, 1));
        assert_eq!(disk_seminorm(&x, &d).unwrap(), Seminorm::Exact(t.clone()));
        let c = TateSeriesElement::monomial(p, 0, Padic::from_int(p, 18));
        assert_eq!(disk_seminorm(&c, &d).unwrap(), Seminorm::Exact(r(2, 1)));
        let xa = TateSeriesElement::laurent(p, [(1, Padic::from_int(p, 1)), (0, Padic::from_int(p, -9))]);
        assert_eq!(disk_seminorm(&xa, &d).unwrap(), Seminorm::Exact(t));
        let zero = TateSeriesElement::monomial(p, 0, Padic::from_int(p, 0));
        assert_eq!(disk_seminorm(&zero, &d).unwrap(), Seminorm::Infinite);
        assert!(DiskPoint::new(Padic::from_int(p, 1), r(1, 2)).is_err());
    }

    #[test]
    fn weak_tail_gives_an_interval() {
        let p = 3;
        let s = TateSeriesElement::truncated(p, [(2, Padic::from_int(p, 1))], 2, (r(1, 4), r(3, 4)), r(1, 2))
            .unwrap();
        let got = disk_seminorm(&s, &DiskPoint::at_zero(p, r(1, 2))).unwrap();
        assert_eq!(got, Seminorm::Interval { lower: r(1, 2), upper: Some(r(1, 1)) });
        assert!(disk_seminorm(&s, &DiskPoint::at_zero(p, r(1, 8))).is_err());
        let fuzzy = TateSeriesElement::monomial(p, 0, Padic::zero(p, 5));
        let got = disk_seminorm(&fuzzy, &DiskPoint::at_zero(p, r(1, 2))).unwrap();
        assert_eq!(got, Seminorm::Interval { lower: r(5, 1), upper: None });
    }

    #[test]
    fn x_series_coefficient_valuations() {
        let m = model();
        let s = tate_x_series(&m, 6, (r(1, 5), r(4, 5))).unwrap();
        assert_eq!(s.coefficient(1).unwrap().valuation(), Some(0));
        assert_eq!(s.coefficient(-1).unwrap().valuation(), Some(1));
        assert!(s.coefficient(0).unwrap().valuation_lower_bound() >= 1);
        assert!(s.coefficient(3).unwrap().absolute_precision().unwrap() >= 40);
        assert_eq!(s.tail_bound(), Some(&r(7, 5)));
    }

    #[test]
    fn tent_values() {
        let m = model();
        for (n, d) in [(1, 5), (1, 3), (2, 5), (1, 2), (3, 5), (4, 5), (2, 3)] {
            let t = r(n, d);
            assert_eq!(skeleton_val(&m, &t, 1).unwrap(), tent(1, &t), "t = {t}");
        }
        assert_eq!(skeleton_val(&m, &r(1, 3), 4).unwrap(), r(1, 3));
        assert!(skeleton_val(&m, &r(0, 1), 4).is_err());
        assert!(skeleton_val(&m, &r(1, 1), 4).is_err());
    }

    #[test]
    fn tate_points_lie_on_the_curve() {
        let m = model();
        for z in [2i64, -1, 4, 5, 7, 11, -2] {
            let zeta = Padic::from_int(3, z);
            let check = verify_tate_point(&m, &zeta, 40).unwrap();
            assert!(check.residual_valuation >= 35, "ζ = {z}: {}", check.residual_valuation);
        }
        // v(1 − ζ) = 2 puts x at valuation −4, so x³ keeps 40 − 8 digits
        let near = verify_tate_point(&m, &Padic::from_int(3, 10), 40).unwrap();
        assert_eq!(near.x.valuation(), Some(-4));
        assert!(near.residual_valuation >= 32);
        let identity = Padic::from_int(3, 1);
        assert!(verify_tate_point(&m, &identity, 40).is_err());
        assert!(verify_tate_point(&m, &m.q, 40).is_err());
    }

    #[test]
    fn two_torsion_and_periodicity() {
        let m = model();
        let minus_one = verify_tate_point(&m, &Padic::from_int(3, -1), 40).unwrap();
        let e = m.curve();
        assert!(e.double(&minus_one.point()).is_identity());
        let zeta = Padic::from_int(3, 2);
        let (x1, _) = tate_point(&m, &zeta, 40).unwrap();
        let (x2, _) = tate_point(&m, &(zeta * m.q.clone()), 38).unwrap();
        assert!(x1.eq_mod(&x2, 35));
    }

    proptest! {
        #[test]
        fn tent_law_small_denominators(d in 2i64..=16, n_frac in 0.0f64..1.0) {
            let n = 1 + ((d - 1) as f64 * n_frac) as i64;
            prop_assume!(n < d);
            let m = model();
            let t = r(n, d);
            let val = skeleton_val(&m, &t, 2).unwrap();
            prop_assert_eq!(&val, &tent(1, &t));
            prop_assert_eq!(&val, &skeleton_val(&m, &(r(1, 1) - &t), 2).unwrap());
            let rr = 3f64.powf(-(n as f64 / d as f64));
            prop_assert!(3f64.powf(-val.to_f64().unwrap()) <= rr.max(1.0 / (3.0 * rr)) * (1.0 + 1e-12));
        }

        #[test]
        fn escalation_keeps_certified_values(k in 1usize..8, n in 1i64..7) {
            let m = model();
            let t = r(n, 7);
            let s1 = tate_x_series(&m, k, (t.clone(), t.clone())).unwrap();
            let s2 = tate_x_series(&m, 2 * k, (t.clone(), t.clone())).unwrap();
            let d = DiskPoint::at_zero(3, t);
            if let Seminorm::Exact(v) = disk_seminorm(&s1, &d).unwrap() {
                prop_assert_eq!(disk_seminorm(&s2, &d).unwrap(), Seminorm::Exact(v));
            }
        }

        #[test]
        fn seminorm_is_ultrametric(
            a in proptest::collection::vec((-4i64..5, 1i64..200), 1..4),
            b in proptest::collection::vec((-4i64..5, 1i64..200), 1..4),
            tn in 1i64..9,
        ) {
            let p = 3;
            let mk = |v: &[(i64, i64)]| TateSeriesElement::laurent(p, v.iter().map(|&(n, c)| (n, Padic::from_int(p, c))));
            let (s1, s2) = (mk(&a), mk(&b));
            let d = DiskPoint::at_zero(p, r(tn, 10));
            let val = |s: &TateSeriesElement| match disk_seminorm(s, &d).unwrap() {
                Seminorm::Exact(v) => Some(v),
                Seminorm::Infinite => None,
                other => panic!("{other:?}"),
            };
            let sum = val(&(&s1 + &s2));
            let (v1, v2) = (val(&s1).unwrap(), val(&s2).unwrap());
            let lo = v1.clone().min(v2.clone());
            prop_assert!(sum.as_ref().is_none_or(|s| s >= &lo));
            let disjoint = a.iter().all(|x| b.iter().all(|y| x.0 != y.0));
            if disjoint {
                prop_assert_eq!(sum, Some(lo));
            }
        }
    }

    #[test]
    fn monomials_are_multiplicative() {
        let p = 3;
        let t = r(3, 7);
        let d = DiskPoint::at_zero(p, t.clone());
        let v = |n: i64, c: i64| disk_seminorm(&TateSeriesElement::monomial(p, n, Padic::from_int(p, c)), &d).unwrap();
        assert_eq!(v(3, 18), Seminorm::Exact(&t * rat(3) + rat(2)));
    }
}
