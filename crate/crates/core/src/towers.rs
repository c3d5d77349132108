//! Preimage towers `fⁿ(qₙ) = q₀` at a good-reduction prime, with
//! unramifiedness certificates and Newton-polygon valuation spectra.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{discriminant, mahler_height, valuation_spectrum, vp, OrbitPolynomial, ProjPointQ, ValuationSpectrum};
use crate::elliptic::{LattesMap, RationalMap};
use crate::error::{precondition, Result};
use crate::heights::{HeightConfig, HeightContext, HeightEstimate, Preperiodicity, DEFAULT_MAX_ITERATIONS};
use crate::{EllipticCurve, IntPoly};

/// Largest orbit degree a tower level may reach.
pub const MAX_TOWER_DEGREE: usize = 81;

/// Squarefree part of `Σ gᵢ·N^i·D^(k−i)`, whose roots are `{x : f(x) ∈ roots(g)}`.
///
/// This is `Res_Y(g(Y), N(X) − Y·D(X))` up to sign. Preimages lost to a
/// repeated root or to `∞` are logged.
pub fn preimage_polynomial(map: &RationalMap, g: &OrbitPolynomial) -> Result<OrbitPolynomial> {
    let (n, d) = (map.numerator(), map.denominator());
    let k = g.degree();
    let mut n_pows = vec![IntPoly::constant(BigInt::one())];
    let mut d_pows = vec![IntPoly::constant(BigInt::one())];
    for i in 1..=k {
        n_pows.push(&n_pows[i - 1] * n);
        d_pows.push(&d_pows[i - 1] * d);
    }
    let mut acc = IntPoly::zero();
    for (i, c) in g.poly().coeffs().iter().enumerate() {
        if !c.is_zero() {
            acc = &acc + &(&n_pows[i] * &d_pows[k - i]).scale(c);
        }
    }
    if acc.degree().unwrap_or(0) == 0 {
        return precondition(format!("preimage resultant of {} is degenerate (constant)", g.poly()));
    }
    let expected = map.degree() * k;
    if acc.deg() < expected {
        log::warn!("{} preimage(s) of the orbit lie at infinity", expected - acc.deg());
    }
    let out = OrbitPolynomial::squarefree_of(&acc)?;
    if out.degree() < acc.deg() {
        log::warn!("preimages collide: degree {} drops to {} after the squarefree part", acc.deg(), out.degree());
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Certificate {
    Certified,
    Inconclusive,
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Certificate::Certified => "certified",
            Certificate::Inconclusive => "inconclusive",
        })
    }
}

fn reduce_mod(g: &IntPoly, p: &BigInt) -> Vec<BigInt> {
    let mut v: Vec<BigInt> = g.coeffs().iter().map(|c| c.mod_floor(p)).collect();
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

fn rem_mod(a: &[BigInt], b: &[BigInt], p: &BigInt) -> Vec<BigInt> {
    let mut r = a.to_vec();
    let inv = b.last().expect("nonzero divisor").modinv(p).expect("prime modulus");
    while r.len() >= b.len() {
        let c = (r.last().expect("nonempty") * &inv).mod_floor(p);
        let off = r.len() - b.len();
        for (i, bi) in b.iter().enumerate() {
            r[off + i] = (&r[off + i] - &c * bi).mod_floor(p);
        }
        while r.last().is_some_and(|c| c.is_zero()) {
            r.pop();
        }
    }
    r
}

/// `p ∤ disc(g)`: decided as "ḡ is squarefree of full degree over 𝔽_p"
/// when `p ∤ lead(g)`, and by the exact discriminant otherwise.
pub fn unramified_certificate(g: &OrbitPolynomial, p: u64) -> Certificate {
    let pb = BigInt::from(p);
    let poly = g.poly();
    let certified = if poly.lead().is_multiple_of(&pb) {
        discriminant(poly).map(|d| !d.is_multiple_of(&pb)).unwrap_or(false)
    } else {
        let gbar = reduce_mod(poly, &pb);
        let dbar = reduce_mod(&poly.derivative(), &pb);
        if dbar.is_empty() {
            false
        } else {
            let (mut a, mut b) = (gbar, dbar);
            while !b.is_empty() {
                let r = rem_mod(&a, &b, &pb);
                a = b;
                b = r;
            }
            a.len() == 1
        }
    };
    if certified {
        Certificate::Certified
    } else {
        Certificate::Inconclusive
    }
}

#[derive(Clone, Debug)]
pub struct TowerLevel {
    pub level: usize,
    pub orbit: OrbitPolynomial,
    /// `ĥ_f(qₙ) = canonical_height_ratio · ĥ_f(q₀)`, namely `1/m^(2n)`.
    pub canonical_height_ratio: BigRational,
    /// `canonical_height_ratio` times the estimate of `ĥ_f(q₀)`.
    pub canonical_height: f64,
    pub naive_orbit_height: f64,
    pub unramified_at_p: Certificate,
    pub spectrum: ValuationSpectrum,
}

#[derive(Clone, Debug)]
pub struct Tower {
    pub p: u64,
    pub m: u64,
    pub q0: ProjPointQ,
    pub q0_height: HeightEstimate,
    pub comparison_constant: f64,
    pub levels: Vec<TowerLevel>,
}

fn max_depth(m: u64) -> usize {
    let d = (m * m) as usize;
    let mut depth = 0;
    let mut deg = 1usize;
    while deg * d <= MAX_TOWER_DEGREE {
        deg *= d;
        depth += 1;
    }
    depth
}

/// Checks good reduction of the given model at `p`.
pub fn check_good_reduction(e: &EllipticCurve, p: u64) -> Result<()> {
    if e.coefficients().iter().any(|a| vp(a, p).is_some_and(|v| v < 0)) {
        return precondition(format!("model is not integral at p = {p}"));
    }
    if vp(&e.discriminant(), p) != Some(0) {
        return precondition(format!("bad reduction: p = {p} divides the discriminant {}", e.discriminant()));
    }
    if vp(&e.j_invariant()?, p).is_some_and(|v| v < 0) {
        return precondition(format!("v_{p}(j) < 0"));
    }
    Ok(())
}

/// Levels `0..=depth` of `q₀ ← f⁻¹ ← f⁻² ← …` for the Lattès map of `[m]`.
pub fn preimage_tower(l: &LattesMap, p: u64, q0: &ProjPointQ, depth: usize, cfg: &HeightConfig) -> Result<Tower> {
    check_good_reduction(&l.curve, p)?;
    let m = l.m;
    if m.is_multiple_of(p) {
        return precondition(format!("p = {p} divides m = {m}"));
    }
    let cap = max_depth(m);
    if depth > cap {
        return precondition(format!("depth {depth} exceeds the cap {cap} for m = {m}"));
    }
    if q0.is_infinity() {
        return precondition("q₀ must be finite");
    }
    let ctx = HeightContext::for_lattes(l)?;
    match ctx.is_preperiodic(q0, DEFAULT_MAX_ITERATIONS) {
        Preperiodicity::Preperiodic { tail, cycle } => {
            return precondition(format!("q₀ = {q0} is preperiodic (tail {tail}, cycle {cycle})"))
        }
        Preperiodicity::Wandering(None) => {
            return precondition(format!("could not certify that q₀ = {q0} is not preperiodic"))
        }
        Preperiodicity::Wandering(Some(_)) => {}
    }
    let q0_height = ctx.canonical_height(q0, cfg)?;
    let mut orbit = OrbitPolynomial::linear(q0.a(), q0.b());
    let mut levels = Vec::with_capacity(depth + 1);
    let m2 = BigInt::from(m * m);
    for n in 0..=depth {
        if n > 0 {
            orbit = preimage_polynomial(&l.map, &orbit)?;
        }
        let ratio = BigRational::new(BigInt::one(), num_traits::pow(m2.clone(), n));
        levels.push(TowerLevel {
            level: n,
            canonical_height_ratio: ratio.clone(),
            canonical_height: ratio.to_f64().expect("small") * q0_height.value,
            naive_orbit_height: mahler_height(&orbit)?,
            unramified_at_p: unramified_certificate(&orbit, p),
            spectrum: valuation_spectrum(&orbit, p),
            orbit: orbit.clone(),
        });
    }
    Ok(Tower { p, m, q0: q0.clone(), q0_height, comparison_constant: ctx.constant(), levels })
}

/// `max |fⁿ(z) − q₀|` over the complex roots `z` of a level-`n` orbit polynomial.
pub fn orbit_residual(map: &RationalMap, orbit: &OrbitPolynomial, n: usize, q0: &ProjPointQ) -> Result<f64> {
    let target = q0.to_rational().and_then(|r| r.to_f64()).ok_or_else(|| {
        crate::Error::Precondition("q₀ must be finite".into())
    })?;
    let roots = crate::arith::integer_poly_roots(orbit.poly().coeffs())?;
    Ok(roots
        .iter()
        .map(|r| {
            let mut z = Some(r.z);
            for _ in 0..n {
                z = z.and_then(|w| map.eval_complex(w));
            }
            z.map_or(f64::INFINITY, |w: Complex<f64>| (w - target).norm())
        })
        .fold(0.0, f64::max))
}

/// Valuations of the roots of `g` at `p`, each flagged for membership in `(1/e)ℤ`.
#[derive(Clone, Debug, PartialEq)]
pub struct ValuationReport {
    pub p: u64,
    pub e: u64,
    /// Distinct finite valuations with multiplicity and membership flag.
    pub entries: Vec<(BigRational, usize, bool)>,
    pub at_infinity: usize,
    pub violations: Vec<BigRational>,
}

impl ValuationReport {
    pub fn all_member(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn valuation_histogram(g: &OrbitPolynomial, p: u64, e: u64) -> Result<ValuationReport> {
    if e == 0 {
        return precondition("ramification index must be positive");
    }
    let spec = valuation_spectrum(g, p);
    let mut entries: Vec<(BigRational, usize, bool)> = Vec::new();
    for v in &spec.finite {
        match entries.iter_mut().find(|(w, _, _)| w == v) {
            Some(entry) => entry.1 += 1,
            None => {
                let member = (v * BigRational::from_integer(BigInt::from(e))).is_integer();
                entries.push((v.clone(), 1, member));
            }
        }
    }
    entries.sort_by(|a, b| a.0.cmp(&b.0));
    let violations = entries.iter().filter(|(_, _, ok)| !ok).map(|(v, _, _)| v.clone()).collect();
    Ok(ValuationReport { p, e, entries, at_infinity: spec.at_infinity, violations })
}

/// Convenience: the orbit polynomial of `q₀` pulled back `n` times.
pub fn iterated_preimage(map: &RationalMap, q0: &ProjPointQ, n: usize) -> Result<OrbitPolynomial> {
    if q0.is_infinity() {
        return precondition("q₀ must be finite");
    }
    let mut g = OrbitPolynomial::linear(q0.a(), q0.b());
    for _ in 0..n {
        g = preimage_polynomial(map, &g)?;
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::lattes_map;
    use crate::heights::canonical_height;

    fn x3p1() -> LattesMap {
        lattes_map(&EllipticCurve::from_integers([0, 0, 0, 0, 1]).unwrap(), 2).unwrap()
    }

    fn orbit(c: &[i64]) -> OrbitPolynomial {
        OrbitPolynomial::new(IntPoly::from_i64s(c)).unwrap()
    }

    #[test]
    fn linear_preimage() {
        let l = x3p1();
        let g = preimage_polynomial(&l.map, &orbit(&[-5, 1])).unwrap();
        assert_eq!(g.poly(), &IntPoly::from_i64s(&[-20, -8, 0, -20, 1]));
        for r in crate::arith::integer_poly_roots(g.poly().coeffs()).unwrap() {
            let w = l.map.eval_complex(r.z).unwrap();
            assert!((w - Complex::new(5.0, 0.0)).norm() < 1e-9);
        }
    }

    #[test]
    fn preimage_degree_law() {
        let l = x3p1();
        let g1 = preimage_polynomial(&l.map, &orbit(&[-5, 1])).unwrap();
        let g2 = preimage_polynomial(&l.map, &g1).unwrap();
        assert_eq!(g2.degree(), 16);
    }

    #[test]
    fn certificates() {
        assert_eq!(unramified_certificate(&orbit(&[-2, 0, 1]), 3), Certificate::Certified);
        assert_eq!(unramified_certificate(&orbit(&[-3, 0, 1]), 3), Certificate::Inconclusive);
        assert_eq!(unramified_certificate(&orbit(&[1, 0, 1]), 5), Certificate::Certified);
        assert_eq!(unramified_certificate(&orbit(&[1, 0, 1]), 2), Certificate::Inconclusive);
        // leading coefficient divisible by p: exact discriminant path
        assert_eq!(unramified_certificate(&orbit(&[1, 1, 3]), 3), Certificate::Certified);
        assert_eq!(unramified_certificate(&orbit(&[-1, 3]), 3), Certificate::Certified);
    }

    #[test]
    fn certificate_agrees_with_discriminant() {
        let l = x3p1();
        let g = preimage_polynomial(&l.map, &orbit(&[-3, 1])).unwrap();
        for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
            let d = discriminant(g.poly()).unwrap();
            let expect = if d.is_multiple_of(&BigInt::from(p)) { Certificate::Inconclusive } else { Certificate::Certified };
            assert_eq!(unramified_certificate(&g, p), expect, "p = {p}");
        }
    }

    #[test]
    fn histograms() {
        let g = orbit(&[-3, 0, 1]);
        let h1 = valuation_histogram(&g, 3, 1).unwrap();
        assert_eq!(h1.violations, vec![BigRational::new(1.into(), 2.into())]);
        assert_eq!(h1.entries[0].1, 2);
        assert!(valuation_histogram(&g, 3, 2).unwrap().all_member());
        assert!(valuation_histogram(&orbit(&[-2, 0, 1]), 3, 1).unwrap().all_member());
    }

    #[test]
    fn tower_on_good_reduction_fixture() {
        let e = EllipticCurve::from_integers([0, 0, 0, 0, -2]).unwrap();
        let l = lattes_map(&e, 2).unwrap();
        let q0 = ProjPointQ::from_integer(3);
        let t = preimage_tower(&l, 5, &q0, 2, &HeightConfig::default()).unwrap();
        assert_eq!(t.levels.len(), 3);
        assert_eq!(t.levels[2].orbit.degree(), 16);
        assert_eq!(t.levels[0].unramified_at_p, Certificate::Certified);
        for lvl in &t.levels {
            assert!(lvl.naive_orbit_height <= lvl.canonical_height + t.comparison_constant);
            let back = &lvl.canonical_height_ratio * BigRational::from_integer(BigInt::from(4).pow(lvl.level as u32));
            assert!(back.is_one());
        }
        assert!(orbit_residual(&l.map, &t.levels[2].orbit, 2, &q0).unwrap() < 1e-6);
        let direct = canonical_height(&l, &q0, 1e-6).unwrap();
        assert_eq!(direct.value, t.q0_height.value);
    }

    #[test]
    fn tower_preconditions() {
        let l = x3p1();
        let cfg = HeightConfig::default();
        // Δ = −432 = −2⁴·3³
        assert!(preimage_tower(&l, 3, &ProjPointQ::from_integer(1), 1, &cfg).is_err());
        assert!(preimage_tower(&l, 2, &ProjPointQ::from_integer(1), 1, &cfg).is_err());
        // torsion x-coordinate
        assert!(preimage_tower(&l, 5, &ProjPointQ::from_integer(2), 1, &cfg).is_err());
        assert!(preimage_tower(&l, 5, &ProjPointQ::from_integer(1), 4, &cfg).is_err());
        assert!(preimage_tower(&l, 5, &ProjPointQ::from_integer(1), 0, &cfg).is_ok());
    }
}
