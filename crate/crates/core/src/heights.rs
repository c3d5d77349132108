//! Naive and canonical heights on ℙ¹(ℚ) for Lattès maps, and preperiodicity.
//!
//! The canonical height is the limit `h(fⁿ(P))/dⁿ`. Every iterate is kept as
//! a coprime integer pair; since `gcd(N(a, b), D(a, b))` divides the
//! homogeneous resultant `R` of the map, the gcd is taken against `R`
//! instead of against the (huge) iterate itself.

use std::collections::HashMap;
use std::f64::consts::LN_2;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::proj::{ln_abs, naive_height};
use crate::arith::ProjPointQ;
use crate::elliptic::{LattesMap, RationalMap};
use crate::error::{precondition, Error, Result};

pub const DEFAULT_TOL: f64 = 1e-6;
pub const DEFAULT_MAX_ITERATIONS: usize = 64;
/// Largest integer, in bits, the height iteration may hold per coordinate.
pub const DEFAULT_BIT_BUDGET: u64 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HeightConfig {
    pub tol: f64,
    pub max_iterations: usize,
    pub bit_budget: u64,
}

impl Default for HeightConfig {
    fn default() -> Self {
        HeightConfig { tol: DEFAULT_TOL, max_iterations: DEFAULT_MAX_ITERATIONS, bit_budget: DEFAULT_BIT_BUDGET }
    }
}

/// `value` approximates ĥ_f(P) with `|value − ĥ_f(P)| ≤ error_bound`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HeightEstimate {
    pub value: f64,
    pub error_bound: f64,
    pub iterations_used: usize,
    /// False when a resource cap stopped the iteration before `error_bound ≤ tol`.
    pub converged: bool,
}

/// Upper and lower parts of the comparison constant; `constant` is their max.
#[derive(Clone, Debug, PartialEq)]
pub struct ComparisonConstant {
    /// `h(f(P)) − d·h(P) ≤ upper`
    pub upper: f64,
    /// `d·h(P) − h(f(P)) ≤ lower`
    pub lower: f64,
    pub constant: f64,
    /// `log(‖G1‖₁ + ‖G2‖₁)` for the rational Bezout cofactors; over ℝ,
    /// `max(|N|, |D|)(x) ≥ ‖x‖^d / exp(bezout_l1)`.
    pub bezout_l1: f64,
    /// `log max(‖N‖₁, ‖D‖₁)`
    pub coeff_l1: f64,
}

/// Solves `M v = rhs` over ℚ; `M` is square and invertible.
fn solve_rational(mut m: Vec<Vec<BigRational>>, mut rhs: Vec<BigRational>) -> Option<Vec<BigRational>> {
    let n = rhs.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        rhs.swap(col, piv);
        let inv = m[col][col].recip();
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] * &inv;
            for c in col..n {
                let t = &factor * &m[col][c];
                m[r][c] -= t;
            }
            let t = &factor * &rhs[col];
            rhs[r] -= t;
        }
    }
    Some((0..n).map(|i| &rhs[i] / &m[i][i]).collect())
}

/// Lower part of the comparison constant from explicit Bezout identities
/// `G1·N + G2·D = X^(2d−1)` and `= Y^(2d−1)` with rational forms `G_i` of
/// degree `d − 1`: for coprime `(a, b)`, `gcd(N(a,b), D(a,b))` divides the
/// common denominator `δ` of the `G_i`, and `max(|N|, |D|) ≥ max(|a|,|b|)^d / (‖G1‖₁ + ‖G2‖₁)`.
fn bezout_lower_constant(map: &RationalMap) -> (f64, f64) {
    let d = map.degree();
    let n = 2 * d;
    let q = |c: &BigInt| BigRational::from_integer(c.clone());
    let mut m = vec![vec![BigRational::zero(); n]; n];
    for i in 0..d {
        for (k, c) in map.numerator().coeffs().iter().enumerate() {
            m[i + k][i] = q(c);
        }
        for (k, c) in map.denominator().coeffs().iter().enumerate() {
            m[i + k][d + i] = q(c);
        }
    }
    [0, n - 1]
        .iter()
        .map(|&target| {
            let mut rhs = vec![BigRational::zero(); n];
            rhs[target] = BigRational::one();
            let v = solve_rational(m.clone(), rhs).expect("nonzero resultant makes the system regular");
            let den = v.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
            let l1 = v.iter().fold(BigRational::zero(), |s, c| s + c.abs());
            let l1 = ln_abs(l1.numer()) - ln_abs(l1.denom());
            (ln_abs(&den) + l1, l1)
        })
        .fold((0.0, f64::NEG_INFINITY), |(a, b), (c, e)| (a.max(c), b.max(e)))
}

/// A constant `C` with `|h(f(P)) − d·h(P)| ≤ C` for all `P ∈ ℙ¹(ℚ)`.
pub fn height_comparison_constant(map: &RationalMap) -> Result<ComparisonConstant> {
    let d = map.degree();
    if d < 2 {
        return precondition("canonical heights need degree d ≥ 2");
    }
    let max_coeff = map.numerator().max_abs_coeff().max(map.denominator().max_abs_coeff());
    let upper = ((d + 1) as f64).ln() + ln_abs(&max_coeff);
    let (lower, bezout_l1) = bezout_lower_constant(map);
    let l1 = |p: &crate::IntPoly| p.coeffs().iter().fold(BigInt::zero(), |s, c| s + c.abs());
    let coeff_l1 = ln_abs(&l1(map.numerator()).max(l1(map.denominator())));
    Ok(ComparisonConstant { upper, lower, constant: upper.max(lower), bezout_l1, coeff_l1 })
}

/// Precomputed data for repeated height queries against one map.
#[derive(Clone, Debug)]
pub struct HeightContext {
    map: RationalMap,
    resultant: BigInt,
    pub comparison: ComparisonConstant,
}

impl HeightContext {
    pub fn new(map: &RationalMap) -> Result<Self> {
        let comparison = height_comparison_constant(map)?;
        Ok(HeightContext { map: map.clone(), resultant: map.homogeneous_resultant().abs(), comparison })
    }

    pub fn for_lattes(l: &LattesMap) -> Result<Self> {
        HeightContext::new(&l.map)
    }

    pub fn degree(&self) -> usize {
        self.map.degree()
    }

    pub fn constant(&self) -> f64 {
        self.comparison.constant
    }

    /// `f(P)` in normalized form, using `gcd(N, D) | R`.
    pub fn step(&self, pt: &ProjPointQ) -> ProjPointQ {
        let (n, d) = self.map.eval_forms(pt.a(), pt.b());
        let r = &self.resultant;
        let g = r.gcd(&n.mod_floor(r)).gcd(&d.mod_floor(r));
        let (mut n, mut d) = if g.is_one() { (n, d) } else { (n / &g, d / &g) };
        if d.is_zero() {
            return ProjPointQ::infinity();
        }
        if d.is_negative() {
            n = -n;
            d = -d;
        }
        debug_assert!(n.gcd(&d).is_one());
        crate::arith::proj::from_coprime(n, d)
    }

    /// Error bound `C / ((d − 1)·dⁿ)` after `n` iterations.
    pub fn error_bound(&self, n: usize) -> f64 {
        let d = self.degree() as f64;
        self.constant() / ((d - 1.0) * d.powi(n as i32))
    }

    /// Iterations `n` with `C/dⁿ ≤ tol`, capped. This stops a factor `d − 1`
    /// later than [`Self::error_bound`] alone requires, which keeps the actual
    /// error small enough that `dᵏ·ĥ` stays within a few `tol`.
    fn iterations_for(&self, cfg: &HeightConfig) -> usize {
        let d = self.degree() as f64;
        (0..cfg.max_iterations)
            .find(|&n| self.constant() / d.powi(n as i32) <= cfg.tol)
            .unwrap_or(cfg.max_iterations)
    }

    fn fallback(&self, pt: &ProjPointQ) -> HeightEstimate {
        HeightEstimate { value: naive_height(pt), error_bound: self.error_bound(0), iterations_used: 0, converged: false }
    }

    /// Best estimate reachable within the configured caps; never fails.
    ///
    /// The lift `(aₙ, bₙ)` is carried in two pieces: its residues modulo
    /// `R^(N+1−n)·(…)`, enough to read off every gcd `gₙ | R` exactly, and a
    /// `w`-bit truncation `(Aₙ, Bₙ) ≈ λₙ·(aₙ, bₙ)` for the archimedean size.
    /// The truncation error is propagated with the Bezout bound
    /// `max(|N|, |D|)(x) ≥ ‖x‖^d / B` and added to the returned bound.
    pub fn estimate(&self, pt: &ProjPointQ, cfg: &HeightConfig) -> HeightEstimate {
        let d = self.degree();
        let df = d as f64;
        let steps = self.iterations_for(cfg);
        let gain = (self.comparison.bezout_l1 + self.comparison.coeff_l1) / LN_2 + df.log2() + 1.0;
        let w = 64 + (steps as f64 * gain + (1.0 / cfg.tol).log2().max(0.0)).ceil() as u64;
        let r = &self.resultant;
        let mut modulus = r.pow(steps as u32 + 1);
        if w > cfg.bit_budget || modulus.bits() > cfg.bit_budget {
            return self.fallback(pt);
        }

        let truncate = |x: BigInt, y: BigInt| {
            let s = x.bits().max(y.bits()).saturating_sub(w);
            (x >> s, y >> s, s)
        };
        let mut ra = pt.a().mod_floor(&modulus);
        let mut rb = pt.b().mod_floor(&modulus);
        let (mut big_a, mut big_b, s0) = truncate(pt.a().clone(), pt.b().clone());
        let mut mu = -(s0 as f64) * LN_2;
        let amp = (self.comparison.bezout_l1 + self.comparison.coeff_l1).exp();
        let round = 2f64.powi(2 - w.min(1000) as i32);
        let mut eps = if s0 > 0 { round } else { 0.0 };
        let mut scale = 1.0;
        for _ in 0..steps {
            let (fa, fb) = self.map.eval_forms(&ra, &rb);
            let (fa, fb) = (fa.mod_floor(&modulus), fb.mod_floor(&modulus));
            let g = r.gcd(&fa.mod_floor(r)).gcd(&fb.mod_floor(r));
            modulus /= &g;
            ra = (fa / &g).mod_floor(&modulus);
            rb = (fb / &g).mod_floor(&modulus);

            let (na, nb) = self.map.eval_forms(&big_a, &big_b);
            let (na, nb, sh) = truncate(na, nb);
            big_a = na;
            big_b = nb;
            scale *= df;
            mu += (ln_abs(&g) - sh as f64 * LN_2) / scale;
            eps = amp * (df * eps.ln_1p()).exp_m1() + if sh > 0 { round } else { 0.0 };
        }
        if !(eps < 0.5) {
            return self.fallback(pt);
        }
        let top = if big_a.magnitude() >= big_b.magnitude() { &big_a } else { &big_b };
        let value = (ln_abs(top) / scale - mu).max(0.0);
        let error_bound = self.error_bound(steps) - (-eps).ln_1p() / scale;
        HeightEstimate { value, error_bound, iterations_used: steps, converged: error_bound <= cfg.tol }
    }

    /// The same limit by literal exact iteration of the reduced lift; the
    /// coordinates grow like `dⁿ·ĥ`, so only small heights fit the bit budget.
    pub fn exact_estimate(&self, pt: &ProjPointQ, cfg: &HeightConfig) -> HeightEstimate {
        let d = self.degree() as f64;
        let steps = self.iterations_for(cfg);
        let mut cur = pt.clone();
        let mut n = 0usize;
        loop {
            let bound = self.error_bound(n);
            let value = (naive_height(&cur) / d.powi(n as i32)).max(0.0);
            if n >= steps && bound <= cfg.tol {
                return HeightEstimate { value, error_bound: bound, iterations_used: n, converged: true };
            }
            let bits = cur.a().bits().max(cur.b().bits());
            if n >= cfg.max_iterations || bits.saturating_mul(d as u64) > cfg.bit_budget {
                return HeightEstimate { value, error_bound: bound, iterations_used: n, converged: false };
            }
            cur = self.step(&cur);
            n += 1;
        }
    }

    pub fn canonical_height(&self, pt: &ProjPointQ, cfg: &HeightConfig) -> Result<HeightEstimate> {
        if !(cfg.tol > 0.0) {
            return precondition("tolerance must be positive");
        }
        let est = self.estimate(pt, cfg);
        if !est.converged {
            return Err(Error::Resource(format!(
                "height iteration stopped after {} steps at {} ± {:e}",
                est.iterations_used, est.value, est.error_bound
            )));
        }
        Ok(est)
    }

    pub fn is_preperiodic(&self, pt: &ProjPointQ, max_iterations: usize) -> Preperiodicity {
        let d = self.degree() as f64;
        let threshold = self.constant() / (d - 1.0) + 1.0;
        let mut seen: HashMap<ProjPointQ, usize> = HashMap::new();
        let mut cur = pt.clone();
        for i in 0..=max_iterations {
            if let Some(&j) = seen.get(&cur) {
                return Preperiodicity::Preperiodic { tail: j, cycle: i - j };
            }
            let h = naive_height(&cur);
            if h > threshold {
                return Preperiodicity::Wandering(Some(WanderingCertificate {
                    iterate: i,
                    naive_height: h,
                    threshold,
                }));
            }
            seen.insert(cur.clone(), i);
            cur = self.step(&cur);
        }
        Preperiodicity::Wandering(None)
    }
}

/// Witness that `fⁱ(P)` has naive height above `C/(d−1) + 1`, hence
/// `ĥ(fⁱ(P)) ≥ h − C/(d−1) > 0` and `P` is not preperiodic.
#[derive(Clone, Debug, PartialEq)]
pub struct WanderingCertificate {
    pub iterate: usize,
    pub naive_height: f64,
    pub threshold: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Preperiodicity {
    /// `f^(tail + cycle)(P) = f^tail(P)` with both minimal.
    Preperiodic { tail: usize, cycle: usize },
    /// Not preperiodic when certified; `None` when the iteration cap was hit first.
    Wandering(Option<WanderingCertificate>),
}

impl Preperiodicity {
    pub fn is_preperiodic(&self) -> bool {
        matches!(self, Preperiodicity::Preperiodic { .. })
    }

    pub fn is_certified_wandering(&self) -> bool {
        matches!(self, Preperiodicity::Wandering(Some(_)))
    }
}

pub fn canonical_height(l: &LattesMap, pt: &ProjPointQ, tol: f64) -> Result<HeightEstimate> {
    let cfg = HeightConfig { tol, ..HeightConfig::default() };
    HeightContext::for_lattes(l)?.canonical_height(pt, &cfg)
}

pub fn is_preperiodic(l: &LattesMap, pt: &ProjPointQ) -> Result<Preperiodicity> {
    Ok(HeightContext::for_lattes(l)?.is_preperiodic(pt, DEFAULT_MAX_ITERATIONS))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::lattes_map;
    use crate::EllipticCurve;

    fn ctx() -> (LattesMap, HeightContext) {
        let l = lattes_map(&EllipticCurve::from_integers([0, 0, 0, 0, 1]).unwrap(), 2).unwrap();
        let c = HeightContext::for_lattes(&l).unwrap();
        (l, c)
    }

    #[test]
    fn comparison_constant_covers_coefficient_bound() {
        let (_, c) = ctx();
        assert!(c.constant() >= 8f64.ln());
        assert!(c.constant().is_finite());
        let linear = RationalMap::new(crate::IntPoly::from_i64s(&[0, 1]), crate::IntPoly::from_i64s(&[1]));
        assert!(height_comparison_constant(&linear.unwrap()).is_err());
    }

    #[test]
    fn fast_step_matches_full_reduction() {
        let (l, c) = ctx();
        for (a, b) in [(1, 1), (3, 7), (-5, 2), (2, 1), (1, 0), (0, 1), (12, 5)] {
            let p = crate::arith::reduce_proj(a.into(), b.into()).unwrap();
            assert_eq!(c.step(&p), l.map.eval_proj(&p));
        }
    }

    #[test]
    fn torsion_heights_vanish() {
        let (l, _) = ctx();
        for x in [2, 0, -1] {
            let h = canonical_height(&l, &ProjPointQ::from_integer(x), 1e-6).unwrap();
            assert!(h.value <= 1e-6, "x = {x}: {h:?}");
        }
        let h = canonical_height(&l, &ProjPointQ::infinity(), 1e-6).unwrap();
        assert_eq!(h.value, 0.0);
    }

    #[test]
    fn wandering_point_has_positive_height() {
        let (l, c) = ctx();
        let h = canonical_height(&l, &ProjPointQ::from_integer(1), 1e-6).unwrap();
        assert!(h.value - h.error_bound > 0.01, "{h:?}");
        assert!(c.is_preperiodic(&ProjPointQ::from_integer(1), 64).is_certified_wandering());
    }

    #[test]
    fn preperiodic_orbits() {
        let (_, c) = ctx();
        assert_eq!(
            c.is_preperiodic(&ProjPointQ::infinity(), 64),
            Preperiodicity::Preperiodic { tail: 0, cycle: 1 }
        );
        // 2 ↦ 0 ↦ 0
        assert_eq!(
            c.is_preperiodic(&ProjPointQ::from_integer(2), 64),
            Preperiodicity::Preperiodic { tail: 1, cycle: 1 }
        );
        // −1 ↦ ∞ ↦ ∞
        assert_eq!(
            c.is_preperiodic(&ProjPointQ::from_integer(-1), 64),
            Preperiodicity::Preperiodic { tail: 1, cycle: 1 }
        );
    }

    #[test]
    fn truncated_lift_matches_exact_iteration() {
        let (_, c) = ctx();
        let cfg = HeightConfig { tol: 1e-4, ..HeightConfig::default() };
        for x in ["1/1", "-7/3", "5/2", "0/1", "2/1", "-1/1"] {
            let pt: ProjPointQ = x.parse().unwrap();
            let fast = c.estimate(&pt, &cfg);
            let exact = c.exact_estimate(&pt, &cfg);
            assert!(fast.converged && exact.converged, "{x}");
            assert!((fast.value - exact.value).abs() <= fast.error_bound + 1e-12, "{x}: {fast:?} {exact:?}");
        }
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let (_, c) = ctx();
        let cfg = HeightConfig { tol: 1e-6, max_iterations: 64, bit_budget: 64 };
        let pt = ProjPointQ::from_integer(1);
        for est in [c.estimate(&pt, &cfg), c.exact_estimate(&pt, &cfg)] {
            assert!(!est.converged);
            assert!(est.error_bound > 1e-6);
        }
        assert!(matches!(c.canonical_height(&pt, &cfg), Err(Error::Resource(_))));
        assert!(c.canonical_height(&pt, &HeightConfig { tol: 0.0, ..cfg }).is_err());
    }
}
