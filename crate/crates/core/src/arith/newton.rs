//! Newton polygons of integer polynomials and the root-valuation spectra they encode.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::arith::orbit::OrbitPolynomial;
use crate::arith::poly::Poly;
use crate::arith::proj::vp_int;
use crate::error::{precondition, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    pub slope: BigRational,
    pub length: usize,
}

/// Lower convex hull of `{(i, v_p(a_i)) : a_i ≠ 0}`, as segments of strictly
/// increasing slope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolygon {
    pub p: u64,
    pub segments: Vec<Segment>,
}

impl NewtonPolygon {
    /// Valuations of the nonzero roots, with multiplicity: the negated slopes.
    pub fn root_valuations(&self) -> Vec<BigRational> {
        self.segments
            .iter()
            .flat_map(|s| std::iter::repeat_n(-s.slope.clone(), s.length))
            .collect()
    }

    pub fn total_length(&self) -> usize {
        self.segments.iter().map(|s| s.length).sum()
    }
}

pub fn newton_polygon(f: &Poly<BigInt>, p: u64) -> Result<NewtonPolygon> {
    if f.is_zero() {
        return precondition("Newton polygon of the zero polynomial");
    }
    let pts: Vec<(i64, i64)> = f
        .coeffs()
        .iter()
        .enumerate()
        .filter_map(|(i, c)| vp_int(c, p).map(|v| (i as i64, v)))
        .collect();
    // Monotone-chain lower hull; points are already sorted by abscissa.
    let mut hull: Vec<(i64, i64)> = Vec::with_capacity(pts.len());
    for &pt in &pts {
        while hull.len() >= 2 {
            let (o, a) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (a.0 - o.0) * (pt.1 - o.1) - (a.1 - o.1) * (pt.0 - o.0);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    let segments = hull
        .windows(2)
        .map(|w| Segment {
            slope: BigRational::new((w[1].1 - w[0].1).into(), (w[1].0 - w[0].0).into()),
            length: (w[1].0 - w[0].0) as usize,
        })
        .collect();
    Ok(NewtonPolygon { p, segments })
}

/// Multiset of p-adic valuations of the roots of an orbit polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValuationSpectrum {
    /// Valuations of the nonzero roots, in nondecreasing order.
    pub finite: Vec<BigRational>,
    /// Number of roots equal to zero (valuation `+∞`).
    pub at_infinity: usize,
}

impl ValuationSpectrum {
    pub fn len(&self) -> usize {
        self.finite.len() + self.at_infinity
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn sum_finite(&self) -> BigRational {
        self.finite.iter().fold(BigRational::zero(), |s, v| s + v)
    }
}

pub fn valuation_spectrum(g: &OrbitPolynomial, p: u64) -> ValuationSpectrum {
    let f = g.poly();
    let k = f.order_at_zero();
    let stripped = Poly::new(f.coeffs()[k..].to_vec());
    let mut finite = newton_polygon(&stripped, p)
        .expect("orbit polynomials are nonzero")
        .root_valuations();
    finite.sort();
    ValuationSpectrum { finite, at_infinity: k }
}
