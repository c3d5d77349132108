//! Named curves with known generators, used by the CLI and the test suites.

use num_rational::BigRational;

use crate::elliptic::curve::Point;
use crate::elliptic::lattes::{short_twist, LattesMap};
use crate::error::Result;
use crate::EllipticCurve;

/// A generator of a rational point group: on the curve itself (`twist = 1`)
/// or on the quadratic twist of its short model by `twist`.
#[derive(Clone, Debug)]
pub struct Generator {
    pub twist: i64,
    pub x: (i64, i64),
    pub y: (i64, i64),
}

impl Generator {
    pub fn point(&self) -> Point<BigRational> {
        let q = |(n, d): (i64, i64)| BigRational::new(n.into(), d.into());
        Point::affine(q(self.x), q(self.y))
    }
}

#[derive(Clone, Debug)]
pub struct CurveFixture {
    pub name: &'static str,
    pub coefficients: [i64; 5],
    pub note: &'static str,
    pub generators: Vec<Generator>,
}

impl CurveFixture {
    pub fn curve(&self) -> EllipticCurve {
        EllipticCurve::from_integers(self.coefficients).expect("fixture curves are nonsingular")
    }
}

fn g(twist: i64, x: (i64, i64), y: (i64, i64)) -> Generator {
    Generator { twist, x, y }
}

/// All shipped fixtures.
pub fn fixtures() -> Vec<CurveFixture> {
    vec![
        CurveFixture {
            name: "tate6",
            coefficients: [1, 0, 0, 0, 6],
            note: "y² + xy = x³ + 6: Tate curve at p = 3 (j = −1/15558); E(ℚ) is trivial",
            generators: vec![
                g(-1, (23, 12), (1, 1)),
                g(6, (-1, 1), (36, 1)),
                g(-3, (35, 4), (45, 2)),
            ],
        },
        CurveFixture {
            name: "x3p1",
            coefficients: [0, 0, 0, 0, 1],
            note: "y² = x³ + 1: E(ℚ) ≅ ℤ/6, good reduction at p ≥ 5",
            generators: vec![g(1, (2, 1), (3, 1)), g(2, (1, 1), (3, 1)), g(7, (21, 1), (98, 1))],
        },
        CurveFixture {
            name: "x3px",
            coefficients: [0, 0, 0, 1, 0],
            note: "y² = x³ + x: E(ℚ) ≅ ℤ/2, good reduction at p ≥ 3",
            generators: vec![g(1, (0, 1), (0, 1)), g(3, (4, 1), (10, 1)), g(7, (16, 9), (260, 27))],
        },
        CurveFixture {
            name: "x3m2",
            coefficients: [0, 0, 0, 0, -2],
            note: "y² = x³ − 2: rank 1 generated by (3, 5), Δ = −1728, good reduction at p ≥ 5",
            generators: vec![g(1, (3, 1), (5, 1))],
        },
        CurveFixture {
            name: "x3p17",
            coefficients: [0, 0, 0, 0, 17],
            note: "y² = x³ + 17: rank 2 generated by (−2, 3) and (−1, 4)",
            generators: vec![g(1, (-2, 1), (3, 1)), g(1, (-1, 1), (4, 1))],
        },
    ]
}

pub fn fixture(name: &str) -> Option<CurveFixture> {
    fixtures().into_iter().find(|f| f.name == name)
}

/// Point `[k]G` for `k = 1..=count`, on the curve or twist the generator lives on.
pub fn multiples(
    l: &LattesMap,
    gen: &Generator,
    count: i64,
) -> Result<(EllipticCurve, Vec<Point<BigRational>>)> {
    let host = if gen.twist == 1 { l.curve.clone() } else { short_twist(l, gen.twist)? };
    let g = gen.point();
    let pts = (1..=count).map(|k| host.multiply(&g, k)).collect();
    Ok((host, pts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::lattes::lattes_map;

    #[test]
    fn generators_lie_on_their_hosts() {
        for f in fixtures() {
            let l = lattes_map(&f.curve(), 2).unwrap();
            for gen in &f.generators {
                let (host, pts) = multiples(&l, gen, 1).unwrap();
                assert!(host.contains(&pts[0]), "{} generator {:?}", f.name, gen);
            }
        }
        assert!(fixture("tate6").is_some());
        assert!(fixture("nope").is_none());
    }
}
