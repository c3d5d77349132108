use lattes_core::arith::{
    mahler_height, naive_height, resultant, valuation_spectrum, vp_int, OrbitPolynomial, Poly,
    ProjPointQ,
};
use lattes_core::elliptic::fixtures::fixture;
use lattes_core::elliptic::{lattes_map, x_coordinate, LattesMap, Point};
use lattes_core::heights::{HeightConfig, HeightContext};
use lattes_core::padic::{j_series, q_from_j};
use lattes_core::{EllipticCurve, Integer, Padic, Rational};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn poly_strategy(max_deg: usize) -> impl Strategy<Value = Vec<i64>> {
    (0..=max_deg).prop_flat_map(|d| {
        (proptest::collection::vec(-30i64..=30, d), (1i64..=30, any::<bool>())).prop_map(
            |(mut cs, (lead, neg))| {
                cs.push(if neg { -lead } else { lead });
                cs
            },
        )
    })
}

fn point_on(l: &LattesMap, gens: &[Point<Rational>], k: &[i64]) -> Point<Rational> {
    gens.iter()
        .zip(k)
        .fold(Point::Identity, |acc, (g, &c)| l.curve.add(&acc, &l.curve.multiply(g, c)))
}

fn x3p17(m: i64) -> (LattesMap, Vec<Point<Rational>>) {
    let f = fixture("x3p17").unwrap();
    let l = lattes_map(&f.curve(), m).unwrap();
    let gens = f.generators.iter().map(|g| g.point()).collect();
    (l, gens)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn resultant_symmetry(f in poly_strategy(4), g in poly_strategy(4)) {
        let (pf, pg) = (Poly::from_i64s(&f), Poly::from_i64s(&g));
        let sign = if (pf.deg() * pg.deg()) % 2 == 1 { -Integer::one() } else { Integer::one() };
        prop_assert_eq!(resultant(&pf, &pg).unwrap(), sign * resultant(&pg, &pf).unwrap());
    }

    #[test]
    fn resultant_multiplicative(f in poly_strategy(4), g in poly_strategy(4), h in poly_strategy(4)) {
        let (pf, pg, ph) = (Poly::from_i64s(&f), Poly::from_i64s(&g), Poly::from_i64s(&h));
        let lhs = resultant(&pf, &(&pg * &ph)).unwrap();
        prop_assert_eq!(lhs, resultant(&pf, &pg).unwrap() * resultant(&pf, &ph).unwrap());
    }

    #[test]
    fn spectrum_sums_to_valuation_gap(
        f in poly_strategy(6),
        p in prop::sample::select(vec![2u64, 3, 5, 7]),
    ) {
        prop_assume!(f[0] != 0 && f.len() > 1);
        let poly = Poly::from_i64s(&f);
        let sq = poly.squarefree_part();
        let g = OrbitPolynomial::new(sq.primitive_part()).unwrap();
        let s = valuation_spectrum(&g, p);
        prop_assert_eq!(s.at_infinity, 0);
        prop_assert_eq!(s.len(), g.degree());
        let c0 = vp_int(&g.poly().coeff(0), p).unwrap();
        let lead = vp_int(&g.poly().lead(), p).unwrap();
        prop_assert_eq!(s.sum_finite(), Rational::from_integer((c0 - lead).into()));
    }

    #[test]
    fn mahler_height_of_rational_roots(roots in proptest::collection::btree_set((-60i64..=60, 1i64..=40), 1..5)) {
        let mut f = Poly::from_i64s(&[1]);
        let mut distinct = std::collections::BTreeSet::new();
        for &(a, b) in &roots {
            distinct.insert(r(a, b));
        }
        let mut expected = 0.0;
        for x in &distinct {
            let (a, b) = (x.numer().clone(), x.denom().clone());
            f = &f * &Poly::new(vec![-a.clone(), b.clone()]);
            expected += naive_height(&ProjPointQ::from_rational(x));
        }
        expected /= distinct.len() as f64;
        let g = OrbitPolynomial::new(f).unwrap();
        prop_assert!((mahler_height(&g).unwrap() - expected).abs() < 1e-9);
    }

    #[test]
    fn padic_precision_is_never_optimistic(
        xn in -10_000i64..10_000, xd in 1i64..200,
        yn in -10_000i64..10_000, yd in 1i64..200,
        p in prop::sample::select(vec![2u64, 3, 5]),
        n in 4i64..20,
        op in 0usize..4,
    ) {
        let (x, y) = (r(xn, xd), r(yn, yd));
        prop_assume!(!y.is_zero());
        let at = |abs: i64| (Padic::from_rational(p, &x, abs), Padic::from_rational(p, &y, abs));
        let apply = |(a, b): (Padic, Padic)| match op {
            0 => a + b,
            1 => a - b,
            2 => a * b,
            _ => a / b,
        };
        let low = apply(at(n));
        let reference = apply(at(n + 60));
        let claimed = low.absolute_precision().expect("inexact inputs give inexact output");
        prop_assert!(claimed <= reference.absolute_precision().unwrap());
        prop_assert!(low.eq_mod(&reference, claimed));
    }

    #[test]
    fn valuation_is_multiplicative_and_ultrametric(
        a in 1i64..100_000, b in 1i64..100_000, neg in any::<bool>(),
        p in prop::sample::select(vec![2u64, 3, 5, 7]),
    ) {
        let b = if neg { -b } else { b };
        let (x, y) = (Padic::from_int(p, a), Padic::from_int(p, b));
        prop_assert_eq!(
            (x.clone() * y.clone()).valuation().unwrap(),
            x.valuation().unwrap() + y.valuation().unwrap()
        );
        let s = x.clone() + y.clone();
        if let Some(vs) = s.valuation() {
            let (vx, vy) = (x.valuation().unwrap(), y.valuation().unwrap());
            prop_assert!(vs >= vx.min(vy));
            if vx != vy {
                prop_assert_eq!(vs, vx.min(vy));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    #[test]
    fn q_from_j_inverts_the_j_series(
        u in 1i64..10_000,
        v in 1i64..=2,
        p in prop::sample::select(vec![3u64, 5, 7]),
    ) {
        prop_assume!(u % p as i64 != 0);
        let n = 30;
        let q_int = Integer::from(u) * num_traits::pow(Integer::from(p), v as usize);
        let q = Padic::from_integer_with_precision(p, q_int, n + 2 * v);
        let j = j_series(&q).unwrap();
        let back = q_from_j(&j.to_rational(), p, n).unwrap();
        prop_assert_eq!(back.valuation(), Some(v));
        prop_assert!(back.eq_mod(&q, n));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn iterated_diagram(k1 in -3i64..=3, k2 in -3i64..=3, m in 2i64..=3, n in 1usize..=3) {
        prop_assume!(k1 != 0 || k2 != 0);
        prop_assume!(m == 2 || n <= 2);
        let (l, gens) = x3p17(m);
        let p = point_on(&l, &gens, &[k1, k2]);
        let lhs = l.map.iterate_proj(&x_coordinate(&p), n);
        let rhs = x_coordinate(&l.curve.multiply(&p, m.pow(n as u32)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn reduction_type_survives_the_short_model(
        a in proptest::array::uniform5(-9i64..=9),
        p in prop::sample::select(vec![5u64, 7, 11, 13]),
    ) {
        let Ok(e) = EllipticCurve::from_integers(a) else { return Ok(()) };
        let (sa, sb, _) = e.short_model();
        let z = Rational::zero();
        let short = EllipticCurve::new([z.clone(), z.clone(), z, sa, sb]).unwrap();
        prop_assert_eq!(e.classify_reduction(p), short.classify_reduction(p));
    }

    #[test]
    fn m_compatibility(k1 in -2i64..=2, k2 in -2i64..=2) {
        prop_assume!(k1 != 0 || k2 != 0);
        let (l, gens) = x3p17(2);
        let ctx = HeightContext::for_lattes(&l).unwrap();
        let cfg = HeightConfig::default();
        let p = point_on(&l, &gens, &[k1, k2]);
        let h = ctx.canonical_height(&x_coordinate(&p), &cfg).unwrap().value;
        let h3 = ctx.canonical_height(&x_coordinate(&l.curve.multiply(&p, 3)), &cfg).unwrap().value;
        prop_assert!((h3 - 9.0 * h).abs() <= 2.0 * cfg.tol, "{} vs {}", h3, 9.0 * h);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn canonical_height_is_within_c_of_naive(
        a in -1_000_000i64..=1_000_000,
        b in 1i64..=1_000_000,
        which in prop::sample::select(vec!["x3p1", "x3px", "tate6", "x3m2"]),
        m in 2i64..=3,
    ) {
        let l = lattes_map(&fixture(which).unwrap().curve(), m).unwrap();
        let ctx = HeightContext::for_lattes(&l).unwrap();
        let pt = ProjPointQ::from_rational(&r(a, b));
        let est = ctx.canonical_height(&pt, &HeightConfig::default()).unwrap();
        prop_assert!(est.value >= 0.0);
        prop_assert!(est.error_bound <= 1e-6);
        prop_assert!((est.value - naive_height(&pt)).abs() <= ctx.constant(), "{} {}", est.value, naive_height(&pt));
        let orbit = ctx.is_preperiodic(&pt, 64);
        if orbit.is_preperiodic() {
            prop_assert!(est.value <= 1e-6);
        }
        if orbit.is_certified_wandering() {
            prop_assert!(est.value > 1e-6);
        }
    }
}

#[test]
fn negative_height_never_reported() {
    let l = lattes_map(&fixture("x3p1").unwrap().curve(), 2).unwrap();
    let ctx = HeightContext::for_lattes(&l).unwrap();
    for x in [r(0, 1), r(-1, 1), r(2, 1)] {
        let pt = ProjPointQ::from_rational(&x);
        let est = ctx.canonical_height(&pt, &HeightConfig::default()).unwrap();
        assert!(est.value >= 0.0 && est.value <= 1e-6, "{x}: {}", est.value);
    }
}
