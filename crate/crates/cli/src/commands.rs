use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use lattes_core::arith::{OrbitPolynomial, Poly, ProjPointQ};
use lattes_core::berkovich::{skeleton_val, tent, verify_tate_point, DEFAULT_TRUNCATION};
use lattes_core::elliptic::{fixtures, lattes_map, parse_rational, LattesMap};
use lattes_core::heights::{HeightConfig, HeightContext, Preperiodicity, DEFAULT_MAX_ITERATIONS};
use lattes_core::padic::{q_from_j, tate_model, TateModel};
use lattes_core::towers::{orbit_residual, preimage_tower, valuation_histogram};
use lattes_core::{EllipticCurve, Error, Padic};

use crate::args::*;
use crate::report::*;

/// Failure classes, mapped to exit codes 2, 3 and 4.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Precondition(String),
    Resource(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Precondition(_) => 3,
            Failure::Resource(_) => 4,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Precondition(m) | Failure::Resource(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(m) => Failure::Usage(m),
            Error::Precondition(m) => Failure::Precondition(m),
            Error::Precision(m) | Error::Resource(m) => Failure::Resource(m),
        }
    }
}

/// Rendered output plus an optional failure that still carries a report.
pub struct Outcome {
    pub text: String,
    pub failure: Option<Failure>,
}

type Res<T> = std::result::Result<T, Failure>;

fn rat_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn coeff_strings(p: &Poly<BigInt>) -> Vec<String> {
    p.coeffs().iter().map(|c| c.to_string()).collect()
}

pub fn parse_curve(s: &str) -> Res<EllipticCurve> {
    if let Some(f) = fixtures::fixture(s.trim()) {
        return Ok(f.curve());
    }
    EllipticCurve::parse(s).map_err(|e| match e {
        Error::Precondition(m) => Failure::Precondition(m),
        other => Failure::Usage(other.to_string()),
    })
}

fn parse_point(s: &str) -> Res<ProjPointQ> {
    s.parse().map_err(|e: Error| Failure::Usage(e.to_string()))
}

fn parse_rat(s: &str) -> Res<BigRational> {
    parse_rational(s).map_err(|e| Failure::Usage(e.to_string()))
}

fn build_map(a: &MapArgs) -> Res<LattesMap> {
    if a.m.unsigned_abs() < 2 {
        return Err(Failure::Usage(format!("--m must satisfy |m| ≥ 2, got {}", a.m)));
    }
    Ok(lattes_map(&parse_curve(&a.curve)?, a.m)?)
}

fn pool(jobs: usize) -> Res<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Failure::Resource(e.to_string()))
}

fn render<T: Serialize, R: Serialize>(
    output: Output,
    command: &str,
    config: RunConfig,
    result: T,
    rows: impl IntoIterator<Item = R>,
) -> Res<String> {
    match output {
        Output::Json => {
            let report = Report { command: command.to_string(), config, result };
            serde_json::to_string_pretty(&report).map_err(|e| Failure::Resource(e.to_string()))
        }
        Output::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in rows {
                w.serialize(r).map_err(|e| Failure::Resource(e.to_string()))?;
            }
            let bytes = w.into_inner().map_err(|e| Failure::Resource(e.to_string()))?;
            String::from_utf8(bytes).map_err(|e| Failure::Resource(e.to_string()))
        }
    }
}

fn base_config(cli: &Cli) -> RunConfig {
    RunConfig { output: Some(cli.output), jobs: cli.jobs, ..RunConfig::default() }
}

pub fn run(cli: &Cli) -> Res<Outcome> {
    let config = base_config(cli);
    let done = |text: String| Ok(Outcome { text, failure: None });
    match &cli.command {
        Command::Lattes(a) => done(cmd_lattes(cli.output, config, a)?),
        Command::Height(a) => cmd_height(cli, config, a),
        Command::Preperiodic(a) => done(cmd_preperiodic(cli, config, a)?),
        Command::Skeleton(a) => done(cmd_skeleton(cli.output, config, a)?),
        Command::TateVerify(a) => done(cmd_tate_verify(cli.output, config, a)?),
        Command::QFromJ(a) => done(cmd_q_from_j(cli.output, config, a)?),
        Command::Tower(a) => done(cmd_tower(cli.output, config, a)?),
        Command::Spectrum(a) => done(cmd_spectrum(cli.output, config, a)?),
    }
}

fn cmd_lattes(output: Output, mut config: RunConfig, a: &MapArgs) -> Res<String> {
    let l = build_map(a)?;
    config.curve = Some(a.curve.clone());
    config.m = Some(a.m);
    let map = &l.map;
    let report = LattesReport {
        curve: l.curve.coefficients().iter().map(rat_string).collect(),
        m: l.m,
        degree: map.degree(),
        numerator: coeff_strings(map.numerator()),
        denominator: coeff_strings(map.denominator()),
        numerator_text: map.numerator().to_string(),
        denominator_text: map.denominator().to_string(),
        shift: rat_string(&l.shift),
        short_a: rat_string(&l.short_a),
        short_b: rat_string(&l.short_b),
        homogeneous_resultant: map.homogeneous_resultant().to_string(),
    };
    let rows: Vec<CoefficientRow> = [("numerator", &report.numerator), ("denominator", &report.denominator)]
        .into_iter()
        .flat_map(|(part, cs)| {
            cs.iter().enumerate().map(move |(i, c)| CoefficientRow {
                part: part.to_string(),
                power: i,
                coefficient: c.clone(),
            })
        })
        .collect();
    render(output, "lattes", config, report, rows)
}

fn preperiodic_flag(p: &Preperiodicity) -> Option<bool> {
    match p {
        Preperiodicity::Preperiodic { .. } => Some(true),
        Preperiodicity::Wandering(Some(_)) => Some(false),
        Preperiodicity::Wandering(None) => None,
    }
}

fn cmd_height(cli: &Cli, mut config: RunConfig, a: &HeightArgs) -> Res<Outcome> {
    if !(a.tol > 0.0) {
        return Err(Failure::Usage("--tol must be positive".into()));
    }
    let l = build_map(&a.points.map)?;
    let ctx = HeightContext::for_lattes(&l)?;
    let cfg = HeightConfig { tol: a.tol, bit_budget: a.bit_budget, ..HeightConfig::default() };
    config.curve = Some(a.points.map.curve.clone());
    config.m = Some(a.points.map.m);
    config.tol = Some(a.tol);
    config.bit_budget = Some(a.bit_budget);
    let points = a.points.point.iter().map(|s| parse_point(s)).collect::<Res<Vec<_>>>()?;
    let rows: Vec<HeightRow> = pool(cli.jobs)?.install(|| {
        points
            .par_iter()
            .map(|pt| {
                let est = ctx.estimate(pt, &cfg);
                HeightRow {
                    point: pt.to_string(),
                    value: est.value,
                    error_bound: est.error_bound,
                    iterations: est.iterations_used,
                    converged: est.converged,
                    naive_height: lattes_core::arith::naive_height(pt),
                    comparison_constant: ctx.constant(),
                    preperiodic: preperiodic_flag(&ctx.is_preperiodic(pt, DEFAULT_MAX_ITERATIONS)),
                }
            })
            .collect()
    });
    let failure = rows.iter().find(|r| !r.converged).map(|r| {
        Failure::Resource(format!(
            "height of {} reached only ±{:e} within the bit budget (tol {:e})",
            r.point, r.error_bound, a.tol
        ))
    });
    let text = render(cli.output, "height", config, rows.clone(), rows)?;
    Ok(Outcome { text, failure })
}

fn cmd_preperiodic(cli: &Cli, mut config: RunConfig, a: &PointArgs) -> Res<String> {
    let l = build_map(&a.map)?;
    let ctx = HeightContext::for_lattes(&l)?;
    config.curve = Some(a.map.curve.clone());
    config.m = Some(a.map.m);
    let points = a.point.iter().map(|s| parse_point(s)).collect::<Res<Vec<_>>>()?;
    let rows: Vec<PreperiodicRow> = pool(cli.jobs)?.install(|| {
        points
            .par_iter()
            .map(|pt| {
                let mut row = PreperiodicRow {
                    point: pt.to_string(),
                    status: String::new(),
                    tail: None,
                    cycle: None,
                    certificate_iterate: None,
                    certificate_height: None,
                    threshold: None,
                };
                match ctx.is_preperiodic(pt, DEFAULT_MAX_ITERATIONS) {
                    Preperiodicity::Preperiodic { tail, cycle } => {
                        row.status = "preperiodic".into();
                        row.tail = Some(tail);
                        row.cycle = Some(cycle);
                    }
                    Preperiodicity::Wandering(Some(c)) => {
                        row.status = "wandering".into();
                        row.certificate_iterate = Some(c.iterate);
                        row.certificate_height = Some(c.naive_height);
                        row.threshold = Some(c.threshold);
                    }
                    Preperiodicity::Wandering(None) => row.status = "inconclusive".into(),
                }
                row
            })
            .collect()
    });
    render(cli.output, "preperiodic", config, rows.clone(), rows)
}

fn tate_for_curve(curve: &str, p: u64, n: i64) -> Res<(TateModel, QReport)> {
    if n < 2 {
        return Err(Failure::Usage("--precision must be at least 2".into()));
    }
    let e = parse_curve(curve)?;
    let j = e.j_invariant()?;
    q_report(&j, p, n)
}

fn q_report(j: &BigRational, p: u64, n: i64) -> Res<(TateModel, QReport)> {
    let q = q_from_j(j, p, n)?;
    let model = tate_model(&q, n)?;
    let report = QReport {
        p,
        j: rat_string(j),
        valuation: q.valuation().expect("nonzero q"),
        q: rat_string(&q.to_rational()),
        precision: q.absolute_precision().unwrap_or(n),
    };
    Ok((model, report))
}

fn cmd_skeleton(output: Output, mut config: RunConfig, a: &SkeletonArgs) -> Res<String> {
    let (model, q) = tate_for_curve(&a.curve, a.p, a.precision)?;
    config.curve = Some(a.curve.clone());
    config.p = Some(a.p);
    config.precision = Some(a.precision);
    config.truncation = a.truncation;
    let k = a.truncation.unwrap_or(DEFAULT_TRUNCATION);
    let vq = model.q_valuation();
    let mut rows = Vec::with_capacity(a.t.len());
    for s in &a.t {
        let t = parse_rat(s)?;
        let val = skeleton_val(&model, &t, k)?;
        let expected = tent(vq, &t);
        rows.push(SkeletonRow {
            t: rat_string(&t),
            val: rat_string(&val),
            tent: rat_string(&expected),
            on_tent: val == expected,
            in_value_group: val.is_integer(),
        });
    }
    render(output, "skeleton", config, SkeletonReport { q, rows: rows.clone() }, rows)
}

fn cmd_tate_verify(output: Output, mut config: RunConfig, a: &TateVerifyArgs) -> Res<String> {
    let (model, q) = tate_for_curve(&a.curve, a.p, a.precision)?;
    config.curve = Some(a.curve.clone());
    config.p = Some(a.p);
    config.precision = Some(a.precision);
    let mut rows = Vec::with_capacity(a.zeta.len());
    for s in &a.zeta {
        let z = parse_rat(s)?;
        // ζ is exact input; extra digits absorb the cancellation in 1 − qⁿζ
        let v = lattes_core::arith::vp(&z, a.p).unwrap_or(0).abs();
        let zeta = Padic::from_rational(a.p, &z, 2 * a.precision + 2 * v);
        let check = verify_tate_point(&model, &zeta, a.precision)?;
        rows.push(TateRow {
            zeta: rat_string(&z),
            x: check.x.to_string(),
            y: check.y.to_string(),
            residual_valuation: check.residual_valuation,
        });
    }
    render(output, "tate-verify", config, TateReport { q, rows: rows.clone() }, rows)
}

fn cmd_q_from_j(output: Output, mut config: RunConfig, a: &QFromJArgs) -> Res<String> {
    let j = parse_rat(&a.j)?;
    config.p = Some(a.p);
    config.precision = Some(a.precision);
    let (_, q) = q_report(&j, a.p, a.precision)?;
    render(output, "q-from-j", config, q.clone(), [q])
}

#[derive(Serialize)]
struct LevelCsv<'a> {
    level: usize,
    degree: usize,
    canonical_height_ratio: &'a str,
    canonical_height: f64,
    canonical_height_error_bound: f64,
    naive_orbit_height: f64,
    unramified_at_p: &'a str,
    spectrum: String,
    residual: Option<f64>,
    orbit: String,
}

fn cmd_tower(output: Output, mut config: RunConfig, a: &TowerArgs) -> Res<String> {
    let l = build_map(&a.map)?;
    let q0 = parse_point(&a.q0)?;
    config.curve = Some(a.map.curve.clone());
    config.m = Some(a.map.m);
    config.p = Some(a.p);
    config.depth = Some(a.depth);
    config.tol = Some(a.tol);
    let cfg = HeightConfig { tol: a.tol, ..HeightConfig::default() };
    let tower = preimage_tower(&l, a.p, &q0, a.depth, &cfg)?;
    let levels: Vec<LevelRow> = tower
        .levels
        .par_iter()
        .map(|lvl| {
            let ratio = lvl.canonical_height_ratio.to_f64().unwrap_or(0.0);
            LevelRow {
                level: lvl.level,
                degree: lvl.orbit.degree(),
                orbit: coeff_strings(lvl.orbit.poly()),
                canonical_height_ratio: rat_string(&lvl.canonical_height_ratio),
                canonical_height: lvl.canonical_height,
                canonical_height_error_bound: ratio * tower.q0_height.error_bound,
                naive_orbit_height: lvl.naive_orbit_height,
                unramified_at_p: lvl.unramified_at_p.to_string(),
                spectrum: lvl.spectrum.finite.iter().map(rat_string).collect(),
                spectrum_at_infinity: lvl.spectrum.at_infinity,
                residual: orbit_residual(&l.map, &lvl.orbit, lvl.level, &q0).ok(),
            }
        })
        .collect();
    let report = TowerReport {
        p: tower.p,
        m: tower.m,
        q0: q0.to_string(),
        q0_height: tower.q0_height.value,
        q0_height_error_bound: tower.q0_height.error_bound,
        comparison_constant: tower.comparison_constant,
        levels,
    };
    let rows: Vec<LevelCsv> = report
        .levels
        .iter()
        .map(|r| LevelCsv {
            level: r.level,
            degree: r.degree,
            canonical_height_ratio: &r.canonical_height_ratio,
            canonical_height: r.canonical_height,
            canonical_height_error_bound: r.canonical_height_error_bound,
            naive_orbit_height: r.naive_orbit_height,
            unramified_at_p: &r.unramified_at_p,
            spectrum: r.spectrum.join(";"),
            residual: r.residual,
            orbit: r.orbit.join(";"),
        })
        .collect();
    render(output, "tower", config.clone(), report.clone(), rows)
}

fn cmd_spectrum(output: Output, mut config: RunConfig, a: &SpectrumArgs) -> Res<String> {
    let coeffs = a
        .poly
        .iter()
        .map(|s| s.trim().parse::<BigInt>().map_err(|e| Failure::Usage(format!("{s:?}: {e}"))))
        .collect::<Res<Vec<_>>>()?;
    let poly = Poly::new(coeffs);
    let g = OrbitPolynomial::new(poly)?;
    config.p = Some(a.p);
    config.e = Some(a.e);
    let h = valuation_histogram(&g, a.p, a.e)?;
    let entries: Vec<SpectrumEntry> = h
        .entries
        .iter()
        .map(|(v, k, ok)| SpectrumEntry { valuation: rat_string(v), multiplicity: *k, member: *ok })
        .collect();
    let report = SpectrumReport {
        p: a.p,
        e: a.e,
        polynomial: coeff_strings(g.poly()),
        entries: entries.clone(),
        at_infinity: h.at_infinity,
        violations: h.violations.iter().map(rat_string).collect(),
        all_member: h.all_member(),
    };
    render(output, "spectrum", config, report, entries)
}
