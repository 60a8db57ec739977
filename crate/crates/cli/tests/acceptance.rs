//! One pass/fail line per acceptance criterion. Exits nonzero if any fails.

use std::process::Command;
use std::time::{Duration, Instant};

use exact::{parse_rational_function, parse_scalar, Scalar, SymbolTable};
use fewdist_core::casecheck::lemma::{verify_important_lemma, LemmaFamily};
use fewdist_core::casecheck::{builtin_catalog, BaseConfig};
use fewdist_core::census::{count_distinct, growth_probe, CensusMode};
use fewdist_core::classifier::{classify, verify_ellipse_in_cylinder, DEFAULT_TOL};
use fewdist_core::constructions::{build_point_sets, FewDistanceConfig, FewKind, ALL_KINDS};
use fewdist_core::curves::{CurveParams, CurveSpec, FrameSpec, NumericCurve, RigidMotion};
use fewdist_core::derivtest::{crosscheck_random, distance_function, rho_numerator, Family, VANISHING};
use fewdist_core::real::{bits_for_digits, Real};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

const CASECHECK_BUDGET: Duration = Duration::from_secs(600);
const CONSTRUCTION_BUDGET: Duration = Duration::from_secs(10);
const GROWTH_SEED: u64 = 17;
const GROWTH_GOLDEN: [usize; 3] = [256, 1024, 4096];
const GROWTH_RATIO: f64 = 2.5;
const GROWTH_FLOOR: usize = 1270;
const CROSSCHECK_POINTS: usize = 20;
const CROSSCHECK_SEED: u64 = 2024;
const CROSSCHECK_TOL: f64 = 1e-6;
const CLASSIFIER_SEED: u64 = 99;
const INSTANCES_PER_KIND: usize = 100;
const MANY_PAIRS: usize = 100;

type Verdict = Result<String, String>;

fn bits() -> usize {
    bits_for_digits(60)
}

fn casecheck_suite(suite: &str) -> Result<(u64, u64), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_fewdist"))
        .args(["casecheck", "--suite", suite])
        .output()
        .map_err(|e| e.to_string())?;
    let v: Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    if out.status.code() != Some(0) {
        return Err(format!("suite {suite} exit {:?}, failed {}", out.status.code(), v["failed"]));
    }
    for (id, lambdas) in v["lambdas"].as_object().ok_or("no lambdas")? {
        if lambdas.as_array().is_some_and(|l| l.iter().any(|x| x == "0")) {
            return Err(format!("{id}: zero scalar"));
        }
    }
    Ok((v["passed"].as_u64().unwrap_or(0), v["total"].as_u64().unwrap_or(0)))
}

fn anchors() -> Result<(), String> {
    let catalog = builtin_catalog();
    let table = SymbolTable::curve(BaseConfig::EllipseGeneral.params()).map_err(|e| e.to_string())?;
    let find = |id: &str| catalog.iter().find(|c| c.id == id).ok_or(format!("no case {id}"));
    for (id, text) in [("A1", "-192*c^2*(-2+c^2)*x2*(q*x1-p*y1)*y2"), ("A10", "32*(-1+c)*(1+c)*x2")] {
        let want = parse_rational_function(&table, text).map_err(|e| e.to_string())?;
        let hit = find(id)?
            .checks
            .iter()
            .any(|c| parse_rational_function(&table, &c.expected).is_ok_and(|e| (&e - &want).is_zero()));
        if !hit {
            return Err(format!("{id} lacks {text}"));
        }
    }
    if find("B3")?.conclusion.relation.as_deref() != Some("z2^2 = c^2*x1^2/(c^2-1)") {
        return Err("B3 relation".into());
    }
    if !find("C1")?.checks[0].expected.starts_with("4*(1+c^2)*(c*y2-x2)") {
        return Err("C1 expression".into());
    }
    Ok(())
}

fn criterion_1() -> Verdict {
    let t = Instant::now();
    let (pa, ta) = casecheck_suite("A")?;
    let (pc, tc) = casecheck_suite("C")?;
    anchors()?;
    let elapsed = t.elapsed();
    let detail = format!("suite A {pa}/{ta}, suite C {pc}/{tc}, anchors found, {:.1} s", elapsed.as_secs_f64());
    if pa == ta && pc == tc && ta == 31 && tc == 5 && elapsed <= CASECHECK_BUDGET {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn criterion_2() -> Verdict {
    let mut bad = Vec::new();
    for f in VANISHING {
        let zero = f
            .curves()
            .and_then(|(c1, c2)| distance_function(&c1, &c2))
            .and_then(|d| rho_numerator(&d))
            .map(|r| r.is_zero());
        if !matches!(zero, Ok(true)) {
            bad.push(f.name());
        }
    }
    if bad.is_empty() {
        Ok(format!("{} families reduce to the zero polynomial", VANISHING.len()))
    } else {
        Err(format!("nonzero or failed: {bad:?}"))
    }
}

fn criterion_3() -> Verdict {
    let mut lines = Vec::new();
    let mut ok = true;
    for kind in ALL_KINDS {
        let t = Instant::now();
        let r = build_point_sets(&FewDistanceConfig::new(kind), 50, 50)
            .and_then(|b| Ok((count_distinct(&b.p1, &b.p2, CensusMode::default())?, b.crosses_turning_point)));
        let elapsed = t.elapsed();
        match r {
            Ok((c, crosses)) => {
                let pass = c.distinct_count == 99 && !crosses && elapsed <= CONSTRUCTION_BUDGET;
                ok &= pass;
                lines.push(format!("{}={}", kind.name(), c.distinct_count));
            }
            Err(e) => {
                ok = false;
                lines.push(format!("{}: {e}", kind.name()));
            }
        }
    }
    let detail = lines.join(", ");
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn generic_ellipses(seed: u64) -> (NumericCurve, NumericCurve) {
    let b = bits();
    let r = |s: &str| Real::parse(s, b).unwrap();
    let e1 = NumericCurve::standard(CurveParams::Ellipse { a: r("2"), b: r("1") }, b).unwrap();
    let e2 = NumericCurve::standard(CurveParams::Ellipse { a: r("1.7"), b: r("0.9") }, b).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (e1, e2.apply_motion(&RigidMotion::random(&mut rng, 1.5, b)))
}

fn criterion_4() -> Verdict {
    let (c1, c2) = generic_ellipses(GROWTH_SEED);
    let sizes = [(16, 16), (32, 32), (64, 64)];
    let counts: Vec<usize> = growth_probe(&c1, &c2, &sizes, GROWTH_SEED, CensusMode::default())
        .map_err(|e| e.to_string())?
        .iter()
        .map(|r| r.distinct_count)
        .collect();
    let ratios: Vec<f64> = counts.windows(2).map(|w| w[1] as f64 / w[0] as f64).collect();
    let detail = format!("counts {counts:?}, ratios {ratios:?}");
    if counts == GROWTH_GOLDEN && ratios.iter().all(|&r| r >= GROWTH_RATIO) && counts[2] >= GROWTH_FLOOR {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn criterion_5() -> Verdict {
    let (c1, c2) = Family::GenericEllipses.curves().map_err(|e| e.to_string())?;
    let d = distance_function(&c1, &c2).map_err(|e| e.to_string())?;
    let r = crosscheck_random(&d, CROSSCHECK_POINTS, CROSSCHECK_SEED).map_err(|e| e.to_string())?;
    let worst = r.iter().cloned().fold(0.0, f64::max);
    let detail = format!("{} points, max relative residual {worst:.2e}", r.len());
    if r.len() == CROSSCHECK_POINTS && worst <= CROSSCHECK_TOL {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn criterion_6() -> Verdict {
    let mut bad = Vec::new();
    for f in [LemmaFamily::I, LemmaFamily::II] {
        if !verify_important_lemma(f).is_ok_and(|r| r.is_zero()) {
            bad.push(format!("{f:?}"));
        }
    }
    match verify_ellipse_in_cylinder() {
        Ok(rs) => bad.extend(rs.into_iter().filter(|(_, r)| !r.is_zero()).map(|(n, _)| n.to_string())),
        Err(e) => bad.push(e.to_string()),
    }
    if bad.is_empty() {
        Ok("families (i), (ii) and the cylinder identity are exactly zero".into())
    } else {
        Err(format!("nonzero: {bad:?}"))
    }
}

/// Random fraction `p/q` with `q ≤ 8` in `[lo, hi]`.
fn frac(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> String {
    loop {
        let q: i64 = rng.gen_range(1..=8);
        let (a, b) = ((lo * q as f64).ceil() as i64, (hi * q as f64).floor() as i64);
        if a <= b {
            return format!("{}/{q}", rng.gen_range(a..=b));
        }
    }
}

fn signed(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> String {
    let v = frac(rng, lo, hi);
    if rng.gen_bool(0.5) {
        format!("-{v}")
    } else {
        v
    }
}

fn random_config(kind: FewKind, rng: &mut ChaCha8Rng) -> FewDistanceConfig {
    loop {
        let mut v: Vec<(&str, String)> = match kind {
            FewKind::ParallelLines => vec![("gap", frac(rng, 0.25, 5.0))],
            FewKind::OrthogonalLines => vec![],
            FewKind::LineOrthogonalPlaneCurve => {
                vec![("a", frac(rng, 0.5, 4.0)), ("b", frac(rng, 0.5, 4.0)), ("h", frac(rng, -3.0, 3.0))]
            }
            FewKind::LineCylinderCurve => vec![("mu", signed(rng, 0.25, 4.0)), ("D", frac(rng, 0.25, 5.0))],
            FewKind::AlignedCircles => {
                vec![("r1", frac(rng, 0.25, 4.0)), ("r2", frac(rng, 0.25, 4.0)), ("gap", frac(rng, -3.0, 3.0))]
            }
            FewKind::PerpendicularCircles => {
                vec![("B", frac(rng, -3.0, 3.0)), ("D", frac(rng, 0.5, 6.0)), ("D2", frac(rng, 0.5, 6.0))]
            }
            FewKind::CpoParabolas => vec![("a", frac(rng, 0.25, 4.0)), ("q", frac(rng, -3.0, 6.0))],
            FewKind::MatchingCurves => {
                let m = if rng.gen_bool(0.5) { frac(rng, 0.1, 0.9) } else { frac(rng, 1.1, 5.0) };
                vec![("a", frac(rng, 0.25, 4.0)), ("b", signed(rng, 0.25, 4.0)), ("m", m)]
            }
            FewKind::MatchingLogCircles => vec![
                ("A", signed(rng, 0.25, 3.0)),
                ("B", frac(rng, -3.0, 3.0)),
                ("D", frac(rng, 1.0, 8.0)),
                ("D2", frac(rng, 1.0, 8.0)),
                ("arc1", if rng.gen_bool(0.5) { "positive" } else { "negative" }.into()),
                ("arc2", if rng.gen_bool(0.5) { "positive" } else { "negative" }.into()),
            ],
        };
        let mut cfg = FewDistanceConfig::new(kind);
        for (k, val) in v.drain(..) {
            cfg = cfg.with(k, &val).unwrap();
        }
        let fine = cfg.curves().is_ok_and(|(c1, c2)| c1.sample_domain().is_ok() && c2.sample_domain().is_ok());
        if fine {
            return cfg;
        }
    }
}

/// Rotation `(1/n)·M(w,x,y,z)` with `n = w²+x²+y²+z²`, exactly rational.
fn quaternion(w: i64, x: i64, y: i64, z: i64) -> [[Scalar; 3]; 3] {
    let n = w * w + x * x + y * y + z * z;
    let r = |v: i64| Scalar::new(v.into(), n.into());
    [
        [r(w * w + x * x - y * y - z * z), r(2 * (x * y - w * z)), r(2 * (x * z + w * y))],
        [r(2 * (x * y + w * z)), r(w * w - x * x + y * y - z * z), r(2 * (y * z - w * x))],
        [r(2 * (x * z - w * y)), r(2 * (y * z + w * x)), r(w * w - x * x - y * y + z * z)],
    ]
}

/// The spec with every entry written as a fraction and moved rigidly.
fn rational_moved(spec: &CurveSpec, r: &[[Scalar; 3]; 3], t: &[Scalar; 3]) -> CurveSpec {
    let q = |s: &String| parse_scalar(s).unwrap();
    let zero = [0, 1, 2].map(|_| Scalar::from_integer(0.into()));
    let map = |v: &[String; 3], shift: &[Scalar; 3]| {
        let v = [q(&v[0]), q(&v[1]), q(&v[2])];
        [0, 1, 2].map(|i| (&r[i][0] * &v[0] + &r[i][1] * &v[1] + &r[i][2] * &v[2] + &shift[i]).to_string())
    };
    let f = spec.frame.clone().unwrap();
    CurveSpec {
        kind: spec.kind,
        frame: Some(FrameSpec {
            origin: map(&f.origin, t),
            e1: map(&f.e1, &zero),
            e2: map(&f.e2, &zero),
            e3: map(&f.e3, &zero),
        }),
        params: spec
            .params
            .iter()
            .map(|(k, v)| (k.clone(), if k == "arc" { v.clone() } else { q(v).to_string() }))
            .collect(),
    }
}

/// Configurations whose curves have rational parameters and frames.
fn rational_configs() -> Vec<FewDistanceConfig> {
    let with = |k: FewKind, kv: &[(&str, &str)]| {
        kv.iter().fold(FewDistanceConfig::new(k), |c, (a, b)| c.with(a, b).unwrap())
    };
    ALL_KINDS
        .into_iter()
        .map(|k| match k {
            FewKind::LineCylinderCurve => with(k, &[("mu", "3/4"), ("D", "4")]),
            FewKind::MatchingCurves => with(k, &[("a", "1"), ("b", "1"), ("m", "25/16")]),
            _ => FewDistanceConfig::new(k),
        })
        .collect()
}

fn criterion_7() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(CLASSIFIER_SEED);
    let mut wrong = Vec::new();
    let mut total = 0;
    for kind in ALL_KINDS {
        for _ in 0..INSTANCES_PER_KIND {
            let cfg = random_config(kind, &mut rng);
            let (c1, c2) = cfg.curves().unwrap();
            let m = RigidMotion::random(&mut rng, 5.0, bits());
            let (s1, s2) = (c1.apply_motion(&m).to_spec(60), c2.apply_motion(&m).to_spec(60));
            total += 1;
            match classify(&s1, &s2, DEFAULT_TOL) {
                Ok(c) if c.kind() == Some(kind) => {}
                other => wrong.push(format!("{:?} -> {:?}", cfg.params, other.map(|c| c.kind()))),
            }
        }
    }
    let mut many_wrong = Vec::new();
    for i in 0..MANY_PAIRS {
        let kind = ALL_KINDS[i % ALL_KINDS.len()];
        let cfg = random_config(kind, &mut rng);
        let (c1, c2) = cfg.curves().unwrap();
        let m = RigidMotion::random(&mut rng, 5.0, bits());
        let nudge = loop {
            let n = RigidMotion::random(&mut rng, 0.05, bits());
            let angle = (1.0 - (n.rotation[0][0].to_f64() + n.rotation[1][1].to_f64() + n.rotation[2][2].to_f64() - 1.0) / 2.0).abs();
            if angle > 1e-6 && angle < 0.5 {
                break n;
            }
        };
        let (s1, s2) = (c1.apply_motion(&m).to_spec(60), c2.apply_motion(&m).apply_motion(&nudge).to_spec(60));
        if !matches!(classify(&s1, &s2, DEFAULT_TOL), Ok(c) if c.kind().is_none()) {
            many_wrong.push(format!("{kind:?} {:?}", cfg.params));
        }
    }
    let r = quaternion(1, 2, 3, 4);
    let t = [parse_scalar("1/3").unwrap(), parse_scalar("-2").unwrap(), parse_scalar("5/7").unwrap()];
    let mut exact_wrong = Vec::new();
    let configs = rational_configs();
    for cfg in &configs {
        let (c1, c2) = cfg.curves().unwrap();
        let (s1, s2) = (rational_moved(&c1.to_spec(60), &r, &t), rational_moved(&c2.to_spec(60), &r, &t));
        match classify(&s1, &s2, 0.0) {
            Ok(c) if c.exact && c.kind() == Some(cfg.kind) => {}
            other => exact_wrong.push(format!("{:?} -> {:?}", cfg.kind, other.map(|c| (c.exact, c.kind())))),
        }
    }
    let detail = format!(
        "{}/{total} moved instances, {}/{MANY_PAIRS} perturbed pairs many, {}/{} exact at zero tolerance",
        total - wrong.len(),
        MANY_PAIRS - many_wrong.len(),
        configs.len() - exact_wrong.len(),
        configs.len()
    );
    if wrong.is_empty() && many_wrong.is_empty() && exact_wrong.is_empty() {
        Ok(detail)
    } else {
        let first: Vec<&String> = wrong.iter().chain(&many_wrong).chain(&exact_wrong).take(5).collect();
        Err(format!("{detail}; first misses {first:?}"))
    }
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 7] = [
        ("case analysis reproduction", criterion_1),
        ("vanishing families", criterion_2),
        ("construction bound", criterion_3),
        ("superlinear growth probe", criterion_4),
        ("finite-difference cross-check", criterion_5),
        ("symbolic identities", criterion_6),
        ("classifier round trip", criterion_7),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let verdict = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        match verdict {
            Ok(d) => println!("criterion {} {name}: PASS ({d}) [{secs:.1} s]", i + 1),
            Err(d) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({d}) [{secs:.1} s]", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
