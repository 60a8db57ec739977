use exact::{Scalar, SymbolTable};
use fewdist_core::constructions::{FewDistanceConfig, FewKind};
use fewdist_core::curves::numeric::dist2;
use fewdist_core::curves::{standard_first_curve, Arc, ConicKind, CurveParams, NumericCurve, RigidMotion, Vec3};
use fewdist_core::derivtest::Family;
use fewdist_core::real::{bits_for_digits, Real};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn bits() -> usize {
    bits_for_digits(60)
}

fn r(s: &str) -> Real {
    Real::parse(s, bits()).unwrap()
}

fn q(n: i64, d: i64) -> Scalar {
    Scalar::new(n.into(), d.into())
}

fn to_real(p: &[Scalar; 3]) -> Vec3 {
    [0, 1, 2].map(|i| Real::from_scalar(&p[i], bits()))
}

fn gap(a: &Vec3, b: &Vec3) -> f64 {
    dist2(a, b).sqrt().unwrap().to_f64()
}

#[test]
fn symbolic_and_numeric_standard_conics_agree() {
    let table = SymbolTable::curve(&["c"]).unwrap();
    let c = q(3, 2);
    let pi = Real::pi(bits());
    for k in [q(1, 3), q(-2, 5), q(7, 4)] {
        let point = [k.clone(), Scalar::from_integer(0.into()), c.clone()];
        for (kind, params) in [
            (ConicKind::Ellipse, CurveParams::Ellipse { a: r("1"), b: r("1.5") }),
            (ConicKind::Hyperbola, CurveParams::Hyperbola { a: r("1"), b: r("1.5") }),
            (ConicKind::Parabola, CurveParams::Parabola { a: r("1") }),
        ] {
            let sym = standard_first_curve(&table, kind, "c").unwrap().evaluate(&point).unwrap();
            let num = NumericCurve::standard(params, bits()).unwrap();
            let u = match kind {
                // angle 2·atan(k) as a fraction of a full turn
                ConicKind::Ellipse => &Real::from_scalar(&k, bits()).atan() / &pi,
                _ => Real::from_scalar(&k, bits()),
            };
            let p = num.evaluate(&u).unwrap();
            assert!(gap(&to_real(&sym), &p) < 1e-50, "{kind:?} at {k}");
        }
    }
}

fn scalar(text: &str) -> Scalar {
    exact::parse_scalar(text).unwrap()
}

/// Symbolic family curves at rational parameters lie on the numeric curves
/// of the matching construction.
#[test]
fn symbolic_family_points_lie_on_numeric_constructions() {
    let cases = [
        (Family::CpoParabolas, vec![("a", "1"), ("q", "5")], FewDistanceConfig::new(FewKind::CpoParabolas)),
        (Family::ParallelLines, vec![("g", "1"), ("h", "0")], FewDistanceConfig::new(FewKind::ParallelLines)),
        (
            Family::AlignedCircles,
            vec![("r1", "1"), ("r2", "2"), ("g", "1")],
            FewDistanceConfig::new(FewKind::AlignedCircles),
        ),
    ];
    for (family, values, cfg) in cases {
        let table = family.table().unwrap();
        let (s1, s2) = family.curves().unwrap();
        let (n1, n2) = cfg.curves().unwrap();
        let names = table.names().to_vec();
        for u in ["1/3", "-2", "5/7"] {
            let point: Vec<Scalar> = names
                .iter()
                .enumerate()
                .map(|(i, name)| {
                    if i == 0 || i == 1 {
                        scalar(u)
                    } else {
                        scalar(values.iter().find(|(k, _)| k == name).unwrap().1)
                    }
                })
                .collect();
            for (s, n) in [(&s1, &n1), (&s2, &n2)] {
                let p = to_real(&s.evaluate(&point).unwrap());
                assert!(n.implicit_residual(&p).to_f64() < 1e-50, "{family:?} at {u}");
            }
        }
    }
}

fn sample_curves() -> Vec<NumericCurve> {
    let b = bits();
    vec![
        NumericCurve::standard(CurveParams::Line, b).unwrap(),
        NumericCurve::standard(CurveParams::Circle { r: r("2") }, b).unwrap(),
        NumericCurve::standard(CurveParams::Parabola { a: r("-0.75") }, b).unwrap(),
        NumericCurve::standard(CurveParams::Ellipse { a: r("3"), b: r("1.25") }, b).unwrap(),
        NumericCurve::standard(CurveParams::Hyperbola { a: r("1"), b: r("2") }, b).unwrap(),
        NumericCurve::standard(CurveParams::LogCircle { a: r("1"), b: r("1"), d: r("4"), arc: Arc::Positive }, b).unwrap(),
        NumericCurve::standard(CurveParams::LogCircle { a: r("-1"), b: r("0"), d: r("3"), arc: Arc::Negative }, b).unwrap(),
    ]
}

fn param(c: &NumericCurve, t: f64) -> Real {
    let (lo, hi) = c.sample_domain().unwrap();
    Real::from_f64(lo + (hi - lo) * (0.05 + 0.9 * t), bits())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn evaluated_points_satisfy_the_implicit_equation(i in 0usize..7, t in 0.0f64..1.0, seed in 0u64..10_000) {
        let c = &sample_curves()[i];
        let m = RigidMotion::random(&mut ChaCha8Rng::seed_from_u64(seed), 10.0, bits());
        let moved = c.apply_motion(&m);
        let u = param(c, t);
        prop_assert!(c.implicit_residual(&c.evaluate(&u).unwrap()).to_f64() < 1e-45);
        prop_assert!(moved.implicit_residual(&moved.evaluate(&u).unwrap()).to_f64() < 1e-45);
    }

    #[test]
    fn evaluation_is_motion_equivariant(i in 0usize..7, t in 0.0f64..1.0, seed in 0u64..10_000) {
        let c = &sample_curves()[i];
        let m = RigidMotion::random(&mut ChaCha8Rng::seed_from_u64(seed), 10.0, bits());
        let u = param(c, t);
        let a = c.apply_motion(&m).evaluate(&u).unwrap();
        let b = m.apply(&c.evaluate(&u).unwrap());
        prop_assert!(gap(&a, &b) < 1e-45);
    }

    #[test]
    fn motions_preserve_distances(seed in 0u64..10_000, t1 in 0.0f64..1.0, t2 in 0.0f64..1.0) {
        let cs = sample_curves();
        let m = RigidMotion::random(&mut ChaCha8Rng::seed_from_u64(seed), 10.0, bits());
        let p = cs[3].evaluate(&param(&cs[3], t1)).unwrap();
        let q = cs[4].evaluate(&param(&cs[4], t2)).unwrap();
        let d0 = dist2(&p, &q);
        let d1 = dist2(&m.apply(&p), &m.apply(&q));
        prop_assert!((&d0 - &d1).abs().to_f64() < 1e-45 * d0.to_f64().max(1.0));
        let back = m.inverse().apply(&m.apply(&p));
        prop_assert!(gap(&back, &p) < 1e-45);
    }
}
