use std::sync::OnceLock;

use exact::{parse_poly, parse_rational_function, Scalar, SymbolTable};
use fewdist_core::curves::SymbolicCurve;
use fewdist_core::derivtest::{
    crosscheck_random, derivtest_report, distance_function, numeric_crosscheck, rho_numerator, DerivConfig,
    DistanceFunction, Family, RhoNumerator, VANISHING,
};
use proptest::prelude::*;

/// Pass criterion for the finite-difference agreement.
const CROSSCHECK_TOL: f64 = 1e-6;

fn q(n: i64, d: i64) -> Scalar {
    Scalar::new(n.into(), d.into())
}

fn generic() -> &'static (DistanceFunction, RhoNumerator) {
    static CELL: OnceLock<(DistanceFunction, RhoNumerator)> = OnceLock::new();
    CELL.get_or_init(|| {
        let (c1, c2) = Family::GenericEllipses.curves().unwrap();
        let d = distance_function(&c1, &c2).unwrap();
        let rn = rho_numerator(&d).unwrap();
        (d, rn)
    })
}

#[test]
fn distance_function_examples() {
    let t = SymbolTable::curve(&["q"]).unwrap();
    let cases = [
        (["s", "0", "0"], ["t", "0", "1"], "(s-t)^2 + 1"),
        (["s", "s^2", "0"], ["0", "q - t^2", "t"], "s^2 + (s^2 + t^2 - q)^2 + t^2"),
        (["0", "0", "s"], ["t", "0", "0"], "s^2 + t^2"),
    ];
    for (a, b, rho) in cases {
        let c1 = SymbolicCurve::parse(&t, "s", a).unwrap();
        let c2 = SymbolicCurve::parse(&t, "t", b).unwrap();
        let d = distance_function(&c1, &c2).unwrap();
        let want = parse_rational_function(&t, rho).unwrap();
        assert!((d.rho() - &want).is_zero(), "{rho}");
    }
    let c1 = SymbolicCurve::parse(&t, "s", ["s", "0", "0"]).unwrap();
    assert!(distance_function(&c1, &c1).is_err());
}

#[test]
fn vanishing_families() {
    for f in VANISHING {
        let (c1, c2) = f.curves().unwrap();
        let rn = rho_numerator(&distance_function(&c1, &c2).unwrap()).unwrap();
        assert!(rn.is_zero(), "{}", f.name());
    }
}

#[test]
fn vanishing_survives_uniform_scaling() {
    for f in VANISHING {
        let (c1, c2) = f.curves().unwrap();
        for lambda in [q(3, 2), q(-7, 1)] {
            let d = distance_function(&c1.scaled(&lambda), &c2.scaled(&lambda)).unwrap();
            assert!(rho_numerator(&d).unwrap().is_zero(), "{} scaled by {lambda}", f.name());
        }
    }
}

#[test]
fn generic_ellipses_do_not_vanish() {
    let (_, rn) = generic();
    assert!(!rn.is_zero());
    let t = rn.rho_n.table();
    let combo = &rn.coeff(1, 1) - &rn.coeff(9, 1);
    let want = parse_poly(t, "-192*c^2*(-2+c^2)*x2*(q*x1-p*y1)*y2").unwrap();
    assert!(combo.equal_up_to_scalar(&want).is_some());
}

#[test]
fn generic_ellipses_agree_with_finite_differences() {
    let (d, _) = generic();
    let r = crosscheck_random(d, 20, 2024).unwrap();
    assert_eq!(r.len(), 20);
    assert!(r.iter().all(|&x| x <= CROSSCHECK_TOL), "{r:?}");
}

#[test]
fn trivial_crosschecks_are_zero() {
    for f in [Family::ParallelLines, Family::OrthogonalLines] {
        let (c1, c2) = f.curves().unwrap();
        let d = distance_function(&c1, &c2).unwrap();
        let rn = rho_numerator(&d).unwrap();
        let point = [q(1, 3), q(5, 2), q(2, 1), q(-1, 5)];
        let r = numeric_crosscheck(&d, &rn, &point, &q(1, 1_000_000)).unwrap();
        assert!(r < 1e-30, "{}: {r:e}", f.name());
    }
}

#[test]
fn crosscheck_reports_poles() {
    let t = SymbolTable::curve::<&str>(&[]).unwrap();
    let c1 = SymbolicCurve::parse(&t, "s", ["1/s", "s", "0"]).unwrap();
    let c2 = SymbolicCurve::parse(&t, "t", ["t", "0", "t^2"]).unwrap();
    let d = distance_function(&c1, &c2).unwrap();
    let rn = rho_numerator(&d).unwrap();
    let h = q(1, 1_000_000);
    assert!(numeric_crosscheck(&d, &rn, &[q(1, 2), q(1, 3)], &h).is_ok());
    assert!(numeric_crosscheck(&d, &rn, &[q(0, 1), q(1, 3)], &h).is_err());
    assert!(numeric_crosscheck(&d, &rn, &[q(1, 2)], &h).is_err());
}

#[test]
fn report_from_json_config() {
    let cfg: DerivConfig = serde_json::from_str(r#"{"family":"cpo-parabolas"}"#).unwrap();
    let r = derivtest_report(&cfg, &[(1, 1)], 3, 1).unwrap();
    assert!(r.rho_n_zero);
    assert_eq!(r.coeffs["1,1"], "0");
    assert_eq!(r.residuals.len(), 3);
    let cfg: DerivConfig =
        serde_json::from_str(r#"{"params":[],"curve1":["s","s^2","0"],"curve2":["t","1","t^3"]}"#).unwrap();
    assert!(!derivtest_report(&cfg, &[], 0, 1).unwrap().rho_n_zero);
}

fn small_pair() -> &'static [(DistanceFunction, RhoNumerator); 2] {
    static CELL: OnceLock<[(DistanceFunction, RhoNumerator); 2]> = OnceLock::new();
    CELL.get_or_init(|| {
        let t = SymbolTable::curve(&["a"]).unwrap();
        let (p1, p2) = (["s", "a*s^2", "0"], ["t", "1", "t^3 - a"]);
        let build = |x: [&str; 3], y: [&str; 3]| {
            let d = distance_function(
                &SymbolicCurve::parse(&t, "s", x).unwrap(),
                &SymbolicCurve::parse(&t, "t", y).unwrap(),
            )
            .unwrap();
            let rn = rho_numerator(&d).unwrap();
            (d, rn)
        };
        let swap = |c: [&str; 3], from: &str, to: &str| c.map(|e| e.replace(from, to));
        let (s1, s2) = (swap(p2, "t", "s"), swap(p1, "s", "t"));
        let swapped = build([&s1[0], &s1[1], &s1[2]].map(|x| x.as_str()), [&s2[0], &s2[1], &s2[2]].map(|x| x.as_str()));
        [build(p1, p2), swapped]
    })
}

fn value(rn: &RhoNumerator, point: &[Scalar]) -> Option<Scalar> {
    let den = rn.den.evaluate(point);
    (den != q(0, 1)).then(|| &rn.lambda * &(&rn.rho_n.evaluate(point) / &den))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn swapping_curves_negates_the_test(s in -20i64..20, t in -20i64..20, a in 1i64..9) {
        let [(_, rn), (_, sw)] = small_pair();
        let (s, t, a) = (q(s, 3), q(t, 5), q(a, 2));
        if let (Some(x), Some(y)) = (value(rn, &[s.clone(), t.clone(), a.clone()]), value(sw, &[t, s, a])) {
            prop_assert_eq!(x, -y);
        }
    }

    #[test]
    fn small_pair_agrees_with_finite_differences(s in 1i64..40, t in 1i64..40, a in 1i64..9) {
        let [(d, rn), _] = small_pair();
        let point = [q(s, 7), q(t, 11), q(a, 3)];
        if let Ok(r) = numeric_crosscheck(d, rn, &point, &q(1, 1_000_000)) {
            prop_assert!(r <= CROSSCHECK_TOL, "residual {}", r);
        }
    }
}
