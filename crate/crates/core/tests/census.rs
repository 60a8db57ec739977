use exact::Scalar;
use fewdist_core::census::{count_distinct, growth_probe, CensusMode, PointSet};
use fewdist_core::curves::{CurveParams, NumericCurve, RigidMotion};
use fewdist_core::real::{bits_for_digits, Real};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn bits() -> usize {
    bits_for_digits(60)
}

/// Two ellipses in general position: no shared axis, no matching relation.
fn generic_ellipses(seed: u64) -> (NumericCurve, NumericCurve) {
    let b = bits();
    let r = |s: &str| Real::parse(s, b).unwrap();
    let e1 = NumericCurve::standard(CurveParams::Ellipse { a: r("2"), b: r("1") }, b).unwrap();
    let e2 = NumericCurve::standard(CurveParams::Ellipse { a: r("1.7"), b: r("0.9") }, b).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (e1, e2.apply_motion(&RigidMotion::random(&mut rng, 1.5, b)))
}

const GROWTH_SEED: u64 = 17;
const SIZES: [(usize, usize); 3] = [(16, 16), (32, 32), (64, 64)];
/// Brute-force counts for GROWTH_SEED, frozen after the first run.
const GOLDEN_GROWTH: [usize; 3] = [256, 1024, 4096];

#[test]
fn growth_probe_generic_ellipses() {
    let (c1, c2) = generic_ellipses(GROWTH_SEED);
    let r = growth_probe(&c1, &c2, &SIZES, GROWTH_SEED, CensusMode::default()).unwrap();
    let counts: Vec<usize> = r.iter().map(|c| c.distinct_count).collect();
    assert_eq!(counts, GOLDEN_GROWTH);
    for w in counts.windows(2) {
        assert!(w[1] as f64 / w[0] as f64 >= 2.5);
    }
    assert!(counts[2] >= 1270);
}

#[test]
fn growth_probe_is_deterministic() {
    let (c1, c2) = generic_ellipses(GROWTH_SEED);
    let a = growth_probe(&c1, &c2, &SIZES[..1], 3, CensusMode::default()).unwrap();
    let b = growth_probe(&c1, &c2, &SIZES[..1], 3, CensusMode::default()).unwrap();
    assert_eq!(a, b);
}

fn q(n: i64) -> Scalar {
    Scalar::from_integer(n.into())
}

fn lattice(pts: &[[i64; 3]]) -> PointSet {
    PointSet::from_rationals(pts.iter().map(|p| p.map(q)).collect(), bits())
}

#[test]
fn exact_and_clustered_agree_on_lattice_points() {
    let a = lattice(&[[0, 0, 0], [1, 0, 0], [2, 0, 0]]);
    let b = lattice(&[[0, 3, 0], [0, 4, 0], [5, 0, 1]]);
    let e = count_distinct(&a, &b, CensusMode::Exact).unwrap();
    let c = count_distinct(&a, &b, CensusMode::default()).unwrap();
    assert_eq!(e.distinct_count, c.distinct_count);
    assert_eq!(e.pairs(), 9);
    let values: Vec<&str> = e.histogram.iter().map(|h| h.value.as_str()).collect();
    assert_eq!(values, ["9", "10", "13", "16", "17", "20", "26"]);
}

#[test]
fn empty_and_inexact_inputs_are_rejected() {
    let a = lattice(&[[0, 0, 0]]);
    assert!(count_distinct(&a, &PointSet::default(), CensusMode::default()).is_err());
    let real = PointSet::from_reals(vec![[0, 0, 1].map(|v| Real::from_i64(v, bits()))]);
    assert!(count_distinct(&a, &real, CensusMode::Exact).is_err());
    let bad = CensusMode::Clustered { precision_digits: 60, merge_tolerance: 0.0 };
    assert!(count_distinct(&a, &a, bad).is_err());
}

#[test]
fn csv_round_trip() {
    let a = lattice(&[[0, 0, 0], [1, 0, 0]]);
    let b = lattice(&[[0, 1, 0], [1, 1, 0]]);
    let r = count_distinct(&a, &b, CensusMode::Exact).unwrap();
    let text = r.to_csv().unwrap();
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    let rows: Vec<(String, usize)> = rd.deserialize().map(|x| x.unwrap()).collect();
    assert_eq!(rows, vec![("1".to_string(), 2), ("2".to_string(), 2)]);
}

fn small_set() -> impl Strategy<Value = Vec<[i64; 3]>> {
    prop::collection::vec([-4i64..=4, -4i64..=4, -4i64..=4], 1..7)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn census_is_symmetric(a in small_set(), b in small_set()) {
        let (pa, pb) = (lattice(&a), lattice(&b));
        let x = count_distinct(&pa, &pb, CensusMode::Exact).unwrap();
        let y = count_distinct(&pb, &pa, CensusMode::Exact).unwrap();
        prop_assert_eq!(x.histogram, y.histogram);
    }

    #[test]
    fn census_bounds_and_pairs(a in small_set(), b in small_set()) {
        let x = count_distinct(&lattice(&a), &lattice(&b), CensusMode::Exact).unwrap();
        prop_assert!(x.distinct_count >= 1 && x.distinct_count <= a.len() * b.len());
        prop_assert_eq!(x.pairs(), a.len() * b.len());
        prop_assert!(x.quadruple_count() >= (a.len() * b.len()) as u128);
    }

    #[test]
    fn adding_points_never_lowers_the_count(a in small_set(), b in small_set(), extra in [-4i64..=4, -4i64..=4, -4i64..=4]) {
        let base = count_distinct(&lattice(&a), &lattice(&b), CensusMode::Exact).unwrap();
        let mut a2 = a.clone();
        a2.push(extra);
        let more = count_distinct(&lattice(&a2), &lattice(&b), CensusMode::Exact).unwrap();
        prop_assert!(more.distinct_count >= base.distinct_count);
    }

    #[test]
    fn clustered_count_is_motion_invariant(a in small_set(), b in small_set(), seed in 0u64..1000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = RigidMotion::random(&mut rng, 5.0, bits());
        let (pa, pb) = (lattice(&a), lattice(&b));
        let moved = |p: &PointSet| PointSet::from_reals(p.points.iter().map(|x| m.apply(&x.coords)).collect());
        let exact = count_distinct(&pa, &pb, CensusMode::Exact).unwrap();
        let clustered = count_distinct(&moved(&pa), &moved(&pb), CensusMode::default()).unwrap();
        prop_assert_eq!(exact.distinct_count, clustered.distinct_count);
    }
}
