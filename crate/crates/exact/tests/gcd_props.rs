use exact::{gcd, MultiPoly, Monomial, SymbolTable, Table};
use num_bigint::BigInt;
use proptest::prelude::*;

fn table() -> Table {
    SymbolTable::curve(&["a", "b", "c", "d"]).unwrap()
}

fn poly_strategy(nvars: usize, max_terms: usize, max_deg: u32) -> impl Strategy<Value = Vec<(Vec<u32>, i64)>> {
    prop::collection::vec((prop::collection::vec(0..=max_deg, nvars), -9i64..=9), 1..=max_terms)
}

fn build(t: &Table, terms: &[(Vec<u32>, i64)]) -> MultiPoly {
    MultiPoly::from_int_terms(
        t,
        terms.iter().map(|(e, c)| (Monomial::from_exponents(e).unwrap(), BigInt::from(*c))).collect(),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn common_factor_is_recovered(
        f in poly_strategy(6, 5, 2),
        g in poly_strategy(6, 5, 2),
        h in poly_strategy(6, 4, 2),
    ) {
        let t = table();
        let (f, g, h) = (build(&t, &f), build(&t, &g), build(&t, &h));
        prop_assume!(!f.is_zero() && !g.is_zero() && !h.is_zero());
        let (a, b) = (&f * &h, &g * &h);
        let d = gcd(&a, &b);
        prop_assert!(a.exact_divide(&d).is_some());
        prop_assert!(b.exact_divide(&d).is_some());
        prop_assert!(d.exact_divide(&h).is_some());
        // cofactors share nothing
        let (ca, cb) = (a.exact_divide(&d).unwrap(), b.exact_divide(&d).unwrap());
        prop_assert!(gcd(&ca, &cb).is_constant());
    }

    #[test]
    fn gcd_is_symmetric_and_canonical(f in poly_strategy(6, 4, 3), h in poly_strategy(6, 3, 2)) {
        let t = table();
        let (f, h) = (build(&t, &f), build(&t, &h));
        prop_assume!(!f.is_zero() && !h.is_zero());
        let a = &f * &h;
        let b = &h * &h;
        let d1 = gcd(&a, &b);
        let d2 = gcd(&b, &a);
        prop_assert_eq!(&d1, &d2);
        prop_assert_eq!(d1.canonical(), d1.clone());
    }
}

#[test]
fn dense_shared_factor_in_many_variables() {
    let t = SymbolTable::curve(&["c", "p", "q", "r", "x1", "y1", "z1", "x2", "y2"]).unwrap();
    let parse = |s: &str| exact::parse_poly(&t, s).unwrap();
    let h = parse("c^2*p*x1 - 3*q*y2^2 + r*z1*s - x2*t^2 + 7");
    let f = parse("(s + t + c*p - q)^3 + x1*y1*z1 - 2");
    let g = parse("(s - t*x2 + y2)^3 - r^2*p + q*c*s*t");
    let a = &(&f * &h) * &h;
    let b = &(&g * &h) * &parse("s^2 + 1");
    assert_eq!(gcd(&a, &b), h.canonical());
}
