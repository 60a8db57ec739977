//! Multivariate gcd over Q.
//!
//! The gcd is computed by content/primitive-part recursion on one variable
//! at a time, with a subresultant pseudo-remainder sequence for the primitive
//! parts. Before recursing, a modular image test tries to prove the inputs
//! coprime: if for every shared variable `v` the univariate images modulo a
//! prime at a point that keeps both leading coefficients in `v` nonzero have
//! a constant gcd, no common factor can involve `v`. A failed test proves
//! nothing and simply falls through to the exact recursion.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::modp;
use crate::monomial::Monomial;
use crate::poly::MultiPoly;
use crate::sparse_gcd;

const PRIME: u64 = (1 << 61) - 1;
const CERT_ATTEMPTS: usize = 2;

/// Canonical gcd (integer content 1, positive leading coefficient).
/// `gcd(0, 0) = 0`.
pub fn gcd(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    a.check_table(b).expect("operands use different symbol tables");
    gcd_rec(&a.canonical(), &b.canonical())
}

/// True when `a` and `b` are proven to share no nonconstant factor by the
/// modular image test. `false` means "not proven", not "not coprime".
pub fn certified_coprime(a: &MultiPoly, b: &MultiPoly) -> bool {
    if a.is_zero() || b.is_zero() {
        return a.is_constant() && b.is_constant() && !(a.is_zero() && b.is_zero());
    }
    if a.is_constant() || b.is_constant() {
        return true;
    }
    let shared = a.var_mask() & b.var_mask();
    if shared == 0 {
        return true;
    }
    let nvars = a.table().len();
    let mut rng = StdRng::seed_from_u64(0x5eed_0f_9cd ^ (a.num_terms() as u64) << 20 ^ b.num_terms() as u64);
    'vars: for v in 0..nvars {
        if shared & (1 << v) == 0 {
            continue;
        }
        for _ in 0..CERT_ATTEMPTS {
            let point: Vec<u64> = (0..nvars).map(|_| rng.gen_range(1..PRIME)).collect();
            let (ua, ub) = (image(a, v, &point), image(b, v, &point));
            if ua.len() != a.degree_in(v) as usize + 1 || ub.len() != b.degree_in(v) as usize + 1 {
                // a leading coefficient vanished at the point
                continue;
            }
            if modp::uni_gcd(ua, ub, PRIME).len() == 1 {
                continue 'vars;
            }
        }
        return false;
    }
    true
}

/// Content of `a` with respect to `var`: the gcd of its coefficients in `var`.
pub fn content_in(a: &MultiPoly, var: usize) -> MultiPoly {
    fold_coefficients(a, var, MultiPoly::zero(a.table()))
}

/// `gcd(start, coefficients of a in var)`, taking the smallest coefficients
/// first so the running gcd stays small.
fn fold_coefficients(a: &MultiPoly, var: usize, start: MultiPoly) -> MultiPoly {
    let mut coeffs: Vec<MultiPoly> = a.to_univariate(var).into_iter().filter(|c| !c.is_zero()).collect();
    coeffs.sort_by_key(|c| c.num_terms());
    let mut g = start;
    for c in &coeffs {
        g = if g.is_zero() { c.canonical() } else { gcd_rec(&g, &c.canonical()) };
        if g.is_one() {
            break;
        }
    }
    g
}

fn gcd_rec(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    if a.is_zero() {
        return b.canonical();
    }
    if b.is_zero() {
        return a.canonical();
    }
    if a.is_constant() || b.is_constant() {
        return MultiPoly::one(a.table());
    }
    if a == b {
        return a.canonical();
    }
    if a.num_terms() == 1 || b.num_terms() == 1 {
        return monomial_gcd(a, b);
    }
    if certified_coprime(a, b) {
        return MultiPoly::one(a.table());
    }
    let (ma, mb) = (a.var_mask(), b.var_mask());
    let nvars = a.table().len();
    // a variable present in only one operand lets us drop to its content
    for v in 0..nvars {
        let bit = 1 << v;
        if ma & bit != 0 && mb & bit == 0 {
            return fold_coefficients(a, v, b.clone());
        }
        if mb & bit != 0 && ma & bit == 0 {
            return fold_coefficients(b, v, a.clone());
        }
    }
    // main variable: the one with the smallest leading coefficients
    let v = (0..nvars)
        .filter(|v| ma & (1 << v) != 0)
        .min_by_key(|&v| {
            let lc = |p: &MultiPoly| p.int_terms().iter().filter(|(m, _)| m.exponent(v) == p.degree_in(v)).count();
            (lc(a) + lc(b), a.degree_in(v).max(b.degree_in(v)))
        })
        .expect("nonconstant operands have a variable");
    let (ca, cb) = (content_in(a, v), content_in(b, v));
    let pa = a.exact_divide(&ca).expect("content divides").canonical();
    let pb = b.exact_divide(&cb).expect("content divides").canonical();
    let gc = gcd_rec(&ca, &cb);
    if pa == pb {
        return (&gc * &pa).canonical();
    }
    if pa.var_mask() != pb.var_mask() {
        return (&gc * &gcd_rec(&pa, &pb)).canonical();
    }
    let gamma = sparse_gcd::leading_gcd(&pa, &pb, v);
    let gp = sparse_gcd::sparse_gcd(&pa, &pb, v, &gamma);
    let gp = gp.unwrap_or_else(|| primitive_prs_gcd(&pa, &pb, v));
    (&gc * &gp).canonical()
}

/// gcd when one operand is a single term: the largest monomial dividing
/// every term of both.
fn monomial_gcd(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    let n = a.table().len();
    let mut exps = vec![u32::MAX; n];
    for (m, _) in a.int_terms().iter().chain(b.int_terms()) {
        for (i, e) in exps.iter_mut().enumerate() {
            *e = (*e).min(m.exponent(i));
        }
    }
    let m = Monomial::from_exponents(&exps).expect("divides an existing monomial");
    MultiPoly::from_int_terms(a.table(), vec![(m, 1.into())])
}

/// gcd of two polynomials that are primitive with respect to `v`.
fn primitive_prs_gcd(a: &MultiPoly, b: &MultiPoly, v: usize) -> MultiPoly {
    let table = a.table().clone();
    let (mut f, mut g) = (a.to_univariate(v), b.to_univariate(v));
    trim(&mut f);
    trim(&mut g);
    if f.len() < g.len() {
        std::mem::swap(&mut f, &mut g);
    }
    let mut gg = MultiPoly::one(&table);
    let mut h = MultiPoly::one(&table);
    loop {
        if g.len() == 1 {
            // nonzero constant in v: the primitive gcd is trivial
            return MultiPoly::one(&table);
        }
        let d = (f.len() - g.len()) as u32;
        let r = prem(&f, &g);
        if r.is_empty() {
            break;
        }
        let divisor = &gg * &h.pow(d);
        f = g;
        g = r.iter().map(|c| c.exact_divide(&divisor).expect("subresultant division is exact")).collect();
        gg = f.last().unwrap().clone();
        h = if d == 0 {
            h
        } else {
            gg.pow(d).exact_divide(&h.pow(d - 1)).expect("subresultant division is exact")
        };
    }
    let result = MultiPoly::from_univariate(&table, v, &g);
    let c = content_in(&result, v);
    result.exact_divide(&c).expect("content divides").canonical()
}

fn trim(p: &mut Vec<MultiPoly>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

/// Pseudo-remainder of univariate polynomials with polynomial coefficients.
fn prem(f: &[MultiPoly], g: &[MultiPoly]) -> Vec<MultiPoly> {
    let dg = g.len() - 1;
    let lc = g.last().unwrap();
    let mut r: Vec<MultiPoly> = f.to_vec();
    let mut steps = f.len() - g.len() + 1;
    while r.len() > dg && !r.is_empty() {
        let k = r.len() - 1;
        let lr = r[k].clone();
        let shift = k - dg;
        for c in r.iter_mut() {
            *c = &*c * lc;
        }
        for (i, gc) in g.iter().enumerate() {
            r[i + shift] = &r[i + shift] - &(&lr * gc);
        }
        debug_assert!(r[k].is_zero());
        r.pop();
        trim(&mut r);
        steps -= 1;
    }
    if steps > 0 {
        let scale = lc.pow(steps as u32);
        for c in r.iter_mut() {
            *c = &*c * &scale;
        }
    }
    r
}

/// Univariate image in `v` modulo the prime, other variables set to `point`.
/// Trailing zero coefficients are trimmed.
fn image(a: &MultiPoly, v: usize, point: &[u64]) -> Vec<u64> {
    let n = point.len();
    let mut out = vec![0u64; a.degree_in(v) as usize + 1];
    for (m, c) in a.int_terms() {
        let mut x = modp::reduce(c, PRIME);
        for (i, &r) in point.iter().enumerate().take(n) {
            if i != v {
                let e = m.exponent(i);
                if e > 0 {
                    x = modp::mulmod(x, modp::powmod(r, e as u64, PRIME), PRIME);
                }
            }
        }
        let k = m.exponent(v) as usize;
        out[k] = modp::addmod(out[k], x, PRIME);
    }
    while out.last() == Some(&0) {
        out.pop();
    }
    out
}

/// Removes from `a` every factor it shares with `b`, returning the cofactor
/// and the total removed part: `a = removed * cofactor` and the cofactor is
/// coprime to `b`.
pub fn remove_common_factors(a: &MultiPoly, b: &MultiPoly) -> (MultiPoly, MultiPoly) {
    let mut cof = a.clone();
    let mut removed = MultiPoly::one(a.table());
    loop {
        let g = gcd(&cof, b);
        if g.is_constant() {
            return (cof, removed);
        }
        cof = cof.exact_divide(&g).expect("gcd divides");
        removed = &removed * &g;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use crate::symbols::SymbolTable;

    #[test]
    fn gcd_of_shared_factor() {
        let t = SymbolTable::curve(&["c", "x"]).unwrap();
        let v = |n: &str| MultiPoly::var_named(&t, n).unwrap();
        let one = MultiPoly::one(&t);
        let f = &(&v("s") * &v("c")) + &v("t");
        let a = &f * &(&v("s") - &one);
        let b = &f * &(&v("x").pow(2) + &v("t"));
        assert_eq!(gcd(&a, &b), f.canonical());
        assert!(!certified_coprime(&a, &b));
        let c = &(&v("s") - &one) * &v("x");
        assert!(certified_coprime(&b.exact_divide(&f).unwrap(), &c));
        assert!(gcd(&(&f * &f), &f.pow(3)) == f.pow(2).canonical());
    }

    #[test]
    fn gcd_with_integer_content() {
        let t = SymbolTable::curve(&["c"]).unwrap();
        let v = |n: &str| MultiPoly::var_named(&t, n).unwrap();
        let two = MultiPoly::from_int(&t, 2);
        let a = &two * &(&v("s") - &v("t"));
        let b = (&v("s") - &v("t")).pow(2).scale_int(&BigInt::from(6));
        assert_eq!(gcd(&a, &b), (&v("s") - &v("t")).canonical());
    }
}
