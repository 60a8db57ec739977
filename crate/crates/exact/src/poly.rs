//! Sparse multivariate polynomials with rational coefficients.
//!
//! A [`MultiPoly`] stores integer numerators over one shared positive
//! denominator, so the arithmetic-heavy paths (products, derivatives, the
//! derivative-test numerator) run on integers only. Terms are kept sorted in
//! descending graded-lexicographic order with no zero coefficients, and the
//! shared denominator is reduced against the content of the numerators.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use ahash::AHashMap;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::ExactError;
use crate::monomial::{Monomial, MAX_DEGREE};
use crate::symbols::{same_table, Table};
use crate::Scalar;

/// Work (term pairs) above which products are split across threads.
const PAR_THRESHOLD: usize = 1 << 16;

#[derive(Clone)]
pub struct MultiPoly {
    table: Table,
    terms: Vec<(Monomial, BigInt)>,
    den: BigInt,
}

/// Arithmetic selector for [`poly_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
}

/// Table-checked polynomial arithmetic.
pub fn poly_arith(a: &MultiPoly, b: &MultiPoly, op: PolyOp) -> Result<MultiPoly, ExactError> {
    a.check_table(b)?;
    Ok(match op {
        PolyOp::Add => a + b,
        PolyOp::Sub => a - b,
        PolyOp::Mul => a * b,
    })
}

impl MultiPoly {
    pub fn zero(table: &Table) -> MultiPoly {
        MultiPoly { table: table.clone(), terms: Vec::new(), den: BigInt::one() }
    }

    pub fn one(table: &Table) -> MultiPoly {
        MultiPoly::from_int(table, BigInt::one())
    }

    pub fn from_int<I: Into<BigInt>>(table: &Table, c: I) -> MultiPoly {
        let c = c.into();
        let terms = if c.is_zero() { Vec::new() } else { vec![(Monomial::ONE, c)] };
        MultiPoly { table: table.clone(), terms, den: BigInt::one() }
    }

    pub fn constant(table: &Table, c: &Scalar) -> MultiPoly {
        MultiPoly::from_int(table, c.numer().clone()).div_int(c.denom())
    }

    pub fn var(table: &Table, index: usize) -> MultiPoly {
        assert!(index < table.len(), "variable index out of range");
        MultiPoly { table: table.clone(), terms: vec![(Monomial::var_pow(index, 1), BigInt::one())], den: BigInt::one() }
    }

    pub fn var_named(table: &Table, name: &str) -> Result<MultiPoly, ExactError> {
        Ok(MultiPoly::var(table, table.require(name)?))
    }

    pub fn monomial(table: &Table, m: Monomial, c: Scalar) -> MultiPoly {
        MultiPoly::from_terms(table, vec![(m, c)])
    }

    /// Builds a polynomial from arbitrary (possibly repeated) rational terms.
    pub fn from_terms(table: &Table, terms: Vec<(Monomial, Scalar)>) -> MultiPoly {
        let mut den = BigInt::one();
        for (_, c) in &terms {
            den = den.lcm(c.denom());
        }
        let ints = terms
            .into_iter()
            .map(|(m, c)| {
                let scale = &den / c.denom();
                (m, c.numer() * scale)
            })
            .collect();
        let mut p = MultiPoly::from_int_terms(table, ints);
        p.den = den;
        p.reduce_den();
        p
    }

    /// Builds an integer polynomial from arbitrary (possibly repeated) terms.
    pub fn from_int_terms(table: &Table, terms: Vec<(Monomial, BigInt)>) -> MultiPoly {
        let mut acc: AHashMap<Monomial, BigInt> = AHashMap::with_capacity(terms.len());
        for (m, c) in terms {
            if m.total_degree() > 0 {
                debug_assert!((0..table.len()).map(|i| m.exponent(i)).sum::<u32>() == m.total_degree());
            }
            *acc.entry(m).or_default() += c;
        }
        MultiPoly { table: table.clone(), terms: collect_sorted(acc), den: BigInt::one() }
    }

    /// Wraps already sorted, zero-free integer terms.
    pub(crate) fn from_sorted_int_terms(table: &Table, terms: Vec<(Monomial, BigInt)>, den: BigInt) -> MultiPoly {
        debug_assert!(terms.windows(2).all(|w| w[0].0 > w[1].0));
        let mut p = MultiPoly { table: table.clone(), terms, den };
        p.reduce_den();
        p
    }

    pub fn table(&self) -> &Table {
        &self.table
    }

    pub fn check_table(&self, other: &MultiPoly) -> Result<(), ExactError> {
        if same_table(&self.table, &other.table) {
            Ok(())
        } else {
            Err(ExactError::TableMismatch)
        }
    }

    fn assert_table(&self, other: &MultiPoly) {
        assert!(same_table(&self.table, &other.table), "operands use different symbol tables");
    }

    /// Re-tags this polynomial with an equal table (same names, same order).
    pub fn with_table(mut self, table: &Table) -> Result<MultiPoly, ExactError> {
        if !same_table(&self.table, table) {
            return Err(ExactError::TableMismatch);
        }
        self.table = table.clone();
        Ok(self)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1 == self.den
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Integer numerators; the true coefficient is `numerator / self.den()`.
    pub fn int_terms(&self) -> &[(Monomial, BigInt)] {
        &self.terms
    }

    pub fn den(&self) -> &BigInt {
        &self.den
    }

    pub fn terms(&self) -> impl Iterator<Item = (Monomial, Scalar)> + '_ {
        self.terms.iter().map(move |(m, c)| (*m, BigRational::new(c.clone(), self.den.clone())))
    }

    pub fn coefficient(&self, m: Monomial) -> Scalar {
        match self.terms.binary_search_by(|(k, _)| m.cmp(k)) {
            Ok(i) => BigRational::new(self.terms[i].1.clone(), self.den.clone()),
            Err(_) => Scalar::zero(),
        }
    }

    pub fn constant_term(&self) -> Scalar {
        self.coefficient(Monomial::ONE)
    }

    pub fn leading_term(&self) -> Option<(Monomial, Scalar)> {
        self.terms.first().map(|(m, c)| (*m, BigRational::new(c.clone(), self.den.clone())))
    }

    pub fn leading_monomial(&self) -> Option<Monomial> {
        self.terms.first().map(|(m, _)| *m)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.total_degree()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.iter().map(|(m, _)| m.exponent(var)).max().unwrap_or(0)
    }

    pub fn contains_var(&self, var: usize) -> bool {
        self.terms.iter().any(|(m, _)| m.exponent(var) > 0)
    }

    /// Bit `i` is set when variable `i` occurs.
    pub fn var_mask(&self) -> u32 {
        let mut mask = 0u32;
        for (m, _) in &self.terms {
            for i in 0..self.table.len() {
                if m.exponent(i) > 0 {
                    mask |= 1 << i;
                }
            }
        }
        mask
    }

    /// gcd of the integer numerators (zero for the zero polynomial).
    pub fn integer_content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for (_, c) in &self.terms {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    fn reduce_den(&mut self) {
        if self.terms.is_empty() {
            self.den = BigInt::one();
            return;
        }
        if self.den.is_one() {
            return;
        }
        let mut g = self.den.clone();
        for (_, c) in &self.terms {
            g = g.gcd(c);
            if g.is_one() {
                return;
            }
        }
        for (_, c) in self.terms.iter_mut() {
            *c /= &g;
        }
        self.den /= &g;
    }

    /// Scales by `1/d` for a nonzero integer `d`.
    pub fn div_int(mut self, d: &BigInt) -> MultiPoly {
        assert!(!d.is_zero(), "division by zero");
        if d.is_negative() {
            for (_, c) in self.terms.iter_mut() {
                *c = -std::mem::take(c);
            }
        }
        self.den *= d.abs();
        self.reduce_den();
        self
    }

    pub fn scale(&self, c: &Scalar) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(&self.table);
        }
        let terms = self.terms.iter().map(|(m, x)| (*m, x * c.numer())).collect();
        MultiPoly::from_sorted_int_terms(&self.table, terms, &self.den * c.denom()).fix_sign_den()
    }

    pub fn scale_int(&self, c: &BigInt) -> MultiPoly {
        self.scale(&BigRational::from_integer(c.clone()))
    }

    fn fix_sign_den(mut self) -> MultiPoly {
        if self.den.is_negative() {
            self.den = -std::mem::take(&mut self.den);
            for (_, c) in self.terms.iter_mut() {
                *c = -std::mem::take(c);
            }
        }
        self
    }

    /// The integer-coefficient polynomial `den * self`.
    pub fn clear_denominator(&self) -> MultiPoly {
        MultiPoly { table: self.table.clone(), terms: self.terms.clone(), den: BigInt::one() }
    }

    /// Canonical representative of the line `Q^* · self`: integer content 1
    /// and a positive leading coefficient. Zero maps to zero.
    pub fn canonical(&self) -> MultiPoly {
        self.canonical_with_scalar().0
    }

    /// Returns `(canonical, lambda)` with `self = lambda * canonical`.
    pub fn canonical_with_scalar(&self) -> (MultiPoly, Scalar) {
        if self.is_zero() {
            return (self.clone(), Scalar::one());
        }
        let mut g = self.integer_content();
        if self.terms[0].1.is_negative() {
            g = -g;
        }
        let terms = self.terms.iter().map(|(m, c)| (*m, c / &g)).collect();
        let lambda = BigRational::new(g, self.den.clone());
        (MultiPoly { table: self.table.clone(), terms, den: BigInt::one() }, lambda)
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut result = MultiPoly::one(&self.table);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn mul_monomial(&self, m: Monomial) -> MultiPoly {
        assert!(self.total_degree() + m.total_degree() <= MAX_DEGREE, "degree overflow");
        let terms = self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect();
        MultiPoly { table: self.table.clone(), terms, den: self.den.clone() }
    }

    pub fn derivative(&self, var: usize) -> MultiPoly {
        let mut terms: Vec<(Monomial, BigInt)> = self
            .terms
            .iter()
            .filter(|(m, _)| m.exponent(var) > 0)
            .map(|(m, c)| (m.lower(var), c * BigInt::from(m.exponent(var))))
            .collect();
        // lowering one exponent keeps grlex order within equal total degree
        // only up to ties, so re-sort to be safe
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        MultiPoly::from_sorted_int_terms(&self.table, terms, self.den.clone())
    }

    /// Full evaluation at a point indexed by variable.
    pub fn evaluate(&self, point: &[Scalar]) -> Scalar {
        assert_eq!(point.len(), self.table.len(), "point has wrong dimension");
        let mut powers: Vec<Vec<Scalar>> = Vec::with_capacity(point.len());
        for (i, v) in point.iter().enumerate() {
            let d = self.degree_in(i) as usize;
            let mut row = Vec::with_capacity(d + 1);
            row.push(Scalar::one());
            for k in 1..=d {
                let next = &row[k - 1] * v;
                row.push(next);
            }
            powers.push(row);
        }
        let mut acc = Scalar::zero();
        for (m, c) in &self.terms {
            let mut term = BigRational::from_integer(c.clone());
            for (i, row) in powers.iter().enumerate() {
                let e = m.exponent(i) as usize;
                if e > 0 {
                    term *= &row[e];
                }
            }
            acc += term;
        }
        acc / BigRational::from_integer(self.den.clone())
    }

    /// Evaluation in `f64`, for diagnostics only.
    pub fn evaluate_f64(&self, point: &[f64]) -> f64 {
        let den = self.den.to_f64().unwrap_or(f64::INFINITY);
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut v = c.to_f64().unwrap_or(f64::NAN);
                for (i, x) in point.iter().enumerate() {
                    let e = m.exponent(i);
                    if e > 0 {
                        v *= x.powi(e as i32);
                    }
                }
                v
            })
            .sum::<f64>()
            / den
    }

    /// Substitutes rational values for some variables.
    pub fn evaluate_partial(&self, assignment: &[(usize, Scalar)]) -> MultiPoly {
        if assignment.is_empty() {
            return self.clone();
        }
        let mut den = BigInt::one();
        for (_, v) in assignment {
            den = den.lcm(v.denom());
        }
        // scale each substituted variable to an integer, track the power of den
        let ints: Vec<(usize, BigInt, BigInt)> =
            assignment.iter().map(|(i, v)| (*i, v.numer().clone(), v.denom().clone())).collect();
        let maxdeg: Vec<u32> = ints.iter().map(|(i, _, _)| self.degree_in(*i)).collect();
        let mut acc: AHashMap<Monomial, BigInt> = AHashMap::with_capacity(self.terms.len());
        let total_scale: Vec<BigInt> = ints
            .iter()
            .zip(&maxdeg)
            .map(|((_, _, d), &md)| num_traits::pow(d.clone(), md as usize))
            .collect();
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut mono = *m;
            for (k, (i, n, d)) in ints.iter().enumerate() {
                let e = m.exponent(*i);
                if e > 0 {
                    coeff *= num_traits::pow(n.clone(), e as usize);
                    mono = mono.with_exponent(*i, 0);
                }
                // v^e = n^e / d^e = n^e d^(md-e) / d^md
                coeff *= num_traits::pow(d.clone(), (maxdeg[k] - e) as usize);
            }
            *acc.entry(mono).or_default() += coeff;
        }
        let mut scale = self.den.clone();
        for s in total_scale {
            scale *= s;
        }
        MultiPoly::from_sorted_int_terms(&self.table, collect_sorted(acc), scale)
    }

    /// Replaces variable `var` by the polynomial `value`.
    pub fn substitute(&self, var: usize, value: &MultiPoly) -> MultiPoly {
        self.assert_table(value);
        let coeffs = self.to_univariate(var);
        // Horner in `value`
        let mut acc = MultiPoly::zero(&self.table);
        for c in coeffs.iter().rev() {
            acc = &(&acc * value) + c;
        }
        acc
    }

    /// Coefficients of `self` as a polynomial in `var`: entry `k` multiplies `var^k`.
    pub fn to_univariate(&self, var: usize) -> Vec<MultiPoly> {
        let d = self.degree_in(var) as usize;
        let mut buckets: Vec<Vec<(Monomial, BigInt)>> = vec![Vec::new(); d + 1];
        for (m, c) in &self.terms {
            let e = m.exponent(var) as usize;
            buckets[e].push((m.with_exponent(var, 0), c.clone()));
        }
        buckets
            .into_iter()
            .map(|mut b| {
                b.sort_unstable_by(|x, y| y.0.cmp(&x.0));
                MultiPoly::from_sorted_int_terms(&self.table, b, self.den.clone())
            })
            .collect()
    }

    pub fn from_univariate(table: &Table, var: usize, coeffs: &[MultiPoly]) -> MultiPoly {
        let mut acc = MultiPoly::zero(table);
        for (k, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc = &acc + &c.mul_monomial(Monomial::var_pow(var, k as u32));
            }
        }
        acc
    }

    /// The polynomial in the remaining symbols multiplying
    /// `s^s_deg t^t_deg`, using the table's curve variables.
    pub fn coeff_st(&self, s_deg: u32, t_deg: u32) -> MultiPoly {
        let (si, ti) = (self.table.s_index(), self.table.t_index());
        let mut terms: Vec<(Monomial, BigInt)> = self
            .terms
            .iter()
            .filter(|(m, _)| m.exponent(si) == s_deg && m.exponent(ti) == t_deg)
            .map(|(m, c)| (m.with_exponent(si, 0).with_exponent(ti, 0), c.clone()))
            .collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        MultiPoly::from_sorted_int_terms(&self.table, terms, self.den.clone())
    }

    /// Exact quotient `self / divisor`, or `None` when the division leaves a remainder.
    pub fn exact_divide(&self, divisor: &MultiPoly) -> Option<MultiPoly> {
        self.assert_table(divisor);
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        if self.is_zero() {
            return Some(MultiPoly::zero(&self.table));
        }
        if divisor.is_constant() {
            let c = divisor.constant_term();
            return Some(self.scale(&(Scalar::one() / c)));
        }
        let dl = divisor.terms[0].0;
        // quick rejections: degrees and leading monomial
        for i in 0..self.table.len() {
            if divisor.degree_in(i) > self.degree_in(i) {
                return None;
            }
        }
        if !dl.divides(self.terms[0].0) {
            return None;
        }
        let dlc = &divisor.terms[0].1;
        let tail = &divisor.terms[1..];
        // fraction-free: work with integer remainder, accumulate quotient over
        // a common denominator `dlc^k`, tracked as rationals per term
        let mut rem: BTreeMap<std::cmp::Reverse<Monomial>, BigRational> = self
            .terms
            .iter()
            .map(|(m, c)| (std::cmp::Reverse(*m), BigRational::from_integer(c.clone())))
            .collect();
        let mut quot: Vec<(Monomial, BigRational)> = Vec::new();
        let dlc_r = BigRational::from_integer(dlc.clone());
        while let Some((std::cmp::Reverse(m), c)) = rem.pop_first() {
            if !dl.divides(m) {
                return None;
            }
            let qm = dl.div_into(m);
            let qc = &c / &dlc_r;
            for (tm, tc) in tail {
                let key = std::cmp::Reverse(qm.mul(*tm));
                let delta = &qc * BigRational::from_integer(tc.clone());
                match rem.entry(key) {
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        *e.get_mut() -= delta;
                        if e.get().is_zero() {
                            e.remove();
                        }
                    }
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(-delta);
                    }
                }
            }
            quot.push((qm, qc));
        }
        // self.den / divisor.den scaling: true quotient = (N_a/d_a) / (N_b/d_b)
        let q = MultiPoly::from_terms(&self.table, quot);
        let factor = BigRational::new(divisor.den.clone(), self.den.clone());
        Some(q.scale(&factor))
    }

    /// Returns `lambda` with `self = lambda * other` when such a nonzero
    /// scalar exists. Two zero polynomials give `lambda = 1`.
    pub fn equal_up_to_scalar(&self, other: &MultiPoly) -> Option<Scalar> {
        self.assert_table(other);
        match (self.is_zero(), other.is_zero()) {
            (true, true) => return Some(Scalar::one()),
            (true, false) | (false, true) => return None,
            _ => {}
        }
        if self.terms.len() != other.terms.len() {
            return None;
        }
        // lambda = (a0/da) / (b0/db)
        let (a0, b0) = (&self.terms[0].1, &other.terms[0].1);
        for ((ma, ca), (mb, cb)) in self.terms.iter().zip(&other.terms) {
            if ma != mb || ca * b0 != cb * a0 {
                return None;
            }
        }
        Some(BigRational::new(a0 * &other.den, b0 * &self.den))
    }

    /// Stable text form: terms in descending monomial order, coefficients as `num/den`.
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

fn collect_sorted(acc: AHashMap<Monomial, BigInt>) -> Vec<(Monomial, BigInt)> {
    let mut terms: Vec<(Monomial, BigInt)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
    terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
    terms
}

fn merge_terms(a: Vec<(Monomial, BigInt)>, b: Vec<(Monomial, BigInt)>, negate_b: bool) -> Vec<(Monomial, BigInt)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut ia = a.into_iter().peekable();
    let mut ib = b.into_iter().peekable();
    loop {
        match (ia.peek(), ib.peek()) {
            (Some(x), Some(y)) => {
                if x.0 > y.0 {
                    out.push(ia.next().unwrap());
                } else if x.0 < y.0 {
                    let (m, c) = ib.next().unwrap();
                    out.push((m, if negate_b { -c } else { c }));
                } else {
                    let (m, ca) = ia.next().unwrap();
                    let (_, cb) = ib.next().unwrap();
                    let c = if negate_b { ca - cb } else { ca + cb };
                    if !c.is_zero() {
                        out.push((m, c));
                    }
                }
            }
            (Some(_), None) => {
                out.push(ia.next().unwrap());
            }
            (None, Some(_)) => {
                let (m, c) = ib.next().unwrap();
                out.push((m, if negate_b { -c } else { c }));
            }
            (None, None) => break,
        }
    }
    out
}

fn mul_serial(a: &[(Monomial, BigInt)], b: &[(Monomial, BigInt)]) -> Vec<(Monomial, BigInt)> {
    let mut acc: AHashMap<Monomial, BigInt> = AHashMap::with_capacity((a.len() * b.len()).min(1 << 20));
    for (ma, ca) in a {
        for (mb, cb) in b {
            let p = ca * cb;
            match acc.entry(ma.mul(*mb)) {
                std::collections::hash_map::Entry::Occupied(mut e) => *e.get_mut() += p,
                std::collections::hash_map::Entry::Vacant(e) => {
                    e.insert(p);
                }
            }
        }
    }
    collect_sorted(acc)
}

fn mul_int_terms(a: &[(Monomial, BigInt)], b: &[(Monomial, BigInt)]) -> Vec<(Monomial, BigInt)> {
    let (a, b) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    if a.len() * b.len() < PAR_THRESHOLD || a.len() < 8 {
        return mul_serial(a, b);
    }
    let chunks = (rayon::current_num_threads() * 4).max(2);
    let chunk = a.len().div_ceil(chunks);
    a.par_chunks(chunk)
        .map(|ch| mul_serial(ch, b))
        .reduce(Vec::new, |x, y| merge_terms(x, y, false))
}

impl PartialEq for MultiPoly {
    fn eq(&self, other: &Self) -> bool {
        same_table(&self.table, &other.table) && self.den == other.den && self.terms == other.terms
    }
}

impl Eq for MultiPoly {}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly({self})")
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let r = BigRational::new(c.clone(), self.den.clone());
            let neg = r.is_negative();
            let a = r.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let mut factors: Vec<String> = Vec::new();
            for i in 0..self.table.len() {
                let e = m.exponent(i);
                match e {
                    0 => {}
                    1 => factors.push(self.table.name(i).to_string()),
                    _ => factors.push(format!("{}^{}", self.table.name(i), e)),
                }
            }
            if factors.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{}*{}", a, factors.join("*"))?;
            }
        }
        Ok(())
    }
}

fn combine(a: &MultiPoly, b: &MultiPoly, negate_b: bool) -> MultiPoly {
    a.assert_table(b);
    if a.den == b.den {
        let terms = merge_terms(a.terms.clone(), b.terms.clone(), negate_b);
        return MultiPoly::from_sorted_int_terms(&a.table, terms, a.den.clone());
    }
    let l = a.den.lcm(&b.den);
    let fa = &l / &a.den;
    let fb = &l / &b.den;
    let ta = a.terms.iter().map(|(m, c)| (*m, c * &fa)).collect();
    let tb = b.terms.iter().map(|(m, c)| (*m, c * &fb)).collect();
    MultiPoly::from_sorted_int_terms(&a.table, merge_terms(ta, tb, negate_b), l)
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        combine(self, rhs, false)
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        combine(self, rhs, true)
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        self.assert_table(rhs);
        if self.is_zero() || rhs.is_zero() {
            return MultiPoly::zero(&self.table);
        }
        assert!(
            self.total_degree() + rhs.total_degree() <= MAX_DEGREE,
            "total degree exceeds {MAX_DEGREE}"
        );
        let terms = mul_int_terms(&self.terms, &rhs.terms);
        MultiPoly::from_sorted_int_terms(&self.table, terms, &self.den * &rhs.den)
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        let terms = self.terms.iter().map(|(m, c)| (*m, -c)).collect();
        MultiPoly { table: self.table.clone(), terms, den: self.den.clone() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: MultiPoly) -> MultiPoly {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: &MultiPoly) -> MultiPoly {
                (&self).$method(rhs)
            }
        }
        impl $tr<MultiPoly> for &MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: MultiPoly) -> MultiPoly {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::SymbolTable;

    fn table() -> Table {
        SymbolTable::curve(&["c", "p", "x1", "y1"]).unwrap()
    }

    fn v(t: &Table, n: &str) -> MultiPoly {
        MultiPoly::var_named(t, n).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let t = table();
        let (s, tt) = (v(&t, "s"), v(&t, "t"));
        let prod = &(&s + &tt) * &(&s - &tt);
        assert_eq!(prod, &s.pow(2) - &tt.pow(2));
    }

    #[test]
    fn additive_identity() {
        let t = table();
        let p = v(&t, "p");
        assert_eq!(&p + &MultiPoly::zero(&t), p);
    }

    #[test]
    fn binomial_square() {
        let t = table();
        let (x, y) = (v(&t, "x1"), v(&t, "y1"));
        let sq = (&x + &y).pow(2);
        let expect = &(&x.pow(2) + &(&x * &y).scale_int(&BigInt::from(2))) + &y.pow(2);
        assert_eq!(sq, expect);
        assert_eq!(sq.to_string(), "x1^2 + 2*x1*y1 + y1^2");
    }

    #[test]
    fn mismatched_tables_are_rejected() {
        let a = v(&table(), "s");
        let other = SymbolTable::curve(&["q"]).unwrap();
        let b = v(&other, "q");
        assert_eq!(poly_arith(&a, &b, PolyOp::Add), Err(ExactError::TableMismatch));
    }

    #[test]
    fn power_rule_derivative() {
        let t = table();
        let (s, tt) = (v(&t, "s"), v(&t, "t"));
        let f = &(&s.pow(2) * &tt) + &tt.pow(3);
        let ds = f.derivative(0);
        assert_eq!(ds, (&s * &tt).scale_int(&BigInt::from(2)));
    }

    #[test]
    fn coeff_extraction() {
        let t = table();
        let (s, tt, c) = (v(&t, "s"), v(&t, "t"), v(&t, "c"));
        let f = &(&(&c * &s) * &tt).scale_int(&BigInt::from(3)) + &s.pow(2).scale_int(&BigInt::from(5));
        assert_eq!(f.coeff_st(1, 1), c.scale_int(&BigInt::from(3)));
        let g = &s.pow(2) - &tt.pow(2);
        assert!(g.coeff_st(1, 1).is_zero());
    }

    #[test]
    fn exact_division() {
        let t = table();
        let (x, y) = (v(&t, "s"), v(&t, "t"));
        let a = &x.pow(2) - &y.pow(2);
        assert_eq!(a.exact_divide(&(&x - &y)), Some(&x + &y));
        let one = MultiPoly::one(&t);
        assert_eq!((&x.pow(2) + &one).exact_divide(&(&x - &one)), None);
    }

    #[test]
    fn scalar_recovery() {
        let t = table();
        let (s, tt) = (v(&t, "s"), v(&t, "t"));
        let a = (&s + &tt).scale_int(&BigInt::from(2));
        assert_eq!(a.equal_up_to_scalar(&(&s + &tt)), Some(Scalar::from_integer(2.into())));
        assert_eq!((&s + &tt).equal_up_to_scalar(&(&s - &tt)), None);
    }

    #[test]
    fn rational_coefficients_and_canonical_form() {
        let t = table();
        let s = v(&t, "s");
        let half = Scalar::new(1.into(), 2.into());
        let p = &s.scale(&half) - &MultiPoly::constant(&t, &Scalar::new(3.into(), 4.into()));
        assert_eq!(p.to_string(), "1/2*s - 3/4");
        let (canon, lambda) = p.canonical_with_scalar();
        assert_eq!(canon.to_string(), "2*s - 3");
        assert_eq!(lambda, Scalar::new(1.into(), 4.into()));
        assert_eq!(canon.scale(&lambda), p);
        let neg = (-&canon).canonical();
        assert_eq!(neg, canon);
    }

    #[test]
    fn partial_evaluation_matches_full() {
        let t = table();
        let (s, c, p) = (v(&t, "s"), v(&t, "c"), v(&t, "p"));
        let f = &(&s.pow(3) * &c) - &(&p * &c.pow(2)).scale(&Scalar::new(2.into(), 3.into()));
        let assign = vec![(2usize, Scalar::new(3.into(), 5.into()))];
        let g = f.evaluate_partial(&assign);
        let pt: Vec<Scalar> = [2, 7, 3, 11, 13, 17]
            .iter()
            .map(|&x| Scalar::from_integer(x.into()))
            .collect();
        let mut pt2 = pt.clone();
        pt2[2] = Scalar::new(3.into(), 5.into());
        assert_eq!(g.evaluate(&pt), f.evaluate(&pt2));
    }
}
