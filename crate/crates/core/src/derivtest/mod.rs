//! Distance functions of curve pairs and the mixed log-derivative test.
//!
//! For `h = A/B` with polynomials `A`, `B`,
//! `∂²ln|h|/∂s∂t = L(A) − L(B)` where `L(W) = (W_st·W − W_s·W_t)/W²`.
//! `L` ignores any factor of `W` that is free of `s` or free of `t`, so the
//! denominators of `ρ` are split into their `s`-only and `t`-only parts
//! before forming `A` and `B`, which keeps the numerator small.

pub mod families;

use std::collections::BTreeMap;

use exact::{certified_coprime, gcd, MultiPoly, RationalFunction, Scalar, SymbolTable, Table};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::curves::SymbolicCurve;
use crate::error::CoreError;
use crate::real::{bits_for_digits, Real, DEFAULT_DIGITS};

pub use families::{Family, VANISHING};

/// `ρ(s,t)`, the squared distance between `γ1(s)` and `γ2(t)`.
#[derive(Debug, Clone)]
pub struct DistanceFunction {
    rho: RationalFunction,
    curves: Option<(SymbolicCurve, SymbolicCurve)>,
}

impl DistanceFunction {
    /// Wraps an explicit squared-distance function.
    pub fn from_rho(rho: RationalFunction) -> DistanceFunction {
        DistanceFunction { rho: rho.canonicalize(), curves: None }
    }

    pub fn rho(&self) -> &RationalFunction {
        &self.rho
    }

    pub fn table(&self) -> &Table {
        self.rho.table()
    }

    pub fn curves(&self) -> Option<&(SymbolicCurve, SymbolicCurve)> {
        self.curves.as_ref()
    }
}

pub fn distance_function(c1: &SymbolicCurve, c2: &SymbolicCurve) -> Result<DistanceFunction, CoreError> {
    c1.components()[0].num().check_table(c2.components()[0].num())?;
    if c1.var() == c2.var() {
        return Err(CoreError::SharedCurveVariable);
    }
    let table = c1.table();
    let mut rho = RationalFunction::zero(table);
    for (a, b) in c1.components().iter().zip(c2.components()) {
        let d = a - b;
        rho = &rho + &(&d * &d);
    }
    Ok(DistanceFunction { rho, curves: Some((c1.clone(), c2.clone())) })
}

/// Reduced numerator of `∂²ln|ρ_s/ρ_t|/∂s∂t` and the matching denominator.
#[derive(Debug, Clone)]
pub struct RhoNumerator {
    pub rho_n: MultiPoly,
    pub den: MultiPoly,
    /// Scalar with `unreduced numerator = lambda · rho_n · (unreduced den / den)`.
    pub lambda: Scalar,
}

impl RhoNumerator {
    pub fn is_zero(&self) -> bool {
        self.rho_n.is_zero()
    }

    /// `coeff[s^a t^b]` of `rho_n`.
    pub fn coeff(&self, s_deg: u32, t_deg: u32) -> MultiPoly {
        self.rho_n.coeff_st(s_deg, t_deg)
    }

    /// The test expression as a rational function.
    pub fn expression(&self) -> RationalFunction {
        RationalFunction::new(self.rho_n.clone(), self.den.clone()).expect("nonzero denominator")
    }
}

/// Splits a polynomial in which `s` and `t` are separated into its `t`-free
/// and `s`-free factors, when such a splitting exists.
fn separate(d: &MultiPoly) -> Option<(MultiPoly, MultiPoly)> {
    let table = d.table();
    let (si, ti) = (table.s_index(), table.t_index());
    if !d.contains_var(si) || !d.contains_var(ti) {
        return if d.contains_var(ti) {
            Some((MultiPoly::one(table), d.clone()))
        } else {
            Some((d.clone(), MultiPoly::one(table)))
        };
    }
    let ds = exact::gcd::content_in(d, ti);
    let dt = d.exact_divide(&ds)?;
    if dt.contains_var(si) {
        None
    } else {
        Some((ds, dt))
    }
}

/// `(A, B)` with `ρ_s/ρ_t = (A/B) · (factor free of s or of t)`.
pub fn derivative_ratio(d: &DistanceFunction) -> Result<(MultiPoly, MultiPoly), CoreError> {
    let table = d.table();
    let (si, ti) = (table.s_index(), table.t_index());
    let (n, den) = (d.rho.num(), d.rho.den());
    let (a, b) = match separate(den) {
        Some((ds, dt)) => (reduced_derivative(n, &ds, si), reduced_derivative(n, &dt, ti)),
        None => (
            &(&n.derivative(si) * den) - &(n * &den.derivative(si)),
            &(&n.derivative(ti) * den) - &(n * &den.derivative(ti)),
        ),
    };
    if a.is_zero() {
        return Err(CoreError::DegenerateDerivative("rho_s"));
    }
    if b.is_zero() {
        return Err(CoreError::DegenerateDerivative("rho_t"));
    }
    Ok((strip_separable(&a), strip_separable(&b)))
}

/// Removes the factors of `w` that are free of `s` or free of `t`.
fn strip_separable(w: &MultiPoly) -> MultiPoly {
    let table = w.table();
    let mut w = w.canonical();
    for v in [table.s_index(), table.t_index()] {
        let c = exact::gcd::content_in(&w, v);
        if !c.is_constant() {
            w = w.exact_divide(&c).expect("content divides").canonical();
        }
    }
    w
}

/// `(n_v·e − n·e_v) / gcd(e, e_v)`, the numerator of `∂(n/e)/∂v` up to a
/// factor free of `v`'s partner.
fn reduced_derivative(n: &MultiPoly, e: &MultiPoly, v: usize) -> MultiPoly {
    let ev = e.derivative(v);
    if ev.is_zero() {
        return n.derivative(v);
    }
    let r = gcd(e, &ev);
    let q = e.exact_divide(&r).expect("gcd divides");
    let evr = ev.exact_divide(&r).expect("gcd divides");
    &(&n.derivative(v) * &q) - &(n * &evr)
}

fn l_numerator(w: &MultiPoly, si: usize, ti: usize) -> MultiPoly {
    let ws = w.derivative(si);
    let wt = w.derivative(ti);
    let wst = ws.derivative(ti);
    &(&wst * w) - &(&ws * &wt)
}

/// Unreduced numerator `(A_st A − A_s A_t) B² − (B_st B − B_s B_t) A²`
/// over `A² B²`.
pub fn unreduced_numerator(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    let table = a.table();
    let (si, ti) = (table.s_index(), table.t_index());
    let (left, right) = rayon::join(
        || {
            let la = l_numerator(a, si, ti);
            if la.is_zero() {
                la
            } else {
                &la * &(b * b)
            }
        },
        || {
            let lb = l_numerator(b, si, ti);
            if lb.is_zero() {
                lb
            } else {
                &lb * &(a * a)
            }
        },
    );
    &left - &right
}

/// Fully reduced numerator of the test expression, canonical up to sign
/// and content.
pub fn rho_numerator(d: &DistanceFunction) -> Result<RhoNumerator, CoreError> {
    let (a, b) = derivative_ratio(d)?;
    let table = a.table().clone();
    let n = unreduced_numerator(&a, &b);
    let full_den = &a.pow(2) * &b.pow(2);
    if n.is_zero() {
        return Ok(RhoNumerator { rho_n: n, den: MultiPoly::one(&table), lambda: Scalar::from_integer(1.into()) });
    }
    let (reduced, den) = if certified_coprime(&n, &a) && certified_coprime(&n, &b) {
        (n.clone(), full_den)
    } else {
        let g = gcd(&n, &full_den);
        (
            n.exact_divide(&g).expect("gcd divides the numerator"),
            full_den.exact_divide(&g).expect("gcd divides the denominator"),
        )
    };
    let (rho_n, lambda) = reduced.canonical_with_scalar();
    let (den, mu) = den.canonical_with_scalar();
    Ok(RhoNumerator { rho_n, den, lambda: lambda / mu })
}

/// Floor of the denominator in the relative residual, so that two values
/// near zero compare absolutely.
pub const RESIDUAL_FLOOR: f64 = 1e-30;

/// Relative residual between the exact test expression at a rational point
/// and a central second difference of `ln|ρ_s/ρ_t|` with step `step`.
///
/// The assignment lists values for `s`, `t` and then every parameter, in
/// table order. The logarithms are taken at 60 digits.
pub fn numeric_crosscheck(
    d: &DistanceFunction,
    rn: &RhoNumerator,
    assignment: &[Scalar],
    step: &Scalar,
) -> Result<f64, CoreError> {
    let table = d.table();
    if assignment.len() != table.len() {
        return Err(CoreError::InvalidConfig(format!("expected {} values, got {}", table.len(), assignment.len())));
    }
    let bits = bits_for_digits(DEFAULT_DIGITS);
    let (si, ti) = (table.s_index(), table.t_index());
    let pole = || CoreError::Domain("evaluation at a pole".into());
    let den = rn.den.evaluate(assignment);
    if den == Scalar::from_integer(0.into()) {
        return Err(pole());
    }
    let symbolic = &rn.lambda * &(&rn.rho_n.evaluate(assignment) / &den);
    let (rs, rt) = (d.rho().partial_derivative(si), d.rho().partial_derivative(ti));
    d.rho().evaluate(assignment).map_err(|_| pole())?;
    for r in [&rs, &rt] {
        if r.evaluate(assignment).map_err(|_| pole())? == Scalar::from_integer(0.into()) {
            return Err(pole());
        }
    }
    let log_ratio = |ds: i64, dt: i64| -> Result<Real, CoreError> {
        let mut p = assignment.to_vec();
        p[si] = &p[si] + &(step * Scalar::from_integer(ds.into()));
        p[ti] = &p[ti] + &(step * Scalar::from_integer(dt.into()));
        let a = rs.evaluate(&p).map_err(|_| pole())?;
        let b = rt.evaluate(&p).map_err(|_| pole())?;
        let zero = Scalar::from_integer(0.into());
        if a == zero || b == zero {
            return Err(pole());
        }
        Real::from_scalar(&(a / b), bits).abs().ln()
    };
    let mixed = &(&log_ratio(1, 1)? - &log_ratio(1, -1)?) - &(&log_ratio(-1, 1)? - &log_ratio(-1, -1)?);
    let h = Real::from_scalar(step, bits);
    let numeric = &mixed / &(&Real::from_i64(4, bits) * &h.square());
    let symbolic = Real::from_scalar(&symbolic, bits);
    let scale = symbolic.abs().max(&numeric.abs()).max(&Real::from_f64(RESIDUAL_FLOOR, bits));
    Ok((&(&symbolic - &numeric).abs() / &scale).to_f64())
}

/// Residuals at `count` random points, each coordinate a rational with a
/// small denominator drawn in `[-3, 3]`. Points at poles or zeros of
/// `ρ_s`, `ρ_t` are redrawn.
pub fn crosscheck_random(d: &DistanceFunction, count: usize, seed: u64) -> Result<Vec<f64>, CoreError> {
    let rn = rho_numerator(d)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let step = Scalar::new(1.into(), 1_000_000.into());
    let n = d.table().len();
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0;
    while out.len() < count {
        attempts += 1;
        if attempts > 100 * count.max(1) {
            return Err(CoreError::Domain("no regular points found".into()));
        }
        let point: Vec<Scalar> = (0..n)
            .map(|_| {
                let den: i64 = rng.gen_range(1..=7);
                Scalar::new(rng.gen_range(-3 * den..=3 * den).into(), den.into())
            })
            .collect();
        match numeric_crosscheck(d, &rn, &point, &step) {
            Ok(r) => out.push(r),
            Err(CoreError::Domain(_)) | Err(CoreError::Exact(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// Explicit curve pair: components are expressions in `s` (first curve),
/// `t` (second curve) and the listed parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvePairSpec {
    #[serde(default)]
    pub params: Vec<String>,
    pub curve1: [String; 3],
    pub curve2: [String; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DerivConfig {
    Family { family: Family },
    Explicit(CurvePairSpec),
}

impl DerivConfig {
    pub fn curves(&self) -> Result<(SymbolicCurve, SymbolicCurve), CoreError> {
        match self {
            DerivConfig::Family { family } => family.curves(),
            DerivConfig::Explicit(spec) => {
                let table = SymbolTable::curve(&spec.params)?;
                fn c(v: &[String; 3]) -> [&str; 3] {
                    [v[0].as_str(), v[1].as_str(), v[2].as_str()]
                }
                Ok((SymbolicCurve::parse(&table, "s", c(&spec.curve1))?, SymbolicCurve::parse(&table, "t", c(&spec.curve2))?))
            }
        }
    }
}

/// Entry of a derivative-test report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientEntry {
    pub s_deg: u32,
    pub t_deg: u32,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DerivReport {
    pub rho_n_zero: bool,
    pub rho_n_terms: usize,
    /// Requested `coeff[s^a t^b]`, keyed `"a,b"`.
    pub coeffs: BTreeMap<String, String>,
    pub residuals: Vec<f64>,
}

pub fn derivtest_report(
    cfg: &DerivConfig,
    coeffs: &[(u32, u32)],
    crosscheck: usize,
    seed: u64,
) -> Result<DerivReport, CoreError> {
    let (c1, c2) = cfg.curves()?;
    let d = distance_function(&c1, &c2)?;
    let rn = rho_numerator(&d)?;
    let coeffs = coeffs.iter().map(|&(a, b)| (format!("{a},{b}"), rn.coeff(a, b).to_text())).collect();
    let residuals = if crosscheck > 0 { crosscheck_random(&d, crosscheck, seed)? } else { vec![] };
    Ok(DerivReport { rho_n_zero: rn.is_zero(), rho_n_terms: rn.rho_n.num_terms(), coeffs, residuals })
}
