//! Machine-checked case analysis for pairs of ellipses and pairs of
//! hyperbolas, and the two solution families of the cross-multiplied
//! derivative identity.
//!
//! Each case applies its substitutions to the two curves, recomputes the
//! reduced numerator of the derivative test, and compares a combination of
//! its `(s,t)`-coefficients with a stated factored expression up to a
//! nonzero rational scalar.
//!
//! An adjoined square root `z² = R` is handled in one of two ways. When the
//! squared-distance function is even in `z` it is rewritten with `z² = R`
//! before the test; otherwise the test runs with `z` free and the
//! coefficient combination is reduced afterwards, comparing the parts even
//! and odd in `z` separately.

pub mod catalog;
pub mod lemma;
pub mod spec;

use std::collections::BTreeMap;
use std::time::Instant;

use exact::{
    parse_poly, parse_rational_function, parse_scalar, reduce_mod_quadratic, reduce_rational_mod_quadratic, MultiPoly,
    RationalFunction, Scalar, SymbolTable, Table,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::curves::{standard_first_curve, standard_second_curve, SymbolicCurve};
use crate::derivtest::{distance_function, rho_numerator, DistanceFunction};
use crate::error::CoreError;

pub use catalog::{builtin_catalog, load_catalog_dir, Suite};
pub use lemma::{verify_important_lemma, LemmaFamily};
pub use spec::*;

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum FactorRole {
    Nonvanishing,
    Forced,
    Positive,
}

#[derive(Debug, Clone, Serialize)]
pub struct FactorCertificate {
    pub factor: String,
    pub role: FactorRole,
    pub multiplicity: u32,
}

/// How an adjoined relation was applied.
#[derive(Debug, Clone, Copy, Serialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum RelationMode {
    /// Applied to the distance function before the test.
    Before,
    /// Applied to the coefficient combination after the test.
    After,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub expected: String,
    pub computed: String,
    /// Odd part of the computed combination in the relation symbol.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub computed_odd: Option<String>,
    /// `computed = lambda · expected`.
    pub lambda: Option<String>,
    pub relations: BTreeMap<String, RelationMode>,
    pub certificates: Vec<FactorCertificate>,
    pub rho_n_terms: usize,
    pub pass: bool,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub message: String,
}

#[derive(Debug, Clone, Copy, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, Serialize)]
pub struct CaseReport {
    pub id: String,
    pub hypotheses: String,
    pub conclusion: ConclusionKind,
    pub checks: Vec<CheckReport>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl CaseReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn lambdas(&self) -> Vec<String> {
        self.checks.iter().filter_map(|c| c.lambda.clone()).collect()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteSummary {
    pub suite: String,
    pub total: usize,
    pub passed: usize,
    pub failed: Vec<String>,
    pub lambdas: BTreeMap<String, Vec<String>>,
    pub cases: Vec<CaseReport>,
}

impl SuiteSummary {
    pub fn all_pass(&self) -> bool {
        self.failed.is_empty()
    }
}

fn case_err(id: &str, msg: impl Into<String>) -> CoreError {
    CoreError::Case { id: id.to_string(), msg: msg.into() }
}

struct Parsed {
    table: Table,
    subs: Vec<(usize, RationalFunction)>,
    rels: Vec<(usize, RationalFunction)>,
    atoms: Vec<(String, MultiPoly)>,
}

fn parse_hypotheses(case: &CaseSpec, check: &CheckSpec, table: &Table) -> Result<Parsed, CoreError> {
    let id = case.id.as_str();
    let mut subs = Vec::new();
    for s in case.substitutions.iter().chain(&check.substitutions) {
        let v = table.require(&s.symbol)?;
        let value = parse_rational_function(table, &s.value)?;
        if value.num().contains_var(v) || value.den().contains_var(v) {
            return Err(case_err(id, format!("substitution for `{}` mentions itself", s.symbol)));
        }
        if v == table.s_index() || v == table.t_index() {
            return Err(case_err(id, "curve variables cannot be substituted"));
        }
        subs.push((v, value));
    }
    let mut rels = Vec::new();
    for r in case.relations.iter().chain(&check.relations) {
        let v = table.require(&r.symbol)?;
        let square = parse_rational_function(table, &r.square)?;
        if square.num().contains_var(v) || square.den().contains_var(v) {
            return Err(exact::ExactError::RelationContainsSymbol(r.symbol.clone()).into());
        }
        rels.push((v, square));
    }
    let mut atoms = Vec::new();
    for a in case.nonvanishing.iter().chain(&check.nonvanishing) {
        atoms.push((a.clone(), parse_poly(table, a)?));
    }
    Ok(Parsed { table: table.clone(), subs, rels, atoms })
}

pub(crate) fn base_curves(base: BaseConfig, table: &Table) -> Result<(SymbolicCurve, SymbolicCurve), CoreError> {
    let kind = base.kind();
    let (o, v1, v2) = base.second_curve_vectors();
    Ok((standard_first_curve(table, kind, "c")?, standard_second_curve(table, kind, o, v1, v2)?))
}

/// `f/g` when it is a nonzero constant.
fn constant_ratio(f: &RationalFunction, g: &RationalFunction) -> Option<Scalar> {
    if f.is_zero() || g.is_zero() {
        return None;
    }
    let q = f / g;
    if q.num().is_constant() && q.den().is_constant() {
        Some(q.num().constant_term() / q.den().constant_term())
    } else {
        None
    }
}

/// Strips known factors from `e`. Returns the certificates and the cofactor.
fn strip_factors(e: &MultiPoly, factors: &[(String, MultiPoly, FactorRole)]) -> (Vec<FactorCertificate>, MultiPoly) {
    let mut rest = e.clone();
    let mut certs = Vec::new();
    for (text, f, role) in factors {
        if f.is_constant() {
            continue;
        }
        let mut k = 0;
        while let Some(q) = rest.exact_divide(f) {
            rest = q;
            k += 1;
        }
        if k > 0 || *role == FactorRole::Forced {
            certs.push(FactorCertificate { factor: text.clone(), role: role.clone(), multiplicity: k });
        }
    }
    (certs, rest)
}

/// A factor strips to a nonzero constant using only nonvanishing atoms.
fn is_nonvanishing(p: &MultiPoly, atoms: &[(String, MultiPoly)]) -> bool {
    let list: Vec<_> = atoms.iter().map(|(t, a)| (t.clone(), a.clone(), FactorRole::Nonvanishing)).collect();
    let (_, rest) = strip_factors(p, &list);
    rest.is_constant() && !rest.is_zero()
}

/// Every exponent even and every coefficient positive.
fn structurally_nonnegative(w: &MultiPoly) -> bool {
    let n = w.table().len();
    w.terms().all(|(m, c)| c > Scalar::from_integer(0.into()) && m.exponents(n).iter().all(|e| e % 2 == 0))
}

fn check_sum_of_squares(
    sos: &SumOfSquares,
    table: &Table,
    atoms: &[(String, MultiPoly)],
) -> Result<(String, MultiPoly), String> {
    let mut total = MultiPoly::zero(table);
    let mut strict = false;
    for term in &sos.terms {
        let w = parse_poly(table, &term.weight).map_err(|e| e.to_string())?;
        let b = parse_poly(table, &term.base).map_err(|e| e.to_string())?;
        if !structurally_nonnegative(&w) {
            return Err(format!("weight `{}` is not structurally nonnegative", term.weight));
        }
        let w_pos = w.constant_term() > Scalar::from_integer(0.into()) || is_nonvanishing(&w, atoms);
        if w_pos && is_nonvanishing(&b, atoms) {
            strict = true;
        }
        total = &total + &(&w * &b.pow(2));
    }
    if !strict {
        return Err("no strictly positive term".into());
    }
    let text = sos
        .terms
        .iter()
        .map(|t| format!("({})*({})^2", t.weight, t.base))
        .collect::<Vec<_>>()
        .join(" + ");
    Ok((text, total))
}

/// Splits `f` into its parts even and odd in the relation symbol, if any.
fn split(f: &MultiPoly, post: Option<&(usize, RationalFunction)>) -> Result<(RationalFunction, RationalFunction), CoreError> {
    match post {
        Some((v, rhs)) => Ok(reduce_mod_quadratic(f, *v, rhs)?),
        None => Ok((RationalFunction::from_poly(f.clone()), RationalFunction::zero(f.table()))),
    }
}

fn run_check(case: &CaseSpec, check: &CheckSpec, table: &Table) -> Result<CheckReport, CoreError> {
    let id = case.id.as_str();
    let h = parse_hypotheses(case, check, table)?;
    let (mut c1, mut c2) = base_curves(check.base.unwrap_or(case.base), table)?;
    for (v, value) in &h.subs {
        c1 = c1.substitute(*v, value).map_err(|e| case_err(id, format!("substitution: {e}")))?;
        c2 = c2.substitute(*v, value).map_err(|e| case_err(id, format!("substitution: {e}")))?;
    }
    let mut rho = distance_function(&c1, &c2)?.rho().clone();
    let mut modes = BTreeMap::new();
    let mut post = Vec::new();
    for (v, rhs) in &h.rels {
        let (even, odd) = reduce_rational_mod_quadratic(&rho, *v, rhs)?;
        if odd.is_zero() {
            rho = even;
            modes.insert(table.name(*v).to_string(), RelationMode::Before);
        } else {
            modes.insert(table.name(*v).to_string(), RelationMode::After);
            post.push((*v, rhs.clone()));
        }
    }
    if post.len() > 1 {
        return Err(case_err(id, "at most one relation may appear oddly in the distance function"));
    }
    let rn = rho_numerator(&DistanceFunction::from_rho(rho))?;
    let mut report = CheckReport {
        expected: check.expected.clone(),
        computed: String::new(),
        computed_odd: None,
        lambda: None,
        relations: modes,
        certificates: Vec::new(),
        rho_n_terms: rn.rho_n.num_terms(),
        pass: false,
        message: String::new(),
    };
    if check.outcome == Outcome::Vanishes {
        report.computed = if rn.is_zero() { "0".into() } else { format!("{} terms", rn.rho_n.num_terms()) };
        report.pass = rn.is_zero();
        if !report.pass {
            report.message = "numerator does not vanish".into();
        }
        return Ok(report);
    }
    if check.target.is_empty() {
        return Err(case_err(id, "check has no target combination"));
    }
    let mut computed = MultiPoly::zero(&h.table);
    for term in &check.target {
        let w = parse_scalar(&term.weight)?;
        computed = &computed + &rn.coeff(term.s, term.t).scale(&w);
    }
    let mut expected = parse_poly(table, &check.expected)?;
    for sub in &check.specialize {
        let v = table.require(&sub.symbol)?;
        let value = parse_poly(table, &sub.value)?;
        computed = computed.substitute(v, &value);
        expected = expected.substitute(v, &value);
    }
    let mut exp_reduced = RationalFunction::from_poly(expected.clone());
    for (v, rhs) in &h.rels {
        if report.relations[table.name(*v)] == RelationMode::Before {
            let (even, odd) = reduce_rational_mod_quadratic(&exp_reduced, *v, rhs)?;
            if !odd.is_zero() {
                return Err(case_err(id, "expected expression is odd in a relation applied before the test"));
            }
            exp_reduced = even;
        }
    }
    let (ce, co) = split(&computed, post.first())?;
    let (ee, eo) = {
        let (n, d) = (exp_reduced.num(), exp_reduced.den());
        let (ne, no) = split(n, post.first())?;
        let dd = RationalFunction::from_poly(d.clone());
        (&ne / &dd, &no / &dd)
    };
    report.computed = ce.to_string();
    if !post.is_empty() {
        report.computed_odd = Some(co.to_string());
    }
    let lambda = if !ee.is_zero() {
        constant_ratio(&ce, &ee).filter(|l| co == eo.scale(l))
    } else {
        if !ce.is_zero() {
            None
        } else {
            constant_ratio(&co, &eo)
        }
    };
    let Some(lambda) = lambda else {
        report.message = if !co.is_zero() && eo.is_zero() {
            "relation symbol appears oddly in the computed combination".into()
        } else {
            "computed combination is not a scalar multiple of the expected expression".into()
        };
        return Ok(report);
    };
    report.lambda = Some(lambda.to_string());

    let mut factors: Vec<(String, MultiPoly, FactorRole)> =
        h.atoms.iter().map(|(t, p)| (t.clone(), p.clone(), FactorRole::Nonvanishing)).collect();
    if let Outcome::Forces { factors: forced } = &check.outcome {
        for f in forced {
            factors.push((f.clone(), parse_poly(table, f)?, FactorRole::Forced));
        }
    }
    for sos in &check.positive {
        match check_sum_of_squares(sos, table, &h.atoms) {
            Ok((text, p)) => factors.push((text, p, FactorRole::Positive)),
            Err(msg) => {
                report.message = format!("positivity certificate rejected: {msg}");
                return Ok(report);
            }
        }
    }
    let (certs, rest) = strip_factors(&expected, &factors);
    report.certificates = certs;
    if !rest.is_constant() || rest.is_zero() {
        report.message = format!("expected expression has an uncertified factor `{rest}`");
        return Ok(report);
    }
    if let Some(c) = report
        .certificates
        .iter()
        .find(|c| c.role == FactorRole::Forced && c.multiplicity == 0)
    {
        report.message = format!("forced factor `{}` does not divide the expected expression", c.factor);
        return Ok(report);
    }
    report.pass = true;
    Ok(report)
}

/// Numerator of `lhs − rhs` for a relation written `lhs = rhs`.
fn relation_polynomial(table: &Table, text: &str) -> Result<MultiPoly, CoreError> {
    let (l, r) = text
        .split_once('=')
        .ok_or_else(|| CoreError::InvalidConfig(format!("relation `{text}` has no `=`")))?;
    let d = &parse_rational_function(table, l)? - &parse_rational_function(table, r)?;
    Ok(d.num().clone())
}

fn check_conclusion(case: &CaseSpec, table: &Table, reports: &[CheckReport]) -> Result<(), String> {
    let last = case.checks.last().ok_or("case has no checks")?;
    match case.conclusion.kind {
        ConclusionKind::Contradiction if last.outcome != Outcome::Nonzero => {
            return Err("a contradiction must end with a nonzero expression".into())
        }
        ConclusionKind::Matching if last.outcome != Outcome::Vanishes => {
            return Err("matching curves must end with a vanishing numerator".into())
        }
        ConclusionKind::Forces if !matches!(last.outcome, Outcome::Forces { .. }) => {
            return Err("a forcing conclusion must end with forced factors".into())
        }
        _ => {}
    }
    if let Some(rel) = &case.conclusion.relation {
        let p = relation_polynomial(table, rel).map_err(|e| e.to_string())?;
        let found = case.checks.iter().zip(reports).any(|(c, r)| {
            r.pass
                && match &c.outcome {
                    Outcome::Forces { factors } => factors
                        .iter()
                        .filter_map(|f| parse_poly(table, f).ok())
                        .any(|f| f.equal_up_to_scalar(&p).is_some()),
                    _ => false,
                }
        });
        if !found {
            return Err(format!("relation `{rel}` is not one of the forced factors"));
        }
    }
    Ok(())
}

pub fn run_case(case: &CaseSpec) -> Result<CaseReport, CoreError> {
    let start = Instant::now();
    let table = SymbolTable::curve(case.base.params())?;
    let checks: Result<Vec<CheckReport>, CoreError> =
        case.checks.par_iter().map(|c| run_check(case, c, &table)).collect();
    let checks = checks?;
    let mut message = checks
        .iter()
        .enumerate()
        .find(|(_, c)| !c.pass)
        .map(|(i, c)| format!("check {}: {}", i + 1, c.message))
        .unwrap_or_default();
    if message.is_empty() {
        if let Err(m) = check_conclusion(case, &table, &checks) {
            message = m;
        }
    }
    Ok(CaseReport {
        id: case.id.clone(),
        hypotheses: case.hypotheses.clone(),
        conclusion: case.conclusion.kind,
        verdict: if message.is_empty() { Verdict::Pass } else { Verdict::Fail },
        checks,
        message,
        elapsed_ms: Some(start.elapsed().as_millis() as u64),
    })
}

/// Runs every case of the suite. Computation errors become failing reports.
pub fn run_suite(suite: Suite, catalog: &[CaseSpec]) -> SuiteSummary {
    let cases: Vec<&CaseSpec> = catalog.iter().filter(|c| suite.contains(c)).collect();
    let mut reports: Vec<CaseReport> = cases
        .par_iter()
        .map(|c| {
            run_case(c).unwrap_or_else(|e| CaseReport {
                id: c.id.clone(),
                hypotheses: c.hypotheses.clone(),
                conclusion: c.conclusion.kind,
                checks: Vec::new(),
                verdict: Verdict::Fail,
                message: e.to_string(),
                elapsed_ms: None,
            })
        })
        .collect();
    for r in &mut reports {
        let known = |id: &String| catalog.iter().any(|c| &c.id == id);
        let case = cases.iter().find(|c| c.id == r.id).expect("report of a listed case");
        if let Some(missing) = case.conclusion.subcases.iter().find(|s| !known(s)) {
            r.verdict = Verdict::Fail;
            r.message = format!("unknown subcase `{missing}`");
        }
    }
    reports.sort_by(|a, b| catalog::id_order(&a.id).cmp(&catalog::id_order(&b.id)));
    let failed = reports.iter().filter(|r| !r.passed()).map(|r| r.id.clone()).collect();
    SuiteSummary {
        suite: suite.to_string(),
        total: reports.len(),
        passed: reports.iter().filter(|r| r.passed()).count(),
        failed,
        lambdas: reports.iter().map(|r| (r.id.clone(), r.lambdas())).collect(),
        cases: reports,
    }
}

/// Like [`run_suite`], but fails with the first offending case id.
pub fn run_all(suite: Suite, catalog: &[CaseSpec]) -> Result<SuiteSummary, CoreError> {
    let summary = run_suite(suite, catalog);
    if let Some(r) = summary.cases.iter().find(|r| !r.passed()) {
        return Err(case_err(&r.id, r.message.clone()));
    }
    Ok(summary)
}
