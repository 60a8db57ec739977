//! Point sets with few distinct distances on the few-distance configurations.
//!
//! Every configuration has a distance function `ρ(s,t) = φ3(φ1(s) + φ2(t))`.
//! Choosing `φ1(s_i) = p + iε` and `φ2(t_j) = q + jε` makes `ρ` depend on
//! `i + j` only, so at most `m + n − 1` squared distances occur.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::census::{count_distinct, CensusMode, PointSet};
use crate::curves::numeric::{log_circle_domain, vec3, Arc, CurveParams, Frame, NumericCurve, Vec3};
use crate::error::CoreError;
use crate::real::{bits_for_digits, Real, DEFAULT_DIGITS};

/// Point-on-curve tolerance for constructed points.
pub const ON_CURVE_TOL: f64 = 1e-45;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FewKind {
    ParallelLines,
    OrthogonalLines,
    LineOrthogonalPlaneCurve,
    LineCylinderCurve,
    AlignedCircles,
    PerpendicularCircles,
    CpoParabolas,
    MatchingCurves,
    MatchingLogCircles,
}

pub const ALL_KINDS: [FewKind; 9] = [
    FewKind::ParallelLines,
    FewKind::OrthogonalLines,
    FewKind::LineOrthogonalPlaneCurve,
    FewKind::LineCylinderCurve,
    FewKind::AlignedCircles,
    FewKind::PerpendicularCircles,
    FewKind::CpoParabolas,
    FewKind::MatchingCurves,
    FewKind::MatchingLogCircles,
];

impl FewKind {
    pub fn name(self) -> &'static str {
        match self {
            FewKind::ParallelLines => "parallel-lines",
            FewKind::OrthogonalLines => "orthogonal-lines",
            FewKind::LineOrthogonalPlaneCurve => "line-orthogonal-plane-curve",
            FewKind::LineCylinderCurve => "line-cylinder-curve",
            FewKind::AlignedCircles => "aligned-circles",
            FewKind::PerpendicularCircles => "perpendicular-circles",
            FewKind::CpoParabolas => "cpo-parabolas",
            FewKind::MatchingCurves => "matching-curves",
            FewKind::MatchingLogCircles => "matching-log-circles",
        }
    }

    /// Parameters and their defaults.
    pub fn defaults(self) -> &'static [(&'static str, &'static str)] {
        match self {
            FewKind::ParallelLines => &[("gap", "1")],
            FewKind::OrthogonalLines => &[],
            FewKind::LineOrthogonalPlaneCurve => &[("a", "2"), ("b", "1"), ("h", "1")],
            FewKind::LineCylinderCurve => &[("mu", "1"), ("D", "1")],
            FewKind::AlignedCircles => &[("r1", "1"), ("r2", "2"), ("gap", "1")],
            FewKind::PerpendicularCircles => &[("B", "1"), ("D", "4"), ("D2", "3")],
            FewKind::CpoParabolas => &[("a", "1"), ("q", "5")],
            FewKind::MatchingCurves => &[("a", "1"), ("b", "1"), ("m", "2")],
            FewKind::MatchingLogCircles => {
                &[("A", "1"), ("B", "1"), ("D", "4"), ("D2", "6"), ("arc1", "positive"), ("arc2", "positive")]
            }
        }
    }
}

impl std::str::FromStr for FewKind {
    type Err = CoreError;
    fn from_str(s: &str) -> Result<FewKind, CoreError> {
        ALL_KINDS.into_iter().find(|k| k.name() == s).ok_or_else(|| CoreError::UnsupportedKind(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FewDistanceConfig {
    pub kind: FewKind,
    pub params: BTreeMap<String, String>,
    /// Progression step; defaults to the shorter φ-interval over `4(m+n)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<String>,
    pub precision_digits: u32,
}

impl FewDistanceConfig {
    pub fn new(kind: FewKind) -> FewDistanceConfig {
        FewDistanceConfig {
            kind,
            params: kind.defaults().iter().map(|(k, v)| (k.to_string(), v.to_string())).collect(),
            epsilon: None,
            precision_digits: DEFAULT_DIGITS,
        }
    }

    pub fn with(mut self, key: &str, value: &str) -> Result<FewDistanceConfig, CoreError> {
        if !self.kind.defaults().iter().any(|(k, _)| *k == key) {
            return Err(CoreError::InvalidConfig(format!("{} has no parameter `{key}`", self.kind.name())));
        }
        self.params.insert(key.to_string(), value.to_string());
        Ok(self)
    }

    fn bits(&self) -> usize {
        bits_for_digits(self.precision_digits)
    }

    fn real(&self, key: &str) -> Result<Real, CoreError> {
        let text = self
            .params
            .get(key)
            .ok_or_else(|| CoreError::InvalidConfig(format!("missing parameter `{key}`")))?;
        Real::parse(text, self.bits())
    }

    fn arc(&self, key: &str) -> Result<Arc, CoreError> {
        match self.params.get(key).map(String::as_str) {
            None | Some("positive") => Ok(Arc::Positive),
            Some("negative") => Ok(Arc::Negative),
            Some(other) => Err(CoreError::InvalidConfig(format!("unknown arc `{other}`"))),
        }
    }

    /// The two curves of the configuration.
    pub fn curves(&self) -> Result<(NumericCurve, NumericCurve), CoreError> {
        Ok(plan(self)?.curves)
    }
}

type PointFn = Box<dyn Fn(&Real) -> Result<Vec3, CoreError>>;

struct Plan {
    curves: (NumericCurve, NumericCurve),
    i1: (Real, Real),
    i2: (Real, Real),
    point1: PointFn,
    point2: PointFn,
    /// Values of `φ1 + φ2` where the outer function turns.
    critical: Vec<Real>,
}

fn frame(bits: usize, origin: [&str; 3], e1: [&str; 3], e2: [&str; 3], e3: [&str; 3]) -> Frame {
    let v = |a: [&str; 3]| a.map(|x| Real::parse(x, bits).expect("literal"));
    Frame { origin: v(origin), e1: v(e1), e2: v(e2), e3: v(e3) }
}

fn interval(bits: usize, lo: &str, hi: &str) -> (Real, Real) {
    (Real::parse(lo, bits).expect("literal"), Real::parse(hi, bits).expect("literal"))
}

fn positive(name: &str, v: &Real) -> Result<(), CoreError> {
    if v.is_positive() {
        Ok(())
    } else {
        Err(CoreError::InvalidConfig(format!("`{name}` must be positive")))
    }
}

fn plan(cfg: &FewDistanceConfig) -> Result<Plan, CoreError> {
    let bits = cfg.bits();
    let zero = Real::zero(bits);
    let one = Real::one(bits);
    let two = Real::from_i64(2, bits);
    let z3 = ["0", "0", "0"];
    let (ex, ey, ez) = (["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]);
    Ok(match cfg.kind {
        FewKind::ParallelLines => {
            let gap = cfg.real("gap")?;
            let f1 = frame(bits, z3, ez, ex, ey);
            let mut f2 = f1.clone();
            f2.origin = vec3(&gap, &zero, &zero);
            let c1 = NumericCurve::new(CurveParams::Line, f1)?;
            let c2 = NumericCurve::new(CurveParams::Line, f2)?;
            let (a, b) = (c1.clone(), c2.clone());
            Plan {
                curves: (c1, c2),
                i1: interval(bits, "1", "2"),
                i2: interval(bits, "1", "2"),
                point1: Box::new(move |phi| a.evaluate(phi)),
                point2: Box::new(move |phi| b.evaluate(&-phi)),
                critical: vec![zero.clone()],
            }
        }
        FewKind::OrthogonalLines => {
            let c1 = NumericCurve::new(CurveParams::Line, frame(bits, z3, ex, ey, ez))?;
            let c2 = NumericCurve::new(CurveParams::Line, frame(bits, z3, ey, ez, ex))?;
            let (a, b) = (c1.clone(), c2.clone());
            Plan {
                curves: (c1, c2),
                i1: interval(bits, "1", "2"),
                i2: interval(bits, "1", "2"),
                point1: Box::new(move |phi| a.evaluate(&phi.sqrt()?)),
                point2: Box::new(move |phi| b.evaluate(&phi.sqrt()?)),
                critical: vec![],
            }
        }
        FewKind::LineOrthogonalPlaneCurve => {
            let (a, b, h) = (cfg.real("a")?, cfg.real("b")?, cfg.real("h")?);
            positive("a", &a)?;
            positive("b", &b)?;
            if a == b {
                return Err(CoreError::InvalidConfig("a = b gives a circle about the line; use a ≠ b".into()));
            }
            let c1 = NumericCurve::new(CurveParams::Line, frame(bits, z3, ez, ex, ey))?;
            let mut f2 = Frame::standard(bits);
            f2.origin = vec3(&zero, &zero, &h);
            let c2 = NumericCurve::new(CurveParams::Ellipse { a: a.clone(), b: b.clone() }, f2)?;
            let (lo, hi) = (a.square().min(&b.square()), a.square().max(&b.square()));
            let l = c1.clone();
            let hh = h.clone();
            let frame2 = c2.frame.clone();
            let (a2, b2) = (a.square(), b.square());
            let span = &a2 - &b2;
            Plan {
                curves: (c1, c2),
                i1: interval(bits, "1", "2"),
                i2: (lo, hi),
                point1: Box::new(move |phi| l.evaluate(&(&hh + &phi.sqrt()?))),
                point2: Box::new(move |r| {
                    let x = &a * &(&(r - &b2) / &span).sqrt()?;
                    let y = &b * &(&(&a2 - r) / &span).sqrt()?;
                    Ok(frame2.to_world(&vec3(&x, &y, &Real::zero(r.bits()))))
                }),
                critical: vec![],
            }
        }
        FewKind::LineCylinderCurve => {
            let (mu, d) = (cfg.real("mu")?, cfg.real("D")?);
            positive("D", &d)?;
            if mu.is_zero() {
                return Err(CoreError::InvalidConfig("`mu` must be nonzero".into()));
            }
            let k = (&mu.square() + &one).sqrt()?;
            let v = vec3(&(&mu / &k), &zero, &(&one / &k));
            let e2 = vec3(&zero, &one, &zero);
            let e3 = vec3(&-&v[2], &zero, &v[0]);
            let c1 = NumericCurve::new(CurveParams::Line, Frame { origin: [0, 0, 0].map(|_| zero.clone()), e1: v, e2, e3 })?;
            let ea = (&d * &k.square()).sqrt()?;
            let eb = d.sqrt()?;
            let c2 = NumericCurve::standard(CurveParams::Ellipse { a: ea, b: eb.clone() }, bits)?;
            let t_max = &mu.abs() * &eb;
            let half = &t_max / &two;
            let l = c1.clone();
            Plan {
                curves: (c1, c2),
                i1: (t_max.clone(), &t_max * &two),
                i2: (-&half, half),
                point1: Box::new(move |phi| l.evaluate(phi)),
                point2: Box::new(move |phi| {
                    let t = -phi;
                    let px = &(&t * &k) / &mu;
                    let py = (&d - &(&px.square() / &k.square())).sqrt()?;
                    Ok(vec3(&px, &py, &Real::zero(phi.bits())))
                }),
                critical: vec![],
            }
        }
        FewKind::AlignedCircles => {
            let (r1, r2, gap) = (cfg.real("r1")?, cfg.real("r2")?, cfg.real("gap")?);
            let c1 = NumericCurve::standard(CurveParams::Circle { r: r1 }, bits)?;
            let mut f2 = Frame::standard(bits);
            f2.origin = vec3(&zero, &zero, &gap);
            let c2 = NumericCurve::new(CurveParams::Circle { r: r2 }, f2)?;
            let (a, b) = (c1.clone(), c2.clone());
            Plan {
                curves: (c1, c2),
                i1: interval(bits, "0", "1/4"),
                i2: interval(bits, "0", "1/4"),
                point1: Box::new(move |phi| a.evaluate(phi)),
                point2: Box::new(move |phi| b.evaluate(&-phi)),
                critical: vec![zero.clone(), &one / &two, one.clone()],
            }
        }
        FewKind::PerpendicularCircles => {
            let zero_a = "0".to_string();
            log_circles(cfg, &Real::parse(&zero_a, bits)?, Arc::Positive, Arc::Positive)?
        }
        FewKind::MatchingLogCircles => {
            let a = cfg.real("A")?;
            log_circles(cfg, &a, cfg.arc("arc1")?, cfg.arc("arc2")?)?
        }
        FewKind::CpoParabolas => {
            let (a, q) = (cfg.real("a")?, cfg.real("q")?);
            positive("a", &a)?;
            let c1 = NumericCurve::standard(CurveParams::Parabola { a: a.clone() }, bits)?;
            let mut f2 = frame(bits, z3, ez, ey, ["-1", "0", "0"]);
            f2.origin = vec3(&zero, &q, &zero);
            let c2 = NumericCurve::new(CurveParams::Parabola { a: -&a }, f2)?;
            let lo = (&(&q / &(&two * &a)) + &one).max(&one);
            // ρ = u + (a u − q)² with u = s² + t²
            let turn = &(&q / &a) - &(&one / &(&two * &a.square()));
            let (p1, p2) = (c1.clone(), c2.clone());
            Plan {
                curves: (c1, c2),
                i1: (lo.clone(), &lo + &one),
                i2: (lo.clone(), &lo + &one),
                point1: Box::new(move |phi| p1.evaluate(&phi.sqrt()?)),
                point2: Box::new(move |phi| p2.evaluate(&phi.sqrt()?)),
                critical: vec![turn],
            }
        }
        FewKind::MatchingCurves => matching_curves(cfg)?,
    })
}

fn matching_curves(cfg: &FewDistanceConfig) -> Result<Plan, CoreError> {
    let bits = cfg.bits();
    let (a, b, m) = (cfg.real("a")?, cfg.real("b")?, cfg.real("m")?);
    let zero = Real::zero(bits);
    let one = Real::one(bits);
    let two = Real::from_i64(2, bits);
    let z3 = ["0", "0", "0"];
    let (ex, ey, ez) = (["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]);
    positive("a", &a)?;
    positive("m", &m)?;
    if m == one || b.is_zero() {
        return Err(CoreError::InvalidConfig("matching curves need m ≠ 1 and b ≠ 0".into()));
    }
    let s_max = (&a / &m).sqrt()?;
    let c1 = NumericCurve::standard(CurveParams::Ellipse { a: s_max.clone(), b: a.sqrt()? }, bits)?;
    let hyperbolic = m < one;
    let k = if hyperbolic { (&one - &m).sqrt()? } else { (&m - &one).sqrt()? };
    // semi-axis of the second curve along x
    let t_scale = (&(&b.abs() * &k.square()) / &m).sqrt()?;
    let (c2, i2) = if !hyperbolic {
        if b.is_negative() {
            return Err(CoreError::InvalidConfig("the second curve is empty for m > 1 and b < 0".into()));
        }
        let f = frame(bits, z3, ex, ez, ["0", "-1", "0"]);
        let c2 = NumericCurve::new(CurveParams::Ellipse { a: t_scale.clone(), b: b.sqrt()? }, f)?;
        (c2, (zero.clone(), &(&t_scale / &two) / &k))
    } else if b.is_positive() {
        let f = frame(bits, z3, ez, ex, ey);
        let c2 = NumericCurve::new(CurveParams::Hyperbola { a: b.sqrt()?, b: t_scale.clone() }, f)?;
        (c2, (zero.clone(), &t_scale / &k))
    } else {
        let f = frame(bits, z3, ex, ez, ["0", "-1", "0"]);
        let c2 = NumericCurve::new(CurveParams::Hyperbola { a: t_scale.clone(), b: (-&b).sqrt()? }, f)?;
        (c2, (&t_scale / &k, &(&t_scale * &two) / &k))
    };
    let i1 = (zero.clone(), &(&s_max / &two) * &k);
    let (k1, k2) = (k.clone(), k.clone());
    let (a1, m1) = (a.clone(), m.clone());
    let (b2, m2) = (b.clone(), m.clone());
    Ok(Plan {
        curves: (c1, c2),
        i1,
        i2,
        point1: Box::new(move |phi| {
            let s = phi / &k1;
            let y = (&a1 - &(&m1 * &s.square())).sqrt()?;
            Ok(vec3(&s, &y, &Real::zero(phi.bits())))
        }),
        point2: Box::new(move |phi| {
            let t = if hyperbolic { -&(phi * &k2) } else { phi * &k2 };
            let one = Real::one(phi.bits());
            let z = (&b2 - &(&(&m2 * &t.square()) / &(&m2 - &one))).sqrt()?;
            Ok(vec3(&t, &Real::zero(phi.bits()), &z))
        }),
        critical: vec![zero],
    })
}

/// Log-circles `(x−B)² + y² = D + A ln|x|` in the xy-plane and
/// `x² + z² = D2 + A ln|x−B|` in the xz-plane, with `φ1 = ln|s|`, `φ2 = ln|t|`.
fn log_circles(cfg: &FewDistanceConfig, a: &Real, arc1: Arc, arc2: Arc) -> Result<Plan, CoreError> {
    let bits = cfg.bits();
    let (b, d, d2) = (cfg.real("B")?, cfg.real("D")?, cfg.real("D2")?);
    let zero = Real::zero(bits);
    let mut f1 = Frame::standard(bits);
    f1.origin = vec3(&b, &zero, &zero);
    let c1 = NumericCurve::new(CurveParams::LogCircle { a: a.clone(), b: -&b, d: d.clone(), arc: arc1 }, f1)?;
    let f2 = frame(bits, ["0", "0", "0"], ["1", "0", "0"], ["0", "0", "1"], ["0", "-1", "0"]);
    let c2 = NumericCurve::new(CurveParams::LogCircle { a: a.clone(), b: b.clone(), d: d2.clone(), arc: arc2 }, f2)?;
    let (af, bf) = (a.to_f64(), b.to_f64());
    let empty = || CoreError::InvalidConfig("empty log-circle arc".into());
    // local x of the first curve is s − B; of the second, t + B
    let (lo1, hi1) = log_circle_domain(af, -bf, d.to_f64(), arc1).ok_or_else(empty)?;
    let (lo2, hi2) = log_circle_domain(af, bf, d2.to_f64(), arc2).ok_or_else(empty)?;
    let ln_range = |lo: f64, hi: f64| -> Result<(Real, Real), CoreError> {
        let (x, y) = (lo.abs().min(hi.abs()), lo.abs().max(hi.abs()));
        let shrink = (y - x) * 1e-6;
        // keep the progression in a range of moderate ratios
        let (x, y) = ((x + shrink).max(y / 8.0), y - shrink);
        if !(x > 0.0) || y <= x {
            return Err(empty());
        }
        Ok((Real::from_f64(x, bits).ln()?, Real::from_f64(y, bits).ln()?))
    };
    let i1 = ln_range(lo1 + bf, hi1 + bf)?;
    let i2 = ln_range(lo2 - bf, hi2 - bf)?;
    let sign = |arc: Arc, v: Real| if arc == Arc::Positive { v } else { -v };
    // ρ = const − 2w + A ln|w| with w = st turns at w = A/2
    let w_positive = arc1 == arc2;
    let critical = if !a.is_zero() && a.is_positive() == w_positive {
        vec![(&a.abs() / &Real::from_i64(2, bits)).ln()?]
    } else {
        vec![]
    };
    let (a1, a2) = (c1.clone(), c2.clone());
    let (b1, b2) = (b.clone(), b.clone());
    Ok(Plan {
        curves: (c1, c2),
        i1,
        i2,
        point1: Box::new(move |phi| a1.evaluate(&(&sign(arc1, phi.exp()) - &b1))),
        point2: Box::new(move |phi| a2.evaluate(&(&sign(arc2, phi.exp()) + &b2))),
        critical,
    })
}

#[derive(Debug, Clone)]
pub struct ConstructionOutput {
    pub config: FewDistanceConfig,
    pub curves: (NumericCurve, NumericCurve),
    pub p1: PointSet,
    pub p2: PointSet,
    pub predicted_distinct: usize,
    pub epsilon: Real,
    pub phi1: Vec<Real>,
    pub phi2: Vec<Real>,
    /// Largest point-on-curve residual over both sets.
    pub max_residual: Real,
    /// The sums `φ1 + φ2` pass a turning point of the outer function, so
    /// the count may fall below the prediction.
    pub crosses_turning_point: bool,
}

pub fn build_point_sets(cfg: &FewDistanceConfig, m: usize, n: usize) -> Result<ConstructionOutput, CoreError> {
    if m == 0 || n == 0 {
        return Err(CoreError::InvalidConfig("m and n must be at least 1".into()));
    }
    let bits = cfg.bits();
    let plan = plan(cfg)?;
    let two = Real::from_i64(2, bits);
    let len1 = &plan.i1.1 - &plan.i1.0;
    let len2 = &plan.i2.1 - &plan.i2.0;
    let epsilon = match &cfg.epsilon {
        Some(e) => Real::parse(e, bits)?,
        None => &len1.min(&len2) / &Real::from_i64(4 * (m + n) as i64, bits),
    };
    if !epsilon.is_positive() {
        return Err(CoreError::InvalidConfig("epsilon must be positive".into()));
    }
    let progression = |(lo, hi): &(Real, Real), k: usize| -> Result<Vec<Real>, CoreError> {
        let start = &(lo + hi) / &two;
        let last = &start + &(&epsilon * &Real::from_i64(k as i64 - 1, bits));
        if last >= *hi {
            return Err(CoreError::StepTooLarge(format!(
                "{k} steps of {} leave the interval [{}, {}]",
                epsilon.to_decimal(6),
                lo.to_decimal(6),
                hi.to_decimal(6)
            )));
        }
        Ok((0..k).map(|i| &start + &(&epsilon * &Real::from_i64(i as i64, bits))).collect())
    };
    let phi1 = progression(&plan.i1, m)?;
    let phi2 = progression(&plan.i2, n)?;
    let first = &phi1[0] + &phi2[0];
    let last = &phi1[m - 1] + &phi2[n - 1];
    let crosses_turning_point = plan.critical.iter().any(|c| first < *c && *c < last);
    let pts1: Vec<Vec3> = phi1.iter().map(|p| (plan.point1)(p)).collect::<Result<_, _>>()?;
    let pts2: Vec<Vec3> = phi2.iter().map(|p| (plan.point2)(p)).collect::<Result<_, _>>()?;
    let (c1, c2) = &plan.curves;
    let mut max_residual = Real::zero(bits);
    for p in &pts1 {
        max_residual = max_residual.max(&c1.implicit_residual(p));
    }
    for p in &pts2 {
        max_residual = max_residual.max(&c2.implicit_residual(p));
    }
    if max_residual > Real::from_f64(ON_CURVE_TOL, bits) {
        return Err(CoreError::Domain(format!("constructed point off its curve by {:e}", max_residual.to_f64())));
    }
    Ok(ConstructionOutput {
        config: cfg.clone(),
        curves: plan.curves,
        p1: PointSet::from_reals(pts1),
        p2: PointSet::from_reals(pts2),
        predicted_distinct: m + n - 1,
        epsilon,
        phi1,
        phi2,
        max_residual,
        crosses_turning_point,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub kind: FewKind,
    pub m: usize,
    pub n: usize,
    pub predicted: usize,
    pub actual: usize,
    pub within_bound: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_relative_gap: Option<f64>,
}

pub fn predicted_vs_actual(cfg: &FewDistanceConfig, m: usize, n: usize, mode: CensusMode) -> Result<BoundReport, CoreError> {
    let out = build_point_sets(cfg, m, n)?;
    let census = count_distinct(&out.p1, &out.p2, mode)?;
    Ok(BoundReport {
        kind: cfg.kind,
        m,
        n,
        predicted: out.predicted_distinct,
        actual: census.distinct_count,
        within_bound: census.distinct_count <= out.predicted_distinct,
        min_relative_gap: census.min_relative_gap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cpo_small_case_has_three_values() {
        let cfg = FewDistanceConfig::new(FewKind::CpoParabolas).with("q", "5").unwrap();
        let out = build_point_sets(&cfg, 2, 2).unwrap();
        let r = count_distinct(&out.p1, &out.p2, CensusMode::default()).unwrap();
        assert_eq!(r.distinct_count, 3);
    }

    #[test]
    fn single_pair_on_matching_ellipses() {
        let cfg = FewDistanceConfig::new(FewKind::MatchingCurves).with("m", "2").unwrap();
        let r = predicted_vs_actual(&cfg, 1, 1, CensusMode::default()).unwrap();
        assert_eq!(r.actual, 1);
    }

    #[test]
    fn oversized_step_is_rejected() {
        let mut cfg = FewDistanceConfig::new(FewKind::ParallelLines);
        cfg.epsilon = Some("1".into());
        assert!(matches!(build_point_sets(&cfg, 3, 3), Err(CoreError::StepTooLarge(_))));
    }

    #[test]
    fn unknown_parameter_is_rejected() {
        assert!(FewDistanceConfig::new(FewKind::CpoParabolas).with("m", "2").is_err());
    }
}
