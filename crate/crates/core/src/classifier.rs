//! Decides whether a pair of curves is one of the few-distance
//! configurations and, if so, finds a rigid motion to its canonical form.
//!
//! Predicates run exactly over the rationals when every input string is an
//! integer or a fraction `p/q` and both frames are exactly orthonormal.
//! Decimal literals are read as approximations, so any decimal input sends
//! the predicates to high precision with a tolerance. Canonical forms are always computed at
//! high precision.

use std::collections::BTreeMap;
use std::fmt;

use exact::Scalar;
use serde::{Deserialize, Serialize};

use crate::constructions::{FewDistanceConfig, FewKind};
use crate::curves::numeric::{cross, dot, norm2, vec3, vscale, vsub, Arc, CurveKind, CurveSpec, Frame, RigidMotion, Vec3};
use crate::error::CoreError;
use crate::real::{bits_for_digits, Real, DEFAULT_DIGITS};

pub const DEFAULT_TOL: f64 = 1e-9;

/// Digits used for canonical motions and parameters.
pub const OUTPUT_DIGITS: u32 = 40;

const REAL_FRAME_TOL: f64 = 1e-40;

/// Arithmetic for the predicates.
pub trait Field: Clone + fmt::Debug {
    fn int(&self, n: i64) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn is_zero(&self) -> bool;
    fn is_negative(&self) -> bool;
    fn magnitude(&self) -> f64;
}

impl Field for Real {
    fn int(&self, n: i64) -> Real {
        Real::from_i64(n, self.bits())
    }
    fn add(&self, o: &Real) -> Real {
        self + o
    }
    fn sub(&self, o: &Real) -> Real {
        self - o
    }
    fn mul(&self, o: &Real) -> Real {
        self * o
    }
    fn div(&self, o: &Real) -> Real {
        self / o
    }
    fn is_zero(&self) -> bool {
        Real::is_zero(self)
    }
    fn is_negative(&self) -> bool {
        Real::is_negative(self)
    }
    fn magnitude(&self) -> f64 {
        self.abs().to_f64()
    }
}

impl Field for Scalar {
    fn int(&self, n: i64) -> Scalar {
        Scalar::from_integer(n.into())
    }
    fn add(&self, o: &Scalar) -> Scalar {
        self + o
    }
    fn sub(&self, o: &Scalar) -> Scalar {
        self - o
    }
    fn mul(&self, o: &Scalar) -> Scalar {
        self * o
    }
    fn div(&self, o: &Scalar) -> Scalar {
        self / o
    }
    fn is_zero(&self) -> bool {
        *self == self.int(0)
    }
    fn is_negative(&self) -> bool {
        *self < self.int(0)
    }
    fn magnitude(&self) -> f64 {
        Real::from_scalar(self, 64).abs().to_f64()
    }
}

type V<T> = [T; 3];

fn gdot<T: Field>(a: &V<T>, b: &V<T>) -> T {
    a[0].mul(&b[0]).add(&a[1].mul(&b[1])).add(&a[2].mul(&b[2]))
}

fn gcross<T: Field>(a: &V<T>, b: &V<T>) -> V<T> {
    [
        a[1].mul(&b[2]).sub(&a[2].mul(&b[1])),
        a[2].mul(&b[0]).sub(&a[0].mul(&b[2])),
        a[0].mul(&b[1]).sub(&a[1].mul(&b[0])),
    ]
}

fn gsub<T: Field>(a: &V<T>, b: &V<T>) -> V<T> {
    [a[0].sub(&b[0]), a[1].sub(&b[1]), a[2].sub(&b[2])]
}

fn gadd<T: Field>(a: &V<T>, b: &V<T>) -> V<T> {
    [a[0].add(&b[0]), a[1].add(&b[1]), a[2].add(&b[2])]
}

fn gscale<T: Field>(a: &V<T>, k: &T) -> V<T> {
    [a[0].mul(k), a[1].mul(k), a[2].mul(k)]
}

/// A curve after normalization. Conic parameters are stored squared.
#[derive(Debug, Clone)]
struct Fc<T> {
    kind: CurveKind,
    o: V<T>,
    e1: V<T>,
    e2: V<T>,
    e3: V<T>,
    /// line: none; circle: r²; parabola: a; ellipse, hyperbola: a², b²;
    /// log-circle: A, B, D.
    p: Vec<T>,
    arc: Arc,
}

fn parse_curve<T: Field>(spec: &CurveSpec, num: &dyn Fn(&str) -> Result<T, CoreError>, tol: Option<f64>) -> Result<Fc<T>, CoreError> {
    let n = |k: &str| num(spec.param(k)?);
    let frame = match &spec.frame {
        Some(f) => {
            let v = |a: &[String; 3]| -> Result<V<T>, CoreError> { Ok([num(&a[0])?, num(&a[1])?, num(&a[2])?]) };
            [v(&f.origin)?, v(&f.e1)?, v(&f.e2)?, v(&f.e3)?]
        }
        None => {
            let (z, o) = (num("0")?, num("1")?);
            [
                [z.clone(), z.clone(), z.clone()],
                [o.clone(), z.clone(), z.clone()],
                [z.clone(), o.clone(), z.clone()],
                [z.clone(), z.clone(), o.clone()],
            ]
        }
    };
    let [o, e1, e2, e3] = frame;
    let es = [&e1, &e2, &e3];
    for i in 0..3 {
        for j in i..3 {
            let d = gdot(es[i], es[j]);
            let d = if i == j { d.sub(&d.int(1)) } else { d };
            let bad = match tol {
                None => !d.is_zero(),
                Some(t) => d.magnitude() > t,
            };
            if bad {
                return Err(CoreError::InvalidConfig("frame is not orthonormal".into()));
            }
        }
    }
    let positive = |name: &str, v: &T| -> Result<(), CoreError> {
        if v.is_zero() || v.is_negative() {
            return Err(CoreError::DegenerateConic(format!("{name} must be positive")));
        }
        Ok(())
    };
    let sq = |v: T| v.mul(&v);
    let mut kind = spec.kind;
    let mut arc = Arc::Positive;
    let (o, p) = match spec.kind {
        CurveKind::Line => (o, vec![]),
        CurveKind::Circle => {
            let r = n("r")?;
            positive("radius", &r)?;
            (o, vec![sq(r)])
        }
        CurveKind::Parabola => {
            let a = n("a")?;
            if a.is_zero() {
                return Err(CoreError::DegenerateConic("parabola with a = 0".into()));
            }
            (o, vec![a])
        }
        CurveKind::Ellipse | CurveKind::Hyperbola => {
            let (a, b) = (n("a")?, n("b")?);
            positive("a", &a)?;
            positive("b", &b)?;
            let (a2, b2) = (sq(a), sq(b));
            if spec.kind == CurveKind::Ellipse && a2.sub(&b2).is_zero() {
                kind = CurveKind::Circle;
                (o, vec![a2])
            } else {
                (o, vec![a2, b2])
            }
        }
        CurveKind::LogCircle => {
            let (a, b, d) = (n("A")?, n("B")?, n("D")?);
            arc = match spec.params.get("arc").map(String::as_str) {
                None | Some("positive") => Arc::Positive,
                Some("negative") => Arc::Negative,
                Some(other) => return Err(CoreError::InvalidConfig(format!("unknown arc `{other}`"))),
            };
            if a.is_zero() {
                positive("D of a log-circle with A = 0", &d)?;
                kind = CurveKind::Circle;
                (o, vec![d])
            } else {
                (o, vec![a, b, d])
            }
        }
    };
    Ok(Fc { kind, o, e1, e2, e3, p, arc })
}

/// Residual bookkeeping for one classification run.
struct Ctx {
    exact: bool,
    tol: f64,
    scale: f64,
    residuals: BTreeMap<String, f64>,
}

impl Ctx {
    /// Records `max |v|` scaled by `scale^deg` and tests it against zero.
    fn zero<T: Field>(&mut self, name: &str, vals: &[T], deg: i32) -> bool {
        let r = vals.iter().map(Field::magnitude).fold(0.0, f64::max) / self.scale.powi(deg);
        let e = self.residuals.entry(name.to_string()).or_insert(0.0);
        *e = e.max(r);
        if self.exact {
            vals.iter().all(Field::is_zero)
        } else {
            r <= self.tol
        }
    }

    fn nonzero<T: Field>(&mut self, name: &str, v: &T, deg: i32) -> bool {
        !self.zero(name, std::slice::from_ref(v), deg)
    }
}

/// Outcome of the predicates for one ordered pair.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Detected {
    kind: FewKind,
    swapped: bool,
}

fn is_conic(k: CurveKind) -> bool {
    !matches!(k, CurveKind::Line | CurveKind::LogCircle)
}

fn detect<T: Field>(c1: &Fc<T>, c2: &Fc<T>, ctx: &mut Ctx) -> Result<Option<Detected>, CoreError> {
    use CurveKind::*;
    let few = |kind| Ok(Some(Detected { kind, swapped: false }));
    let swap = |d: Option<Detected>| d.map(|d| Detected { swapped: !d.swapped, ..d });
    match (c1.kind, c2.kind) {
        (Line, Line) => {
            let (d1, d2) = (&c1.e1, &c2.e1);
            if ctx.zero("direction_cross", &gcross(d1, d2), 0) {
                return few(FewKind::ParallelLines);
            }
            let ortho = ctx.zero("direction_dot", &[gdot(d1, d2)], 0);
            if !ortho {
                return Ok(None);
            }
            let coplanar = ctx.zero("coplanarity", &[gdot(&gsub(&c2.o, &c1.o), &gcross(d1, d2))], 1);
            few(if coplanar { FewKind::OrthogonalLines } else { FewKind::LineOrthogonalPlaneCurve })
        }
        (Line, k) if is_conic(k) || k == LogCircle => {
            if ctx.zero("line_normal_cross", &gcross(&c1.e1, &c2.e3), 0) {
                return few(FewKind::LineOrthogonalPlaneCurve);
            }
            if k == Ellipse && cylinder(c1, c2, ctx) {
                return few(FewKind::LineCylinderCurve);
            }
            if k == LogCircle {
                return Err(CoreError::UnsupportedKind("a line with a log-circle outside an orthogonal plane".into()));
            }
            Ok(None)
        }
        (_, Line) => Ok(swap(detect(c2, c1, ctx)?)),
        (Circle, Circle) => {
            let aligned = [
                ctx.zero("normal_cross", &gcross(&c1.e3, &c2.e3), 0),
                ctx.zero("center_offset_cross", &gcross(&gsub(&c2.o, &c1.o), &c1.e3), 1),
            ];
            if aligned.iter().all(|&b| b) {
                return few(FewKind::AlignedCircles);
            }
            let perpendicular = [
                ctx.zero("center2_in_plane1", &[gdot(&gsub(&c2.o, &c1.o), &c1.e3)], 1),
                ctx.zero("center1_in_plane2", &[gdot(&gsub(&c1.o, &c2.o), &c2.e3)], 1),
                ctx.zero("normal_dot", &[gdot(&c1.e3, &c2.e3)], 0),
            ];
            if perpendicular.iter().all(|&b| b) {
                return few(FewKind::PerpendicularCircles);
            }
            Ok(None)
        }
        (Parabola, Parabola) => {
            let focus = |c: &Fc<T>| gscale(&c.e2, &c.p[0].int(1).div(&c.p[0].mul(&c.p[0].int(4))));
            let (f1, f2) = (focus(c1), focus(c2));
            let checks = [
                ctx.zero("focus_vectors_opposite", &gadd(&f1, &f2), 1),
                ctx.zero("vertex_offset_on_axis", &gcross(&gsub(&c2.o, &c1.o), &f1), 2),
                ctx.zero("normal_dot", &[gdot(&c1.e3, &c2.e3)], 0),
            ];
            if checks.iter().all(|&b| b) {
                return few(FewKind::CpoParabolas);
            }
            Ok(None)
        }
        (LogCircle, LogCircle) => {
            if matching_log_circles(c1, c2, ctx) {
                return few(FewKind::MatchingLogCircles);
            }
            Ok(None)
        }
        (LogCircle, Circle) | (Circle, LogCircle) => {
            // a circle is a log-circle with A = 0 and A ≠ 0 here
            ctx.residuals.insert("log_coefficient_difference".into(), 1.0);
            Ok(None)
        }
        (LogCircle, _) | (_, LogCircle) => {
            Err(CoreError::UnsupportedKind("a log-circle with a conic other than a circle".into()))
        }
        (a, b) if matches!(a, Ellipse | Hyperbola | Circle) && matches!(b, Ellipse | Hyperbola | Circle) => {
            // the first role needs an ellipse
            if a != Hyperbola && matching(c1, c2, ctx)? {
                return few(FewKind::MatchingCurves);
            }
            if b != Hyperbola && matching(c2, c1, ctx)? {
                return Ok(Some(Detected { kind: FewKind::MatchingCurves, swapped: true }));
            }
            Ok(None)
        }
        _ => Ok(None),
    }
}

fn cylinder<T: Field>(line: &Fc<T>, e: &Fc<T>, ctx: &mut Ctx) -> bool {
    let d = &line.e1;
    let (a2, b2) = (&e.p[0], &e.p[1]);
    let w0 = gsub(&e.o, &line.o);
    let wd = gdot(&w0, d);
    let (c1, c2) = (gdot(&e.e1, d), gdot(&e.e2, d));
    let one = wd.int(1);
    let checks = [
        ctx.nonzero("line_normal_dot", &gdot(&e.e3, d), 0),
        ctx.zero("center_on_line", &[gdot(&w0, &e.e1).sub(&wd.mul(&c1)), gdot(&w0, &e.e2).sub(&wd.mul(&c2))], 1),
        ctx.zero("tilt_along_principal_axis", &[c1.mul(&c2)], 0),
        ctx.zero(
            "equal_radii",
            &[a2.mul(&one.sub(&c1.mul(&c1))).sub(&b2.mul(&one.sub(&c2.mul(&c2))))],
            2,
        ),
    ];
    checks.iter().all(|&b| b)
}

/// `±(semi-axis along u)² / (semi-axis across u)²`, with `u` a principal axis.
fn sigma<T: Field>(c: &Fc<T>, u: &V<T>) -> T {
    let (p, q) = (gdot(u, &c.e1), gdot(u, &c.e2));
    let (p2, q2) = (p.mul(&p), q.mul(&q));
    let (a2, b2) = match c.kind {
        CurveKind::Circle => (c.p[0].clone(), c.p[0].clone()),
        _ => (c.p[0].clone(), c.p[1].clone()),
    };
    let along = p2.mul(&a2).add(&q2.mul(&b2));
    let across = q2.mul(&a2).add(&p2.mul(&b2));
    let s = along.div(&across);
    if c.kind == CurveKind::Hyperbola {
        s.int(0).sub(&s)
    } else {
        s
    }
}

/// Matching curves with `c1` an ellipse or circle.
fn matching<T: Field>(c1: &Fc<T>, c2: &Fc<T>, ctx: &mut Ctx) -> Result<bool, CoreError> {
    let centers = ctx.zero("center_difference", &gsub(&c1.o, &c2.o), 1);
    let perp = ctx.zero("normal_dot", &[gdot(&c1.e3, &c2.e3)], 0);
    if !(centers && perp) {
        return Ok(false);
    }
    let u = gcross(&c1.e3, &c2.e3);
    let principal = [
        ctx.zero("principal_axis_1", &[gdot(&u, &c1.e1).mul(&gdot(&u, &c1.e2))], 0),
        ctx.zero("principal_axis_2", &[gdot(&u, &c2.e1).mul(&gdot(&u, &c2.e2))], 0),
    ];
    if !principal.iter().all(|&b| b) {
        return Ok(false);
    }
    let s = sigma(c1, &u).add(&sigma(c2, &u));
    Ok(ctx.zero("sigma_sum_minus_one", &[s.sub(&s.int(1))], 0))
}

fn matching_log_circles<T: Field>(c1: &Fc<T>, c2: &Fc<T>, ctx: &mut Ctx) -> bool {
    let (b1, b2) = (&c1.p[1], &c2.p[1]);
    let singular1 = gadd(&c1.o, &gscale(&c1.e1, b1));
    let checks = [
        ctx.zero("log_coefficient_difference", &[c1.p[0].sub(&c2.p[0])], 2),
        ctx.zero("normal_dot", &[gdot(&c1.e3, &c2.e3)], 0),
        ctx.zero("axis_cross", &gcross(&c1.e1, &c2.e1), 0),
        ctx.zero("center_offset_cross", &gcross(&gsub(&c1.o, &c2.o), &c2.e1), 1),
        ctx.zero("center1_at_singular2", &[gdot(&gsub(&c1.o, &c2.o), &c2.e1).sub(b2)], 1),
        ctx.zero("singular1_at_center2", &gsub(&singular1, &c2.o), 1),
    ];
    checks.iter().all(|&b| b)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MotionSpec {
    /// Rows of the rotation; `x ↦ R x + t`.
    pub rotation: [[String; 3]; 3],
    pub translation: [String; 3],
}

impl MotionSpec {
    pub fn from_motion(m: &RigidMotion, digits: u32) -> MotionSpec {
        let s = |v: &Vec3| [v[0].to_decimal(digits), v[1].to_decimal(digits), v[2].to_decimal(digits)];
        MotionSpec { rotation: [s(&m.rotation[0]), s(&m.rotation[1]), s(&m.rotation[2])], translation: s(&m.translation) }
    }

    pub fn to_motion(&self, bits: usize) -> Result<RigidMotion, CoreError> {
        let v = |a: &[String; 3]| -> Result<Vec3, CoreError> {
            Ok([Real::parse(&a[0], bits)?, Real::parse(&a[1], bits)?, Real::parse(&a[2], bits)?])
        };
        Ok(RigidMotion {
            rotation: [v(&self.rotation[0])?, v(&self.rotation[1])?, v(&self.rotation[2])?],
            translation: v(&self.translation)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Canonical {
    /// Takes the input curves to the canonical position.
    pub motion: MotionSpec,
    /// Construction parameters of the canonical form.
    pub params: BTreeMap<String, String>,
    /// Further invariants that the construction does not take.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub extra: BTreeMap<String, String>,
    /// The second input curve plays the first role.
    pub roles_swapped: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum Verdict {
    Few { kind: FewKind, canonical: Canonical },
    Many,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    #[serde(flatten)]
    pub verdict: Verdict,
    /// Predicates were decided over the rationals.
    pub exact: bool,
    /// Scaled predicate residuals, by name.
    pub residuals: BTreeMap<String, f64>,
}

impl Classification {
    pub fn kind(&self) -> Option<FewKind> {
        match &self.verdict {
            Verdict::Few { kind, .. } => Some(*kind),
            Verdict::Many => None,
        }
    }

    /// The construction for the canonical form, when it takes these parameters.
    pub fn to_config(&self) -> Option<FewDistanceConfig> {
        let Verdict::Few { kind, canonical } = &self.verdict else { return None };
        let mut cfg = FewDistanceConfig::new(*kind);
        for (k, _) in kind.defaults() {
            cfg.params.insert(k.to_string(), canonical.params.get(*k)?.clone());
        }
        Some(cfg)
    }
}

fn all_rational(spec: &CurveSpec) -> bool {
    let q = |s: &String| !s.contains(['.', 'e', 'E']) && exact::parse_scalar(s).is_ok();
    spec.params.iter().all(|(k, v)| k == "arc" || q(v))
        && spec
            .frame
            .as_ref()
            .map_or(true, |f| [&f.origin, &f.e1, &f.e2, &f.e3].iter().all(|v| v.iter().all(q)))
}

fn scale_of(specs: [&CurveSpec; 2]) -> f64 {
    let mut s: f64 = 1.0;
    for spec in specs {
        for (k, v) in &spec.params {
            if k != "arc" {
                if let Ok(x) = Real::parse(v, 64) {
                    s = s.max(x.to_f64().abs());
                }
            }
        }
        if let Some(f) = &spec.frame {
            for v in &f.origin {
                if let Ok(x) = Real::parse(v, 64) {
                    s = s.max(x.to_f64().abs());
                }
            }
        }
    }
    s
}

pub fn classify(c1: &CurveSpec, c2: &CurveSpec, tol: f64) -> Result<Classification, CoreError> {
    let bits = bits_for_digits(DEFAULT_DIGITS);
    let real = move |s: &str| Real::parse(s, bits);
    let exact_frames = all_rational(c1) && all_rational(c2) && {
        let q = |s: &str| exact::parse_scalar(s).map_err(CoreError::from);
        parse_curve::<Scalar>(c1, &q, None).is_ok() && parse_curve::<Scalar>(c2, &q, None).is_ok()
    };
    let real_tol = if exact_frames { REAL_FRAME_TOL.max(tol) } else { tol };
    let r1: Fc<Real> = parse_curve(c1, &real, Some(real_tol))?;
    let r2: Fc<Real> = parse_curve(c2, &real, Some(real_tol))?;
    let mut ctx = Ctx { exact: false, tol, scale: scale_of([c1, c2]), residuals: BTreeMap::new() };
    let found = if exact_frames {
        let q = |s: &str| exact::parse_scalar(s).map_err(CoreError::from);
        let e1: Fc<Scalar> = parse_curve(c1, &q, None)?;
        let e2: Fc<Scalar> = parse_curve(c2, &q, None)?;
        ctx.exact = true;
        detect(&e1, &e2, &mut ctx)?
    } else {
        detect(&r1, &r2, &mut ctx)?
    };
    let verdict = match found {
        None => Verdict::Many,
        Some(d) => {
            let (a, b) = if d.swapped { (&r2, &r1) } else { (&r1, &r2) };
            let canonical = canonicalize(d, a, b)?;
            Verdict::Few { kind: d.kind, canonical }
        }
    };
    Ok(Classification { verdict, exact: ctx.exact, residuals: ctx.residuals })
}

// ---- canonical forms at high precision ----

fn unit(v: &Vec3) -> Result<Vec3, CoreError> {
    let n = norm2(v).sqrt()?;
    if n.is_zero() {
        return Err(CoreError::DegenerateConic("zero direction".into()));
    }
    Ok(vscale(v, &(&Real::one(n.bits()) / &n)))
}

/// Any unit vector orthogonal to `v`.
fn orthogonal_to(v: &Vec3) -> Result<Vec3, CoreError> {
    let bits = v[0].bits();
    let (o, l) = (Real::zero(bits), Real::one(bits));
    let axes = [vec3(&l, &o, &o), vec3(&o, &l, &o), vec3(&o, &o, &l)];
    let best = axes
        .iter()
        .min_by(|a, b| dot(a, v).abs().partial_cmp(&dot(b, v).abs()).expect("finite"))
        .expect("three axes");
    unit(&cross(v, best))
}

fn motion_to(origin: Vec3, ex: Vec3, ey: Vec3, ez: Vec3) -> RigidMotion {
    RigidMotion::to_frame(&Frame { origin, e1: ex, e2: ey, e3: ez })
}

fn sqrt_str(v: &Real) -> Result<String, CoreError> {
    Ok(v.abs().sqrt()?.to_decimal(OUTPUT_DIGITS))
}

fn canonicalize(d: Detected, c1: &Fc<Real>, c2: &Fc<Real>) -> Result<Canonical, CoreError> {
    let bits = c1.o[0].bits();
    let s = |v: &Real| v.to_decimal(OUTPUT_DIGITS);
    let mut params = BTreeMap::new();
    let mut extra = BTreeMap::new();
    let motion = match d.kind {
        FewKind::ParallelLines => {
            let dz = c1.e1.clone();
            let w = vsub(&c2.o, &c1.o);
            let w = vsub(&w, &vscale(&dz, &dot(&w, &dz)));
            let gap2 = norm2(&w);
            let ex = if gap2.is_zero() { orthogonal_to(&dz)? } else { unit(&w)? };
            params.insert("gap".into(), sqrt_str(&gap2)?);
            motion_to(c1.o.clone(), ex.clone(), cross(&dz, &ex), dz)
        }
        FewKind::OrthogonalLines => {
            let (d1, d2) = (&c1.e1, &c2.e1);
            let p = crate::curves::numeric::vadd(&c1.o, &vscale(d1, &dot(&vsub(&c2.o, &c1.o), d1)));
            motion_to(p, d1.clone(), d2.clone(), cross(d1, d2))
        }
        FewKind::LineOrthogonalPlaneCurve => {
            // the second curve lies in a plane normal to the line
            let dz = c1.e1.clone();
            let (ex, ey) = if c2.kind == CurveKind::Line {
                let ex = c2.e1.clone();
                (ex.clone(), cross(&dz, &ex))
            } else {
                let sgn = if dot(&c2.e3, &dz).is_negative() { -Real::one(bits) } else { Real::one(bits) };
                (c2.e1.clone(), vscale(&c2.e2, &sgn))
            };
            let m = motion_to(c1.o.clone(), ex, ey, dz);
            let local = m.apply(&c2.o);
            params.insert("h".into(), s(&local[2]));
            extra.insert("x0".into(), s(&local[0]));
            extra.insert("y0".into(), s(&local[1]));
            match c2.kind {
                CurveKind::Ellipse => {
                    params.insert("a".into(), sqrt_str(&c2.p[0])?);
                    params.insert("b".into(), sqrt_str(&c2.p[1])?);
                }
                CurveKind::Circle => {
                    extra.insert("r".into(), sqrt_str(&c2.p[0])?);
                }
                CurveKind::Parabola => {
                    extra.insert("a".into(), s(&c2.p[0]));
                }
                CurveKind::Hyperbola => {
                    extra.insert("a".into(), sqrt_str(&c2.p[0])?);
                    extra.insert("b".into(), sqrt_str(&c2.p[1])?);
                }
                _ => {}
            }
            extra.insert("curve".into(), c2.kind.name().into());
            m
        }
        FewKind::LineCylinderCurve => {
            let mut dl = c1.e1.clone();
            if dot(&dl, &c2.e3).is_negative() {
                dl = vscale(&dl, &-Real::one(bits));
            }
            let (ex, semi2_x, semi2_y) = if dot(&c2.e1, &dl).abs() >= dot(&c2.e2, &dl).abs() {
                (c2.e1.clone(), c2.p[0].clone(), c2.p[1].clone())
            } else {
                (c2.e2.clone(), c2.p[1].clone(), c2.p[0].clone())
            };
            let ex = if dot(&ex, &dl).is_negative() { vscale(&ex, &-Real::one(bits)) } else { ex };
            let ez = c2.e3.clone();
            let mu = &dot(&dl, &ex) / &dot(&dl, &ez);
            params.insert("mu".into(), s(&mu));
            params.insert("D".into(), s(&semi2_y));
            extra.insert("major_semi_axis_squared".into(), s(&semi2_x));
            motion_to(c2.o.clone(), ex.clone(), cross(&ez, &ex), ez)
        }
        FewKind::AlignedCircles => {
            let mut ez = c1.e3.clone();
            let w = vsub(&c2.o, &c1.o);
            if dot(&w, &ez).is_negative() {
                ez = vscale(&ez, &-Real::one(bits));
            }
            let ex = c1.e1.clone();
            params.insert("r1".into(), sqrt_str(&c1.p[0])?);
            params.insert("r2".into(), sqrt_str(&c2.p[0])?);
            params.insert("gap".into(), s(&dot(&w, &ez)));
            motion_to(c1.o.clone(), ex.clone(), cross(&ez, &ex), ez)
        }
        FewKind::PerpendicularCircles => {
            let ez = c1.e3.clone();
            let ex = cross(&c1.e3, &c2.e3);
            params.insert("B".into(), s(&dot(&vsub(&c1.o, &c2.o), &ex)));
            params.insert("D".into(), s(&c1.p[0]));
            params.insert("D2".into(), s(&c2.p[0]));
            motion_to(c2.o.clone(), ex.clone(), cross(&ez, &ex), ez)
        }
        FewKind::CpoParabolas => {
            let a = &c1.p[0];
            let ey = if a.is_negative() { vscale(&c1.e2, &-Real::one(bits)) } else { c1.e2.clone() };
            let ez = c1.e3.clone();
            let ex = cross(&ey, &ez);
            params.insert("a".into(), s(&a.abs()));
            params.insert("q".into(), s(&dot(&vsub(&c2.o, &c1.o), &ey)));
            motion_to(c1.o.clone(), ex, ey, ez)
        }
        FewKind::MatchingCurves => {
            let u = cross(&c1.e3, &c2.e3);
            let ez = c1.e3.clone();
            let ey = cross(&ez, &u);
            let m = &Real::one(bits) / &sigma(c1, &u);
            // squared semi-axis of c1 across u
            let along1 = dot(&u, &c1.e1).abs() >= dot(&u, &c1.e2).abs();
            let a_perp = match c1.kind {
                CurveKind::Circle => c1.p[0].clone(),
                _ if along1 => c1.p[1].clone(),
                _ => c1.p[0].clone(),
            };
            let across_is_e1 = dot(&u, &c2.e1).abs() < dot(&u, &c2.e2).abs();
            let b = match c2.kind {
                CurveKind::Circle => c2.p[0].clone(),
                CurveKind::Ellipse => {
                    if across_is_e1 {
                        c2.p[0].clone()
                    } else {
                        c2.p[1].clone()
                    }
                }
                _ => {
                    // transverse axis across u gives b > 0
                    if across_is_e1 {
                        c2.p[0].clone()
                    } else {
                        -&c2.p[1]
                    }
                }
            };
            params.insert("a".into(), s(&a_perp));
            params.insert("b".into(), s(&b));
            params.insert("m".into(), s(&m));
            motion_to(c1.o.clone(), u, ey, ez)
        }
        FewKind::MatchingLogCircles => {
            let ex = c2.e1.clone();
            let ez = c1.e3.clone();
            let flipped = dot(&c1.e1, &ex).is_negative();
            let arc1 = match (c1.arc, flipped) {
                (Arc::Positive, false) | (Arc::Negative, true) => "positive",
                _ => "negative",
            };
            params.insert("A".into(), s(&c1.p[0]));
            params.insert("B".into(), s(&c2.p[1]));
            params.insert("D".into(), s(&c1.p[2]));
            params.insert("D2".into(), s(&c2.p[2]));
            params.insert("arc1".into(), arc1.into());
            params.insert("arc2".into(), if c2.arc == Arc::Positive { "positive" } else { "negative" }.into());
            motion_to(c2.o.clone(), ex.clone(), cross(&ez, &ex), ez)
        }
    };
    Ok(Canonical { motion: MotionSpec::from_motion(&motion, OUTPUT_DIGITS), params, extra, roles_swapped: d.swapped })
}

/// Exact residuals for the canonical line and ellipse in a cylinder, with
/// `μ` and `D` symbolic. The ellipse is `x²/(μ²+1) + y² = D` in `z = 0`
/// and the line runs along `(μ, 0, 1)`. Both residuals vanish identically:
///
/// * `radius`: squared distance from `(x, y, 0)` to the line minus `D`;
/// * `predicate`: `a²(1 − (e1·d)²) − b²(1 − (e2·d)²)` with `a² = D(μ²+1)`, `b² = D`.
///
/// The point's first coordinate is the table's `s`.
pub fn verify_ellipse_in_cylinder() -> Result<Vec<(&'static str, exact::RationalFunction)>, CoreError> {
    use exact::{RationalFunction as Rf, SymbolTable};
    let table = SymbolTable::curve(&["mu", "D"])?;
    let var = |n: &str| Rf::var_named(&table, n);
    let (mu, d, x) = (var("mu")?, var("D")?, var("s")?);
    let one = Rf::one(&table);
    let k = &(&mu * &mu) + &one;
    let y2 = &d - &(&(&x * &x) / &k);
    let p2 = &(&x * &x) + &y2;
    let pv = &mu * &x;
    let dist2 = &p2 - &(&(&pv * &pv) / &k);
    let radius = &dist2 - &d;
    let a2 = &d * &k;
    let c2 = &(&mu * &mu) / &k;
    let predicate = &(&a2 * &(&one - &c2)) - &d;
    Ok(vec![("radius", radius.canonicalize()), ("predicate", predicate.canonicalize())])
}

/// The same residuals with `μ` and `D` fixed to nonzero rationals.
pub fn verify_ellipse_in_cylinder_at(
    mu: &Scalar,
    d: &Scalar,
) -> Result<Vec<(&'static str, exact::RationalFunction)>, CoreError> {
    let zero = Scalar::from_integer(0.into());
    if *mu == zero || *d == zero {
        return Err(CoreError::InvalidConfig("μ and D must be nonzero".into()));
    }
    let mut out = Vec::new();
    for (name, r) in verify_ellipse_in_cylinder()? {
        let t = r.table().clone();
        let fixed = r.evaluate_partial(&[(t.require("mu")?, mu.clone()), (t.require("D")?, d.clone())])?;
        out.push((name, fixed.canonicalize()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(json: &str) -> CurveSpec {
        serde_json::from_str(json).unwrap()
    }

    #[test]
    fn parallel_lines_exact() {
        let l1 = spec(r#"{"kind":"line"}"#);
        let l2 = spec(
            r#"{"kind":"line","frame":{"origin":["0","3","0"],"e1":["1","0","0"],"e2":["0","1","0"],"e3":["0","0","1"]}}"#,
        );
        let c = classify(&l1, &l2, DEFAULT_TOL).unwrap();
        assert!(c.exact);
        assert_eq!(c.kind(), Some(FewKind::ParallelLines));
    }

    #[test]
    fn generic_ellipses_are_many() {
        let e1 = spec(r#"{"kind":"ellipse","params":{"a":"2","b":"1"}}"#);
        let e2 = spec(
            r#"{"kind":"ellipse","params":{"a":"3","b":"1"},"frame":{"origin":["1","0","0"],"e1":["1","0","0"],"e2":["0","0","1"],"e3":["0","-1","0"]}}"#,
        );
        assert_eq!(classify(&e1, &e2, DEFAULT_TOL).unwrap().kind(), None);
    }

    #[test]
    fn cylinder_identity_is_zero() {
        for (_, r) in verify_ellipse_in_cylinder().unwrap() {
            assert!(r.is_zero());
        }
        let q = |n: i64| Scalar::from_integer(n.into());
        for (mu, d) in [(q(1), q(1)), (q(3), q(2))] {
            assert!(verify_ellipse_in_cylinder_at(&mu, &d).unwrap().iter().all(|(_, r)| r.is_zero()));
        }
    }
}
