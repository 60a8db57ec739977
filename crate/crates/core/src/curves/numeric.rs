//! Curves of the named families placed in R³ by an orthonormal frame,
//! evaluated at high precision.
//!
//! Each kind has a local equation in the frame's `(e1, e2)` plane:
//!
//! | kind       | local point at `u`                         | equation                      |
//! |------------|--------------------------------------------|-------------------------------|
//! | line       | `(u, 0, 0)`                                | `y = z = 0`                   |
//! | circle     | `(r cos 2πu, r sin 2πu, 0)`                | `x² + y² = r²`                |
//! | parabola   | `(u, a u², 0)`                             | `y = a x²`                    |
//! | ellipse    | `(a cos 2πu, b sin 2πu, 0)`                | `x²/a² + y²/b² = 1`           |
//! | hyperbola  | `(a (u²+1)/2u, b (1−u²)/2u, 0)`            | `x²/a² − y²/b² = 1`           |
//! | log-circle | `(u, √(D + A ln|u−B| − u²), 0)`            | `x² + y² = D + A ln|x − B|`   |

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::CoreError;
use crate::real::Real;

pub type Vec3 = [Real; 3];

pub fn vec3(x: &Real, y: &Real, z: &Real) -> Vec3 {
    [x.clone(), y.clone(), z.clone()]
}

pub fn vzero(bits: usize) -> Vec3 {
    [Real::zero(bits), Real::zero(bits), Real::zero(bits)]
}

pub fn vadd(a: &Vec3, b: &Vec3) -> Vec3 {
    [&a[0] + &b[0], &a[1] + &b[1], &a[2] + &b[2]]
}

pub fn vsub(a: &Vec3, b: &Vec3) -> Vec3 {
    [&a[0] - &b[0], &a[1] - &b[1], &a[2] - &b[2]]
}

pub fn vscale(a: &Vec3, k: &Real) -> Vec3 {
    [&a[0] * k, &a[1] * k, &a[2] * k]
}

pub fn dot(a: &Vec3, b: &Vec3) -> Real {
    &(&(&a[0] * &b[0]) + &(&a[1] * &b[1])) + &(&a[2] * &b[2])
}

pub fn cross(a: &Vec3, b: &Vec3) -> Vec3 {
    [
        &(&a[1] * &b[2]) - &(&a[2] * &b[1]),
        &(&a[2] * &b[0]) - &(&a[0] * &b[2]),
        &(&a[0] * &b[1]) - &(&a[1] * &b[0]),
    ]
}

pub fn norm2(a: &Vec3) -> Real {
    dot(a, a)
}

pub fn dist2(a: &Vec3, b: &Vec3) -> Real {
    norm2(&vsub(a, b))
}

fn max_abs(vals: &[Real]) -> Real {
    vals.iter().fold(Real::zero(vals[0].bits()), |m, v| m.max(&v.abs()))
}

/// Tolerance on `|eᵢ·eⱼ − δᵢⱼ|` for a frame to count as orthonormal.
pub const FRAME_TOL: f64 = 1e-30;

/// Origin plus an orthonormal triad.
#[derive(Debug, Clone)]
pub struct Frame {
    pub origin: Vec3,
    pub e1: Vec3,
    pub e2: Vec3,
    pub e3: Vec3,
}

impl Frame {
    pub fn standard(bits: usize) -> Frame {
        let (o, l) = (Real::zero(bits), Real::one(bits));
        Frame {
            origin: vzero(bits),
            e1: vec3(&l, &o, &o),
            e2: vec3(&o, &l, &o),
            e3: vec3(&o, &o, &l),
        }
    }

    pub fn new(origin: Vec3, e1: Vec3, e2: Vec3, e3: Vec3) -> Result<Frame, CoreError> {
        let f = Frame { origin, e1, e2, e3 };
        let defect = f.orthonormality_defect();
        if defect > Real::from_f64(FRAME_TOL, defect.bits()) {
            return Err(CoreError::InvalidConfig(format!(
                "frame is not orthonormal (defect {:e})",
                defect.to_f64()
            )));
        }
        Ok(f)
    }

    /// `max |eᵢ·eⱼ − δᵢⱼ|`.
    pub fn orthonormality_defect(&self) -> Real {
        let es = [&self.e1, &self.e2, &self.e3];
        let one = Real::one(self.e1[0].bits());
        let mut vals = Vec::with_capacity(6);
        for i in 0..3 {
            for j in i..3 {
                let d = dot(es[i], es[j]);
                vals.push(if i == j { &d - &one } else { d });
            }
        }
        max_abs(&vals)
    }

    pub fn to_world(&self, local: &Vec3) -> Vec3 {
        let mut p = self.origin.clone();
        for (e, c) in [&self.e1, &self.e2, &self.e3].into_iter().zip(local) {
            p = vadd(&p, &vscale(e, c));
        }
        p
    }

    pub fn to_local(&self, p: &Vec3) -> Vec3 {
        let w = vsub(p, &self.origin);
        [dot(&w, &self.e1), dot(&w, &self.e2), dot(&w, &self.e3)]
    }

    pub fn transformed(&self, m: &RigidMotion) -> Frame {
        Frame {
            origin: m.apply(&self.origin),
            e1: m.rotate(&self.e1),
            e2: m.rotate(&self.e2),
            e3: m.rotate(&self.e3),
        }
    }
}

/// `p ↦ R p + t`, with `R` given by rows.
#[derive(Debug, Clone)]
pub struct RigidMotion {
    pub rotation: [Vec3; 3],
    pub translation: Vec3,
}

impl RigidMotion {
    pub fn identity(bits: usize) -> RigidMotion {
        let f = Frame::standard(bits);
        RigidMotion { rotation: [f.e1, f.e2, f.e3], translation: vzero(bits) }
    }

    pub fn rotate(&self, v: &Vec3) -> Vec3 {
        [dot(&self.rotation[0], v), dot(&self.rotation[1], v), dot(&self.rotation[2], v)]
    }

    pub fn apply(&self, p: &Vec3) -> Vec3 {
        vadd(&self.rotate(p), &self.translation)
    }

    /// The motion taking world coordinates to the frame's local coordinates.
    pub fn to_frame(frame: &Frame) -> RigidMotion {
        let rotation = [frame.e1.clone(), frame.e2.clone(), frame.e3.clone()];
        let m = RigidMotion { rotation, translation: vzero(frame.e1[0].bits()) };
        let t = m.rotate(&frame.origin);
        RigidMotion { translation: [-&t[0], -&t[1], -&t[2]], ..m }
    }

    pub fn inverse(&self) -> RigidMotion {
        let r = &self.rotation;
        let rotation = [
            vec3(&r[0][0], &r[1][0], &r[2][0]),
            vec3(&r[0][1], &r[1][1], &r[2][1]),
            vec3(&r[0][2], &r[1][2], &r[2][2]),
        ];
        let m = RigidMotion { rotation, translation: vzero(r[0][0].bits()) };
        let t = m.rotate(&self.translation);
        RigidMotion { translation: [-&t[0], -&t[1], -&t[2]], ..m }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &RigidMotion) -> RigidMotion {
        let cols: Vec<Vec3> = (0..3)
            .map(|j| self.rotate(&vec3(&other.rotation[0][j], &other.rotation[1][j], &other.rotation[2][j])))
            .collect();
        let rotation = [0, 1, 2].map(|i| vec3(&cols[0][i], &cols[1][i], &cols[2][i]));
        RigidMotion { rotation, translation: self.apply(&other.translation) }
    }

    /// Uniform random rotation (normalized quaternion) and a translation
    /// with coordinates in `[-spread, spread]`.
    pub fn random<R: Rng>(rng: &mut R, spread: f64, bits: usize) -> RigidMotion {
        let q: Vec<Real> = loop {
            let q: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let n: f64 = q.iter().map(|x| x * x).sum();
            if n > 0.01 && n <= 1.0 {
                break q.into_iter().map(|x| Real::from_f64(x, bits)).collect();
            }
        };
        let n = q.iter().fold(Real::zero(bits), |acc, x| &acc + &x.square()).sqrt().expect("positive norm");
        let [w, x, y, z] = [0, 1, 2, 3].map(|i| &q[i] / &n);
        let two = Real::from_i64(2, bits);
        let one = Real::one(bits);
        let rotation = [
            vec3(
                &(&one - &(&two * &(&y.square() + &z.square()))),
                &(&two * &(&(&x * &y) - &(&w * &z))),
                &(&two * &(&(&x * &z) + &(&w * &y))),
            ),
            vec3(
                &(&two * &(&(&x * &y) + &(&w * &z))),
                &(&one - &(&two * &(&x.square() + &z.square()))),
                &(&two * &(&(&y * &z) - &(&w * &x))),
            ),
            vec3(
                &(&two * &(&(&x * &z) - &(&w * &y))),
                &(&two * &(&(&y * &z) + &(&w * &x))),
                &(&one - &(&two * &(&x.square() + &y.square()))),
            ),
        ];
        let translation = [0, 1, 2].map(|_| Real::from_f64(rng.gen_range(-spread..spread), bits));
        RigidMotion { rotation, translation }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CurveKind {
    Line,
    Circle,
    Parabola,
    Ellipse,
    Hyperbola,
    LogCircle,
}

impl CurveKind {
    pub fn name(self) -> &'static str {
        match self {
            CurveKind::Line => "line",
            CurveKind::Circle => "circle",
            CurveKind::Parabola => "parabola",
            CurveKind::Ellipse => "ellipse",
            CurveKind::Hyperbola => "hyperbola",
            CurveKind::LogCircle => "log-circle",
        }
    }
}

impl std::str::FromStr for CurveKind {
    type Err = CoreError;
    fn from_str(s: &str) -> Result<CurveKind, CoreError> {
        Ok(match s {
            "line" => CurveKind::Line,
            "circle" => CurveKind::Circle,
            "parabola" => CurveKind::Parabola,
            "ellipse" => CurveKind::Ellipse,
            "hyperbola" => CurveKind::Hyperbola,
            "log-circle" | "logcircle" => CurveKind::LogCircle,
            other => return Err(CoreError::UnsupportedKind(other.to_string())),
        })
    }
}

/// Which side of the singular line `x = B` a log-circle arc lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Arc {
    Positive,
    Negative,
}

#[derive(Debug, Clone)]
pub enum CurveParams {
    Line,
    Circle { r: Real },
    Parabola { a: Real },
    Ellipse { a: Real, b: Real },
    Hyperbola { a: Real, b: Real },
    LogCircle { a: Real, b: Real, d: Real, arc: Arc },
}

impl CurveParams {
    pub fn kind(&self) -> CurveKind {
        match self {
            CurveParams::Line => CurveKind::Line,
            CurveParams::Circle { .. } => CurveKind::Circle,
            CurveParams::Parabola { .. } => CurveKind::Parabola,
            CurveParams::Ellipse { .. } => CurveKind::Ellipse,
            CurveParams::Hyperbola { .. } => CurveKind::Hyperbola,
            CurveParams::LogCircle { .. } => CurveKind::LogCircle,
        }
    }
}

#[derive(Debug, Clone)]
pub struct NumericCurve {
    pub params: CurveParams,
    pub frame: Frame,
}

impl NumericCurve {
    pub fn new(params: CurveParams, frame: Frame) -> Result<NumericCurve, CoreError> {
        let positive = |name: &str, v: &Real| {
            if v.is_positive() {
                Ok(())
            } else {
                Err(CoreError::DegenerateConic(format!("{name} must be positive")))
            }
        };
        match &params {
            CurveParams::Line => {}
            CurveParams::Circle { r } => positive("radius", r)?,
            CurveParams::Parabola { a } => {
                if a.is_zero() {
                    return Err(CoreError::DegenerateConic("parabola with a = 0".into()));
                }
            }
            CurveParams::Ellipse { a, b } | CurveParams::Hyperbola { a, b } => {
                positive("a", a)?;
                positive("b", b)?;
            }
            CurveParams::LogCircle { .. } => {}
        }
        Ok(NumericCurve { params, frame })
    }

    /// Curve in the standard frame.
    pub fn standard(params: CurveParams, bits: usize) -> Result<NumericCurve, CoreError> {
        NumericCurve::new(params, Frame::standard(bits))
    }

    pub fn kind(&self) -> CurveKind {
        self.params.kind()
    }

    pub fn bits(&self) -> usize {
        self.frame.origin[0].bits()
    }

    pub fn local_point(&self, u: &Real) -> Result<Vec3, CoreError> {
        let bits = u.bits();
        let zero = Real::zero(bits);
        let two = Real::from_i64(2, bits);
        let turn = || &(&two * &Real::pi(bits)) * u;
        Ok(match &self.params {
            CurveParams::Line => vec3(u, &zero, &zero),
            CurveParams::Circle { r } => {
                let th = turn();
                vec3(&(r * &th.cos()), &(r * &th.sin()), &zero)
            }
            CurveParams::Parabola { a } => vec3(u, &(a * &u.square()), &zero),
            CurveParams::Ellipse { a, b } => {
                let th = turn();
                vec3(&(a * &th.cos()), &(b * &th.sin()), &zero)
            }
            CurveParams::Hyperbola { a, b } => {
                if u.is_zero() {
                    return Err(CoreError::Domain("hyperbola parameter 0".into()));
                }
                let one = Real::one(bits);
                let den = &two * u;
                let u2 = u.square();
                vec3(&(a * &(&(&u2 + &one) / &den)), &(b * &(&(&one - &u2) / &den)), &zero)
            }
            CurveParams::LogCircle { a, b, d, arc } => {
                let w = u - b;
                let w = match arc {
                    Arc::Positive if w.is_positive() => w,
                    Arc::Negative if w.is_negative() => -w,
                    _ => return Err(CoreError::Domain(format!("x = {} is off the {arc:?} arc", u.to_f64()))),
                };
                let rad = &(d + &(a * &w.ln()?)) - &u.square();
                if rad.is_negative() {
                    return Err(CoreError::Domain(format!("x = {} is outside the log-circle", u.to_f64())));
                }
                vec3(u, &rad.sqrt()?, &zero)
            }
        })
    }

    pub fn evaluate(&self, u: &Real) -> Result<Vec3, CoreError> {
        Ok(self.frame.to_world(&self.local_point(u)?))
    }

    /// Largest absolute residual of the local defining equations at `p`.
    pub fn implicit_residual(&self, p: &Vec3) -> Real {
        let [x, y, z] = self.frame.to_local(p);
        let one = Real::one(x.bits());
        let main = match &self.params {
            CurveParams::Line => y.clone(),
            CurveParams::Circle { r } => &(&x.square() + &y.square()) - &r.square(),
            CurveParams::Parabola { a } => &y - &(a * &x.square()),
            CurveParams::Ellipse { a, b } => &(&(&x.square() / &a.square()) + &(&y.square() / &b.square())) - &one,
            CurveParams::Hyperbola { a, b } => &(&(&x.square() / &a.square()) - &(&y.square() / &b.square())) - &one,
            CurveParams::LogCircle { a, b, d, .. } => match (&x - b).abs().ln() {
                Ok(l) => &(&x.square() + &y.square()) - &(d + &(a * &l)),
                Err(_) => Real::from_f64(f64::INFINITY, x.bits()),
            },
        };
        main.abs().max(&z.abs())
    }

    pub fn apply_motion(&self, m: &RigidMotion) -> NumericCurve {
        NumericCurve { params: self.params.clone(), frame: self.frame.transformed(m) }
    }

    /// Parameter interval used for uniform sampling.
    pub fn sample_domain(&self) -> Result<(f64, f64), CoreError> {
        Ok(match &self.params {
            CurveParams::Line | CurveParams::Parabola { .. } => (-1.0, 1.0),
            CurveParams::Circle { .. } | CurveParams::Ellipse { .. } => (0.0, 1.0),
            CurveParams::Hyperbola { .. } => (0.25, 4.0),
            CurveParams::LogCircle { a, b, d, arc } => {
                log_circle_domain(a.to_f64(), b.to_f64(), d.to_f64(), *arc).ok_or_else(|| {
                    CoreError::Domain("empty log-circle arc".into())
                })?
            }
        })
    }

    pub fn to_spec(&self, digits: u32) -> CurveSpec {
        let s = |r: &Real| r.to_decimal(digits);
        let v = |a: &Vec3| [s(&a[0]), s(&a[1]), s(&a[2])];
        let mut params = BTreeMap::new();
        match &self.params {
            CurveParams::Line => {}
            CurveParams::Circle { r } => {
                params.insert("r".into(), s(r));
            }
            CurveParams::Parabola { a } => {
                params.insert("a".into(), s(a));
            }
            CurveParams::Ellipse { a, b } | CurveParams::Hyperbola { a, b } => {
                params.insert("a".into(), s(a));
                params.insert("b".into(), s(b));
            }
            CurveParams::LogCircle { a, b, d, arc } => {
                params.insert("A".into(), s(a));
                params.insert("B".into(), s(b));
                params.insert("D".into(), s(d));
                params.insert("arc".into(), format!("{arc:?}").to_lowercase());
            }
        }
        CurveSpec {
            kind: self.kind(),
            frame: Some(FrameSpec {
                origin: v(&self.frame.origin),
                e1: v(&self.frame.e1),
                e2: v(&self.frame.e2),
                e3: v(&self.frame.e3),
            }),
            params,
        }
    }
}

/// `x` interval of a log-circle arc, found by sampling the radicand
/// `D + A ln|x − B| − x²` and bisecting its sign changes.
pub fn log_circle_domain(a: f64, b: f64, d: f64, arc: Arc) -> Option<(f64, f64)> {
    let sign = if arc == Arc::Positive { 1.0 } else { -1.0 };
    let g = |w: f64| {
        let x = b + sign * w;
        d + a * w.ln() - x * x
    };
    let reach = b.abs() + d.abs().sqrt() + a.abs() + 10.0;
    let n = 4000;
    let ws: Vec<f64> = (0..=n).map(|i| (1e-12f64).ln() + (reach / 1e-12).ln() * i as f64 / n as f64).map(f64::exp).collect();
    let mut best: Option<(f64, f64)> = None;
    let mut start: Option<usize> = None;
    for i in 0..=n {
        let inside = g(ws[i]) > 0.0;
        if inside && start.is_none() {
            start = Some(i);
        }
        if (!inside || i == n) && start.is_some() {
            let lo_i = start.take().unwrap();
            let hi_i = if inside { i } else { i - 1 };
            let refine = |mut inn: f64, mut out: f64| {
                for _ in 0..200 {
                    let mid = 0.5 * (inn + out);
                    if g(mid) > 0.0 {
                        inn = mid;
                    } else {
                        out = mid;
                    }
                }
                inn
            };
            let lo = if lo_i == 0 { ws[0] } else { refine(ws[lo_i], ws[lo_i - 1]) };
            let hi = if hi_i == n { ws[n] } else { refine(ws[hi_i], ws[hi_i + 1]) };
            if best.map_or(true, |(l, h)| hi - lo > h - l) {
                best = Some((lo, hi));
            }
        }
    }
    let (lo, hi) = best?;
    if hi <= lo {
        return None;
    }
    let (x1, x2) = (b + sign * lo, b + sign * hi);
    Some((x1.min(x2), x1.max(x2)))
}

/// JSON form of a frame; every entry is a decimal or fraction string.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameSpec {
    pub origin: [String; 3],
    pub e1: [String; 3],
    pub e2: [String; 3],
    pub e3: [String; 3],
}

/// JSON curve specification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveSpec {
    pub kind: CurveKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frame: Option<FrameSpec>,
    #[serde(default)]
    pub params: BTreeMap<String, String>,
}

impl CurveSpec {
    pub fn param(&self, name: &str) -> Result<&str, CoreError> {
        self.params
            .get(name)
            .map(String::as_str)
            .ok_or_else(|| CoreError::InvalidConfig(format!("{} needs parameter `{name}`", self.kind.name())))
    }

    pub fn to_curve(&self, bits: usize) -> Result<NumericCurve, CoreError> {
        let r = |name: &str| Real::parse(self.param(name)?, bits);
        let params = match self.kind {
            CurveKind::Line => CurveParams::Line,
            CurveKind::Circle => CurveParams::Circle { r: r("r")? },
            CurveKind::Parabola => CurveParams::Parabola { a: r("a")? },
            CurveKind::Ellipse => CurveParams::Ellipse { a: r("a")?, b: r("b")? },
            CurveKind::Hyperbola => CurveParams::Hyperbola { a: r("a")?, b: r("b")? },
            CurveKind::LogCircle => {
                let arc = match self.params.get("arc").map(String::as_str) {
                    None | Some("positive") => Arc::Positive,
                    Some("negative") => Arc::Negative,
                    Some(other) => return Err(CoreError::InvalidConfig(format!("unknown arc `{other}`"))),
                };
                CurveParams::LogCircle { a: r("A")?, b: r("B")?, d: r("D")?, arc }
            }
        };
        let frame = match &self.frame {
            None => Frame::standard(bits),
            Some(f) => {
                let v = |a: &[String; 3]| -> Result<Vec3, CoreError> {
                    Ok([Real::parse(&a[0], bits)?, Real::parse(&a[1], bits)?, Real::parse(&a[2], bits)?])
                };
                Frame::new(v(&f.origin)?, v(&f.e1)?, v(&f.e2)?, v(&f.e3)?)?
            }
        };
        NumericCurve::new(params, frame)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real::{bits_for_digits, close};

    fn b() -> usize {
        bits_for_digits(60)
    }

    fn r(x: &str) -> Real {
        Real::parse(x, b()).unwrap()
    }

    #[test]
    fn quarter_turn_and_line() {
        let c = NumericCurve::standard(CurveParams::Circle { r: r("1") }, b()).unwrap();
        let p = c.evaluate(&r("1/4")).unwrap();
        assert!(p[0].abs() < r("1e-58") && close(&p[1], &r("1"), 1e-58) && p[2].is_zero());
        let mut f = Frame::standard(b());
        f.e1 = vec3(&r("0"), &r("0"), &r("1"));
        f.e3 = vec3(&r("1"), &r("0"), &r("0"));
        let l = NumericCurve::new(CurveParams::Line, f).unwrap();
        let p = l.evaluate(&r("3")).unwrap();
        assert!(p[0].is_zero() && p[1].is_zero() && p[2] == r("3"));
    }

    #[test]
    fn log_circle_positive_arc() {
        let c = NumericCurve::standard(
            CurveParams::LogCircle { a: r("1"), b: r("-1/2"), d: r("2"), arc: Arc::Positive },
            b(),
        )
        .unwrap();
        let p = c.evaluate(&r("1/2")).unwrap();
        let expect = (&(&r("2") + &r("1").ln().unwrap()) - &r("1/4")).sqrt().unwrap();
        assert!(close(&p[1], &expect, 1e-58));
        assert!(c.implicit_residual(&p) < r("1e-55"));
        assert!(c.evaluate(&r("-1")).is_err());
        let (lo, hi) = c.sample_domain().unwrap();
        assert!(lo > -0.5 && hi > 1.0);
    }

    #[test]
    fn non_orthonormal_frame_is_rejected() {
        let f = Frame::standard(b());
        let bad = Frame::new(f.origin.clone(), f.e1.clone(), f.e1.clone(), f.e3.clone());
        assert!(matches!(bad, Err(CoreError::InvalidConfig(_))));
    }

    #[test]
    fn spec_round_trip() {
        let json = r#"{"kind":"ellipse","frame":{"origin":["1","2","3"],"e1":["0","1","0"],"e2":["-1","0","0"],"e3":["0","0","1"]},"params":{"a":"2","b":"1/3"}}"#;
        let spec: CurveSpec = serde_json::from_str(json).unwrap();
        let c = spec.to_curve(b()).unwrap();
        let p = c.evaluate(&r("0")).unwrap();
        assert_eq!(p, vec3(&r("1"), &r("4"), &r("3")));
        let again = c.to_spec(60).to_curve(b()).unwrap();
        assert!(again.implicit_residual(&c.evaluate(&r("0.3")).unwrap()) < r("1e-55"));
    }
}
