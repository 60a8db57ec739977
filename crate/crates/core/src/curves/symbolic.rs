//! Rational parameterizations with symbolic coefficients.

use exact::{parse_poly, ExactError, RationalFunction, Scalar, Table};
use serde::{Deserialize, Serialize};

use crate::error::CoreError;

/// Conic families with standard rational parameterizations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConicKind {
    Parabola,
    Hyperbola,
    Ellipse,
}

impl std::str::FromStr for ConicKind {
    type Err = CoreError;
    fn from_str(s: &str) -> Result<Self, CoreError> {
        match s {
            "parabola" => Ok(ConicKind::Parabola),
            "hyperbola" => Ok(ConicKind::Hyperbola),
            "ellipse" => Ok(ConicKind::Ellipse),
            other => Err(CoreError::UnsupportedKind(other.to_string())),
        }
    }
}

/// A curve `var ↦ (x, y, z)` with rational-function components.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolicCurve {
    var: usize,
    comps: [RationalFunction; 3],
}

impl SymbolicCurve {
    /// Every component may mention only `var` among the two curve variables.
    pub fn new(var: usize, comps: [RationalFunction; 3]) -> Result<SymbolicCurve, CoreError> {
        let table = comps[0].table().clone();
        for c in &comps[1..] {
            c.num().check_table(comps[0].num())?;
        }
        let other = if var == table.s_index() {
            table.t_index()
        } else if var == table.t_index() {
            table.s_index()
        } else {
            return Err(CoreError::InvalidConfig(format!("`{}` is not a curve variable", table.name(var))));
        };
        for c in &comps {
            if c.num().contains_var(other) || c.den().contains_var(other) {
                return Err(CoreError::SharedCurveVariable);
            }
        }
        Ok(SymbolicCurve { var, comps })
    }

    /// Parses three component expressions.
    pub fn parse(table: &Table, var: &str, comps: [&str; 3]) -> Result<SymbolicCurve, CoreError> {
        let v = table.require(var)?;
        let parsed: Result<Vec<RationalFunction>, ExactError> =
            comps.iter().map(|c| exact::parse_rational_function(table, c)).collect();
        let parsed = parsed?;
        SymbolicCurve::new(v, [parsed[0].clone(), parsed[1].clone(), parsed[2].clone()])
    }

    pub fn var(&self) -> usize {
        self.var
    }

    pub fn table(&self) -> &Table {
        self.comps[0].table()
    }

    pub fn components(&self) -> &[RationalFunction; 3] {
        &self.comps
    }

    /// Point at a rational parameter value, with every other symbol assigned.
    pub fn evaluate(&self, point: &[Scalar]) -> Result<[Scalar; 3], CoreError> {
        let x = self.comps[0].evaluate(point)?;
        let y = self.comps[1].evaluate(point)?;
        let z = self.comps[2].evaluate(point)?;
        Ok([x, y, z])
    }

    /// Replaces a parameter by a rational function of the parameters.
    pub fn substitute(&self, var: usize, value: &RationalFunction) -> Result<SymbolicCurve, CoreError> {
        let mut comps = Vec::with_capacity(3);
        for c in &self.comps {
            comps.push(c.substitute(var, value)?);
        }
        SymbolicCurve::new(self.var, comps.try_into().expect("three components"))
    }

    /// Applies `p ↦ λ p` to the whole curve.
    pub fn scaled(&self, lambda: &Scalar) -> SymbolicCurve {
        SymbolicCurve { var: self.var, comps: self.comps.clone().map(|c| c.scale(lambda)) }
    }
}

/// `(x(u), y(u))` of the standard first-curve parameterization, before the
/// factor `c` in the second coordinate.
fn first_profile(kind: ConicKind, table: &Table, u: usize) -> [RationalFunction; 2] {
    let u = RationalFunction::var(table, u);
    let one = RationalFunction::one(table);
    let two = RationalFunction::constant(table, &Scalar::from_integer(2.into()));
    let u2 = &u * &u;
    match kind {
        ConicKind::Parabola => [u.clone(), u2],
        ConicKind::Hyperbola => [&(&u2 + &one) / &(&two * &u), &(&one - &u2) / &(&two * &u)],
        ConicKind::Ellipse => [&(&one - &u2) / &(&one + &u2), &(&two * &u) / &(&one + &u2)],
    }
}

/// Coefficients `(f(t), g(t))` multiplying `v1` and `v2` in the second-curve form.
pub fn second_profile(kind: ConicKind, table: &Table, u: usize) -> [RationalFunction; 2] {
    let u = RationalFunction::var(table, u);
    let one = RationalFunction::one(table);
    let two = RationalFunction::constant(table, &Scalar::from_integer(2.into()));
    let u2 = &u * &u;
    match kind {
        ConicKind::Parabola => [u.clone(), u2],
        ConicKind::Hyperbola => [&(&u2 + &one) / &(&two * &u), &(&u2 - &one) / &(&two * &u)],
        ConicKind::Ellipse => [&(&u2 - &one) / &(&u2 + &one), &(&two * &u) / &(&u2 + &one)],
    }
}

/// Standard position of the first conic, in the table's `s` variable.
/// `c` is an expression for the second-axis scale (ignored for parabolas).
pub fn standard_first_curve(table: &Table, kind: ConicKind, c: &str) -> Result<SymbolicCurve, CoreError> {
    let s = table.s_index();
    let [x, y] = first_profile(kind, table, s);
    let y = match kind {
        ConicKind::Parabola => y,
        _ => &RationalFunction::from_poly(parse_poly(table, c)?) * &y,
    };
    SymbolicCurve::new(s, [x, y, RationalFunction::zero(table)])
}

/// `origin + f(t)·v1 + g(t)·v2`, in the table's `t` variable. Each entry is
/// an expression in the parameters (for instance `"0"` or `"x1"`).
pub fn standard_second_curve(
    table: &Table,
    kind: ConicKind,
    origin: [&str; 3],
    v1: [&str; 3],
    v2: [&str; 3],
) -> Result<SymbolicCurve, CoreError> {
    let t = table.t_index();
    let [f, g] = second_profile(kind, table, t);
    let parse = |e: &str| -> Result<RationalFunction, CoreError> {
        Ok(RationalFunction::from_poly(parse_poly(table, e)?))
    };
    let mut comps = Vec::with_capacity(3);
    for i in 0..3 {
        let o = parse(origin[i])?;
        let a = parse(v1[i])?;
        let b = parse(v2[i])?;
        comps.push(&(&o + &(&f * &a)) + &(&g * &b));
    }
    let comps: [RationalFunction; 3] = comps.try_into().expect("three components");
    SymbolicCurve::new(t, comps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use exact::SymbolTable;

    fn q(n: i64) -> Scalar {
        Scalar::from_integer(n.into())
    }

    #[test]
    fn standard_points() {
        let t = SymbolTable::curve(&["c"]).unwrap();
        let par = standard_first_curve(&t, ConicKind::Parabola, "c").unwrap();
        assert_eq!(par.evaluate(&[q(2), q(0), q(3)]).unwrap(), [q(2), q(4), q(0)]);
        let ell = standard_first_curve(&t, ConicKind::Ellipse, "c").unwrap();
        assert_eq!(ell.evaluate(&[q(0), q(0), q(3)]).unwrap(), [q(1), q(0), q(0)]);
        let hyp = standard_first_curve(&t, ConicKind::Hyperbola, "c").unwrap();
        assert_eq!(hyp.evaluate(&[q(1), q(0), q(3)]).unwrap(), [q(1), q(0), q(0)]);
    }

    #[test]
    fn second_curve_points() {
        let t = SymbolTable::curve(&["p", "q", "r", "a", "b"]).unwrap();
        let o = ["p", "q", "r"];
        let (v1, v2) = (["a", "0", "0"], ["0", "b", "1"]);
        let pt = |s: i64, tt: i64| vec![q(s), q(tt), q(5), q(6), q(7), q(2), q(3)];
        let e = standard_second_curve(&t, ConicKind::Ellipse, o, v1, v2).unwrap();
        assert_eq!(e.evaluate(&pt(0, 1)).unwrap(), [q(5), q(9), q(8)]);
        let p = standard_second_curve(&t, ConicKind::Parabola, o, v1, v2).unwrap();
        assert_eq!(p.evaluate(&pt(0, 0)).unwrap(), [q(5), q(6), q(7)]);
        let h = standard_second_curve(&t, ConicKind::Hyperbola, o, v1, v2).unwrap();
        assert_eq!(h.evaluate(&pt(0, 1)).unwrap(), [q(7), q(6), q(7)]);
    }

    #[test]
    fn components_must_use_one_curve_variable() {
        let t = SymbolTable::curve(&["c"]).unwrap();
        assert!(matches!(
            SymbolicCurve::parse(&t, "s", ["s", "t", "0"]),
            Err(CoreError::SharedCurveVariable)
        ));
    }
}
