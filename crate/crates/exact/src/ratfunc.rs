//! Rational functions over Q in the symbols of a table.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::ExactError;
use crate::gcd::gcd;
use crate::poly::MultiPoly;
use crate::symbols::Table;
use crate::Scalar;

/// `num / den` with `den ≠ 0`. Values built through [`RationalFunction::new`]
/// and the arithmetic operators are canonical: coprime numerator and
/// denominator, the denominator an integer polynomial of content 1 with
/// positive leading coefficient, and a zero numerator paired with `1`.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalFunction {
    num: MultiPoly,
    den: MultiPoly,
}

impl RationalFunction {
    pub fn new(num: MultiPoly, den: MultiPoly) -> Result<RationalFunction, ExactError> {
        num.check_table(&den)?;
        if den.is_zero() {
            return Err(ExactError::ZeroDenominator);
        }
        Ok(RationalFunction { num, den }.canonicalize())
    }

    pub fn from_poly(p: MultiPoly) -> RationalFunction {
        let den = MultiPoly::one(p.table());
        RationalFunction { num: p, den }
    }

    pub fn zero(table: &Table) -> RationalFunction {
        RationalFunction::from_poly(MultiPoly::zero(table))
    }

    pub fn one(table: &Table) -> RationalFunction {
        RationalFunction::from_poly(MultiPoly::one(table))
    }

    pub fn constant(table: &Table, c: &Scalar) -> RationalFunction {
        RationalFunction::from_poly(MultiPoly::constant(table, c))
    }

    pub fn var(table: &Table, index: usize) -> RationalFunction {
        RationalFunction::from_poly(MultiPoly::var(table, index))
    }

    pub fn var_named(table: &Table, name: &str) -> Result<RationalFunction, ExactError> {
        Ok(RationalFunction::from_poly(MultiPoly::var_named(table, name)?))
    }

    pub fn num(&self) -> &MultiPoly {
        &self.num
    }

    pub fn den(&self) -> &MultiPoly {
        &self.den
    }

    pub fn table(&self) -> &Table {
        self.num.table()
    }

    pub fn into_parts(self) -> (MultiPoly, MultiPoly) {
        (self.num, self.den)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    /// The numerator when the denominator is constant.
    pub fn as_polynomial(&self) -> Option<MultiPoly> {
        if self.den.is_constant() {
            Some(self.num.scale(&(Scalar::one() / self.den.constant_term())))
        } else {
            None
        }
    }

    pub fn canonicalize(&self) -> RationalFunction {
        let table = self.num.table();
        if self.num.is_zero() {
            return RationalFunction::zero(table);
        }
        let (num, den) = if self.den.is_constant() {
            (self.num.clone(), self.den.clone())
        } else {
            let g = gcd(&self.num, &self.den);
            if g.is_constant() {
                (self.num.clone(), self.den.clone())
            } else {
                (
                    self.num.exact_divide(&g).expect("gcd divides numerator"),
                    self.den.exact_divide(&g).expect("gcd divides denominator"),
                )
            }
        };
        let (den, lambda) = den.canonical_with_scalar();
        let num = num.scale(&(Scalar::one() / lambda));
        RationalFunction { num, den }
    }

    pub fn partial_derivative(&self, var: usize) -> RationalFunction {
        let dn = self.num.derivative(var);
        if self.den.is_constant() {
            return RationalFunction { num: dn, den: self.den.clone() };
        }
        let dd = self.den.derivative(var);
        let num = &(&dn * &self.den) - &(&self.num * &dd);
        RationalFunction { num, den: self.den.pow(2) }.canonicalize()
    }

    pub fn partial_derivative_named(&self, var: &str) -> Result<RationalFunction, ExactError> {
        Ok(self.partial_derivative(self.table().require(var)?))
    }

    pub fn evaluate(&self, point: &[Scalar]) -> Result<Scalar, ExactError> {
        let d = self.den.evaluate(point);
        if d.is_zero() {
            return Err(ExactError::Pole);
        }
        Ok(self.num.evaluate(point) / d)
    }

    pub fn evaluate_partial(&self, assignment: &[(usize, Scalar)]) -> Result<RationalFunction, ExactError> {
        let den = self.den.evaluate_partial(assignment);
        if den.is_zero() {
            return Err(ExactError::Pole);
        }
        RationalFunction::new(self.num.evaluate_partial(assignment), den)
    }

    /// Replaces variable `var` by the rational function `value`.
    pub fn substitute(&self, var: usize, value: &RationalFunction) -> Result<RationalFunction, ExactError> {
        let (n, d) = substitute_homogenized(&self.num, &self.den, var, value);
        if d.is_zero() {
            return Err(ExactError::Pole);
        }
        RationalFunction::new(n, d)
    }

    pub fn inverse(&self) -> Result<RationalFunction, ExactError> {
        RationalFunction::new(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, e: u32) -> RationalFunction {
        RationalFunction { num: self.num.pow(e), den: self.den.pow(e) }
    }

    pub fn scale(&self, c: &Scalar) -> RationalFunction {
        RationalFunction { num: self.num.scale(c), den: self.den.clone() }.canonicalize()
    }
}

/// Substitutes `value = vn/vd` for `var` in both `num` and `den`, multiplying
/// through by `vd^k` with `k` the larger of the two degrees in `var`.
pub fn substitute_homogenized(
    num: &MultiPoly,
    den: &MultiPoly,
    var: usize,
    value: &RationalFunction,
) -> (MultiPoly, MultiPoly) {
    let k = num.degree_in(var).max(den.degree_in(var));
    let vd_pows: Vec<MultiPoly> = {
        let mut v = vec![MultiPoly::one(num.table())];
        for i in 1..=k as usize {
            let next = &v[i - 1] * &value.den;
            v.push(next);
        }
        v
    };
    let sub = |p: &MultiPoly| -> MultiPoly {
        let coeffs = p.to_univariate(var);
        let mut acc = MultiPoly::zero(p.table());
        let mut vn_pow = MultiPoly::one(p.table());
        for (i, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc = &acc + &(&(c * &vn_pow) * &vd_pows[k as usize - i]);
            }
            if i + 1 < coeffs.len() {
                vn_pow = &vn_pow * &value.num;
            }
        }
        acc
    };
    (sub(num), sub(den))
}

fn combine(a: &RationalFunction, b: &RationalFunction, subtract: bool) -> RationalFunction {
    a.num.check_table(&b.num).expect("operands use different symbol tables");
    let op = |x: &MultiPoly, y: &MultiPoly| if subtract { x - y } else { x + y };
    if a.den == b.den {
        return RationalFunction { num: op(&a.num, &b.num), den: a.den.clone() }.canonicalize();
    }
    if a.den.is_constant() || b.den.is_constant() {
        let num = op(&(&a.num * &b.den), &(&b.num * &a.den));
        return RationalFunction { num, den: &a.den * &b.den }.canonicalize();
    }
    let g = gcd(&a.den, &b.den);
    let (ca, cb) = (
        b.den.exact_divide(&g).expect("gcd divides"),
        a.den.exact_divide(&g).expect("gcd divides"),
    );
    let num = op(&(&a.num * &ca), &(&b.num * &cb));
    RationalFunction { num, den: &a.den * &ca }.canonicalize()
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        combine(self, rhs, false)
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        combine(self, rhs, true)
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        if self.den.is_constant() && rhs.den.is_constant() {
            return RationalFunction { num: &self.num * &rhs.num, den: &self.den * &rhs.den }.canonicalize();
        }
        // cross-cancel before multiplying
        let g1 = gcd(&self.num, &rhs.den);
        let g2 = gcd(&rhs.num, &self.den);
        let n1 = self.num.exact_divide(&g1).expect("gcd divides");
        let d2 = rhs.den.exact_divide(&g1).expect("gcd divides");
        let n2 = rhs.num.exact_divide(&g2).expect("gcd divides");
        let d1 = self.den.exact_divide(&g2).expect("gcd divides");
        let (den, lambda) = (&d1 * &d2).canonical_with_scalar();
        RationalFunction { num: (&n1 * &n2).scale(&(Scalar::one() / lambda)), den }
    }
}

impl Div for &RationalFunction {
    type Output = RationalFunction;
    /// Panics on division by zero.
    fn div(self, rhs: &RationalFunction) -> RationalFunction {
        self * &rhs.inverse().expect("division by the zero rational function")
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction { num: -&self.num, den: self.den.clone() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for RationalFunction {
            type Output = RationalFunction;
            fn $method(self, rhs: RationalFunction) -> RationalFunction {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&RationalFunction> for RationalFunction {
            type Output = RationalFunction;
            fn $method(self, rhs: &RationalFunction) -> RationalFunction {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        -&self
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFunction({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::SymbolTable;
    use num_bigint::BigInt;

    fn setup() -> (Table, RationalFunction, RationalFunction) {
        let t = SymbolTable::curve(&["c"]).unwrap();
        let s = RationalFunction::var(&t, 0);
        let tt = RationalFunction::var(&t, 1);
        (t, s, tt)
    }

    #[test]
    fn cancels_common_factor() {
        let (t, s, tt) = setup();
        let two = RationalFunction::constant(&t, &Scalar::from_integer(BigInt::from(2)));
        let four = RationalFunction::constant(&t, &Scalar::from_integer(BigInt::from(4)));
        let num = (&two * &(&s.pow(2) - &tt.pow(2))).num().clone();
        let den = (&four * &(&s - &tt)).num().clone();
        let f = RationalFunction::new(num, den).unwrap();
        let half = Scalar::new(1.into(), 2.into());
        assert_eq!(f, (&s + &tt).scale(&half));
        assert!(f.den().is_one());
    }

    #[test]
    fn zero_normal_form() {
        let (t, s, _) = setup();
        let f = RationalFunction::new(MultiPoly::zero(&t), (&s + &RationalFunction::one(&t)).num().clone()).unwrap();
        assert!(f.is_zero());
        assert!(f.den().is_one());
    }

    #[test]
    fn sign_normalization() {
        let (_, s, tt) = setup();
        let f = RationalFunction::new((-&s).num().clone(), (-&tt).num().clone()).unwrap();
        assert_eq!(f.num(), s.num());
        assert_eq!(f.den(), tt.num());
    }

    #[test]
    fn quotient_rule() {
        let (_, s, tt) = setup();
        let f = (&s - &tt).inverse().unwrap();
        let df = f.partial_derivative(0);
        assert_eq!(df, -&(&s - &tt).pow(2).inverse().unwrap());
    }

    #[test]
    fn zero_denominator_rejected() {
        let (t, s, _) = setup();
        assert_eq!(
            RationalFunction::new(s.num().clone(), MultiPoly::zero(&t)),
            Err(ExactError::ZeroDenominator)
        );
    }
}
