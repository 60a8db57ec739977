//! High-precision reals over `astro-float`, with the working precision
//! carried by each value.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use exact::Scalar;

use crate::error::CoreError;

pub const DEFAULT_DIGITS: u32 = 60;

const RM: RoundingMode = RoundingMode::ToEven;
const GUARD_BITS: usize = 32;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constant cache"));
}

fn with_consts<R>(f: impl FnOnce(&mut Consts) -> R) -> R {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

/// Mantissa bits for `digits` significant decimal digits plus guard bits.
pub fn bits_for_digits(digits: u32) -> usize {
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as usize + GUARD_BITS
}

#[derive(Clone)]
pub struct Real {
    v: BigFloat,
    bits: usize,
}

impl Real {
    fn wrap(v: BigFloat, bits: usize) -> Real {
        Real { v, bits }
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    pub fn zero(bits: usize) -> Real {
        Real::from_i64(0, bits)
    }

    pub fn one(bits: usize) -> Real {
        Real::from_i64(1, bits)
    }

    pub fn from_i64(n: i64, bits: usize) -> Real {
        Real::wrap(BigFloat::from_i64(n, bits), bits)
    }

    pub fn from_f64(x: f64, bits: usize) -> Real {
        Real::wrap(BigFloat::from_f64(x, bits), bits)
    }

    pub fn from_scalar(q: &Scalar, bits: usize) -> Real {
        let n = Real::parse_decimal(&q.numer().to_string(), bits);
        if q.denom() == &1.into() {
            return n;
        }
        &n / &Real::parse_decimal(&q.denom().to_string(), bits)
    }

    fn parse_decimal(text: &str, bits: usize) -> Real {
        Real::wrap(with_consts(|cc| BigFloat::parse(text, Radix::Dec, bits, RM, cc)), bits)
    }

    /// Accepts anything `exact::parse_scalar` accepts, plus decimal forms it rejects.
    pub fn parse(text: &str, bits: usize) -> Result<Real, CoreError> {
        if let Ok(q) = exact::parse_scalar(text) {
            return Ok(Real::from_scalar(&q, bits));
        }
        let r = Real::parse_decimal(text.trim(), bits);
        if r.v.is_nan() || r.v.is_inf() {
            return Err(CoreError::InvalidConfig(format!("bad real `{text}`")));
        }
        Ok(r)
    }

    pub fn pi(bits: usize) -> Real {
        Real::wrap(with_consts(|cc| cc.pi(bits, RM)), bits)
    }

    pub fn with_bits(&self, bits: usize) -> Real {
        let mut v = self.v.clone();
        let _ = v.set_precision(bits, RM);
        Real::wrap(v, bits)
    }

    pub fn sqrt(&self) -> Result<Real, CoreError> {
        if self.is_negative() {
            return Err(CoreError::Domain(format!("sqrt of {}", self.to_f64())));
        }
        Ok(Real::wrap(self.v.sqrt(self.bits, RM), self.bits))
    }

    pub fn ln(&self) -> Result<Real, CoreError> {
        if !self.is_positive() {
            return Err(CoreError::Domain(format!("ln of {}", self.to_f64())));
        }
        Ok(Real::wrap(with_consts(|cc| self.v.ln(self.bits, RM, cc)), self.bits))
    }

    pub fn exp(&self) -> Real {
        Real::wrap(with_consts(|cc| self.v.exp(self.bits, RM, cc)), self.bits)
    }

    pub fn cos(&self) -> Real {
        Real::wrap(with_consts(|cc| self.v.cos(self.bits, RM, cc)), self.bits)
    }

    pub fn sin(&self) -> Real {
        Real::wrap(with_consts(|cc| self.v.sin(self.bits, RM, cc)), self.bits)
    }

    pub fn atan(&self) -> Real {
        Real::wrap(with_consts(|cc| self.v.atan(self.bits, RM, cc)), self.bits)
    }

    pub fn abs(&self) -> Real {
        Real::wrap(self.v.abs(), self.bits)
    }

    pub fn square(&self) -> Real {
        self * self
    }

    pub fn is_zero(&self) -> bool {
        self.v.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        !self.v.is_zero() && self.v.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        !self.v.is_zero() && self.v.is_positive()
    }

    pub fn max(&self, other: &Real) -> Real {
        if self >= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    pub fn min(&self, other: &Real) -> Real {
        if self <= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.v.is_zero() {
            return 0.0;
        }
        let s = with_consts(|cc| self.v.format(Radix::Dec, RM, cc)).unwrap_or_default();
        s.parse().unwrap_or(f64::NAN)
    }

    /// Scientific notation rounded to `digits` significant digits.
    pub fn to_decimal(&self, digits: u32) -> String {
        if self.v.is_zero() {
            return "0".to_string();
        }
        let s = with_consts(|cc| self.v.format(Radix::Dec, RM, cc)).unwrap_or_default();
        let (neg, s) = match s.strip_prefix('-') {
            Some(r) => (true, r),
            None => (false, s.as_str()),
        };
        let (mant, exp) = s.split_once('e').unwrap_or((s, "0"));
        let mut exp: i64 = exp.parse().unwrap_or(0);
        let (int_part, frac) = mant.split_once('.').unwrap_or((mant, ""));
        let mut ds: Vec<u8> = int_part.bytes().chain(frac.bytes()).map(|b| b - b'0').collect();
        exp += int_part.len() as i64 - 1;
        while ds.len() > 1 && ds[0] == 0 {
            ds.remove(0);
            exp -= 1;
        }
        let keep = (digits.max(1) as usize).min(ds.len());
        if ds.len() > keep {
            let round_up = ds[keep] >= 5;
            ds.truncate(keep);
            if round_up {
                let mut i = keep;
                loop {
                    if i == 0 {
                        ds.insert(0, 1);
                        ds.pop();
                        exp += 1;
                        break;
                    }
                    i -= 1;
                    if ds[i] == 9 {
                        ds[i] = 0;
                    } else {
                        ds[i] += 1;
                        break;
                    }
                }
            }
        }
        while ds.len() > 1 && ds.last() == Some(&0) {
            ds.pop();
        }
        let mut out = String::new();
        if neg {
            out.push('-');
        }
        out.push((b'0' + ds[0]) as char);
        if ds.len() > 1 {
            out.push('.');
            out.extend(ds[1..].iter().map(|d| (b'0' + d) as char));
        }
        if exp != 0 {
            out.push_str(&format!("e{exp}"));
        }
        out
    }
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal(24))
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal(((self.bits - GUARD_BITS) as f64 / std::f64::consts::LOG2_10) as u32))
    }
}

impl PartialEq for Real {
    fn eq(&self, other: &Real) -> bool {
        self.v.cmp(&other.v) == Some(0)
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Real) -> Option<Ordering> {
        self.v.cmp(&other.v).map(|c| c.cmp(&0))
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $op:ident) => {
        impl $tr<&Real> for &Real {
            type Output = Real;
            fn $method(self, rhs: &Real) -> Real {
                let bits = self.bits.max(rhs.bits);
                Real::wrap(self.v.$op(&rhs.v, bits, RM), bits)
            }
        }
        impl $tr<Real> for Real {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Real> for Real {
            type Output = Real;
            fn $method(self, rhs: &Real) -> Real {
                (&self).$method(rhs)
            }
        }
        impl $tr<Real> for &Real {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add, add);
binop!(Sub, sub, sub);
binop!(Mul, mul, mul);
binop!(Div, div, div);

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real::wrap(BigFloat::neg(&self.v), self.bits)
    }
}

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        -&self
    }
}

/// `|a - b| ≤ tol · max(1, |a|, |b|)`.
pub fn close(a: &Real, b: &Real, tol: f64) -> bool {
    let scale = a.abs().max(&b.abs()).max(&Real::one(a.bits()));
    (a - b).abs() <= &scale * &Real::from_f64(tol, a.bits())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b() -> usize {
        bits_for_digits(DEFAULT_DIGITS)
    }

    #[test]
    fn arithmetic_and_functions() {
        let third = &Real::one(b()) / &Real::from_i64(3, b());
        let back = &third * &Real::from_i64(3, b());
        assert!(close(&back, &Real::one(b()), 1e-58));
        let two = Real::from_i64(2, b());
        assert!(close(&two.sqrt().unwrap().square(), &two, 1e-58));
        assert!(close(&two.ln().unwrap().exp(), &two, 1e-57));
        let half_pi = &Real::pi(b()) / &two;
        assert!(half_pi.cos().abs() < Real::from_f64(1e-58, b()));
        assert!(Real::from_i64(-1, b()).ln().is_err());
    }

    #[test]
    fn decimal_output() {
        let x = Real::parse("411.5", b()).unwrap();
        assert_eq!(x.to_decimal(10), "4.115e2");
        let third = Real::parse("-1/3", b()).unwrap();
        assert_eq!(third.to_decimal(5), "-3.3333e-1");
        assert_eq!(Real::parse("0.99999999", b()).unwrap().to_decimal(3), "1");
        assert_eq!(Real::zero(b()).to_decimal(4), "0");
        let q = exact::parse_scalar(&third.to_decimal(60)).unwrap();
        assert!(close(&Real::from_scalar(&q, b()), &third, 1e-59));
    }
}
