//! Packed exponent vectors.
//!
//! A monomial over at most [`MAX_VARS`] variables is stored in a single
//! `u128`. Byte 15 holds the total degree and byte `14 - i` holds the exponent
//! of variable `i`, so plain integer comparison is the graded lexicographic
//! order with variable 0 the most significant, and monomial multiplication is
//! integer addition as long as the total degree stays below 256.

use std::fmt;

/// Maximum number of variables a [`Monomial`] can carry.
pub const MAX_VARS: usize = 15;

/// Largest total degree representable without carries between bytes.
pub const MAX_DEGREE: u32 = 255;

#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(u128);

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    #[inline]
    fn shift(var: usize) -> u32 {
        debug_assert!(var < MAX_VARS);
        8 * (14 - var as u32)
    }

    /// The monomial `x_var^exp`.
    pub fn var_pow(var: usize, exp: u32) -> Monomial {
        assert!(var < MAX_VARS, "variable index {var} out of range");
        assert!(exp <= MAX_DEGREE, "exponent {exp} exceeds {MAX_DEGREE}");
        if exp == 0 {
            return Monomial::ONE;
        }
        Monomial(((exp as u128) << 120) | ((exp as u128) << Self::shift(var)))
    }

    /// Builds a monomial from an exponent slice indexed by variable.
    pub fn from_exponents(exps: &[u32]) -> Option<Monomial> {
        if exps.len() > MAX_VARS {
            return None;
        }
        let total: u32 = exps.iter().sum();
        if total > MAX_DEGREE {
            return None;
        }
        let mut m = (total as u128) << 120;
        for (i, &e) in exps.iter().enumerate() {
            m |= (e as u128) << Self::shift(i);
        }
        Some(Monomial(m))
    }

    #[inline]
    pub fn exponent(self, var: usize) -> u32 {
        ((self.0 >> Self::shift(var)) & 0xff) as u32
    }

    #[inline]
    pub fn total_degree(self) -> u32 {
        (self.0 >> 120) as u32
    }

    #[inline]
    pub fn is_one(self) -> bool {
        self.0 == 0
    }

    pub fn exponents(self, nvars: usize) -> Vec<u32> {
        (0..nvars).map(|i| self.exponent(i)).collect()
    }

    /// Product of two monomials. The caller guarantees the total degree fits.
    #[inline]
    pub fn mul(self, other: Monomial) -> Monomial {
        debug_assert!(self.total_degree() + other.total_degree() <= MAX_DEGREE);
        Monomial(self.0 + other.0)
    }

    pub fn checked_mul(self, other: Monomial) -> Option<Monomial> {
        if self.total_degree() + other.total_degree() > MAX_DEGREE {
            None
        } else {
            Some(Monomial(self.0 + other.0))
        }
    }

    /// True when every exponent of `self` is at most the matching exponent of `other`.
    #[inline]
    pub fn divides(self, other: Monomial) -> bool {
        let (a, b) = (self.0.to_le_bytes(), other.0.to_le_bytes());
        a.iter().zip(b.iter()).all(|(x, y)| x <= y)
    }

    /// Quotient `other / self`; requires `self.divides(other)`.
    #[inline]
    pub fn div_into(self, other: Monomial) -> Monomial {
        debug_assert!(self.divides(other));
        Monomial(other.0 - self.0)
    }

    /// Replaces the exponent of `var`.
    pub fn with_exponent(self, var: usize, exp: u32) -> Monomial {
        let old = self.exponent(var);
        let total = self.total_degree() - old + exp;
        assert!(total <= MAX_DEGREE, "total degree {total} exceeds {MAX_DEGREE}");
        let sh = Self::shift(var);
        let cleared = self.0 & !(0xffu128 << sh) & !(0xffu128 << 120);
        Monomial(cleared | ((exp as u128) << sh) | ((total as u128) << 120))
    }

    /// Differentiation bookkeeping: lowers the exponent of `var` by one.
    pub fn lower(self, var: usize) -> Monomial {
        let e = self.exponent(var);
        debug_assert!(e > 0);
        Monomial(self.0 - (1u128 << Self::shift(var)) - (1u128 << 120))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Monomial{:?}", self.exponents(MAX_VARS))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_graded_lex() {
        let s = Monomial::var_pow(0, 1);
        let t2 = Monomial::var_pow(1, 2);
        let st = s.mul(Monomial::var_pow(1, 1));
        // higher total degree wins, then variable 0 dominates
        assert!(t2 > s);
        assert!(st > t2);
        assert!(Monomial::var_pow(0, 2) > st);
    }

    #[test]
    fn exponent_round_trip() {
        let m = Monomial::from_exponents(&[3, 0, 7, 1]).unwrap();
        assert_eq!(m.exponents(4), vec![3, 0, 7, 1]);
        assert_eq!(m.total_degree(), 11);
        let m2 = m.with_exponent(2, 2);
        assert_eq!(m2.exponents(4), vec![3, 0, 2, 1]);
        assert_eq!(m2.total_degree(), 6);
        assert_eq!(m.lower(0).exponent(0), 2);
    }

    #[test]
    fn divisibility() {
        let a = Monomial::from_exponents(&[1, 2]).unwrap();
        let b = Monomial::from_exponents(&[2, 2, 1]).unwrap();
        assert!(a.divides(b));
        assert!(!b.divides(a));
        assert_eq!(a.div_into(b).exponents(3), vec![1, 0, 1]);
    }
}
