//! Reduction modulo an adjoined square root `var² = rhs`.

use crate::error::ExactError;
use crate::poly::MultiPoly;
use crate::ratfunc::RationalFunction;

/// Rewrites `f` as `even + odd·var` using `var² = rhs`, with `even` and `odd`
/// free of `var`.
pub fn reduce_mod_quadratic(
    f: &MultiPoly,
    var: usize,
    rhs: &RationalFunction,
) -> Result<(RationalFunction, RationalFunction), ExactError> {
    f.check_table(rhs.num())?;
    check_rhs(var, rhs)?;
    let coeffs = f.to_univariate(var);
    // sum_j c_j R^j with R = n/d, over the common denominator d^J
    let fold = |parity: usize| -> Result<RationalFunction, ExactError> {
        let picked: Vec<&MultiPoly> = coeffs.iter().skip(parity).step_by(2).collect();
        if picked.is_empty() {
            return Ok(RationalFunction::zero(f.table()));
        }
        let jmax = picked.len() - 1;
        let mut npow = vec![MultiPoly::one(f.table())];
        let mut dpow = vec![MultiPoly::one(f.table())];
        for i in 1..=jmax {
            npow.push(&npow[i - 1] * rhs.num());
            dpow.push(&dpow[i - 1] * rhs.den());
        }
        let mut acc = MultiPoly::zero(f.table());
        for (j, c) in picked.iter().enumerate() {
            if !c.is_zero() {
                acc = &acc + &(&(*c * &npow[j]) * &dpow[jmax - j]);
            }
        }
        RationalFunction::new(acc, dpow[jmax].clone())
    };
    Ok((fold(0)?, fold(1)?))
}

/// Same reduction for a rational function: the denominator is rationalized
/// with its conjugate, so the result is again `even + odd·var`.
pub fn reduce_rational_mod_quadratic(
    f: &RationalFunction,
    var: usize,
    rhs: &RationalFunction,
) -> Result<(RationalFunction, RationalFunction), ExactError> {
    let (ne, no) = reduce_mod_quadratic(f.num(), var, rhs)?;
    let (de, dd) = reduce_mod_quadratic(f.den(), var, rhs)?;
    if dd.is_zero() {
        return Ok((&ne / &de, &no / &de));
    }
    // (ne + no z)(de - dd z) / (de² - dd² R)
    let norm = &(&de * &de) - &(&(&dd * &dd) * rhs);
    if norm.is_zero() {
        return Err(ExactError::Pole);
    }
    let even = &(&(&ne * &de) - &(&(&no * &dd) * rhs)) / &norm;
    let odd = &(&(&no * &de) - &(&ne * &dd)) / &norm;
    Ok((even, odd))
}

fn check_rhs(var: usize, rhs: &RationalFunction) -> Result<(), ExactError> {
    if rhs.num().contains_var(var) || rhs.den().contains_var(var) {
        return Err(ExactError::RelationContainsSymbol(rhs.table().name(var).to_string()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::SymbolTable;

    #[test]
    fn cube_reduces_in_one_step() {
        let t = SymbolTable::curve(&["z1", "x2", "y2"]).unwrap();
        let z = MultiPoly::var_named(&t, "z1").unwrap();
        let r = RationalFunction::var_named(&t, "x2").unwrap();
        let (e, o) = reduce_mod_quadratic(&z.pow(3), 2, &r).unwrap();
        assert!(e.is_zero());
        assert_eq!(o, r);
    }

    #[test]
    fn single_substitution() {
        let t = SymbolTable::curve(&["z1", "x2", "y2"]).unwrap();
        let v = |n: &str| MultiPoly::var_named(&t, n).unwrap();
        let r = RationalFunction::from_poly(&v("x2").pow(2) + &v("y2").pow(2));
        let f = &v("z1").pow(2) + &MultiPoly::one(&t);
        let (e, o) = reduce_mod_quadratic(&f, 2, &r).unwrap();
        assert_eq!(e, &r + &RationalFunction::one(&t));
        assert!(o.is_zero());
    }

    #[test]
    fn relation_must_not_mention_symbol() {
        let t = SymbolTable::curve(&["z1"]).unwrap();
        let z = MultiPoly::var_named(&t, "z1").unwrap();
        let r = RationalFunction::from_poly(z.clone());
        assert!(matches!(
            reduce_mod_quadratic(&z, 2, &r),
            Err(ExactError::RelationContainsSymbol(_))
        ));
    }

    #[test]
    fn rational_input_is_rationalized() {
        let t = SymbolTable::curve(&["z", "a"]).unwrap();
        let z = RationalFunction::var_named(&t, "z").unwrap();
        let a = RationalFunction::var_named(&t, "a").unwrap();
        let one = RationalFunction::one(&t);
        // 1/(1+z) with z² = a is (1 - z)/(1 - a)
        let f = (&one + &z).inverse().unwrap();
        let (e, o) = reduce_rational_mod_quadratic(&f, 2, &a).unwrap();
        let d = (&one - &a).inverse().unwrap();
        assert_eq!(e, d);
        assert_eq!(o, -&d);
    }
}
