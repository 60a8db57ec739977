//! The two solution families of `μ'(s)(ν(t) − s)² = ν'(t)(μ(s) − t)²`,
//! with `μ(s) = s + f(s)f'(s)` and `ν(t) = t + g(t)g'(t)`.

use exact::{parse_rational_function, RationalFunction, SymbolTable};
use serde::{Deserialize, Serialize};

use crate::error::CoreError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LemmaFamily {
    /// `μ = A1 + A2 s`, `ν = −A1/A2 + t/A2`.
    I,
    /// `μ = A1/(s + A2) + A3`, `ν = A1/(t − A3) − A2`.
    II,
}

impl std::str::FromStr for LemmaFamily {
    type Err = CoreError;
    fn from_str(s: &str) -> Result<LemmaFamily, CoreError> {
        match s {
            "i" | "I" | "1" => Ok(LemmaFamily::I),
            "ii" | "II" | "2" => Ok(LemmaFamily::II),
            other => Err(CoreError::InvalidConfig(format!("unknown family `{other}`"))),
        }
    }
}

impl LemmaFamily {
    fn forms(self) -> (&'static str, &'static str) {
        match self {
            LemmaFamily::I => ("A1 + A2*s", "-A1/A2 + t/A2"),
            LemmaFamily::II => ("A1/(s + A2) + A3", "A1/(t - A3) - A2"),
        }
    }
}

/// `μ'(ν − s)² − ν'(μ − t)²` for explicit `μ(s)`, `ν(t)`.
pub fn cross_multiplied_residual(mu: &RationalFunction, nu: &RationalFunction) -> RationalFunction {
    let table = mu.table();
    let (s, t) = (RationalFunction::var(table, table.s_index()), RationalFunction::var(table, table.t_index()));
    let lhs = &mu.partial_derivative(table.s_index()) * &(nu - &s).pow(2);
    let rhs = &nu.partial_derivative(table.t_index()) * &(mu - &t).pow(2);
    &lhs - &rhs
}

/// Residual of the identity for the family with `A1, A2, A3` symbolic.
pub fn verify_important_lemma(family: LemmaFamily) -> Result<RationalFunction, CoreError> {
    verify_important_lemma_at(family, &[])
}

/// Same, with some of `A1, A2, A3` fixed to the given expressions.
pub fn verify_important_lemma_at(family: LemmaFamily, fixed: &[(&str, &str)]) -> Result<RationalFunction, CoreError> {
    let table = SymbolTable::curve(&["A1", "A2", "A3"])?;
    let (mu_text, nu_text) = family.forms();
    let mut mu = parse_rational_function(&table, mu_text)?;
    let mut nu = parse_rational_function(&table, nu_text)?;
    for (name, value) in fixed {
        let v = table.require(name)?;
        let value = parse_rational_function(&table, value)?;
        mu = mu.substitute(v, &value)?;
        nu = nu.substitute(v, &value)?;
    }
    Ok(cross_multiplied_residual(&mu, &nu))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_families_satisfy_the_identity() {
        assert!(verify_important_lemma(LemmaFamily::I).unwrap().is_zero());
        assert!(verify_important_lemma(LemmaFamily::II).unwrap().is_zero());
        assert!(verify_important_lemma_at(LemmaFamily::II, &[("A1", "0")]).unwrap().is_zero());
    }

    #[test]
    fn a_wrong_partner_fails() {
        let table = SymbolTable::curve(&["A1", "A2", "A3"]).unwrap();
        let mu = parse_rational_function(&table, "A1 + A2*s").unwrap();
        let nu = parse_rational_function(&table, "A1 + t/A2").unwrap();
        assert!(!cross_multiplied_residual(&mu, &nu).is_zero());
    }
}
