//! Ordered symbol tables.

use std::sync::Arc;

use crate::error::ExactError;
use crate::monomial::MAX_VARS;

/// An ordered list of distinct symbol names with a distinguished pair of
/// curve variables.
///
/// The position of a symbol fixes its weight in the monomial order: the first
/// symbol is the most significant. Tables built with [`SymbolTable::curve`]
/// put `s` and `t` first, ahead of every parameter.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SymbolTable {
    names: Vec<String>,
    s_index: usize,
    t_index: usize,
}

pub type Table = Arc<SymbolTable>;

impl SymbolTable {
    pub fn new<S: AsRef<str>>(names: &[S], s_index: usize, t_index: usize) -> Result<Table, ExactError> {
        let names: Vec<String> = names.iter().map(|n| n.as_ref().to_string()).collect();
        if names.len() > MAX_VARS {
            return Err(ExactError::InvalidTable(format!(
                "{} symbols, at most {MAX_VARS} supported",
                names.len()
            )));
        }
        if s_index >= names.len() || t_index >= names.len() || s_index == t_index {
            return Err(ExactError::InvalidTable("curve variables must be two distinct entries".into()));
        }
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() || !n.chars().next().unwrap().is_ascii_alphabetic() {
                return Err(ExactError::InvalidTable(format!("bad symbol name `{n}`")));
            }
            if names[..i].contains(n) {
                return Err(ExactError::InvalidTable(format!("duplicate symbol `{n}`")));
            }
        }
        Ok(Arc::new(SymbolTable { names, s_index, t_index }))
    }

    /// Table `[s, t, params...]` with `s` and `t` as the curve variables.
    pub fn curve<S: AsRef<str>>(params: &[S]) -> Result<Table, ExactError> {
        let mut names = vec!["s".to_string(), "t".to_string()];
        names.extend(params.iter().map(|p| p.as_ref().to_string()));
        SymbolTable::new(&names, 0, 1)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn require(&self, name: &str) -> Result<usize, ExactError> {
        self.index(name).ok_or_else(|| ExactError::UnknownSymbol(name.to_string()))
    }

    pub fn s_index(&self) -> usize {
        self.s_index
    }

    pub fn t_index(&self) -> usize {
        self.t_index
    }
}

pub(crate) fn same_table(a: &Table, b: &Table) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicates_and_equal_curve_vars() {
        assert!(SymbolTable::new(&["s", "t", "s"], 0, 1).is_err());
        assert!(SymbolTable::new(&["s", "t"], 0, 0).is_err());
        let t = SymbolTable::curve(&["c", "p"]).unwrap();
        assert_eq!(t.index("p"), Some(3));
        assert_eq!(t.s_index(), 0);
    }
}
