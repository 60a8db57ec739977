//! Exact arithmetic over Q: scalars, sparse multivariate polynomials and
//! rational functions over an ordered symbol table.

pub mod error;
pub mod gcd;
pub mod modp;
pub mod monomial;
pub mod parse;
pub mod poly;
pub mod quadratic;
pub mod ratfunc;
mod sparse_gcd;
pub mod symbols;

pub use error::ExactError;
pub use gcd::{certified_coprime, gcd};
pub use monomial::Monomial;
pub use parse::{parse_poly, parse_rational_function, parse_scalar};
pub use poly::{poly_arith, MultiPoly, PolyOp};
pub use quadratic::{reduce_mod_quadratic, reduce_rational_mod_quadratic};
pub use ratfunc::RationalFunction;
pub use symbols::{SymbolTable, Table};

/// Exact rational scalar; always stored in lowest terms with a positive denominator.
pub type Scalar = num_rational::BigRational;
