//! Distance functions of curve pairs in R³, the mixed log-derivative test,
//! few-distance constructions, distinct-distance counting, classification
//! of conic pairs and the machine-checked case analysis.

pub mod casecheck;
pub mod census;
pub mod classifier;
pub mod constructions;
pub mod curves;
pub mod derivtest;
pub mod error;
pub mod real;

pub use error::CoreError;
