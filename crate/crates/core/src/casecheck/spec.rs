//! Case catalog format.

use serde::{Deserialize, Serialize};

use crate::curves::ConicKind;

/// Starting configuration of a case.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BaseConfig {
    /// Ellipse in standard position and `(p,q,r) + f·v1 + g·v2` with `v2 = (x2,y2,0)`.
    EllipseGeneral,
    /// Both ellipses centered at the origin, `v2 = (x2,0,z2)`.
    EllipseCentered,
    /// Centered, with the roles of `v1` and `v2` exchanged.
    EllipseCenteredSwapped,
    /// Two hyperbolas, `v1`, `v2` unrestricted.
    Hyperbola,
}

impl BaseConfig {
    pub fn params(self) -> &'static [&'static str] {
        match self {
            BaseConfig::EllipseGeneral => &["c", "p", "q", "r", "x1", "y1", "z1", "x2", "y2"],
            BaseConfig::EllipseCentered | BaseConfig::EllipseCenteredSwapped => &["c", "r", "x1", "y1", "z1", "x2", "z2"],
            BaseConfig::Hyperbola => &["c", "p", "q", "r", "x1", "y1", "z1", "x2", "y2", "z2"],
        }
    }

    pub fn kind(self) -> ConicKind {
        match self {
            BaseConfig::Hyperbola => ConicKind::Hyperbola,
            _ => ConicKind::Ellipse,
        }
    }

    pub(crate) fn second_curve_vectors(self) -> ([&'static str; 3], [&'static str; 3], [&'static str; 3]) {
        match self {
            BaseConfig::EllipseGeneral => (["p", "q", "r"], ["x1", "y1", "z1"], ["x2", "y2", "0"]),
            BaseConfig::EllipseCentered => (["0", "0", "0"], ["x1", "y1", "z1"], ["x2", "0", "z2"]),
            BaseConfig::EllipseCenteredSwapped => (["0", "0", "0"], ["x2", "0", "z2"], ["x1", "y1", "z1"]),
            BaseConfig::Hyperbola => (["p", "q", "r"], ["x1", "y1", "z1"], ["x2", "y2", "z2"]),
        }
    }
}

/// `symbol ↦ value`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Substitution {
    pub symbol: String,
    pub value: String,
}

/// Adjoined square root: `symbol² = square`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Relation {
    pub symbol: String,
    pub square: String,
}

/// `weight · coeff[s^s t^t]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub s: u32,
    pub t: u32,
    #[serde(default = "one")]
    pub weight: String,
}

fn one() -> String {
    "1".to_string()
}

/// `Σ weight_i · base_i²`, nonnegative because every weight has positive
/// coefficients and even exponents.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SumOfSquares {
    pub terms: Vec<SquareTerm>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SquareTerm {
    #[serde(default = "one")]
    pub weight: String,
    pub base: String,
}

/// What the computed expression is used for.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Outcome {
    /// The expression cannot vanish under the case's assumptions.
    Nonzero,
    /// Its vanishing forces one of the listed factors to vanish.
    Forces { factors: Vec<String> },
    /// The whole numerator vanishes identically.
    Vanishes,
}

/// One computation inside a case. Substitutions and relations are applied
/// after the case-level ones.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckSpec {
    /// Overrides the case's base configuration.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<BaseConfig>,
    #[serde(default)]
    pub substitutions: Vec<Substitution>,
    #[serde(default)]
    pub relations: Vec<Relation>,
    #[serde(default)]
    pub nonvanishing: Vec<String>,
    #[serde(default)]
    pub positive: Vec<SumOfSquares>,
    #[serde(default)]
    pub target: Vec<Term>,
    /// Polynomial substitutions applied to the computed combination and the
    /// expected expression, after the test expression is formed.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub specialize: Vec<Substitution>,
    #[serde(default)]
    pub expected: String,
    pub outcome: Outcome,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConclusionKind {
    Contradiction,
    Forces,
    Matching,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Conclusion {
    pub kind: ConclusionKind,
    /// Forced relation `lhs = rhs`; must agree with a forced factor.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relation: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub subcases: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseSpec {
    pub id: String,
    pub suite: String,
    /// Verbatim hypothesis string, the stable key of the case.
    pub hypotheses: String,
    pub base: BaseConfig,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub comment: String,
    #[serde(default)]
    pub substitutions: Vec<Substitution>,
    #[serde(default)]
    pub relations: Vec<Relation>,
    #[serde(default)]
    pub nonvanishing: Vec<String>,
    pub checks: Vec<CheckSpec>,
    pub conclusion: Conclusion,
}
