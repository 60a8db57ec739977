//! Symbolic curve pairs for the few-distance configurations, with every
//! parameter a free symbol, plus the generic ellipse pair.
//!
//! Circles and conics use tangent-half-angle forms. Square roots are
//! removed by rational substitutions, e.g. `μ = (1−k²)/2k` makes
//! `√(μ²+1) = (1+k²)/2k`.

use exact::{SymbolTable, Table};
use serde::{Deserialize, Serialize};

use crate::casecheck::spec::BaseConfig;
use crate::curves::SymbolicCurve;
use crate::error::CoreError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    ParallelLines,
    OrthogonalLines,
    LineCylinder,
    LineOrthogonalPlane,
    AlignedCircles,
    PerpendicularCircles,
    CpoParabolas,
    /// `0 < m < 1`: an ellipse and a hyperbola.
    MatchingHyperbolic,
    /// `m > 1`: two ellipses.
    MatchingElliptic,
    /// Ellipse in standard position against a general ellipse; not few-distance.
    GenericEllipses,
}

/// Families whose test expression vanishes identically.
pub const VANISHING: [Family; 9] = [
    Family::ParallelLines,
    Family::OrthogonalLines,
    Family::LineCylinder,
    Family::LineOrthogonalPlane,
    Family::AlignedCircles,
    Family::PerpendicularCircles,
    Family::CpoParabolas,
    Family::MatchingHyperbolic,
    Family::MatchingElliptic,
];

struct Def {
    params: &'static [&'static str],
    c1: [&'static str; 3],
    c2: [&'static str; 3],
}

fn def(f: Family) -> Option<Def> {
    Some(match f {
        Family::ParallelLines => Def { params: &["g", "h"], c1: ["0", "0", "s"], c2: ["g", "h", "t"] },
        Family::OrthogonalLines => Def { params: &["p", "q"], c1: ["s + p", "0", "0"], c2: ["0", "t + q", "0"] },
        // line along (μ, 0, 1); ellipse x²/(μ²+1) + y² = r² in z = 0
        Family::LineCylinder => Def {
            params: &["k", "r"],
            c1: ["s*(1 - k^2)/(2*k)", "0", "s"],
            c2: ["r*(1 + k^2)/(2*k)*(1 - t^2)/(1 + t^2)", "r*2*t/(1 + t^2)", "0"],
        },
        Family::LineOrthogonalPlane => Def {
            params: &["a", "b", "x0", "y0", "h"],
            c1: ["0", "0", "s"],
            c2: ["x0 + a*(1 - t^2)/(1 + t^2)", "y0 + b*2*t/(1 + t^2)", "h"],
        },
        Family::AlignedCircles => Def {
            params: &["r1", "r2", "g"],
            c1: ["r1*(1 - s^2)/(1 + s^2)", "r1*2*s/(1 + s^2)", "0"],
            c2: ["r2*(1 - t^2)/(1 + t^2)", "r2*2*t/(1 + t^2)", "g"],
        },
        Family::PerpendicularCircles => Def {
            params: &["B", "r1", "r2"],
            c1: ["B + r1*(1 - s^2)/(1 + s^2)", "r1*2*s/(1 + s^2)", "0"],
            c2: ["r2*(1 - t^2)/(1 + t^2)", "0", "r2*2*t/(1 + t^2)"],
        },
        Family::CpoParabolas => Def { params: &["a", "q"], c1: ["s", "a*s^2", "0"], c2: ["0", "q - a*t^2", "t"] },
        // m x² + y² = p² with √(p²/m) = p(1+k²)/2k, against the hyperbola
        // z²/d² − x²/γ² = 1 with γ = d(1−k²)/2k
        Family::MatchingHyperbolic => Def {
            params: &["p", "d", "k"],
            c1: ["p*(1 + k^2)/(2*k)*(1 - s^2)/(1 + s^2)", "p*2*s/(1 + s^2)", "0"],
            c2: ["d*(1 - k^2)/(2*k)*(t^2 - 1)/(2*t)", "0", "d*(t^2 + 1)/(2*t)"],
        },
        // √(p²/m) = p(1−k²)/(1+k²) and the partner x-semi-axis d·2k/(1+k²)
        Family::MatchingElliptic => Def {
            params: &["p", "d", "k"],
            c1: ["p*(1 - k^2)/(1 + k^2)*(1 - s^2)/(1 + s^2)", "p*2*s/(1 + s^2)", "0"],
            c2: ["d*2*k/(1 + k^2)*(1 - t^2)/(1 + t^2)", "0", "d*2*t/(1 + t^2)"],
        },
        Family::GenericEllipses => return None,
    })
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::ParallelLines => "parallel-lines",
            Family::OrthogonalLines => "orthogonal-lines",
            Family::LineCylinder => "line-cylinder",
            Family::LineOrthogonalPlane => "line-orthogonal-plane",
            Family::AlignedCircles => "aligned-circles",
            Family::PerpendicularCircles => "perpendicular-circles",
            Family::CpoParabolas => "cpo-parabolas",
            Family::MatchingHyperbolic => "matching-hyperbolic",
            Family::MatchingElliptic => "matching-elliptic",
            Family::GenericEllipses => "generic-ellipses",
        }
    }

    pub fn params(self) -> &'static [&'static str] {
        match def(self) {
            Some(d) => d.params,
            None => BaseConfig::EllipseGeneral.params(),
        }
    }

    pub fn table(self) -> Result<Table, CoreError> {
        Ok(SymbolTable::curve(self.params())?)
    }

    /// The two curves over `table()`, in `s` and in `t`.
    pub fn curves(self) -> Result<(SymbolicCurve, SymbolicCurve), CoreError> {
        let table = self.table()?;
        match def(self) {
            Some(d) => Ok((SymbolicCurve::parse(&table, "s", d.c1)?, SymbolicCurve::parse(&table, "t", d.c2)?)),
            None => crate::casecheck::base_curves(BaseConfig::EllipseGeneral, &table),
        }
    }
}

impl std::str::FromStr for Family {
    type Err = CoreError;
    fn from_str(s: &str) -> Result<Family, CoreError> {
        VANISHING
            .into_iter()
            .chain([Family::GenericEllipses])
            .find(|f| f.name() == s)
            .ok_or_else(|| CoreError::UnsupportedKind(s.to_string()))
    }
}
