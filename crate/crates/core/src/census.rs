//! Distinct squared distances between two finite point sets.

use std::collections::BTreeMap;

use exact::Scalar;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curves::numeric::{dist2, NumericCurve, Vec3};
use crate::error::CoreError;
use crate::real::{bits_for_digits, Real, DEFAULT_DIGITS};

pub const DEFAULT_MERGE_TOL: f64 = 1e-30;

/// Relative gaps within this factor of the merge tolerance, on either
/// side, make the clustering ambiguous.
pub const AMBIGUITY_MARGIN: f64 = 1e4;

#[derive(Debug, Clone)]
pub struct Point3 {
    pub coords: Vec3,
    /// Exact coordinates, when the point was given by rationals.
    pub exact: Option<[Scalar; 3]>,
}

impl Point3 {
    pub fn real(coords: Vec3) -> Point3 {
        Point3 { coords, exact: None }
    }

    pub fn rational(q: [Scalar; 3], bits: usize) -> Point3 {
        let coords = [0, 1, 2].map(|i| Real::from_scalar(&q[i], bits));
        Point3 { coords, exact: Some(q) }
    }
}

#[derive(Debug, Clone, Default)]
pub struct PointSet {
    pub points: Vec<Point3>,
}

impl PointSet {
    pub fn from_reals(points: Vec<Vec3>) -> PointSet {
        PointSet { points: points.into_iter().map(Point3::real).collect() }
    }

    pub fn from_rationals(points: Vec<[Scalar; 3]>, bits: usize) -> PointSet {
        PointSet { points: points.into_iter().map(|q| Point3::rational(q, bits)).collect() }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Decimal strings with `digits` significant digits, or exact fractions.
    pub fn to_strings(&self, digits: u32) -> Vec<[String; 3]> {
        self.points
            .iter()
            .map(|p| match &p.exact {
                Some(q) => q.clone().map(|c| c.to_string()),
                None => [0, 1, 2].map(|i| p.coords[i].to_decimal(digits)),
            })
            .collect()
    }

    /// Parses coordinates exactly; every string must be a rational literal.
    pub fn from_strings(points: &[[String; 3]], bits: usize) -> Result<PointSet, CoreError> {
        let mut out = Vec::with_capacity(points.len());
        for p in points {
            let mut q = Vec::with_capacity(3);
            for c in p {
                q.push(exact::parse_scalar(c)?);
            }
            out.push(Point3::rational(q.try_into().expect("three coordinates"), bits));
        }
        Ok(PointSet { points: out })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum CensusMode {
    Exact,
    Clustered { precision_digits: u32, merge_tolerance: f64 },
}

impl Default for CensusMode {
    fn default() -> CensusMode {
        CensusMode::Clustered { precision_digits: DEFAULT_DIGITS, merge_tolerance: DEFAULT_MERGE_TOL }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistogramEntry {
    /// Squared distance: an exact fraction or a decimal representative.
    pub value: String,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusResult {
    pub distinct_count: usize,
    pub histogram: Vec<HistogramEntry>,
    pub mode: CensusMode,
    /// Smallest relative gap between consecutive distinct values (clustered mode).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_relative_gap: Option<f64>,
}

impl CensusResult {
    pub fn pairs(&self) -> usize {
        self.histogram.iter().map(|h| h.count).sum()
    }

    /// `Σ m_δ²` over the histogram.
    pub fn quadruple_count(&self) -> u128 {
        self.histogram.iter().map(|h| (h.count as u128).pow(2)).sum()
    }

    pub fn to_csv(&self) -> Result<String, CoreError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["squared_distance", "multiplicity"]).map_err(csv_err)?;
        for h in &self.histogram {
            w.write_record([h.value.as_str(), &h.count.to_string()]).map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| CoreError::InvalidConfig(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv is utf-8"))
    }
}

fn csv_err(e: csv::Error) -> CoreError {
    CoreError::InvalidConfig(format!("csv: {e}"))
}

pub fn count_distinct(p1: &PointSet, p2: &PointSet, mode: CensusMode) -> Result<CensusResult, CoreError> {
    if p1.is_empty() || p2.is_empty() {
        return Err(CoreError::InvalidConfig("point sets must be nonempty".into()));
    }
    match mode {
        CensusMode::Exact => exact_census(p1, p2),
        CensusMode::Clustered { precision_digits, merge_tolerance } => {
            if !(merge_tolerance > 0.0) {
                return Err(CoreError::InvalidConfig("merge tolerance must be positive".into()));
            }
            clustered_census(p1, p2, precision_digits, merge_tolerance, mode)
        }
    }
}

fn exact_census(p1: &PointSet, p2: &PointSet) -> Result<CensusResult, CoreError> {
    let need = |p: &Point3| {
        p.exact.clone().ok_or_else(|| CoreError::InvalidConfig("exact census needs rational coordinates".into()))
    };
    let a: Vec<[Scalar; 3]> = p1.points.iter().map(need).collect::<Result<_, _>>()?;
    let b: Vec<[Scalar; 3]> = p2.points.iter().map(need).collect::<Result<_, _>>()?;
    let mut hist: BTreeMap<Scalar, usize> = BTreeMap::new();
    for p in &a {
        for q in &b {
            let d = (0..3).fold(Scalar::from_integer(0.into()), |acc, i| {
                let c = &p[i] - &q[i];
                acc + &c * &c
            });
            *hist.entry(d).or_default() += 1;
        }
    }
    Ok(CensusResult {
        distinct_count: hist.len(),
        histogram: hist.into_iter().map(|(v, count)| HistogramEntry { value: v.to_string(), count }).collect(),
        mode: CensusMode::Exact,
        min_relative_gap: None,
    })
}

fn relative_gap(a: &Real, b: &Real) -> f64 {
    let scale = a.abs().max(&b.abs());
    if scale.is_zero() {
        0.0
    } else {
        (&(b - a) / &scale).to_f64()
    }
}

fn clustered_census(
    p1: &PointSet,
    p2: &PointSet,
    digits: u32,
    tol: f64,
    mode: CensusMode,
) -> Result<CensusResult, CoreError> {
    let bits = bits_for_digits(digits);
    let b: Vec<Vec3> = p2.points.iter().map(|q| q.coords.clone().map(|c| c.with_bits(bits))).collect();
    let mut values: Vec<Real> = p1
        .points
        .par_iter()
        .flat_map_iter(|p| {
            let p = p.coords.clone().map(|c| c.with_bits(bits));
            b.iter().map(move |q| dist2(&p, q)).collect::<Vec<_>>()
        })
        .collect();
    values.sort_by(|x, y| x.partial_cmp(y).expect("finite distances"));
    let mut histogram = Vec::new();
    let mut min_gap: Option<f64> = None;
    let mut start = 0;
    for i in 1..=values.len() {
        if i < values.len() {
            let g = relative_gap(&values[i - 1], &values[i]);
            if g > tol / AMBIGUITY_MARGIN && g <= tol * AMBIGUITY_MARGIN {
                return Err(CoreError::Ambiguous(format!(
                    "relative gap {g:e} between {} and {} is too close to the merge tolerance {tol:e}",
                    values[i - 1].to_decimal(20),
                    values[i].to_decimal(20)
                )));
            }
            if g <= tol {
                continue;
            }
            min_gap = Some(min_gap.map_or(g, |m: f64| m.min(g)));
        }
        histogram.push(HistogramEntry { value: values[start].to_decimal(digits), count: i - start });
        start = i;
    }
    Ok(CensusResult { distinct_count: histogram.len(), histogram, mode, min_relative_gap: min_gap })
}

/// Counts for points sampled uniformly in each curve's parameter domain.
pub fn growth_probe(
    c1: &NumericCurve,
    c2: &NumericCurve,
    sizes: &[(usize, usize)],
    seed: u64,
    mode: CensusMode,
) -> Result<Vec<CensusResult>, CoreError> {
    let (d1, d2) = (c1.sample_domain()?, c2.sample_domain()?);
    let bits = c1.bits();
    let mut out = Vec::with_capacity(sizes.len());
    for &(m, n) in sizes {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((m as u64) << 32 | n as u64));
        let mut sample = |c: &NumericCurve, (lo, hi): (f64, f64), k: usize| -> Result<PointSet, CoreError> {
            let pts: Result<Vec<Vec3>, CoreError> =
                (0..k).map(|_| c.evaluate(&Real::from_f64(rng.gen_range(lo..hi), bits))).collect();
            Ok(PointSet::from_reals(pts?))
        };
        let a = sample(c1, d1, m)?;
        let b = sample(c2, d2, n)?;
        out.push(count_distinct(&a, &b, mode)?);
    }
    Ok(out)
}
