//! The shipped case catalog, one JSON file per case.

use std::fmt;
use std::path::Path;

use super::spec::CaseSpec;
use crate::error::CoreError;

const FILES: &[&str] = &[
    include_str!("../../cases/A01.json"),
    include_str!("../../cases/A02.json"),
    include_str!("../../cases/A03.json"),
    include_str!("../../cases/A04.json"),
    include_str!("../../cases/A05.json"),
    include_str!("../../cases/A06.json"),
    include_str!("../../cases/A07.json"),
    include_str!("../../cases/A08.json"),
    include_str!("../../cases/A09.json"),
    include_str!("../../cases/A10.json"),
    include_str!("../../cases/A11.json"),
    include_str!("../../cases/A12.json"),
    include_str!("../../cases/A13.json"),
    include_str!("../../cases/A14.json"),
    include_str!("../../cases/A15.json"),
    include_str!("../../cases/A16.json"),
    include_str!("../../cases/A17.json"),
    include_str!("../../cases/A18.json"),
    include_str!("../../cases/A19.json"),
    include_str!("../../cases/A20.json"),
    include_str!("../../cases/A21.json"),
    include_str!("../../cases/A22.json"),
    include_str!("../../cases/A23.json"),
    include_str!("../../cases/B01.json"),
    include_str!("../../cases/B02.json"),
    include_str!("../../cases/B03.json"),
    include_str!("../../cases/B04.json"),
    include_str!("../../cases/B05.json"),
    include_str!("../../cases/B06.json"),
    include_str!("../../cases/B07.json"),
    include_str!("../../cases/B08.json"),
    include_str!("../../cases/C01.json"),
    include_str!("../../cases/C02.json"),
    include_str!("../../cases/C03.json"),
    include_str!("../../cases/C04.json"),
    include_str!("../../cases/C05.json"),
];

/// `A`: every ellipse case (general and centered lists). `B`: the centered
/// list alone. `C`: hyperbolas.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    A,
    B,
    C,
    All,
}

impl Suite {
    pub fn contains(self, case: &CaseSpec) -> bool {
        match self {
            Suite::A => case.suite == "A" || case.suite == "B",
            Suite::B => case.suite == "B",
            Suite::C => case.suite == "C",
            Suite::All => true,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::A => "A",
            Suite::B => "B",
            Suite::C => "C",
            Suite::All => "all",
        })
    }
}

impl std::str::FromStr for Suite {
    type Err = CoreError;
    fn from_str(s: &str) -> Result<Suite, CoreError> {
        match s {
            "A" | "a" => Ok(Suite::A),
            "B" | "b" => Ok(Suite::B),
            "C" | "c" => Ok(Suite::C),
            "all" => Ok(Suite::All),
            other => Err(CoreError::InvalidConfig(format!("unknown suite `{other}`"))),
        }
    }
}

/// Sort key: suite letter, then case number.
pub fn id_order(id: &str) -> (String, u32) {
    let split = id.find(|c: char| c.is_ascii_digit()).unwrap_or(id.len());
    (id[..split].to_string(), id[split..].parse().unwrap_or(0))
}

pub fn builtin_catalog() -> Vec<CaseSpec> {
    FILES
        .iter()
        .map(|text| serde_json::from_str(text).expect("shipped case file is valid"))
        .collect()
}

/// Loads every `*.json` file of a directory.
pub fn load_catalog_dir(dir: &Path) -> Result<Vec<CaseSpec>, CoreError> {
    let mut paths: Vec<_> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    let mut cases = Vec::with_capacity(paths.len());
    for p in paths {
        cases.push(serde_json::from_str(&std::fs::read_to_string(&p)?)?);
    }
    cases.sort_by_key(|c: &CaseSpec| id_order(&c.id));
    Ok(cases)
}
