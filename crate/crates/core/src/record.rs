use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::coloring::Coloring;
use crate::group::GroupSpec;

/// Which number is being computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// aw(G,k): all exact colorings.
    Aw,
    /// awu(G,k): exact colorings with a uniquely colored element.
    Awu,
}

impl Mode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::Aw => "aw",
            Mode::Awu => "awu",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "aw" => Ok(Mode::Aw),
            "awu" => Ok(Mode::Awu),
            other => Err(format!("unknown mode `{other}` (expected aw or awu)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Formula,
    Oracle,
    Cache,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Formula => "formula",
            Provenance::Oracle => "oracle",
            Provenance::Cache => "cache",
        })
    }
}

/// A computed aw/awu value. When a witness is attached it is a rainbow-free
/// coloring of `spec` with `value - 1` colors (unitary in [`Mode::Awu`]).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AwRecord {
    pub spec: GroupSpec,
    pub k: usize,
    pub mode: Mode,
    pub value: u64,
    pub provenance: Provenance,
    pub witness: Option<Coloring>,
}
