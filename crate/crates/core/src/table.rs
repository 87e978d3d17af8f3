//! The structure-table JSON format and the `gr:m,n` space syntax.
//!
//! One object per pair, keys in this order:
//!
//! ```text
//! {"space":"gr:2,4","equivariant":false,"u":"1","v":"1","v_basis":"opposite",
//!  "terms":[{"w":"1,1","d":0,"N":"1"},...],"sum_check":"1"}
//! ```
//!
//! Numbers use the Laurent grammar throughout; non-equivariant values are
//! plain integers ("3", "-1"). A full table file is JSON Lines.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gkm::Orientation;
use crate::laurent::Laurent;
use crate::quantum::StructureTable;
use crate::weyl::{minrep_to_partition, partition_to_minrep, Partition};

/// `Gr(m,n)`, written `gr:m,n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SpaceSpec {
    pub m: usize,
    pub n: usize,
}

impl SpaceSpec {
    pub fn new(m: usize, n: usize) -> Result<Self> {
        if m == 0 || m >= n || n > u8::MAX as usize {
            return Err(Error::InvalidShape(format!("gr:{m},{n} needs 0 < m < n")));
        }
        Ok(SpaceSpec { m, n })
    }
}

impl fmt::Display for SpaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "gr:{},{}", self.m, self.n)
    }
}

impl FromStr for SpaceSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("expected gr:m,n, got {s:?}"));
        let (m, n) = s.trim().strip_prefix("gr:").and_then(|r| r.split_once(',')).ok_or_else(bad)?;
        let m = m.trim().parse().map_err(|_| bad())?;
        let n = n.trim().parse().map_err(|_| bad())?;
        SpaceSpec::new(m, n)
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
struct TermJson {
    w: String,
    d: usize,
    #[serde(rename = "N")]
    n: String,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
struct PairJson {
    space: String,
    equivariant: bool,
    u: String,
    v: String,
    v_basis: String,
    terms: Vec<TermJson>,
    sum_check: String,
}

fn orientation_from_name(s: &str) -> Result<Orientation> {
    match s {
        "plain" => Ok(Orientation::Plain),
        "opposite" => Ok(Orientation::Opposite),
        _ => Err(Error::Parse(format!("v_basis must be plain or opposite, got {s:?}"))),
    }
}

/// One JSON object (no trailing newline). Non-equivariant tables are
/// specialized at 1 first, dropping entries that vanish there.
pub fn to_json(table: &StructureTable, equivariant: bool) -> Result<String> {
    let table = if equivariant { table.clone() } else { table.specialized() };
    let m = table.m;
    let terms = table
        .entries
        .iter()
        .map(|(w, d, c)| Ok(TermJson { w: minrep_to_partition(w, m)?.to_string(), d: *d, n: c.to_string() }))
        .collect::<Result<Vec<_>>>()?;
    let sum = if table.entries.is_empty() { Laurent::zero(0) } else { table.sum() };
    let pair = PairJson {
        space: SpaceSpec::new(m, table.n)?.to_string(),
        equivariant,
        u: minrep_to_partition(&table.u, m)?.to_string(),
        v: minrep_to_partition(&table.v, m)?.to_string(),
        v_basis: table.v_basis.name().to_string(),
        terms,
        sum_check: sum.to_string(),
    };
    Ok(serde_json::to_string(&pair)?)
}

/// A table read back from JSON.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IngestedTable {
    pub space: SpaceSpec,
    pub equivariant: bool,
    pub table: StructureTable,
    /// `sum_check` as written in the input.
    pub stored_sum_check: String,
}

impl IngestedTable {
    /// The sum of all `N`, recomputed from the terms.
    pub fn sum_check(&self) -> Laurent {
        let nv = if self.equivariant { self.space.n } else { 0 };
        self.table.entries.iter().fold(Laurent::zero(nv), |a, e| &a + &e.2)
    }

    /// Whether the stored `sum_check` agrees with the recomputed one.
    pub fn sum_check_consistent(&self) -> bool {
        let nv = if self.equivariant { self.space.n } else { 0 };
        Laurent::parse(&self.stored_sum_check, nv).is_ok_and(|s| s == self.sum_check())
    }
}

pub fn from_json(line: &str) -> Result<IngestedTable> {
    let pair: PairJson = serde_json::from_str(line)?;
    let space: SpaceSpec = pair.space.parse()?;
    let (m, n) = (space.m, space.n);
    let nv = if pair.equivariant { n } else { 0 };
    let idx = |s: &str| -> Result<_> { partition_to_minrep(&s.parse::<Partition>()?, m, n) };
    let entries = pair
        .terms
        .iter()
        .map(|t| Ok((idx(&t.w)?, t.d, Laurent::parse(&t.n, nv)?)))
        .collect::<Result<Vec<_>>>()?;
    let table = StructureTable {
        m,
        n,
        u: idx(&pair.u)?,
        v: idx(&pair.v)?,
        v_basis: orientation_from_name(&pair.v_basis)?,
        entries,
    };
    Ok(IngestedTable { space, equivariant: pair.equivariant, table, stored_sum_check: pair.sum_check })
}

/// Reads a JSON Lines table file; blank lines are skipped.
pub fn read_jsonl(text: &str) -> Result<Vec<IngestedTable>> {
    text.lines().filter(|l| !l.trim().is_empty()).map(from_json).collect()
}
