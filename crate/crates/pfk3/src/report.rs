//! Machine-readable run reports with canonical JSON encoding.
//!
//! Canonical form: keys sorted, integers only (no floats), one trailing
//! newline.  Wall times are recorded only when explicitly requested so
//! that default reports are byte-stable across runs.

use crate::exactmath::fp::Fp;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

pub const REPORT_SCHEMA: &str = "pfk3-report/1";
pub const MAP_POINT_SCHEMA: &str = "pfk3-map-point/1";
pub const STATS_SCHEMA: &str = "pfk3-fiber-stats/1";

/// Serializes any value as canonical JSON: sorted keys (serde_json maps
/// are ordered), newline-terminated.
pub fn canonical_json<T: Serialize>(value: &T) -> Result<String, serde_json::Error> {
    let v = serde_json::to_value(value)?;
    let mut s = v.to_string();
    s.push('\n');
    Ok(s)
}

/// One verification check: a stable name, the mathematical statement it
/// certifies, the outcome, and supporting witness data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    /// The statement certified, e.g. "length of the fiber over y is 4".
    pub anchor: String,
    /// "pass" or "fail".
    pub status: String,
    pub witness: BTreeMap<String, serde_json::Value>,
    /// Wall time; populated only when timings are requested.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u64>,
}

impl CheckRecord {
    pub fn pass(name: impl Into<String>, anchor: impl Into<String>) -> Self {
        CheckRecord {
            name: name.into(),
            anchor: anchor.into(),
            status: "pass".into(),
            witness: BTreeMap::new(),
            wall_ms: None,
        }
    }

    pub fn fail(name: impl Into<String>, anchor: impl Into<String>, why: impl Into<String>) -> Self {
        let mut r = CheckRecord {
            name: name.into(),
            anchor: anchor.into(),
            status: "fail".into(),
            witness: BTreeMap::new(),
            wall_ms: None,
        };
        r.witness
            .insert("error".into(), serde_json::Value::String(why.into()));
        r
    }

    pub fn with(mut self, key: &str, value: impl Into<serde_json::Value>) -> Self {
        self.witness.insert(key.into(), value.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.status == "pass"
    }
}

/// Aggregate report of a verification run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema: String,
    pub version: String,
    pub seed: u64,
    pub prime: u64,
    pub rng: String,
    /// Full configuration of the run (suite, counts, budget).
    pub config: BTreeMap<String, String>,
    pub checks: Vec<CheckRecord>,
    /// "pass" iff every check passed.
    pub verdict: String,
}

impl RunReport {
    pub fn new(seed: u64, prime: u64, config: BTreeMap<String, String>) -> Self {
        RunReport {
            schema: REPORT_SCHEMA.into(),
            version: env!("CARGO_PKG_VERSION").into(),
            seed,
            prime,
            rng: crate::exactmath::rng::RNG_ALGORITHM.into(),
            config,
            checks: Vec::new(),
            verdict: "pass".into(),
        }
    }

    pub fn push(&mut self, record: CheckRecord) {
        self.checks.push(record);
    }

    /// Sorts records by name (indices are zero-padded inside names, so
    /// this is also index order) and settles the verdict.
    pub fn finalize(&mut self) {
        self.checks.sort_by(|a, b| a.name.cmp(&b.name));
        self.verdict = if self.checks.iter().all(|c| c.passed()) {
            "pass".into()
        } else {
            "fail".into()
        };
    }

    pub fn passed(&self) -> bool {
        self.verdict == "pass"
    }

    pub fn first_failure(&self) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| !c.passed())
    }
}

pub fn fp_values(coords: &[Fp]) -> Vec<u64> {
    coords.iter().map(|c| c.value()).collect()
}

/// A split point in a map-point report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitPointRecord {
    pub plucker: Vec<u64>,
    pub plane_basis: Vec<Vec<u64>>,
    pub multiplicity: usize,
}

/// Report of one evaluation y -> xi(y).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapPointReport {
    pub schema: String,
    pub seed: u64,
    pub prime: u64,
    pub y: Vec<u64>,
    /// "ok" for a zero-dimensional fiber, "degenerate" otherwise.
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub length: Option<usize>,
    pub dimension: i64,
    /// (degree, multiplicity) per irreducible eliminant factor.
    pub eliminant_factor_degrees: Vec<(usize, usize)>,
    pub eliminant_squarefree: bool,
    pub split_points: Vec<SplitPointRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u64>,
}

/// Report of fiber statistics over many sampled y.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberStatsReport {
    pub schema: String,
    pub seed: u64,
    pub prime: u64,
    pub fibers: usize,
    pub length_four: usize,
    pub squarefree: usize,
    /// Squarefree fraction in percent, rounded down (integers keep the
    /// encoding canonical).
    pub squarefree_percent: usize,
    pub degree_patterns: Vec<(Vec<usize>, usize)>,
}
