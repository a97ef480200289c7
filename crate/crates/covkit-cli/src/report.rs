//! Typed reports, one struct per subcommand. Every run prints exactly one
//! of these to standard output as a single compact JSON line; the shapes
//! are frozen in ../report.schema.json. Rationals appear as
//! `[numer, denom]` pairs, matching the instance file format.

use serde::{Deserialize, Serialize};

use covkit::reduce::PipelineReport;

pub type Pair = (i64, i64);

#[derive(Serialize, Deserialize, PartialEq, Debug)]
#[serde(deny_unknown_fields)]
pub struct GenMaxlinReport {
    pub command: String,
    pub n: usize,
    pub m: usize,
    pub q: u32,
    pub c: Pair,
    pub s: Pair,
    pub seed: u64,
    pub planted_violations: usize,
    pub out: String,
}

#[derive(Serialize, Deserialize, PartialEq, Debug)]
#[serde(deny_unknown_fields)]
pub struct BuildFamilyReport {
    pub command: String,
    pub m: usize,
    pub k: usize,
    pub alpha: Pair,
    pub epsilon: Pair,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub functions: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub guarantee_regime: Option<bool>,
    pub out: String,
}

#[derive(Serialize, Deserialize, PartialEq, Debug)]
#[serde(deny_unknown_fields)]
pub struct BuildCoverReport {
    pub command: String,
    pub family: String,
    pub m: usize,
    pub k: usize,
    pub alpha: Pair,
    pub epsilon: Pair,
    pub sets: usize,
    pub size_bound: Pair,
    pub out: String,
}

#[derive(Serialize, Deserialize, PartialEq, Debug)]
#[serde(deny_unknown_fields)]
pub struct ReduceMaxlinToMldReport {
    pub command: String,
    pub input: String,
    pub rows: usize,
    pub cols: usize,
    pub ell: usize,
    pub gamma: Pair,
    pub out: String,
}

#[derive(Serialize, Deserialize, PartialEq, Debug)]
#[serde(deny_unknown_fields)]
pub struct ReduceGroupNaiveReport {
    pub command: String,
    pub input: String,
    pub k: usize,
    pub epsilon: Pair,
    pub chunk_weight: usize,
    pub labels: usize,
    pub gamma_prime: Pair,
    pub out: String,
}

#[derive(Serialize, Deserialize, PartialEq, Debug)]
#[serde(deny_unknown_fields)]
pub struct ReduceGroupCoverReport {
    pub command: String,
    pub input: String,
    pub cover: String,
    pub k: usize,
    pub labels: usize,
    pub gamma_prime: Pair,
    pub out: String,
}

#[derive(Serialize, Deserialize, PartialEq, Debug)]
#[serde(deny_unknown_fields)]
pub struct ReduceKmldToNcpReport {
    pub command: String,
    pub input: String,
    pub rows: usize,
    pub cols: usize,
    pub k: usize,
    pub gamma: Pair,
    pub out: String,
}

#[derive(Serialize, Deserialize, PartialEq, Debug)]
#[serde(deny_unknown_fields)]
pub struct ReducePipelineReport {
    pub command: String,
    pub input: String,
    pub report: PipelineReport,
    pub out: String,
}

#[derive(Serialize, Deserialize, PartialEq, Debug)]
#[serde(deny_unknown_fields)]
pub struct VerifyReport {
    pub command: String,
    pub ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failures: Option<u64>,
}

#[derive(Serialize, Deserialize, PartialEq, Debug)]
#[serde(deny_unknown_fields)]
pub struct SolveReport {
    pub command: String,
    pub input: String,
    pub found: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub optimum: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weight_cap: Option<usize>,
}

#[derive(Serialize, Deserialize, PartialEq, Debug)]
#[serde(deny_unknown_fields)]
pub struct ClassifyReport {
    pub command: String,
    pub input: String,
    pub kind: String,
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub achieved: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<u32>>,
}
