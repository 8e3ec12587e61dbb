use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::rsa::RsaReport;
use crate::error::{Error, Result};
use crate::graph::io_create;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrecisionPoint {
    pub n: usize,
    pub precision: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMetadata {
    pub variant: String,
    pub seeds: BTreeMap<String, u64>,
    pub config_hash: String,
    pub n_source: usize,
    pub n_target: usize,
    pub n_train_anchors: usize,
    pub n_test_pairs: usize,
    pub rounds: usize,
    pub labels_converged: bool,
    pub objective_converged: bool,
}

/// Everything `align` reports. Timings are kept apart from the rest so that
/// two runs with the same seeds can be compared field by field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub metadata: RunMetadata,
    pub precision: Vec<PrecisionPoint>,
    pub rsa: Option<RsaReport>,
    pub label_similarity: Option<f64>,
    pub coverage_s: Option<f64>,
    pub coverage_t: Option<f64>,
    pub timings: BTreeMap<String, f64>,
}

impl EvalReport {
    pub fn precision_at(&self, n: usize) -> Option<f64> {
        self.precision.iter().find(|p| p.n == n).map(|p| p.precision)
    }
}

/// CSV with header `N,precision`.
pub fn write_precision_csv(path: &Path, points: &[PrecisionPoint]) -> Result<()> {
    let mut w = io_create(path)?;
    let io = |e| Error::io(path, e);
    writeln!(w, "N,precision").map_err(io)?;
    for p in points {
        writeln!(w, "{},{}", p.n, p.precision).map_err(io)?;
    }
    w.flush().map_err(io)
}
