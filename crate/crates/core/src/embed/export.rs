use std::io::Write;
use std::path::Path;

use super::store::{EmbeddingStore, Table};
use super::trainer::TraceRow;
use crate::error::{Error, Result};
use crate::graph::io_create;
use crate::relabel::Side;

/// First line is `header` verbatim (a JSON object); then one
/// `network<TAB>node<TAB>v1,...,vd` line per node with 9 significant digits.
pub fn write_embeddings(path: &Path, store: &EmbeddingStore, header: &str) -> Result<()> {
    let mut w = io_create(path)?;
    let io = |e| Error::io(path, e);
    writeln!(w, "{header}").map_err(io)?;
    let mut line = String::new();
    for side in [Side::Source, Side::Target] {
        for node in 0..store.node_count(side) {
            line.clear();
            for (k, x) in store.vector(Table::Node, side, node).iter().enumerate() {
                if k > 0 {
                    line.push(',');
                }
                line.push_str(&format!("{x:.8e}"));
            }
            writeln!(w, "{}\t{node}\t{line}", side.tag()).map_err(io)?;
        }
    }
    w.flush().map_err(io)
}

/// CSV `round,epoch,label_count,label_objective,context_objective`.
pub fn write_trace_csv(path: &Path, trace: &[TraceRow]) -> Result<()> {
    let mut w = io_create(path)?;
    let io = |e| Error::io(path, e);
    writeln!(w, "round,epoch,label_count,label_objective,context_objective").map_err(io)?;
    for r in trace {
        let label = r.label_objective.map(|v| v.to_string()).unwrap_or_default();
        writeln!(w, "{},{},{},{},{}", r.round, r.epoch, r.label_count, label, r.context_objective).map_err(io)?;
    }
    w.flush().map_err(io)
}
