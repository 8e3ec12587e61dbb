use std::io::Write;
use std::path::Path;

use wlalign::graph::{load_edge_list, read_pair_file, sample_anchors, AnchorSet, Graph, IdMap, NodeId};

use crate::config::ExperimentConfig;
use crate::error::{CliError, CliResult};

/// A graph pair with its training anchors and held-out pairs, in dense ids.
pub struct Dataset {
    pub g_s: Graph,
    pub g_t: Graph,
    pub ids_s: IdMap,
    pub ids_t: IdMap,
    pub anchors: AnchorSet,
    pub test: Vec<(NodeId, NodeId)>,
}

impl Dataset {
    pub fn load(cfg: &ExperimentConfig, split_seed: u64) -> CliResult<Self> {
        let need = |p: &Option<std::path::PathBuf>, key: &str| {
            p.clone().ok_or_else(|| CliError::Usage(format!("`{key}` is required")))
        };
        let s = load_edge_list(&need(&cfg.source, "source")?, cfg.directed)?;
        let t = load_edge_list(&need(&cfg.target, "target")?, cfg.directed)?;
        let dense = |path: &Path| -> CliResult<AnchorSet> {
            Ok(AnchorSet::from_original(&read_pair_file(path)?, &s.ids, &t.ids)?)
        };
        let (anchors, test) = match (&cfg.anchors, &cfg.pairs) {
            (Some(a), _) => {
                let test = match &cfg.test {
                    Some(p) => dense(p)?.pairs().to_vec(),
                    None => Vec::new(),
                };
                (dense(a)?, test)
            }
            (None, Some(p)) => {
                let corr = dense(p)?;
                sample_anchors(s.ids.len(), t.ids.len(), corr.pairs(), cfg.train_ratio, split_seed)?
            }
            (None, None) => return Err(CliError::Usage("either `anchors` or `pairs` is required".into())),
        };
        Ok(Dataset {
            g_s: s.graph,
            g_t: t.graph,
            ids_s: s.ids,
            ids_t: t.ids,
            anchors,
            test,
        })
    }

    /// Nodes the label-quality metrics are computed on: the held-out pair
    /// members, or every non-anchor node when there is no test set.
    pub fn eval_nodes(&self) -> (Vec<NodeId>, Vec<NodeId>) {
        if !self.test.is_empty() {
            let mut s: Vec<_> = self.test.iter().map(|p| p.0).collect();
            let mut t: Vec<_> = self.test.iter().map(|p| p.1).collect();
            s.sort_unstable();
            t.sort_unstable();
            return (s, t);
        }
        let (a_s, a_t) = (self.anchors.s_index(), self.anchors.t_index());
        (
            (0..self.g_s.node_count()).filter(|v| !a_s.contains_key(v)).collect(),
            (0..self.g_t.node_count()).filter(|v| !a_t.contains_key(v)).collect(),
        )
    }

    pub fn write_id_maps(&self, dir: &Path) -> CliResult<()> {
        self.ids_s.write_sidecar(&dir.join("ids_s.tsv"))?;
        self.ids_t.write_sidecar(&dir.join("ids_t.tsv"))?;
        Ok(())
    }
}

/// Tab-separated pair file readable by `read_pair_file`.
pub fn write_pairs(path: &Path, pairs: &[(NodeId, NodeId)]) -> CliResult<()> {
    let io = |e| wlalign::Error::Io {
        path: path.to_path_buf(),
        source: e,
    };
    let mut w = std::io::BufWriter::new(std::fs::File::create(path).map_err(io)?);
    for (a, b) in pairs {
        writeln!(w, "{a}\t{b}").map_err(io)?;
    }
    w.flush().map_err(io)?;
    Ok(())
}

pub fn create_dir(dir: &Path) -> CliResult<()> {
    std::fs::create_dir_all(dir).map_err(|e| {
        wlalign::Error::Io {
            path: dir.to_path_buf(),
            source: e,
        }
        .into()
    })
}
