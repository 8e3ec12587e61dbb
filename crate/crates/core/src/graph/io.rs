use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use super::{Graph, NodeId};
use crate::error::{Error, Result};

/// Bijection between the ids found in an input file and dense `0..n` ids.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IdMap {
    original: Vec<u64>,
    dense: HashMap<u64, NodeId>,
}

impl IdMap {
    /// Dense ids assigned in ascending order of original id.
    pub fn from_ids(ids: impl IntoIterator<Item = u64>) -> Self {
        let mut original: Vec<u64> = ids.into_iter().collect();
        original.sort_unstable();
        original.dedup();
        let dense = original.iter().enumerate().map(|(d, &o)| (o, d)).collect();
        IdMap { original, dense }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_ids(0..n as u64)
    }

    pub fn len(&self) -> usize {
        self.original.len()
    }

    pub fn is_empty(&self) -> bool {
        self.original.is_empty()
    }

    pub fn dense(&self, original: u64) -> Option<NodeId> {
        self.dense.get(&original).copied()
    }

    pub fn original(&self, dense: NodeId) -> u64 {
        self.original[dense]
    }

    /// `original_id<TAB>dense_id` per line.
    pub fn write_sidecar(&self, path: &Path) -> Result<()> {
        let mut w = create(path)?;
        for (d, o) in self.original.iter().enumerate() {
            writeln!(w, "{o}\t{d}").map_err(|e| Error::io(path, e))?;
        }
        w.flush().map_err(|e| Error::io(path, e))
    }
}

#[derive(Debug, Clone)]
pub struct LoadedGraph {
    pub graph: Graph,
    pub ids: IdMap,
}

pub fn load_edge_list(path: &Path, directed: bool) -> Result<LoadedGraph> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    parse_edge_list(BufReader::new(file), path, directed)
}

/// Parses `src dst` lines (space or tab separated). `#` lines and blank lines
/// are skipped. A self-loop line registers its node but adds no edge.
pub fn parse_edge_list(reader: impl BufRead, name: &Path, directed: bool) -> Result<LoadedGraph> {
    let raw = read_pairs(reader, name)?;
    if raw.is_empty() {
        return Err(Error::EmptyInput(name.to_path_buf()));
    }
    let ids = IdMap::from_ids(raw.iter().flat_map(|&(a, b)| [a, b]));
    let edges = raw.iter().map(|&(a, b)| (ids.dense[&a], ids.dense[&b]));
    let graph = Graph::from_edges(ids.len(), edges, directed);
    Ok(LoadedGraph { graph, ids })
}

/// Reads a two-column file of non-negative integer pairs.
pub fn read_pair_file(path: &Path) -> Result<Vec<(u64, u64)>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_pairs(BufReader::new(file), path)
}

fn read_pairs(reader: impl BufRead, name: &Path) -> Result<Vec<(u64, u64)>> {
    let mut out = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io(name, e))?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let parse_err = |msg: String| Error::Parse {
            path: name.to_path_buf(),
            line: idx + 1,
            msg,
        };
        let mut fields = trimmed.split_whitespace();
        let (Some(a), Some(b), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(parse_err(format!("expected two columns, got {trimmed:?}")));
        };
        let a = a
            .parse::<u64>()
            .map_err(|_| parse_err(format!("bad node id {a:?}")))?;
        let b = b
            .parse::<u64>()
            .map_err(|_| parse_err(format!("bad node id {b:?}")))?;
        out.push((a, b));
    }
    Ok(out)
}

/// Writes dense ids. Symmetric graphs emit each edge once; isolated nodes are
/// written as self-loop lines so the node count survives a round trip.
pub fn write_edge_list(path: &Path, graph: &Graph) -> Result<()> {
    let mut w = create(path)?;
    let io = |e| Error::io(path, e);
    for i in 0..graph.node_count() {
        if graph.out_degree(i) == 0 && graph.in_neighbors(i).is_empty() {
            writeln!(w, "{i}\t{i}").map_err(io)?;
        }
        for &j in graph.out_neighbors(i) {
            if !graph.is_symmetric() || i < j {
                writeln!(w, "{i}\t{j}").map_err(io)?;
            }
        }
    }
    w.flush().map_err(io)
}

pub(crate) fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::io(PathBuf::from(path), e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str, directed: bool) -> Result<LoadedGraph> {
        parse_edge_list(s.as_bytes(), Path::new("mem"), directed)
    }

    #[test]
    fn direct_parse() {
        let g = parse("0 1\n1 2", true).unwrap().graph;
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.arcs().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn remaps_sparse_ids() {
        let l = parse("5 9\n9 5", true).unwrap();
        assert_eq!(l.graph.node_count(), 2);
        assert_eq!(l.graph.arcs().collect::<Vec<_>>(), vec![(0, 1), (1, 0)]);
        assert_eq!(l.ids.original(0), 5);
        assert_eq!(l.ids.dense(9), Some(1));
    }

    #[test]
    fn self_loop_registers_node_only() {
        let g = parse("0 0", true).unwrap().graph;
        assert_eq!(g.node_count(), 1);
        assert_eq!(g.arc_count(), 0);
    }

    #[test]
    fn comments_tabs_and_duplicates() {
        let g = parse("# header\n0\t1\n\n0 1\n1 0\n", false).unwrap().graph;
        assert_eq!(g.node_count(), 2);
        assert_eq!(g.arc_count(), 2);
    }

    #[test]
    fn errors() {
        assert!(matches!(parse("", false), Err(Error::EmptyInput(_))));
        assert!(matches!(parse("# only\n", false), Err(Error::EmptyInput(_))));
        match parse("0 1\n1 x\n", false) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse("0 1 2\n", false), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse("-1 2\n", false), Err(Error::Parse { .. })));
        assert!(matches!(
            load_edge_list(Path::new("/nonexistent/edges.txt"), false),
            Err(Error::Io { .. })
        ));
    }

    #[test]
    fn write_then_load_keeps_isolated_nodes() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.txt");
        let g = Graph::from_edges(4, [(0, 1), (1, 2)], false);
        write_edge_list(&path, &g).unwrap();
        let back = load_edge_list(&path, false).unwrap();
        assert_eq!(back.graph, g);
        let side = dir.path().join("ids.tsv");
        back.ids.write_sidecar(&side).unwrap();
        assert_eq!(std::fs::read_to_string(side).unwrap(), "0\t0\n1\t1\n2\t2\n3\t3\n");
    }
}
