use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{AnchorSet, NodeId};
use crate::relabel::Side;

pub type Slot = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Table {
    /// `u`
    Node = 0,
    /// `u'`
    InContext = 1,
    /// `u''`
    OutContext = 2,
}

impl Table {
    pub const ALL: [Table; 3] = [Table::Node, Table::InContext, Table::OutContext];
}

/// Three row-major `slots x dim` tables plus the node-to-slot alias map.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingStore {
    dim: usize,
    slot_s: Vec<Slot>,
    slot_t: Vec<Slot>,
    n_slots: usize,
    tables: [Vec<f64>; 3],
}

impl EmbeddingStore {
    /// Coordinates are uniform in `[-0.5/d, 0.5/d]`. When `shared` is set,
    /// the two members of every anchor pair resolve to one slot.
    pub fn new(n_s: usize, n_t: usize, anchors: &AnchorSet, shared: bool, dim: usize, seed: u64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("embedding dimension must be >= 1".into()));
        }
        let slot_s: Vec<Slot> = (0..n_s).collect();
        let mut slot_t = vec![usize::MAX; n_t];
        if shared {
            for &(s, t) in anchors.pairs() {
                slot_t[t] = s;
            }
        }
        let mut next = n_s;
        for slot in slot_t.iter_mut().filter(|s| **s == usize::MAX) {
            *slot = next;
            next += 1;
        }

        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let bound = 0.5 / dim as f64;
        let mut fill = || (0..next * dim).map(|_| rng.random_range(-bound..=bound)).collect::<Vec<f64>>();
        let tables = [fill(), fill(), fill()];
        Ok(EmbeddingStore {
            dim,
            slot_s,
            slot_t,
            n_slots: next,
            tables,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn slot_count(&self) -> usize {
        self.n_slots
    }

    pub fn node_count(&self, side: Side) -> usize {
        match side {
            Side::Source => self.slot_s.len(),
            Side::Target => self.slot_t.len(),
        }
    }

    pub fn slot(&self, side: Side, node: NodeId) -> Slot {
        match side {
            Side::Source => self.slot_s[node],
            Side::Target => self.slot_t[node],
        }
    }

    pub fn row(&self, table: Table, slot: Slot) -> &[f64] {
        &self.tables[table as usize][slot * self.dim..(slot + 1) * self.dim]
    }

    pub fn row_mut(&mut self, table: Table, slot: Slot) -> &mut [f64] {
        let d = self.dim;
        &mut self.tables[table as usize][slot * d..(slot + 1) * d]
    }

    pub fn vector(&self, table: Table, side: Side, node: NodeId) -> &[f64] {
        self.row(table, self.slot(side, node))
    }

    pub fn all_finite(&self) -> bool {
        self.tables.iter().all(|t| t.iter().all(|x| x.is_finite()))
    }
}
