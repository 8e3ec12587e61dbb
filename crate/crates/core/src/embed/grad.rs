use std::collections::HashMap;

use super::store::{Slot, Table};

/// Sparse per-slot gradient rows, in first-touch order.
#[derive(Debug, Clone)]
pub struct GradAccumulator {
    dim: usize,
    index: HashMap<(Table, Slot), usize>,
    keys: Vec<(Table, Slot)>,
    buf: Vec<f64>,
}

impl GradAccumulator {
    pub fn new(dim: usize) -> Self {
        GradAccumulator {
            dim,
            index: HashMap::new(),
            keys: Vec::new(),
            buf: Vec::new(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    fn row_mut(&mut self, table: Table, slot: Slot) -> &mut [f64] {
        let d = self.dim;
        let k = *self.index.entry((table, slot)).or_insert_with(|| {
            self.keys.push((table, slot));
            self.buf.resize(self.buf.len() + d, 0.0);
            self.keys.len() - 1
        });
        &mut self.buf[k * d..(k + 1) * d]
    }

    /// `row(table, slot) += scale * v`
    pub fn add(&mut self, table: Table, slot: Slot, scale: f64, v: &[f64]) {
        for (r, x) in self.row_mut(table, slot).iter_mut().zip(v) {
            *r += scale * x;
        }
    }

    /// `row(table, slot) += sa * a + sb * b`
    pub fn add2(&mut self, table: Table, slot: Slot, sa: f64, a: &[f64], sb: f64, b: &[f64]) {
        for ((r, x), y) in self.row_mut(table, slot).iter_mut().zip(a).zip(b) {
            *r += sa * x + sb * y;
        }
    }

    /// Adds every row of `other` into `self`.
    pub fn merge(&mut self, other: &GradAccumulator) {
        for (k, &(table, slot)) in other.keys.iter().enumerate() {
            let src = &other.buf[k * other.dim..(k + 1) * other.dim];
            for (r, x) in self.row_mut(table, slot).iter_mut().zip(src) {
                *r += x;
            }
        }
    }

    pub fn get(&self, table: Table, slot: Slot) -> Option<&[f64]> {
        self.index.get(&(table, slot)).map(|&k| &self.buf[k * self.dim..(k + 1) * self.dim])
    }

    /// Rows in first-touch order.
    pub fn iter(&self) -> impl Iterator<Item = ((Table, Slot), &[f64])> + '_ {
        self.keys.iter().copied().zip(self.buf.chunks(self.dim.max(1)))
    }
}
