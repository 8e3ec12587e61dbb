use serde::{Deserialize, Serialize};

use super::grad::GradAccumulator;
use super::store::{EmbeddingStore, Table};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdamConfig {
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
}

impl Default for AdamConfig {
    fn default() -> Self {
        AdamConfig {
            lr: 0.05,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
        }
    }
}

/// Sparse ("lazy") Adam: only slots present in a gradient have their moments
/// and parameters touched. Bias correction uses the global step count.
#[derive(Debug, Clone)]
pub struct AdamState {
    pub config: AdamConfig,
    step: u64,
    m: [Vec<f64>; 3],
    v: [Vec<f64>; 3],
}

impl AdamState {
    pub fn new(config: AdamConfig, store: &EmbeddingStore) -> Self {
        let len = store.slot_count() * store.dim();
        AdamState {
            config,
            step: 0,
            m: [vec![0.0; len], vec![0.0; len], vec![0.0; len]],
            v: [vec![0.0; len], vec![0.0; len], vec![0.0; len]],
        }
    }

    pub fn step_count(&self) -> u64 {
        self.step
    }

    pub fn first_moment(&self, table: Table, slot: usize, dim: usize) -> &[f64] {
        &self.m[table as usize][slot * dim..(slot + 1) * dim]
    }

    pub fn second_moment(&self, table: Table, slot: usize, dim: usize) -> &[f64] {
        &self.v[table as usize][slot * dim..(slot + 1) * dim]
    }

    /// Moves parameters along `grad` (ascent). A non-finite gradient aborts
    /// the step before anything is modified.
    pub fn ascend(&mut self, store: &mut EmbeddingStore, grad: &GradAccumulator) -> Result<()> {
        if let Some(((_, slot), _)) = grad.iter().find(|(_, g)| g.iter().any(|x| !x.is_finite())) {
            return Err(Error::NonFiniteGradient { slot, step: self.step + 1 });
        }
        self.step += 1;
        let AdamConfig { lr, beta1, beta2, eps } = self.config;
        let bc1 = 1.0 - beta1.powi(self.step as i32);
        let bc2 = 1.0 - beta2.powi(self.step as i32);
        let d = store.dim();
        for ((table, slot), g) in grad.iter() {
            let range = slot * d..(slot + 1) * d;
            let m = &mut self.m[table as usize][range.clone()];
            let v = &mut self.v[table as usize][range];
            let p = store.row_mut(table, slot);
            for k in 0..d {
                m[k] = beta1 * m[k] + (1.0 - beta1) * g[k];
                v[k] = beta2 * v[k] + (1.0 - beta2) * g[k] * g[k];
                p[k] += lr * (m[k] / bc1) / ((v[k] / bc2).sqrt() + eps);
            }
        }
        Ok(())
    }
}
