use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{Activation, GcnLayer};
use crate::autodiff::{ParamStore, Tape, Var};
use crate::error::{Error, Result};

/// Self-attention graph pooling with a mean readout.
///
/// Scores come from a one-output GCN over the node embeddings; the top
/// `⌈ratio·N⌉` nodes are kept, their rows scaled by their scores and averaged.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SagPool {
    pub attention: GcnLayer,
    pub ratio: f64,
}

#[derive(Debug)]
pub struct PoolOutput {
    /// `1 × d` readout.
    pub z: Var,
    /// Selected local node indices, best score first.
    pub selected: Vec<usize>,
    /// Score of every node, in local order.
    pub scores: Vec<f64>,
}

/// `⌈ratio · n⌉`, clamped to `1..=n` for `n ≥ 1`.
///
/// A small slack absorbs representation error so that e.g. `0.3 · 10` counts
/// as exactly 3.
pub fn pooled_count(ratio: f64, n: usize) -> usize {
    if n == 0 {
        return 0;
    }
    let k = (ratio * n as f64 - 1e-9).ceil();
    (k.max(1.0) as usize).min(n)
}

/// Indices of the `k` largest scores, descending; equal scores favor the
/// lower index.
pub fn top_k_by_score(scores: &[f64], k: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..scores.len()).collect();
    idx.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    idx.truncate(k);
    idx
}

impl SagPool {
    pub fn new<R: Rng>(
        store: &mut ParamStore,
        name: &str,
        dim: usize,
        ratio: f64,
        score_activation: Activation,
        rng: &mut R,
    ) -> Result<Self> {
        if !(ratio > 0.0 && ratio <= 1.0) {
            return Err(Error::InvalidConfig(format!("pooling ratio {ratio} outside (0, 1]")));
        }
        let attention = GcnLayer::new(store, &format!("{name}.score"), dim, 1, score_activation, rng)?;
        Ok(SagPool { attention, ratio })
    }

    pub fn forward(&self, tape: &mut Tape, store: &ParamStore, a_hat: Var, h: Var) -> Result<PoolOutput> {
        let n = tape.shape(h).0;
        if n == 0 {
            return Err(Error::InvalidInput("cannot pool an empty subgraph".into()));
        }
        let score_var = self.attention.forward(tape, store, a_hat, h)?;
        let scores = tape.value(score_var).data().to_vec();
        let selected = top_k_by_score(&scores, pooled_count(self.ratio, n));
        tape.note_branch(&selected);

        let kept = tape.gather_rows(h, &selected)?;
        let mask = tape.gather_rows(score_var, &selected)?;
        let scaled = tape.scale_rows(kept, mask)?;
        let z = tape.mean_rows(scaled)?;
        Ok(PoolOutput { z, selected, scores })
    }
}
