use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::autodiff::{Matrix, ParamId, ParamStore, Tape, Var};
use crate::error::{Error, Result};

/// Scaled dot-product attention across the stacked subgraph embeddings.
///
/// `d` is split into `heads` slices; each head uses scale `1/√(d/heads)`.
/// With more than one head the concatenated output passes through an extra
/// `d × d` projection; a single head is plain `softmax(QKᵀ/√d)·V`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CrossAttention {
    pub wq: ParamId,
    pub wk: ParamId,
    pub wv: ParamId,
    pub wo: Option<ParamId>,
    pub dim: usize,
    pub heads: usize,
}

#[derive(Debug)]
pub struct AttentionOutput {
    pub out: Var,
    /// Attention matrix of each head (`N_S × N_S`).
    pub weights: Vec<Matrix>,
}

impl CrossAttention {
    pub fn new<R: Rng>(store: &mut ParamStore, name: &str, dim: usize, heads: usize, rng: &mut R) -> Result<Self> {
        if heads == 0 || dim % heads != 0 {
            return Err(Error::InvalidConfig(format!(
                "subgraph dim {dim} not divisible by {heads} heads"
            )));
        }
        let wq = store.register_glorot(format!("{name}.wq"), dim, dim, rng)?;
        let wk = store.register_glorot(format!("{name}.wk"), dim, dim, rng)?;
        let wv = store.register_glorot(format!("{name}.wv"), dim, dim, rng)?;
        let wo = if heads > 1 {
            Some(store.register_glorot(format!("{name}.wo"), dim, dim, rng)?)
        } else {
            None
        };
        Ok(CrossAttention {
            wq,
            wk,
            wv,
            wo,
            dim,
            heads,
        })
    }

    pub fn forward(&self, tape: &mut Tape, store: &ParamStore, z: Var) -> Result<AttentionOutput> {
        let (n, d) = tape.shape(z);
        if n == 0 || d != self.dim {
            return Err(Error::ShapeMismatch {
                op: "cross_attention",
                lhs: (n, d),
                rhs: (n.max(1), self.dim),
            });
        }
        let (wq, wk, wv) = (
            tape.param(store, self.wq)?,
            tape.param(store, self.wk)?,
            tape.param(store, self.wv)?,
        );
        let q = tape.matmul(z, wq)?;
        let k = tape.matmul(z, wk)?;
        let v = tape.matmul(z, wv)?;

        let dh = self.dim / self.heads;
        let scale = 1.0 / (dh as f64).sqrt();
        let mut outs = Vec::with_capacity(self.heads);
        let mut weights = Vec::with_capacity(self.heads);
        for h in 0..self.heads {
            let (qh, kh, vh) = if self.heads == 1 {
                (q, k, v)
            } else {
                (
                    tape.slice_cols(q, h * dh, (h + 1) * dh)?,
                    tape.slice_cols(k, h * dh, (h + 1) * dh)?,
                    tape.slice_cols(v, h * dh, (h + 1) * dh)?,
                )
            };
            let kt = tape.transpose(kh)?;
            let logits = tape.matmul(qh, kt)?;
            let logits = tape.scale(logits, scale)?;
            let attn = tape.softmax_rows(logits)?;
            weights.push(tape.value(attn).clone());
            outs.push(tape.matmul(attn, vh)?);
        }
        let mut out = if outs.len() == 1 { outs[0] } else { tape.concat_cols(&outs)? };
        if let Some(wo) = self.wo {
            let wo = tape.param(store, wo)?;
            out = tape.matmul(out, wo)?;
        }
        Ok(AttentionOutput { out, weights })
    }
}
