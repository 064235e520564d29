use rand::Rng;
use serde::{Deserialize, Serialize};

use super::Activation;
use crate::autodiff::{ParamId, ParamStore, Tape, Var};
use crate::error::{Error, Result};

/// `σ(Â · H · Θ)`; `Â` is supplied per call because it is a property of the
/// subgraph, not of the layer.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GcnLayer {
    pub weight: ParamId,
    pub in_dim: usize,
    pub out_dim: usize,
    pub activation: Activation,
}

impl GcnLayer {
    pub fn new<R: Rng>(
        store: &mut ParamStore,
        name: &str,
        in_dim: usize,
        out_dim: usize,
        activation: Activation,
        rng: &mut R,
    ) -> Result<Self> {
        let weight = store.register_glorot(format!("{name}.weight"), in_dim, out_dim, rng)?;
        Ok(GcnLayer {
            weight,
            in_dim,
            out_dim,
            activation,
        })
    }

    pub fn forward(&self, tape: &mut Tape, store: &ParamStore, a_hat: Var, h: Var) -> Result<Var> {
        let (n, d) = tape.shape(h);
        if d != self.in_dim || tape.shape(a_hat) != (n, n) {
            return Err(Error::ShapeMismatch {
                op: "gcn_forward",
                lhs: tape.shape(a_hat),
                rhs: (n, d),
            });
        }
        let theta = tape.param(store, self.weight)?;
        let propagated = tape.matmul(a_hat, h)?;
        let projected = tape.matmul(propagated, theta)?;
        self.activation.apply(tape, projected)
    }
}
