use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::autodiff::{Matrix, ParamId, ParamStore, Tape, Var};
use crate::error::{Error, Result};

/// `ReLU(x·W1 + b1)·W2 + b2`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MlpHead {
    pub w1: ParamId,
    pub b1: ParamId,
    pub w2: ParamId,
    pub b2: ParamId,
    pub in_dim: usize,
    pub num_classes: usize,
}

impl MlpHead {
    pub fn new<R: Rng>(
        store: &mut ParamStore,
        name: &str,
        in_dim: usize,
        hidden: usize,
        num_classes: usize,
        rng: &mut R,
    ) -> Result<Self> {
        let w1 = store.register_glorot(format!("{name}.w1"), in_dim, hidden, rng)?;
        let b1 = store.register(format!("{name}.b1"), Matrix::zeros(1, hidden))?;
        let w2 = store.register_glorot(format!("{name}.w2"), hidden, num_classes, rng)?;
        let b2 = store.register(format!("{name}.b2"), Matrix::zeros(1, num_classes))?;
        Ok(MlpHead {
            w1,
            b1,
            w2,
            b2,
            in_dim,
            num_classes,
        })
    }

    pub fn forward(&self, tape: &mut Tape, store: &ParamStore, x: Var) -> Result<Var> {
        let (r, c) = tape.shape(x);
        if c != self.in_dim {
            return Err(Error::ShapeMismatch {
                op: "mlp_head",
                lhs: (r, c),
                rhs: (r, self.in_dim),
            });
        }
        let (w1, b1, w2, b2) = (
            tape.param(store, self.w1)?,
            tape.param(store, self.b1)?,
            tape.param(store, self.w2)?,
            tape.param(store, self.b2)?,
        );
        let h = tape.matmul(x, w1)?;
        let h = tape.add_row(h, b1)?;
        let h = tape.relu(h)?;
        let out = tape.matmul(h, w2)?;
        tape.add_row(out, b2)
    }
}
