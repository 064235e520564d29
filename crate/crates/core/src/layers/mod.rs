//! Learnable building blocks: GCN propagation, self-attention graph pooling,
//! cross-subgraph attention and the MLP prediction head.

mod attention;
mod gcn;
mod mlp;
mod sagpool;

use serde::{Deserialize, Serialize};

use crate::autodiff::{Matrix, Tape, Var};
use crate::error::{Error, Result};
use crate::graph::Graph;

pub use attention::{AttentionOutput, CrossAttention};
pub use gcn::GcnLayer;
pub use mlp::MlpHead;
pub use sagpool::{pooled_count, top_k_by_score, PoolOutput, SagPool};

/// Dense `D̃^{-1/2} (A + I) D̃^{-1/2}`.
pub fn normalize_adjacency(g: &Graph) -> Matrix {
    let n = g.num_nodes();
    let inv_sqrt: Vec<f64> = (0..n).map(|v| 1.0 / ((g.degree(v) + 1) as f64).sqrt()).collect();
    let mut a = Matrix::zeros(n, n);
    for v in 0..n {
        a.set(v, v, inv_sqrt[v] * inv_sqrt[v]);
        for &u in g.neighbors(v) {
            a.set(v, u, inv_sqrt[v] * inv_sqrt[u]);
        }
    }
    a
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Activation {
    #[default]
    Relu,
    Tanh,
    Identity,
}

impl Activation {
    pub(crate) fn apply(self, tape: &mut Tape, x: Var) -> Result<Var> {
        match self {
            Activation::Relu => tape.relu(x),
            Activation::Tanh => tape.tanh(x),
            Activation::Identity => Ok(x),
        }
    }

    pub fn eval(self, x: f64) -> f64 {
        match self {
            Activation::Relu => x.max(0.0),
            Activation::Tanh => x.tanh(),
            Activation::Identity => x,
        }
    }
}

impl std::str::FromStr for Activation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "relu" => Ok(Activation::Relu),
            "tanh" => Ok(Activation::Tanh),
            "identity" => Ok(Activation::Identity),
            other => Err(Error::InvalidConfig(format!("unknown activation {other:?}"))),
        }
    }
}
