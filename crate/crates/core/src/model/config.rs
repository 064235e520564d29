use serde::{Deserialize, Serialize};

use crate::decomposition::{DecompositionConfig, SupportScope};
use crate::error::{Error, Result};
use crate::layers::Activation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Task {
    Node,
    Graph,
}

/// Hyperparameters of the model and its training loop.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CacoseConfig {
    /// CaEF threshold.
    pub delta: usize,
    pub support_scope: SupportScope,
    pub pooling_ratio: f64,
    pub heads: usize,
    /// GCN output width `h`.
    pub hidden_dim: usize,
    /// Width `d_S` of the pooled subgraph embeddings.
    pub subgraph_dim: usize,
    pub mlp_hidden: usize,
    pub num_gcn_layers: usize,
    pub score_activation: Activation,
    pub learning_rate: f64,
    pub weight_decay: f64,
    pub max_epochs: usize,
    pub patience: usize,
    pub seed: u64,
    /// Train / validation / test fractions.
    pub split: [f64; 3],
}

impl Default for CacoseConfig {
    fn default() -> Self {
        Self::node_classification()
    }
}

impl CacoseConfig {
    pub fn node_classification() -> Self {
        CacoseConfig {
            delta: 3,
            support_scope: SupportScope::CoreSubgraph,
            pooling_ratio: 0.5,
            heads: 2,
            hidden_dim: 128,
            subgraph_dim: 128,
            mlp_hidden: 128,
            num_gcn_layers: 2,
            score_activation: Activation::Tanh,
            learning_rate: 2.5e-3,
            weight_decay: 1e-4,
            max_epochs: 250,
            patience: 50,
            seed: 0,
            split: [0.48, 0.32, 0.20],
        }
    }

    pub fn graph_classification() -> Self {
        CacoseConfig {
            heads: 1,
            max_epochs: 100,
            patience: 25,
            split: [0.8, 0.1, 0.1],
            ..Self::node_classification()
        }
    }

    pub fn for_task(task: Task) -> Self {
        match task {
            Task::Node => Self::node_classification(),
            Task::Graph => Self::graph_classification(),
        }
    }

    pub fn decomposition(&self) -> DecompositionConfig {
        DecompositionConfig {
            delta: self.delta,
            scope: self.support_scope,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.delta == 0 {
            return bad("delta must be positive".into());
        }
        if !(self.pooling_ratio > 0.0 && self.pooling_ratio <= 1.0) {
            return bad(format!("pooling_ratio {} outside (0, 1]", self.pooling_ratio));
        }
        for (name, v) in [
            ("heads", self.heads),
            ("hidden_dim", self.hidden_dim),
            ("subgraph_dim", self.subgraph_dim),
            ("mlp_hidden", self.mlp_hidden),
            ("num_gcn_layers", self.num_gcn_layers),
            ("max_epochs", self.max_epochs),
            ("patience", self.patience),
        ] {
            if v == 0 {
                return bad(format!("{name} must be positive"));
            }
        }
        if self.subgraph_dim % self.heads != 0 {
            return bad(format!(
                "subgraph_dim {} not divisible by heads {}",
                self.subgraph_dim, self.heads
            ));
        }
        if !(self.learning_rate > 0.0) || !(self.weight_decay >= 0.0) {
            return bad("learning_rate must be positive and weight_decay non-negative".into());
        }
        if self.split.iter().any(|&f| !(f > 0.0)) || (self.split.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
            return bad(format!("split fractions {:?} must be positive and sum to 1", self.split));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_validate() {
        CacoseConfig::node_classification().validate().unwrap();
        CacoseConfig::graph_classification().validate().unwrap();
        assert_eq!(CacoseConfig::graph_classification().heads, 1);
        assert_eq!(CacoseConfig::node_classification().max_epochs, 250);
    }

    #[test]
    fn rejects_bad_split_and_heads() {
        let mut c = CacoseConfig::default();
        c.split = [0.5, 0.5, 0.5];
        assert!(c.validate().is_err());
        let mut c = CacoseConfig::default();
        c.heads = 3;
        assert!(c.validate().is_err());
    }
}
