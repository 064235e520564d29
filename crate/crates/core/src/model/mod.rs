//! The end-to-end model, its configuration and training loops.

mod cacose;
mod config;
pub mod train;

pub use cacose::{CacoseModel, ForwardOutput, LevelEncoder, LevelTrace, PreparedGraph, PreparedLevel};
pub use config::{CacoseConfig, Task};
pub use train::{
    train_graph_classifier, train_node_classifier, EpochRecord, GraphSample, MultiSeedSummary, TrainReport,
};
