//! Empirical studies over graphs and their decompositions: path density,
//! label homophily around bridges, and maximum coreness at scale.

mod bridges;
mod homophily;
mod paths;
mod pilot;
mod scalability;

pub use bridges::{bridge_analysis, BridgeRecord};
pub use homophily::{homophilic_subgraph, same_label_edges};
pub use paths::{anp, anp_with, count_paths, count_walks_all, PathKind};
pub use pilot::{pilot_selection, pilot_study, AnpRecord, LevelRatio, PilotConfig, PilotReport};
pub use scalability::{scalability_study, skip_reason, ScalabilityConfig, ScalabilityRecord};
