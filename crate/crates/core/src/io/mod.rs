//! Dataset files, run configuration, splits and the command-line surface.

pub mod cli;
mod config;
mod dataset;
pub mod split;

pub use config::RunConfig;
pub use dataset::{load_dataset, save_dataset, DataPaths, DatasetBundle, Member, DEFAULT_DEGREE_CAP};
pub use split::{make_split, Partition, SplitAssignment};

/// Environment variable naming the default output root.
pub const OUT_ENV: &str = "CACOSE_OUT";
