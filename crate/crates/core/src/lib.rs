pub mod analysis;
pub mod autodiff;
pub mod curvature;
pub mod decomposition;
pub mod error;
pub mod graph;
pub mod io;
pub mod layers;
pub mod model;
pub mod rng;
pub mod synthetic;

pub use error::{Error, Result};
