//! Dense reverse-mode differentiation in double precision.
//!
//! A [`Tape`] records one forward episode over [`Matrix`] values; parameters
//! live in a [`ParamStore`] that outlives episodes and is updated by [`Adam`]
//! between them.

mod gradcheck;
mod matrix;
mod optim;
mod params;
mod tape;

pub use gradcheck::{finite_diff_check, relative_error, GradCheckReport, ParamCheck, GRAD_SCALE_FLOOR};
pub use matrix::Matrix;
pub use optim::Adam;
pub use params::{glorot_uniform, ParamId, ParamStore, Parameter};
pub use tape::{Gradients, Tape, Var};

pub(crate) use tape::softmax_in_place;
