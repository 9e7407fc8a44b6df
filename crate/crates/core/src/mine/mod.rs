//! Neural estimation of mutual information.
//!
//! A small ReLU network `F` scores `[x ‖ y]` pairs. Training ascends the
//! Donsker-Varadhan lower bound `E_joint[F] - ln E_marginal[e^F]`, with a
//! quadratic penalty on `ln E_marginal[e^F]` that pins the statistic's
//! scale. Marginal samples come from permuting y within a batch. The
//! reported estimate is the unpenalized bound, smoothed over the end of
//! training.

mod checkpoint;
mod data;
mod mlp;
mod objective;
mod optim;
mod train;

pub use checkpoint::{read_checkpoint, write_checkpoint};
pub use data::{normalize, Dataset};
pub use mlp::{mlp_forward, Dense, MlpParams};
pub use objective::{
    backward, dv_objective, dv_objective_permuted, logmeanexp, marginal_permutation, shuffle_marginals, DvValue,
    PairBatch,
};
pub use optim::Optimizer;
pub use train::{estimate_mi, train, MineConfig, TraceRecord, TrainTrace};
