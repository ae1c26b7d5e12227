//! Random walks, loop-erased random walks, Wilson's algorithm and the
//! marked cycle-rooted spanning tree chain, with batch-means estimators.

mod crst;
mod estimate;
mod rng;
mod walk;

pub use crst::{LoopEvent, MarkedCrst};
pub use estimate::{
    estimate_edge_probabilities, estimate_looping, estimate_looping_parallel, run_chain, EstimateReport,
    LoopingEstimate, BATCHES, MIN_STEPS, Z99,
};
pub use rng::RngStream;
pub use walk::{lerw, wilson_ust, WalkTable};
