//! Abelian sandpiles on integer-weighted graphs with a sink: toppling,
//! stabilization, the burning test, the tree exploration bijection and
//! level statistics.

mod bijection;
mod config;
mod io;
mod spectrum;

pub use bijection::{expand_multiplicities, sandpile_to_tree, tree_to_sandpile};
pub use config::{Sandpile, SandpileConfig};
pub use io::{parse_sandpile, stabilize_report, SandpileFile, StabilizeReport};
pub use spectrum::{
    binomial_moment, level_spectrum, level_stats, recurrent_configs, stable_config_count, LevelStats,
    MAX_STABLE_CONFIGS,
};
