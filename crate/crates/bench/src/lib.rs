//! Shared fixtures for the benchmarks.

use looprate_core::lattice::{builtin, wired_patch, WiredPatch};
use looprate_core::numerics::rational;
use looprate_core::Embedded;

/// Wired `n x n` square patch.
pub fn square_patch(n: usize) -> WiredPatch {
    wired_patch(&builtin("square").expect("builtin"), n, &rational(1, 1)).expect("square patch")
}

pub fn square_patch_embedded(n: usize) -> Embedded {
    square_patch(n).embedded().expect("patch embeds")
}
