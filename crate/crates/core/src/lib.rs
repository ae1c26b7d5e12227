//! Exact and stochastic computation of loop-erased random walk looping
//! rates, spanning-forest counts and abelian sandpile densities.
//!
//! The crate is organised bottom-up:
//!
//! * [`numerics`]: scalar backends (exact rationals, `f64`, rational
//!   functions of one variable) and dense linear algebra.
//! * [`graph`]: weighted multigraphs, rotation systems, face tracing and
//!   planar duals.
//! * [`kernels`]: Laplacians, Green's functions and potential kernels.
//! * [`forests`]: spanning-forest and unicycle counts, with brute-force
//!   oracles.
//! * [`looping`]: the looping rates `tau`, `rho` and the derived
//!   statistics collected in [`LoopStats`].
//! * [`sampler`]: Wilson's algorithm, loop-erased walks and the marked
//!   cycle-rooted spanning tree chain.
//! * [`sandpile`]: toppling, burning test, the tree/sandpile bijection
//!   and level statistics.
//! * [`lattice`]: periodic planar lattices, wired patches, potential
//!   kernel tables and lattice-limit rows.
//! * [`verify`]: closed forms against brute-force enumeration on small
//!   graphs.

pub mod error;
pub mod families;
pub mod forests;
pub mod graph;
pub mod kernels;
pub mod lattice;
pub mod looping;
pub mod numerics;
pub mod sampler;
pub mod sandpile;
pub mod verify;

pub use error::{Error, Result};
pub use graph::{DualGraph, Embedded, RotationSystem, SpanningTree, WeightedGraph};
pub use looping::LoopStats;
pub use numerics::{Field, Matrix, Rational, Scalar};
