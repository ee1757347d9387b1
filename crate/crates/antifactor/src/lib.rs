//! Solvers for AntiFactor-style degree-constrained edge-subset problems on
//! graphs of bounded treewidth.
//!
//! Given a multigraph and, for every vertex, a finite set `Ex_v` of excluded
//! degrees, a *solution* is an edge subset `S` with `deg_S(v) ∉ Ex_v` for all
//! `v`. The crate provides:
//!
//! * [`graph`]: instances (multigraph + constraints) and the solution predicate,
//! * [`treedec`]: tree decompositions, validation, nice form, a min-fill heuristic,
//! * [`oracle`]: brute-force ground truth for small instances,
//! * [`countdp`]: exact counting of solutions by size over a nice tree
//!   decomposition, with naive and zeta-transform joins,
//! * [`repset`]: decision and min/max optimization via the partial-solution DP
//!   pruned by representative sets over products of uniform matroids,
//! * [`setanalysis`]: structure of excluded sets (maxgap, arithmetic
//!   progressions, half-induced matchings, hardness witnesses, peeling).
//!
//! The crate is `no_std`-compatible (requires `alloc`); the `std` feature is on
//! by default and only forwards to dependencies. The optional `parallel`
//! feature enables subtree-parallel solving; results are identical either way.

#![cfg_attr(not(feature = "std"), no_std)]
#![deny(unsafe_code)]

extern crate alloc;

pub mod countdp;
pub mod error;
pub mod graph;
mod modarith;
pub mod oracle;
pub mod repset;
pub mod setanalysis;
pub mod treedec;

pub use error::Error;
pub use graph::{DegreeConstraints, Instance, MultiGraph};
pub use treedec::{NiceTreeDecomposition, TreeDecomposition};
