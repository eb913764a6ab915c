//! Executable toolkit for the Erdős–Pósa property of group-labelled A-paths.
//!
//! * [`group`]: finite Abelian groups and the group condition deciding the
//!   property for A-paths of a fixed weight.
//! * [`graph`]: labelled multigraphs, A-path and cycle enumeration.
//! * [`constructions`]: counterexample grids and elementary walls.
//! * [`oracle`]: exact packing and covering numbers.
//! * [`wall`]: subdivided walls and zero-subwall extraction.
//! * [`linkage`], [`anchors`]: the two structural lemmas as checks.
//! * [`reduction`]: the weight-γ to weight-0 reduction.

#![forbid(unsafe_code)]

pub mod anchors;
pub mod bounds;
pub mod cli;
pub mod constructions;
pub mod graph;
pub mod group;
pub mod linkage;
pub mod oracle;
pub mod reduction;
pub mod wall;

pub use graph::{LabelledGraph, PathWitness};
pub use group::{Group, GroupElement};
