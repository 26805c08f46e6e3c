//! Deterministic approximation of graph diameter, radius and eccentricities.
//!
//! The estimators build on three primitives: greedy and early hitting sets,
//! q-nearest matrices, and vertex sets whose balls and clusters are all
//! small. Every estimate is a true distance (or a proven lower bound on one),
//! so it never exceeds the exact value; [`oracle`] supplies the exact values
//! used to check the lower-bound guarantees.

pub mod balls;
pub mod cgr;
pub mod cli;
pub mod error;
pub mod five_thirds;
pub mod generate;
pub mod graph;
pub mod hitting;
pub mod oracle;
pub mod report;
pub mod shortest_paths;
pub mod three_halves;
pub mod verify;

pub use error::{Error, Result};
pub use graph::{Direction, Dist, Graph, GraphFormat, Vertex, VertexSet, Weight, UNREACHABLE};
