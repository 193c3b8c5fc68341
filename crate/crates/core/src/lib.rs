//! Sorting and routing networks on arbitrary connected graphs.
//!
//! Pebbles sit on the vertices of a graph; a stage is a matching whose edges
//! either compare-exchange or swap the pebbles they join. The crate builds
//! such networks for many graph families, routes permutations with swap-only
//! stages, and verifies sorting behaviour exhaustively or by sampling.

pub mod bench;
pub mod construct;
pub mod error;
pub mod graph;
pub mod network;
pub mod routing;
pub mod verify;

pub use error::{Error, Result};
pub use graph::{generate, Family, Graph, Vertex, VertexOrder};
pub use network::{Comparator, Kind, SortingNetwork, Stage};
pub use routing::{Permutation, Router, RoutingPlan};
