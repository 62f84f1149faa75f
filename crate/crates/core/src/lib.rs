//! Augmented Forman-Ricci curvature on undirected graphs and the
//! curvature-guided rewiring it drives.
//!
//! - [`graph`], [`io`], [`motifs`]: the graph model, edge-list files and
//!   edge-local triangle/quadrangle counts.
//! - [`curvature`]: AF3, AF4, their degree bounds, an exact Ollivier-Ricci
//!   reference and summary statistics.
//! - [`mixture`]: two-component Gaussian fit and the rewiring thresholds.
//! - [`rewiring`]: fixed-budget and threshold-driven rewiring.
//! - [`smoothing`]: a message-passing simulator that checks the feature
//!   smoothing and bottleneck bounds numerically.

// `!(x > y)` guards are meant to reject NaN as well
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bench;
pub mod curvature;
pub mod error;
pub mod generators;
pub mod graph;
pub mod io;
pub mod mixture;
pub mod motifs;
pub mod rewiring;
pub mod rng;
pub mod smoothing;

pub use curvature::{CurvatureKind, CurvatureMap};
pub use error::{Error, Result};
pub use graph::{EdgeRef, Graph, NodeId};
