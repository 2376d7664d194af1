//! Graph predicates, right-angled Artin group arithmetic, kernels of
//! label-induced maps to `Z^d`, word-metric experiments (distortion,
//! divergence, growth fits) and Macura's free-by-cyclic groups.

pub mod fixtures;
pub mod graph;
pub mod kernels;
pub mod macura;
pub mod metric;
pub mod raag;
pub mod series;

pub use graph::{Domination, GraphError, JoinDecomposition, SimplicialGraph, VertexLabeling, VertexSet};
pub use raag::{Letter, RaagElement, RaagError, RaagOracle, Word};
pub use series::{SeriesPoint, CSV_HEADER};
