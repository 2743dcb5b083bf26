//! Granular-ball graph coarsening.
//!
//! The pipeline partitions a graph into granular-balls ([`engine`]), turns the
//! partition into a coarsened graph and projected Laplacian ([`coarse`]) and
//! measures spectral fidelity ([`spectral`]). [`io`] reads TUDataset and
//! edge-list inputs and writes results; [`pipeline`] runs whole datasets,
//! in parallel when the `parallel` feature is enabled.

pub mod coarse;
pub mod engine;
pub mod error;
pub mod graph;
pub mod io;
pub mod par;
pub mod pipeline;
pub mod spectral;
pub mod synth;

pub use coarse::{build_coarse_graph, build_projection, CoarsenedGraph, ProjectionMap};
pub use engine::{
    achieved_ratio, adaptive_coarsen, ball_quality, coarsen, init_balls, ratio_coarsen,
    split_ball, Ablation, CoarsenConfig, GranularBall, Mode, Partition,
};
pub use error::{Error, Result};
pub use graph::Graph;
pub use spectral::{
    eigenvalues_symmetric, laplacian, spectral_distance, EvalConfig, LaplacianKind, SdMode,
    Spectrum, SymMatrix,
};
