//! Graph layouts that trade distance fidelity for alignment with a radial
//! centrality field.
//!
//! The pipeline: compute all-pairs shortest path lengths and betweenness
//! centrality, embed the graph in the plane by gradient descent on metric
//! MDS stress, interpolate the centrality values with a thin plate spline,
//! force the interpolant to decrease away from the most central node, and
//! then keep descending on stress plus a penalty that pulls every node onto
//! the level set matching its own centrality.
//!
//! The crate is `no_std` (alloc required); all I/O lives in the companion
//! crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

mod math;

pub mod arl;
pub mod centrality;
pub mod error;
pub mod field;
pub mod graph;
pub mod matrix;
pub mod mds;
pub mod monotone;
pub mod paths;
pub mod tps;

pub use arl::{
    arl_layout, objective, objective_gradient, penalty, project_to_contours, ArlConfig, ArlResult,
    ArlTrace, TraceRecord,
};
pub use centrality::{betweenness, CentralityVector};
pub use error::Error;
pub use field::{
    build_monotonic_field, contour_radii, eval_field, extract_contour, field_from_layout,
    field_gradient, MonotonicField,
};
pub use graph::{generate_barabasi_albert, Edge, EdgeLengthMode, Graph};
pub use mds::{mds_layout, stress, stress_gradient, GradientMatrices, Layout, MdsInit, MdsParams, StressWeights};
pub use monotone::{monotonize_1d, Direction, MonotonizeConfig};
pub use paths::{shortest_paths, DistanceMatrix};
pub use tps::{fit_tps, TpsModel};
