//! Errors shared by every module in the crate.

use alloc::string::String;
use core::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Graphs must have at least one node.
    EmptyGraph,
    /// An edge endpoint is not a valid node index.
    NodeOutOfRange { node: usize, node_count: usize },
    /// Self loops carry no distance information and are rejected.
    SelfLoop { node: usize },
    /// The same unordered node pair appeared twice.
    DuplicateEdge { u: usize, v: usize },
    /// Edge weights must be finite and strictly positive.
    BadWeight { u: usize, v: usize, weight: f64 },
    /// The graph is not connected; `v` cannot be reached from `u`.
    Disconnected { u: usize, v: usize },
    /// A parameter violated a documented precondition.
    BadParameter(String),
    /// The interpolation system could not be solved even with smoothing.
    SingularSystem,
    /// The objective or its gradient left the representable range.
    NonFiniteObjective,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptyGraph => write!(f, "graph must contain at least one node"),
            Error::NodeOutOfRange { node, node_count } => {
                write!(f, "node index {node} out of range for {node_count} nodes")
            }
            Error::SelfLoop { node } => write!(f, "self loop on node {node}"),
            Error::DuplicateEdge { u, v } => write!(f, "duplicate edge between {u} and {v}"),
            Error::BadWeight { u, v, weight } => {
                write!(f, "edge ({u}, {v}) has non-positive or non-finite weight {weight}")
            }
            Error::Disconnected { u, v } => {
                write!(f, "graph is disconnected: node {v} is unreachable from node {u}")
            }
            Error::BadParameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::SingularSystem => write!(
                f,
                "interpolation system is singular even with smoothing; sites may be collinear or duplicated"
            ),
            Error::NonFiniteObjective => write!(
                f,
                "objective became non-finite; reduce the step size or rescale the input"
            ),
        }
    }
}

impl core::error::Error for Error {}
