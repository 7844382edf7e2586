//! Weighted undirected graphs with strict validation, plus a preferential
//! attachment generator for synthetic inputs.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Error;

/// One undirected edge. Endpoints are node indices, the weight is strictly
/// positive and finite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub weight: f64,
}

impl Edge {
    pub fn new(u: usize, v: usize, weight: f64) -> Self {
        Self { u, v, weight }
    }
}

/// How edge weights are turned into traversal lengths.
///
/// Weights that encode affinity (stronger tie = larger weight) should be
/// inverted so that strong ties read as short distances.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeLengthMode {
    Direct,
    Inverse,
}

/// An undirected graph with positive edge weights and optional node labels
/// and group tags.
///
/// Invariants enforced at construction: no self loops, no duplicate
/// unordered pairs, all weights finite and positive, all endpoints in range.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    node_count: usize,
    edges: Vec<Edge>,
    labels: Vec<Option<String>>,
    groups: Vec<Option<String>>,
}

impl Graph {
    pub fn new(node_count: usize, edges: Vec<Edge>) -> Result<Self, Error> {
        if node_count == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut seen = BTreeSet::new();
        for e in &edges {
            let far = e.u.max(e.v);
            if far >= node_count {
                return Err(Error::NodeOutOfRange { node: far, node_count });
            }
            if e.u == e.v {
                return Err(Error::SelfLoop { node: e.u });
            }
            if !e.weight.is_finite() || e.weight <= 0.0 {
                return Err(Error::BadWeight { u: e.u, v: e.v, weight: e.weight });
            }
            if !seen.insert((e.u.min(e.v), far)) {
                return Err(Error::DuplicateEdge { u: e.u, v: e.v });
            }
        }
        Ok(Self {
            node_count,
            edges,
            labels: vec![None; node_count],
            groups: vec![None; node_count],
        })
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn label(&self, node: usize) -> Option<&str> {
        self.labels[node].as_deref()
    }

    pub fn set_label(&mut self, node: usize, label: String) {
        self.labels[node] = Some(label);
    }

    pub fn group(&self, node: usize) -> Option<&str> {
        self.groups[node].as_deref()
    }

    pub fn set_group(&mut self, node: usize, group: String) {
        self.groups[node] = Some(group);
    }

    /// True if every edge weight is exactly 1.
    pub fn is_unit_weighted(&self) -> bool {
        self.edges.iter().all(|e| e.weight == 1.0)
    }

    /// Returns the same topology with weights reinterpreted as traversal
    /// lengths: unchanged for `Direct`, reciprocal for `Inverse`.
    pub fn edge_lengths(&self, mode: EdgeLengthMode) -> Graph {
        let edges = self
            .edges
            .iter()
            .map(|e| {
                let w = match mode {
                    EdgeLengthMode::Direct => e.weight,
                    EdgeLengthMode::Inverse => 1.0 / e.weight,
                };
                Edge::new(e.u, e.v, w)
            })
            .collect();
        Graph {
            node_count: self.node_count,
            edges,
            labels: self.labels.clone(),
            groups: self.groups.clone(),
        }
    }

    /// Adjacency lists as (neighbor, weight) pairs, neighbors in edge order.
    pub fn adjacency(&self) -> Vec<Vec<(usize, f64)>> {
        let mut adj = vec![Vec::new(); self.node_count];
        for e in &self.edges {
            adj[e.u].push((e.v, e.weight));
            adj[e.v].push((e.u, e.weight));
        }
        adj
    }
}

/// Barabasi-Albert style preferential attachment.
///
/// Starts from a single edge between nodes 0 and 1; every later node
/// attaches to `edges_per_node` distinct existing nodes (fewer while the
/// graph is still smaller than that), sampled proportionally to degree.
/// Deterministic for a fixed seed, connected by construction, unit weights.
/// For `edges_per_node = 2` this yields 2(n - 2) + 1 edges.
pub fn generate_barabasi_albert(
    node_count: usize,
    edges_per_node: usize,
    seed: u64,
) -> Result<Graph, Error> {
    if node_count < 2 {
        return Err(Error::BadParameter(String::from(
            "preferential attachment needs at least 2 nodes",
        )));
    }
    if edges_per_node == 0 || edges_per_node >= node_count {
        return Err(Error::BadParameter(String::from(
            "edges per node must satisfy 1 <= m < node count",
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Every endpoint appears once per incident edge, so uniform sampling
    // from this list is degree-proportional sampling.
    let mut endpoints: Vec<usize> = vec![0, 1];
    let mut edges = vec![Edge::new(0, 1, 1.0)];

    for j in 2..node_count {
        let wanted = edges_per_node.min(j);
        let mut targets = BTreeSet::new();
        while targets.len() < wanted {
            let t = endpoints[rng.gen_range(0..endpoints.len())];
            targets.insert(t);
        }
        for &t in &targets {
            edges.push(Edge::new(t, j, 1.0));
            endpoints.push(t);
            endpoints.push(j);
        }
    }

    Graph::new(node_count, edges)
}
