//! All-pairs shortest path lengths. Dijkstra per source; a disconnected
//! input is a hard error because every downstream stage needs finite
//! distances for every pair.

use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::Error;
use crate::graph::Graph;

/// Symmetric matrix of pairwise shortest path lengths with a zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    d: Vec<f64>,
}

impl DistanceMatrix {
    /// Builds from row-major data, checking symmetry, the zero diagonal,
    /// and positive finite off-diagonal entries.
    pub fn new(n: usize, d: Vec<f64>) -> Result<Self, Error> {
        if n == 0 || d.len() != n * n {
            return Err(Error::BadParameter(alloc::string::String::from(
                "distance matrix data must be n*n with n >= 1",
            )));
        }
        for i in 0..n {
            if d[i * n + i] != 0.0 {
                return Err(Error::BadParameter(alloc::string::String::from(
                    "distance matrix diagonal must be zero",
                )));
            }
            for j in 0..i {
                let a = d[i * n + j];
                if a != d[j * n + i] || !a.is_finite() || a <= 0.0 {
                    return Err(Error::BadParameter(alloc::string::String::from(
                        "distance matrix must be symmetric with positive finite off-diagonal",
                    )));
                }
            }
        }
        Ok(Self { n, d })
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, u: usize, v: usize) -> f64 {
        self.d[u * self.n + v]
    }

    /// Largest pairwise distance; zero only for a single-node matrix.
    pub fn max(&self) -> f64 {
        self.d.iter().copied().fold(0.0, f64::max)
    }
}

/// Min-heap entry ordered by distance. Distances are finite and positive,
/// so `total_cmp` is a safe total order.
struct HeapEntry {
    dist: f64,
    node: usize,
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for HeapEntry {}
impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // reversed: BinaryHeap is a max-heap
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}

/// Single-source Dijkstra over prebuilt adjacency lists.
pub(crate) fn dijkstra(adj: &[Vec<(usize, f64)>], source: usize) -> Vec<f64> {
    let n = adj.len();
    let mut dist = vec![f64::INFINITY; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    dist[source] = 0.0;
    heap.push(HeapEntry { dist: 0.0, node: source });

    while let Some(HeapEntry { dist: du, node: u }) = heap.pop() {
        if done[u] {
            continue;
        }
        done[u] = true;
        for &(v, len) in &adj[u] {
            let cand = du + len;
            if cand < dist[v] {
                dist[v] = cand;
                heap.push(HeapEntry { dist: cand, node: v });
            }
        }
    }
    dist
}

/// All-pairs shortest path lengths using the graph's weights as traversal
/// lengths. Errors with an explicit unreachable pair on disconnected input.
///
/// Each unordered pair's distance is taken from the lower-indexed source's
/// Dijkstra run, so the result is symmetric by construction.
pub fn shortest_paths(g: &Graph) -> Result<DistanceMatrix, Error> {
    let n = g.node_count();
    let adj = g.adjacency();
    let mut d = vec![0.0; n * n];

    for u in 0..n.saturating_sub(1) {
        let row = dijkstra(&adj, u);
        if let Some(v) = row.iter().position(|x| !x.is_finite()) {
            return Err(Error::Disconnected { u, v });
        }
        for v in u + 1..n {
            d[u * n + v] = row[v];
            d[v * n + u] = row[v];
        }
    }
    Ok(DistanceMatrix { n, d })
}
