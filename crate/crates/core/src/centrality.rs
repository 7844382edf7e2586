//! Shortest-path betweenness centrality (Brandes' accumulation), with
//! fractional credit when a pair has several geodesics.

use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::Error;
use crate::graph::Graph;
use crate::math;

/// Two path lengths within this relative tolerance count as the same
/// geodesic length. Exact for integer-valued lengths.
const TIE_EPS: f64 = 1e-12;

fn same_length(a: f64, b: f64) -> bool {
    math::fabs(a - b) <= TIE_EPS * math::fabs(a).max(math::fabs(b)).max(1.0)
}

/// Raw betweenness scores together with their min-max normalization.
///
/// `raw[v]` sums, over unordered pairs {s, t} not containing v, the fraction
/// of shortest s-t paths that pass through v. `normalized` maps raw scores
/// to [0, 1]; a constant raw vector maps to all 0.5 so downstream field
/// construction still has a usable level for every node.
#[derive(Debug, Clone, PartialEq)]
pub struct CentralityVector {
    raw: Vec<f64>,
    normalized: Vec<f64>,
}

impl CentralityVector {
    pub fn from_raw(raw: Vec<f64>) -> Self {
        let min = raw.iter().copied().fold(f64::INFINITY, f64::min);
        let max = raw.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let range = max - min;
        let normalized = if range <= TIE_EPS * max.abs().max(1.0) {
            vec![0.5; raw.len()]
        } else {
            raw.iter().map(|&x| (x - min) / range).collect()
        };
        Self { raw, normalized }
    }

    /// Wraps values that are already on the [0, 1] scale, bypassing the
    /// min-max step. Useful for synthetic fields and external scores.
    pub fn from_normalized(values: Vec<f64>) -> Result<Self, Error> {
        for &v in &values {
            if !(v.is_finite() && (0.0..=1.0).contains(&v)) {
                return Err(Error::BadParameter(alloc::string::String::from(
                    "normalized centrality values must lie in [0, 1]",
                )));
            }
        }
        Ok(Self {
            raw: values.clone(),
            normalized: values,
        })
    }

    pub fn len(&self) -> usize {
        self.raw.len()
    }

    pub fn is_empty(&self) -> bool {
        self.raw.is_empty()
    }

    pub fn raw(&self) -> &[f64] {
        &self.raw
    }

    pub fn normalized(&self) -> &[f64] {
        &self.normalized
    }
}

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
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}

/// Betweenness centrality over weighted shortest paths.
///
/// Runs Dijkstra from every source, counting geodesics (`sigma`) and
/// predecessors, then accumulates pair dependencies in reverse settling
/// order. Each unordered pair is seen from both endpoints, so the sums are
/// halved at the end. Disconnected input is an error.
pub fn betweenness(g: &Graph) -> Result<CentralityVector, Error> {
    let n = g.node_count();
    let adj = g.adjacency();
    let mut raw = vec![0.0; n];

    for s in 0..n {
        let mut dist = vec![f64::INFINITY; n];
        let mut sigma = vec![0.0; n];
        let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut done = vec![false; n];
        let mut order = Vec::with_capacity(n);
        let mut heap = BinaryHeap::new();

        dist[s] = 0.0;
        sigma[s] = 1.0;
        heap.push(HeapEntry { dist: 0.0, node: s });

        while let Some(HeapEntry { dist: du, node: u }) = heap.pop() {
            if done[u] {
                continue;
            }
            done[u] = true;
            order.push(u);
            for &(v, len) in &adj[u] {
                if done[v] {
                    continue;
                }
                let cand = du + len;
                if dist[v].is_finite() && same_length(cand, dist[v]) {
                    // another geodesic of the same length
                    sigma[v] += sigma[u];
                    preds[v].push(u);
                } else if cand < dist[v] {
                    dist[v] = cand;
                    sigma[v] = sigma[u];
                    preds[v].clear();
                    preds[v].push(u);
                    heap.push(HeapEntry { dist: cand, node: v });
                }
            }
        }

        if s == 0 {
            if let Some(v) = dist.iter().position(|x| !x.is_finite()) {
                return Err(Error::Disconnected { u: 0, v });
            }
        }

        let mut delta = vec![0.0; n];
        for &w in order.iter().rev() {
            for &v in &preds[w] {
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
            }
            if w != s {
                raw[w] += delta[w];
            }
        }
    }

    for x in &mut raw {
        *x *= 0.5; // each unordered pair was counted from both endpoints
    }
    Ok(CentralityVector::from_raw(raw))
}
