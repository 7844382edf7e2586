#![allow(dead_code)]

use anisolay_core::{Edge, Graph, Layout};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random connected graph: a random spanning tree plus extra edges, with
/// small integer weights so shortest-path ties are exact.
pub fn random_connected_graph(seed: u64, max_nodes: usize) -> Graph {
    random_connected_graph_in(seed, 4, max_nodes)
}

/// Same as [`random_connected_graph`] with an explicit size range.
pub fn random_connected_graph_in(seed: u64, min_nodes: usize, max_nodes: usize) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(min_nodes..=max_nodes);
    let mut edges = Vec::new();
    let weight = |rng: &mut ChaCha8Rng| [1.0, 2.0, 3.0][rng.gen_range(0..3)];
    for v in 1..n {
        let u = rng.gen_range(0..v);
        let w = weight(&mut rng);
        edges.push(Edge::new(u, v, w));
    }
    for u in 0..n {
        for v in u + 1..n {
            if edges.iter().any(|e| (e.u.min(e.v), e.u.max(e.v)) == (u, v)) {
                continue;
            }
            if rng.gen_range(0.0..1.0) < 0.3 {
                let w = weight(&mut rng);
                edges.push(Edge::new(u, v, w));
            }
        }
    }
    Graph::new(n, edges).unwrap()
}

/// Uniform random positions in a centered square of half-width `spread`.
pub fn random_layout(seed: u64, n: usize, spread: f64) -> Layout {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Layout::new(
        (0..n)
            .map(|_| [rng.gen_range(-spread..spread), rng.gen_range(-spread..spread)])
            .collect(),
    )
    .unwrap()
}

/// Central finite differences of a scalar function of node positions.
pub fn fd_gradient<F: Fn(&[[f64; 2]]) -> f64>(
    f: F,
    x: &[[f64; 2]],
    step: f64,
) -> Vec<[f64; 2]> {
    let mut g = vec![[0.0; 2]; x.len()];
    let mut probe = x.to_vec();
    for i in 0..x.len() {
        for axis in 0..2 {
            probe[i][axis] = x[i][axis] + step;
            let hi = f(&probe);
            probe[i][axis] = x[i][axis] - step;
            let lo = f(&probe);
            probe[i][axis] = x[i][axis];
            g[i][axis] = (hi - lo) / (2.0 * step);
        }
    }
    g
}

/// Largest absolute entry of a gradient.
pub fn grad_max(g: &[[f64; 2]]) -> f64 {
    g.iter()
        .flat_map(|p| p.iter())
        .fold(0.0_f64, |a, &b| a.max(b.abs()))
}

/// Largest entrywise difference between two gradients.
pub fn grad_diff(a: &[[f64; 2]], b: &[[f64; 2]]) -> f64 {
    a.iter()
        .zip(b)
        .flat_map(|(p, q)| [(p[0] - q[0]).abs(), (p[1] - q[1]).abs()])
        .fold(0.0_f64, f64::max)
}
