//! Release gate: one test per acceptance check, each with its tolerance and
//! (where stated) wall-clock budget inline. Everything runs end to end
//! against the public API or the compiled binary; the oracles here are
//! independent reimplementations, not calls back into the code under test.

use anisolay_core::{
    arl_layout, betweenness, field_from_layout, generate_barabasi_albert, mds_layout,
    objective_gradient, penalty, project_to_contours, shortest_paths, stress, stress_gradient,
    ArlConfig, CentralityVector, Edge, Graph, Layout, MdsInit, MdsParams, MonotonicField,
    MonotonizeConfig, StressWeights,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;
use std::time::Instant;

// ---------------------------------------------------------------------------
// shared helpers

/// Random connected graph: a random spanning tree plus extra edges, with
/// small integer weights so shortest-path ties are exact.
fn random_connected_graph_in(seed: u64, min_nodes: usize, max_nodes: usize) -> Graph {
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

fn random_layout(seed: u64, n: usize, spread: f64) -> Layout {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Layout::new(
        (0..n)
            .map(|_| [rng.gen_range(-spread..spread), rng.gen_range(-spread..spread)])
            .collect(),
    )
    .unwrap()
}

/// Central finite differences of a scalar function of node positions.
fn fd_gradient<F: Fn(&[[f64; 2]]) -> f64>(f: F, x: &[[f64; 2]], step: f64) -> Vec<[f64; 2]> {
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

fn grad_max(g: &[[f64; 2]]) -> f64 {
    g.iter().flat_map(|p| p.iter()).fold(0.0_f64, |a, &b| a.max(b.abs()))
}

fn grad_diff(a: &[[f64; 2]], b: &[[f64; 2]]) -> f64 {
    a.iter()
        .zip(b)
        .flat_map(|(p, q)| [(p[0] - q[0]).abs(), (p[1] - q[1]).abs()])
        .fold(0.0_f64, f64::max)
}

// ---------------------------------------------------------------------------
// 1. betweenness vs exhaustive shortest-path enumeration

/// All simple paths from `s` to `t` as (length, interior nodes) pairs.
fn enumerate_paths(adj: &[Vec<(usize, f64)>], s: usize, t: usize) -> Vec<(f64, Vec<usize>)> {
    fn dfs(
        adj: &[Vec<(usize, f64)>],
        t: usize,
        node: usize,
        len: f64,
        visited: &mut Vec<bool>,
        trail: &mut Vec<usize>,
        out: &mut Vec<(f64, Vec<usize>)>,
    ) {
        if node == t {
            out.push((len, trail[1..trail.len() - 1].to_vec()));
            return;
        }
        for &(next, w) in &adj[node] {
            if !visited[next] {
                visited[next] = true;
                trail.push(next);
                dfs(adj, t, next, len + w, visited, trail, out);
                trail.pop();
                visited[next] = false;
            }
        }
    }
    let mut visited = vec![false; adj.len()];
    visited[s] = true;
    let mut out = Vec::new();
    dfs(adj, t, s, 0.0, &mut visited, &mut vec![s], &mut out);
    out
}

fn oracle_betweenness(g: &Graph) -> Vec<f64> {
    let n = g.node_count();
    let adj = g.adjacency();
    let mut raw = vec![0.0; n];
    for s in 0..n {
        for t in s + 1..n {
            let paths = enumerate_paths(&adj, s, t);
            let best = paths.iter().map(|(len, _)| *len).fold(f64::INFINITY, f64::min);
            let geodesics: Vec<&Vec<usize>> = paths
                .iter()
                .filter(|(len, _)| (len - best).abs() <= 1e-9 * best.max(1.0))
                .map(|(_, interior)| interior)
                .collect();
            let share = 1.0 / geodesics.len() as f64;
            for interior in geodesics {
                for &v in interior {
                    raw[v] += share;
                }
            }
        }
    }
    raw
}

#[test]
fn betweenness_matches_exhaustive_enumeration() {
    let start = Instant::now();
    let mut worst = 0.0_f64;
    for seed in 0..100 {
        let g = random_connected_graph_in(seed, 4, 9);
        let got = betweenness(&g).unwrap();
        let want = oracle_betweenness(&g);
        for (v, (a, b)) in got.raw().iter().zip(&want).enumerate() {
            let diff = (a - b).abs();
            worst = worst.max(diff);
            assert!(diff < 1e-9, "seed {seed}: node {v} off by {diff}");
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 10.0, "betweenness check took {elapsed:.1}s, budget 10s");
    println!("PASS betweenness: 100 graphs, worst |diff| {worst:.2e}, {elapsed:.2}s");
}

// ---------------------------------------------------------------------------
// 2. analytic gradients vs central finite differences

/// The interpolated field is piecewise bilinear in polar cells, so its cell
/// boundaries are slope kinks and the shared peak is a cone point. Probes sit
/// at polar cell centers, where both the oracle stencil and the one inside
/// the analytic gradient stay within a single smooth patch.
fn cell_center_probe(field: &MonotonicField, n: usize, seed: u64) -> Vec<[f64; 2]> {
    let rays = field.ray_count();
    let samples = field.samples_per_ray();
    let cell = field.r_max() / (samples - 1) as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let s = rng.gen_range(6..samples - 8);
            let ray = rng.gen_range(0..rays);
            let r = (s as f64 + 0.5) * cell;
            let th = (ray as f64 + 0.5) * TAU / rays as f64;
            [field.center()[0] + r * th.cos(), field.center()[1] + r * th.sin()]
        })
        .collect()
}

#[test]
fn analytic_gradients_match_finite_differences() {
    let start = Instant::now();

    let mut worst_stress = 0.0_f64;
    for seed in 0..50u64 {
        let g = random_connected_graph_in(seed, 4, 10);
        let d = shortest_paths(&g).unwrap();
        let w = StressWeights::elastic(&d);
        let x = random_layout(seed ^ 0x5eed, g.node_count(), 2.0);
        let analytic = stress_gradient(&x, &d, &w);
        let scale =
            x.positions().iter().flat_map(|p| p.iter()).fold(1.0_f64, |a, &b| a.max(b.abs()));
        let fd = fd_gradient(
            |y| stress(&Layout::new(y.to_vec()).unwrap(), &d, &w),
            x.positions(),
            1e-6 * scale,
        );
        let rel = grad_diff(&analytic, &fd) / grad_max(&fd).max(1e-12);
        worst_stress = worst_stress.max(rel);
        assert!(rel <= 1e-5, "seed {seed}: stress gradient relative error {rel:.2e}");
    }

    let field_cfg = MonotonizeConfig {
        rays: 90,
        samples_per_ray: 64,
        inversion_grid: 256,
        ..MonotonizeConfig::default()
    };
    let mut worst_combined = 0.0_f64;
    for seed in 0..25u64 {
        let g = random_connected_graph_in(200 + seed, 6, 12);
        let d = shortest_paths(&g).unwrap();
        let w = StressWeights::elastic(&d);
        let c = betweenness(&g).unwrap();
        let init = mds_layout(&d, MdsInit::Seed(seed), &MdsParams::default()).unwrap();
        let field = field_from_layout(&init, &c, &field_cfg).unwrap();
        let w_rho = [0.1, 1.0, 10.0][(seed % 3) as usize];

        let probe = cell_center_probe(&field, g.node_count(), 900 + seed);
        let x = Layout::new(probe.clone()).unwrap();
        let analytic = objective_gradient(&x, &d, &w, &field, &c, w_rho);

        let scale = probe.iter().flat_map(|p| p.iter()).fold(1.0_f64, |a, &b| a.max(b.abs()));
        let stress_fd = fd_gradient(
            |y| stress(&Layout::new(y.to_vec()).unwrap(), &d, &w),
            &probe,
            1e-6 * scale,
        );
        let h = 1e-3 * field.r_max();
        let penalty_fd =
            fd_gradient(|y| penalty(&field, &Layout::new(y.to_vec()).unwrap(), &c), &probe, h);
        let oracle: Vec<[f64; 2]> = stress_fd
            .iter()
            .zip(&penalty_fd)
            .map(|(s, p)| [s[0] + w_rho * p[0], s[1] + w_rho * p[1]])
            .collect();

        let rel = grad_diff(&analytic, &oracle) / grad_max(&oracle).max(1e-12);
        worst_combined = worst_combined.max(rel);
        assert!(rel <= 1e-4, "seed {seed}: combined gradient relative error {rel:.2e}");
    }

    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 30.0, "gradient checks took {elapsed:.1}s, budget 30s");
    println!(
        "PASS gradients: stress worst {worst_stress:.2e} (50 runs), \
         combined worst {worst_combined:.2e} (25 runs), {elapsed:.2}s"
    );
}

// ---------------------------------------------------------------------------
// 3. radial monotonicity of every built field

#[test]
fn built_fields_are_radially_monotone() {
    let start = Instant::now();
    for seed in 0..20 {
        let g = generate_barabasi_albert(30, 2, seed).unwrap();
        let d = shortest_paths(&g).unwrap();
        let c = betweenness(&g).unwrap();
        let x = mds_layout(&d, MdsInit::Seed(seed), &MdsParams::default()).unwrap();
        let field = field_from_layout(&x, &c, &MonotonizeConfig::default()).unwrap();
        for r in 0..field.ray_count() {
            let ray = field.ray(r);
            for s in 1..ray.len() {
                assert!(
                    ray[s] <= ray[s - 1] + 1e-9,
                    "seed {seed}: ray {r} rises at sample {s}: {} -> {}",
                    ray[s - 1],
                    ray[s]
                );
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 60.0, "monotonicity check took {elapsed:.1}s, budget 60s");
    println!("PASS monotone fields: 20 pipelines, {elapsed:.2}s");
}

// ---------------------------------------------------------------------------
// 4. limiting case: aligned radial input starts with negligible penalty

#[test]
fn aligned_radial_input_has_negligible_initial_penalty() {
    // exact radial layout: rings of nodes whose centrality is a strictly
    // decreasing function of radius, peak node at the center
    let mut positions = vec![[0.0, 0.0]];
    let mut values = vec![1.0];
    for (ring, &radius) in [0.4, 0.8, 1.2, 1.6].iter().enumerate() {
        for k in 0..12 {
            let th = TAU * (k as f64 + 0.35 * ring as f64) / 12.0;
            positions.push([radius * th.cos(), radius * th.sin()]);
            values.push(1.0 - 0.45 * radius);
        }
    }
    let layout = Layout::new(positions).unwrap();
    let c = CentralityVector::from_normalized(values).unwrap();
    // narrow smoothing bandwidth: the input is already monotone, so the
    // regression should act as close to the identity as its kernel allows
    let cfg = MonotonizeConfig { bandwidth_frac: 0.01, ..MonotonizeConfig::default() };
    let field = field_from_layout(&layout, &c, &cfg).unwrap();
    let rho = penalty(&field, &layout, &c);
    assert!(rho < 1e-3, "aligned input still pays {rho:.2e}");
    println!("PASS aligned limit: initial penalty {rho:.2e} < 1e-3");
}

// ---------------------------------------------------------------------------
// 5. karate club: penalty falls, stress rises by a bounded amount

#[test]
fn karate_lowers_penalty_at_bounded_stress_cost() {
    let start = Instant::now();
    let g = anisolay::datasets::karate_club();
    let d = shortest_paths(&g).unwrap();
    let w = StressWeights::elastic(&d);
    let mds = mds_layout(&d, MdsInit::Seed(0), &MdsParams::default()).unwrap();
    let sigma_mds = stress(&mds, &d, &w);

    let res = arl_layout(&g, &ArlConfig::default(), 0).unwrap();
    let first = res.trace.records.first().unwrap();
    let last = res.trace.records.last().unwrap();

    assert!(
        last.rho < first.rho,
        "penalty did not improve: {} -> {}",
        first.rho,
        last.rho
    );
    assert!(
        last.sigma >= sigma_mds,
        "constrained stress {} below the unconstrained optimum {sigma_mds}",
        last.sigma
    );
    let increase = (last.sigma - sigma_mds) / sigma_mds;
    assert!(increase < 0.5, "stress rose by {:.1}%, cap 50%", 100.0 * increase);

    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 60.0, "karate run took {elapsed:.1}s, budget 60s");
    println!(
        "PASS karate trade-off: rho {:.4} -> {:.4}, stress +{:.2}%, {elapsed:.2}s",
        first.rho,
        last.rho,
        100.0 * increase
    );
}

// ---------------------------------------------------------------------------
// 6. heavier alignment weights end tighter

#[test]
fn heavier_alignment_weights_end_tighter() {
    let g = generate_barabasi_albert(30, 2, 1).unwrap();
    let mut finals = Vec::new();
    for w_rho in [10.0, 1.0, 0.1] {
        let cfg = ArlConfig { w_rho, ..ArlConfig::default() };
        let res = arl_layout(&g, &cfg, 0).unwrap();
        finals.push(res.trace.records.last().unwrap().rho);
    }
    assert!(
        finals[0] <= finals[1] && finals[1] <= finals[2],
        "penalty ordering violated: rho(10)={} rho(1)={} rho(0.1)={}",
        finals[0],
        finals[1],
        finals[2]
    );
    println!(
        "PASS weight ordering: rho(10)={:.4} <= rho(1)={:.4} <= rho(0.1)={:.4}",
        finals[0], finals[1], finals[2]
    );
}

// ---------------------------------------------------------------------------
// 7. objective profile: monotone between field updates

#[test]
fn objective_rises_only_at_field_updates() {
    let cfg = ArlConfig { max_iters: 800, ..ArlConfig::default() };
    let g = generate_barabasi_albert(30, 2, 5).unwrap();
    let res = arl_layout(&g, &cfg, 0).unwrap();
    let records = &res.trace.records;
    let updates = records.iter().filter(|r| r.field_updated).count();
    assert!(updates >= 2, "profile too short to exercise refreshes");
    for pair in records.windows(2) {
        if !pair[1].field_updated {
            assert!(
                pair[1].gamma <= pair[0].gamma + 1e-12,
                "objective rose between updates at iteration {}: {} -> {}",
                pair[1].iter,
                pair[0].gamma,
                pair[1].gamma
            );
        }
    }
    println!(
        "PASS objective profile: {} iterations, {updates} field refreshes, \
         monotone in between",
        records.len()
    );
}

// ---------------------------------------------------------------------------
// 8. projection lands nodes within two radial sample spacings of their level

#[test]
fn projection_lands_within_two_radial_spacings() {
    let cfg = ArlConfig { max_iters: 600, ..ArlConfig::default() };
    let g = generate_barabasi_albert(30, 2, 19).unwrap();
    let c = betweenness(&g).unwrap();
    let res = arl_layout(&g, &cfg, 0).unwrap();

    let before = penalty(&res.field, &res.layout, &c);
    let projected = project_to_contours(&res.layout, &res.field, &c).unwrap();
    let after = penalty(&res.field, &projected, &c);
    assert!(after <= before + 1e-12, "projection raised the penalty: {before} -> {after}");

    // the worst value change across one radial cell bounds how far an exact
    // level can sit from the nearest stored sample ring
    let field = &res.field;
    let mut max_drop = 0.0_f64;
    for r in 0..field.ray_count() {
        let ray = field.ray(r);
        for s in 1..ray.len() {
            max_drop = max_drop.max(ray[s - 1] - ray[s]);
        }
    }
    let tol = 2.0 * max_drop;
    let mut worst = 0.0_f64;
    for (i, p) in projected.positions().iter().enumerate() {
        let level = c.normalized()[i].clamp(field.min_value(), field.max_value());
        let gap = (anisolay_core::eval_field(field, *p) - level).abs();
        worst = worst.max(gap);
        assert!(gap < tol, "node {i} sits {gap:.2e} from its level, tolerance {tol:.2e}");
    }
    println!(
        "PASS projection: penalty {before:.4} -> {after:.2e}, worst level gap \
         {worst:.2e} < {tol:.2e}"
    );
}

// ---------------------------------------------------------------------------
// 9. byte-identical CLI runs

#[test]
fn karate_cli_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for tag in ["a", "b"] {
        let json = dir.path().join(format!("{tag}.json"));
        let csv = dir.path().join(format!("{tag}.csv"));
        let svg = dir.path().join(format!("{tag}.svg"));
        let status = std::process::Command::new(env!("CARGO_BIN_EXE_anisolay"))
            .args([
                "layout", "--dataset", "karate", "--mode", "arl", "--seed", "7",
                "-o", json.to_str().unwrap(),
                "--trace", csv.to_str().unwrap(),
                "--svg", svg.to_str().unwrap(),
            ])
            .status()
            .unwrap();
        assert!(status.success());
        outputs.push((
            std::fs::read(&json).unwrap(),
            std::fs::read(&csv).unwrap(),
            std::fs::read(&svg).unwrap(),
        ));
    }
    assert_eq!(outputs[0].0, outputs[1].0, "layout JSON differs between runs");
    assert_eq!(outputs[0].1, outputs[1].1, "trace CSV differs between runs");
    assert_eq!(outputs[0].2, outputs[1].2, "scene SVG differs between runs");
    println!(
        "PASS determinism: JSON {} B, CSV {} B, SVG {} B identical across runs",
        outputs[0].0.len(),
        outputs[0].1.len(),
        outputs[0].2.len()
    );
}

// ---------------------------------------------------------------------------
// 10. a field rebuild outgrows a descent step as n grows

fn median_secs<F: FnMut()>(mut f: F, reps: usize) -> f64 {
    let mut times: Vec<f64> = (0..reps)
        .map(|_| {
            let t = Instant::now();
            f();
            t.elapsed().as_secs_f64()
        })
        .collect();
    times.sort_by(f64::total_cmp);
    times[reps / 2]
}

#[test]
fn field_rebuild_outgrows_descent_steps() {
    // a deliberately coarse field keeps the size-independent grid work
    // small so the scaling of the interpolant fit itself shows through
    let coarse = MonotonizeConfig {
        rays: 3,
        samples_per_ray: 4,
        inversion_grid: 2,
        ..MonotonizeConfig::default()
    };
    let mut ratios = Vec::new();
    for n in [50, 100, 200] {
        let g = generate_barabasi_albert(n, 2, 1).unwrap();
        let d = shortest_paths(&g).unwrap();
        let w = StressWeights::elastic(&d);
        let c = betweenness(&g).unwrap();
        let x = random_layout(42, n, 3.0);
        let field = field_from_layout(&x, &c, &coarse).unwrap();

        let rebuild = median_secs(
            || {
                std::hint::black_box(field_from_layout(&x, &c, &coarse).unwrap());
            },
            15,
        );
        let step = median_secs(
            || {
                std::hint::black_box(objective_gradient(&x, &d, &w, &field, &c, 1.0));
            },
            15,
        );
        ratios.push((n, rebuild / step));
    }
    println!(
        "PASS cost scaling: rebuild/step ratios {:.1} (n=50) {:.1} (n=100) {:.1} (n=200)",
        ratios[0].1, ratios[1].1, ratios[2].1
    );
    assert!(
        ratios[0].1 < ratios[1].1 && ratios[1].1 < ratios[2].1,
        "rebuild/step ratio must increase with n: {ratios:?}"
    );
}
