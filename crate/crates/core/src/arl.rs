//! Layout optimization that trades stress against contour alignment.
//!
//! Starting from a converged MDS embedding, the optimizer descends on
//! gamma = sigma + w_rho * rho, where rho penalizes the squared gap
//! between the monotone field value at each node and that node's
//! normalized centrality. The field depends on the layout, so it is held
//! frozen between periodic rebuilds (the lag): within a window descent is
//! plain backtracking on a fixed objective, and each rebuild may move the
//! goalposts, visible as jumps in the energy trace.

use alloc::string::String;
use alloc::vec::Vec;

use crate::centrality::{betweenness, CentralityVector};
use crate::error::Error;
use crate::field::{
    eval_field, extract_contour, field_from_layout, field_gradient, MonotonicField,
};
use crate::graph::Graph;
use crate::math::dist;
use crate::mds::{
    descend_step, gradient_is_finite, max_displacement, mds_layout, stress, stress_gradient,
    Layout, MdsInit, MdsParams, StressWeights,
};
use crate::monotone::MonotonizeConfig;
use crate::paths::{shortest_paths, DistanceMatrix};

/// Optimizer controls. The descent parameters (`step`, `max_iters`,
/// `tol_factor`) also govern the MDS initialization phase.
#[derive(Debug, Clone)]
pub struct ArlConfig {
    /// Weight of the alignment penalty in the combined objective.
    pub w_rho: f64,
    /// Iterations between field rebuilds; the field is frozen in between.
    pub lag: usize,
    pub max_iters: usize,
    pub step: f64,
    /// Convergence threshold on node displacement, as a fraction of the
    /// largest graph distance.
    pub tol_factor: f64,
    pub field: MonotonizeConfig,
}

impl Default for ArlConfig {
    fn default() -> Self {
        ArlConfig {
            w_rho: 1.0,
            lag: 25,
            max_iters: 2000,
            step: 0.1,
            tol_factor: 1e-4,
            field: MonotonizeConfig::default(),
        }
    }
}

impl ArlConfig {
    pub fn validate(&self) -> Result<(), Error> {
        if !(self.w_rho >= 0.0 && self.w_rho.is_finite()) {
            return Err(Error::BadParameter(String::from(
                "penalty weight must be finite and non-negative",
            )));
        }
        if self.lag == 0 {
            return Err(Error::BadParameter(String::from("lag must be at least 1")));
        }
        self.mds_params().validate()?;
        self.field.validate()
    }

    fn mds_params(&self) -> MdsParams {
        MdsParams {
            step: self.step,
            max_iters: self.max_iters,
            tol_factor: self.tol_factor,
        }
    }
}

/// Energy snapshot after one iteration. Record 0 describes the MDS
/// initialization with the freshly built field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRecord {
    pub iter: usize,
    pub sigma: f64,
    pub rho: f64,
    pub gamma: f64,
    /// True when the field was rebuilt at the start of this iteration.
    pub field_updated: bool,
}

/// Per-iteration energy history of one optimization run.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ArlTrace {
    pub records: Vec<TraceRecord>,
}

/// Everything a run produces: final positions, the last field (the one the
/// final iterations descended on), and the energy trace.
#[derive(Debug, Clone)]
pub struct ArlResult {
    pub layout: Layout,
    pub field: MonotonicField,
    pub trace: ArlTrace,
}

fn penalty_at(field: &MonotonicField, positions: &[[f64; 2]], targets: &[f64]) -> f64 {
    positions
        .iter()
        .zip(targets)
        .map(|(p, &c)| {
            let r = eval_field(field, *p) - c;
            r * r
        })
        .sum()
}

/// Alignment penalty: the sum over nodes of the squared difference between
/// the field value at the node and the node's normalized centrality.
pub fn penalty(field: &MonotonicField, x: &Layout, centrality: &CentralityVector) -> f64 {
    debug_assert_eq!(x.len(), centrality.len());
    penalty_at(field, x.positions(), centrality.normalized())
}

/// Combined objective.
pub fn objective(sigma: f64, rho: f64, w_rho: f64) -> f64 {
    sigma + w_rho * rho
}

/// Gradient of the combined objective with the field held frozen: the
/// stress gradient plus, per node, `w_rho * 2 (M(x_i) - c_i) * grad M(x_i)`.
/// With `w_rho = 0` this is exactly the stress gradient.
pub fn objective_gradient(
    x: &Layout,
    d: &DistanceMatrix,
    w: &StressWeights,
    field: &MonotonicField,
    centrality: &CentralityVector,
    w_rho: f64,
) -> Vec<[f64; 2]> {
    let mut g = stress_gradient(x, d, w);
    if w_rho != 0.0 {
        let targets = centrality.normalized();
        for (i, p) in x.positions().iter().enumerate() {
            let gap = eval_field(field, *p) - targets[i];
            let fg = field_gradient(field, *p);
            let coeff = w_rho * 2.0 * gap;
            g[i][0] += coeff * fg[0];
            g[i][1] += coeff * fg[1];
        }
    }
    g
}

fn gamma_at(
    positions: &[[f64; 2]],
    d: &DistanceMatrix,
    w: &StressWeights,
    field: &MonotonicField,
    targets: &[f64],
    w_rho: f64,
) -> f64 {
    let lay = Layout {
        positions: positions.to_vec(),
    };
    let sigma = stress(&lay, d, w);
    if w_rho == 0.0 {
        // keep the arithmetic identical to plain MDS
        sigma
    } else {
        sigma + w_rho * penalty_at(field, positions, targets)
    }
}

/// Runs the full pipeline on a connected graph with at least 3 nodes:
/// betweenness, shortest-path distances, MDS initialization, then lagged
/// descent on the combined objective. The field is built once before the
/// first step and rebuilt from the current layout every `cfg.lag`
/// iterations. The run stops once candidate steps have moved every node
/// less than the tolerance for a full lag window (rejected candidates are
/// not applied), or at the iteration cap. Deterministic for a fixed seed.
pub fn arl_layout(g: &Graph, cfg: &ArlConfig, seed: u64) -> Result<ArlResult, Error> {
    cfg.validate()?;
    if g.node_count() < 3 {
        return Err(Error::BadParameter(String::from(
            "layout optimization needs at least 3 nodes",
        )));
    }
    let d = shortest_paths(g)?;
    let centrality = betweenness(g)?;
    let w = StressWeights::elastic(&d);
    let init = mds_layout(&d, MdsInit::Seed(seed), &cfg.mds_params())?;

    let targets: Vec<f64> = centrality.normalized().to_vec();
    let mut x = init.positions().to_vec();
    let mut field = field_from_layout(&init, &centrality, &cfg.field)?;
    let tol = cfg.tol_factor * d.max();
    // a pure-stress run must stop exactly where MDS stopped, so it gets a
    // window of one iteration instead of a full lag
    let window = if cfg.w_rho == 0.0 { 1 } else { cfg.lag };

    let mut f_cur = gamma_at(&x, &d, &w, &field, &targets, cfg.w_rho);
    if !f_cur.is_finite() {
        return Err(Error::NonFiniteObjective);
    }

    let mut trace = ArlTrace::default();
    let record = |trace: &mut ArlTrace,
                  iter: usize,
                  positions: &[[f64; 2]],
                  field: &MonotonicField,
                  updated: bool| {
        let lay = Layout {
            positions: positions.to_vec(),
        };
        let sigma = stress(&lay, &d, &w);
        let rho = penalty_at(field, positions, &targets);
        trace.records.push(TraceRecord {
            iter,
            sigma,
            rho,
            gamma: objective(sigma, rho, cfg.w_rho),
            field_updated: updated,
        });
    };
    record(&mut trace, 0, &x, &field, true);

    let mut settled = 0usize;
    for t in 1..=cfg.max_iters {
        let mut updated = false;
        if t % cfg.lag == 0 {
            let lay = Layout {
                positions: x.clone(),
            };
            field = field_from_layout(&lay, &centrality, &cfg.field)?;
            updated = true;
            f_cur = gamma_at(&x, &d, &w, &field, &targets, cfg.w_rho);
            if !f_cur.is_finite() {
                return Err(Error::NonFiniteObjective);
            }
        }
        let lay = Layout {
            positions: x.clone(),
        };
        let grad = objective_gradient(&lay, &d, &w, &field, &centrality, cfg.w_rho);
        if !gradient_is_finite(&grad) {
            return Err(Error::NonFiniteObjective);
        }
        let (cand, f_new) = descend_step(&x, &grad, cfg.step, f_cur, |y| {
            gamma_at(y, &d, &w, &field, &targets, cfg.w_rho)
        });
        let accepted = max_displacement(&x, &cand) >= tol;
        if accepted {
            x = cand;
            f_cur = f_new;
            settled = 0;
        } else {
            settled += 1;
        }
        record(&mut trace, t, &x, &field, updated);
        if !accepted && settled >= window {
            break;
        }
    }

    Ok(ArlResult {
        layout: Layout { positions: x },
        field,
        trace,
    })
}

fn nearest_on_segment(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    let ab = [b[0] - a[0], b[1] - a[1]];
    let len2 = ab[0] * ab[0] + ab[1] * ab[1];
    if len2 == 0.0 {
        return a;
    }
    let t = (((p[0] - a[0]) * ab[0] + (p[1] - a[1]) * ab[1]) / len2).clamp(0.0, 1.0);
    [a[0] + t * ab[0], a[1] + t * ab[1]]
}

/// Hard projection: moves each node to the closest point on the level set
/// of its own (clamped) centrality. A node keeps its position when that is
/// already at least as close to its level as the projected candidate, so
/// the penalty never increases. Levels above the field maximum collapse to
/// the center.
pub fn project_to_contours(
    x: &Layout,
    field: &MonotonicField,
    centrality: &CentralityVector,
) -> Result<Layout, Error> {
    if x.len() != centrality.len() {
        return Err(Error::BadParameter(String::from(
            "layout and centrality sizes differ",
        )));
    }
    let lo = field.min_value();
    let hi = field.max_value();
    let positions = x
        .positions()
        .iter()
        .zip(centrality.normalized())
        .map(|(p, &c)| {
            let ring = extract_contour(field, c.clamp(lo, hi));
            let mut best = ring[0];
            let mut best_d2 = f64::INFINITY;
            for k in 0..ring.len() {
                let q = nearest_on_segment(*p, ring[k], ring[(k + 1) % ring.len()]);
                let dq = dist(*p, q);
                if dq * dq < best_d2 {
                    best_d2 = dq * dq;
                    best = q;
                }
            }
            let cur_gap = (eval_field(field, *p) - c).abs();
            let new_gap = (eval_field(field, best) - c).abs();
            if new_gap < cur_gap {
                best
            } else {
                *p
            }
        })
        .collect();
    Layout::new(positions)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Edge;
    use crate::math::TAU;
    use alloc::vec;
    use alloc::vec::Vec;

    fn constant_field(value: f64, r_max: f64) -> MonotonicField {
        MonotonicField::from_parts([0.0, 0.0], r_max, 4, 3, vec![value; 12]).unwrap()
    }

    /// Field falling linearly from 1 at the center to 0 at r_max.
    fn ramp_field(rays: usize, samples: usize, r_max: f64) -> MonotonicField {
        let mut values = Vec::new();
        for _ in 0..rays {
            for s in 0..samples {
                values.push(1.0 - s as f64 / (samples - 1) as f64);
            }
        }
        MonotonicField::from_parts([0.0, 0.0], r_max, rays, samples, values).unwrap()
    }

    fn small_test_graph() -> Graph {
        // wheel-ish graph: a hub, a 5-cycle, one chord
        let mut edges = vec![];
        for k in 0..5 {
            edges.push(Edge::new(5, k, 1.0));
            edges.push(Edge::new(k, (k + 1) % 5, 1.0));
        }
        edges.push(Edge::new(0, 2, 1.0));
        Graph::new(6, edges).unwrap()
    }

    fn quick_cfg() -> ArlConfig {
        ArlConfig {
            max_iters: 300,
            field: MonotonizeConfig {
                rays: 24,
                samples_per_ray: 16,
                inversion_grid: 64,
                ..MonotonizeConfig::default()
            },
            ..ArlConfig::default()
        }
    }

    #[test]
    fn objective_is_a_weighted_sum() {
        assert_eq!(objective(1.0, 0.5, 1.0), 1.5);
        assert_eq!(objective(0.7, 123.0, 0.0), 0.7);
        assert_eq!(objective(0.25, 0.25, 10.0), 2.75);
    }

    #[test]
    fn penalty_is_zero_under_exact_alignment() {
        let field = constant_field(0.5, 2.0);
        let x = Layout::new(vec![[0.3, 0.1], [-0.5, 0.4], [0.0, -0.9]]).unwrap();
        let c = CentralityVector::from_normalized(vec![0.5, 0.5, 0.5]).unwrap();
        assert_eq!(penalty(&field, &x, &c), 0.0);
    }

    #[test]
    fn penalty_of_single_misaligned_node() {
        let field = constant_field(0.7, 2.0);
        let x = Layout::new(vec![[0.25, -0.25]]).unwrap();
        let c = CentralityVector::from_normalized(vec![0.2]).unwrap();
        assert!((penalty(&field, &x, &c) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn zero_weight_gradient_is_exactly_the_stress_gradient() {
        let g = small_test_graph();
        let d = shortest_paths(&g).unwrap();
        let w = StressWeights::elastic(&d);
        let x = mds_layout(&d, MdsInit::Seed(11), &MdsParams::default()).unwrap();
        let c = betweenness(&g).unwrap();
        let field = field_from_layout(&x, &c, &quick_cfg().field).unwrap();
        let ours = objective_gradient(&x, &d, &w, &field, &c, 0.0);
        assert_eq!(ours, stress_gradient(&x, &d, &w));
    }

    #[test]
    fn aligned_nodes_contribute_no_penalty_gradient() {
        let g = small_test_graph();
        let d = shortest_paths(&g).unwrap();
        let w = StressWeights::elastic(&d);
        let x = Layout::new(vec![
            [0.1, 0.0],
            [1.0, 0.2],
            [-0.8, 0.5],
            [0.3, -1.1],
            [-0.2, -0.7],
            [0.9, 0.9],
        ])
        .unwrap();
        let field = constant_field(0.5, 3.0);
        let c = CentralityVector::from_normalized(vec![0.5; 6]).unwrap();
        let with_penalty = objective_gradient(&x, &d, &w, &field, &c, 7.5);
        assert_eq!(with_penalty, stress_gradient(&x, &d, &w));
    }

    #[test]
    fn run_produces_consistent_trace() {
        let g = small_test_graph();
        let out = arl_layout(&g, &quick_cfg(), 4).unwrap();
        assert!(!out.trace.records.is_empty());
        let first = &out.trace.records[0];
        assert_eq!(first.iter, 0);
        assert!(first.field_updated);
        for r in &out.trace.records {
            assert!(
                (r.gamma - (r.sigma + quick_cfg().w_rho * r.rho)).abs() <= 1e-12,
                "record {r:?}"
            );
        }
        for p in out.layout.positions() {
            assert!(p[0].is_finite() && p[1].is_finite());
        }
    }

    #[test]
    fn zero_weight_run_reproduces_mds() {
        let g = small_test_graph();
        let d = shortest_paths(&g).unwrap();
        let cfg = ArlConfig {
            w_rho: 0.0,
            ..quick_cfg()
        };
        let mds = mds_layout(
            &d,
            MdsInit::Seed(9),
            &MdsParams {
                step: cfg.step,
                max_iters: cfg.max_iters,
                tol_factor: cfg.tol_factor,
            },
        )
        .unwrap();
        let out = arl_layout(&g, &cfg, 9).unwrap();
        assert_eq!(out.layout.positions(), mds.positions());
    }

    #[test]
    fn projection_moves_node_to_its_level_radius() {
        let field = ramp_field(90, 65, 2.0);
        let x = Layout::new(vec![[1.8, 0.0]]).unwrap();
        let c = CentralityVector::from_normalized(vec![0.5]).unwrap();
        let out = project_to_contours(&x, &field, &c).unwrap();
        let p = out.positions()[0];
        assert!((p[0] - 1.0).abs() < 0.05, "{p:?}");
        assert!(p[1].abs() < 0.05, "{p:?}");
    }

    #[test]
    fn projection_keeps_already_aligned_nodes() {
        let field = ramp_field(90, 65, 2.0);
        let angle = TAU * 17.0 / 90.0;
        let p = [
            field.center()[0] + 0.75 * 2.0 * crate::math::cos(angle),
            field.center()[1] + 0.75 * 2.0 * crate::math::sin(angle),
        ];
        let level = eval_field(&field, p);
        let x = Layout::new(vec![p]).unwrap();
        let c = CentralityVector::from_normalized(vec![level]).unwrap();
        let out = project_to_contours(&x, &field, &c).unwrap();
        assert_eq!(out.positions()[0], p);
    }

    #[test]
    fn projection_never_raises_the_penalty() {
        let g = small_test_graph();
        let out = arl_layout(&g, &quick_cfg(), 21).unwrap();
        let c = betweenness(&g).unwrap();
        let before = penalty(&out.field, &out.layout, &c);
        let projected = project_to_contours(&out.layout, &out.field, &c).unwrap();
        let after = penalty(&out.field, &projected, &c);
        assert!(after <= before, "{after} > {before}");
    }

    #[test]
    fn out_of_range_level_collapses_to_center() {
        let field = ramp_field(45, 33, 2.0);
        // a field value of exactly 1.0 only occurs at the center
        let x = Layout::new(vec![[1.4, 0.3]]).unwrap();
        let c = CentralityVector::from_normalized(vec![1.0]).unwrap();
        let out = project_to_contours(&x, &field, &c).unwrap();
        let p = out.positions()[0];
        assert!(p[0].abs() < 1e-12 && p[1].abs() < 1e-12);
    }

    #[test]
    fn tiny_graphs_are_rejected() {
        let g = Graph::new(2, vec![Edge::new(0, 1, 1.0)]).unwrap();
        assert!(matches!(
            arl_layout(&g, &ArlConfig::default(), 0),
            Err(Error::BadParameter(_))
        ));
    }

    #[test]
    fn config_validation_catches_bad_values() {
        let bad = [
            ArlConfig { w_rho: -1.0, ..ArlConfig::default() },
            ArlConfig { w_rho: f64::NAN, ..ArlConfig::default() },
            ArlConfig { lag: 0, ..ArlConfig::default() },
            ArlConfig { step: 0.0, ..ArlConfig::default() },
            ArlConfig { max_iters: 0, ..ArlConfig::default() },
        ];
        for cfg in bad {
            assert!(matches!(cfg.validate(), Err(Error::BadParameter(_))));
        }
    }
}
