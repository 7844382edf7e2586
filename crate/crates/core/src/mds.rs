//! Metric MDS: raw stress, its analytic gradient, and a plain gradient
//! descent with backtracking.
//!
//! Stress sums each unordered pair once:
//! sigma(X) = sum_{u<v} w_uv (d_uv - |x_u - x_v|)^2, with elastic weights
//! w_uv = d_uv^-2 so long distances do not dominate.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::math;
use crate::matrix::SquareMatrix;
use crate::paths::DistanceMatrix;

/// Node positions in the plane, one per node, all coordinates finite.
#[derive(Debug, Clone, PartialEq)]
pub struct Layout {
    pub(crate) positions: Vec<[f64; 2]>,
}

impl Layout {
    pub fn new(positions: Vec<[f64; 2]>) -> Result<Self, Error> {
        if positions.is_empty() {
            return Err(Error::BadParameter(String::from("layout must not be empty")));
        }
        if positions.iter().any(|p| !p[0].is_finite() || !p[1].is_finite()) {
            return Err(Error::BadParameter(String::from("layout coordinates must be finite")));
        }
        Ok(Self { positions })
    }

    pub fn positions(&self) -> &[[f64; 2]] {
        &self.positions
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }
}

/// Symmetric non-negative pair weights with a zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct StressWeights {
    n: usize,
    w: Vec<f64>,
}

impl StressWeights {
    /// Elastic scaling: w_uv = d_uv^-2. Normalizes each pair's residual by
    /// its target distance.
    pub fn elastic(d: &DistanceMatrix) -> Self {
        let n = d.node_count();
        let mut w = vec![0.0; n * n];
        for u in 0..n {
            for v in 0..n {
                if u != v {
                    let duv = d.get(u, v);
                    w[u * n + v] = 1.0 / (duv * duv);
                }
            }
        }
        Self { n, w }
    }

    /// Builds from row-major data, checking shape, symmetry, zero diagonal,
    /// and non-negative finite entries.
    pub fn new(n: usize, w: Vec<f64>) -> Result<Self, Error> {
        if n == 0 || w.len() != n * n {
            return Err(Error::BadParameter(String::from("weights must be n*n with n >= 1")));
        }
        for i in 0..n {
            if w[i * n + i] != 0.0 {
                return Err(Error::BadParameter(String::from("weight diagonal must be zero")));
            }
            for j in 0..i {
                let a = w[i * n + j];
                if a != w[j * n + i] || !a.is_finite() || a < 0.0 {
                    return Err(Error::BadParameter(String::from(
                        "weights must be symmetric, finite, and non-negative",
                    )));
                }
            }
        }
        Ok(Self { n, w })
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, u: usize, v: usize) -> f64 {
        self.w[u * self.n + v]
    }
}

/// Weighted raw stress over unordered pairs.
pub fn stress(x: &Layout, d: &DistanceMatrix, w: &StressWeights) -> f64 {
    let n = x.len();
    debug_assert_eq!(n, d.node_count());
    debug_assert_eq!(n, w.node_count());
    let p = x.positions();
    let mut total = 0.0;
    for u in 0..n {
        for v in u + 1..n {
            let wuv = w.get(u, v);
            if wuv == 0.0 {
                continue;
            }
            let r = d.get(u, v) - math::dist(p[u], p[v]);
            total += wuv * r * r;
        }
    }
    total
}

/// The two matrices appearing in the stress gradient.
///
/// V depends on the weights alone: v_ij = -w_ij off the diagonal and each
/// row sums to zero. B depends on the current positions: for i != j,
/// b_ij = -w_ij d_ij / |x_i - x_j| (zero when the points coincide), and
/// b_ii makes each row sum to zero as well.
#[derive(Debug, Clone)]
pub struct GradientMatrices {
    pub v: SquareMatrix,
    pub b: SquareMatrix,
}

impl GradientMatrices {
    pub fn new(x: &Layout, d: &DistanceMatrix, w: &StressWeights) -> Self {
        let n = x.len();
        let p = x.positions();
        let mut v = SquareMatrix::zeros(n);
        let mut b = SquareMatrix::zeros(n);
        for i in 0..n {
            let mut v_diag = 0.0;
            let mut b_diag = 0.0;
            for j in 0..n {
                if i == j {
                    continue;
                }
                let wij = w.get(i, j);
                v.set(i, j, -wij);
                v_diag += wij;
                let delta = math::dist(p[i], p[j]);
                let bij = if delta == 0.0 { 0.0 } else { -wij * d.get(i, j) / delta };
                b.set(i, j, bij);
                b_diag -= bij;
            }
            v.set(i, i, v_diag);
            b.set(i, i, b_diag);
        }
        Self { v, b }
    }
}

/// Analytic stress gradient, 2(VX - B(X)X). Matches central finite
/// differences of `stress`; stationary exactly when VX = B(X)X.
pub fn stress_gradient(x: &Layout, d: &DistanceMatrix, w: &StressWeights) -> Vec<[f64; 2]> {
    let gm = GradientMatrices::new(x, d, w);
    let vx = gm.v.mul_points(x.positions());
    let bx = gm.b.mul_points(x.positions());
    vx.iter()
        .zip(&bx)
        .map(|(a, b)| [2.0 * (a[0] - b[0]), 2.0 * (a[1] - b[1])])
        .collect()
}

/// Largest per-node Euclidean move between two position sets.
pub fn max_displacement(a: &[[f64; 2]], b: &[[f64; 2]]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(p, q)| math::dist(*p, *q))
        .fold(0.0, f64::max)
}

const MAX_HALVINGS: usize = 60;

/// One backtracking descent step: walk along -grad starting at `base_step`,
/// halving until the objective stops increasing. Falls back to a zero move
/// when no acceptable step exists.
pub(crate) fn descend_step<F: Fn(&[[f64; 2]]) -> f64>(
    x: &[[f64; 2]],
    grad: &[[f64; 2]],
    base_step: f64,
    f_cur: f64,
    objective: F,
) -> (Vec<[f64; 2]>, f64) {
    let mut step = base_step;
    for _ in 0..MAX_HALVINGS {
        let cand: Vec<[f64; 2]> = x
            .iter()
            .zip(grad)
            .map(|(p, g)| [p[0] - step * g[0], p[1] - step * g[1]])
            .collect();
        let f_new = objective(&cand);
        if f_new.is_finite() && f_new <= f_cur {
            return (cand, f_new);
        }
        step *= 0.5;
    }
    (x.to_vec(), f_cur)
}

pub(crate) fn gradient_is_finite(g: &[[f64; 2]]) -> bool {
    g.iter().all(|p| p[0].is_finite() && p[1].is_finite())
}

/// Starting positions: a seeded sample from the unit disk, or a caller
/// supplied layout.
#[derive(Debug, Clone)]
pub enum MdsInit {
    Seed(u64),
    Layout(Layout),
}

/// Descent controls. `tol_factor` scales the largest target distance to get
/// the convergence threshold on per-iteration node displacement.
#[derive(Debug, Clone, PartialEq)]
pub struct MdsParams {
    pub step: f64,
    pub max_iters: usize,
    pub tol_factor: f64,
}

impl Default for MdsParams {
    fn default() -> Self {
        Self { step: 0.1, max_iters: 2000, tol_factor: 1e-4 }
    }
}

impl MdsParams {
    pub fn validate(&self) -> Result<(), Error> {
        if self.step <= 0.0 || !self.step.is_finite() {
            return Err(Error::BadParameter(String::from("step must be positive and finite")));
        }
        if self.max_iters == 0 {
            return Err(Error::BadParameter(String::from("max_iters must be at least 1")));
        }
        if self.tol_factor <= 0.0 || !self.tol_factor.is_finite() {
            return Err(Error::BadParameter(String::from("tol_factor must be positive and finite")));
        }
        Ok(())
    }
}

pub(crate) fn seeded_disk_positions(n: usize, seed: u64) -> Vec<[f64; 2]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| loop {
            let x: f64 = rng.gen_range(-1.0..1.0);
            let y: f64 = rng.gen_range(-1.0..1.0);
            if x * x + y * y <= 1.0 {
                break [x, y];
            }
        })
        .collect()
}

/// Gradient descent on stress with elastic weights. Stops when a candidate
/// step would move every node less than tol (that candidate is not
/// applied), or at the iteration cap. Stress never increases across
/// applied iterations.
pub fn mds_layout(d: &DistanceMatrix, init: MdsInit, params: &MdsParams) -> Result<Layout, Error> {
    params.validate()?;
    let n = d.node_count();
    if n == 1 {
        return Ok(Layout { positions: vec![[0.0, 0.0]] });
    }
    let w = &StressWeights::elastic(d);

    let mut x = match init {
        MdsInit::Seed(seed) => seeded_disk_positions(n, seed),
        MdsInit::Layout(l) => {
            if l.len() != n {
                return Err(Error::BadParameter(String::from("init layout size must match distances")));
            }
            l.positions
        }
    };

    let tol = params.tol_factor * d.max();
    let mut f_cur = stress(&Layout { positions: x.clone() }, d, w);
    if !f_cur.is_finite() {
        return Err(Error::NonFiniteObjective);
    }

    for _ in 0..params.max_iters {
        let lx = Layout { positions: x.clone() };
        let g = stress_gradient(&lx, d, w);
        if !gradient_is_finite(&g) {
            return Err(Error::NonFiniteObjective);
        }
        let (cand, f_new) = descend_step(&x, &g, params.step, f_cur, |y| {
            stress(&Layout { positions: y.to_vec() }, d, w)
        });
        if max_displacement(&x, &cand) < tol {
            break;
        }
        x = cand;
        f_cur = f_new;
    }
    Ok(Layout { positions: x })
}
