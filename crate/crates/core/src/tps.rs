//! Thin plate spline interpolation over scattered 2D sites.
//!
//! Fits the classic biharmonic spline: a weighted sum of kernels
//! `phi(r) = r^2 ln r` centered at the data sites plus an affine part,
//! constrained so the kernel weights are orthogonal to the affine basis.
//! An optional ridge term `lambda` on the kernel block trades exact
//! interpolation for smoothness and rescues degenerate site sets.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::math::ln;

/// Fitted spline: kernel centers with their weights plus an affine tail.
#[derive(Debug, Clone)]
pub struct TpsModel {
    centers: Vec<[f64; 2]>,
    weights: Vec<f64>,
    /// Affine part `a0 + ax*x + ay*y`.
    affine: [f64; 3],
}

/// Kernel evaluated from the squared distance, `0.5 * r^2 * ln(r^2)`,
/// which equals `r^2 ln r` without taking a square root. Zero at r = 0.
fn kernel(a: [f64; 2], b: [f64; 2]) -> f64 {
    let dx = a[0] - b[0];
    let dy = a[1] - b[1];
    let r2 = dx * dx + dy * dy;
    if r2 == 0.0 {
        0.0
    } else {
        0.5 * r2 * ln(r2)
    }
}

impl TpsModel {
    /// Evaluates the spline at an arbitrary point.
    pub fn eval(&self, p: [f64; 2]) -> f64 {
        let mut acc = self.affine[0] + self.affine[1] * p[0] + self.affine[2] * p[1];
        for (c, w) in self.centers.iter().zip(self.weights.iter()) {
            acc += w * kernel(*c, p);
        }
        acc
    }

    /// Sites the spline was fitted to.
    pub fn centers(&self) -> &[[f64; 2]] {
        &self.centers
    }
}

/// Dense Gaussian elimination with partial pivoting. Returns None when a
/// pivot collapses relative to the matrix scale.
fn solve_dense(a: &mut [f64], rhs: &mut [f64], n: usize) -> Option<Vec<f64>> {
    let mut scale: f64 = 1.0;
    for &x in a.iter() {
        let ax = if x < 0.0 { -x } else { x };
        if ax > scale {
            scale = ax;
        }
    }
    let tol = 1e-13 * scale;
    for col in 0..n {
        let mut pivot_row = col;
        let mut pivot_mag = 0.0;
        for row in col..n {
            let mag = a[row * n + col].abs();
            if mag > pivot_mag {
                pivot_mag = mag;
                pivot_row = row;
            }
        }
        if pivot_mag <= tol {
            return None;
        }
        if pivot_row != col {
            for k in 0..n {
                a.swap(col * n + k, pivot_row * n + k);
            }
            rhs.swap(col, pivot_row);
        }
        let pivot = a[col * n + col];
        for row in col + 1..n {
            let factor = a[row * n + col] / pivot;
            if factor == 0.0 {
                continue;
            }
            a[row * n + col] = 0.0;
            for k in col + 1..n {
                a[row * n + k] -= factor * a[col * n + k];
            }
            rhs[row] -= factor * rhs[col];
        }
    }
    let mut x = vec![0.0; n];
    for col in (0..n).rev() {
        let mut acc = rhs[col];
        for k in col + 1..n {
            acc -= a[col * n + k] * x[k];
        }
        x[col] = acc / a[col * n + col];
    }
    Some(x)
}

fn assemble_and_solve(
    sites: &[[f64; 2]],
    values: &[f64],
    lambda: f64,
) -> Option<(Vec<f64>, [f64; 3])> {
    let n = sites.len();
    let m = n + 3;
    let mut a = vec![0.0; m * m];
    let mut rhs = vec![0.0; m];
    for i in 0..n {
        for j in 0..n {
            a[i * m + j] = kernel(sites[i], sites[j]);
        }
        a[i * m + i] += lambda;
        // affine columns [1, x, y] and their transpose
        a[i * m + n] = 1.0;
        a[i * m + n + 1] = sites[i][0];
        a[i * m + n + 2] = sites[i][1];
        a[n * m + i] = 1.0;
        a[(n + 1) * m + i] = sites[i][0];
        a[(n + 2) * m + i] = sites[i][1];
        rhs[i] = values[i];
    }
    let sol = solve_dense(&mut a, &mut rhs, m)?;
    let weights = sol[..n].to_vec();
    let affine = [sol[n], sol[n + 1], sol[n + 2]];
    Some((weights, affine))
}

/// Fits a thin plate spline through `(sites[i], values[i])`.
///
/// With `lambda = 0` the spline interpolates exactly. If the resulting
/// system is singular (coincident sites are the usual cause) the fit is
/// retried once with a small ridge of 1e-8; if that also fails, or a
/// positive `lambda` was requested and fails outright, the error is
/// [`Error::SingularSystem`]. Collinear sites stay singular regardless of
/// the ridge because the affine constraint block is rank deficient.
pub fn fit_tps(sites: &[[f64; 2]], values: &[f64], lambda: f64) -> Result<TpsModel, Error> {
    if sites.len() != values.len() {
        return Err(Error::BadParameter(String::from(
            "site and value counts differ",
        )));
    }
    if sites.len() < 3 {
        return Err(Error::BadParameter(String::from(
            "thin plate spline needs at least 3 sites",
        )));
    }
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::BadParameter(String::from(
            "smoothing parameter must be finite and non-negative",
        )));
    }
    for p in sites {
        if !(p[0].is_finite() && p[1].is_finite()) {
            return Err(Error::BadParameter(String::from(
                "site coordinates must be finite",
            )));
        }
    }
    for v in values {
        if !v.is_finite() {
            return Err(Error::BadParameter(String::from(
                "site values must be finite",
            )));
        }
    }
    let solved = assemble_and_solve(sites, values, lambda).or_else(|| {
        if lambda == 0.0 {
            assemble_and_solve(sites, values, 1e-8)
        } else {
            None
        }
    });
    let (weights, affine) = solved.ok_or(Error::SingularSystem)?;
    Ok(TpsModel {
        centers: sites.to_vec(),
        weights,
        affine,
    })
}
