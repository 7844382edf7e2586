//! Strictly monotone regression of 1D samples.
//!
//! Two steps: estimate the inverse of the target function as a kernel
//! smoothed empirical CDF of the sample values, then invert that estimate
//! numerically on a grid. The output is a monotone function evaluated at
//! the same uniformly spaced positions as the input, with its range
//! confined to the input range. Constant inputs are passed through.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::Error;

/// Requested ordering of the regression output.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Increasing,
    Decreasing,
}

/// Parameters shared by the 1D monotonizer and the polar field builder.
#[derive(Debug, Clone)]
pub struct MonotonizeConfig {
    /// Number of evenly spaced rays in a polar field.
    pub rays: usize,
    /// Samples taken along each ray; also the output length of the
    /// 1D regression when driven by the field builder.
    pub samples_per_ray: usize,
    /// Kernel bandwidth as a fraction of the sample value range.
    pub bandwidth_frac: f64,
    /// Grid resolution used to invert the smoothed CDF.
    pub inversion_grid: usize,
    /// Field extent as a multiple of the largest center-to-node distance.
    pub extent_factor: f64,
}

impl Default for MonotonizeConfig {
    fn default() -> Self {
        MonotonizeConfig {
            rays: 360,
            samples_per_ray: 128,
            bandwidth_frac: 0.1,
            inversion_grid: 512,
            extent_factor: 1.1,
        }
    }
}

impl MonotonizeConfig {
    pub fn validate(&self) -> Result<(), Error> {
        if self.rays < 3 {
            return Err(Error::BadParameter(String::from("need at least 3 rays")));
        }
        if self.samples_per_ray < 2 {
            return Err(Error::BadParameter(String::from(
                "need at least 2 samples per ray",
            )));
        }
        if !(self.bandwidth_frac > 0.0 && self.bandwidth_frac.is_finite()) {
            return Err(Error::BadParameter(String::from(
                "bandwidth fraction must be finite and positive",
            )));
        }
        if self.inversion_grid < 2 {
            return Err(Error::BadParameter(String::from(
                "inversion grid needs at least 2 points",
            )));
        }
        if !(self.extent_factor >= 1.0 && self.extent_factor.is_finite()) {
            return Err(Error::BadParameter(String::from(
                "extent factor must be finite and at least 1",
            )));
        }
        Ok(())
    }
}

/// Integrated Epanechnikov kernel, clamped to [0, 1] outside the support.
fn kernel_cdf(z: f64) -> f64 {
    if z <= -1.0 {
        0.0
    } else if z >= 1.0 {
        1.0
    } else {
        0.75 * z - 0.25 * z * z * z + 0.5
    }
}

/// Smoothed fraction of samples with value at most `t`. `sorted` must be
/// ascending; entries further than `omega` from `t` contribute exactly 0
/// or 1, so only the window around `t` needs kernel evaluations.
fn smoothed_fraction(sorted: &[f64], t: f64, omega: f64) -> f64 {
    let lo = sorted.partition_point(|&m| m <= t - omega);
    let hi = sorted.partition_point(|&m| m < t + omega);
    let mut acc = lo as f64;
    for &m in &sorted[lo..hi] {
        acc += kernel_cdf((t - m) / omega);
    }
    acc / sorted.len() as f64
}

/// Solves `smoothed_fraction(t) = target` for t by grid bracketing and
/// bisection, clamping at the ends of the value range.
fn invert(sorted: &[f64], grid: &[f64], t_min: f64, step: f64, omega: f64, target: f64) -> f64 {
    if target <= grid[0] {
        return t_min;
    }
    let last = grid.len() - 1;
    if target >= grid[last] {
        return t_min + last as f64 * step;
    }
    let k = grid.partition_point(|&f| f < target);
    let mut lo = t_min + (k - 1) as f64 * step;
    let mut hi = t_min + k as f64 * step;
    for _ in 0..80 {
        if hi - lo <= 1e-10 {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if smoothed_fraction(sorted, mid, omega) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Monotone regression of `samples`, assumed to sit on a uniform grid over
/// [0, 1]. Returns one value per input position. Output values stay inside
/// the input range; inputs whose range is below 1e-9 are returned as-is.
pub fn monotonize_1d(
    samples: &[f64],
    direction: Direction,
    cfg: &MonotonizeConfig,
) -> Result<Vec<f64>, Error> {
    cfg.validate()?;
    if samples.len() < 2 {
        return Err(Error::BadParameter(String::from(
            "monotone regression needs at least 2 samples",
        )));
    }
    for &v in samples {
        if !v.is_finite() {
            return Err(Error::BadParameter(String::from(
                "samples must be finite",
            )));
        }
    }
    let mut t_min = samples[0];
    let mut t_max = samples[0];
    for &v in &samples[1..] {
        if v < t_min {
            t_min = v;
        }
        if v > t_max {
            t_max = v;
        }
    }
    let range = t_max - t_min;
    if range < 1e-9 {
        return Ok(samples.to_vec());
    }
    let omega = cfg.bandwidth_frac * range;
    let mut sorted = samples.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let step = range / (cfg.inversion_grid - 1) as f64;
    let grid: Vec<f64> = (0..cfg.inversion_grid)
        .map(|k| smoothed_fraction(&sorted, t_min + k as f64 * step, omega))
        .collect();
    let denom = (samples.len() - 1) as f64;
    let out = (0..samples.len())
        .map(|j| {
            let x = j as f64 / denom;
            let target = match direction {
                Direction::Increasing => x,
                Direction::Decreasing => 1.0 - x,
            };
            invert(&sorted, &grid, t_min, step, omega, target)
        })
        .collect();
    Ok(out)
}
