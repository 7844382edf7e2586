//! Radially monotone polar fields over a layout.
//!
//! A field stores samples on a polar grid (R evenly spaced rays, S radii
//! per ray) anchored at the most central node. Values along every ray are
//! non-increasing with radius and all rays agree at radius 0, so level
//! sets are closed star-shaped curves around the center. Fields are built
//! by sampling a thin plate spline of the node centralities along each ray
//! and monotonizing the samples, and queried through bilinear evaluation,
//! a small-step numeric gradient, and per-level contour extraction.

use alloc::string::String;
use alloc::vec::Vec;

use crate::centrality::CentralityVector;
use crate::error::Error;
use crate::math::{atan2, cos, dist, floor, hypot, sin, TAU};
use crate::mds::Layout;
use crate::monotone::{monotonize_1d, Direction, MonotonizeConfig};
use crate::tps::{fit_tps, TpsModel};

/// Polar-grid scalar field, non-increasing along every ray.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotonicField {
    center: [f64; 2],
    r_max: f64,
    rays: usize,
    samples: usize,
    /// Row-major, `rays * samples` entries; entry `[r][0]` is shared.
    values: Vec<f64>,
}

impl MonotonicField {
    /// Reassembles a field from raw parts, enforcing every invariant:
    /// shape, finiteness, per-ray monotonicity (1e-9 slack), and a common
    /// value at radius 0.
    pub fn from_parts(
        center: [f64; 2],
        r_max: f64,
        rays: usize,
        samples: usize,
        values: Vec<f64>,
    ) -> Result<Self, Error> {
        if rays < 3 || samples < 2 {
            return Err(Error::BadParameter(String::from(
                "field needs at least 3 rays and 2 samples per ray",
            )));
        }
        if !(center[0].is_finite() && center[1].is_finite()) {
            return Err(Error::BadParameter(String::from(
                "field center must be finite",
            )));
        }
        if !(r_max > 0.0 && r_max.is_finite()) {
            return Err(Error::BadParameter(String::from(
                "field extent must be finite and positive",
            )));
        }
        if values.len() != rays * samples {
            return Err(Error::BadParameter(String::from(
                "field value count does not match rays * samples",
            )));
        }
        for &v in &values {
            if !v.is_finite() {
                return Err(Error::BadParameter(String::from(
                    "field values must be finite",
                )));
            }
        }
        for r in 0..rays {
            let row = &values[r * samples..(r + 1) * samples];
            if row[0] != values[0] {
                return Err(Error::BadParameter(String::from(
                    "field rays disagree at radius 0",
                )));
            }
            for s in 1..samples {
                if row[s] > row[s - 1] + 1e-9 {
                    return Err(Error::BadParameter(String::from(
                        "field values increase along a ray",
                    )));
                }
            }
        }
        Ok(MonotonicField {
            center,
            r_max,
            rays,
            samples,
            values,
        })
    }

    pub fn center(&self) -> [f64; 2] {
        self.center
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn ray_count(&self) -> usize {
        self.rays
    }

    pub fn samples_per_ray(&self) -> usize {
        self.samples
    }

    /// Flattened row-major samples (ray-major).
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn ray(&self, r: usize) -> &[f64] {
        &self.values[r * self.samples..(r + 1) * self.samples]
    }

    #[inline]
    pub fn value(&self, r: usize, s: usize) -> f64 {
        self.values[r * self.samples + s]
    }

    pub fn ray_angle(&self, r: usize) -> f64 {
        TAU * r as f64 / self.rays as f64
    }

    pub fn sample_radius(&self, s: usize) -> f64 {
        self.r_max * s as f64 / (self.samples - 1) as f64
    }

    /// Field maximum; by construction this is the shared radius-0 value.
    pub fn max_value(&self) -> f64 {
        self.values.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b))
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().fold(f64::INFINITY, |a, &b| a.min(b))
    }
}

/// Builds the monotone field for `model` around the most central node.
///
/// The center is the position of the maximum normalized centrality (ties
/// go to the lowest index) and the extent is `cfg.extent_factor` times the
/// largest center-to-node distance, so every node lies inside the field.
/// Each ray samples the spline at `cfg.samples_per_ray` evenly spaced
/// radii, monotonizes them in the decreasing direction, and the radius-0
/// values are then unified to their maximum over rays so all rays share
/// one central peak. A final exact clamp removes the sub-1e-9 wiggle the
/// numeric inversion can leave behind.
pub fn build_monotonic_field(
    model: &TpsModel,
    layout: &Layout,
    centrality: &CentralityVector,
    cfg: &MonotonizeConfig,
) -> Result<MonotonicField, Error> {
    cfg.validate()?;
    if layout.len() != centrality.len() {
        return Err(Error::BadParameter(String::from(
            "layout and centrality sizes differ",
        )));
    }
    let positions = layout.positions();
    let norm = centrality.normalized();
    let mut center_idx = 0;
    for (i, &c) in norm.iter().enumerate() {
        if c > norm[center_idx] {
            center_idx = i;
        }
    }
    let center = positions[center_idx];
    let mut max_dist = 0.0_f64;
    for p in positions {
        let d = dist(center, *p);
        if d > max_dist {
            max_dist = d;
        }
    }
    let r_max = if max_dist > 0.0 {
        cfg.extent_factor * max_dist
    } else {
        1.0
    };
    let rays = cfg.rays;
    let samples = cfg.samples_per_ray;
    let mut values = Vec::with_capacity(rays * samples);
    let mut ray_buf = Vec::with_capacity(samples);
    for r in 0..rays {
        let angle = TAU * r as f64 / rays as f64;
        let (dx, dy) = (cos(angle), sin(angle));
        ray_buf.clear();
        for s in 0..samples {
            let rho = r_max * s as f64 / (samples - 1) as f64;
            ray_buf.push(model.eval([center[0] + rho * dx, center[1] + rho * dy]));
        }
        for &v in &ray_buf {
            if !v.is_finite() {
                return Err(Error::NonFiniteObjective);
            }
        }
        let mono = monotonize_1d(&ray_buf, Direction::Decreasing, cfg)?;
        values.extend_from_slice(&mono);
    }
    let mut peak = f64::NEG_INFINITY;
    for r in 0..rays {
        peak = peak.max(values[r * samples]);
    }
    for r in 0..rays {
        let row = &mut values[r * samples..(r + 1) * samples];
        row[0] = peak;
        for s in 1..samples {
            if row[s] > row[s - 1] {
                row[s] = row[s - 1];
            }
        }
    }
    Ok(MonotonicField {
        center,
        r_max,
        rays,
        samples,
        values,
    })
}

/// Fits a spline to the normalized centralities at the layout positions
/// (exact interpolation, with the usual ridge fallback for degenerate
/// position sets) and builds the monotone field from it.
pub fn field_from_layout(
    layout: &Layout,
    centrality: &CentralityVector,
    cfg: &MonotonizeConfig,
) -> Result<MonotonicField, Error> {
    if layout.len() != centrality.len() {
        return Err(Error::BadParameter(String::from(
            "layout and centrality sizes differ",
        )));
    }
    let model = fit_tps(layout.positions(), centrality.normalized(), 0.0)?;
    build_monotonic_field(&model, layout, centrality, cfg)
}

/// Bilinear interpolation in polar coordinates. The angle wraps; the
/// radius clamps to `[0, r_max]`, so points beyond the extent take the
/// boundary value along their bearing.
pub fn eval_field(field: &MonotonicField, p: [f64; 2]) -> f64 {
    let dx = p[0] - field.center[0];
    let dy = p[1] - field.center[1];
    let mut radius = hypot(dx, dy);
    if radius > field.r_max {
        radius = field.r_max;
    }
    let mut theta = atan2(dy, dx);
    if theta < 0.0 {
        theta += TAU;
    }
    let ray_pos = theta / TAU * field.rays as f64;
    let r0 = (floor(ray_pos) as usize) % field.rays;
    let r1 = (r0 + 1) % field.rays;
    let fa = ray_pos - floor(ray_pos);
    let sample_pos = radius / field.r_max * (field.samples - 1) as f64;
    let mut s0 = floor(sample_pos) as usize;
    if s0 > field.samples - 2 {
        s0 = field.samples - 2;
    }
    let fs = sample_pos - s0 as f64;
    let v00 = field.value(r0, s0);
    let v01 = field.value(r0, s0 + 1);
    let v10 = field.value(r1, s0);
    let v11 = field.value(r1, s0 + 1);
    (1.0 - fa) * ((1.0 - fs) * v00 + fs * v01) + fa * ((1.0 - fs) * v10 + fs * v11)
}

/// Central-difference gradient of [`eval_field`] with step 1e-3 * r_max.
pub fn field_gradient(field: &MonotonicField, p: [f64; 2]) -> [f64; 2] {
    let h = 1e-3 * field.r_max;
    let gx = eval_field(field, [p[0] + h, p[1]]) - eval_field(field, [p[0] - h, p[1]]);
    let gy = eval_field(field, [p[0], p[1] + h]) - eval_field(field, [p[0], p[1] - h]);
    [gx / (2.0 * h), gy / (2.0 * h)]
}

/// Radius at which one ray's non-increasing samples cross `level`.
fn ray_crossing(field: &MonotonicField, r: usize, level: f64) -> f64 {
    let row = field.ray(r);
    let n = row.len();
    let step = field.r_max / (n - 1) as f64;
    let mut first_below = n;
    for (s, &v) in row.iter().enumerate() {
        if v < level {
            first_below = s;
            break;
        }
    }
    if first_below == n {
        // level at or below the whole ray
        return field.r_max;
    }
    if first_below == 0 {
        // cannot happen for levels at or below the shared peak; treat as
        // a degenerate crossing at the center
        return 0.0;
    }
    let i = first_below;
    if row[i - 1] > level {
        let frac = (row[i - 1] - level) / (row[i - 1] - row[i]);
        return step * ((i - 1) as f64 + frac);
    }
    // run of samples exactly at the level: take its midpoint
    let mut start = i - 1;
    while start > 0 && row[start - 1] == level {
        start -= 1;
    }
    step * 0.5 * ((start + i - 1) as f64)
}

/// Per-ray radii of the level set. Empty when the level exceeds the field
/// maximum; rays whose values never reach down to the level report r_max.
pub fn contour_radii(field: &MonotonicField, level: f64) -> Vec<f64> {
    if level > field.max_value() {
        return Vec::new();
    }
    (0..field.rays)
        .map(|r| ray_crossing(field, r, level))
        .collect()
}

/// Closed level-set polyline, one vertex per ray in angle order. The last
/// vertex connects back to the first. Empty when the level exceeds the
/// field maximum; a level equal to the maximum degenerates to the center.
pub fn extract_contour(field: &MonotonicField, level: f64) -> Vec<[f64; 2]> {
    let radii = contour_radii(field, level);
    radii
        .iter()
        .enumerate()
        .map(|(r, &rho)| {
            let angle = field.ray_angle(r);
            [
                field.center[0] + rho * cos(angle),
                field.center[1] + rho * sin(angle),
            ]
        })
        .collect()
}
