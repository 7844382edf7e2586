//! libm wrappers so the same code path runs with and without std.

pub(crate) use libm::{atan2, cos, fabs, floor, hypot, log as ln, sin};
#[cfg(test)]
pub(crate) use libm::sqrt;

pub(crate) const TAU: f64 = core::f64::consts::TAU;

/// Euclidean distance between two points.
pub(crate) fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    hypot(a[0] - b[0], a[1] - b[1])
}
