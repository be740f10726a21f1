//! Numerical thresholds shared across the crate.
//!
//! Thresholds are scale-relative: a quantity is compared against
//! `factor * (1 + scale)` where `scale` is the largest magnitude among the
//! inputs it was computed from.

use num_complex::Complex64;

/// Leading jet coefficient below this (scale-relative) is treated as zero
/// by division, reciprocal and fractional powers.
pub const LEADING_COEFF: f64 = 1e-12;

/// Wronskian value below this (scale-relative) marks a degenerate point.
pub const DEGENERATE_WRONSKIAN: f64 = 1e-10;

/// First derivative below this (scale-relative) marks a critical point of a
/// scalar map (Schwarzian, coordinate changes).
pub const CRITICAL_DERIVATIVE: f64 = 1e-12;

/// Linear part of an affine map must have |det| above this (scale-relative).
pub const SINGULAR_MAP: f64 = 1e-12;

/// Frenet residual above `FRENET_FLAG * (1 + max column norm)` flags a result.
pub const FRENET_FLAG: f64 = 1e-7;

/// Transformed leading lifting component below this (scale-relative) is a
/// chart escape.
pub const CHART_ESCAPE: f64 = 1e-12;

pub fn threshold(factor: f64, scale: f64) -> f64 {
    factor * (1.0 + scale)
}

/// `|actual - expected| / max(1, |expected|)`: relative for large values,
/// absolute near zero.
pub fn relative_deviation(actual: Complex64, expected: Complex64) -> f64 {
    (actual - expected).norm() / expected.norm().max(1.0)
}

/// Largest `relative_deviation` over paired slices.
pub fn max_relative_deviation(actual: &[Complex64], expected: &[Complex64]) -> f64 {
    assert_eq!(actual.len(), expected.len());
    actual
        .iter()
        .zip(expected)
        .map(|(a, e)| relative_deviation(*a, *e))
        .fold(0.0, f64::max)
}
