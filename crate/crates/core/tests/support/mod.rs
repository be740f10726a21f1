#![allow(dead_code)]

pub mod gen;
pub mod sym;

use kappa_core::tol::relative_deviation;
use kappa_core::{Complex64, Jet};

/// Largest `|a - b| / max(1, |b|)` over the derivatives of a jet and an
/// expected derivative list.
pub fn derivative_deviation(jet: &Jet, expected: &[Complex64]) -> f64 {
    jet.derivatives()
        .iter()
        .zip(expected)
        .map(|(a, b)| relative_deviation(*a, *b))
        .fold(0.0, f64::max)
}

pub fn coeff_deviation(a: &Jet, b: &Jet) -> f64 {
    assert_eq!(a.order(), b.order());
    a.coeffs()
        .iter()
        .zip(b.coeffs())
        .map(|(x, y)| relative_deviation(*x, *y))
        .fold(0.0, f64::max)
}
