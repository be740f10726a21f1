//! Seeded random inputs: points, expressions, curves, matrices and
//! coordinate changes.

use kappa_core::expr::{BinOp, Expr, Func};
use kappa_core::nalgebra::DMatrix;
use kappa_core::transform::CoordinateChange;
use kappa_core::{Complex64, CurveSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::sym;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform(rng: &mut TestRng, lo: f64, hi: f64) -> f64 {
    rng.random_range(lo..hi)
}

/// Uniform in the square `[-r, r] x [-r, r]`.
pub fn complex(rng: &mut TestRng, r: f64) -> Complex64 {
    Complex64::new(uniform(rng, -r, r), uniform(rng, -r, r))
}

/// Uniform in the disc of radius `r`.
pub fn point_in_disc(rng: &mut TestRng, r: f64) -> Complex64 {
    loop {
        let p = complex(rng, r);
        if p.norm() <= r {
            return p;
        }
    }
}

fn num(v: Complex64) -> Expr {
    Expr::num(v)
}

fn add(a: Expr, b: Expr) -> Expr {
    Expr::binary(BinOp::Add, a, b)
}

fn mul(a: Expr, b: Expr) -> Expr {
    Expr::binary(BinOp::Mul, a, b)
}

fn div(a: Expr, b: Expr) -> Expr {
    Expr::binary(BinOp::Div, a, b)
}

/// `Σ c_k z^k` with `|Re c_k|, |Im c_k| <= scale`.
pub fn polynomial(rng: &mut TestRng, degree: usize, scale: f64) -> Expr {
    let mut e = num(complex(rng, scale));
    for k in 1..=degree {
        let term = mul(num(complex(rng, scale)), Expr::pow(Expr::var(), k as i32));
        e = add(e, term);
    }
    e
}

pub fn value_at(e: &Expr, z: Complex64) -> Complex64 {
    sym::derivatives(e, z, 0)[0]
}

/// A polynomial whose modulus at `z` is at least `min`.
fn denominator(rng: &mut TestRng, z: Complex64, min: f64) -> Expr {
    loop {
        let degree = rng.random_range(1..=3);
        let q = polynomial(rng, degree, 1.0);
        if value_at(&q, z).norm() >= min {
            return q;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Polynomial,
    Rational,
    Trig,
}

pub const FAMILIES: [Family; 3] = [Family::Polynomial, Family::Rational, Family::Trig];

/// A random expression of the given family, well conditioned near `z`.
pub fn oracle_expr(rng: &mut TestRng, family: Family, z: Complex64) -> Expr {
    match family {
        Family::Polynomial => {
            let degree = rng.random_range(1..=7);
            let p = polynomial(rng, degree, 1.0);
            match rng.random_range(0..3) {
                0 => p,
                1 => mul(p, polynomial(rng, 2, 1.0)),
                _ => Expr::pow(p, rng.random_range(2..=3)),
            }
        }
        Family::Rational => {
            let degree = rng.random_range(0..=4);
            let p = polynomial(rng, degree, 1.0);
            let q = denominator(rng, z, 0.5);
            match rng.random_range(0..3) {
                0 => div(p, q),
                1 => {
                    let k = rng.random_range(1..=2);
                    mul(p, Expr::pow(q, -k))
                }
                _ => add(
                    div(p, q),
                    div(num(complex(rng, 1.0)), denominator(rng, z, 0.5)),
                ),
            }
        }
        Family::Trig => {
            let degree = rng.random_range(1..=2);
            let arg = polynomial(rng, degree, 0.8);
            let f = match rng.random_range(0..3) {
                0 => Func::Sin,
                1 => Func::Cos,
                _ => Func::Exp,
            };
            let core = Expr::call(f, arg);
            match rng.random_range(0..4) {
                0 => core,
                1 => mul(core, polynomial(rng, 2, 1.0)),
                2 => add(
                    core,
                    Expr::call(Func::Sin, Expr::call(Func::Cos, polynomial(rng, 1, 0.8))),
                ),
                _ => {
                    // principal square root well away from its branch cut
                    let mut q;
                    loop {
                        q = polynomial(rng, 2, 0.5);
                        q = add(q, num(Complex64::new(1.5, 0.0)));
                        let v = value_at(&q, z);
                        if v.re > 0.5 {
                            break;
                        }
                    }
                    add(core, Expr::call(Func::Sqrt, q))
                }
            }
        }
    }
}

/// A generic analytic component: polynomial plus a transcendental term.
pub fn analytic_component(rng: &mut TestRng) -> Expr {
    let degree = rng.random_range(2..=5);
    let p = polynomial(rng, degree, 1.0);
    let arg = mul(num(complex(rng, 1.0)), Expr::var());
    let f = match rng.random_range(0..3) {
        0 => Func::Sin,
        1 => Func::Cos,
        _ => Func::Exp,
    };
    add(p, mul(num(complex(rng, 1.0)), Expr::call(f, arg)))
}

pub fn analytic_curve(rng: &mut TestRng, n: usize) -> CurveSpec {
    CurveSpec::new((0..n).map(|_| analytic_component(rng)).collect()).unwrap()
}

/// Entries uniform in the complex unit square, rejected if `|det| < 0.1`.
pub fn invertible_matrix(rng: &mut TestRng, dim: usize) -> DMatrix<Complex64> {
    loop {
        let m = DMatrix::from_fn(dim, dim, |_, _| {
            Complex64::new(uniform(rng, 0.0, 1.0), uniform(rng, 0.0, 1.0))
        });
        if m.determinant().norm() >= 0.1 {
            return m;
        }
    }
}

/// `z(w) = w0 + c1 (w - w0) + c2 (w - w0)^2 + c3 sin(c4 (w - w0))` written
/// in the variable `z`, with `|z'(w0)| >= 0.3`.
pub fn coordinate_change(rng: &mut TestRng, w0: Complex64) -> CoordinateChange {
    loop {
        let shift = add(Expr::var(), num(-w0));
        let c: Vec<Complex64> = (0..4).map(|_| complex(rng, 1.0)).collect();
        let e = add(
            add(
                add(num(w0), mul(num(c[0]), shift.clone())),
                mul(num(c[1]), Expr::pow(shift.clone(), 2)),
            ),
            mul(num(c[2]), Expr::call(Func::Sin, mul(num(c[3]), shift))),
        );
        let d = sym::derivatives(&e, w0, 1);
        if d[1].norm() >= 0.3 {
            return CoordinateChange::new(e, w0);
        }
    }
}

/// `(a z + b) / (c z + d)` with `|ad - bc| >= 0.1` and the pole at least
/// `0.5` away from `w0`.
pub fn mobius(rng: &mut TestRng, w0: Complex64) -> (Expr, [Complex64; 4]) {
    loop {
        let [a, b, c, d] = [0, 1, 2, 3].map(|_| complex(rng, 1.0));
        if (a * d - b * c).norm() < 0.1 || (c * w0 + d).norm() < 0.5 {
            continue;
        }
        let e = div(
            add(mul(num(a), Expr::var()), num(b)),
            add(mul(num(c), Expr::var()), num(d)),
        );
        return (e, [a, b, c, d]);
    }
}
