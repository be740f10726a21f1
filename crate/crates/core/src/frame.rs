//! Canonical frame and Schwarzian curvatures for curves in CP^n.
//!
//! For a lifting `f = (f_0, ..., f_n)` the frame is `ν = λ f`,
//! `e_k = ν^(k)` with `λ^(n+1) · det[f, f', ..., f^(n)] = 1`. The curvatures
//! are the coefficients in `e_n' = κ_0 ν + κ_1 e_1 + ... + κ_{n-1} e_{n-1}`.
//!
//! Truncation ladder: the lifting is expanded to order `2n + 1`. The `j`-th
//! derivative jets (`j <= n`) keep at least `n + 1` orders, so the Wronskian
//! jet and `λ` are carried to order `n + 1`, which is exactly what `H` and
//! `ν^(n+1)` need.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::expr::CurveSpec;
use crate::jets::Jet;
use crate::tol;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Expansion order needed for the lifting of a curve in CP^n.
pub fn required_order(n: usize) -> usize {
    2 * n + 1
}

#[derive(Debug, Clone)]
pub struct FrameData {
    pub n: usize,
    pub point: Complex64,
    /// `det[f, f', ..., f^(n)]` as a jet of order `n + 1`.
    pub wronskian: Jet,
    /// `λ = W^(-1/(n+1))`, principal branch, order `n + 1`.
    pub lambda: Jet,
    /// Coefficients of `f^(n+1) = g_0 f + ... + g_n f^(n)`.
    pub g: Vec<Complex64>,
    /// `(n+1) x (n+2)` matrix with `[ν, ν', ..., ν^(n+1)] = [f, ..., f^(n)] H`.
    pub h: DMatrix<Complex64>,
    /// Columns `ν, e_1, ..., e_n` at the point.
    pub frame_vectors: DMatrix<Complex64>,
    /// `e_n' = ν^(n+1)` at the point.
    pub frame_derivative: DVector<Complex64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureResult {
    /// `κ_0, ..., κ_{n-1}`.
    pub kappas: Vec<Complex64>,
    pub frenet_residual: f64,
    pub wronskian_magnitude: f64,
    pub frame_determinant: Complex64,
    /// `1 + max column norm` of the frame; the residual is judged against it.
    pub residual_scale: f64,
    /// Set when the Frenet residual exceeds `1e-7 * residual_scale`.
    pub flagged: bool,
}

impl CurvatureResult {
    pub fn unit_det_deviation(&self) -> f64 {
        (self.frame_determinant - ONE).norm()
    }

    pub fn relative_residual(&self) -> f64 {
        self.frenet_residual / self.residual_scale
    }
}

/// Values `f_i^(j)(a)` for `j < cols` as an `(n+1) x cols` matrix.
pub fn derivative_matrix(lifting: &[Jet], cols: usize) -> Result<DMatrix<Complex64>> {
    let derivs = lifting
        .iter()
        .map(|f| {
            (0..cols)
                .map(|j| f.derivative(j))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DMatrix::from_fn(lifting.len(), cols, |i, j| derivs[i][j]))
}

/// Determinant of a square matrix of jets by Gaussian elimination with
/// partial pivoting on the order-0 magnitude (ties go to the lowest row).
pub fn jet_determinant(mut m: Vec<Vec<Jet>>) -> Result<Jet> {
    let size = m.len();
    if size == 0 || m.iter().any(|row| row.len() != size) {
        return Err(Error::InvalidInput(
            "jet determinant needs a square matrix".into(),
        ));
    }
    let base = m[0][0].base();
    let order = m[0][0].order();
    let mut det = Jet::constant(ONE, base, order);
    for k in 0..size {
        let mut pivot = k;
        for r in k + 1..size {
            if m[r][k].value().norm() > m[pivot][k].value().norm() {
                pivot = r;
            }
        }
        if m[pivot][k].value().norm() == 0.0 {
            return Err(Error::DegenerateCurve {
                what: "jet determinant pivot",
                magnitude: 0.0,
                threshold: 0.0,
            });
        }
        if pivot != k {
            m.swap(pivot, k);
            det = -det;
        }
        det = det.try_mul(&m[k][k])?;
        let (upper, lower) = m.split_at_mut(k + 1);
        let pivot_row = &upper[k];
        for row in lower.iter_mut() {
            let factor = row[k].try_div(&pivot_row[k]).map_err(pivot_degenerate)?;
            for (entry, p) in row.iter_mut().zip(pivot_row).skip(k + 1) {
                *entry = entry.try_sub(&factor.try_mul(p)?)?;
            }
        }
    }
    Ok(det)
}

fn pivot_degenerate(e: Error) -> Error {
    match e {
        Error::DivisionByZeroJet { magnitude } => Error::DegenerateCurve {
            what: "jet determinant pivot",
            magnitude,
            threshold: 0.0,
        },
        other => other,
    }
}

fn check_lifting(lifting: &[Jet], n: usize) -> Result<()> {
    if n == 0 || lifting.len() != n + 1 {
        return Err(Error::InvalidInput(format!(
            "a lifting into C^{} needs {} components, got {}",
            n + 1,
            n + 1,
            lifting.len()
        )));
    }
    let need = required_order(n);
    if let Some(f) = lifting.iter().find(|f| f.order() < need) {
        return Err(Error::OrderExceeded {
            requested: need,
            order: f.order(),
        });
    }
    Ok(())
}

/// `det[f, f', ..., f^(n)]` in jet arithmetic, order `n + 1`.
pub fn wronskian_jet(lifting: &[Jet], n: usize) -> Result<Jet> {
    check_lifting(lifting, n)?;
    let m = lifting
        .iter()
        .map(|f| {
            (0..=n)
                .map(|j| f.nth_derivative_jet(j)?.truncate(n + 1))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let scale = m
        .iter()
        .flatten()
        .map(|j| j.value().norm())
        .fold(0.0, f64::max);
    let threshold = tol::threshold(tol::DEGENERATE_WRONSKIAN, scale);
    let w = jet_determinant(m).map_err(|e| match e {
        Error::DegenerateCurve { magnitude, .. } => Error::DegenerateCurve {
            what: "|Wronskian|",
            magnitude,
            threshold,
        },
        other => other,
    })?;
    let magnitude = w.value().norm();
    if magnitude < threshold {
        return Err(Error::DegenerateCurve {
            what: "|Wronskian|",
            magnitude,
            threshold,
        });
    }
    Ok(w)
}

/// `λ = W^(-1/(n+1))` on the principal branch.
pub fn lambda_jet(w: &Jet, n: usize) -> Result<Jet> {
    w.powf(-1.0 / (n as f64 + 1.0)).map_err(|e| match e {
        Error::DivisionByZeroJet { magnitude } => Error::DegenerateCurve {
            what: "|Wronskian|",
            magnitude,
            threshold: tol::threshold(tol::LEADING_COEFF, w.max_abs()),
        },
        other => other,
    })
}

/// Solves `[f, f', ..., f^(n)] g = f^(n+1)` at the base point.
pub fn solve_g(lifting: &[Jet], n: usize) -> Result<Vec<Complex64>> {
    if lifting.len() != n + 1 {
        return Err(Error::InvalidInput(format!(
            "expected {} lifting components, got {}",
            n + 1,
            lifting.len()
        )));
    }
    let d = derivative_matrix(lifting, n + 2)?;
    let system = d.columns(0, n + 1).into_owned();
    let rhs = d.column(n + 1).into_owned();
    let g = system.lu().solve(&rhs).ok_or(Error::DegenerateCurve {
        what: "|Wronskian|",
        magnitude: 0.0,
        threshold: 0.0,
    })?;
    Ok(g.iter().copied().collect())
}

/// `H = G Λ`: `H[r][c] = C(c, r) λ^(c-r)` for `c <= n`, and the last column
/// `C(n+1, r) λ^(n+1-r) + λ g_r`.
pub fn build_h(lambda: &Jet, g: &[Complex64], n: usize) -> Result<DMatrix<Complex64>> {
    if g.len() != n + 1 {
        return Err(Error::InvalidInput(format!(
            "expected {} g coefficients, got {}",
            n + 1,
            g.len()
        )));
    }
    let dl = (0..=n + 1)
        .map(|k| lambda.derivative(k))
        .collect::<Result<Vec<_>>>()?;
    Ok(DMatrix::from_fn(n + 1, n + 2, |r, c| {
        let mut v = if c >= r {
            dl[c - r] * binomial(c, r)
        } else {
            Complex64::new(0.0, 0.0)
        };
        if c == n + 1 {
            v += dl[0] * g[r];
        }
        v
    }))
}

/// `κ_j = (-1)^(n-j) det(H_j) det W`, where `H_j` is `H` with its `(j+1)`-st
/// column (0-based index `j`) removed.
pub fn kappas_from_h(h: &DMatrix<Complex64>, wronskian: Complex64, n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|j| {
            let hj = h.clone().remove_column(j);
            let sign = if (n - j).is_multiple_of(2) { 1.0 } else { -1.0 };
            hj.determinant() * wronskian * sign
        })
        .collect()
}

/// Builds the canonical frame from an arbitrary lifting (not necessarily
/// normalised to a leading 1).
pub fn canonical_frame(lifting: &[Jet], n: usize) -> Result<FrameData> {
    let wronskian = wronskian_jet(lifting, n)?;
    let lambda = lambda_jet(&wronskian, n)?;
    let g = solve_g(lifting, n)?;
    let h = build_h(&lambda, &g, n)?;

    let mut columns = DMatrix::zeros(n + 1, n + 2);
    for (i, f) in lifting.iter().enumerate() {
        let nu = lambda.try_mul(&f.truncate(n + 1)?)?;
        for k in 0..=n + 1 {
            columns[(i, k)] = nu.derivative(k)?;
        }
    }
    let frame_vectors = columns.columns(0, n + 1).into_owned();
    let frame_derivative = columns.column(n + 1).into_owned();

    Ok(FrameData {
        n,
        point: lifting[0].base(),
        wronskian,
        lambda,
        g,
        h,
        frame_vectors,
        frame_derivative,
    })
}

/// `|| e_n' - Σ κ_i · column_i ||`.
pub fn frenet_residual(fd: &FrameData, kappas: &[Complex64]) -> f64 {
    let mut r = fd.frame_derivative.clone();
    for (i, k) in kappas.iter().enumerate() {
        r -= fd.frame_vectors.column(i) * *k;
    }
    r.norm()
}

/// Curvatures of an already-built frame.
pub fn curvature(fd: &FrameData) -> CurvatureResult {
    let kappas = kappas_from_h(&fd.h, fd.wronskian.value(), fd.n);
    let frenet_residual = frenet_residual(fd, &kappas);
    let residual_scale = 1.0
        + fd.frame_vectors
            .column_iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max);
    CurvatureResult {
        flagged: frenet_residual > tol::FRENET_FLAG * residual_scale,
        frame_determinant: fd.frame_vectors.determinant(),
        wronskian_magnitude: fd.wronskian.value().norm(),
        residual_scale,
        frenet_residual,
        kappas,
    }
}

/// Curvatures from a lifting of `n + 1` jets of order `>= 2n + 1`.
pub fn kappa_from_lifting(lifting: &[Jet]) -> Result<CurvatureResult> {
    let n = lifting.len().saturating_sub(1);
    Ok(curvature(&canonical_frame(lifting, n)?))
}

pub fn frame_at(spec: &CurveSpec, at: Complex64) -> Result<FrameData> {
    let n = spec.n();
    let lifting = spec.lift(at, required_order(n))?;
    canonical_frame(&lifting, n)
}

/// Schwarzian curvatures of `spec` at `at` through the `H_j` determinants.
pub fn kappa_general(spec: &CurveSpec, at: Complex64) -> Result<CurvatureResult> {
    Ok(curvature(&frame_at(spec, at)?))
}

/// Independent route: solve `[ν e_1 ... e_n] x = e_n'` directly.
///
/// Returns `(κ_0, ..., κ_{n-1})` and the coefficient of `e_n`, which should
/// vanish.
pub fn kappas_by_frame_solve(fd: &FrameData) -> Result<(Vec<Complex64>, Complex64)> {
    let x = fd
        .frame_vectors
        .clone()
        .lu()
        .solve(&fd.frame_derivative)
        .ok_or(Error::DegenerateCurve {
            what: "frame determinant",
            magnitude: 0.0,
            threshold: 0.0,
        })?;
    Ok((x.iter().take(fd.n).copied().collect(), x[fd.n]))
}

/// Curvatures computed with `λ` replaced by `ω λ`.
pub fn kappas_with_gauge(fd: &FrameData, omega: Complex64) -> Result<Vec<Complex64>> {
    let h = build_h(&fd.lambda.scale(omega), &fd.g, fd.n)?;
    Ok(kappas_from_h(&h, fd.wronskian.value(), fd.n))
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}
