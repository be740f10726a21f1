//! Affine maps of the lifting, coordinate changes, and the transformation
//! laws for the low-dimensional curvatures.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::expr::{CurveSpec, Expr};
use crate::frame::{kappa_from_lifting, required_order, CurvatureResult};
use crate::jets::Jet;
use crate::lowdim::{schwarzian, schwarzian_jet, SigmaTable};
use crate::tol;

/// `f ↦ A f + b` acting on liftings in `C^{n+1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineMap {
    linear: DMatrix<Complex64>,
    translation: DVector<Complex64>,
}

impl AffineMap {
    pub fn new(linear: DMatrix<Complex64>, translation: DVector<Complex64>) -> Result<Self> {
        let dim = linear.nrows();
        if dim == 0 || linear.ncols() != dim || translation.len() != dim {
            return Err(Error::InvalidInput(format!(
                "affine map needs a square linear part and a matching vector, got {}x{} and {}",
                linear.nrows(),
                linear.ncols(),
                translation.len()
            )));
        }
        if linear
            .iter()
            .chain(translation.iter())
            .any(|v| !v.is_finite())
        {
            return Err(Error::NonFinite {
                context: "affine map entries",
            });
        }
        let det = linear.determinant();
        let entry_scale = linear.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let threshold = tol::threshold(tol::SINGULAR_MAP, entry_scale.powi(dim as i32));
        if det.norm() <= threshold {
            return Err(Error::InvalidInput(format!(
                "linear part is singular: |det A| = {:e} <= {:e}",
                det.norm(),
                threshold
            )));
        }
        Ok(AffineMap {
            linear,
            translation,
        })
    }

    pub fn linear(linear: DMatrix<Complex64>) -> Result<Self> {
        let dim = linear.nrows();
        Self::new(linear, DVector::zeros(dim))
    }

    pub fn identity(dim: usize) -> Self {
        AffineMap {
            linear: DMatrix::identity(dim, dim),
            translation: DVector::zeros(dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.linear.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.linear
    }

    pub fn translation(&self) -> &DVector<Complex64> {
        &self.translation
    }

    pub fn jacobian_determinant(&self) -> Complex64 {
        self.linear.determinant()
    }

    /// Applies the map to a lifting given as `n + 1` jets.
    pub fn apply(&self, lifting: &[Jet]) -> Result<Vec<Jet>> {
        if lifting.len() != self.dim() {
            return Err(Error::InvalidInput(format!(
                "affine map of dimension {} applied to a lifting with {} components",
                self.dim(),
                lifting.len()
            )));
        }
        let first = &lifting[0];
        (0..self.dim())
            .map(|i| {
                let mut acc = Jet::constant(self.translation[i], first.base(), first.order());
                for (j, f) in lifting.iter().enumerate() {
                    acc = acc.try_add(&f.scale(self.linear[(i, j)]))?;
                }
                Ok(acc)
            })
            .collect()
    }
}

/// Curvatures of the curve whose lifting is `A f + b`, renormalised so its
/// first component is 1.
pub fn apply_affine(spec: &CurveSpec, m: &AffineMap, at: Complex64) -> Result<CurvatureResult> {
    let n = spec.n();
    if m.dim() != n + 1 {
        return Err(Error::InvalidInput(format!(
            "affine map has dimension {}, curve needs {}",
            m.dim(),
            n + 1
        )));
    }
    let lifting = spec.lift(at, required_order(n))?;
    let moved = m.apply(&lifting)?;
    let lead = moved[0].value();
    let scale = moved.iter().map(|f| f.value().norm()).fold(0.0, f64::max);
    if lead.norm() < tol::threshold(tol::CHART_ESCAPE, scale) {
        return Err(Error::ChartEscape {
            magnitude: lead.norm(),
        });
    }
    let inv = moved[0].recip()?;
    let renormalised = moved
        .iter()
        .map(|f| f.try_mul(&inv))
        .collect::<Result<Vec<_>>>()?;
    kappa_from_lifting(&renormalised)
}

/// A local reparameterisation `z = z(w)` near `base_w`. The expression is
/// written in the parser's single variable `z`, read here as `w`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoordinateChange {
    pub z_of_w: Expr,
    pub base_w: Complex64,
}

impl CoordinateChange {
    pub fn new(z_of_w: Expr, base_w: Complex64) -> Self {
        CoordinateChange { z_of_w, base_w }
    }

    pub fn parse(text: &str, base_w: Complex64) -> Result<Self> {
        Ok(Self::new(crate::expr::parse(text)?, base_w))
    }

    /// Jet of `z(w)` at `base_w`; rejects points where `z'` vanishes.
    pub fn jet(&self, order: usize) -> Result<Jet> {
        let z = self.z_of_w.eval_jet(self.base_w, order.max(1))?;
        let d = z.derivatives();
        let scale = d[1..].iter().take(3).map(|v| v.norm()).fold(0.0, f64::max);
        let threshold = tol::threshold(tol::CRITICAL_DERIVATIVE, scale);
        if d[1].norm() < threshold {
            return Err(Error::CriticalReparameterization {
                magnitude: d[1].norm(),
                threshold,
            });
        }
        z.truncate(order)
    }

    /// `z(base_w)`, the point of the original curve that `base_w` maps to.
    pub fn image(&self) -> Result<Complex64> {
        Ok(self.jet(1)?.value())
    }
}

/// Curvatures of `w ↦ Φ(z(w))` at `base_w`, computed by composing jets.
pub fn reparametrized_kappa(spec: &CurveSpec, cc: &CoordinateChange) -> Result<CurvatureResult> {
    let order = required_order(spec.n());
    let z = cc.jet(order)?;
    let lifting = spec.lift(z.value(), order)?;
    let composed = lifting
        .iter()
        .map(|f| f.compose(&z))
        .collect::<Result<Vec<_>>>()?;
    kappa_from_lifting(&composed)
}

/// `κ̃_0 = z'^2 κ_0 - Sz / 2`.
pub fn transform_law_n1(kappa0: Complex64, cc: &CoordinateChange) -> Result<Complex64> {
    let z = cc.jet(3)?;
    let z1 = z.derivative(1)?;
    Ok(z1 * z1 * kappa0 - 0.5 * schwarzian(&z)?)
}

/// `κ̃_0 = z'^3 κ_0 + z' z'' κ_1 - (Sz)'` and `κ̃_1 = z'^2 κ_1 - 2 Sz`.
pub fn transform_law_n2(kappas: [Complex64; 2], cc: &CoordinateChange) -> Result<[Complex64; 2]> {
    let z = cc.jet(4)?;
    let s = schwarzian_jet(&z)?;
    let z1 = z.derivative(1)?;
    let z2 = z.derivative(2)?;
    let [k0, k1] = kappas;
    Ok([
        z1 * z1 * z1 * k0 + z1 * z2 * k1 - s.derivative(1)?,
        z1 * z1 * k1 - 2.0 * s.value(),
    ])
}

/// σ̃ entries predicted from the σ entries of the original curve and the
/// derivatives `z', z'', z''', z''''`.
pub fn predict_sigma_tilde(s: &SigmaTable, z: [Complex64; 4]) -> SigmaTable {
    let [z1, z2, z3, z4] = z;
    let p = |k: i32| z1.powi(k);
    SigmaTable {
        s12: p(3) * s.s12,
        s13: p(4) * s.s13 + 3.0 * p(2) * z2 * s.s12,
        s23: p(5) * s.s23 + p(3) * z2 * s.s13 + (3.0 * z1 * z2 * z2 - p(2) * z3) * s.s12,
        s14: p(5) * s.s14
            + 6.0 * p(3) * z2 * s.s13
            + (4.0 * p(2) * z3 + 3.0 * z1 * z2 * z2) * s.s12,
        s24: p(6) * s.s24
            + 6.0 * p(4) * z2 * s.s23
            + p(4) * z2 * s.s14
            + 6.0 * p(2) * z2 * z2 * s.s13
            + (-p(2) * z4 + 4.0 * z1 * z2 * z3 + 3.0 * z2 * z2 * z2) * s.s12,
        s15: p(6) * s.s15
            + 10.0 * p(4) * z2 * s.s14
            + (10.0 * p(3) * z3 + 15.0 * p(2) * z2 * z2) * s.s13
            + (5.0 * p(2) * z4 + 10.0 * z1 * z2 * z3) * s.s12,
    }
}

fn sigma_entries(s: &SigmaTable) -> [Complex64; 6] {
    [s.s12, s.s13, s.s14, s.s15, s.s23, s.s24]
}

#[derive(Debug, Clone, PartialEq)]
pub struct SigmaTransformReport {
    /// σ̃ from the composed jets.
    pub direct: SigmaTable,
    /// σ̃ from the transformation identities.
    pub predicted: SigmaTable,
    pub max_deviation: f64,
}

/// `x`, `y` are jets of order `>= 5` at `z(base_w)`.
pub fn sigma_transform_check(
    x: &Jet,
    y: &Jet,
    cc: &CoordinateChange,
) -> Result<SigmaTransformReport> {
    let z = cc.jet(5)?;
    let direct = SigmaTable::from_jets(&x.compose(&z)?, &y.compose(&z)?)?;
    let original = SigmaTable::from_jets(x, y)?;
    let zd = z.derivatives();
    let predicted = predict_sigma_tilde(&original, [zd[1], zd[2], zd[3], zd[4]]);
    let max_deviation =
        tol::max_relative_deviation(&sigma_entries(&direct), &sigma_entries(&predicted));
    Ok(SigmaTransformReport {
        direct,
        predicted,
        max_deviation,
    })
}
