//! Closed-form curvatures for `n = 1, 2` and the Schwarzian derivative.
//!
//! These formulas are written directly in terms of derivatives of the
//! inhomogeneous coordinates and are independent of the frame construction
//! in [`crate::frame`], so each side can check the other.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::jets::Jet;
use crate::tol;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

fn require_order(u: &Jet, order: usize) -> Result<()> {
    if u.order() < order {
        return Err(Error::OrderExceeded {
            requested: order,
            order: u.order(),
        });
    }
    Ok(())
}

/// `Su = u'''/u' - 3/2 (u''/u')^2` at the base point.
pub fn schwarzian(u: &Jet) -> Result<Complex64> {
    require_order(u, 3)?;
    let d = u.derivatives();
    let scale = d[1..=3].iter().map(|v| v.norm()).fold(0.0, f64::max);
    let threshold = tol::threshold(tol::CRITICAL_DERIVATIVE, scale);
    if d[1].norm() < threshold {
        return Err(Error::CriticalPoint {
            magnitude: d[1].norm(),
            threshold,
        });
    }
    let r2 = d[2] / d[1];
    let r3 = d[3] / d[1];
    Ok(r3 - 1.5 * r2 * r2)
}

/// The Schwarzian derivative as a jet of order `K - 3`.
pub fn schwarzian_jet(u: &Jet) -> Result<Jet> {
    require_order(u, 3)?;
    let d1 = u.differentiate()?;
    let d2 = d1.differentiate()?;
    let d3 = d2.differentiate()?;
    let k = d3.order();
    let d1 = d1.truncate(k)?;
    let d2 = d2.truncate(k)?;
    let r2 = d2.try_div(&d1).map_err(|e| critical(e, u))?;
    let r3 = d3.try_div(&d1).map_err(|e| critical(e, u))?;
    r3.try_sub(&r2.try_mul(&r2)?.scale(1.5.into()))
}

fn critical(e: Error, u: &Jet) -> Error {
    match e {
        Error::DivisionByZeroJet { magnitude } => Error::CriticalPoint {
            magnitude,
            threshold: tol::threshold(tol::LEADING_COEFF, u.max_abs()),
        },
        other => other,
    }
}

/// `κ_0` of the curve `x(z)` in CP^1, i.e. `-1/2 Sx`.
pub fn kappa0_n1(x: &Jet) -> Result<Complex64> {
    Ok(-0.5 * schwarzian(x)?)
}

/// `σ_ij = x^(i) y^(j) - x^(j) y^(i)` for the pairs used by the `n = 2`
/// closed forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SigmaTable {
    pub s12: Complex64,
    pub s13: Complex64,
    pub s14: Complex64,
    pub s15: Complex64,
    pub s23: Complex64,
    pub s24: Complex64,
}

impl SigmaTable {
    pub fn from_jets(x: &Jet, y: &Jet) -> Result<Self> {
        require_order(x, 5)?;
        require_order(y, 5)?;
        let dx = x.derivatives();
        let dy = y.derivatives();
        let s = |i: usize, j: usize| dx[i] * dy[j] - dx[j] * dy[i];
        Ok(SigmaTable {
            s12: s(1, 2),
            s13: s(1, 3),
            s14: s(1, 4),
            s15: s(1, 5),
            s23: s(2, 3),
            s24: s(2, 4),
        })
    }

    /// `σ_ij` with antisymmetry; `None` for pairs outside the table.
    pub fn get(&self, i: usize, j: usize) -> Option<Complex64> {
        if i == j {
            return Some(ZERO);
        }
        let (a, b, sign) = if i < j { (i, j, 1.0) } else { (j, i, -1.0) };
        let v = match (a, b) {
            (1, 2) => self.s12,
            (1, 3) => self.s13,
            (1, 4) => self.s14,
            (1, 5) => self.s15,
            (2, 3) => self.s23,
            (2, 4) => self.s24,
            _ => return None,
        };
        Some(v * sign)
    }
}

/// Threshold for `σ_12`, matching the Wronskian test on `(1, x, y)`.
fn sigma12_threshold(x: &Jet, y: &Jet) -> Result<f64> {
    let dx = x.derivatives();
    let dy = y.derivatives();
    if dx.len() < 3 || dy.len() < 3 {
        return Err(Error::OrderExceeded {
            requested: 2,
            order: x.order().min(y.order()),
        });
    }
    let scale = dx[..3]
        .iter()
        .chain(&dy[..3])
        .map(|v| v.norm())
        .fold(1.0, f64::max);
    Ok(tol::threshold(tol::DEGENERATE_WRONSKIAN, scale))
}

fn check_sigma12(sigma12: Complex64, x: &Jet, y: &Jet) -> Result<()> {
    let threshold = sigma12_threshold(x, y)?;
    if sigma12.norm() < threshold {
        return Err(Error::DegenerateCurve {
            what: "|σ_12|",
            magnitude: sigma12.norm(),
            threshold,
        });
    }
    Ok(())
}

/// `(κ_0, κ_1)` of the curve `(x(z), y(z))` in CP^2 from the σ closed forms.
pub fn kappa_n2(x: &Jet, y: &Jet) -> Result<[Complex64; 2]> {
    let s = SigmaTable::from_jets(x, y)?;
    check_sigma12(s.s12, x, y)?;
    let r = s.s13 / s.s12;
    let kappa1 = 4.0 / 3.0 * r * r - (s.s14 + 2.0 * s.s23) / s.s12;
    let kappa0 = -16.0 / 27.0 * r * r * r
        + s.s13 * (3.0 * s.s14 + 2.0 * s.s23) / (3.0 * s.s12 * s.s12)
        - (s.s15 + 2.0 * s.s24) / (3.0 * s.s12);
    Ok([kappa0, kappa1])
}

/// Jet of `x^(i) y^(j) - x^(j) y^(i)`, of order `K - max(i, j)`.
pub fn sigma_jet(x: &Jet, y: &Jet, i: usize, j: usize) -> Result<Jet> {
    let k = x.order().min(y.order());
    let top = i.max(j);
    if top > k {
        return Err(Error::OrderExceeded {
            requested: top,
            order: k,
        });
    }
    let order = k - top;
    let d = |u: &Jet, m: usize| u.nth_derivative_jet(m)?.truncate(order);
    let a = d(x, i)?.try_mul(&d(y, j)?)?;
    let b = d(x, j)?.try_mul(&d(y, i)?)?;
    a.try_sub(&b)
}

/// `(κ_0, κ_1)` through `λ = σ_12^(-1/3)`:
/// `κ_1 = 3λ''/λ + g_1`, `κ_0 = -(λ'/λ) κ_1 + λ'''/λ`, `g_1 = -σ_23/σ_12`.
pub fn kappa_n2_lambda_form(x: &Jet, y: &Jet) -> Result<[Complex64; 2]> {
    require_order(x, 5)?;
    require_order(y, 5)?;
    let s12 = sigma_jet(x, y, 1, 2)?.truncate(3)?;
    check_sigma12(s12.value(), x, y)?;
    let s23 = sigma_jet(x, y, 2, 3)?;
    let lambda = s12.powf(-1.0 / 3.0)?;
    let l = lambda.derivatives();
    let g1 = -s23.value() / s12.value();
    let kappa1 = 3.0 * l[2] / l[0] + g1;
    let kappa0 = -(l[1] / l[0]) * kappa1 + l[3] / l[0];
    Ok([kappa0, kappa1])
}

/// Both sides of `S(f∘g) = Sf(g) · g'^2 + Sg`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompositionCheck {
    pub composed: Complex64,
    pub chain_rule: Complex64,
}

impl CompositionCheck {
    pub fn deviation(&self) -> f64 {
        tol::relative_deviation(self.composed, self.chain_rule)
    }
}

/// `outer` is expanded at `inner(a)`, `inner` at `a`; both of order `>= 3`.
pub fn schwarzian_composition(outer: &Jet, inner: &Jet) -> Result<CompositionCheck> {
    let composed = schwarzian(&outer.compose(inner)?)?;
    let g1 = inner.derivative(1)?;
    let chain_rule = schwarzian(outer)? * g1 * g1 + schwarzian(inner)?;
    Ok(CompositionCheck {
        composed,
        chain_rule,
    })
}

/// A real polynomial `P` with `P' = c · Π (x - a_i)` for distinct real `a_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct CriticalPolynomial {
    critical_points: Vec<f64>,
    /// Ascending coefficients of `P`.
    coeffs: Vec<f64>,
}

impl CriticalPolynomial {
    pub fn from_critical_points(points: &[f64], leading: f64, constant: f64) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidInput(
                "P' is constant: a polynomial of degree <= 1 has no critical points".into(),
            ));
        }
        if !leading.is_finite() || leading == 0.0 || !constant.is_finite() {
            return Err(Error::InvalidInput(
                "leading coefficient must be finite and nonzero".into(),
            ));
        }
        if points.iter().any(|a| !a.is_finite()) {
            return Err(Error::InvalidInput("critical points must be finite".into()));
        }
        for (i, a) in points.iter().enumerate() {
            if points[i + 1..].contains(a) {
                return Err(Error::InvalidInput(format!(
                    "critical point {a} is repeated"
                )));
            }
        }
        // P' coefficients, ascending.
        let mut dp = vec![leading];
        for a in points {
            let mut next = vec![0.0; dp.len() + 1];
            for (k, c) in dp.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= a * c;
            }
            dp = next;
        }
        let mut coeffs = Vec::with_capacity(dp.len() + 1);
        coeffs.push(constant);
        coeffs.extend(dp.iter().enumerate().map(|(k, c)| c / (k + 1) as f64));
        Ok(CriticalPolynomial {
            critical_points: points.to_vec(),
            coeffs,
        })
    }

    pub fn critical_points(&self) -> &[f64] {
        &self.critical_points
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Jet of `P` at the real point `x` (embedded in C).
    pub fn jet_at(&self, x: f64, order: usize) -> Jet {
        let at = Complex64::new(x, 0.0);
        let z = Jet::variable(at, order);
        let mut acc = Jet::constant(ZERO, at, order);
        for c in self.coeffs.iter().rev() {
            acc = acc
                .try_mul(&z)
                .expect("jets share base and order")
                .add_scalar(Complex64::new(*c, 0.0));
        }
        acc
    }

    pub fn schwarzian_at(&self, x: f64) -> Result<f64> {
        Ok(schwarzian(&self.jet_at(x, 3))?.re)
    }
}

/// True iff `SP(x) < 0` at every sample.
pub fn polynomial_schwarzian_sign(p: &CriticalPolynomial, xs: &[f64]) -> Result<bool> {
    for &x in xs {
        if p.schwarzian_at(x)? >= 0.0 {
            return Ok(false);
        }
    }
    Ok(true)
}
