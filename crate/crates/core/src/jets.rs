//! Truncated complex Taylor series ("jets").
//!
//! A [`Jet`] of order `K` at base point `a` stores the Taylor coefficients
//! `c[k] = f^(k)(a) / k!` for `k = 0..=K`. All arithmetic is truncated at `K`
//! and both operands must share the base point and the order; nothing is
//! promoted or truncated implicitly.

use std::ops::Neg;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tol;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    base: Complex64,
    coeffs: Vec<Complex64>,
}

impl Jet {
    /// The constant function `c`, expanded at `base`.
    pub fn constant(c: Complex64, base: Complex64, order: usize) -> Self {
        let mut coeffs = vec![ZERO; order + 1];
        coeffs[0] = c;
        Jet { base, coeffs }
    }

    /// The identity function `z`, expanded at `base`.
    pub fn variable(base: Complex64, order: usize) -> Self {
        let mut coeffs = vec![ZERO; order + 1];
        coeffs[0] = base;
        if order >= 1 {
            coeffs[1] = ONE;
        }
        Jet { base, coeffs }
    }

    /// Builds a jet from Taylor coefficients (`f^(k)(base) / k!`).
    pub fn from_coeffs(base: Complex64, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidInput(
                "a jet needs at least one coefficient".into(),
            ));
        }
        Jet { base, coeffs }.finite("from_coeffs")
    }

    /// Builds a jet from raw derivatives `f(base), f'(base), ..., f^(K)(base)`.
    pub fn from_derivatives(base: Complex64, derivatives: &[Complex64]) -> Result<Self> {
        let mut fact = 1.0;
        let coeffs = derivatives
            .iter()
            .enumerate()
            .map(|(k, d)| {
                if k > 0 {
                    fact *= k as f64;
                }
                d / fact
            })
            .collect();
        Jet::from_coeffs(base, coeffs)
    }

    pub fn base(&self) -> Complex64 {
        self.base
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn value(&self) -> Complex64 {
        self.coeffs[0]
    }

    /// `k! * c[k]`, the k-th derivative at the base point.
    pub fn derivative(&self, k: usize) -> Result<Complex64> {
        if k > self.order() {
            return Err(Error::OrderExceeded {
                requested: k,
                order: self.order(),
            });
        }
        Ok(self.coeffs[k] * factorial(k))
    }

    /// All derivatives `f(a), f'(a), ..., f^(K)(a)`.
    pub fn derivatives(&self) -> Vec<Complex64> {
        let mut fact = 1.0;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| {
                if k > 0 {
                    fact *= k as f64;
                }
                c * fact
            })
            .collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn truncate(&self, order: usize) -> Result<Jet> {
        if order > self.order() {
            return Err(Error::OrderExceeded {
                requested: order,
                order: self.order(),
            });
        }
        Ok(Jet {
            base: self.base,
            coeffs: self.coeffs[..=order].to_vec(),
        })
    }

    /// Formal derivative: the jet of `f'`, one order shorter.
    pub fn differentiate(&self) -> Result<Jet> {
        if self.order() == 0 {
            return Err(Error::OrderExceeded {
                requested: 1,
                order: 0,
            });
        }
        let coeffs = self.coeffs[1..]
            .iter()
            .enumerate()
            .map(|(k, c)| c * (k + 1) as f64)
            .collect();
        Ok(Jet {
            base: self.base,
            coeffs,
        })
    }

    /// Jet of the `k`-th derivative, order `K - k`.
    pub fn nth_derivative_jet(&self, k: usize) -> Result<Jet> {
        let mut out = self.clone();
        for _ in 0..k {
            out = out.differentiate()?;
        }
        Ok(out)
    }

    pub fn try_add(&self, other: &Jet) -> Result<Jet> {
        self.check_compatible(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Jet {
            base: self.base,
            coeffs,
        }
        .finite("addition")
    }

    pub fn try_sub(&self, other: &Jet) -> Result<Jet> {
        self.check_compatible(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Jet {
            base: self.base,
            coeffs,
        }
        .finite("subtraction")
    }

    /// Truncated Cauchy product.
    pub fn try_mul(&self, other: &Jet) -> Result<Jet> {
        self.check_compatible(other)?;
        let n = self.coeffs.len();
        let coeffs = (0..n)
            .map(|k| (0..=k).map(|j| self.coeffs[j] * other.coeffs[k - j]).sum())
            .collect();
        Jet {
            base: self.base,
            coeffs,
        }
        .finite("multiplication")
    }

    pub fn try_div(&self, other: &Jet) -> Result<Jet> {
        self.check_compatible(other)?;
        let v0 = other.leading_nonzero()?;
        let n = self.coeffs.len();
        let mut q: Vec<Complex64> = Vec::with_capacity(n);
        for k in 0..n {
            let acc: Complex64 = (1..=k).map(|j| other.coeffs[j] * q[k - j]).sum();
            q.push((self.coeffs[k] - acc) / v0);
        }
        Jet {
            base: self.base,
            coeffs: q,
        }
        .finite("division")
    }

    pub fn recip(&self) -> Result<Jet> {
        Jet::constant(ONE, self.base, self.order()).try_div(self)
    }

    pub fn scale(&self, c: Complex64) -> Jet {
        Jet {
            base: self.base,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn add_scalar(&self, c: Complex64) -> Jet {
        let mut out = self.clone();
        out.coeffs[0] += c;
        out
    }

    pub fn exp(&self) -> Result<Jet> {
        let u = &self.coeffs;
        let n = u.len();
        let mut w = Vec::with_capacity(n);
        w.push(u[0].exp());
        // k w_k = sum_{j=1..k} j u_j w_{k-j}
        for k in 1..n {
            let acc: Complex64 = (1..=k).map(|j| u[j] * w[k - j] * j as f64).sum();
            w.push(acc / k as f64);
        }
        Jet {
            base: self.base,
            coeffs: w,
        }
        .finite("exp")
    }

    /// `(sin u, cos u)` from the coupled recurrence.
    pub fn sin_cos(&self) -> Result<(Jet, Jet)> {
        let u = &self.coeffs;
        let n = u.len();
        let mut s = Vec::with_capacity(n);
        let mut c = Vec::with_capacity(n);
        s.push(u[0].sin());
        c.push(u[0].cos());
        for k in 1..n {
            let mut sk = ZERO;
            let mut ck = ZERO;
            for j in 1..=k {
                let ju = u[j] * j as f64;
                sk += ju * c[k - j];
                ck -= ju * s[k - j];
            }
            s.push(sk / k as f64);
            c.push(ck / k as f64);
        }
        let sin = Jet {
            base: self.base,
            coeffs: s,
        }
        .finite("sin")?;
        let cos = Jet {
            base: self.base,
            coeffs: c,
        }
        .finite("cos")?;
        Ok((sin, cos))
    }

    pub fn sin(&self) -> Result<Jet> {
        Ok(self.sin_cos()?.0)
    }

    pub fn cos(&self) -> Result<Jet> {
        Ok(self.sin_cos()?.1)
    }

    /// `u^p` on the principal branch of `log u(a)`.
    pub fn powc(&self, p: Complex64) -> Result<Jet> {
        let u = &self.coeffs;
        let u0 = self.leading_nonzero()?;
        let n = u.len();
        let mut w = Vec::with_capacity(n);
        w.push(u0.powc(p));
        // k u_0 w_k = sum_{j=1..k} (p j - (k - j)) u_j w_{k-j}
        for k in 1..n {
            let acc: Complex64 = (1..=k)
                .map(|j| (p * j as f64 - (k - j) as f64) * u[j] * w[k - j])
                .sum();
            w.push(acc / (u0 * k as f64));
        }
        Jet {
            base: self.base,
            coeffs: w,
        }
        .finite("powc")
    }

    pub fn powf(&self, p: f64) -> Result<Jet> {
        self.powc(Complex64::new(p, 0.0))
    }

    /// Integer power by repeated squaring; defined at zeros of `u` for `n >= 0`.
    pub fn powi(&self, n: i32) -> Result<Jet> {
        let mut result = Jet::constant(ONE, self.base, self.order());
        let mut square = self.clone();
        let mut e = n.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                result = result.try_mul(&square)?;
            }
            e >>= 1;
            if e > 0 {
                square = square.try_mul(&square)?;
            }
        }
        if n < 0 {
            result.recip()
        } else {
            Ok(result)
        }
    }

    pub fn sqrt(&self) -> Result<Jet> {
        self.powf(0.5)
    }

    /// Composition `self ∘ inner`, where `self` is expanded at `inner(a)`.
    ///
    /// The result is expanded at `inner`'s base point.
    pub fn compose(&self, inner: &Jet) -> Result<Jet> {
        if self.order() != inner.order() {
            return Err(Error::OrderMismatch {
                left: self.order(),
                right: inner.order(),
            });
        }
        let b = inner.value();
        if (self.base - b).norm() > 1e-12 * (1.0 + b.norm()) {
            return Err(Error::BasePointMismatch {
                left: self.base,
                right: b,
            });
        }
        // h = inner - inner(a) has zero constant term, so Horner stays truncation-exact.
        let mut h = inner.clone();
        h.coeffs[0] = ZERO;
        let mut acc = Jet::constant(self.coeffs[self.order()], inner.base, inner.order());
        for k in (0..self.order()).rev() {
            acc = acc.try_mul(&h)?.add_scalar(self.coeffs[k]);
        }
        acc.finite("composition")
    }

    fn check_compatible(&self, other: &Jet) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch {
                left: self.order(),
                right: other.order(),
            });
        }
        if self.base != other.base {
            return Err(Error::BasePointMismatch {
                left: self.base,
                right: other.base,
            });
        }
        Ok(())
    }

    fn leading_nonzero(&self) -> Result<Complex64> {
        let v0 = self.coeffs[0];
        if v0.norm() < tol::threshold(tol::LEADING_COEFF, self.max_abs()) {
            return Err(Error::DivisionByZeroJet {
                magnitude: v0.norm(),
            });
        }
        Ok(v0)
    }

    fn finite(self, context: &'static str) -> Result<Jet> {
        if self
            .coeffs
            .iter()
            .all(|c| c.re.is_finite() && c.im.is_finite())
        {
            Ok(self)
        } else {
            Err(Error::NonFinite { context })
        }
    }
}

impl Neg for &Jet {
    type Output = Jet;

    fn neg(self) -> Jet {
        self.scale(-ONE)
    }
}

impl Neg for Jet {
    type Output = Jet;

    fn neg(self) -> Jet {
        -&self
    }
}

pub fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}
