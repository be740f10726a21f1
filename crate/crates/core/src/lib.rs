//! Schwarzian curvatures of analytic curves in complex projective space.
//!
//! Curves are given by inhomogeneous coordinates `x_1(z), ..., x_n(z)` as
//! [`expr::Expr`] values and lifted to `f = (1, x_1, ..., x_n)`. Derivatives
//! are carried exactly by truncated Taylor series ([`jets::Jet`]).
//!
//! * [`frame`]: canonical frame and curvatures for any `n`.
//! * [`lowdim`]: closed forms for `n = 1, 2` and the Schwarzian derivative.
//! * [`transform`]: projective maps, reparameterisations and their laws.

pub mod error;
pub mod expr;
pub mod frame;
pub mod jets;
pub mod lowdim;
pub mod tol;
pub mod transform;

pub use error::{Error, Result};
pub use expr::{parse, CurveSpec, Expr, ParseError};
pub use frame::{kappa_general, required_order, CurvatureResult, FrameData};
pub use jets::Jet;
pub use nalgebra;
pub use num_complex::Complex64;
