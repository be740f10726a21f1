use kappa_core::frame::{curvature, frame_at, frenet_residual};
use kappa_core::lowdim::{kappa0_n1, kappa_n2};
use kappa_core::nalgebra::{DMatrix, DVector};
use kappa_core::tol::{self, max_relative_deviation};
use kappa_core::transform::{
    apply_affine, reparametrized_kappa, transform_law_n1, transform_law_n2, AffineMap,
    CoordinateChange,
};
use kappa_core::{Complex64, CurveSpec, Error, Expr};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const DEFAULT_TOL: f64 = 1e-8;

/// Attempts at drawing an invariance-check matrix before giving up on
/// chart escapes.
const INVARIANCE_ATTEMPTS: usize = 16;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    #[default]
    General,
    ClosedForm,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    Frenet,
    Invariance,
    UnitDet,
}

impl Check {
    pub fn name(self) -> &'static str {
        match self {
            Check::Frenet => "frenet",
            Check::Invariance => "invariance",
            Check::UnitDet => "unit-det",
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

/// Affine map as written in job files: complex entries are `[re, im]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AffineSpec {
    pub matrix: Vec<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vector: Option<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TransformSpec {
    Affine(AffineSpec),
    Coords(String),
}

fn default_tol() -> f64 {
    DEFAULT_TOL
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub n: usize,
    pub components: Vec<String>,
    pub points: Vec<[f64; 2]>,
    #[serde(default)]
    pub method: Method,
    #[serde(default)]
    pub checks: Vec<Check>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transform: Option<TransformSpec>,
    #[serde(default)]
    pub output: OutputFormat,
    #[serde(default = "default_tol")]
    pub tol: f64,
}

#[derive(Debug, Clone)]
pub enum Transform {
    Affine(AffineMap),
    Coords(Expr),
}

/// A validated job.
#[derive(Debug, Clone)]
pub struct Job {
    pub curve: CurveSpec,
    pub points: Vec<Complex64>,
    pub method: Method,
    pub checks: Vec<Check>,
    pub transform: Option<Transform>,
    pub output: OutputFormat,
    pub tol: f64,
}

pub fn complex(v: [f64; 2]) -> Complex64 {
    Complex64::new(v[0], v[1])
}

pub fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

fn pairs(zs: &[Complex64]) -> Vec<[f64; 2]> {
    zs.iter().copied().map(pair).collect()
}

fn parse_expr(label: &str, text: &str) -> Result<Expr, CliError> {
    kappa_core::parse(text).map_err(|source| CliError::Expression {
        label: label.to_string(),
        text: text.to_string(),
        source,
    })
}

impl AffineSpec {
    pub fn to_map(&self, dim: usize) -> Result<AffineMap, CliError> {
        let usage = |m: String| CliError::Usage(m);
        if self.matrix.len() != dim || self.matrix.iter().any(|row| row.len() != dim) {
            return Err(usage(format!("affine matrix must be {dim}x{dim}")));
        }
        let linear = DMatrix::from_fn(dim, dim, |i, j| complex(self.matrix[i][j]));
        let translation = match &self.vector {
            None => DVector::zeros(dim),
            Some(v) if v.len() == dim => {
                DVector::from_iterator(dim, v.iter().copied().map(complex))
            }
            Some(v) => {
                return Err(usage(format!(
                    "affine vector has {} entries, expected {dim}",
                    v.len()
                )))
            }
        };
        AffineMap::new(linear, translation).map_err(|e| usage(format!("affine map: {e}")))
    }
}

impl JobSpec {
    pub fn validate(&self) -> Result<Job, CliError> {
        let usage = |m: String| Err(CliError::Usage(m));
        if self.n == 0 {
            return usage("--n must be at least 1".into());
        }
        if self.components.len() != self.n {
            return usage(format!(
                "--n {} needs {} --curve components, got {}",
                self.n,
                self.n,
                self.components.len()
            ));
        }
        if self.points.is_empty() {
            return usage("no evaluation points: give --at or --sweep".into());
        }
        if self.points.iter().flatten().any(|v| !v.is_finite()) {
            return usage("evaluation points must be finite".into());
        }
        if self.method != Method::General && self.n > 2 {
            return usage(format!(
                "closed forms exist only for n <= 2, got n = {}",
                self.n
            ));
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return usage(format!("--tol must be a positive number, got {}", self.tol));
        }
        let exprs = self
            .components
            .iter()
            .enumerate()
            .map(|(i, text)| parse_expr(&format!("curve {}", i + 1), text))
            .collect::<Result<Vec<_>, _>>()?;
        let curve = CurveSpec::new(exprs).map_err(|e| CliError::Usage(e.to_string()))?;
        let transform = match &self.transform {
            None => None,
            Some(TransformSpec::Affine(a)) => Some(Transform::Affine(a.to_map(self.n + 1)?)),
            Some(TransformSpec::Coords(text)) => {
                Some(Transform::Coords(parse_expr("coordinate change", text)?))
            }
        };
        let mut checks = self.checks.clone();
        checks.dedup();
        Ok(Job {
            curve,
            points: self.points.iter().copied().map(complex).collect(),
            method: self.method,
            checks,
            transform,
            output: self.output,
            tol: self.tol,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    Degenerate,
    ChartEscape,
    Error,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Degenerate => "degenerate",
            Status::ChartEscape => "chart-escape",
            Status::Error => "error",
        }
    }

    fn of(e: &Error) -> Status {
        match e {
            Error::DegenerateCurve { .. }
            | Error::CriticalPoint { .. }
            | Error::CriticalReparameterization { .. } => Status::Degenerate,
            Error::ChartEscape { .. } => Status::ChartEscape,
            _ => Status::Error,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub check: Check,
    pub passed: bool,
    pub deviation: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TransformKind {
    Affine,
    Coords,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransformRecord {
    pub kind: TransformKind,
    /// `z(w)` for coordinate changes.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub image: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappas: Option<Vec<[f64; 2]>>,
    /// Prediction of the transformation law (coordinate changes, n <= 2).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub law_kappas: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deviation: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub passed: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointRecord {
    pub point: [f64; 2],
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    pub kappas: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub closed_form_kappas: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method_deviation: Option<f64>,
    pub frenet_residual: Option<f64>,
    pub flagged: Option<bool>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<CheckRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transform: Option<TransformRecord>,
}

impl PointRecord {
    fn new(point: Complex64) -> Self {
        PointRecord {
            point: pair(point),
            status: Status::Ok,
            message: None,
            kappas: None,
            closed_form_kappas: None,
            method_deviation: None,
            frenet_residual: None,
            flagged: None,
            checks: Vec::new(),
            transform: None,
        }
    }

    /// Ok status, every requested check passed and any transform agreed.
    pub fn is_clean(&self) -> bool {
        self.status == Status::Ok
            && self.checks.iter().all(|c| c.passed)
            && self.transform.as_ref().and_then(|t| t.passed) != Some(false)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JobResult {
    pub n: usize,
    pub method: Method,
    pub tol: f64,
    pub seed: u64,
    pub records: Vec<PointRecord>,
}

impl JobResult {
    pub fn all_clean(&self) -> bool {
        self.records.iter().all(PointRecord::is_clean)
    }
}

/// Closed-form curvatures for `n <= 2`.
fn closed_form(curve: &CurveSpec, at: Complex64) -> Result<Vec<Complex64>, Error> {
    let order = 2 * curve.n() + 1;
    let lift = curve.lift(at, order)?;
    match curve.n() {
        1 => Ok(vec![kappa0_n1(&lift[1])?]),
        2 => Ok(kappa_n2(&lift[1], &lift[2])?.to_vec()),
        n => Err(Error::InvalidInput(format!("no closed form for n = {n}"))),
    }
}

/// Entries uniform in the complex unit square, `|det| >= 0.1`.
pub fn random_invertible_matrix<R: Rng>(rng: &mut R, dim: usize) -> DMatrix<Complex64> {
    loop {
        let m = DMatrix::from_fn(dim, dim, |_, _| {
            Complex64::new(rng.random_range(0.0..1.0), rng.random_range(0.0..1.0))
        });
        if m.determinant().norm() >= 0.1 {
            return m;
        }
    }
}

/// The RNG used by point `index`: one ChaCha stream per point.
pub fn point_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

fn invariance_deviation(
    curve: &CurveSpec,
    at: Complex64,
    reference: &[Complex64],
    rng: &mut ChaCha8Rng,
) -> Result<f64, Error> {
    let dim = curve.n() + 1;
    let mut last = None;
    for _ in 0..INVARIANCE_ATTEMPTS {
        let m = AffineMap::linear(random_invertible_matrix(rng, dim))?;
        match apply_affine(curve, &m, at) {
            Ok(k) => return Ok(max_relative_deviation(&k.kappas, reference)),
            Err(e @ Error::ChartEscape { .. }) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

fn evaluate(job: &Job, index: usize, seed: u64, record: &mut PointRecord) -> Result<(), Error> {
    let w = complex(record.point);
    let coords = match &job.transform {
        Some(Transform::Coords(e)) => Some(CoordinateChange::new(e.clone(), w)),
        _ => None,
    };
    let at = match &coords {
        Some(cc) => {
            let z = cc.image()?;
            record.transform = Some(TransformRecord {
                kind: TransformKind::Coords,
                image: Some(pair(z)),
                kappas: None,
                law_kappas: None,
                deviation: None,
                passed: None,
            });
            z
        }
        None => w,
    };

    let fd = frame_at(&job.curve, at)?;
    let general = curvature(&fd);
    let kappas = match job.method {
        Method::General => general.kappas.clone(),
        Method::ClosedForm => closed_form(&job.curve, at)?,
        Method::Both => {
            let closed = closed_form(&job.curve, at)?;
            record.method_deviation = Some(max_relative_deviation(&closed, &general.kappas));
            record.closed_form_kappas = Some(pairs(&closed));
            general.kappas.clone()
        }
    };
    let residual = frenet_residual(&fd, &kappas);
    record.kappas = Some(pairs(&kappas));
    record.frenet_residual = Some(residual);
    record.flagged = Some(residual > tol::FRENET_FLAG * general.residual_scale);

    for &check in &job.checks {
        let deviation = match check {
            Check::Frenet => residual / general.residual_scale,
            Check::UnitDet => general.unit_det_deviation(),
            Check::Invariance => {
                let mut rng = point_rng(seed, index);
                invariance_deviation(&job.curve, at, &kappas, &mut rng)?
            }
        };
        record.checks.push(CheckRecord {
            check,
            passed: deviation <= job.tol,
            deviation,
        });
    }

    match (&job.transform, coords) {
        (Some(Transform::Affine(m)), _) => {
            record.transform = Some(TransformRecord {
                kind: TransformKind::Affine,
                image: None,
                kappas: None,
                law_kappas: None,
                deviation: None,
                passed: None,
            });
            let moved = apply_affine(&job.curve, m, at)?.kappas;
            let deviation = max_relative_deviation(&moved, &kappas);
            let t = record.transform.as_mut().expect("just set");
            t.kappas = Some(pairs(&moved));
            t.deviation = Some(deviation);
            t.passed = Some(deviation <= job.tol);
        }
        (Some(Transform::Coords(_)), Some(cc)) => {
            let direct = reparametrized_kappa(&job.curve, &cc)?.kappas;
            let law = match job.curve.n() {
                1 => Some(vec![transform_law_n1(kappas[0], &cc)?]),
                2 => Some(transform_law_n2([kappas[0], kappas[1]], &cc)?.to_vec()),
                _ => None,
            };
            let t = record.transform.as_mut().expect("set above");
            t.kappas = Some(pairs(&direct));
            if let Some(law) = law {
                let deviation = max_relative_deviation(&direct, &law);
                t.law_kappas = Some(pairs(&law));
                t.deviation = Some(deviation);
                t.passed = Some(deviation <= job.tol);
            }
        }
        _ => {}
    }
    Ok(())
}

pub fn evaluate_point(job: &Job, index: usize, seed: u64) -> PointRecord {
    let mut record = PointRecord::new(job.points[index]);
    if let Err(e) = evaluate(job, index, seed, &mut record) {
        record.status = Status::of(&e);
        record.message = Some(e.to_string());
    }
    record
}

/// Evaluates every point; records come back in input order.
pub fn run_job(job: &Job, seed: u64) -> JobResult {
    let records = (0..job.points.len())
        .into_par_iter()
        .map(|i| evaluate_point(job, i, seed))
        .collect();
    JobResult {
        n: job.curve.n(),
        method: job.method,
        tol: job.tol,
        seed,
        records,
    }
}

/// `count >= 2` evenly spaced points from `start` to `end` inclusive.
pub fn sweep_points(start: [f64; 2], end: [f64; 2], count: usize) -> Vec<[f64; 2]> {
    let (a, b) = (complex(start), complex(end));
    (0..count)
        .map(|k| {
            let t = k as f64 / (count - 1) as f64;
            pair(a * (1.0 - t) + b * t)
        })
        .collect()
}
