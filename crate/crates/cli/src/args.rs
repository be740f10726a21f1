//! Command-line flags and their translation into a [`JobSpec`].

use std::path::{Path, PathBuf};

use clap::Parser;

use crate::error::CliError;
use crate::job::{
    sweep_points, AffineSpec, Check, JobSpec, Method, OutputFormat, TransformSpec, DEFAULT_TOL,
};

pub const GRAMMAR: &str = "\
Expression grammar (one complex variable z):
  expr   := term (('+' | '-') term)*
  term   := unary (('*' | '/') unary)*
  unary  := '-' unary | power
  power  := atom ('^' int)?          int may be negative: z^-2, z^(-2)
  atom   := number | number 'i' | 'i' | 'pi' | 'e' | 'z'
          | func '(' expr ')' | '(' expr ')'
  func   := exp | sin | cos | sqrt
Examples: \"cos(z)\", \"z^2/2\", \"(2+3i)*exp(-z)\", \"1/(z - 1)^2\"";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sweep {
    pub start: [f64; 2],
    pub end: [f64; 2],
    pub count: usize,
}

pub fn parse_complex(text: &str) -> Result<[f64; 2], String> {
    let (re, im) = text
        .split_once(',')
        .ok_or_else(|| format!("expected RE,IM, got {text:?}"))?;
    let parse = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|e| format!("{s:?} is not a number: {e}"))
    };
    let value = [parse(re)?, parse(im)?];
    if value.iter().all(|v| v.is_finite()) {
        Ok(value)
    } else {
        Err(format!("{text:?} is not finite"))
    }
}

pub fn parse_sweep(text: &str) -> Result<Sweep, String> {
    let parts: Vec<&str> = text.split(':').collect();
    let [start, end, count] = parts[..] else {
        return Err(format!("expected RE,IM:RE,IM:COUNT, got {text:?}"));
    };
    let count: usize = count
        .trim()
        .parse()
        .map_err(|e| format!("sweep count {count:?}: {e}"))?;
    if count < 2 {
        return Err(format!("sweep count must be at least 2, got {count}"));
    }
    Ok(Sweep {
        start: parse_complex(start)?,
        end: parse_complex(end)?,
        count,
    })
}

/// Schwarzian curvatures of analytic curves in CP^n.
#[derive(Debug, Parser)]
#[command(name = "kappa", version, after_help = GRAMMAR)]
pub struct Cli {
    /// Dimension of the projective space
    #[arg(long, value_name = "INT")]
    pub n: Option<usize>,

    /// Inhomogeneous coordinate x_k(z); repeat once per component, in order
    #[arg(long = "curve", value_name = "EXPR", allow_hyphen_values = true)]
    pub curves: Vec<String>,

    /// Evaluation point; repeatable
    #[arg(long = "at", value_name = "RE,IM", allow_hyphen_values = true, value_parser = parse_complex)]
    pub at: Vec<[f64; 2]>,

    /// Evenly spaced points on a segment, endpoints included
    #[arg(long, value_name = "RE,IM:RE,IM:COUNT", allow_hyphen_values = true, value_parser = parse_sweep)]
    pub sweep: Option<Sweep>,

    #[arg(long, value_enum)]
    pub method: Option<Method>,

    /// Diagnostics to run at each point (comma separated)
    #[arg(long = "check", value_enum, value_delimiter = ',')]
    pub checks: Vec<Check>,

    /// JSON file {"matrix": [[[re, im], ...], ...], "vector": [[re, im], ...]}
    #[arg(long, value_name = "FILE", conflicts_with = "transform_coords")]
    pub transform_affine: Option<PathBuf>,

    /// Reparameterisation z = z(w), written in the variable z
    #[arg(long, value_name = "EXPR", allow_hyphen_values = true)]
    pub transform_coords: Option<String>,

    /// Output format [default: json, or csv with --sweep]
    #[arg(long, value_enum)]
    pub output: Option<OutputFormat>,

    /// Pass/fail tolerance for checks and transforms
    #[arg(long, value_name = "FLOAT", default_value_t = DEFAULT_TOL)]
    pub tol: f64,

    /// Read the whole job from a JSON file; other job flags are ignored
    #[arg(long, value_name = "FILE")]
    pub spec: Option<PathBuf>,
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    serde_json::from_str(&read(path)?).map_err(|source| CliError::Json {
        path: path.to_path_buf(),
        source,
    })
}

impl Cli {
    pub fn job_spec(&self) -> Result<JobSpec, CliError> {
        if let Some(path) = &self.spec {
            return read_json(path);
        }
        let n = self
            .n
            .ok_or_else(|| CliError::Usage("--n is required (or use --spec FILE)".into()))?;
        let mut points = self.at.clone();
        if let Some(s) = self.sweep {
            points.extend(sweep_points(s.start, s.end, s.count));
        }
        let transform = match (&self.transform_affine, &self.transform_coords) {
            (Some(path), _) => Some(TransformSpec::Affine(read_json::<AffineSpec>(path)?)),
            (None, Some(e)) => Some(TransformSpec::Coords(e.clone())),
            (None, None) => None,
        };
        let default_output = if self.sweep.is_some() {
            OutputFormat::Csv
        } else {
            OutputFormat::Json
        };
        Ok(JobSpec {
            n,
            components: self.curves.clone(),
            points,
            method: self.method.unwrap_or_default(),
            checks: self.checks.clone(),
            transform,
            output: self.output.unwrap_or(default_output),
            tol: self.tol,
        })
    }
}
