//! JSON and CSV rendering of job results.

use std::io::Write;

use crate::job::{JobResult, OutputFormat, PointRecord};

/// Pretty JSON with a trailing newline. Floats use the shortest decimal
/// form that parses back to the same `f64`.
pub fn to_json(result: &JobResult) -> String {
    let mut text = serde_json::to_string_pretty(result).expect("results serialise");
    text.push('\n');
    text
}

fn float(v: f64) -> String {
    format!("{v:.16e}")
}

fn opt_float(v: Option<f64>) -> String {
    v.map(float).unwrap_or_default()
}

fn push_pairs(row: &mut Vec<String>, values: Option<&Vec<[f64; 2]>>, count: usize) {
    for j in 0..count {
        match values.and_then(|v| v.get(j)) {
            Some([re, im]) => {
                row.push(float(*re));
                row.push(float(*im));
            }
            None => row.extend([String::new(), String::new()]),
        }
    }
}

fn kappa_header(header: &mut Vec<String>, prefix: &str, n: usize) {
    for j in 0..n {
        header.push(format!("{prefix}{j}_re"));
        header.push(format!("{prefix}{j}_im"));
    }
}

/// Column layout shared by every row of one result.
struct Layout {
    n: usize,
    closed_form: bool,
    checks: Vec<&'static str>,
    transform: bool,
}

impl Layout {
    fn of(result: &JobResult) -> Self {
        let mut checks = Vec::new();
        for r in &result.records {
            for c in &r.checks {
                if !checks.contains(&c.check.name()) {
                    checks.push(c.check.name());
                }
            }
        }
        Layout {
            n: result.n,
            closed_form: result.method == crate::job::Method::Both,
            checks,
            transform: result.records.iter().any(|r| r.transform.is_some()),
        }
    }

    fn header(&self) -> Vec<String> {
        let mut h: Vec<String> = ["point_re", "point_im", "status"]
            .map(String::from)
            .to_vec();
        kappa_header(&mut h, "kappa", self.n);
        h.push("frenet_residual".into());
        if self.closed_form {
            kappa_header(&mut h, "closed_kappa", self.n);
            h.push("method_deviation".into());
        }
        for c in &self.checks {
            h.push(format!("{c}_passed"));
            h.push(format!("{c}_deviation"));
        }
        if self.transform {
            kappa_header(&mut h, "transformed_kappa", self.n);
            h.push("transform_deviation".into());
        }
        h.push("message".into());
        h
    }

    fn row(&self, r: &PointRecord) -> Vec<String> {
        let mut row = vec![
            float(r.point[0]),
            float(r.point[1]),
            r.status.name().to_string(),
        ];
        push_pairs(&mut row, r.kappas.as_ref(), self.n);
        row.push(opt_float(r.frenet_residual));
        if self.closed_form {
            push_pairs(&mut row, r.closed_form_kappas.as_ref(), self.n);
            row.push(opt_float(r.method_deviation));
        }
        for name in &self.checks {
            match r.checks.iter().find(|c| c.check.name() == *name) {
                Some(c) => {
                    row.push(c.passed.to_string());
                    row.push(float(c.deviation));
                }
                None => row.extend([String::new(), String::new()]),
            }
        }
        if self.transform {
            let t = r.transform.as_ref();
            push_pairs(&mut row, t.and_then(|t| t.kappas.as_ref()), self.n);
            row.push(opt_float(t.and_then(|t| t.deviation)));
        }
        row.push(r.message.clone().unwrap_or_default());
        row
    }
}

/// One header row, then one row per point. Floats carry 17 significant
/// digits.
pub fn to_csv(result: &JobResult) -> String {
    let layout = Layout::of(result);
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(layout.header()).expect("in-memory write");
    for r in &result.records {
        w.write_record(layout.row(r)).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

pub fn render(result: &JobResult, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => to_json(result),
        OutputFormat::Csv => to_csv(result),
    }
}

pub fn write(out: &mut dyn Write, result: &JobResult, format: OutputFormat) -> std::io::Result<()> {
    out.write_all(render(result, format).as_bytes())?;
    out.flush()
}
