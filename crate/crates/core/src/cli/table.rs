//! Result tables: CSV preceded by a `# key: value` comment block.
//!
//! Floats are written with `Display`, which prints the shortest string that
//! parses back to the same `f64`, so tables round-trip exactly.

use std::path::Path;

use crate::error::{validation, Result};
use crate::page_curves::{CurvePoint, CurveSource, PageCurve};

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub meta: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

/// Formats a float for a table cell.
pub fn cell(v: f64) -> String {
    format!("{v}")
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self { meta: Vec::new(), columns: columns.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn meta(mut self, key: &str, value: impl ToString) -> Self {
        self.set_meta(key, value);
        self
    }

    pub fn set_meta(&mut self, key: &str, value: impl ToString) {
        let v = value.to_string().replace('\n', " ");
        match self.meta.iter_mut().find(|(k, _)| k == key) {
            Some(slot) => slot.1 = v,
            None => self.meta.push((key.to_string(), v)),
        }
    }

    pub fn get_meta(&self, key: &str) -> Option<&str> {
        self.meta.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Result<usize> {
        match self.columns.iter().position(|c| c == name) {
            Some(i) => Ok(i),
            None => validation(format!("table has no column `{name}`")),
        }
    }

    pub fn f64_column(&self, name: &str) -> Result<Vec<f64>> {
        let i = self.column(name)?;
        self.rows.iter().map(|r| r[i].parse::<f64>().or_else(|_| validation(format!("bad number `{}` in column `{name}`", r[i])))).collect()
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut out = String::new();
        for (k, v) in &self.meta {
            out.push_str(&format!("# {k}: {v}\n"));
        }
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        let io = |e: csv::Error| crate::Error::Validation(format!("csv: {e}"));
        w.write_record(&self.columns).map_err(io)?;
        for r in &self.rows {
            w.write_record(r).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| crate::Error::Validation(format!("csv: {e}")))?;
        out.push_str(&String::from_utf8_lossy(&bytes));
        Ok(out)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut meta = Vec::new();
        let mut body_start = 0;
        for line in text.split_inclusive('\n') {
            let Some(rest) = line.strip_prefix('#') else { break };
            body_start += line.len();
            if let Some((k, v)) = rest.trim().split_once(':') {
                meta.push((k.trim().to_string(), v.trim().to_string()));
            }
        }
        let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(&text.as_bytes()[body_start..]);
        let columns = rdr.headers().map_err(|e| crate::Error::Validation(format!("csv header: {e}")))?.iter().map(str::to_string).collect();
        let mut rows = Vec::new();
        for rec in rdr.records() {
            let rec = rec.map_err(|e| crate::Error::Validation(format!("csv: {e}")))?;
            rows.push(rec.iter().map(str::to_string).collect());
        }
        Ok(Self { meta, columns, rows })
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv()?).or_else(|e| validation(format!("cannot write {}: {e}", path.display())))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).or_else(|e| validation(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }
}

pub const CURVE_COLUMNS: [&str; 6] = ["n_a", "f", "mean_entropy", "stderr", "density", "density_stderr"];

/// Curve as a table with the standard curve columns.
pub fn curve_table(curve: &PageCurve) -> Table {
    let n = curve.n as f64;
    let mut t = Table::new(&CURVE_COLUMNS).meta("source", curve.source.name()).meta("n", curve.n).meta("model", &curve.model);
    if let Some(tr) = &curve.truncation {
        t.set_meta("truncation", tr);
    }
    for p in &curve.points {
        t.push(vec![p.n_a.to_string(), cell(p.n_a as f64 / n), cell(p.mean), cell(p.stderr), cell(p.mean / n), cell(p.stderr / n)]);
    }
    t
}

/// Inverse of [`curve_table`].
pub fn table_curve(t: &Table) -> Result<PageCurve> {
    let n: usize = match t.get_meta("n").map(str::parse) {
        Some(Ok(n)) => n,
        _ => return validation("curve table lacks a valid `n` header"),
    };
    let source = match t.get_meta("source").and_then(CurveSource::parse) {
        Some(s) => s,
        None => return validation("curve table lacks a valid `source` header"),
    };
    let i_na = t.column("n_a")?;
    let mean = t.f64_column("mean_entropy")?;
    let se = t.f64_column("stderr")?;
    let mut points = Vec::with_capacity(t.rows.len());
    for (r, row) in t.rows.iter().enumerate() {
        let n_a = row[i_na].parse().or_else(|_| validation(format!("bad n_a `{}`", row[i_na])))?;
        points.push(CurvePoint { n_a, mean: mean[r], stderr: se[r] });
    }
    let mut c = PageCurve::new(n, source, t.get_meta("model").unwrap_or(""), points)?;
    c.truncation = t.get_meta("truncation").map(str::to_string);
    Ok(c)
}

/// Per-point density difference between two curve tables.
#[derive(Clone, Debug, PartialEq)]
pub struct Comparison {
    pub n_a: Vec<usize>,
    pub abs_diff: Vec<f64>,
    pub max_diff: f64,
    pub tolerance: f64,
    pub pass: bool,
}

pub fn compare_curves(a: &PageCurve, b: &PageCurve, tolerance: f64) -> Result<Comparison> {
    let grid_a: Vec<f64> = a.fractions();
    let grid_b: Vec<f64> = b.fractions();
    if grid_a.len() != grid_b.len() || grid_a.iter().zip(&grid_b).any(|(x, y)| (x - y).abs() > 1e-12) {
        return validation("curves are not on the same N_A / N grid");
    }
    let abs_diff: Vec<f64> = a.densities().iter().zip(b.densities()).map(|(x, y)| (x - y).abs()).collect();
    let max_diff = abs_diff.iter().cloned().fold(0.0, f64::max);
    Ok(Comparison { n_a: a.points.iter().map(|p| p.n_a).collect(), abs_diff, max_diff, tolerance, pass: max_diff <= tolerance })
}
