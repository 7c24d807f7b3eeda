//! Tabular reports written as CSV or a single JSON object.

use std::io::Write;

use serde_json::{json, Map, Value};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Uint(u64),
    Real(f64),
    Bool(bool),
    Text(String),
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}
impl From<i32> for Cell {
    fn from(v: i32) -> Self {
        Cell::Int(v as i64)
    }
}
impl From<i8> for Cell {
    fn from(v: i8) -> Self {
        Cell::Int(v as i64)
    }
}
impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Uint(v)
    }
}
impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Uint(v as u64)
    }
}
impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Uint(v as u64)
    }
}
impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Real(v)
    }
}
impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}
impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}
impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

/// Significant digits for reals.
pub const SIG_DIGITS: usize = 12;

/// `%.12g`-style rendering, independent of locale.
pub fn fmt_real(v: f64) -> String {
    if !v.is_finite() {
        return if v.is_nan() {
            "nan".into()
        } else if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", SIG_DIGITS - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..SIG_DIGITS as i32).contains(&exp) {
        let decimals = (SIG_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{v:.decimals$}"))
    } else {
        format!("{}e{}{:02}", trim_zeros(mantissa), if exp < 0 { '-' } else { '+' }, exp.abs())
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

impl Cell {
    fn text(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Uint(v) => v.to_string(),
            Cell::Real(v) => fmt_real(*v),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => json!(v),
            Cell::Uint(v) => json!(v),
            // round-trip through the 12-digit text so JSON and CSV agree
            Cell::Real(v) if v.is_finite() => json!(fmt_real(*v).parse::<f64>().expect("formatted real parses")),
            Cell::Real(_) => Value::Null,
            Cell::Bool(v) => json!(v),
            Cell::Text(s) => json!(s),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Default)]
pub struct Report {
    pub config: Vec<(String, Cell)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub summary: Vec<(String, Cell)>,
}

impl Report {
    pub fn new(columns: &[&'static str]) -> Self {
        Self { columns: columns.to_vec(), ..Default::default() }
    }

    pub fn config(&mut self, key: &str, v: impl Into<Cell>) -> &mut Self {
        self.config.push((key.to_string(), v.into()));
        self
    }

    pub fn summary(&mut self, key: &str, v: impl Into<Cell>) -> &mut Self {
        self.summary.push((key.to_string(), v.into()));
        self
    }

    pub fn row(&mut self, cells: Vec<Cell>) {
        assert_eq!(cells.len(), self.columns.len(), "row width must match the header");
        self.rows.push(cells);
    }

    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::text))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let obj =
            |pairs: &[(String, Cell)]| Value::Object(pairs.iter().map(|(k, v)| (k.clone(), v.json())).collect::<Map<_, _>>());
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Object(self.columns.iter().zip(r).map(|(c, v)| (c.to_string(), v.json())).collect()))
            .collect();
        json!({ "config": obj(&self.config), "rows": rows, "summary": obj(&self.summary) })
    }

    pub fn write_json<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        serde_json::to_writer_pretty(&mut out, &self.to_json())?;
        writeln!(out)
    }

    /// Summary lines for the diagnostic stream when the report itself is CSV.
    pub fn summary_text(&self) -> String {
        self.summary.iter().map(|(k, v)| format!("{k} = {}\n", v.text())).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_formatting() {
        assert_eq!(fmt_real(0.0), "0");
        assert_eq!(fmt_real(1.0), "1");
        assert_eq!(fmt_real(-2.5), "-2.5");
        assert_eq!(fmt_real(std::f64::consts::PI), "3.14159265359");
        assert_eq!(fmt_real(1e12), "1e+12");
        assert_eq!(fmt_real(123456789012.0), "123456789012");
        assert_eq!(fmt_real(1.5e-7), "1.5e-07");
        assert_eq!(fmt_real(0.000123), "0.000123");
        assert_eq!(fmt_real(0.1 + 0.2), "0.3");
    }

    #[test]
    fn csv_and_json_shapes() {
        let mut r = Report::new(&["d", "h"]);
        r.config("x", 10u64);
        r.row(vec![5u64.into(), 1.0.into()]);
        r.summary("count", 1u64);
        let mut buf = Vec::new();
        r.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "d,h\n5,1\n");
        let j = r.to_json();
        assert_eq!(j["rows"][0]["d"], 5);
        assert_eq!(j["summary"]["count"], 1);
        assert_eq!(j["config"]["x"], 10);
    }
}
