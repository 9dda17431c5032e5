//! Tabular reports rendered as aligned text, CSV or JSON.

use std::io::{self, Write};

use clap::ValueEnum;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Debug, Clone)]
pub enum Cell {
    Int(BigInt),
    Count(u64),
    Rational(BigRational),
    /// A real value and the tolerance context it should be read in.
    Float { value: f64, context: &'static str },
    /// A high-precision decimal string and its tolerance context.
    Decimal { value: String, context: &'static str },
    Text(String),
    Bool(bool),
}

impl Cell {
    pub fn float(value: f64, context: &'static str) -> Self {
        Cell::Float { value, context }
    }

    pub fn text(s: impl Into<String>) -> Self {
        Cell::Text(s.into())
    }

    /// Decimal rendering of an exact rational.
    pub fn decimal_of(r: &BigRational) -> Self {
        Cell::float(r.to_f64().unwrap_or(f64::NAN), "decimal rendering of exact value")
    }

    fn plain(&self, digits: usize) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Count(c) => c.to_string(),
            Cell::Rational(r) => rational_string(r),
            Cell::Float { value, .. } => format_significant(*value, digits),
            Cell::Decimal { value, .. } => value.clone(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn json(&self, digits: usize) -> Value {
        match self {
            Cell::Int(i) => Value::String(i.to_string()),
            Cell::Count(c) => Value::String(c.to_string()),
            Cell::Rational(r) => Value::String(rational_string(r)),
            Cell::Float { value, context } => {
                let rounded: f64 = format_significant(*value, digits).parse().unwrap_or(*value);
                let v = serde_json::Number::from_f64(rounded).map_or(Value::Null, Value::Number);
                json!({ "value": v, "context": context })
            }
            Cell::Decimal { value, context } => json!({ "value": value, "context": context }),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Bool(b) => Value::Bool(*b),
        }
    }
}

/// `a/b` with the denominator always present.
pub fn rational_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// `value` rounded to `digits` significant digits, trailing zeros removed.
pub fn format_significant(value: f64, digits: usize) -> String {
    if !value.is_finite() {
        return value.to_string();
    }
    if value.is_zero() {
        return "0".to_string();
    }
    let digits = digits.max(1);
    let magnitude = value.abs().log10().floor() as i32;
    if magnitude < -5 || magnitude >= digits as i32 {
        let s = format!("{:.*e}", digits - 1, value);
        let (mant, exp) = s.split_once('e').expect("exponent form");
        return format!("{}e{}", trim_zeros(mant), exp);
    }
    let decimals = (digits as i32 - 1 - magnitude).max(0) as usize;
    trim_zeros(&format!("{value:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub command: &'static str,
    pub meta: Vec<(String, String)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Report {
    pub fn new(command: &'static str, columns: Vec<&'static str>) -> Self {
        Report { command, meta: Vec::new(), columns, rows: Vec::new() }
    }

    pub fn meta(&mut self, key: &str, value: impl ToString) {
        self.meta.push((key.to_string(), value.to_string()));
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format, digits: usize, out: &mut impl Write) -> io::Result<()> {
        match format {
            Format::Table => self.render_table(digits, out),
            Format::Csv => self.render_csv(digits, out),
            Format::Json => self.render_json(digits, out),
        }
    }

    fn render_table(&self, digits: usize, out: &mut impl Write) -> io::Result<()> {
        for (k, v) in &self.meta {
            writeln!(out, "# {k}: {v}")?;
        }
        let cells: Vec<Vec<String>> =
            self.rows.iter().map(|r| r.iter().map(|c| c.plain(digits)).collect()).collect();
        let widths: Vec<usize> = self
            .columns
            .iter()
            .enumerate()
            .map(|(i, h)| cells.iter().map(|r| r[i].len()).chain([h.len()]).max().unwrap_or(0))
            .collect();
        let line = |fields: Vec<&str>| {
            fields
                .iter()
                .zip(&widths)
                .map(|(f, w)| format!("{f:>w$}"))
                .collect::<Vec<_>>()
                .join("  ")
        };
        writeln!(out, "{}", line(self.columns.clone()))?;
        for row in &cells {
            writeln!(out, "{}", line(row.iter().map(String::as_str).collect()))?;
        }
        Ok(())
    }

    fn render_csv(&self, digits: usize, out: &mut impl Write) -> io::Result<()> {
        let mut w = csv::WriterBuilder::new().quote_style(csv::QuoteStyle::Necessary).from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|c| c.plain(digits)))?;
        }
        w.flush()
    }

    fn render_json(&self, digits: usize, out: &mut impl Write) -> io::Result<()> {
        let meta: Map<String, Value> =
            self.meta.iter().map(|(k, v)| (k.clone(), Value::String(v.clone()))).collect();
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                let obj: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(r)
                    .map(|(c, v)| (c.to_string(), v.json(digits)))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        let doc = json!({ "command": self.command, "meta": meta, "rows": rows });
        serde_json::to_writer_pretty(&mut *out, &doc)?;
        writeln!(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(format_significant(0.125, 12), "0.125");
        assert_eq!(format_significant(0.49999999999999994, 12), "0.5");
        assert_eq!(format_significant(1.0 / 3.0, 4), "0.3333");
        assert_eq!(format_significant(123456.0, 3), "1.23e5");
        assert_eq!(format_significant(123456.0, 12), "123456");
        assert_eq!(format_significant(2.5e-9, 12), "2.5e-9");
        assert_eq!(format_significant(0.0, 12), "0");
    }

    #[test]
    fn renders_all_formats() {
        let mut r = Report::new("demo", vec!["n", "p", "x"]);
        r.meta("note", "hi");
        r.push(vec![
            Cell::Count(6),
            Cell::Rational(BigRational::new(5.into(), 64.into())),
            Cell::float(0.078125, "decimal"),
        ]);
        let mut buf = Vec::new();
        r.render(Format::Csv, 12, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "n,p,x\n6,5/64,0.078125\n");

        let mut buf = Vec::new();
        r.render(Format::Json, 12, &mut buf).unwrap();
        let v: Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(v["rows"][0]["p"], "5/64");
        assert_eq!(v["rows"][0]["x"]["value"], 0.078125);
        assert_eq!(v["meta"]["note"], "hi");

        let mut buf = Vec::new();
        r.render(Format::Table, 12, &mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert!(s.contains("5/64"));
        assert!(s.starts_with("# note: hi\n"));
    }
}
