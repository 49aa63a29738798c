//! Result tables and their CSV/JSON encodings.

use std::io::Write;

use serde_json::{json, Map, Value};

use crate::config::Format;
use crate::error::Result;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Text(String),
    Bool(bool),
}

impl Cell {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Float(x) => Some(*x),
            Cell::Int(i) => Some(*i as f64),
            _ => None,
        }
    }

    pub fn text(&self) -> String {
        match self {
            Cell::Float(x) => format_float(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Float(x) => format_float(*x).parse::<f64>().ok().filter(|v| v.is_finite()).map_or(Value::Null, |v| json!(v)),
            Cell::Int(i) => json!(i),
            Cell::Text(s) => json!(s),
            Cell::Bool(b) => json!(b),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<i64> for Cell {
    fn from(i: i64) -> Self {
        Cell::Int(i)
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Cell::Int(i as i64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

/// `%.12g`: twelve significant digits, trailing zeros trimmed.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.11e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..12).contains(&exp) {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{m}e{sign}{:02}", exp.abs());
    }
    let decimals = (11 - exp).max(0) as usize;
    let fixed = format!("{:.*}", decimals, x);
    let fixed = trim_zeros(&fixed);
    if fixed == "-0" { "0".into() } else { fixed }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

/// A result table with a metadata block, named columns and a footer.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub metadata: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub footer: Vec<(String, Cell)>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table { columns: columns.iter().map(|c| c.to_string()).collect(), ..Table::default() }
    }

    pub fn meta(&mut self, key: &str, value: impl ToString) {
        self.metadata.push((key.to_string(), value.to_string()));
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn foot(&mut self, key: &str, value: impl Into<Cell>) {
        self.footer.push((key.to_string(), value.into()));
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Numeric values of a column; non-numeric cells are skipped.
    pub fn column(&self, name: &str) -> Vec<f64> {
        match self.column_index(name) {
            Some(i) => self.rows.iter().filter_map(|r| r[i].as_f64()).collect(),
            None => Vec::new(),
        }
    }

    pub fn footer_value(&self, key: &str) -> Option<&Cell> {
        self.footer.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn metadata_value(&self, key: &str) -> Option<&str> {
        self.metadata.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> Result<()> {
        match format {
            Format::Csv => self.write_csv(out),
            Format::Json => self.write_json(out),
        }
    }

    pub fn render(&self, format: Format) -> Result<String> {
        let mut buf = Vec::new();
        self.write(format, &mut buf)?;
        Ok(String::from_utf8(buf).expect("tables are UTF-8"))
    }

    fn write_csv(&self, out: &mut dyn Write) -> Result<()> {
        for (k, v) in &self.metadata {
            writeln!(out, "# {k}: {v}")?;
        }
        {
            let mut w = csv::WriterBuilder::new().from_writer(&mut *out);
            w.write_record(&self.columns).map_err(csv_error)?;
            for row in &self.rows {
                w.write_record(row.iter().map(Cell::text)).map_err(csv_error)?;
            }
            w.flush()?;
        }
        for (k, v) in &self.footer {
            writeln!(out, "# {k}: {}", v.text())?;
        }
        Ok(())
    }

    fn write_json(&self, out: &mut dyn Write) -> Result<()> {
        let metadata: Map<String, Value> = self.metadata.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
        let footer: Map<String, Value> = self.footer.iter().map(|(k, v)| (k.clone(), v.json())).collect();
        let rows: Vec<Value> = self.rows.iter().map(|r| Value::Array(r.iter().map(Cell::json).collect())).collect();
        let doc = json!({
            "metadata": metadata,
            "columns": self.columns,
            "rows": rows,
            "footer": footer,
        });
        serde_json::to_writer_pretty(&mut *out, &doc).map_err(|e| std::io::Error::other(e.to_string()))?;
        writeln!(out)?;
        Ok(())
    }
}

fn csv_error(e: csv::Error) -> crate::error::CliError {
    std::io::Error::other(e.to_string()).into()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(format_float(0.1 + 0.2), "0.3");
        assert_eq!(format_float(9.0), "9");
        assert_eq!(format_float(std::f64::consts::PI), "3.14159265359");
        assert_eq!(format_float(1.0 / 3.0 * 1e-7), "3.33333333333e-08");
        assert_eq!(format_float(-2.5e13), "-2.5e+13");
        assert_eq!(format_float(123456789012.4), "123456789012");
        assert_eq!(format_float(-1e-300 * 1e-300), "0");
    }

    #[test]
    fn csv_quotes_fields_with_commas() {
        let mut t = Table::new(&["a", "b"]);
        t.meta("system", "amps:1,0;0,1");
        t.push(vec![Cell::from("x,y"), Cell::from(1.5)]);
        t.foot("normalization", 1.0);
        let s = t.render(Format::Csv).unwrap();
        assert_eq!(s, "# system: amps:1,0;0,1\na,b\n\"x,y\",1.5\n# normalization: 1\n");
    }
}
