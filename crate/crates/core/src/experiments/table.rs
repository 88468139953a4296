//! CSV tables produced by the experiments and read back for plotting.

use crate::error::{Error, Result};
use crate::model::SolutionField;

const MAX_ROWS: usize = 1_000_000;
const MAX_COLUMNS: usize = 256;

/// A rectangular table of text cells with a header row.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(headers: &[&str]) -> Self {
        Table { headers: headers.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    pub fn column_index(&self, name: &str) -> Result<usize> {
        self.headers.iter().position(|h| h == name).ok_or_else(|| Error::Csv(format!("no column '{name}'")))
    }

    /// A column parsed as numbers.
    pub fn numeric(&self, name: &str) -> Result<Vec<f64>> {
        let i = self.column_index(name)?;
        self.rows
            .iter()
            .enumerate()
            .map(|(r, row)| row[i].trim().parse::<f64>().map_err(|_| Error::Csv(format!("row {}: '{}' in column '{name}' is not a number", r + 1, row[i]))))
            .collect()
    }

    pub fn text(&self, name: &str) -> Result<Vec<&str>> {
        let i = self.column_index(name)?;
        Ok(self.rows.iter().map(|row| row[i].as_str()).collect())
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.headers).map_err(|e| Error::Csv(e.to_string()))?;
        for row in &self.rows {
            w.write_record(row).map_err(|e| Error::Csv(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Csv(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Csv(e.to_string()))
    }
}

/// Parses a CSV table with a header row; every record must have the header's width.
pub fn parse_plot_csv(text: &str) -> Result<Table> {
    let mut r = csv::ReaderBuilder::new().has_headers(true).flexible(false).comment(Some(b'#')).from_reader(text.as_bytes());
    let headers: Vec<String> = r.headers().map_err(|e| Error::Csv(e.to_string()))?.iter().map(|s| s.trim().to_string()).collect();
    if headers.is_empty() || headers.iter().all(|h| h.is_empty()) {
        return Err(Error::Csv("missing header row".into()));
    }
    if headers.len() > MAX_COLUMNS {
        return Err(Error::Csv(format!("more than {MAX_COLUMNS} columns")));
    }
    for (i, h) in headers.iter().enumerate() {
        if headers[..i].contains(h) {
            return Err(Error::Csv(format!("duplicate column '{h}'")));
        }
    }
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| Error::Csv(e.to_string()))?;
        if rows.len() == MAX_ROWS {
            return Err(Error::Csv(format!("more than {MAX_ROWS} rows")));
        }
        rows.push(rec.iter().map(|s| s.to_string()).collect());
    }
    Ok(Table { headers, rows })
}

fn num(v: f64) -> String {
    format!("{v:.17e}")
}

/// One block of rows `t, n, x, re, im` per field.
pub fn fields_table(fields: &[SolutionField]) -> Table {
    let mut t = Table::new(&["t", "n", "x", "re", "im"]);
    for f in fields {
        for (n, v) in f.nodes().zip(&f.values) {
            t.push(vec![num(f.t), n.to_string(), num(n as f64 * f.h), num(v.re), num(v.im)]);
        }
    }
    t
}

/// Formats a value for CSV output with full precision.
pub fn format_number(v: f64) -> String {
    num(v)
}
