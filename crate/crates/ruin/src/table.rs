//! Curves as CSV with round-trip number formatting.

use std::io::Write;

use anyhow::Result;

/// Written in place of a number outside the function's domain.
pub const OUT_OF_DOMAIN: &str = "out_of_domain";

/// 17 significant digits, enough to round-trip any `f64`.
pub fn number(x: f64) -> String {
    if x == 0.0 {
        // keep the sign of zero out of diffs
        return format!("{:.16e}", 0.0);
    }
    format!("{x:.16e}")
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Rows,
}

impl Table {
    pub fn new(header: Vec<&'static str>) -> Self {
        Table { header, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Option<f64>>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|c| c.map_or_else(|| OUT_OF_DOMAIN.to_string(), number)))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_bytes(&self) -> Result<Vec<u8>> {
        let mut buf = Vec::new();
        self.write(&mut buf)?;
        Ok(buf)
    }
}

pub type Rows = Vec<Vec<Option<f64>>>;

/// Reads a table written by [`Table::write`]; out-of-domain cells become `None`.
pub fn read(bytes: &[u8]) -> Result<(Vec<String>, Rows)> {
    let mut r = csv::Reader::from_reader(bytes);
    let header = r.headers()?.iter().map(str::to_string).collect();
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let row = rec.iter().map(|c| if c == OUT_OF_DOMAIN { Ok(None) } else { c.parse().map(Some) });
        rows.push(row.collect::<Result<Vec<_>, _>>()?);
    }
    Ok((header, rows))
}
