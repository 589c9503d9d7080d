//! Versioned, deterministic record output.
//!
//! Every stream starts with the line `ga-singular/1`. In `csv` mode a column
//! header follows; in `jsonl` mode each record is one JSON object whose keys
//! appear in column order. Floats carry 17 significant digits, and
//! non-finite values are written as the tokens `inf`, `-inf` and `nan`
//! (quoted strings in JSON).

use std::io::{self, Write};

pub const SCHEMA_HEADER: &str = "ga-singular/1";

#[derive(Copy, Clone, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Jsonl,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(usize),
    Bool(bool),
    Text(String),
    Missing,
}

pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x == f64::INFINITY {
        "inf".into()
    } else if x == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{x:.16e}")
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => format_number(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => csv_field(s),
            Cell::Missing => String::new(),
        }
    }

    fn json(&self) -> String {
        match self {
            Cell::Num(x) if x.is_finite() => format_number(*x),
            Cell::Num(x) => format!("\"{}\"", format_number(*x)),
            Cell::Int(i) => i.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => serde_json::to_string(s).expect("strings serialize"),
            Cell::Missing => "null".into(),
        }
    }
}

/// Writes a header, then one line per record. Records must follow the
/// column list given to [`RecordWriter::begin`].
pub struct RecordWriter<W: Write> {
    out: W,
    format: Format,
    columns: Vec<String>,
}

impl<W: Write> RecordWriter<W> {
    pub fn begin(mut out: W, format: Format, columns: Vec<String>) -> io::Result<Self> {
        writeln!(out, "{SCHEMA_HEADER}")?;
        if format == Format::Csv {
            let names: Vec<String> = columns.iter().map(|c| csv_field(c)).collect();
            writeln!(out, "{}", names.join(","))?;
        }
        Ok(RecordWriter {
            out,
            format,
            columns,
        })
    }

    pub fn write(&mut self, cells: &[Cell]) -> io::Result<()> {
        debug_assert_eq!(cells.len(), self.columns.len());
        match self.format {
            Format::Csv => {
                let row: Vec<String> = cells.iter().map(Cell::csv).collect();
                writeln!(self.out, "{}", row.join(","))
            }
            Format::Jsonl => {
                let fields: Vec<String> = self
                    .columns
                    .iter()
                    .zip(cells)
                    .map(|(k, v)| format!("{}:{}", serde_json::to_string(k).expect("strings serialize"), v.json()))
                    .collect();
                writeln!(self.out, "{{{}}}", fields.join(","))
            }
        }
    }

    pub fn finish(mut self) -> io::Result<W> {
        self.out.flush()?;
        Ok(self.out)
    }
}
