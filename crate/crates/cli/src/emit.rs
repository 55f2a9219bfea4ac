//! Row emission in CSV and JSON with a fixed float contract: every float is
//! printed with 17 significant digits, so re-parsing is bit-identical.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use anyhow::{Context, Result};

/// 17 significant digits in scientific notation; round-trips any f64 exactly.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Clone, PartialEq)]
pub enum Value {
    Int(i64),
    Float(f64),
    Str(&'static str),
    Empty,
}

pub struct Row {
    pub fields: Vec<(&'static str, Value)>,
}

pub enum OutputSink {
    Stdout(io::Stdout),
    File(BufWriter<File>),
}

impl OutputSink {
    pub fn create(path: Option<&Path>) -> Result<Self> {
        Ok(match path {
            None => Self::Stdout(io::stdout()),
            Some(p) => Self::File(BufWriter::new(
                File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
            )),
        })
    }

    fn writer(&mut self) -> &mut dyn Write {
        match self {
            Self::Stdout(w) => w,
            Self::File(w) => w,
        }
    }

    pub fn write_rows(&mut self, json: bool, rows: &[Row]) -> Result<()> {
        if json {
            self.write_json(rows)
        } else {
            self.write_csv(rows)
        }
    }

    /// CSV with LF line endings; empty cells for absent values.
    fn write_csv(&mut self, rows: &[Row]) -> Result<()> {
        let w = self.writer();
        if let Some(first) = rows.first() {
            let header: Vec<&str> = first.fields.iter().map(|(name, _)| *name).collect();
            writeln!(w, "{}", header.join(","))?;
        }
        for row in rows {
            let cells: Vec<String> = row
                .fields
                .iter()
                .map(|(_, value)| match value {
                    Value::Int(v) => v.to_string(),
                    Value::Float(v) => fmt_f64(*v),
                    Value::Str(s) => (*s).to_string(),
                    Value::Empty => String::new(),
                })
                .collect();
            writeln!(w, "{}", cells.join(","))?;
        }
        w.flush()?;
        Ok(())
    }

    /// A JSON array of flat objects; floats keep the 17-digit contract
    /// (JSON numbers accept scientific notation), absent values are null.
    fn write_json(&mut self, rows: &[Row]) -> Result<()> {
        let w = self.writer();
        writeln!(w, "[")?;
        for (i, row) in rows.iter().enumerate() {
            let fields: Vec<String> = row
                .fields
                .iter()
                .map(|(name, value)| {
                    let rendered = match value {
                        Value::Int(v) => v.to_string(),
                        Value::Float(v) => fmt_f64(*v),
                        Value::Str(s) => format!("\"{s}\""),
                        Value::Empty => "null".to_string(),
                    };
                    format!("\"{name}\": {rendered}")
                })
                .collect();
            let comma = if i + 1 < rows.len() { "," } else { "" };
            writeln!(w, "  {{{}}}{comma}", fields.join(", "))?;
        }
        writeln!(w, "]")?;
        w.flush()?;
        Ok(())
    }
}
