//! CSV and JSON writers shared by all commands.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::config::OutputFormat;

/// A row type with a fixed column order. JSON output uses the serde field
/// names, which match the column names.
pub trait Table {
    fn columns() -> &'static [&'static str];
    fn cells(&self) -> Vec<String>;
}

/// 17 significant digits, `NaN`/`inf` spelled out.
pub fn cell(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

pub fn write_table<T, W>(rows: &[T], format: OutputFormat, writer: W) -> io::Result<()>
where
    T: Table + Serialize,
    W: Write,
{
    match format {
        OutputFormat::Csv => {
            let mut csv = csv::Writer::from_writer(writer);
            csv.write_record(T::columns())?;
            for row in rows {
                csv.write_record(row.cells())?;
            }
            csv.flush()
        }
        OutputFormat::Json => {
            let mut writer = writer;
            serde_json::to_writer_pretty(&mut writer, rows)?;
            writeln!(writer)?;
            writer.flush()
        }
    }
}

/// Writes to `path`, or to standard output when no path is given.
pub fn emit<T: Table + Serialize>(rows: &[T], format: OutputFormat, path: Option<&Path>) -> io::Result<()> {
    match path {
        Some(path) => write_table(rows, format, BufWriter::new(File::create(path)?)),
        None => write_table(rows, format, io::stdout().lock()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize)]
    struct Pair {
        a: f64,
        b: String,
    }

    impl Table for Pair {
        fn columns() -> &'static [&'static str] {
            &["a", "b"]
        }

        fn cells(&self) -> Vec<String> {
            vec![cell(self.a), self.b.clone()]
        }
    }

    #[test]
    fn csv_layout() {
        let rows = [Pair { a: 0.1, b: "x".into() }, Pair { a: f64::NAN, b: "y|z".into() }];
        let mut buf = Vec::new();
        write_table(&rows, OutputFormat::Csv, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "a,b\n1.0000000000000001e-1,x\nNaN,y|z\n");
    }

    #[test]
    fn json_mirrors_columns() {
        let rows = [Pair { a: 2.0, b: "x".into() }];
        let mut buf = Vec::new();
        write_table(&rows, OutputFormat::Json, &mut buf).unwrap();
        let value: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        let keys: Vec<_> = value[0].as_object().unwrap().keys().cloned().collect();
        assert_eq!(keys, ["a", "b"]);
    }
}
