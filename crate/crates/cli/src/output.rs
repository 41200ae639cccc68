use std::io::Write;
use std::path::Path;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::Value;

use linsetlab::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Serialize)]
pub struct Report {
    pub command: String,
    pub parameters: Value,
    pub tower: String,
    pub seed: Option<u64>,
    pub results: Value,
    pub wall_time_s: f64,
}

pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

fn render(report: &Report, table: &Table, format: Format) -> Result<Vec<u8>, Error> {
    match format {
        Format::Json => {
            let mut v = serde_json::to_vec_pretty(report).map_err(|e| Error::Io(e.to_string()))?;
            v.push(b'\n');
            Ok(v)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let io = |e: csv::Error| Error::Io(e.to_string());
            w.write_record(&table.header).map_err(io)?;
            for r in &table.rows {
                w.write_record(r).map_err(io)?;
            }
            w.into_inner().map_err(|e| Error::Io(e.to_string()))
        }
    }
}

pub fn write(report: &Report, table: &Table, format: Format, out: Option<&Path>) -> Result<(), Error> {
    let bytes = render(report, table, format)?;
    match out {
        Some(path) => std::fs::write(path, bytes)?,
        None => std::io::stdout().lock().write_all(&bytes)?,
    }
    Ok(())
}
