use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::json;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Provenance written ahead of every result: `#` lines in CSV, `meta` in JSON.
#[derive(Debug, Clone, Serialize)]
pub struct Meta {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub seeds: Vec<u64>,
}

impl Meta {
    pub fn new(command: String, seeds: Vec<u64>) -> Self {
        Meta { tool: "kdist", version: env!("CARGO_PKG_VERSION"), command, seeds }
    }

    fn write_csv_header(&self, w: &mut dyn Write) -> io::Result<()> {
        writeln!(w, "# tool={} {}", self.tool, self.version)?;
        writeln!(w, "# command={}", self.command)?;
        let seeds: Vec<String> = self.seeds.iter().map(u64::to_string).collect();
        writeln!(w, "# seeds={}", seeds.join(","))
    }
}

pub struct Sink {
    out: Box<dyn Write>,
}

impl Sink {
    pub fn open(path: Option<&PathBuf>) -> io::Result<Self> {
        let out: Box<dyn Write> = match path {
            Some(p) => Box::new(BufWriter::new(File::create(p)?)),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        };
        Ok(Sink { out })
    }

    /// CSV body produced by `body` after the metadata lines.
    pub fn csv<F>(mut self, meta: &Meta, body: F) -> kdist::Result<()>
    where
        F: FnOnce(&mut dyn Write) -> kdist::Result<()>,
    {
        meta.write_csv_header(&mut self.out)?;
        body(&mut self.out)?;
        self.out.flush()?;
        Ok(())
    }

    pub fn json<T: Serialize>(mut self, meta: &Meta, data: &T) -> kdist::Result<()> {
        let doc = json!({ "meta": meta, "data": data });
        serde_json::to_writer_pretty(&mut self.out, &doc)?;
        writeln!(self.out)?;
        self.out.flush()?;
        Ok(())
    }
}

/// Fixed 17-significant-digit scientific notation used in every CSV cell.
pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn opt_num(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}
