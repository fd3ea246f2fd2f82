//! CSV tables with a provenance comment line.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use crate::config::ExperimentConfig;
use crate::error::CliError;

/// Rows of formatted cells under a fixed header.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn extend(&mut self, rows: impl IntoIterator<Item = Vec<String>>) {
        for r in rows {
            self.push(r);
        }
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| *c == name)
    }
}

/// Shortest round-trip decimal, switching to exponent form outside
/// [1e−4, 1e15) so tiny error rates stay readable.
pub fn num(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || !x.is_finite() || (1e-4..1e15).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

pub fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

/// `# plfso <version> experiment=<name> config_sha256=<hex> seed=<seed|none>`
pub fn header_line(cfg: &ExperimentConfig) -> String {
    format!(
        "# plfso {} experiment={} config_sha256={} seed={}",
        env!("CARGO_PKG_VERSION"),
        cfg.experiment,
        cfg.hash(),
        cfg.seed.map_or("none".to_string(), |s| s.to_string())
    )
}

pub fn write_table<W: Write>(out: W, cfg: &ExperimentConfig, table: &Table) -> io::Result<()> {
    let mut out = out;
    writeln!(out, "{}", header_line(cfg))?;
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(&table.columns)?;
    for r in &table.rows {
        w.write_record(r)?;
    }
    w.flush()
}

/// Writes to the configured path, or stdout when none is set.
pub fn emit(cfg: &ExperimentConfig, table: &Table) -> Result<(), CliError> {
    match &cfg.output_path {
        Some(p) => write_file(p, cfg, table),
        None => {
            let stdout = io::stdout();
            write_table(stdout.lock(), cfg, table).map_err(|e| CliError::Io {
                path: "stdout".into(),
                message: e.to_string(),
            })
        }
    }
}

fn write_file(path: &Path, cfg: &ExperimentConfig, table: &Table) -> Result<(), CliError> {
    let io_err = |e: io::Error| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    };
    let f = File::create(path).map_err(io_err)?;
    let mut buf = BufWriter::new(f);
    write_table(&mut buf, cfg, table).map_err(io_err)?;
    buf.flush().map_err(io_err)
}
