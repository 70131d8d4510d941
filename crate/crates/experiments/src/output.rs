//! Result tables and the run manifest.
//!
//! Every results file is self-describing and deterministic: a schema-version
//! header, the code version, the RNG scheme identifier, and the full
//! configuration are embedded as comment lines above the comma-separated
//! data, and nothing time- or host-dependent is ever written. Reruns with
//! the same (config, seed) must produce byte-identical files.

use std::path::Path;

use serde::Serialize;

use crate::config::StudyConfig;
use phi4_core::error::{Error, Result};
use phi4_core::stoch::RNG_SCHEME;

/// Code version stamped into every output.
pub const CODE_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Canonical float formatting: shortest representation that round-trips,
/// identical across runs and thread counts.
pub fn fmt_f(v: f64) -> String {
    format!("{v}")
}

/// One comma-separated result table with a stable schema identifier.
#[derive(Debug, Clone)]
pub struct Table {
    /// File stem for on-disk output, e.g. `converge-summary`.
    pub name: String,
    /// Schema identifier, e.g. `phi4.converge.summary.v1`.
    pub schema: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(
        name: impl Into<String>,
        schema: impl Into<String>,
        columns: &[&str],
    ) -> Table {
        Table {
            name: name.into(),
            schema: schema.into(),
            columns: columns.iter().map(|s| s.to_string()).collect(),
        rows: Vec::new(),
        }
    }

    /// Append one row; the width must match the header.
    pub fn push(&mut self, cells: Vec<String>) {
        assert_eq!(
            cells.len(),
            self.columns.len(),
            "row width mismatch in table {}",
            self.name
        );
        self.rows.push(cells);
    }

    /// Render with provenance headers.
    pub fn render(&self, config_json: &str) -> String {
        let mut out = String::new();
        out.push_str(&format!("# schema={}\n", self.schema));
        out.push_str(&format!("# code={CODE_VERSION}\n"));
        out.push_str(&format!("# rng={RNG_SCHEME}\n"));
        out.push_str(&format!("# config={config_json}\n"));
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// Parsed form of a rendered table: schema, column names, and rows.
pub fn parse_table(text: &str) -> Result<(String, Vec<String>, Vec<Vec<String>>)> {
    let mut schema = None;
    let mut columns: Option<Vec<String>> = None;
    let mut rows = Vec::new();
    for line in text.lines() {
        if let Some(rest) = line.strip_prefix("# schema=") {
            schema = Some(rest.to_string());
            continue;
        }
        if line.starts_with('#') || line.is_empty() {
            continue;
        }
        let cells: Vec<String> = line.split(',').map(|s| s.to_string()).collect();
        match &columns {
            None => columns = Some(cells),
            Some(c) => {
                if cells.len() != c.len() {
                    return Err(Error::InvalidData(format!(
                        "table row width {} does not match header width {}",
                        cells.len(),
                        c.len()
                    )));
                }
                rows.push(cells);
            }
        }
    }
    match (schema, columns) {
        (Some(s), Some(c)) => Ok((s, c, rows)),
        _ => Err(Error::InvalidData(
            "table is missing a schema header or a column row".into(),
        )),
    }
}

/// Run manifest: everything needed to reproduce and audit a study run.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub schema: &'static str,
    /// Subcommand that produced the run.
    pub command: String,
    pub config: StudyConfig,
    pub code_version: &'static str,
    pub rng_scheme: &'static str,
    /// Whether the full strict exponent block holds.
    pub analysis_strict: bool,
    /// Violated strict inequalities, empty when `analysis_strict`.
    pub analysis_violations: Vec<String>,
}

impl RunManifest {
    pub fn new(command: &str, config: &StudyConfig) -> RunManifest {
        let violations = config.analysis().strict_violations();
        RunManifest {
            schema: "phi4.manifest.v1",
            command: command.to_string(),
            config: config.clone(),
            code_version: CODE_VERSION,
            rng_scheme: RNG_SCHEME,
            analysis_strict: violations.is_empty(),
            analysis_violations: violations,
        }
    }
}

/// A finished study: its manifest plus result tables, ready to print or
/// write.
#[derive(Debug, Clone)]
pub struct StudyOutput {
    pub manifest: RunManifest,
    pub tables: Vec<Table>,
    /// Human-readable summary lines, printed to stdout in order.
    pub summary: Vec<String>,
}

impl StudyOutput {
    pub fn new(command: &str, config: &StudyConfig) -> StudyOutput {
        StudyOutput {
            manifest: RunManifest::new(command, config),
            tables: Vec::new(),
            summary: Vec::new(),
        }
    }

    fn config_json(&self) -> Result<String> {
        serde_json::to_string(&self.manifest.config)
            .map_err(|e| Error::InvalidData(format!("config serialization failed: {e}")))
    }

    /// Write the manifest and one CSV file per table into `dir`.
    pub fn write_to(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        let manifest = serde_json::to_string_pretty(&self.manifest)
            .map_err(|e| Error::InvalidData(format!("manifest serialization failed: {e}")))?;
        std::fs::write(dir.join("manifest.json"), manifest + "\n")?;
        let cfg = self.config_json()?;
        for t in &self.tables {
            std::fs::write(dir.join(format!("{}.csv", t.name)), t.render(&cfg))?;
        }
        Ok(())
    }

    /// Render every table to one stdout-friendly string.
    pub fn render_tables(&self) -> Result<String> {
        let cfg = self.config_json()?;
        Ok(self
            .tables
            .iter()
            .map(|t| t.render(&cfg))
            .collect::<Vec<_>>()
            .join("\n"))
    }
}
