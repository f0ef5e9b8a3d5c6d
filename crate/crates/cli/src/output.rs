use crate::CliError;
use exact_core::{rational_to_string, Rational};
use serde_json::Value;
use std::path::Path;

/// A versioned CSV table. The first line is a comment with the schema id and config hash.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    pub schema: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new(schema: &str, columns: &[&str]) -> Self {
        CsvTable { schema: schema.into(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, config_hash: &str) -> Result<String, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns).map_err(|e| CliError::Io(e.to_string()))?;
        for r in &self.rows {
            w.write_record(r).map_err(|e| CliError::Io(e.to_string()))?;
        }
        let body = String::from_utf8(w.into_inner().map_err(|e| CliError::Io(e.to_string()))?)
            .map_err(|e| CliError::Io(e.to_string()))?;
        Ok(format!("# schema={} config_sha256={}\n{}", self.schema, config_hash, body))
    }

    /// Column values by name.
    pub fn column(&self, name: &str) -> Option<Vec<&str>> {
        let k = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[k].as_str()).collect())
    }
}

/// Result of a command: a CSV table or a JSON document, plus the pass flag for the exit code.
#[derive(Debug, Clone, PartialEq)]
pub enum Artifact {
    Csv(CsvTable),
    Json(Value),
}

impl Artifact {
    pub fn render(&self, config_hash: &str) -> Result<String, CliError> {
        match self {
            Artifact::Csv(t) => t.render(config_hash),
            Artifact::Json(v) => {
                let mut s = serde_json::to_string_pretty(v).map_err(|e| CliError::Io(e.to_string()))?;
                s.push('\n');
                Ok(s)
            }
        }
    }

    pub fn extension(&self) -> &'static str {
        match self {
            Artifact::Csv(_) => "csv",
            Artifact::Json(_) => "json",
        }
    }

    /// Converts a table into a JSON document with the same content.
    pub fn into_json(self, config_hash: &str) -> Artifact {
        match self {
            Artifact::Csv(t) => {
                let rows: Vec<Value> = t
                    .rows
                    .iter()
                    .map(|r| Value::Object(t.columns.iter().cloned().zip(r.iter().map(|x| Value::String(x.clone()))).collect()))
                    .collect();
                Artifact::Json(serde_json::json!({ "schema": t.schema, "config_sha256": config_hash, "rows": rows }))
            }
            j => j,
        }
    }
}

pub fn rat_cell(r: &Rational) -> String {
    rational_to_string(r)
}

/// Shortest round-trip decimal form.
pub fn float_cell(x: f64) -> String {
    format!("{x:?}")
}

pub fn write_artifact(text: &str, path: &Path) -> Result<(), CliError> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
        }
    }
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}
