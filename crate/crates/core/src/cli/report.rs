use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;

use super::config::{Grids, RunConfig, Tolerances};
use crate::classify::BifurcationEvent;
use crate::envelope::write_atomic;
use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Arithmetic {
    Exact,
    Floating,
    /// Exact where parameters are rational, floating elsewhere.
    Mixed,
}

/// Machine-readable run summary. Contains no timings or absolute paths, so
/// identical inputs give byte-identical reports.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub config: RunConfig,
    pub tolerances: Tolerances,
    pub grids: Grids,
    pub arithmetic: Arithmetic,
    pub events: Vec<BifurcationEvent>,
    pub residuals: BTreeMap<String, f64>,
    pub results: serde_json::Value,
    pub outputs: Vec<String>,
}

impl Report {
    pub fn new(command: &str, config: &RunConfig, arithmetic: Arithmetic) -> Self {
        Self {
            command: command.to_string(),
            config: config.clone(),
            tolerances: config.tolerances,
            grids: config.grids,
            arithmetic,
            events: Vec::new(),
            residuals: BTreeMap::new(),
            results: serde_json::Value::Null,
            outputs: Vec::new(),
        }
    }

    pub fn residual(&mut self, name: &str, value: f64) {
        self.residuals.insert(name.to_string(), value);
    }

    pub fn output(&mut self, path: &Path) {
        self.outputs.push(path.display().to_string());
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report is serializable");
        s.push('\n');
        s
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_atomic(path, self.to_json().as_bytes())
    }
}
