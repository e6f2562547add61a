use std::path::{Path, PathBuf};

use diamondq::verify::Check;
use serde::Serialize;
use serde_json::{Map, Value};

/// Machine-readable outcome shared by every subcommand.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    pub config_echo: Map<String, Value>,
    pub checks: Vec<Check>,
    pub artifacts: Vec<PathBuf>,
    /// Command-specific numbers such as losses, accuracies and gate counts.
    pub results: Map<String, Value>,
    pub wall_time: f64,
}

impl RunReport {
    pub fn new(command: &str) -> Self {
        RunReport {
            command: command.into(),
            config_echo: Map::new(),
            checks: Vec::new(),
            artifacts: Vec::new(),
            results: Map::new(),
            wall_time: 0.0,
        }
    }

    pub fn check(&mut self, name: &str, max_error: f64, tol: f64) {
        self.checks.push(Check::new(name, max_error, tol));
    }

    pub fn result(&mut self, key: &str, value: impl Serialize) {
        self.results
            .insert(key.into(), serde_json::to_value(value).unwrap_or(Value::Null));
    }

    pub fn artifact(&mut self, path: &Path) {
        self.artifacts.push(path.to_path_buf());
    }

    pub fn success(&self) -> bool {
        self.checks.iter().all(|c| c.pass) && self.artifacts.iter().all(|p| p.exists())
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let tag = if c.pass { "PASS" } else { "FAIL" };
            s += &format!("{tag}  {:<48} {:.3e}\n", c.name, c.max_error);
        }
        for (k, v) in &self.results {
            s += &format!("{k}: {v}\n");
        }
        for a in &self.artifacts {
            s += &format!("wrote {}\n", a.display());
        }
        let passed = self.checks.iter().filter(|c| c.pass).count();
        s += &format!(
            "{}: {passed}/{} checks passed in {:.2}s\n",
            self.command,
            self.checks.len(),
            self.wall_time
        );
        s
    }
}
