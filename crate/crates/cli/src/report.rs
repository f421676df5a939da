//! Versioned JSON reports. Identical configs give byte-identical report files;
//! the wall-clock timestamp lives in a `.meta.json` sidecar.

use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use congest_cuts::sim::RoundReport;
use serde::Serialize;
use serde_json::{json, Value};

pub const SCHEMA: &str = "ccut-report/v1";

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Check {
    Agree,
    Disagree { expected: Value, got: Value },
    /// Above the oracle caps, or the verb has no oracle.
    Unchecked,
}

impl Check {
    pub fn compare(expected: Value, got: Value) -> Self {
        if expected == got {
            Check::Agree
        } else {
            Check::Disagree { expected, got }
        }
    }

    pub fn status(&self) -> &'static str {
        match self {
            Check::Agree => "agree",
            Check::Disagree { .. } => "disagree",
            Check::Unchecked => "unchecked",
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub version: &'static str,
    pub verb: &'static str,
    pub config: Value,
    pub seeds: Value,
    pub check: Check,
    pub result: Value,
    pub transcript: Option<RoundReport>,
    /// `(extension, contents)` written next to the report.
    #[serde(skip)]
    pub extra_files: Vec<(String, String)>,
}

impl Report {
    pub fn new(verb: &'static str, config: Value, seed: u64) -> Self {
        let gen_seed = config.pointer("/common/gen_seed").cloned().unwrap_or(Value::Null);
        Report {
            schema: SCHEMA,
            version: env!("CARGO_PKG_VERSION"),
            verb,
            config,
            seeds: json!({ "master": seed, "generator": gen_seed }),
            check: Check::Unchecked,
            result: Value::Null,
            transcript: None,
            extra_files: Vec::new(),
        }
    }

    /// Writes `<name>.json`, the extra files, and the timestamp sidecar; returns the report path.
    pub fn write(&self, dir: &Path, name: &str) -> Result<PathBuf> {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let path = dir.join(format!("{name}.json"));
        std::fs::write(&path, serde_json::to_string_pretty(self)? + "\n")?;
        for (ext, body) in &self.extra_files {
            std::fs::write(dir.join(format!("{name}.{ext}")), body)?;
        }
        let stamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        std::fs::write(dir.join(format!("{name}.meta.json")), json!({ "unix_time": stamp }).to_string() + "\n")?;
        Ok(path)
    }
}
