use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use super::config::{ExperimentConfig, Format};
use crate::error::{Error, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Result of one run. Serialized as JSON lines: one object per trial, then a
/// summary object carrying the config echo and run metadata.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub config: ExperimentConfig,
    #[serde(skip)]
    pub trials: Vec<Value>,
    pub summary: Map<String, Value>,
    pub bounds: Map<String, Value>,
    pub wall_clock_seconds: f64,
    pub version: String,
    pub seed: u64,
    pub complete: bool,
}

impl ExperimentRecord {
    pub fn new(config: ExperimentConfig) -> Self {
        ExperimentRecord {
            seed: config.seed,
            config,
            trials: Vec::new(),
            summary: Map::new(),
            bounds: Map::new(),
            wall_clock_seconds: 0.0,
            version: VERSION.to_string(),
            complete: true,
        }
    }

    pub fn push_trial<T: Serialize>(&mut self, trial: T) -> Result<()> {
        self.trials.push(serde_json::to_value(trial)?);
        Ok(())
    }

    pub fn set<T: Serialize>(&mut self, key: &str, value: T) -> Result<()> {
        self.summary.insert(key.into(), serde_json::to_value(value)?);
        Ok(())
    }

    pub fn bound<T: Serialize>(&mut self, key: &str, value: T) -> Result<()> {
        self.bounds.insert(key.into(), serde_json::to_value(value)?);
        Ok(())
    }

    pub fn summary_line(&self) -> Result<String> {
        let mut obj = Map::new();
        obj.insert("summary".into(), serde_json::to_value(self)?);
        Ok(serde_json::to_string(&Value::Object(obj))?)
    }

    pub fn to_json_lines(&self) -> Result<String> {
        let mut out = String::new();
        for t in &self.trials {
            out.push_str(&serde_json::to_string(t)?);
            out.push('\n');
        }
        out.push_str(&self.summary_line()?);
        out.push('\n');
        Ok(out)
    }

    /// Trial objects as CSV. Columns come from the keys of the first trial;
    /// nested values are written as compact JSON.
    pub fn to_csv(&self) -> String {
        let Some(Value::Object(first)) = self.trials.first() else {
            return String::new();
        };
        let cols: Vec<&String> = first.keys().collect();
        let mut out = cols.iter().map(|c| c.as_str()).collect::<Vec<_>>().join(",");
        out.push('\n');
        for t in &self.trials {
            let row: Vec<String> = cols
                .iter()
                .map(|c| match t.get(c.as_str()) {
                    None | Some(Value::Null) => String::new(),
                    Some(Value::String(s)) => csv_field(s),
                    Some(v @ (Value::Array(_) | Value::Object(_))) => csv_field(&v.to_string()),
                    Some(v) => v.to_string(),
                })
                .collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    /// Parses JSON lines written by [`ExperimentRecord::to_json_lines`].
    pub fn from_json_lines(text: &str) -> Result<Self> {
        let mut lines: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
        let last = lines.pop().ok_or_else(|| Error::Parameter("empty record".into()))?;
        let mut head: Value = serde_json::from_str(last)?;
        let summary = head
            .get_mut("summary")
            .map(Value::take)
            .ok_or_else(|| Error::Parameter("record has no summary line".into()))?;
        let mut record: ExperimentRecord = serde_json::from_value(summary)?;
        record.trials = lines
            .into_iter()
            .map(serde_json::from_str)
            .collect::<std::result::Result<_, _>>()?;
        Ok(record)
    }

    /// Writes the record atomically (temp file in the target directory, then
    /// rename). CSV output also writes the summary to `<path>.summary.json`.
    pub fn write(&self, path: &Path, format: Format) -> Result<()> {
        match format {
            Format::Json => write_atomic(path, &self.to_json_lines()?),
            Format::Csv => {
                write_atomic(path, &self.to_csv())?;
                let mut side = path.as_os_str().to_owned();
                side.push(".summary.json");
                write_atomic(Path::new(&side), &(self.summary_line()? + "\n"))
            }
        }
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::Experiment;
    use serde_json::json;

    #[test]
    fn json_lines_round_trip() {
        let mut r = ExperimentRecord::new(ExperimentConfig::new(Experiment::Birthday));
        r.push_trial(json!({"trial": 0, "distinct": true})).unwrap();
        r.push_trial(json!({"trial": 1, "distinct": false})).unwrap();
        r.set("frequency", 0.5).unwrap();
        let text = r.to_json_lines().unwrap();
        assert_eq!(text.lines().count(), 3);
        let back = ExperimentRecord::from_json_lines(&text).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn csv_quotes_nested_values() {
        let mut r = ExperimentRecord::new(ExperimentConfig::new(Experiment::Hom));
        r.push_trial(json!({"a": 1, "b": [1, 2]})).unwrap();
        assert_eq!(r.to_csv(), "a,b\n1,\"[1,2]\"\n");
    }

    #[test]
    fn atomic_write() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("out.jsonl");
        let r = ExperimentRecord::new(ExperimentConfig::new(Experiment::Hom));
        r.write(&p, Format::Csv).unwrap();
        assert!(p.exists());
        assert!(dir.path().join("out.jsonl.summary.json").exists());
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 2);
    }
}
