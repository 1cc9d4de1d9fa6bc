use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Hom,
    Distribution,
    Flatness,
    Moments,
    Fingerprint,
    Birthday,
    Discriminate,
    Indistinguishability,
    GaussianSim,
    Bounds,
}

impl Experiment {
    pub const ALL: [Experiment; 10] = [
        Experiment::Hom,
        Experiment::Distribution,
        Experiment::Flatness,
        Experiment::Moments,
        Experiment::Fingerprint,
        Experiment::Birthday,
        Experiment::Discriminate,
        Experiment::Indistinguishability,
        Experiment::GaussianSim,
        Experiment::Bounds,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Hom => "hom",
            Experiment::Distribution => "distribution",
            Experiment::Flatness => "flatness",
            Experiment::Moments => "moments",
            Experiment::Fingerprint => "fingerprint",
            Experiment::Birthday => "birthday",
            Experiment::Discriminate => "discriminate",
            Experiment::Indistinguishability => "indistinguishability",
            Experiment::GaussianSim => "gaussian-sim",
            Experiment::Bounds => "bounds",
        }
    }
}

impl std::str::FromStr for Experiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| Error::Config {
                message: format!("unknown experiment {s:?}"),
                keys: vec!["experiment".into()],
            })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Everything needed to reproduce one run. Unset parameters fall back to
/// per-experiment defaults; the record echoes the resolved values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modes: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub photons: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub space_size: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub restricted: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cap: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget_seconds: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unitary: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub circuit: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
}

pub const CONFIG_KEYS: &[&str] = &[
    "experiment",
    "seed",
    "modes",
    "photons",
    "trials",
    "samples",
    "epsilon",
    "alpha",
    "radius",
    "sigma",
    "xi",
    "eta",
    "threshold",
    "space_size",
    "restricted",
    "cap",
    "budget_seconds",
    "unitary",
    "circuit",
    "out",
    "format",
];

fn config_error(message: impl Into<String>, keys: &[&str]) -> Error {
    Error::Config {
        message: message.into(),
        keys: keys.iter().map(|k| k.to_string()).collect(),
    }
}

impl ExperimentConfig {
    pub fn new(experiment: Experiment) -> Self {
        ExperimentConfig {
            experiment,
            seed: 0,
            modes: None,
            photons: None,
            trials: None,
            samples: None,
            epsilon: None,
            alpha: None,
            radius: None,
            sigma: None,
            xi: None,
            eta: None,
            threshold: None,
            space_size: None,
            restricted: None,
            cap: None,
            budget_seconds: None,
            unitary: None,
            circuit: None,
            out: None,
            format: Format::Json,
        }
    }

    /// Builds a config from a JSON object, naming every unknown key.
    pub fn from_value(value: serde_json::Value) -> Result<Self> {
        let obj = value
            .as_object()
            .ok_or_else(|| config_error("configuration must be a key-value table", &[]))?;
        let unknown: Vec<&str> = obj
            .keys()
            .map(String::as_str)
            .filter(|k| !CONFIG_KEYS.contains(k))
            .collect();
        if !unknown.is_empty() {
            return Err(config_error(format!("unknown keys: {}", unknown.join(", ")), &unknown));
        }
        let config: ExperimentConfig = serde_json::from_value(value.clone()).map_err(|e| {
            // Re-check keys one at a time to name the ones with bad types.
            let bad: Vec<&str> = obj
                .iter()
                .filter(|(k, v)| {
                    let mut probe = serde_json::Map::new();
                    probe.insert("experiment".into(), serde_json::json!("hom"));
                    probe.insert(k.to_string(), (*v).clone());
                    serde_json::from_value::<ExperimentConfig>(probe.into()).is_err()
                })
                .map(|(k, _)| k.as_str())
                .collect();
            config_error(e.to_string(), &bad)
        })?;
        config.validate()?;
        Ok(config)
    }

    /// Reads a flat TOML file, or JSON if the name ends in `.json`.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_value(parse_table(&text, path.extension().is_some_and(|e| e == "json"))?)
    }

    /// Checks documented parameter ranges, reporting every offending key.
    pub fn validate(&self) -> Result<()> {
        let mut bad = Vec::new();
        let positive = |x: Option<f64>| x.is_none_or(|v| v > 0.0 && v.is_finite());
        if self.modes == Some(0) {
            bad.push("modes");
        }
        if self.photons == Some(0) {
            bad.push("photons");
        }
        if let (Some(m), Some(n)) = (self.modes, self.photons) {
            if n > m && self.experiment != Experiment::Bounds {
                bad.push("photons");
            }
        }
        if self.photons.is_some_and(|n| n > crate::linalg::RYSER_LIMIT) {
            bad.push("photons");
        }
        if self.trials == Some(0) {
            bad.push("trials");
        }
        if self.space_size == Some(0) {
            bad.push("space_size");
        }
        if !positive(self.epsilon) || self.epsilon.is_some_and(|e| e > 1.0) {
            bad.push("epsilon");
        }
        if !positive(self.alpha) || self.alpha.is_some_and(|a| a >= 1.0) {
            bad.push("alpha");
        }
        if !positive(self.radius) {
            bad.push("radius");
        }
        if !positive(self.sigma) {
            bad.push("sigma");
        }
        if !positive(self.xi) {
            bad.push("xi");
        }
        if self.eta.is_some_and(|e| !(0.0..=1.0).contains(&e)) {
            bad.push("eta");
        }
        if !positive(self.threshold) || self.threshold.is_some_and(|t| t > 1.0) {
            bad.push("threshold");
        }
        if self.budget_seconds.is_some_and(|b| !(b >= 0.0) || !b.is_finite()) {
            bad.push("budget_seconds");
        }
        if self.cap == Some(0) {
            bad.push("cap");
        }
        bad.dedup();
        if bad.is_empty() {
            Ok(())
        } else {
            Err(config_error(format!("out-of-range values for {}", bad.join(", ")), &bad))
        }
    }

    /// Applies `overrides` on top of `self`; set keys in `overrides` win.
    pub fn merged(&self, overrides: serde_json::Map<String, serde_json::Value>) -> Result<Self> {
        let mut base = serde_json::to_value(self)?;
        let obj = base.as_object_mut().expect("config serializes to an object");
        for (k, v) in overrides {
            obj.insert(k, v);
        }
        Self::from_value(base)
    }
}

/// Parses a flat key-value table from TOML or JSON text.
pub fn parse_table(text: &str, json: bool) -> Result<serde_json::Value> {
    if json {
        return Ok(serde_json::from_str(text)?);
    }
    let table: toml::Table = toml::from_str(text).map_err(|e| config_error(e.to_string(), &[]))?;
    Ok(serde_json::to_value(table)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn unknown_keys_are_listed() {
        let err = ExperimentConfig::from_value(json!({"experiment": "hom", "mode": 3, "colour": "red"})).unwrap_err();
        match err {
            Error::Config { keys, .. } => assert_eq!(keys, vec!["colour".to_string(), "mode".to_string()]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn bad_types_are_listed() {
        let err = ExperimentConfig::from_value(json!({"experiment": "hom", "seed": "abc", "modes": 2})).unwrap_err();
        match err {
            Error::Config { keys, .. } => assert_eq!(keys, vec!["seed".to_string()]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn ranges() {
        let err = ExperimentConfig::from_value(json!({"experiment": "flatness", "modes": 3, "photons": 4, "alpha": 2.0}))
            .unwrap_err();
        match err {
            Error::Config { keys, .. } => assert_eq!(keys, vec!["photons".to_string(), "alpha".to_string()]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn toml_and_overrides() {
        let v = parse_table("experiment = \"birthday\"\nseed = 7\nsamples = 20\n", false).unwrap();
        let c = ExperimentConfig::from_value(v).unwrap();
        assert_eq!(c.seed, 7);
        let mut o = serde_json::Map::new();
        o.insert("samples".into(), json!(30));
        let c2 = c.merged(o).unwrap();
        assert_eq!(c2.samples, Some(30));
        assert_eq!(c2.seed, 7);
    }

    #[test]
    fn experiment_names_round_trip() {
        for e in Experiment::ALL {
            assert_eq!(e.name().parse::<Experiment>().unwrap(), e);
            assert_eq!(serde_json::to_value(e).unwrap(), json!(e.name()));
        }
    }
}
