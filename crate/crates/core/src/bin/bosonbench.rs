use std::path::PathBuf;
use std::process::ExitCode;

use bosonbench::harness::{self, Experiment, ExperimentConfig, ExperimentRecord, Format};
use bosonbench::Error;
use clap::Parser;
use serde_json::{json, Map, Value};

/// Run a named experiment, or `replay RECORD` to re-run a record's config echo.
#[derive(Parser, Debug)]
#[command(name = "bosonbench", version)]
struct Cli {
    /// hom, distribution, flatness, moments, fingerprint, birthday,
    /// discriminate, indistinguishability, gaussian-sim, bounds, or replay
    experiment: String,
    /// Record to replay (with `replay`)
    record: Option<PathBuf>,
    /// Flat TOML (or .json) config file; flags override it
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    modes: Option<usize>,
    #[arg(long)]
    photons: Option<usize>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    samples: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_parser = ["json", "csv"])]
    format: Option<String>,
    #[arg(long)]
    radius: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    threshold: Option<f64>,
    #[arg(long)]
    budget_seconds: Option<f64>,
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long)]
    xi: Option<f64>,
    #[arg(long)]
    eta: Option<f64>,
    /// Sample-space size for `birthday`
    #[arg(long)]
    space_size: Option<u64>,
    /// Restrict to the collision-free space
    #[arg(long)]
    restricted: Option<bool>,
    #[arg(long)]
    cap: Option<usize>,
    /// Unitary matrix file (JSON) instead of a Haar draw
    #[arg(long)]
    unitary: Option<PathBuf>,
    /// Circuit file for `gaussian-sim`
    #[arg(long)]
    circuit: Option<PathBuf>,
}

impl Cli {
    fn overrides(&self) -> Map<String, Value> {
        let mut m = Map::new();
        let mut put = |k: &str, v: Option<Value>| {
            if let Some(v) = v {
                m.insert(k.into(), v);
            }
        };
        put("seed", self.seed.map(Value::from));
        put("modes", self.modes.map(Value::from));
        put("photons", self.photons.map(Value::from));
        put("trials", self.trials.map(Value::from));
        put("samples", self.samples.map(Value::from));
        put("out", self.out.as_ref().map(|p| json!(p)));
        put("format", self.format.as_ref().map(|f| json!(f)));
        put("radius", self.radius.map(Value::from));
        put("alpha", self.alpha.map(Value::from));
        put("epsilon", self.epsilon.map(Value::from));
        put("threshold", self.threshold.map(Value::from));
        put("budget_seconds", self.budget_seconds.map(Value::from));
        put("sigma", self.sigma.map(Value::from));
        put("xi", self.xi.map(Value::from));
        put("eta", self.eta.map(Value::from));
        put("space_size", self.space_size.map(Value::from));
        put("restricted", self.restricted.map(Value::from));
        put("cap", self.cap.map(Value::from));
        put("unitary", self.unitary.as_ref().map(|p| json!(p)));
        put("circuit", self.circuit.as_ref().map(|p| json!(p)));
        m
    }

    fn resolve(&self) -> Result<ExperimentConfig, Error> {
        let base = if self.experiment == "replay" {
            let path = self.record.as_ref().ok_or_else(|| Error::Config {
                message: "replay needs a record path".into(),
                keys: vec!["record".into()],
            })?;
            let mut config = ExperimentRecord::from_json_lines(&std::fs::read_to_string(path)?)?.config;
            config.out = None;
            config
        } else {
            let experiment: Experiment = self.experiment.parse()?;
            let mut table = match &self.config {
                Some(path) => {
                    let text = std::fs::read_to_string(path)?;
                    harness::parse_table(&text, path.extension().is_some_and(|e| e == "json"))?
                }
                None => json!({}),
            };
            table["experiment"] = json!(experiment.name());
            ExperimentConfig::from_value(table)?
        };
        base.merged(self.overrides())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let keys = match &e {
                Error::Config { keys, .. } => keys.clone(),
                _ => Vec::new(),
            };
            let obj = json!({"error": {"kind": e.kind(), "message": e.to_string(), "keys": keys}});
            eprintln!("{obj}");
            ExitCode::from(2)
        }
    }
}

fn execute(cli: &Cli) -> Result<(), Error> {
    let config = cli.resolve()?;
    let record = harness::run_in_pool(&config)?;
    match &config.out {
        Some(path) => record.write(path, config.format)?,
        None => match config.format {
            Format::Json => print!("{}", record.to_json_lines()?),
            Format::Csv => print!("{}", record.to_csv()),
        },
    }
    Ok(())
}
