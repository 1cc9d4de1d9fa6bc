//! Running a named experiment from code, writing its record and replaying it.

use bosonbench::harness::{run_in_pool, Experiment, ExperimentConfig, ExperimentRecord, Format};

fn main() -> bosonbench::Result<()> {
    let mut config = ExperimentConfig::new(Experiment::Indistinguishability);
    config.seed = 1;
    config.modes = Some(16);
    config.photons = Some(3);
    config.samples = Some(10);
    config.trials = Some(500);

    let record = run_in_pool(&config)?;
    for key in ["symmetric_accept_boson", "symmetric_accept_uniform", "lr_type_i", "lr_type_ii", "lr_samples_found"] {
        println!("{key}: {}", record.summary[key]);
    }

    let dir = std::env::temp_dir().join("bosonbench-example");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("indistinguishability.jsonl");
    record.write(&path, Format::Json)?;
    let again = run_in_pool(&ExperimentRecord::from_json_lines(&std::fs::read_to_string(&path)?)?.config)?;
    println!("replay identical: {}", again.trials == record.trials);
    println!("record written to {}", path.display());
    Ok(())
}
