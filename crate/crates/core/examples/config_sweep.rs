//! Loads a `key = value` sweep file and runs it. Defaults to the bundled
//! `examples/sweep.cfg`.

use std::path::PathBuf;

use maed::harness::{csv_string, run_experiment, ExperimentSpec};

fn main() -> maed::Result<()> {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples/sweep.cfg"));
    let spec = ExperimentSpec::from_config_file(&path)?;
    println!("# {} SNR points x {} frames", spec.snr_grid_db.len(), spec.frames_per_point);
    print!("{}", csv_string(&run_experiment(&spec)?, false));
    Ok(())
}
