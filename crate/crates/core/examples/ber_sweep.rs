//! A short BER sweep written as CSV to stdout.

use maed::channel::{JammerKind, JammerProfile, SystemConfig};
use maed::harness::{csv_string, run_experiment, Detector, ExperimentSpec};

fn main() -> maed::Result<()> {
    let spec = ExperimentSpec {
        base: SystemConfig::default().with_jammer(JammerProfile::strong(JammerKind::Data, 25.0)),
        snr_grid_db: vec![0.0, 4.0, 8.0],
        detectors: Detector::ALL.to_vec(),
        frames_per_point: 20,
        master_seed: 11,
        ..ExperimentSpec::default()
    };
    let records = run_experiment(&spec)?;
    print!("{}", csv_string(&records, true));
    Ok(())
}
