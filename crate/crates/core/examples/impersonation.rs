//! Per-UE BER under a jammer that replays UE 0's pilot.

use maed::channel::{JammerProfile, SystemConfig};
use maed::harness::{run_experiment, Detector, ExperimentSpec};

fn main() -> maed::Result<()> {
    let spec = ExperimentSpec {
        base: SystemConfig::default().with_jammer(JammerProfile::impersonate_single(0, 25.0)),
        snr_grid_db: vec![16.0],
        detectors: vec![Detector::Maed],
        frames_per_point: 20,
        per_ue_report: true,
        ..ExperimentSpec::default()
    };
    let record = &run_experiment(&spec)?[0];
    let others = record.excluding(&[0], "maed-others");
    println!("overall BER {:.3e}, without UE 0 {:.3e}", record.ber, others.ber);
    for (u, ber) in record.per_ue_ber.iter().flatten().enumerate().filter(|(_, b)| **b > 0.0) {
        println!("  UE {u:2}: {ber:.3e}");
    }
    Ok(())
}
