//! Runs every detector on one frame with a strong barrage jammer.

use maed::baselines::{detect_genie_pos, detect_jl_jed, detect_lmmse_baseline};
use maed::channel::{synthesize_frame, JammerKind, JammerProfile, SystemConfig};
use maed::maed::{run_maed, SolverConfig};
use maed::rng::frame_rng;

fn main() -> maed::Result<()> {
    let cfg = SystemConfig::default()
        .with_snr_db(6.0)
        .with_jammer(JammerProfile::strong(JammerKind::Barrage, 25.0));
    let solver = SolverConfig::default();
    let frame = synthesize_frame(&cfg, &mut frame_rng(3, 0, 0))?;
    let truth = &frame.truth.bits;
    let bits = (truth.rows() * truth.cols()) as f64;

    let maed = run_maed(&frame.y, &frame.truth.pilots, cfg.symbol_energy, &solver)?;
    let align = maed.subspace.as_ref().map_or(0.0, |p| p.alignment(&frame.truth.jammer_channel));
    println!("jammer direction alignment: {align:.6}");

    let results = [
        ("lmmse", detect_lmmse_baseline(&frame, &cfg)?.bits),
        ("geniepos", detect_genie_pos(&frame, &cfg)?.bits),
        ("maed", maed.bits),
        ("jljed", detect_jl_jed(&frame.jammerless(), &cfg, &solver)?.bits),
    ];
    for (name, b) in results {
        let errors = b.count_errors(truth);
        println!("{name:>8}: {errors:5} bit errors, BER {:.2e}", errors as f64 / bits);
    }
    Ok(())
}
