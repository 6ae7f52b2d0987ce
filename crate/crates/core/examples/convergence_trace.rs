//! Objective and stepsize per iteration for both stepsize rules.

use maed::channel::{synthesize_frame, JammerKind, JammerProfile, SystemConfig};
use maed::maed::{run_maed, BbRule, SolverConfig};
use maed::rng::frame_rng;

fn main() -> maed::Result<()> {
    let cfg = SystemConfig::default()
        .with_snr_db(8.0)
        .with_jammer(JammerProfile::strong(JammerKind::Pilot, 25.0));
    let frame = synthesize_frame(&cfg, &mut frame_rng(5, 0, 0))?;

    for rule in [BbRule::Adaptive, BbRule::Alternating] {
        let solver = SolverConfig {
            bb_rule: rule,
            ..SolverConfig::default()
        };
        let out = run_maed(&frame.y, &frame.truth.pilots, cfg.symbol_energy, &solver)?;
        println!("{rule:?}: {} bit errors", out.bits.count_errors(&frame.truth.bits));
        let d = &out.diagnostics;
        for (t, (f, tau)) in d.objective.iter().zip(&d.stepsizes).enumerate().step_by(5) {
            println!("  t={t:2}  f={f:12.4}  tau={tau:.3e}");
        }
    }
    Ok(())
}
