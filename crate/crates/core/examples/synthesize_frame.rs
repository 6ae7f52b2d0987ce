//! Draws one jammed coherence block and reports where its energy sits.

use maed::channel::{synthesize_frame, JammerKind, JammerProfile, SystemConfig};
use maed::rng::frame_rng;

fn main() -> maed::Result<()> {
    for kind in [JammerKind::Barrage, JammerKind::Pilot, JammerKind::Data, JammerKind::Sparse] {
        let cfg = SystemConfig::default()
            .with_snr_db(10.0)
            .with_jammer(JammerProfile::strong(kind, 25.0));
        let frame = synthesize_frame(&cfg, &mut frame_rng(1, 0, 0))?;
        let t = cfg.pilot_slots;
        let w = frame.truth.jammer_symbols.as_slice();
        let pilot: f64 = w[..t].iter().map(|z| z.norm_sqr()).sum();
        let data: f64 = w[t..].iter().map(|z| z.norm_sqr()).sum();
        println!(
            "{:>8}: Y is {}x{}, jammer energy {:8.1} in pilots, {:8.1} in data, N0 = {:.3}",
            kind.name(),
            frame.y.rows(),
            frame.y.cols(),
            pilot,
            data,
            frame.truth.noise_variance
        );
    }
    Ok(())
}
