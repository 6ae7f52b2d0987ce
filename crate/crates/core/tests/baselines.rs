mod common;

use maed::baselines::{
    detect_genie_pos, detect_jl_jed, detect_lmmse_baseline, lmmse_soft, ls_channel_estimate,
};
use maed::channel::{hadamard_pilots, synthesize_frame, JammerKind, JammerProfile, SystemConfig};
use maed::linalg::{orth_complement_projector, Complex64, ComplexMatrix};
use maed::maed::{run_maed, SolverConfig};
use maed::rng::frame_rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Gauss-Jordan elimination with partial pivoting on `[A | B]`.
fn gauss_jordan(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let n = a.rows();
    let m = b.cols();
    let mut aug: Vec<Vec<Complex64>> = (0..n)
        .map(|i| a.row(i).iter().chain(b.row(i)).copied().collect())
        .collect();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| aug[i][col].norm().total_cmp(&aug[j][col].norm())).unwrap();
        aug.swap(col, piv);
        let d = aug[col][col];
        for x in aug[col].iter_mut() {
            *x /= d;
        }
        for r in 0..n {
            if r != col {
                let factor = aug[r][col];
                let pivot_row = aug[col].clone();
                for (x, p) in aug[r].iter_mut().zip(pivot_row) {
                    *x -= factor * p;
                }
            }
        }
    }
    ComplexMatrix::from_fn(n, m, |i, j| aug[i][n + j])
}

#[test]
fn lmmse_matches_normal_equations() {
    let mut rng = ChaCha8Rng::seed_from_u64(30);
    let h = common::random_matrix(&mut rng, 8, 4);
    let y = common::random_matrix(&mut rng, 8, 6);
    let (n0, es) = (0.3, 2.0);
    let mut lhs = common::naive_matmul(&h.hermitian(), &h);
    for i in 0..4 {
        lhs[(i, i)] += Complex64::new(n0 / es, 0.0);
    }
    let oracle = gauss_jordan(&lhs, &common::naive_matmul(&h.hermitian(), &y));
    let soft = lmmse_soft(&h, &y, n0, es).unwrap();
    assert!(soft.max_abs_diff(&oracle) < 1e-10);
}

#[test]
fn ls_estimate_noise_gain() {
    let cfg = common::small_system().with_snr_db(3.0);
    let (b, u, t) = (cfg.antennas, cfg.users, cfg.pilot_slots);
    let es = cfg.symbol_energy;
    let n0 = cfg.noise_variance();
    let pilots = hadamard_pilots(u, t, es).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let trials = 10_000;
    let mut energy = 0.0;
    for _ in 0..trials {
        let noise = common::random_matrix(&mut rng, b, t).scale(n0.sqrt());
        energy += ls_channel_estimate(&noise, &pilots).unwrap().frobenius_norm_sq();
    }
    let expected = (b * u) as f64 * n0 / (t as f64 * es);
    let measured = energy / trials as f64;
    assert!((measured / expected - 1.0).abs() < 0.05, "{measured} vs {expected}");
}

#[test]
fn pilot_jammer_biases_the_estimate() {
    let cfg = SystemConfig::default()
        .with_snr_db(f64::INFINITY)
        .with_jammer(JammerProfile::strong(JammerKind::Pilot, 10.0));
    let frame = synthesize_frame(&cfg, &mut frame_rng(32, 0, 0)).unwrap();
    let t = cfg.pilot_slots;
    let h_hat = ls_channel_estimate(&frame.received_pilots(), &frame.truth.pilots).unwrap();
    let w_t = ComplexMatrix::from_fn(1, t, |_, k| frame.truth.jammer_symbols.as_slice()[k]);
    let hj = ComplexMatrix::column_vector(&frame.truth.jammer_channel);
    let bias = common::naive_matmul(&common::naive_matmul(&hj, &w_t), &frame.truth.pilots.hermitian())
        .scale(1.0 / (t as f64 * cfg.symbol_energy));
    let expected = &frame.truth.channel + &bias;
    assert!(h_hat.max_abs_diff(&expected) < 1e-10 * expected.frobenius_norm());
}

#[test]
fn genie_projection_nulls_the_jammer() {
    let cfg = SystemConfig::default()
        .with_snr_db(f64::INFINITY)
        .with_jammer(JammerProfile::strong(JammerKind::Barrage, 25.0));
    let frame = synthesize_frame(&cfg, &mut frame_rng(33, 0, 0)).unwrap();
    let p = orth_complement_projector(&frame.truth.jammer_channel).unwrap();
    let leak = p.matmul(&frame.truth.jammer_term()).unwrap().frobenius_norm();
    assert!(leak <= 1e-10 * frame.truth.jammer_term().frobenius_norm());
    let out = detect_genie_pos(&frame, &cfg).unwrap();
    let ph = p.matmul(&frame.truth.channel).unwrap();
    assert!(out.channel_estimate.unwrap().max_abs_diff(&ph) < 1e-9);
    assert_eq!(out.bits.count_errors(&frame.truth.bits), 0);
}

#[test]
fn lmmse_baseline_is_clean_at_high_snr() {
    let cfg = SystemConfig::default().with_snr_db(40.0);
    let mut errors = 0;
    let mut bits = 0;
    for f in 0..100 {
        let frame = synthesize_frame(&cfg, &mut frame_rng(34, 0, f)).unwrap();
        let out = detect_lmmse_baseline(&frame, &cfg).unwrap();
        errors += out.bits.count_errors(&frame.truth.bits);
        bits += (frame.truth.bits.rows() * frame.truth.bits.cols()) as u64;
    }
    assert!(errors as f64 / bits as f64 <= 1e-4, "{errors} errors");
}

#[test]
fn noiseless_detectors_make_no_errors() {
    let cfg = SystemConfig::default().with_snr_db(f64::INFINITY);
    let frame = synthesize_frame(&cfg, &mut frame_rng(35, 0, 0)).unwrap();
    let lmmse = detect_lmmse_baseline(&frame, &cfg).unwrap();
    assert_eq!(lmmse.bits.count_errors(&frame.truth.bits), 0);
    let jl = detect_jl_jed(&frame, &cfg, &SolverConfig::default()).unwrap();
    assert_eq!(jl.bits.count_errors(&frame.truth.bits), 0);
}

#[test]
fn jl_jed_is_the_unprojected_solver() {
    let cfg = common::small_system()
        .with_snr_db(5.0)
        .with_jammer(JammerProfile::strong(JammerKind::Barrage, 25.0));
    let frame = synthesize_frame(&cfg, &mut frame_rng(36, 0, 0)).unwrap();
    let solver = SolverConfig::default();
    assert!(detect_jl_jed(&frame, &cfg, &solver).is_err());
    let clean = frame.jammerless();
    let jl = detect_jl_jed(&clean, &cfg, &solver).unwrap();
    let direct = run_maed(&clean.y, &clean.truth.pilots, cfg.symbol_energy, &solver.jammerless()).unwrap();
    assert_eq!(jl.hard_data, direct.hard_data);
    assert_eq!(jl.bits, direct.bits);
}
