mod common;

use maed::channel::{synthesize_frame, JammerKind, JammerProfile, SystemConfig};
use maed::linalg::{orth_complement_projector, right_pseudo_inverse, Complex64, ComplexMatrix};
use maed::maed::{
    bb_stepsize, gradient_f, objective_f, projector_for, prox_g, residual_matrix, run_maed,
    update_subspace, SolverConfig,
};
use maed::rng::frame_rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn objective_matches_direct_composition() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let (u, b, k) = (3, 6, 9);
    let y = common::random_matrix(&mut rng, b, k);
    let s = common::random_matrix(&mut rng, u, k);
    let p = orth_complement_projector(&common::random_vector(&mut rng, b)).unwrap();
    // I - S^+ S built from the triple-loop product.
    let pinv = right_pseudo_inverse(&s).unwrap();
    let q = &ComplexMatrix::identity(k) - &common::naive_matmul(&pinv, &s);
    let direct = common::naive_matmul(&common::naive_matmul(&p, &y), &q).frobenius_norm_sq();
    let f = objective_f(&p, &y, &s).unwrap();
    assert!((f - direct).abs() <= 1e-10 * direct, "{f} vs {direct}");
    // The residual is orthogonal to the row space of S.
    let e = residual_matrix(&y, &s).unwrap();
    assert!(e.matmul_hermitian(&s).unwrap().frobenius_norm() < 1e-10 * y.frobenius_norm());
}

#[test]
fn gradient_matches_central_differences_on_data_columns() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (u, b, t, k) = (4, 10, 4, 14);
    for _ in 0..20 {
        let y = common::random_matrix(&mut rng, b, k);
        let s = common::random_matrix(&mut rng, u, k);
        let p = orth_complement_projector(&common::random_vector(&mut rng, b)).unwrap();
        let g = gradient_f(&p, &y, &s).unwrap();
        let mut dir = common::random_matrix(&mut rng, u, k);
        dir.set_columns(0, &ComplexMatrix::zeros(u, t));
        let eps = 1e-5;
        let f = |sign: f64| {
            let mut x = s.clone();
            x.add_scaled(Complex64::new(sign * eps, 0.0), &dir);
            objective_f(&p, &y, &x).unwrap()
        };
        let fd = (f(1.0) - f(-1.0)) / (2.0 * eps);
        let model = -2.0 * g.inner(&dir).re;
        assert!((fd - model).abs() <= 1e-4 * model.abs(), "fd {fd} model {model}");
    }
}

/// The solver loop written out with the public building blocks.
fn reference_solver(y: &ComplexMatrix, pilots: &ComplexMatrix, es: f64, cfg: &SolverConfig) -> ComplexMatrix {
    let (u, t) = pilots.shape();
    let k = y.cols();
    let b = y.rows();
    let mut s = pilots.hstack(&ComplexMatrix::zeros(u, k - t)).unwrap();
    let mut p_hat = None;
    let mut tau = cfg.tau0;
    let mut grad = gradient_f(&ComplexMatrix::identity(b), y, &s).unwrap();
    for it in 0..cfg.t_max {
        let mut cand = s.clone();
        cand.add_scaled(Complex64::new(tau, 0.0), &grad);
        let next = prox_g(&cand, pilots, es);
        if cfg.project_enabled {
            let e = residual_matrix(y, &next).unwrap();
            p_hat = update_subspace(&e, p_hat.as_ref(), p_hat.is_none(), cfg).unwrap();
        }
        if it + 1 < cfg.t_max {
            let proj = projector_for(p_hat.as_ref(), b).unwrap();
            let grad_next = gradient_f(&proj, y, &next).unwrap();
            tau = bb_stepsize(
                &s.columns(t, k),
                &next.columns(t, k),
                &grad.columns(t, k).scale(-1.0),
                &grad_next.columns(t, k).scale(-1.0),
                tau,
                it,
                cfg,
            );
            grad = grad_next;
        }
        s = next;
    }
    s.columns(t, k)
}

#[test]
fn solver_matches_reference_composition() {
    let cfg = common::small_system()
        .with_snr_db(10.0)
        .with_jammer(JammerProfile::strong(JammerKind::Barrage, 25.0));
    for (f, project) in [(0, true), (1, true), (2, false)] {
        let frame = synthesize_frame(&cfg, &mut frame_rng(12, 0, f)).unwrap();
        let solver = SolverConfig {
            t_max: 8,
            project_enabled: project,
            ..SolverConfig::default()
        };
        let out = run_maed(&frame.y, &frame.truth.pilots, cfg.symbol_energy, &solver).unwrap();
        let reference = reference_solver(&frame.y, &frame.truth.pilots, cfg.symbol_energy, &solver);
        let gap = out.soft_data.max_abs_diff(&reference);
        assert!(gap < 1e-7, "frame {f}: gap {gap}");
    }
}

#[test]
fn noiseless_jammerless_frame_is_recovered_exactly() {
    let cfg = SystemConfig::default().with_snr_db(f64::INFINITY);
    let frame = synthesize_frame(&cfg, &mut frame_rng(13, 0, 0)).unwrap();
    // With projection enabled, a transmit matrix whose errors sit in one UE's
    // row also reaches zero objective, so exact recovery is only guaranteed
    // for the jammer-unaware problem.
    let solver = SolverConfig::default().with_t_max(100).jammerless();
    let out = run_maed(&frame.y, &frame.truth.pilots, cfg.symbol_energy, &solver).unwrap();
    assert_eq!(out.bits.count_errors(&frame.truth.bits), 0);
}

#[test]
fn true_transmit_matrix_exposes_the_jammer() {
    let cfg = SystemConfig::default()
        .with_snr_db(f64::INFINITY)
        .with_jammer(JammerProfile::strong(JammerKind::Barrage, 25.0));
    let frame = synthesize_frame(&cfg, &mut frame_rng(14, 0, 0)).unwrap();
    let s = frame.truth.transmit_matrix();
    let e = residual_matrix(&frame.y, &s).unwrap();
    let p_hat = update_subspace(&e, None, true, &SolverConfig::default()).unwrap().unwrap();
    assert!(p_hat.alignment(&frame.truth.jammer_channel) > 1.0 - 1e-9);
    let proj = projector_for(Some(&p_hat), cfg.antennas).unwrap();
    let f = objective_f(&proj, &frame.y, &s).unwrap();
    assert!(f <= 1e-6 * frame.y.frobenius_norm_sq(), "objective {f}");
}

#[test]
fn bad_inputs_are_rejected() {
    let cfg = common::small_system();
    let frame = synthesize_frame(&cfg, &mut frame_rng(15, 0, 0)).unwrap();
    let bad = SolverConfig {
        tau0: -1.0,
        ..SolverConfig::default()
    };
    assert!(run_maed(&frame.y, &frame.truth.pilots, 1.0, &bad).is_err());
    assert!(run_maed(&frame.received_pilots(), &frame.truth.pilots, 1.0, &SolverConfig::default()).is_err());
    assert!(run_maed(&frame.y, &frame.truth.pilots, 0.0, &SolverConfig::default()).is_err());
}
