//! Runtime property checks behind the `selftest` subcommand.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::channel::{draw_rayleigh_channel, synthesize_frame, JammerKind, JammerProfile, SystemConfig};
use crate::harness::{csv_string, run_experiment, Detector, ExperimentSpec};
use crate::linalg::{orth_complement_projector, right_pseudo_inverse, ComplexVector};
use crate::maed::{gradient_f, objective_f, run_maed, SolverConfig};

#[derive(Debug, Clone)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, passed: bool, detail: String) -> Check {
    Check { name, passed, detail }
}

fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> ComplexVector {
    ComplexVector::from_vec(draw_rayleigh_channel(rng, n, 1).as_slice().to_vec())
}

/// Worst relative violation of the four Moore-Penrose conditions over random
/// wide matrices.
pub fn pseudo_inverse_check(trials: usize, seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let s = draw_rayleigh_channel(&mut rng, 4, 10);
        let p = match right_pseudo_inverse(&s) {
            Ok(p) => p,
            Err(e) => return check("pseudo-inverse", false, e.to_string()),
        };
        let sp = &s * &p;
        let ps = &p * &s;
        worst = worst
            .max((&(&sp * &s) - &s).frobenius_norm() / s.frobenius_norm())
            .max((&(&ps * &p) - &p).frobenius_norm() / p.frobenius_norm())
            .max((&sp - &sp.hermitian()).frobenius_norm())
            .max((&ps - &ps.hermitian()).frobenius_norm());
    }
    check("pseudo-inverse", worst <= 1e-9, format!("worst violation {worst:.2e}"))
}

/// Idempotence, symmetry and annihilation for `I - p p^H / |p|^2`.
pub fn projector_check(trials: usize, dim: usize, seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let v = random_vector(&mut rng, dim);
        let p = match orth_complement_projector(&v) {
            Ok(p) => p,
            Err(e) => return check("projector", false, e.to_string()),
        };
        let b = dim as f64;
        worst = worst
            .max((&(&p * &p) - &p).frobenius_norm() / b)
            .max((&p - &p.hermitian()).frobenius_norm() / b)
            .max(p.mul_vec(&v).map(|x| x.norm()).unwrap_or(f64::INFINITY) / v.norm());
    }
    check("projector", worst <= 1e-12, format!("worst violation {worst:.2e}"))
}

/// Central finite differences of the objective against `-2 Re<G, D>`.
pub fn gradient_check(trials: usize, seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (u, b, k) = (4, 8, 12);
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let y = draw_rayleigh_channel(&mut rng, b, k);
        let s = draw_rayleigh_channel(&mut rng, u, k);
        let dir = draw_rayleigh_channel(&mut rng, u, k);
        let proj = orth_complement_projector(&random_vector(&mut rng, b)).expect("nonzero");
        let g = gradient_f(&proj, &y, &s).expect("full rank");
        let predicted = -2.0 * g.inner(&dir).re;
        let eps = 1e-6;
        let f = |sign: f64| {
            let mut t = s.clone();
            t.add_scaled(Complex64::new(sign * eps, 0.0), &dir);
            objective_f(&proj, &y, &t).expect("full rank")
        };
        let fd = (f(1.0) - f(-1.0)) / (2.0 * eps);
        worst = worst.max((fd - predicted).abs() / predicted.abs().max(1e-12));
    }
    check("gradient", worst <= 1e-4, format!("worst relative error {worst:.2e}"))
}

/// Alignment of the recovered jammer direction with the true jammer channel
/// on noiseless frames with a strong barrage jammer.
pub fn identifiability_check(trials: usize, seed: u64) -> Check {
    let cfg = SystemConfig::default()
        .with_snr_db(f64::INFINITY)
        .with_jammer(JammerProfile::strong(JammerKind::Barrage, 25.0));
    let solver = SolverConfig::default();
    let mut worst: f64 = 1.0;
    for trial in 0..trials {
        let mut rng = crate::rng::frame_rng(seed, 0, trial as u64);
        let frame = match synthesize_frame(&cfg, &mut rng) {
            Ok(f) => f,
            Err(e) => return check("identifiability", false, e.to_string()),
        };
        let out = match run_maed(&frame.y, &frame.truth.pilots, cfg.symbol_energy, &solver) {
            Ok(o) => o,
            Err(e) => return check("identifiability", false, e.to_string()),
        };
        let align = out
            .subspace
            .map(|p| p.alignment(&frame.truth.jammer_channel))
            .unwrap_or(0.0);
        worst = worst.min(align);
    }
    check("identifiability", worst >= 0.99, format!("worst alignment {worst:.6}"))
}

/// Two runs of the same small sweep produce the same CSV.
pub fn determinism_check(seed: u64) -> Check {
    let spec = ExperimentSpec {
        base: SystemConfig {
            antennas: 16,
            users: 4,
            pilot_slots: 4,
            data_slots: 12,
            ..SystemConfig::default()
        }
        .with_jammer(JammerProfile::strong(JammerKind::Barrage, 25.0)),
        snr_grid_db: vec![0.0, 10.0],
        detectors: Detector::ALL.to_vec(),
        frames_per_point: 20,
        master_seed: seed,
        ..ExperimentSpec::default()
    };
    match (run_experiment(&spec), run_experiment(&spec)) {
        (Ok(a), Ok(b)) => {
            let same = csv_string(&a, false) == csv_string(&b, false);
            check("determinism", same, format!("{} records", a.len()))
        }
        (Err(e), _) | (_, Err(e)) => check("determinism", false, e.to_string()),
    }
}

pub fn run_all(seed: u64) -> Vec<Check> {
    vec![
        pseudo_inverse_check(20, seed),
        projector_check(20, 128, seed),
        gradient_check(20, seed),
        identifiability_check(100, seed),
        determinism_check(seed),
    ]
}

