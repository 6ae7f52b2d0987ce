//! Joint jammer mitigation, channel estimation and data detection.
//!
//! The detector minimizes
//!
//! ```text
//! f(S~) = || P~ Y (I_K - S~^+ S~) ||_F^2,   P~ = I_B - p p^H,  |p| = 1
//! ```
//!
//! over transmit matrices `S~ = [S_T, S~_D]` whose data block is relaxed to
//! the QPSK convex hull, and over the unit vector `p` that names the jammer
//! direction. Each iteration takes a forward-backward splitting step in `S~`
//! (gradient step, then projection onto the box), re-estimates `p` from the
//! dominant left singular direction of the residual `E~ = Y (I - S~^+ S~)`,
//! and picks the next stepsize with Barzilai-Borwein.
//!
//! With projection disabled the same loop solves the plain (jammer-unaware)
//! relaxed joint estimation problem.
//!
//! # Gradient convention
//!
//! [`gradient_f`] returns `G = (S~^+)^H Y^H P~ Y (I - S~^+ S~)`. This is the
//! *negative* Wirtinger gradient: `f(S~ + eps D) = f(S~) - 2 eps Re<G, D> +
//! O(eps^2)`. The update is therefore `S~ + tau G`, and the Barzilai-Borwein
//! rule is fed `-G`.

use log::debug;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{
    dominant_eigenvector, orth_complement_projector, right_pseudo_inverse, Cholesky, ComplexMatrix,
    ComplexVector, DEFAULT_POWER_MAX_ITER, DEFAULT_POWER_TOL,
};
use crate::qpsk::{self, qpsk_amplitude, BitMatrix};

pub use crate::qpsk::hard_decision;

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Number of iterations.
    pub t_max: usize,
    /// Stepsize of the first iteration.
    pub tau0: f64,
    /// `false` keeps `P~ = I` throughout (jammerless joint estimation).
    pub project_enabled: bool,
    pub power_tol: f64,
    pub power_max_iter: usize,
    pub bb_floor: f64,
    pub bb_ceil: f64,
    pub bb_rule: BbRule,
    /// Stepsize multiplier applied when the curvature estimate is unusable.
    pub bb_growth: f64,
}

/// How the two Barzilai-Borwein quotients are combined; see [`bb_stepsize`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BbRule {
    Adaptive,
    Alternating,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            t_max: 30,
            tau0: 0.1,
            project_enabled: true,
            power_tol: DEFAULT_POWER_TOL,
            power_max_iter: DEFAULT_POWER_MAX_ITER,
            bb_floor: 1e-6,
            bb_ceil: 1e3,
            bb_rule: BbRule::Adaptive,
            bb_growth: 1.5,
        }
    }
}

impl SolverConfig {
    /// Same iteration without the jammer projection.
    pub fn jammerless(&self) -> Self {
        Self {
            project_enabled: false,
            ..self.clone()
        }
    }

    pub fn with_t_max(mut self, t_max: usize) -> Self {
        self.t_max = t_max;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.t_max == 0 {
            return Err(Error::InvalidConfig("t_max must be at least 1".into()));
        }
        if !(self.tau0 > 0.0 && self.tau0.is_finite()) {
            return Err(Error::InvalidConfig(format!("tau0 = {} must be positive", self.tau0)));
        }
        if !(self.bb_floor > 0.0 && self.bb_floor <= self.bb_ceil) {
            return Err(Error::InvalidConfig(format!(
                "stepsize clamps [{}, {}] are invalid",
                self.bb_floor, self.bb_ceil
            )));
        }
        if !(self.bb_growth >= 1.0 && self.bb_growth.is_finite()) {
            return Err(Error::InvalidConfig(format!("bb_growth = {} must be >= 1", self.bb_growth)));
        }
        if !(self.power_tol > 0.0) || self.power_max_iter == 0 {
            return Err(Error::InvalidConfig("power iteration needs tol > 0 and max_iter >= 1".into()));
        }
        Ok(())
    }
}

/// Per-iteration trace of a solver run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Diagnostics {
    /// `f(S~^(t+1))` under `P~^(t+1)`, one entry per iteration.
    pub objective: Vec<f64>,
    /// Stepsize used by each iteration.
    pub stepsizes: Vec<f64>,
    /// Whether the initial eigenvector solve met its tolerance (`None` when
    /// no eigenvector was computed).
    pub eigen_converged: Option<bool>,
}

#[derive(Debug, Clone)]
pub struct MaedOutput {
    /// Relaxed data block `S~_D`, `U x D`.
    pub soft_data: ComplexMatrix,
    pub hard_data: ComplexMatrix,
    pub bits: BitMatrix,
    /// Final jammer-direction estimate; `None` with projection disabled.
    pub subspace: Option<ComplexVector>,
    pub diagnostics: Diagnostics,
}

fn check_square_projector(p: &ComplexMatrix, y: &ComplexMatrix) -> Result<()> {
    if !p.is_square() || p.rows() != y.rows() {
        return Err(Error::DimensionMismatch {
            op: "projector",
            lhs: p.shape(),
            rhs: y.shape(),
        });
    }
    Ok(())
}

fn check_transmit(y: &ComplexMatrix, s: &ComplexMatrix) -> Result<()> {
    if y.cols() != s.cols() {
        return Err(Error::DimensionMismatch {
            op: "receive/transmit slots",
            lhs: y.shape(),
            rhs: s.shape(),
        });
    }
    Ok(())
}

/// `Y (I_K - S~^+ S~)`.
pub fn residual_matrix(y: &ComplexMatrix, s: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_transmit(y, s)?;
    let pinv = right_pseudo_inverse(s)?;
    let fitted = &(y * &pinv) * s;
    Ok(y - &fitted)
}

/// `|| P Y (I_K - S~^+ S~) ||_F^2`.
pub fn objective_f(p: &ComplexMatrix, y: &ComplexMatrix, s: &ComplexMatrix) -> Result<f64> {
    check_square_projector(p, y)?;
    let e = residual_matrix(y, s)?;
    Ok(p.matmul(&e)?.frobenius_norm_sq())
}

/// `(S~^+)^H Y^H P Y (I_K - S~^+ S~)`; see the module docs for its sign.
pub fn gradient_f(p: &ComplexMatrix, y: &ComplexMatrix, s: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_square_projector(p, y)?;
    check_transmit(y, s)?;
    let pinv = right_pseudo_inverse(s)?;
    let y_pinv = y * &pinv;
    let e = y - &(&y_pinv * s);
    let pe = p * &e;
    y_pinv.hermitian_matmul(&pe)
}

/// Projection onto `{S~ : S~_[1:T] = S_T, S~_[T+1:K] in box}`: pilot columns
/// are overwritten, data entries are clipped per quadrature to
/// `[-sqrt(Es/2), sqrt(Es/2)]`.
pub fn prox_g(candidate: &ComplexMatrix, pilots: &ComplexMatrix, es: f64) -> ComplexMatrix {
    assert_eq!(candidate.rows(), pilots.rows(), "prox_g row mismatch");
    assert!(pilots.cols() <= candidate.cols(), "prox_g pilot block wider than candidate");
    let a = qpsk_amplitude(es);
    let t = pilots.cols();
    let mut out = candidate.clone();
    for u in 0..out.rows() {
        let row = out.row_mut(u);
        row[..t].copy_from_slice(pilots.row(u));
        for z in &mut row[t..] {
            *z = Complex64::new(z.re.clamp(-a, a), z.im.clamp(-a, a));
        }
    }
    out
}

/// Jammer-direction estimate from the residual `E`.
///
/// With `first` set, returns the dominant eigenvector of `E E^H`; otherwise
/// one power step `E E^H p / |E E^H p|` from `prev`. If `E E^H prev = 0`
/// the previous estimate is returned unchanged. Returns `None` only for a
/// first update on an all-zero residual, where no direction is defined.
///
/// An eigenvector solve that runs out of iterations falls back to its best
/// iterate.
pub fn update_subspace(
    e: &ComplexMatrix,
    prev: Option<&ComplexVector>,
    first: bool,
    cfg: &SolverConfig,
) -> Result<Option<ComplexVector>> {
    if first {
        return Ok(initial_direction(e, cfg)?.map(|(v, _)| v));
    }
    let prev = prev.ok_or_else(|| Error::InvalidConfig("power step requires a previous estimate".into()))?;
    let image = e.mul_vec(&e.hermitian_mul_vec(prev)?)?;
    match image.normalized() {
        Ok(p) => Ok(Some(p)),
        Err(_) => {
            debug!("residual annihilates previous subspace estimate; keeping it");
            Ok(Some(prev.clone()))
        }
    }
}

/// Dominant eigenvector of `E E^H` and whether the eigen solve converged.
fn initial_direction(e: &ComplexMatrix, cfg: &SolverConfig) -> Result<Option<(ComplexVector, bool)>> {
    if e.frobenius_norm_sq() == 0.0 {
        return Ok(None);
    }
    match dominant_eigenvector(&e.gram_rows(), cfg.power_tol, cfg.power_max_iter, None) {
        Ok(v) => Ok(Some((v, true))),
        Err(Error::NotConverged { best, residual, iterations }) => {
            debug!("initial eigenvector residual {residual:e} after {iterations} steps; using best iterate");
            Ok(Some((best, false)))
        }
        Err(other) => Err(other),
    }
}

/// Barzilai-Borwein stepsize from successive iterates and gradients.
///
/// With `s = <dS, dS> / <dS, dG>` and `m = <dS, dG> / <dG, dG>` (real parts of
/// `trace(A^H B)`):
///
/// - [`BbRule::Adaptive`] takes `m` when `2m > s` and `s - m/2` otherwise.
/// - [`BbRule::Alternating`] takes `s` on even and `m` on odd `iteration`s.
///
/// A vanishing `dS` or `dG` carries no curvature information and keeps
/// `tau_prev`. Negative curvature, or any other non-positive or non-finite
/// result, returns `bb_growth * tau_prev`. The result is clamped to
/// `[bb_floor, bb_ceil]`.
pub fn bb_stepsize(
    s_prev: &ComplexMatrix,
    s_curr: &ComplexMatrix,
    g_prev: &ComplexMatrix,
    g_curr: &ComplexMatrix,
    tau_prev: f64,
    iteration: usize,
    cfg: &SolverConfig,
) -> f64 {
    let ds = s_curr - s_prev;
    let dg = g_curr - g_prev;
    let ss = ds.frobenius_norm_sq();
    let gg = dg.frobenius_norm_sq();
    if ss == 0.0 || gg == 0.0 {
        return tau_prev;
    }
    let sg = ds.inner(&dg).re;
    let steep = ss / sg;
    let minimal = sg / gg;
    let tau = match cfg.bb_rule {
        BbRule::Adaptive if 2.0 * minimal > steep => minimal,
        BbRule::Adaptive => steep - 0.5 * minimal,
        BbRule::Alternating if iteration.is_multiple_of(2) => steep,
        BbRule::Alternating => minimal,
    };
    let tau = if sg > 0.0 && tau > 0.0 && tau.is_finite() {
        tau
    } else {
        cfg.bb_growth * tau_prev
    };
    tau.clamp(cfg.bb_floor, cfg.bb_ceil)
}

/// Runs the detector from the all-zero data initialization.
pub fn run_maed(y: &ComplexMatrix, pilots: &ComplexMatrix, es: f64, cfg: &SolverConfig) -> Result<MaedOutput> {
    let d = y.cols().saturating_sub(pilots.cols());
    run_maed_from(y, pilots, es, cfg, &ComplexMatrix::zeros(pilots.rows(), d))
}

/// Runs the detector from a caller-supplied data block.
pub fn run_maed_from(
    y: &ComplexMatrix,
    pilots: &ComplexMatrix,
    es: f64,
    cfg: &SolverConfig,
    initial_data: &ComplexMatrix,
) -> Result<MaedOutput> {
    cfg.validate()?;
    let engine = Engine::new(y, pilots, es)?;
    if initial_data.shape() != (engine.users, engine.slots - engine.pilot_slots) {
        return Err(Error::DimensionMismatch {
            op: "initial data block",
            lhs: (engine.users, engine.slots - engine.pilot_slots),
            rhs: initial_data.shape(),
        });
    }
    engine.run(cfg, initial_data)
}

/// Precomputed per-frame quantities. All objective and gradient evaluations
/// go through the `K x K` Gram matrix `R = Y^H Y`, so the `B x K` residual is
/// only formed for the initial eigenvector solve.
struct Engine<'a> {
    y: &'a ComplexMatrix,
    pilots: &'a ComplexMatrix,
    es: f64,
    users: usize,
    pilot_slots: usize,
    slots: usize,
    /// Rows `T..K` of `Y^H Y`.
    gram_data_rows: ComplexMatrix,
    /// `S_T * (rows 0..T of Y^H Y)`.
    pilot_part: ComplexMatrix,
    trace_gram: f64,
}

/// Factorization of the current transmit matrix.
struct Fit {
    chol: Cholesky,
    /// `(S S^H)^{-1} S`.
    x: ComplexMatrix,
    /// `S Y^H Y`.
    s_gram: ComplexMatrix,
}

struct Evaluation {
    objective: f64,
    gradient: Option<ComplexMatrix>,
}

impl<'a> Engine<'a> {
    fn new(y: &'a ComplexMatrix, pilots: &'a ComplexMatrix, es: f64) -> Result<Self> {
        let (users, pilot_slots) = pilots.shape();
        let slots = y.cols();
        if pilot_slots < users {
            return Err(Error::InvalidConfig(format!("need T >= U, got T={pilot_slots} U={users}")));
        }
        if slots <= pilot_slots {
            return Err(Error::DimensionMismatch {
                op: "receive matrix has no data slots",
                lhs: y.shape(),
                rhs: pilots.shape(),
            });
        }
        if !(es > 0.0 && es.is_finite()) {
            return Err(Error::InvalidConfig(format!("symbol energy {es} must be positive")));
        }
        if !y.is_finite() {
            return Err(Error::InvalidConfig("receive matrix has non-finite entries".into()));
        }
        let gram = y.hermitian_matmul(y)?;
        let trace_gram = gram.trace().re;
        let pilot_part = pilots.matmul(&gram_rows_range(&gram, 0, pilot_slots))?;
        let gram_data_rows = gram_rows_range(&gram, pilot_slots, slots);
        Ok(Self {
            y,
            pilots,
            es,
            users,
            pilot_slots,
            slots,
            gram_data_rows,
            pilot_part,
            trace_gram,
        })
    }

    fn fit(&self, s: &ComplexMatrix) -> Result<Fit> {
        let chol = Cholesky::factor(&s.gram_rows()).map_err(|e| match e {
            Error::NotPositiveDefinite { pivot, .. } => {
                Error::RankDeficient(format!("S S^H singular at pivot {pivot}"))
            }
            other => other,
        })?;
        let x = chol.solve(s)?;
        let data = s.columns(self.pilot_slots, self.slots);
        let mut s_gram = data.matmul(&self.gram_data_rows)?;
        s_gram.add_scaled(Complex64::new(1.0, 0.0), &self.pilot_part);
        Ok(Fit { chol, x, s_gram })
    }

    /// Objective and (optionally) the descent matrix `G` at `s` under the
    /// projector defined by `p` (identity when absent).
    fn evaluate(&self, s: &ComplexMatrix, fit: &Fit, p: Option<&ComplexVector>, with_gradient: bool) -> Result<Evaluation> {
        // N = S Y^H P Y
        let mut n = fit.s_gram.clone();
        let mut trace_a = self.trace_gram;
        if let Some(p) = p {
            let yp = self.y.hermitian_mul_vec(p)?;
            let s_yp = s.mul_vec(&yp)?;
            n.sub_outer(s_yp.as_slice(), yp.as_slice());
            trace_a -= yp.norm_sq();
        }
        // tr(Q A) = tr(A) - tr(G^{-1} S A S^H) = tr(A) - <X, N>
        let objective = (trace_a - fit.x.inner(&n).re).max(0.0);
        let gradient = if with_gradient {
            // G = (S S^H)^{-1} N Q,  N Q = N - (N S^H) X
            let nsh = n.matmul_hermitian(s)?;
            let v = &n - &nsh.matmul(&fit.x)?;
            Some(fit.chol.solve(&v)?)
        } else {
            None
        };
        Ok(Evaluation { objective, gradient })
    }

    /// `E E^H p` for the residual `E = Y Q` of the current fit.
    fn residual_power_image(&self, s: &ComplexMatrix, fit: &Fit, p: &ComplexVector) -> Result<ComplexVector> {
        // E E^H = Y Q Y^H, Q = I - X^H S
        let z = self.y.hermitian_mul_vec(p)?;
        let sz = s.mul_vec(&z)?;
        let correction = fit.x.hermitian_mul_vec(&sz)?;
        let qz: Vec<Complex64> = z
            .as_slice()
            .iter()
            .zip(correction.as_slice())
            .map(|(a, b)| a - b)
            .collect();
        self.y.mul_vec(&ComplexVector::from_vec(qz))
    }

    fn residual(&self, s: &ComplexMatrix, fit: &Fit) -> Result<ComplexMatrix> {
        let ysh = self.y.matmul_hermitian(s)?;
        Ok(self.y - &ysh.matmul(&fit.x)?)
    }

    fn run(&self, cfg: &SolverConfig, initial_data: &ComplexMatrix) -> Result<MaedOutput> {
        let t0 = self.pilot_slots;
        let k = self.slots;
        let mut s = self.pilots.hstack(initial_data)?;
        let mut subspace: Option<ComplexVector> = None;
        let mut tau = cfg.tau0;
        let mut diagnostics = Diagnostics::default();

        let fit = self.fit(&s)?;
        let mut grad = self
            .evaluate(&s, &fit, None, true)?
            .gradient
            .expect("gradient requested");

        for t in 0..cfg.t_max {
            diagnostics.stepsizes.push(tau);
            let mut candidate = s.clone();
            candidate.add_scaled(Complex64::new(tau, 0.0), &grad);
            let s_next = prox_g(&candidate, self.pilots, self.es);
            let fit = self.fit(&s_next)?;

            if cfg.project_enabled {
                subspace = match subspace.take() {
                    None => {
                        let found = initial_direction(&self.residual(&s_next, &fit)?, cfg)?;
                        diagnostics.eigen_converged = found.as_ref().map(|(_, ok)| *ok);
                        found.map(|(v, _)| v)
                    }
                    Some(prev) => {
                        let image = self.residual_power_image(&s_next, &fit, &prev)?;
                        Some(image.normalized().unwrap_or(prev))
                    }
                };
            }

            let last = t + 1 == cfg.t_max;
            let eval = self.evaluate(&s_next, &fit, subspace.as_ref(), !last)?;
            if !eval.objective.is_finite() {
                return Err(Error::InvalidConfig(format!("objective diverged at iteration {t}")));
            }
            diagnostics.objective.push(eval.objective);

            if let Some(grad_next) = eval.gradient {
                // BB works with the true gradient -G on the free (data) block.
                let neg = |g: &ComplexMatrix| g.columns(t0, k).scale(-1.0);
                tau = bb_stepsize(
                    &s.columns(t0, k),
                    &s_next.columns(t0, k),
                    &neg(&grad),
                    &neg(&grad_next),
                    tau,
                    t,
                    cfg,
                );
                grad = grad_next;
            }
            s = s_next;
        }

        let soft_data = s.columns(t0, k);
        let (hard_data, bits) = qpsk::hard_decision(&soft_data, self.es);
        Ok(MaedOutput {
            soft_data,
            hard_data,
            bits,
            subspace,
            diagnostics,
        })
    }
}

fn gram_rows_range(m: &ComplexMatrix, start: usize, end: usize) -> ComplexMatrix {
    let cols = m.cols();
    ComplexMatrix::from_vec(end - start, cols, m.as_slice()[start * cols..end * cols].to_vec())
        .expect("row range within bounds")
}

/// `I - p p^H` for a unit-norm `p`, or the identity when absent.
pub fn projector_for(subspace: Option<&ComplexVector>, dim: usize) -> Result<ComplexMatrix> {
    match subspace {
        Some(p) => orth_complement_projector(p),
        None => Ok(ComplexMatrix::identity(dim)),
    }
}
