//! Reference detectors: jammer-oblivious LMMSE, genie-aided projection
//! (geniePOS) and the jammerless joint detector used as an upper bound.

use crate::channel::{ReceivedFrame, SystemConfig};
use crate::error::{Error, Result};
use crate::linalg::{orth_complement_projector, right_pseudo_inverse, solve_hermitian_posdef, ComplexMatrix};
use crate::maed::{run_maed, SolverConfig};
use crate::qpsk::{hard_decision, BitMatrix};

#[derive(Debug, Clone)]
pub struct DetectorOutput {
    /// Hard QPSK decisions for the data block, `U x D`.
    pub hard_data: ComplexMatrix,
    pub bits: BitMatrix,
    /// Channel estimate, for detectors that form one.
    pub channel_estimate: Option<ComplexMatrix>,
}

/// Least-squares channel estimate `Y_T S_T^+`.
pub fn ls_channel_estimate(y_t: &ComplexMatrix, s_t: &ComplexMatrix) -> Result<ComplexMatrix> {
    if y_t.cols() != s_t.cols() {
        return Err(Error::DimensionMismatch {
            op: "ls_channel_estimate",
            lhs: y_t.shape(),
            rhs: s_t.shape(),
        });
    }
    y_t.matmul(&right_pseudo_inverse(s_t)?)
}

/// Soft LMMSE estimate `(H^H H + N0/Es I)^{-1} H^H Y_D`.
pub fn lmmse_soft(h_hat: &ComplexMatrix, y_d: &ComplexMatrix, n0: f64, es: f64) -> Result<ComplexMatrix> {
    if h_hat.rows() != y_d.rows() {
        return Err(Error::DimensionMismatch {
            op: "lmmse_detect",
            lhs: h_hat.shape(),
            rhs: y_d.shape(),
        });
    }
    if !(n0 >= 0.0 && es > 0.0) {
        return Err(Error::InvalidConfig(format!("lmmse needs N0 >= 0 and Es > 0, got {n0}, {es}")));
    }
    let mut gram = h_hat.hermitian_matmul(h_hat)?;
    let reg = n0 / es;
    for i in 0..gram.rows() {
        gram[(i, i)].re += reg;
    }
    solve_hermitian_posdef(&gram, &h_hat.hermitian_matmul(y_d)?).map_err(|e| match e {
        Error::NotPositiveDefinite { pivot, .. } => {
            Error::RankDeficient(format!("regularized Gram singular at pivot {pivot}"))
        }
        other => other,
    })
}

/// [`lmmse_soft`] followed by hard decisions.
pub fn lmmse_detect(h_hat: &ComplexMatrix, y_d: &ComplexMatrix, n0: f64, es: f64) -> Result<DetectorOutput> {
    let soft = lmmse_soft(h_hat, y_d, n0, es)?;
    let (hard_data, bits) = hard_decision(&soft, es);
    Ok(DetectorOutput {
        hard_data,
        bits,
        channel_estimate: Some(h_hat.clone()),
    })
}

/// LS channel estimation on the pilot slots, then LMMSE on the data slots.
/// Does nothing about the jammer.
pub fn detect_lmmse_baseline(frame: &ReceivedFrame, cfg: &SystemConfig) -> Result<DetectorOutput> {
    let h_hat = ls_channel_estimate(&frame.received_pilots(), &frame.truth.pilots)?;
    lmmse_detect(&h_hat, &frame.received_data(), frame.truth.noise_variance, cfg.symbol_energy)
}

/// LMMSE baseline run on `P Y` with `P` the projector that nulls the true
/// jammer channel.
pub fn detect_genie_pos(frame: &ReceivedFrame, cfg: &SystemConfig) -> Result<DetectorOutput> {
    let p = orth_complement_projector(&frame.truth.jammer_channel)?;
    let py = p.matmul(&frame.y)?;
    let t = frame.pilot_slots();
    let h_hat = ls_channel_estimate(&py.columns(0, t), &frame.truth.pilots)?;
    lmmse_detect(&h_hat, &py.columns(t, py.cols()), frame.truth.noise_variance, cfg.symbol_energy)
}

/// The joint detector without projection, on a frame that carries no jammer.
pub fn detect_jl_jed(
    frame_jammerless: &ReceivedFrame,
    cfg: &SystemConfig,
    solver: &SolverConfig,
) -> Result<DetectorOutput> {
    if frame_jammerless.truth.jammer_symbols.norm_sq() != 0.0 {
        return Err(Error::InvalidConfig("jammerless detector given a jammed frame".into()));
    }
    let solver = solver.jammerless();
    let out = run_maed(&frame_jammerless.y, &frame_jammerless.truth.pilots, cfg.symbol_energy, &solver)?;
    Ok(DetectorOutput {
        hard_data: out.hard_data,
        bits: out.bits,
        channel_estimate: None,
    })
}
