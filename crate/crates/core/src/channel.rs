//! Block-fading MU-MIMO uplink with a single-antenna jammer.
//!
//! A frame spans `K = T + D` slots: `T` pilot slots carrying rows of a
//! Sylvester Hadamard matrix and `D` QPSK data slots. The basestation
//! observes
//!
//! ```text
//! Y = H S + h_j w^T + N
//! ```
//!
//! with i.i.d. Rayleigh channels `H` (`B x U`) and `h_j` (`B`), jammer symbols
//! `w` (`K`) and white noise `N`.

use num_complex::Complex64;
use rand::seq::index::sample;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, ComplexVector};
use crate::qpsk::{self, BitMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum JammerKind {
    None,
    /// J1: active in every slot.
    Barrage,
    /// J2: active during the pilot phase only.
    Pilot,
    /// J3: active during the data phase only.
    Data,
    /// J4: active in a random subset of slots.
    Sparse,
    /// Replays one UE's pilot row during the pilot phase.
    ImpersonateSingle,
    /// Replays the average of several UE pilot rows during the pilot phase.
    ImpersonateAverage,
}

impl JammerKind {
    pub fn name(self) -> &'static str {
        match self {
            JammerKind::None => "none",
            JammerKind::Barrage => "barrage",
            JammerKind::Pilot => "pilot",
            JammerKind::Data => "data",
            JammerKind::Sparse => "sparse",
            JammerKind::ImpersonateSingle => "impersonate-single",
            JammerKind::ImpersonateAverage => "impersonate-average",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "none" | "off" => JammerKind::None,
            "barrage" | "j1" => JammerKind::Barrage,
            "pilot" | "j2" => JammerKind::Pilot,
            "data" | "j3" => JammerKind::Data,
            "sparse" | "j4" => JammerKind::Sparse,
            "impersonate-single" | "impersonate" => JammerKind::ImpersonateSingle,
            "impersonate-average" => JammerKind::ImpersonateAverage,
            other => return Err(Error::Parse(format!("unknown jammer kind `{other}`"))),
        })
    }

    pub fn is_impersonation(self) -> bool {
        matches!(self, JammerKind::ImpersonateSingle | JammerKind::ImpersonateAverage)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JammerConstellation {
    Gaussian,
    Qpsk,
}

impl JammerConstellation {
    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gaussian" | "gauss" => Ok(Self::Gaussian),
            "qpsk" => Ok(Self::Qpsk),
            other => Err(Error::Parse(format!("unknown jammer constellation `{other}`"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Gaussian => "gaussian",
            Self::Qpsk => "qpsk",
        }
    }
}

/// How `strength_db` is measured relative to the average UE.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StrengthMode {
    /// Receive energy over the whole coherence block (rho_E).
    TotalEnergy,
    /// Receive power while the jammer is active (rho_P = rho_E / duty cycle).
    ActivePower,
}

#[derive(Debug, Clone, PartialEq)]
pub struct JammerProfile {
    pub kind: JammerKind,
    pub constellation: JammerConstellation,
    pub strength_db: f64,
    pub strength_mode: StrengthMode,
    /// Fraction of slots hit by a sparse jammer, in `(0, 1]`.
    pub sparse_duty: f64,
    /// UE whose pilot is replayed (impersonation kinds).
    pub target_ue: usize,
    /// Number of consecutive UEs, starting at `target_ue`, whose pilots are
    /// averaged by [`JammerKind::ImpersonateAverage`].
    pub target_count: usize,
}

impl Default for JammerProfile {
    fn default() -> Self {
        Self {
            kind: JammerKind::None,
            constellation: JammerConstellation::Gaussian,
            strength_db: 0.0,
            strength_mode: StrengthMode::TotalEnergy,
            sparse_duty: 0.2,
            target_ue: 0,
            target_count: 1,
        }
    }
}

impl JammerProfile {
    pub fn none() -> Self {
        Self::default()
    }

    /// Gaussian jammer with the given total-energy ratio.
    pub fn strong(kind: JammerKind, rho_e_db: f64) -> Self {
        Self {
            kind,
            constellation: JammerConstellation::Gaussian,
            strength_db: rho_e_db,
            strength_mode: StrengthMode::TotalEnergy,
            ..Self::default()
        }
    }

    /// QPSK jammer with the given active-power ratio.
    pub fn weak(kind: JammerKind, rho_p_db: f64) -> Self {
        Self {
            kind,
            constellation: JammerConstellation::Qpsk,
            strength_db: rho_p_db,
            strength_mode: StrengthMode::ActivePower,
            ..Self::default()
        }
    }

    pub fn impersonate_single(target_ue: usize, rho_p_db: f64) -> Self {
        Self {
            kind: JammerKind::ImpersonateSingle,
            strength_db: rho_p_db,
            strength_mode: StrengthMode::ActivePower,
            target_ue,
            ..Self::default()
        }
    }

    pub fn impersonate_average(target_count: usize, rho_p_db: f64) -> Self {
        Self {
            kind: JammerKind::ImpersonateAverage,
            strength_db: rho_p_db,
            strength_mode: StrengthMode::ActivePower,
            target_count,
            ..Self::default()
        }
    }

    pub fn with_duty(mut self, duty: f64) -> Self {
        self.sparse_duty = duty;
        self
    }

    /// Number of slots a sparse jammer hits per frame.
    pub fn sparse_slots(&self, coherence_slots: usize) -> usize {
        (self.sparse_duty * coherence_slots as f64).round() as usize
    }

    /// Fraction of the coherence block during which the jammer transmits.
    ///
    /// Sparse jammers use the realized fraction `round(alpha K) / K`, so the
    /// per-frame energy matches the requested total-energy ratio exactly.
    pub fn duty_cycle(&self, cfg: &SystemConfig) -> f64 {
        let k = cfg.coherence_slots() as f64;
        match self.kind {
            JammerKind::None => 0.0,
            JammerKind::Barrage => 1.0,
            JammerKind::Pilot | JammerKind::ImpersonateSingle | JammerKind::ImpersonateAverage => {
                cfg.pilot_slots as f64 / k
            }
            JammerKind::Data => cfg.data_slots as f64 / k,
            JammerKind::Sparse => self.sparse_slots(cfg.coherence_slots()) as f64 / k,
        }
    }

    /// Per-symbol energy while active.
    pub fn active_energy(&self, cfg: &SystemConfig) -> f64 {
        let ratio = 10f64.powf(self.strength_db / 10.0);
        match self.strength_mode {
            StrengthMode::ActivePower => ratio * cfg.symbol_energy,
            StrengthMode::TotalEnergy => {
                let duty = self.duty_cycle(cfg);
                if duty == 0.0 {
                    0.0
                } else {
                    ratio * cfg.symbol_energy / duty
                }
            }
        }
    }

    pub fn validate(&self, cfg: &SystemConfig) -> Result<()> {
        if !self.strength_db.is_finite() {
            return Err(Error::InvalidConfig("jammer strength must be finite".into()));
        }
        match self.kind {
            JammerKind::Sparse => {
                if !(self.sparse_duty > 0.0 && self.sparse_duty <= 1.0) {
                    return Err(Error::InvalidConfig(format!(
                        "sparse duty {} outside (0, 1]",
                        self.sparse_duty
                    )));
                }
                if self.sparse_slots(cfg.coherence_slots()) == 0 {
                    return Err(Error::InvalidConfig("sparse jammer hits zero slots".into()));
                }
            }
            JammerKind::ImpersonateSingle if self.target_ue >= cfg.users => {
                return Err(Error::InvalidConfig(format!(
                    "target UE {} out of range for {} UEs",
                    self.target_ue, cfg.users
                )));
            }
            JammerKind::ImpersonateAverage => {
                if self.target_count == 0 || self.target_count > cfg.users {
                    return Err(Error::InvalidConfig(format!(
                        "target count {} must lie in 1..={}",
                        self.target_count, cfg.users
                    )));
                }
                if self.target_ue >= cfg.users {
                    return Err(Error::InvalidConfig(format!("target UE {} out of range", self.target_ue)));
                }
            }
            _ => {}
        }
        Ok(())
    }
}

/// Scenario parameters for one simulated link.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemConfig {
    /// BS antennas `B`.
    pub antennas: usize,
    /// Single-antenna UEs `U`.
    pub users: usize,
    /// Pilot slots `T`; a power of two.
    pub pilot_slots: usize,
    /// Data slots `D`.
    pub data_slots: usize,
    /// Symbol energy `Es` (linear).
    pub symbol_energy: f64,
    /// Average receive SNR in dB; `+inf` means noiseless.
    pub snr_db: f64,
    pub jammer: JammerProfile,
    pub seed: u64,
}

impl Default for SystemConfig {
    /// 128 antennas, 32 UEs, 32 Hadamard pilot slots and 64 data slots.
    fn default() -> Self {
        Self {
            antennas: 128,
            users: 32,
            pilot_slots: 32,
            data_slots: 64,
            symbol_energy: 1.0,
            snr_db: 10.0,
            jammer: JammerProfile::none(),
            seed: 0,
        }
    }
}

impl SystemConfig {
    pub fn coherence_slots(&self) -> usize {
        self.pilot_slots + self.data_slots
    }

    pub fn with_jammer(mut self, jammer: JammerProfile) -> Self {
        self.jammer = jammer;
        self
    }

    pub fn with_snr_db(mut self, snr_db: f64) -> Self {
        self.snr_db = snr_db;
        self
    }

    pub fn noise_variance(&self) -> f64 {
        noise_variance_from_snr(self)
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidConfig(msg));
        if self.users == 0 || self.antennas < self.users {
            return fail(format!("need B >= U >= 1, got B={} U={}", self.antennas, self.users));
        }
        if self.pilot_slots < self.users {
            return fail(format!("need T >= U, got T={} U={}", self.pilot_slots, self.users));
        }
        if !self.pilot_slots.is_power_of_two() {
            return fail(format!("T={} is not a power of two", self.pilot_slots));
        }
        if !(self.symbol_energy > 0.0 && self.symbol_energy.is_finite()) {
            return fail(format!("symbol energy {} must be positive", self.symbol_energy));
        }
        if self.snr_db.is_nan() {
            return fail("SNR is NaN".into());
        }
        self.jammer.validate(self)
    }
}

/// Ground truth of one frame, kept for scoring and for genie-aided detectors.
#[derive(Debug, Clone)]
pub struct FrameTruth {
    /// `H`, `B x U`.
    pub channel: ComplexMatrix,
    /// `h_j`, length `B`.
    pub jammer_channel: ComplexVector,
    /// `S_T`, `U x T`.
    pub pilots: ComplexMatrix,
    /// `S_D`, `U x D`.
    pub data: ComplexMatrix,
    /// `U x 2D` payload bits.
    pub bits: BitMatrix,
    /// `w`, length `K`; zero in inactive slots.
    pub jammer_symbols: ComplexVector,
    /// `N`, `B x K`.
    pub noise: ComplexMatrix,
    /// `N0`.
    pub noise_variance: f64,
}

impl FrameTruth {
    /// `S = [S_T, S_D]`.
    pub fn transmit_matrix(&self) -> ComplexMatrix {
        self.pilots.hstack(&self.data).expect("pilot and data blocks share U rows")
    }

    /// `h_j w^T`.
    pub fn jammer_term(&self) -> ComplexMatrix {
        let hj = self.jammer_channel.as_slice();
        let w = self.jammer_symbols.as_slice();
        ComplexMatrix::from_fn(hj.len(), w.len(), |b, k| hj[b] * w[k])
    }
}

#[derive(Debug, Clone)]
pub struct ReceivedFrame {
    /// `Y`, `B x K`.
    pub y: ComplexMatrix,
    pub truth: FrameTruth,
}

impl ReceivedFrame {
    pub fn pilot_slots(&self) -> usize {
        self.truth.pilots.cols()
    }

    /// `Y_[1:T]`.
    pub fn received_pilots(&self) -> ComplexMatrix {
        self.y.columns(0, self.pilot_slots())
    }

    /// `Y_[T+1:K]`.
    pub fn received_data(&self) -> ComplexMatrix {
        self.y.columns(self.pilot_slots(), self.y.cols())
    }

    /// The same frame with the jammer removed: identical `H`, `S` and `N`.
    pub fn jammerless(&self) -> ReceivedFrame {
        let mut truth = self.truth.clone();
        truth.jammer_symbols = ComplexVector::zeros(truth.jammer_symbols.len());
        let y = receive(&truth.channel, &truth.transmit_matrix(), &truth.jammer_term(), &truth.noise);
        ReceivedFrame { y, truth }
    }
}

fn receive(h: &ComplexMatrix, s: &ComplexMatrix, jam: &ComplexMatrix, noise: &ComplexMatrix) -> ComplexMatrix {
    let hs = h * s;
    &(&hs + jam) + noise
}

/// First `users` rows of the `slots x slots` Sylvester Hadamard matrix, scaled
/// to entries `+-sqrt(Es)`.
pub fn hadamard_pilots(users: usize, slots: usize, es: f64) -> Result<ComplexMatrix> {
    if slots == 0 || !slots.is_power_of_two() {
        return Err(Error::InvalidConfig(format!("pilot length {slots} is not a power of two")));
    }
    if users > slots {
        return Err(Error::InvalidConfig(format!("{users} UEs need at least {users} pilot slots")));
    }
    let amp = es.sqrt();
    // Sylvester: H[r, c] = (-1)^{popcount(r & c)}.
    Ok(ComplexMatrix::from_fn(users, slots, |r, c| {
        let sign = if (r & c).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
        Complex64::new(sign * amp, 0.0)
    }))
}

/// One circularly-symmetric `CN(0, 1)` sample.
pub fn draw_complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// i.i.d. `CN(0, 1)` entries.
pub fn draw_rayleigh_channel<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| draw_complex_gaussian(rng))
}

/// Uniform payload bits and their Gray-mapped QPSK symbols.
pub fn draw_qpsk_payload<R: Rng + ?Sized>(
    rng: &mut R,
    users: usize,
    slots: usize,
    es: f64,
) -> (BitMatrix, ComplexMatrix) {
    let mut bits = BitMatrix::zeros(users, 2 * slots);
    for u in 0..users {
        for c in 0..2 * slots {
            bits.set(u, c, rng.random::<bool>());
        }
    }
    let symbols = qpsk::modulate(&bits, es);
    (bits, symbols)
}

/// `N0 = U Es / snr`, since `E|HS|^2 = B K U Es` and `E|N|^2 = B K N0`.
pub fn noise_variance_from_snr(cfg: &SystemConfig) -> f64 {
    let snr = 10f64.powf(cfg.snr_db / 10.0);
    cfg.users as f64 * cfg.symbol_energy / snr
}

/// Jammer symbol vector `w` of length `K` for `profile`.
pub fn jammer_transmit<R: Rng + ?Sized>(
    profile: &JammerProfile,
    cfg: &SystemConfig,
    pilots: &ComplexMatrix,
    rng: &mut R,
) -> Result<ComplexVector> {
    profile.validate(cfg)?;
    let k = cfg.coherence_slots();
    let t = cfg.pilot_slots;
    if pilots.shape() != (cfg.users, t) {
        return Err(Error::DimensionMismatch {
            op: "jammer_transmit pilots",
            lhs: (cfg.users, t),
            rhs: pilots.shape(),
        });
    }
    let energy = profile.active_energy(cfg);
    let mut w = vec![Complex64::new(0.0, 0.0); k];

    let active: Vec<usize> = match profile.kind {
        JammerKind::None => return Ok(ComplexVector::from_vec(w)),
        JammerKind::ImpersonateSingle | JammerKind::ImpersonateAverage => {
            let count = if profile.kind == JammerKind::ImpersonateSingle {
                1
            } else {
                profile.target_count
            };
            let mut replay = vec![Complex64::new(0.0, 0.0); t];
            for i in 0..count {
                let row = pilots.row((profile.target_ue + i) % cfg.users);
                for (acc, z) in replay.iter_mut().zip(row) {
                    *acc += z / count as f64;
                }
            }
            let power = replay.iter().map(Complex64::norm_sqr).sum::<f64>() / t as f64;
            let gain = (energy / power).sqrt();
            for (dst, z) in w.iter_mut().zip(&replay) {
                *dst = z * gain;
            }
            return Ok(ComplexVector::from_vec(w));
        }
        JammerKind::Barrage => (0..k).collect(),
        JammerKind::Pilot => (0..t).collect(),
        JammerKind::Data => (t..k).collect(),
        JammerKind::Sparse => {
            let mut slots = sample(rng, k, profile.sparse_slots(k)).into_vec();
            slots.sort_unstable();
            slots
        }
    };

    for slot in active {
        w[slot] = match profile.constellation {
            JammerConstellation::Gaussian => draw_complex_gaussian(rng) * energy.sqrt(),
            JammerConstellation::Qpsk => qpsk::map_symbol(rng.random(), rng.random(), energy),
        };
    }
    Ok(ComplexVector::from_vec(w))
}

/// Draws a frame and its receive matrix.
///
/// Draw order is `H`, `h_j`, payload, noise, then jammer symbols, so frames
/// from the same generator state share `H`, `S` and `N` regardless of the
/// jammer profile.
pub fn synthesize_frame<R: Rng + ?Sized>(cfg: &SystemConfig, rng: &mut R) -> Result<ReceivedFrame> {
    cfg.validate()?;
    let (b, u, k) = (cfg.antennas, cfg.users, cfg.coherence_slots());
    let es = cfg.symbol_energy;
    let n0 = cfg.noise_variance();

    let pilots = hadamard_pilots(u, cfg.pilot_slots, es)?;
    let channel = draw_rayleigh_channel(rng, b, u);
    let jammer_channel = ComplexVector::from_vec((0..b).map(|_| draw_complex_gaussian(rng)).collect());
    let (bits, data) = draw_qpsk_payload(rng, u, cfg.data_slots, es);
    let noise = draw_rayleigh_channel(rng, b, k).scale(n0.sqrt());
    let jammer_symbols = jammer_transmit(&cfg.jammer, cfg, &pilots, rng)?;

    let truth = FrameTruth {
        channel,
        jammer_channel,
        pilots,
        data,
        bits,
        jammer_symbols,
        noise,
        noise_variance: n0,
    };
    let y = receive(&truth.channel, &truth.transmit_matrix(), &truth.jammer_term(), &truth.noise);
    Ok(ReceivedFrame { y, truth })
}
