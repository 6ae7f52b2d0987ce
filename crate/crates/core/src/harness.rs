//! Monte-Carlo BER driver.
//!
//! Every SNR point draws `frames_per_point` frames from per-frame child
//! generators and runs all requested detectors on the same frames. Error
//! counts are summed, so the result does not depend on the thread count.

use std::fmt;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;

use crate::baselines::{detect_genie_pos, detect_jl_jed, detect_lmmse_baseline};
use crate::channel::{synthesize_frame, JammerConstellation, JammerKind, JammerProfile, StrengthMode, SystemConfig};
use crate::error::{Error, Result};
use crate::maed::{run_maed, BbRule, SolverConfig};
use crate::qpsk::BitMatrix;
use crate::rng::frame_rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Detector {
    Lmmse,
    GeniePos,
    Maed,
    JlJed,
}

impl Detector {
    pub const ALL: [Detector; 4] = [Detector::Lmmse, Detector::GeniePos, Detector::Maed, Detector::JlJed];

    pub fn name(self) -> &'static str {
        match self {
            Detector::Lmmse => "lmmse",
            Detector::GeniePos => "geniepos",
            Detector::Maed => "maed",
            Detector::JlJed => "jljed",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "lmmse" => Ok(Detector::Lmmse),
            "geniepos" | "genie-pos" | "genie" => Ok(Detector::GeniePos),
            "maed" => Ok(Detector::Maed),
            "jljed" | "jl-jed" => Ok(Detector::JlJed),
            other => Err(Error::Parse(format!("unknown detector `{other}`"))),
        }
    }

    /// Comma-separated list, or `all`.
    pub fn parse_list(s: &str) -> Result<Vec<Self>> {
        if s.trim().eq_ignore_ascii_case("all") {
            return Ok(Self::ALL.to_vec());
        }
        let mut out: Vec<Self> = s.split(',').filter(|t| !t.trim().is_empty()).map(Self::parse).collect::<Result<_>>()?;
        out.sort();
        out.dedup();
        Ok(out)
    }
}

impl fmt::Display for Detector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub base: SystemConfig,
    pub snr_grid_db: Vec<f64>,
    pub detectors: Vec<Detector>,
    pub frames_per_point: usize,
    pub master_seed: u64,
    pub solver: SolverConfig,
    pub per_ue_report: bool,
    /// UEs left out of the aggregate BER. Per-UE columns still cover all UEs.
    pub exclude_ues: Vec<usize>,
    /// Appended to detector names in the output, e.g. `maed-t10`.
    pub label: Option<String>,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        Self {
            base: SystemConfig::default(),
            snr_grid_db: vec![0.0, 5.0, 10.0],
            detectors: Detector::ALL.to_vec(),
            frames_per_point: 100,
            master_seed: 1,
            solver: SolverConfig::default(),
            per_ue_report: false,
            exclude_ues: Vec::new(),
            label: None,
        }
    }
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        if self.frames_per_point == 0 {
            return Err(Error::InvalidConfig("frames_per_point must be at least 1".into()));
        }
        if self.snr_grid_db.is_empty() {
            return Err(Error::InvalidConfig("SNR grid is empty".into()));
        }
        if self.detectors.is_empty() {
            return Err(Error::InvalidConfig("no detectors selected".into()));
        }
        if let Some(&u) = self.exclude_ues.iter().find(|&&u| u >= self.base.users) {
            return Err(Error::InvalidConfig(format!("excluded UE {u} out of range")));
        }
        if self.exclude_ues.len() >= self.base.users {
            return Err(Error::InvalidConfig("every UE is excluded".into()));
        }
        self.solver.validate()?;
        for &snr in &self.snr_grid_db {
            self.base.clone().with_snr_db(snr).validate()?;
        }
        Ok(())
    }

    fn record_name(&self, det: Detector) -> String {
        match &self.label {
            Some(l) => format!("{}-{l}", det.name()),
            None => det.name().to_string(),
        }
    }

    /// Applies one `key = value` setting. Keys mirror the field names;
    /// jammer fields (`jammer`, `rho_e_db`, `rho_p_db`, ...) edit `base.jammer`.
    pub fn apply_setting(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        let bad = |what: &str| Error::Parse(format!("invalid {what} `{value}` for key `{key}`"));
        let usize_val = || value.parse::<usize>().map_err(|_| bad("count"));
        let f64_val = || value.parse::<f64>().map_err(|_| bad("number"));
        let bool_val = || match value.to_ascii_lowercase().as_str() {
            "true" | "yes" | "1" | "on" => Ok(true),
            "false" | "no" | "0" | "off" => Ok(false),
            _ => Err(bad("flag")),
        };
        let j = &mut self.base.jammer;
        match key.trim() {
            "antennas" | "B" => self.base.antennas = usize_val()?,
            "users" | "U" => self.base.users = usize_val()?,
            "pilot_slots" | "T" => self.base.pilot_slots = usize_val()?,
            "data_slots" | "D" => self.base.data_slots = usize_val()?,
            "symbol_energy" | "Es" => self.base.symbol_energy = f64_val()?,
            "snr_grid_db" | "snr_db" => self.snr_grid_db = parse_snr_grid(value)?,
            "detectors" => self.detectors = Detector::parse_list(value)?,
            "frames_per_point" | "frames" => self.frames_per_point = usize_val()?,
            "master_seed" | "seed" => {
                self.master_seed = value.parse().map_err(|_| bad("seed"))?;
                self.base.seed = self.master_seed;
            }
            "t_max" | "tmax" => self.solver.t_max = usize_val()?,
            "tau0" => self.solver.tau0 = f64_val()?,
            "project_enabled" => self.solver.project_enabled = bool_val()?,
            "bb_rule" => {
                self.solver.bb_rule = match value.to_ascii_lowercase().as_str() {
                    "adaptive" => BbRule::Adaptive,
                    "alternating" => BbRule::Alternating,
                    _ => return Err(bad("stepsize rule")),
                }
            }
            "bb_growth" => self.solver.bb_growth = f64_val()?,
            "per_ue_report" => self.per_ue_report = bool_val()?,
            "exclude_ues" => {
                self.exclude_ues = value
                    .split(',')
                    .filter(|t| !t.trim().is_empty())
                    .map(|t| t.trim().parse::<usize>().map_err(|_| bad("UE index")))
                    .collect::<Result<_>>()?
            }
            "label" => self.label = (!value.is_empty()).then(|| value.to_string()),
            "jammer" => {
                j.kind = JammerKind::parse(value)?;
                if j.kind.is_impersonation() {
                    j.strength_mode = StrengthMode::ActivePower;
                }
            }
            "jammer_constellation" | "constellation" => j.constellation = JammerConstellation::parse(value)?,
            "rho_e_db" => {
                j.strength_db = f64_val()?;
                j.strength_mode = StrengthMode::TotalEnergy;
            }
            "rho_p_db" => {
                j.strength_db = f64_val()?;
                j.strength_mode = StrengthMode::ActivePower;
            }
            "duty" | "sparse_duty" => j.sparse_duty = f64_val()?,
            "target_ue" => j.target_ue = usize_val()?,
            "target_count" => j.target_count = usize_val()?,
            other => return Err(Error::Parse(format!("unknown key `{other}`"))),
        }
        Ok(())
    }

    /// Parses a flat `key = value` file on top of the defaults. `#` starts a
    /// comment; blank lines are ignored.
    pub fn from_config_str(text: &str) -> Result<Self> {
        let mut spec = Self::default();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("line {}: expected `key = value`", n + 1)))?;
            spec.apply_setting(k, v)
                .map_err(|e| Error::Parse(format!("line {}: {e}", n + 1)))?;
        }
        Ok(spec)
    }

    pub fn from_config_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_config_str(&text)
    }
}

/// `a,b,c` or an inclusive range `start:step:stop`.
pub fn parse_snr_grid(s: &str) -> Result<Vec<f64>> {
    let bad = || Error::Parse(format!("invalid SNR grid `{s}`"));
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| bad());
    let parts: Vec<&str> = s.split(':').collect();
    let grid = match parts.as_slice() {
        [start, step, stop] => {
            let (start, step, stop) = (num(start)?, num(step)?, num(stop)?);
            if !(step > 0.0) || stop < start {
                return Err(bad());
            }
            let n = ((stop - start) / step + 1e-9).floor() as usize;
            (0..=n).map(|i| start + i as f64 * step).collect()
        }
        [_] => s.split(',').filter(|t| !t.trim().is_empty()).map(num).collect::<Result<Vec<_>>>()?,
        _ => return Err(bad()),
    };
    if grid.is_empty() || grid.iter().any(|x| !x.is_finite()) {
        return Err(bad());
    }
    Ok(grid)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BerRecord {
    pub detector: String,
    pub snr_db: f64,
    pub bits_total: u64,
    pub bit_errors: u64,
    pub ber: f64,
    pub per_ue_ber: Option<Vec<f64>>,
    /// Detector time summed over frames.
    pub wallclock_s: f64,
    /// Raw per-UE error counts, always kept.
    pub ue_bit_errors: Vec<u64>,
    pub bits_per_ue: u64,
}

impl BerRecord {
    fn from_counts(detector: String, snr_db: f64, ue_errors: Vec<u64>, bits_per_ue: u64, exclude: &[usize], per_ue: bool, wallclock_s: f64) -> Self {
        let kept = ue_errors.iter().enumerate().filter(|(u, _)| !exclude.contains(u));
        let (bit_errors, users) = kept.fold((0, 0), |(e, n), (_, &x)| (e + x, n + 1));
        let bits_total = bits_per_ue * users;
        Self {
            detector,
            snr_db,
            bits_total,
            bit_errors,
            ber: ratio(bit_errors, bits_total),
            per_ue_ber: per_ue.then(|| ue_errors.iter().map(|&e| ratio(e, bits_per_ue)).collect()),
            wallclock_s,
            ue_bit_errors: ue_errors,
            bits_per_ue,
        }
    }

    /// The same record with the aggregate recomputed over all UEs not in `ues`.
    pub fn excluding(&self, ues: &[usize], detector: impl Into<String>) -> Self {
        Self::from_counts(
            detector.into(),
            self.snr_db,
            self.ue_bit_errors.clone(),
            self.bits_per_ue,
            ues,
            self.per_ue_ber.is_some(),
            self.wallclock_s,
        )
    }

    /// One binomial standard deviation of the BER estimate.
    pub fn std_error(&self) -> f64 {
        if self.bits_total == 0 {
            return 0.0;
        }
        (self.ber * (1.0 - self.ber) / self.bits_total as f64).sqrt()
    }
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

#[derive(Clone)]
struct Tally {
    errors: Vec<Vec<u64>>,
    seconds: Vec<f64>,
}

impl Tally {
    fn new(detectors: usize, users: usize) -> Self {
        Self {
            errors: vec![vec![0; users]; detectors],
            seconds: vec![0.0; detectors],
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        for (a, b) in self.errors.iter_mut().zip(&other.errors) {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
        }
        for (a, b) in self.seconds.iter_mut().zip(&other.seconds) {
            *a += b;
        }
        self
    }
}

/// Runs the detectors on one frame and returns per-detector, per-UE errors.
fn run_frame(spec: &ExperimentSpec, cfg: &SystemConfig, snr_index: usize, frame_index: usize) -> Result<Tally> {
    let mut rng = frame_rng(spec.master_seed, snr_index as u64, frame_index as u64);
    let frame = synthesize_frame(cfg, &mut rng)?;
    let truth = &frame.truth.bits;
    let mut tally = Tally::new(spec.detectors.len(), cfg.users);
    for (i, det) in spec.detectors.iter().enumerate() {
        let start = Instant::now();
        let bits: BitMatrix = match det {
            Detector::Lmmse => detect_lmmse_baseline(&frame, cfg)?.bits,
            Detector::GeniePos => detect_genie_pos(&frame, cfg)?.bits,
            Detector::Maed => run_maed(&frame.y, &frame.truth.pilots, cfg.symbol_energy, &spec.solver)?.bits,
            Detector::JlJed => detect_jl_jed(&frame.jammerless(), cfg, &spec.solver)?.bits,
        };
        tally.seconds[i] = start.elapsed().as_secs_f64();
        tally.errors[i] = bits.row_errors(truth);
    }
    Ok(tally)
}

/// Runs the sweep. Records come out grouped by detector, SNR ascending.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Vec<BerRecord>> {
    spec.validate()?;
    let users = spec.base.users;
    let bits_per_frame_ue = 2 * spec.base.data_slots as u64;
    let mut by_snr = Vec::with_capacity(spec.snr_grid_db.len());
    for (si, &snr) in spec.snr_grid_db.iter().enumerate() {
        let cfg = spec.base.clone().with_snr_db(snr);
        let tally = (0..spec.frames_per_point)
            .into_par_iter()
            .map(|f| {
                run_frame(spec, &cfg, si, f).map_err(|e| Error::Frame {
                    snr_db: snr,
                    frame: f,
                    source: Box::new(e),
                })
            })
            .try_reduce(|| Tally::new(spec.detectors.len(), users), |a, b| Ok(a.merge(b)))?;
        log::info!("snr {snr} dB: {} frames done", spec.frames_per_point);
        by_snr.push((snr, tally));
    }
    let bits_per_ue = bits_per_frame_ue * spec.frames_per_point as u64;
    let mut records = Vec::new();
    for (di, &det) in spec.detectors.iter().enumerate() {
        for (snr, tally) in &by_snr {
            records.push(BerRecord::from_counts(
                spec.record_name(det),
                *snr,
                tally.errors[di].clone(),
                bits_per_ue,
                &spec.exclude_ues,
                spec.per_ue_report,
                tally.seconds[di],
            ));
        }
    }
    sort_records(&mut records);
    Ok(records)
}

/// Canonical row order: detector (known detectors first, in their fixed
/// order, then by name), then ascending SNR.
pub fn sort_records(records: &mut [BerRecord]) {
    let rank = |name: &str| {
        let base = name.split('-').next().unwrap_or(name);
        Detector::parse(base).map(|d| d as usize).unwrap_or(usize::MAX)
    };
    records.sort_by(|a, b| {
        rank(&a.detector)
            .cmp(&rank(&b.detector))
            .then_with(|| a.detector.cmp(&b.detector))
            .then_with(|| a.snr_db.total_cmp(&b.snr_db))
    });
}

/// Plain decimal with six significant digits, e.g. `0.00123457`, `10.0000`.
pub fn format_sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.5e}", x.abs());
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    let sign = if x < 0.0 { "-" } else { "" };
    let body = if exp < 0 {
        format!("0.{}{digits}", "0".repeat((-exp - 1) as usize))
    } else if (exp as usize) < digits.len() - 1 {
        let (int, frac) = digits.split_at(exp as usize + 1);
        format!("{int}.{frac}")
    } else {
        format!("{digits}{}", "0".repeat(exp as usize + 1 - digits.len()))
    };
    format!("{sign}{body}")
}

pub fn csv_string(records: &[BerRecord], with_wallclock: bool) -> String {
    let ue_cols = records.iter().filter_map(|r| r.per_ue_ber.as_ref().map(Vec::len)).max().unwrap_or(0);
    let mut out = String::from("detector,snr_db,bits_total,bit_errors,ber");
    if with_wallclock {
        out.push_str(",wallclock_s");
    }
    for u in 0..ue_cols {
        out.push_str(&format!(",ue{u}_ber"));
    }
    out.push('\n');
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{}",
            r.detector,
            format_sig6(r.snr_db),
            r.bits_total,
            r.bit_errors,
            format_sig6(r.ber)
        ));
        if with_wallclock {
            out.push(',');
            out.push_str(&format_sig6(r.wallclock_s));
        }
        for u in 0..ue_cols {
            out.push(',');
            if let Some(v) = r.per_ue_ber.as_ref().and_then(|p| p.get(u)) {
                out.push_str(&format_sig6(*v));
            }
        }
        out.push('\n');
    }
    out
}

pub fn emit_csv(records: &[BerRecord], path: &Path, with_wallclock: bool) -> Result<()> {
    std::fs::write(path, csv_string(records, with_wallclock)).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// One parsed CSV row: detector, SNR and BER (other columns are skipped).
#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    pub detector: String,
    pub snr_db: f64,
    pub bits_total: u64,
    pub bit_errors: u64,
    pub ber: f64,
}

pub fn parse_csv(text: &str) -> Result<Vec<CsvRow>> {
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().ok_or_else(|| Error::Parse("empty CSV".into()))?.split(',').collect();
    let col = |name: &str| {
        header
            .iter()
            .position(|h| *h == name)
            .ok_or_else(|| Error::Parse(format!("missing column `{name}`")))
    };
    let (cd, cs, cb, ce, cr) = (col("detector")?, col("snr_db")?, col("bits_total")?, col("bit_errors")?, col("ber")?);
    lines
        .filter(|l| !l.is_empty())
        .map(|line| {
            let f: Vec<&str> = line.split(',').collect();
            let get = |i: usize| f.get(i).copied().ok_or_else(|| Error::Parse(format!("short row `{line}`")));
            let num = |i: usize| get(i)?.parse::<f64>().map_err(|_| Error::Parse(format!("bad number in `{line}`")));
            let int = |i: usize| get(i)?.parse::<u64>().map_err(|_| Error::Parse(format!("bad count in `{line}`")));
            Ok(CsvRow {
                detector: get(cd)?.to_string(),
                snr_db: num(cs)?,
                bits_total: int(cb)?,
                bit_errors: int(ce)?,
                ber: num(cr)?,
            })
        })
        .collect()
}

/// Named scenario presets, one per published figure panel.
pub mod figures {
    use super::*;

    pub const NAMES: [&str; 12] = [
        "fig2a", "fig2b", "fig2c", "fig2d", "fig3a", "fig3b", "fig3c", "fig3d", "fig4a", "fig4b", "fig5a", "fig5b",
    ];

    /// Default SNR grid for the presets.
    pub fn default_grid() -> Vec<f64> {
        (-2..=8).map(|i| 2.0 * i as f64).collect()
    }

    const JAMMERS: [JammerKind; 4] = [JammerKind::Barrage, JammerKind::Pilot, JammerKind::Data, JammerKind::Sparse];

    /// The runs that make up a figure. Most figures are a single run; the
    /// convergence and multi-target figures are one run per curve.
    pub fn preset(name: &str, frames: usize, seed: u64) -> Result<Vec<ExperimentSpec>> {
        let spec = |jammer: JammerProfile| ExperimentSpec {
            base: SystemConfig::default().with_jammer(jammer),
            snr_grid_db: default_grid(),
            detectors: Detector::ALL.to_vec(),
            frames_per_point: frames,
            master_seed: seed,
            ..ExperimentSpec::default()
        };
        let panel = |s: &str| -> Option<usize> { s.chars().last().and_then(|c| "abcd".find(c)) };
        let n = name.to_ascii_lowercase();
        Ok(match n.as_str() {
            _ if n.starts_with("fig2") && n.len() == 5 && panel(&n).is_some() => {
                vec![spec(JammerProfile::strong(JAMMERS[panel(&n).unwrap()], 25.0))]
            }
            _ if n.starts_with("fig3") && n.len() == 5 && panel(&n).is_some() => {
                vec![spec(JammerProfile::weak(JAMMERS[panel(&n).unwrap()], 0.0))]
            }
            "fig4a" => vec![spec(JammerProfile::none())],
            "fig4b" => {
                let mut runs = Vec::new();
                for t_max in [10, 30, 100] {
                    for (tag, jammer) in [("jl", JammerProfile::none()), ("j25", JammerProfile::strong(JammerKind::Barrage, 25.0))] {
                        let mut s = spec(jammer);
                        s.detectors = vec![Detector::Maed];
                        s.solver = s.solver.with_t_max(t_max);
                        s.label = Some(format!("t{t_max}-{tag}"));
                        runs.push(s);
                    }
                }
                runs
            }
            "fig5a" => {
                let mut s = spec(JammerProfile::impersonate_single(0, 25.0));
                s.detectors = vec![Detector::Lmmse, Detector::GeniePos, Detector::Maed];
                s.per_ue_report = true;
                vec![s]
            }
            "fig5b" => [1, 2, 4, 8]
                .into_iter()
                .map(|count| {
                    let mut s = spec(JammerProfile::impersonate_average(count, 25.0));
                    s.detectors = vec![Detector::Maed];
                    s.label = Some(format!("avg{count}"));
                    s
                })
                .collect(),
            _ => return Err(Error::InvalidConfig(format!("unknown figure `{name}`; expected one of {}", NAMES.join(", ")))),
        })
    }

    /// Runs every spec of a figure. For `fig5a` each record is followed by
    /// its counterpart over all UEs but the attacked one (suffix `-others`).
    pub fn run(name: &str, specs: &[ExperimentSpec]) -> Result<Vec<BerRecord>> {
        let mut out = Vec::new();
        for s in specs {
            let records = run_experiment(s)?;
            if name.eq_ignore_ascii_case("fig5a") {
                let target = s.base.jammer.target_ue;
                for r in records {
                    let others = r.excluding(&[target], format!("{}-others", r.detector));
                    out.push(r);
                    out.push(others);
                }
            } else {
                out.extend(records);
            }
        }
        sort_records(&mut out);
        Ok(out)
    }
}
