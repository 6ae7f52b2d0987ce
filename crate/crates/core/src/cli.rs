//! Command-line front end: `sweep`, `figure` and `selftest`.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
use crate::harness::{csv_string, emit_csv, figures, run_experiment, BerRecord, ExperimentSpec};
use crate::selftest;

#[derive(Parser, Debug)]
#[command(name = "maed", version, about = "Jammer-resilient MU-MIMO detection: BER sweeps and figure presets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run an SNR sweep from a config file and/or flags.
    Sweep(SweepArgs),
    /// Run a named figure preset (fig2a..fig5b).
    Figure(FigureArgs),
    /// Run the built-in property checks.
    Selftest {
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Args, Debug, Default)]
struct Overrides {
    /// SNR grid in dB: `a,b,c` or `start:step:stop`.
    #[arg(long = "snr-db", allow_hyphen_values = true)]
    snr_db: Option<String>,
    /// none, j1..j4 (barrage, pilot, data, sparse), impersonate-single, impersonate-average.
    #[arg(long)]
    jammer: Option<String>,
    /// Total-energy jammer ratio in dB.
    #[arg(long = "rho-e-db", allow_hyphen_values = true, conflicts_with = "rho_p_db")]
    rho_e_db: Option<f64>,
    /// Active-power jammer ratio in dB.
    #[arg(long = "rho-p-db", allow_hyphen_values = true)]
    rho_p_db: Option<f64>,
    /// Jammer symbols: gaussian or qpsk.
    #[arg(long)]
    constellation: Option<String>,
    /// Sparse-jammer duty cycle.
    #[arg(long)]
    duty: Option<f64>,
    /// Attacked UE for impersonation jammers.
    #[arg(long)]
    target_ue: Option<usize>,
    /// Number of UEs whose pilots an averaging impersonator replays.
    #[arg(long)]
    target_count: Option<usize>,
    /// Comma-separated subset of lmmse,geniepos,maed,jljed, or `all`.
    #[arg(long)]
    detectors: Option<String>,
    #[arg(long)]
    frames: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    tmax: Option<usize>,
    /// Output CSV; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Leave out the wallclock column so reruns are byte-identical.
    #[arg(long)]
    no_wallclock: bool,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// `key = value` config file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    overrides: Overrides,
}

#[derive(Args, Debug)]
struct FigureArgs {
    name: String,
    #[command(flatten)]
    overrides: Overrides,
}

impl Overrides {
    fn apply(&self, spec: &mut ExperimentSpec) -> Result<()> {
        let mut set = |k: &str, v: Option<String>| v.map_or(Ok(()), |v| spec.apply_setting(k, &v));
        set("snr_grid_db", self.snr_db.clone())?;
        set("jammer", self.jammer.clone())?;
        set("rho_e_db", self.rho_e_db.map(|x| x.to_string()))?;
        set("rho_p_db", self.rho_p_db.map(|x| x.to_string()))?;
        set("constellation", self.constellation.clone())?;
        set("duty", self.duty.map(|x| x.to_string()))?;
        set("target_ue", self.target_ue.map(|x| x.to_string()))?;
        set("target_count", self.target_count.map(|x| x.to_string()))?;
        set("detectors", self.detectors.clone())?;
        set("frames_per_point", self.frames.map(|x| x.to_string()))?;
        set("master_seed", self.seed.map(|x| x.to_string()))?;
        set("t_max", self.tmax.map(|x| x.to_string()))?;
        Ok(())
    }

    fn write(&self, records: &[BerRecord]) -> Result<()> {
        let wallclock = !self.no_wallclock;
        match &self.out {
            Some(path) => {
                emit_csv(records, path, wallclock)?;
                log::info!("wrote {} records to {}", records.len(), path.display());
            }
            None => print!("{}", csv_string(records, wallclock)),
        }
        Ok(())
    }
}

fn sweep(args: &SweepArgs) -> Result<()> {
    let mut spec = match &args.config {
        Some(path) => ExperimentSpec::from_config_file(path)?,
        None => ExperimentSpec::default(),
    };
    args.overrides.apply(&mut spec)?;
    let records = run_experiment(&spec)?;
    args.overrides.write(&records)
}

fn figure(args: &FigureArgs) -> Result<()> {
    let mut specs = figures::preset(&args.name, 1000, 1)?;
    for spec in &mut specs {
        // Presets that restrict their detector set or solver keep it unless
        // the flags say otherwise.
        args.overrides.apply(spec)?;
    }
    let records = figures::run(&args.name, &specs)?;
    args.overrides.write(&records)
}

fn run_selftest(seed: u64) -> Result<()> {
    let checks = selftest::run_all(seed);
    for c in &checks {
        println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    if failed > 0 {
        return Err(Error::InvalidConfig(format!("{failed} self-test check(s) failed")));
    }
    Ok(())
}

/// Parses `argv` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
        }
    };
    let result = match &cli.command {
        Command::Sweep(args) => sweep(args),
        Command::Figure(args) => figure(args),
        Command::Selftest { seed } => run_selftest(*seed),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}
