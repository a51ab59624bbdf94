//! Command-line experiments on top of `freqwalk-core`.

pub mod config;
pub mod emit;
pub mod error;
pub mod run;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{parse_angle, Angle, AngleList, EngineChoice, Experiment, Format, OpList, RawConfig, RunConfig};
pub use crate::error::{CliError, Result};

#[derive(Debug, Parser)]
#[command(name = "freqwalk", version, about = "Quantum walks on a synthetic frequency lattice")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Quasienergy bands over the Brillouin zone.
    Band(Flags),
    /// Site distributions P(m, n) after each roundtrip.
    Evolve(Flags),
    /// Diffusion distance of the classical, Hadamard and synthetic walks.
    Diffusion(Flags),
    /// Reconstruct a single-qubit gate from lattice runs.
    Gate(Flags),
    /// Prepare |phi1, phi2> with the four-roundtrip sequence.
    Prepare(Flags),
    /// Reconstruct a path/polarization register sequence.
    Cnot(Flags),
    /// Run whichever experiment the config file names.
    Run(Flags),
}

fn angle(s: &str) -> std::result::Result<Angle, String> {
    parse_angle(s).map(Angle)
}

fn angles(s: &str) -> std::result::Result<AngleList, String> {
    AngleList::parse(s)
}

#[derive(Debug, Args)]
struct Flags {
    /// JSON config file; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output path (stdout if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long, value_enum)]
    engine: Option<EngineChoice>,
    /// Modulation strength; a comma list for `diffusion`. Accepts `3pi`, `0.06pi`, ...
    #[arg(long, value_parser = angles, allow_hyphen_values = true)]
    gamma: Option<AngleList>,
    #[arg(long, value_parser = angle, allow_hyphen_values = true)]
    theta: Option<Angle>,
    #[arg(long, value_parser = angle, allow_hyphen_values = true)]
    phi_h: Option<Angle>,
    #[arg(long, value_parser = angle, allow_hyphen_values = true)]
    phi_v: Option<Angle>,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long)]
    half_width: Option<usize>,
    /// Wavepacket width in sites.
    #[arg(long)]
    delta: Option<f64>,
    /// Packet quasimomentum, or the gate working point.
    #[arg(long, value_parser = angle, allow_hyphen_values = true)]
    q: Option<Angle>,
    #[arg(long)]
    n_k: Option<usize>,
    /// X, Y, Z, H or Rz.
    #[arg(long = "gate")]
    gate_name: Option<String>,
    #[arg(long, value_parser = angle, allow_hyphen_values = true)]
    rz_phi: Option<Angle>,
    #[arg(long, value_parser = angle, allow_hyphen_values = true)]
    phi1: Option<Angle>,
    #[arg(long, value_parser = angle, allow_hyphen_values = true)]
    phi2: Option<Angle>,
    /// Register ops in application order, e.g. `x,cnot,x`.
    #[arg(long, value_parser = |s: &str| Ok::<_, String>(OpList::parse(s)))]
    sequence: Option<OpList>,
}

impl Flags {
    fn into_raw(self, experiment: Option<Experiment>) -> (Option<PathBuf>, RawConfig) {
        let raw = RawConfig {
            experiment,
            gamma: self.gamma,
            theta: self.theta,
            phi_h: self.phi_h,
            phi_v: self.phi_v,
            steps: self.steps,
            half_width: self.half_width,
            delta: self.delta,
            q: self.q,
            engine: self.engine,
            n_k: self.n_k,
            gate_name: self.gate_name,
            rz_phi: self.rz_phi,
            phi1: self.phi1,
            phi2: self.phi2,
            sequence: self.sequence,
            output_path: self.out,
            format: self.format,
        };
        (self.config, raw)
    }
}

/// Merge file and flags into a validated config.
pub fn parse_config(file: Option<&std::path::Path>, flags: RawConfig) -> Result<RunConfig> {
    let base = match file {
        Some(p) => RawConfig::from_file(p)?,
        None => RawConfig::default(),
    };
    RunConfig::resolve(flags.over(base))
}

fn execute(flags: Flags, experiment: Option<Experiment>) -> Result<()> {
    let (file, raw) = flags.into_raw(experiment);
    let cfg = parse_config(file.as_deref(), raw)?;
    log::debug!("config {}", cfg.echo());
    let ds = run::run(&cfg)?;
    emit::emit(&ds, cfg.output_path.as_deref(), cfg.format)
}

/// Parse `args`, run, and return the process exit code.
pub fn main_with_args<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let outcome = match cli.command {
        Command::Band(f) => execute(f, Some(Experiment::Band)),
        Command::Evolve(f) => execute(f, Some(Experiment::Evolve)),
        Command::Diffusion(f) => execute(f, Some(Experiment::Diffusion)),
        Command::Gate(f) => execute(f, Some(Experiment::Gate)),
        Command::Prepare(f) => execute(f, Some(Experiment::Prepare)),
        Command::Cnot(f) => execute(f, Some(Experiment::Cnot)),
        Command::Run(f) => execute(f, None),
    };
    match outcome {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
