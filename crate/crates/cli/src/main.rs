use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qrframe_cli::config::{Command, RawConfig, ScenarioConfig};
use qrframe_cli::{run, CliError};

#[derive(Parser)]
#[command(name = "qrframe", version, about = "Quantum reference frame scenarios: overlaps, change of frame, classical limits, homodyne tables")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Overlap curves D|<g|psi(e)>|^2 for a frame family.
    Overlap(Flags),
    /// Change-of-frame pipeline: P(h), fidelity, pipeline-vs-prediction residual.
    ChangeFrame(Flags),
    /// Recover-after-encode fidelity over a list of frame sizes.
    LimitSweep(Flags),
    /// Balanced-homodyne outcome tables.
    Bhd(Flags),
}

#[derive(Args)]
struct Flags {
    /// Flat TOML file with the same keys as the flags; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// u1, su2 or su2-coset.
    #[arg(long)]
    group: Option<String>,
    /// pe, cs, fiducial or coset.
    #[arg(long)]
    family: Option<String>,
    /// Size of frame A (cutoff, amplitude, maximum spin or j).
    #[arg(long = "s-a", allow_hyphen_values = true)]
    s_a: Option<String>,
    /// Size of frame B.
    #[arg(long = "s-b", allow_hyphen_values = true)]
    s_b: Option<String>,
    /// plus, fock:k, mixed:d, spin:j:theta:phi or amps:re,im;...
    #[arg(long)]
    system: Option<String>,
    /// Orientation of frame A: theta (u1), omega,theta,phi or euler:a,b,g (su2).
    #[arg(long = "orientation-a", allow_hyphen_values = true)]
    orientation_a: Option<String>,
    /// A single outcome h, in the same format as the orientation.
    #[arg(long, allow_hyphen_values = true)]
    outcome: Option<String>,
    /// Outcome grid: number of points (u1) or bandlimit (su2).
    #[arg(long = "outcome-grid")]
    outcome_grid: Option<String>,
    /// Haar-grid bandlimit for the instrument.
    #[arg(long)]
    bandlimit: Option<String>,
    /// Number of curve points (overlap).
    #[arg(long)]
    points: Option<String>,
    /// Comma-separated frame sizes (limit-sweep).
    #[arg(long)]
    sizes: Option<String>,
    /// two-cs, equal-cs, large-cs, cs-pe or two-pe (bhd).
    #[arg(long)]
    regime: Option<String>,
    /// Phase of input A (bhd).
    #[arg(long = "phase-a", allow_hyphen_values = true)]
    phase_a: Option<String>,
    /// Phase of input B (bhd).
    #[arg(long = "phase-b", allow_hyphen_values = true)]
    phase_b: Option<String>,
    /// Largest j tabulated (bhd).
    #[arg(long = "max-j")]
    max_j: Option<String>,
    /// Output path; stdout when absent.
    #[arg(long)]
    out: Option<String>,
    /// csv or json.
    #[arg(long)]
    format: Option<String>,
}

impl Flags {
    fn raw(&self) -> RawConfig {
        let mut raw = RawConfig::default();
        let pairs = [
            ("group", &self.group),
            ("family", &self.family),
            ("s-a", &self.s_a),
            ("s-b", &self.s_b),
            ("system", &self.system),
            ("orientation-a", &self.orientation_a),
            ("outcome", &self.outcome),
            ("outcome-grid", &self.outcome_grid),
            ("bandlimit", &self.bandlimit),
            ("points", &self.points),
            ("sizes", &self.sizes),
            ("regime", &self.regime),
            ("phase-a", &self.phase_a),
            ("phase-b", &self.phase_b),
            ("max-j", &self.max_j),
            ("out", &self.out),
            ("format", &self.format),
        ];
        for (key, value) in pairs {
            if let Some(v) = value {
                raw.set(key, v.clone());
            }
        }
        raw
    }
}

fn execute(command: Command, flags: &Flags) -> Result<(), CliError> {
    let file = match &flags.config {
        Some(path) => RawConfig::from_file(path)?,
        None => RawConfig::default(),
    };
    let config = ScenarioConfig::from_raw(command, &file.overridden_by(flags.raw()))?;
    let report = run(&config)?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    match &config.out {
        Some(path) => {
            let mut f = std::fs::File::create(path)?;
            report.table.write(config.format, &mut f)?;
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            report.table.write(config.format, &mut stdout)?;
            stdout.flush()?;
        }
    }
    match report.violation {
        Some(msg) => Err(CliError::Numerical(msg)),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, flags) = match &cli.command {
        Sub::Overlap(f) => (Command::Overlap, f),
        Sub::ChangeFrame(f) => (Command::ChangeFrame, f),
        Sub::LimitSweep(f) => (Command::LimitSweep, f),
        Sub::Bhd(f) => (Command::Bhd, f),
    };
    match execute(command, flags) {
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
