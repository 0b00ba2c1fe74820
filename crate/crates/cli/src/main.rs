use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gaplab_cli::commands::Output;
use gaplab_cli::config::{Command, Settings};
use gaplab_cli::descriptor::Descriptor;
use gaplab_cli::error::CliError;

#[derive(Parser)]
#[command(name = "gaplab", version, about = "Gap, Riesz and Cayley metric experiments")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Distances between the sign-flipped diagonal operators t_n and t_0.
    Fuglede(Flags),
    /// Bounded approximants of an operator and their distances to it.
    Density(Flags),
    /// Randomized property suite over seeded matrix ensembles.
    Suite(Flags),
    /// Index-preserving path between two Fredholm operators.
    Homotopy(Flags),
    /// One distance between two operators.
    Metric(Flags),
}

#[derive(Args)]
struct Flags {
    /// JSON config; inline flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n_max: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    dim_max: Option<usize>,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long)]
    eps_step: Option<f64>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Operator descriptor (path or inline JSON) for `density`.
    #[arg(long)]
    operator: Option<String>,
    /// First operator descriptor (path or inline JSON).
    #[arg(long)]
    a: Option<String>,
    /// Second operator descriptor (path or inline JSON).
    #[arg(long)]
    b: Option<String>,
    /// gap_proj, gap_sup, riesz or tilde.
    #[arg(long)]
    which: Option<String>,
}

fn descriptor(arg: Option<String>, name: &str) -> Result<Option<Descriptor>, CliError> {
    let Some(arg) = arg else { return Ok(None) };
    let text = if arg.trim_start().starts_with('{') {
        arg
    } else {
        std::fs::read_to_string(&arg).map_err(|e| CliError::Config(format!("--{name} {arg}: {e}")))?
    };
    Descriptor::from_json(&text, &format!("--{name}")).map(Some)
}

impl Flags {
    fn settings(self) -> Result<Settings, CliError> {
        let file = match &self.config {
            Some(path) => Settings::from_file(path)?,
            None => Settings::default(),
        };
        let flags = Settings {
            schema: None,
            n_max: self.n_max,
            seed: self.seed,
            trials: self.trials,
            dim_max: self.dim_max,
            steps: self.steps,
            eps_step: self.eps_step,
            out: self.out,
            tolerances: None,
            operator: descriptor(self.operator, "operator")?,
            a: descriptor(self.a, "a")?,
            b: descriptor(self.b, "b")?,
            which: self.which,
        };
        Ok(file.overlay(flags))
    }
}

fn note_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".note.json");
    PathBuf::from(name)
}

fn emit(output: &Output, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => {
            std::fs::write(path, &output.body)?;
            if let Some(note) = &output.note {
                std::fs::write(note_path(path), note)?;
            }
        }
        None => std::io::stdout().lock().write_all(output.body.as_bytes())?,
    }
    let mut err = std::io::stderr().lock();
    for line in &output.status {
        writeln!(err, "{line}")?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<i32, CliError> {
    let (cmd, flags) = match cli.command {
        Sub::Fuglede(f) => (Command::Fuglede, f),
        Sub::Density(f) => (Command::Density, f),
        Sub::Suite(f) => (Command::Suite, f),
        Sub::Homotopy(f) => (Command::Homotopy, f),
        Sub::Metric(f) => (Command::Metric, f),
    };
    let settings = flags.settings()?;
    let output = gaplab_cli::execute(cmd, &settings)?;
    emit(&output, settings.out.as_deref())?;
    Ok(output.exit_code)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("gaplab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
