use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ctxbell::config::{
    Command, Format, Grid, RunConfig, VariantSel, DEFAULT_SEED, DEFAULT_SHOTS, OUT_DIR_ENV,
};
use ctxbell::report::write_sweep_csv;
use ctxbell::{run, Output};

/// Bell inequality via local contextuality: four-qubit simulations,
/// hidden-variable bounds and visibility sweeps.
#[derive(Parser, Debug)]
#[command(name = "ctxbell", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,

    /// Two-qubit Werner visibility applied to each singlet pair.
    #[arg(long, global = true, default_value_t = 1.0)]
    visibility: f64,

    /// Shots per measurement setting.
    #[arg(long, global = true, default_value_t = DEFAULT_SHOTS)]
    shots: u64,

    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,

    /// abs, signed or both.
    #[arg(long, global = true, default_value = "both")]
    variant: VariantSel,

    /// Visibility grid for `sweep`, as start:stop:step.
    #[arg(long, global = true, default_value = "0:1:0.001")]
    grid: Grid,

    /// json, or csv (sweep only).
    #[arg(long, global = true, default_value = "json")]
    format: Format,

    /// Output file; defaults to $CTXBELL_OUT_DIR/<command>.<ext>, else stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,

    /// Also scan the 2^24 models without shared first-position values.
    #[arg(long, global = true)]
    unconstrained: bool,

    /// Measured χ values whose visibility thresholds the sweep reports.
    #[arg(long = "chi-expt", global = true, allow_negative_numbers = true)]
    chi_expt: Vec<f64>,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Cmd {
    /// Operator identities of the square, symbolically and as 16×16 matrices.
    Identities,
    /// Exact χ, S and ω for the noisy four-qubit state.
    Quantum,
    /// Finite-shot estimates of every correlator.
    Sample,
    /// Exhaustive hidden-variable bounds.
    HvBound,
    /// ω against visibility, with the violation threshold.
    Sweep,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Self {
        match c {
            Cmd::Identities => Command::Identities,
            Cmd::Quantum => Command::Quantum,
            Cmd::Sample => Command::Sample,
            Cmd::HvBound => Command::HvBound,
            Cmd::Sweep => Command::Sweep,
        }
    }
}

fn config_from(cli: Cli) -> RunConfig {
    let command = Command::from(cli.command);
    let output_path = cli.out.or_else(|| {
        std::env::var_os(OUT_DIR_ENV).map(|dir| {
            PathBuf::from(dir).join(format!("{}.{}", command.name(), cli.format.extension()))
        })
    });
    RunConfig {
        command,
        visibility: cli.visibility,
        shots: cli.shots,
        seed: cli.seed,
        variant: cli.variant,
        grid: cli.grid,
        output_format: cli.format,
        output_path,
        workers: cli.workers,
        unconstrained: cli.unconstrained,
        chi_expt: cli.chi_expt,
    }
}

fn emit(config: &RunConfig, output: &Output, sink: &mut dyn Write) -> io::Result<()> {
    match (config.output_format, &output.table) {
        (Format::Csv, Some(rows)) => write_sweep_csv(rows, &mut *sink).map_err(io::Error::other)?,
        _ => {
            serde_json::to_writer_pretty(&mut *sink, &output.report)?;
            writeln!(sink)?;
        }
    }
    sink.flush()
}

fn main() -> ExitCode {
    let config = config_from(Cli::parse());
    let output = match run(&config) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let written = match &config.output_path {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                if let Err(e) = std::fs::create_dir_all(dir) {
                    eprintln!("error: {}: {e}", dir.display());
                    return ExitCode::from(2);
                }
            }
            File::create(path).and_then(|f| emit(&config, &output, &mut BufWriter::new(f)))
        }
        None => emit(&config, &output, &mut io::stdout().lock()),
    };
    if let Err(e) = written {
        eprintln!("error: writing output: {e}");
        return ExitCode::from(2);
    }
    for check in output.report.checks.iter().filter(|c| !c.pass) {
        eprintln!("FAIL {}: {}", check.name, check.detail);
    }
    if output.report.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
