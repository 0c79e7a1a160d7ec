//! `dirac-jump`: scattering, bound states, strength sweeps and numerical
//! checks for a Dirac particle crossing a mass/velocity jump with a point
//! interaction at the junction.
//!
//! Exit codes: 0 success, 1 validation failure, 2 bad configuration,
//! 3 numerical failure.

mod commands;
mod config;
mod table;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dirac_jump::{Direction, Family};

use config::{
    layered, layered_enum, resolve_junction, resolve_output, resolve_selector, CliError, CliResult, ConfigFile,
    JunctionFlags, Output, OutputFlags, Selector, SelectorFlags,
};
use table::{Format, Table};

#[derive(Parser)]
#[command(name = "dirac-jump", version, about = "Dirac point interactions at a mass/velocity jump")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reflection and transmission amplitudes on an energy grid.
    Scatter(ScatterArgs),
    /// Bound states inside the gap.
    Bound(BoundArgs),
    /// Bound-state energies of a named family over a range of strengths.
    Sweep(SweepArgs),
    /// Reflectionless energies in a window plus the zero-momentum band edges.
    Resonances(ResonanceArgs),
    /// Numerical checks of the deficiency solutions and matching matrices.
    Validate(ValidateArgs),
}

#[derive(Args, Clone, Default)]
struct JunctionArgs {
    /// Mass on the left (x < 0).
    #[arg(long, allow_negative_numbers = true)]
    ml: Option<f64>,
    /// Mass on the right (x > 0).
    #[arg(long, allow_negative_numbers = true)]
    mr: Option<f64>,
    /// Fermi velocity on the left [default: 1].
    #[arg(long, allow_negative_numbers = true)]
    vl: Option<f64>,
    /// Fermi velocity on the right [default: 1].
    #[arg(long, allow_negative_numbers = true)]
    vr: Option<f64>,
    /// Common Fermi velocity; sets both --vl and --vr.
    #[arg(long, allow_negative_numbers = true)]
    vf: Option<f64>,
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse::<Family>().map_err(|e| e.to_string())
}

#[derive(Args, Clone, Default)]
struct SelectorArgs {
    /// Named point interaction: equally-mixed, inverted-mixed, pure-scalar or pure-vector.
    #[arg(long, value_parser = parse_family)]
    family: Option<Family>,
    /// Coupling of the named family: delta < 0 (equally-mixed), lambda > 0
    /// (inverted-mixed), a < 0 (pure-scalar), a > 0 (pure-vector).
    #[arg(long, allow_negative_numbers = true)]
    strength: Option<f64>,
    /// Overall phase of U = e^{i alpha} (a0 - i a3, -i a1; -i a1, a0 + i a3).
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    a0: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    a1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    a3: Option<f64>,
}

#[derive(Args, Clone, Default)]
struct WindowArgs {
    /// Lowest energy; must exceed the larger band edge.
    #[arg(long, allow_negative_numbers = true)]
    emin: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    emax: Option<f64>,
    /// Number of grid points.
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Args, Clone, Default)]
struct OutputArgs {
    /// Write to this file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    seed: Option<u64>,
    /// key=value file; flags given on the command line take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Incidence {
    Left,
    Right,
}

impl From<Incidence> for Direction {
    fn from(i: Incidence) -> Self {
        match i {
            Incidence::Left => Direction::FromLeft,
            Incidence::Right => Direction::FromRight,
        }
    }
}

#[derive(Args)]
struct ScatterArgs {
    #[command(flatten)]
    junction: JunctionArgs,
    #[command(flatten)]
    selector: SelectorArgs,
    #[command(flatten)]
    window: WindowArgs,
    /// Side the wave comes in from [default: left].
    #[arg(long, value_enum)]
    direction: Option<Incidence>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct BoundArgs {
    #[command(flatten)]
    junction: JunctionArgs,
    #[command(flatten)]
    selector: SelectorArgs,
    /// Bracketing grid size [default: 512].
    #[arg(long)]
    n: Option<usize>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    junction: JunctionArgs,
    #[arg(long, value_parser = parse_family)]
    family: Option<Family>,
    /// First strength of the sweep.
    #[arg(long, allow_negative_numbers = true)]
    smin: Option<f64>,
    /// Last strength of the sweep.
    #[arg(long, allow_negative_numbers = true)]
    smax: Option<f64>,
    /// Number of strengths [default: 101].
    #[arg(long)]
    n: Option<usize>,
    /// Mass used for the equal-mass comparison columns [default: --ml].
    #[arg(long, allow_negative_numbers = true)]
    comparison_mass: Option<f64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct ResonanceArgs {
    #[command(flatten)]
    junction: JunctionArgs,
    #[command(flatten)]
    selector: SelectorArgs,
    #[command(flatten)]
    window: WindowArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct ValidateArgs {
    /// Junction checked by the eigen-residual tests [default: m_l = 1, m_r = 2, v = 1].
    #[command(flatten)]
    junction: JunctionArgs,
    /// Random draws for the determinant audit [default: 1000].
    #[arg(long)]
    samples: Option<usize>,
    #[command(flatten)]
    output: OutputArgs,
    /// Replace every tolerance (for exercising the failure path).
    #[arg(long, hide = true)]
    tolerance_override: Option<f64>,
}

fn junction_flags(a: &JunctionArgs) -> JunctionFlags {
    JunctionFlags { ml: a.ml, mr: a.mr, vl: a.vl, vr: a.vr, vf: a.vf }
}

fn selector_flags(a: &SelectorArgs) -> SelectorFlags {
    SelectorFlags { family: a.family, strength: a.strength, alpha: a.alpha, a0: a.a0, a1: a.a1, a3: a.a3 }
}

fn load_file(output: &OutputArgs) -> CliResult<ConfigFile> {
    match &output.config {
        Some(path) => ConfigFile::load(path),
        None => Ok(ConfigFile::default()),
    }
}

fn output_settings(a: &OutputArgs, file: &ConfigFile) -> CliResult<Output> {
    resolve_output(&OutputFlags { out: a.out.clone(), format: a.format, seed: a.seed }, file)
}

fn window(a: &WindowArgs, file: &ConfigFile, default_n: usize) -> CliResult<(f64, f64, usize)> {
    let emin = layered(a.emin, file, "emin")?.ok_or_else(|| CliError::Config("missing --emin".into()))?;
    let emax = layered(a.emax, file, "emax")?.ok_or_else(|| CliError::Config("missing --emax".into()))?;
    let n = layered(a.n, file, "n")?.unwrap_or(default_n);
    Ok((emin, emax, n))
}

fn emit(table: &Table, output: &Output) -> CliResult<()> {
    let text = table.render(output.format);
    match &output.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Config(format!("cannot write to standard output: {e}")))
        }
    }
}

/// Runs the command and returns the exit code for a completed run.
fn run(cli: Cli) -> CliResult<u8> {
    match cli.command {
        Command::Scatter(a) => {
            let file = load_file(&a.output)?;
            let junction = resolve_junction(&junction_flags(&a.junction), &file, None)?;
            let selector = resolve_selector(&selector_flags(&a.selector), &file)?;
            let grid = window(&a.window, &file, 1000)?;
            let direction = layered_enum(a.direction, &file, "direction")?.unwrap_or(Incidence::Left);
            let output = output_settings(&a.output, &file)?;
            emit(&commands::scatter(&selector, &junction, grid, direction.into())?, &output)?;
        }
        Command::Bound(a) => {
            let file = load_file(&a.output)?;
            let junction = resolve_junction(&junction_flags(&a.junction), &file, None)?;
            let selector = resolve_selector(&selector_flags(&a.selector), &file)?;
            let n = layered(a.n, &file, "n")?.unwrap_or(dirac_jump::spectral::DEFAULT_GRID);
            let output = output_settings(&a.output, &file)?;
            emit(&commands::bound(&selector, &junction, n)?, &output)?;
        }
        Command::Sweep(a) => {
            let file = load_file(&a.output)?;
            let junction = resolve_junction(&junction_flags(&a.junction), &file, None)?;
            let family: Family = layered(a.family, &file, "family")?.ok_or_else(|| CliError::Config("missing --family".into()))?;
            let smin = layered(a.smin, &file, "smin")?.ok_or_else(|| CliError::Config("missing --smin".into()))?;
            let smax = layered(a.smax, &file, "smax")?.ok_or_else(|| CliError::Config("missing --smax".into()))?;
            let n = layered(a.n, &file, "n")?.unwrap_or(101);
            let comparison = layered(a.comparison_mass, &file, "comparison-mass")?;
            let output = output_settings(&a.output, &file)?;
            emit(&commands::sweep(family, &junction, (smin, smax), n, comparison)?, &output)?;
        }
        Command::Resonances(a) => {
            let file = load_file(&a.output)?;
            let junction = resolve_junction(&junction_flags(&a.junction), &file, None)?;
            let selector: Selector = resolve_selector(&selector_flags(&a.selector), &file)?;
            let grid = window(&a.window, &file, 2000)?;
            let output = output_settings(&a.output, &file)?;
            emit(&commands::resonances(&selector, &junction, grid)?, &output)?;
        }
        Command::Validate(a) => {
            let file = load_file(&a.output)?;
            let junction = resolve_junction(&junction_flags(&a.junction), &file, Some((1.0, 2.0)))?;
            let samples = layered(a.samples, &file, "samples")?.unwrap_or(1000);
            let output = output_settings(&a.output, &file)?;
            let (table, failed) = commands::validate(&junction, samples, output.seed, a.tolerance_override)?;
            emit(&table, &output)?;
            if !failed.is_empty() {
                eprintln!("validation failed: {}", failed.join(", "));
                return Ok(1);
            }
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
