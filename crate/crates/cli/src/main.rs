//! `magnomech`: steady-state entanglement, occupations and spectra of the
//! hybrid magnon-photon-phonon system from a TOML document.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use magnomech::config::Config;
use magnomech::constants::hertz;
use magnomech::lyapunov::is_stable;
use magnomech::model::build_drift_matrix;
use magnomech::presets::figure_preset;
use magnomech::spectrum::SpectrumTrace;
use magnomech::sweep::{run_point, run_spectrum, run_sweep, SweepResult, SweepSpec};
use magnomech::{Error, Result};

#[derive(Parser)]
#[command(name = "magnomech", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Stability, covariance-derived entanglement and occupations at one point.
    Point {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Evaluate the `[sweep]` observable on its two-axis grid.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        run: SweepOptions,
        #[command(flatten)]
        output: Output,
    },
    /// Output mechanical noise spectrum of the optical mode.
    Spectrum {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Run a built-in figure preset (sweep or spectrum).
    Figure {
        name: String,
        /// Print the preset document instead of running it.
        #[arg(long)]
        emit_config: bool,
        #[command(flatten)]
        run: SweepOptions,
        #[command(flatten)]
        output: Output,
    },
    /// Check a document, resolve its steady state and report stability.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Args)]
struct SweepOptions {
    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long)]
    threads: Option<usize>,
    /// Record the Unix time in the provenance header.
    #[arg(long)]
    stamp: bool,
    /// Also write the grid as a gnuplot matrix (NaN at unstable points).
    #[arg(long)]
    gnuplot: Option<PathBuf>,
}

#[derive(Args)]
struct Output {
    /// Destination file (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("magnomech: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Point { config, output } => {
            let report = run_point(&Config::load(config)?.params()?)?;
            let text = match output.format {
                Format::Csv => report.to_csv(),
                Format::Json => report.to_json(),
            };
            write(&output, &text)
        }
        Command::Sweep { config, run, output } => sweep(&Config::load(config)?, &run, &output),
        Command::Spectrum { config, output } => spectrum(&Config::load(config)?, &output),
        Command::Figure {
            name,
            emit_config,
            run,
            output,
        } => {
            let config = figure_preset(&name)?;
            if emit_config {
                write(&output, &config.to_toml())
            } else if config.sweep.is_some() {
                sweep(&config, &run, &output)
            } else {
                spectrum(&config, &output)
            }
        }
        Command::Validate { config } => validate(&Config::load(config)?),
    }
}

fn sweep(config: &Config, run: &SweepOptions, output: &Output) -> Result<()> {
    let spec = SweepSpec::from_config(config)?;
    if run.threads == Some(0) {
        return Err(Error::Usage("--threads must be at least 1".into()));
    }
    let mut result: SweepResult = run_sweep(&spec, run.threads)?;
    if run.stamp {
        let now = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
        result.provenance.timestamp = Some(now);
    }
    if let Some(path) = &run.gnuplot {
        write_file(path, &result.to_gnuplot_matrix())?;
    }
    let text = match output.format {
        Format::Csv => result.to_csv(),
        Format::Json => result.to_json(),
    };
    write(output, &text)
}

fn spectrum(config: &Config, output: &Output) -> Result<()> {
    config.validate()?;
    let trace: SpectrumTrace = run_spectrum(config)?;
    let text = match output.format {
        Format::Csv => trace.to_two_column(),
        Format::Json => trace.to_json(),
    };
    write(output, &text)
}

fn validate(config: &Config) -> Result<()> {
    config.validate()?;
    let (params, steady) = config.resolve()?;
    let stability = is_stable(&build_drift_matrix(&params)?)?;
    println!("ok: schema {}", config.schema);
    println!("G_m/2pi         = {:.6e} Hz", hertz(params.g_m));
    println!("G_c/2pi         = {:.6e} Hz", hertz(params.g_c));
    println!("delta_m_eff/2pi = {:.6e} Hz", hertz(params.delta_m_eff));
    println!("delta_c_eff/2pi = {:.6e} Hz", hertz(params.delta_c_eff));
    if steady.iterations > 0 {
        println!("steady state    : {} iterations", steady.iterations);
    }
    println!(
        "stable          = {} (max Re lambda = {:.6e} rad/s{})",
        stability.stable,
        stability.max_real_eig,
        if stability.is_marginal() { ", marginal" } else { "" }
    );
    if let Some(s) = &config.sweep {
        println!(
            "sweep           : {} on {} x {} points",
            s.observable, s.x.count, s.y.count
        );
    }
    Ok(())
}

fn write(output: &Output, text: &str) -> Result<()> {
    match &output.out {
        Some(path) => write_file(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_file(path: &PathBuf, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Usage(format!("cannot write {}: {e}", path.display())))
}
