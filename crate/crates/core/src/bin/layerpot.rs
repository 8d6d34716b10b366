use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use layerpot::study::{
    perforation_preset, read_config, run_perforation_study, run_shape_study, run_verify,
    shape_preset, verify_preset, Check, PerforationStudyConfig, ShapeStudyConfig, VerifyConfig,
};

/// Environment variable capping the number of worker threads.
const THREADS_ENV: &str = "LAYERPOT_THREADS";

#[derive(Parser)]
#[command(
    name = "layerpot",
    version,
    about = "Laplace layer-potential verification and studies"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Jump relations, adjointness, Gauss identity and circle spectra.
    Verify(Io),
    /// Finite-difference orders along a boundary family and the Calderón sweep.
    ShapeStudy(Io),
    /// Series truncation orders and block/direct equivalence on a perforated domain.
    PerforationStudy(Io),
}

#[derive(Args)]
struct Io {
    /// JSON configuration file.
    #[arg(long, conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Built-in configuration.
    #[arg(long)]
    preset: Option<String>,
    /// Output CSV path.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn load<T: for<'de> serde::Deserialize<'de>>(
    io: &Io,
    preset: impl Fn(&str) -> layerpot::Result<T>,
    default: &str,
) -> layerpot::Result<T> {
    match (&io.config, &io.preset) {
        (Some(path), _) => read_config(path),
        (None, Some(name)) => preset(name),
        (None, None) => preset(default),
    }
}

fn write_out(path: Option<&Path>, text: &str) -> layerpot::Result<()> {
    match path {
        Some(p) => Ok(std::fs::write(p, text)?),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    path.with_file_name(format!("{stem}.{suffix}.csv"))
}

fn print_checks(checks: &[Check]) {
    for c in checks {
        eprintln!(
            "{} {:<22} {:<36} value={:.3e} tol={:.1e}",
            c.status(),
            c.name,
            c.subject,
            c.value,
            c.tolerance
        );
    }
}

fn run(cli: &Cli) -> layerpot::Result<bool> {
    match &cli.command {
        Command::Verify(io) => {
            let cfg: VerifyConfig = load(io, verify_preset, "standard")?;
            let report = run_verify(&cfg)?;
            print_checks(&report.checks);
            write_out(io.out.as_deref(), &report.to_csv())?;
            Ok(report.passed())
        }
        Command::ShapeStudy(io) => {
            let cfg: ShapeStudyConfig = load(io, shape_preset, "circle-cos2")?;
            let report = run_shape_study(&cfg)?;
            print_checks(&report.checks);
            if !report.fd.dropped.is_empty() {
                eprintln!(
                    "dropped steps (invalid diffeomorphism): {:?}",
                    report.fd.dropped
                );
            }
            write_out(io.out.as_deref(), &report.to_csv())?;
            if let Some(out) = &io.out {
                std::fs::write(sibling(out, "calderon"), report.calderon_csv())?;
            }
            Ok(report.passed())
        }
        Command::PerforationStudy(io) => {
            let cfg: PerforationStudyConfig = load(io, perforation_preset, "generic")?;
            let report = run_perforation_study(&cfg)?;
            eprintln!("epsilon_max = {:.6}", report.eps_bound);
            if cfg.symmetric {
                eprintln!(
                    "symmetric geometry: expected orders skip coefficients that vanish by parity"
                );
            }
            print_checks(&report.checks);
            write_out(io.out.as_deref(), &report.to_csv())?;
            if let Some(out) = &io.out {
                std::fs::write(sibling(out, "equivalence"), report.equivalence_csv())?;
            }
            Ok(report.passed())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
    {
        // ignore the error if a pool already exists
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global();
    }
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
