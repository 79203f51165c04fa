use std::path::PathBuf;
use std::process::ExitCode;

use chern::job::OutputFormat;
use chern::{run, run_suite, CliError, JobSpec, RunOptions, SuiteOptions};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "chern",
    version,
    about = "Hilbert coefficients, homological degrees and Buchsbaum–Rim functions of graded modules"
)]
struct Cli {
    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Print progress and timings to stderr.
    #[arg(short, long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the operations of a job file.
    Compute {
        job: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<OutputFormat>,
        /// Include per-operation timings in the report.
        #[arg(long)]
        timings: bool,
    },
    /// Run every property check over a corpus directory.
    Check {
        corpus: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), CliError> {
    match out {
        Some(p) => std::fs::write(p, format!("{text}\n")).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn main_inner(cli: Cli) -> Result<bool, CliError> {
    if let Some(n) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .map_err(|e| CliError::Io(e.to_string()))?;
    }
    match cli.command {
        Command::Compute { job, seed, out, format, timings } => {
            let text = std::fs::read_to_string(&job).map_err(|e| CliError::Io(format!("{}: {e}", job.display())))?;
            let spec = JobSpec::from_json(&text).map_err(|e| CliError::Schema(format!("{}: {e}", job.display())))?;
            let format = format.or(spec.format).unwrap_or_default();
            let report = run(&spec, &RunOptions { seed, timings: timings || cli.verbose })?;
            if cli.verbose {
                if let Some(t) = &report.timings_ms {
                    for (r, ms) in report.results.iter().zip(t) {
                        eprintln!("{:>24} {ms:>8} ms", r.op);
                    }
                }
            }
            emit(&report.render(format)?, out.as_ref())?;
            Ok(report.pass)
        }
        Command::Check { corpus, seed, out } => {
            let start = std::time::Instant::now();
            let report = run_suite(&corpus, &SuiteOptions { seed })?;
            if cli.verbose {
                eprintln!("checked {} instances in {:.1?}", report.instances.len(), start.elapsed());
            }
            for (check, inst, failures) in report.failures() {
                eprintln!("FAIL {check} on {inst}: {}", failures.join("; "));
            }
            emit(&report.to_json(), out.as_ref())?;
            Ok(report.pass)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match main_inner(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
