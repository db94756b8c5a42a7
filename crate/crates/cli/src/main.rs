//! `roughmorrey` command-line front end.
//!
//! Exit codes: 0 pass, 1 mathematical verdict failure, 2 input or usage error.

mod commands;
mod config;
mod report;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::Outcome;

#[derive(Parser)]
#[command(name = "roughmorrey", version, about = "Rough-kernel operators, Morrey-type norms, Hardy constants and weight conditions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Morrey, Beurling and central Campanato norms of a catalog function.
    Norm(Common),
    /// Evaluate an operator at grid points.
    Apply(Common),
    /// Sharp weighted Hardy constant and its extremal check.
    Hardy(Common),
    /// Weight-pair condition checker; exit 1 when the condition fails.
    Check(Common),
    /// Experiment harness; exit 1 on a flagged violation or trend.
    Verify(Common),
    /// Sphere norms and cancellation defect of a kernel.
    KernelInfo(Common),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct Common {
    /// JSON config.
    #[arg(long)]
    config: PathBuf,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Worker threads; results do not depend on it.
    #[arg(long)]
    threads: Option<usize>,
}

fn run(command: Command) -> Result<bool, String> {
    let (name, common, runner): (&str, Common, fn(_) -> Result<Outcome, String>) = match command {
        Command::Norm(c) => ("norm", c, commands::norm),
        Command::Apply(c) => ("apply", c, commands::apply),
        Command::Hardy(c) => ("hardy", c, commands::hardy),
        Command::Check(c) => ("check", c, commands::check),
        Command::Verify(c) => ("verify", c, commands::verify),
        Command::KernelInfo(c) => ("kernel-info", c, commands::kernel_info),
    };
    if let Some(k) = common.threads {
        if k == 0 {
            return Err("--threads must be at least 1".into());
        }
        rayon::ThreadPoolBuilder::new().num_threads(k).build_global().map_err(|e| format!("thread pool: {e}"))?;
    }
    let map = config::load(&common.config, name)?;
    let outcome = runner(map)?;
    let write = |out: &mut dyn Write| match common.format {
        Format::Csv => outcome.report.write_csv(out),
        Format::Json => outcome.report.write_json(out),
    };
    let written = match &common.out {
        Some(path) => {
            let file = File::create(path).map_err(|e| format!("cannot create {}: {e}", path.display()))?;
            let mut w = BufWriter::new(file);
            write(&mut w).and_then(|_| w.flush())
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            write(&mut lock)
        }
    };
    written.map_err(|e| format!("cannot write output: {e}"))?;
    Ok(outcome.pass)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            eprintln!("roughmorrey: {}", text.lines().next().unwrap_or("usage error").trim_start_matches("error: "));
            return ExitCode::from(2);
        }
    };
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("roughmorrey: {}", msg.lines().next().unwrap_or_default());
            ExitCode::from(2)
        }
    }
}
