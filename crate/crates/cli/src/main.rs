use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use indalg_cli::{run, CliError, EXIT_BAD_INPUT};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

/// Certify self-adjointness of inductive algebras from a JSON job.
#[derive(Debug, Parser)]
#[command(name = "indalg", version)]
struct Args {
    /// Read the job from FILE instead of standard input.
    #[arg(long, value_name = "FILE")]
    job: Option<PathBuf>,
    /// Tolerance overrides, e.g. `--tol residual=1e-6,cluster=1e-6`.
    #[arg(long, value_name = "NAME=VALUE")]
    tol: Vec<String>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

fn read_job(args: &Args) -> Result<String, CliError> {
    match &args.job {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| CliError::input("--job", format!("{}: {e}", path.display()))),
        None => {
            let mut buf = String::new();
            io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| CliError::input("<stdin>", e.to_string()))?;
            Ok(buf)
        }
    }
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_BAD_INPUT as u8)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let outcome = read_job(&args).and_then(|doc| run(&doc, &args.tol));
    match outcome {
        Ok(out) => {
            let body = match args.format {
                Format::Text => out.text,
                Format::Json => {
                    serde_json::to_string_pretty(&out.report).expect("reports always serialize") + "\n"
                }
            };
            // a closed pipe downstream is not our failure
            let _ = io::stdout().lock().write_all(body.as_bytes());
            ExitCode::from(out.exit as u8)
        }
        Err(e) => {
            eprintln!("indalg: {e}");
            if let Format::Json = args.format {
                let _ = writeln!(io::stdout().lock(), "{}", e.to_json());
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
