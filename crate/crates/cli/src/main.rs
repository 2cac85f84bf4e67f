use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use monres::Field;
use monres_cli::{parse_ideal_file, run, Command, Options, Status};

/// Resolutions, DG products and Koszul homology of monomial ideals.
#[derive(Parser, Debug)]
#[command(name = "monres", version)]
struct Args {
    command: Command,
    /// Ideal file (not needed for `selftest`).
    file: Option<PathBuf>,
    /// Ideal or splitting names.
    names: Vec<String>,
    /// Coefficient field: `q` or `gf:P`.
    #[arg(long, default_value = "q")]
    field: Field,
    /// Write the complex or report as JSON.
    #[arg(long, value_name = "PATH")]
    json: Option<PathBuf>,
    /// Multigraded detail.
    #[arg(long)]
    multi: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_name = "N")]
    max_hdeg: Option<usize>,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    if let Some(n) = std::env::var("MONRES_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }

    let file = match &args.file {
        None => None,
        Some(path) => {
            let text = match std::fs::read_to_string(path) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("error: {}: {e}", path.display());
                    return ExitCode::from(1);
                }
            };
            match parse_ideal_file(&text) {
                Ok(f) => {
                    for w in &f.warnings {
                        eprintln!("warning: {w}");
                    }
                    Some(f)
                }
                Err(e) => {
                    eprintln!("error: {}: {e}", path.display());
                    return ExitCode::from(1);
                }
            }
        }
    };

    let opts = Options {
        field: args.field,
        multi: args.multi,
        seed: args.seed,
        max_hdeg: args.max_hdeg,
    };
    match run(args.command, file.as_ref(), &args.names, &opts) {
        Ok(out) => {
            print!("{}", out.text);
            if let (Some(path), Some(json)) = (&args.json, &out.json) {
                if let Err(e) = std::fs::write(path, json) {
                    eprintln!("error: {}: {e}", path.display());
                    return ExitCode::from(1);
                }
            }
            match out.status {
                Status::Ok => ExitCode::SUCCESS,
                Status::HypothesisFailure => ExitCode::from(2),
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
