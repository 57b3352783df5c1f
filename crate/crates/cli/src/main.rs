//! `aimx` command-line front end.
//!
//! Exit codes: 0 success, 1 output I/O error, 2 config, mesh or usage
//! error, 3 some frequencies failed or did not converge, 4 verification
//! failure.

mod config;
mod mie_cmd;
mod solve;
mod verify_cmd;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "aimx", version, about = "Surface integral equation solver for PEC scatterers")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a frequency sweep described by a TOML config.
    Solve {
        #[arg(long)]
        config: PathBuf,
        /// Static operator cache directory.
        #[arg(long, env = "AIMX_CACHE_DIR")]
        cache_dir: Option<PathBuf>,
        /// Overrides `mesh.scale`.
        #[arg(long)]
        scale: Option<f64>,
        /// Overrides `output.dir`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run verification checks and write their tables.
    Verify(verify_cmd::VerifyArgs),
    /// Mie series RCS of a PEC sphere.
    Mie(mie_cmd::MieArgs),
}

#[derive(Debug)]
pub enum Failure {
    Config(String),
    Io(String),
}

impl Failure {
    pub fn io(path: &Path, e: std::io::Error) -> Self {
        Failure::Io(format!("{}: {e}", path.display()))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("aimx: --threads: {e}");
            return ExitCode::from(2);
        }
    }
    let outcome = match cli.command {
        Command::Solve {
            config,
            cache_dir,
            scale,
            out,
        } => solve::run(solve::SolveArgs {
            config,
            cache_dir,
            scale,
            out,
        })
        .map(|ok| if ok { 0 } else { 3 }),
        Command::Verify(args) => verify_cmd::run(args).map(|ok| if ok { 0 } else { 4 }),
        Command::Mie(args) => mie_cmd::run(args).map(|_| 0),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Config(msg)) => {
            eprintln!("aimx: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("aimx: {msg}");
            ExitCode::from(1)
        }
    }
}
