use clap::{Parser, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

use fracwave_cli::{execute, Command, ExperimentConfig, OUT_ENV};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Cmd {
    Spectrum,
    Simulate,
    Verify,
    Sweep,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Command {
        match c {
            Cmd::Spectrum => Command::Spectrum,
            Cmd::Simulate => Command::Simulate,
            Cmd::Verify => Command::Verify,
            Cmd::Sweep => Command::Sweep,
        }
    }
}

/// Fractional boundary damping experiments.
#[derive(Debug, Parser)]
#[command(name = "fracwave", version)]
struct Args {
    #[arg(value_enum)]
    command: Cmd,
    /// INI experiment config.
    #[arg(long)]
    config: PathBuf,
    /// Output directory (overrides FRACWAVE_OUT and `[output] dir`).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let cfg = match ExperimentConfig::load(&args.config) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let env = std::env::var(OUT_ENV).ok();
    let out = cfg.resolve_out_dir(args.out.as_deref(), env.as_deref());
    match execute(args.command.into(), &cfg, &out) {
        Ok(o) => {
            for f in &o.files {
                println!("wrote {}", f.display());
            }
            if o.success {
                println!("{}", o.message);
                ExitCode::SUCCESS
            } else {
                eprintln!("{}", o.message);
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
