use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use doublecd::cli::{run_text, Command, Flags};
use doublecd::double_bracket::Convention;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Cmd {
    Check,
    Convert,
    Roundtrip,
    Rep,
    Appendix,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Conv {
    Paper,
    Vdb,
}

/// Checks double Poisson, double Poisson vertex and double Courant-Dorfman structures.
#[derive(Parser, Debug)]
#[command(name = "doublecd", version)]
struct Args {
    #[arg(value_enum)]
    command: Cmd,
    /// Presentation file
    file: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    samples: Option<usize>,
    /// Matrix size for `rep`
    #[arg(long = "N")]
    n: Option<usize>,
    #[arg(long, value_enum)]
    convention: Option<Conv>,
    /// Emit JSON instead of text
    #[arg(long)]
    json: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let text = match std::fs::read_to_string(&args.file) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {}", args.file.display(), e);
            return ExitCode::from(2);
        }
    };
    let cmd = match args.command {
        Cmd::Check => Command::Check,
        Cmd::Convert => Command::Convert,
        Cmd::Roundtrip => Command::Roundtrip,
        Cmd::Rep => Command::Rep,
        Cmd::Appendix => Command::Appendix,
    };
    let flags = Flags {
        seed: args.seed,
        samples: args.samples,
        n: args.n,
        convention: args.convention.map(|c| match c {
            Conv::Paper => Convention::Paper,
            Conv::Vdb => Convention::Vdb,
        }),
        json: args.json,
    };
    let out = run_text(cmd, &text, &flags);
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    ExitCode::from(out.code as u8)
}
