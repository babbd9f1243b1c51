use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::Parser;

use hcw_cli::{run, Command, Format, Input, Options};

/// Minimal free resolutions of monomial ideals and the hcw-posets that
/// support them.
#[derive(Parser, Debug)]
#[command(name = "hcwres", version)]
struct Args {
    #[arg(value_enum)]
    command: Command,

    /// Ideal file, complex JSON or poset JSON.
    input: PathBuf,

    /// Characteristic of the coefficient field (0 or a prime).
    #[arg(long = "char")]
    characteristic: Option<u64>,

    #[arg(long, value_enum, default_value = "summary")]
    format: Format,

    /// Shorthand for `--format json`.
    #[arg(long, conflicts_with_all = ["format", "dot"])]
    json: bool,

    /// Shorthand for `--format dot`.
    #[arg(long, conflicts_with = "format")]
    dot: bool,

    /// Write the output here instead of standard output.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

fn emit(args: &Args, text: &str) -> anyhow::Result<()> {
    match &args.output {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .context("writing to stdout"),
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    let format = if args.json {
        Format::Json
    } else if args.dot {
        Format::Dot
    } else {
        args.format
    };
    let options = Options {
        characteristic: args.characteristic,
        format,
    };
    let result = Input::read(&args.input).and_then(|input| run(args.command, &input, &options));
    match result {
        Ok(out) => {
            if let Err(e) = emit(&args, &out.text) {
                eprintln!("error: {e:#}");
                return ExitCode::from(2);
            }
            ExitCode::from(u8::from(out.failed > 0))
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
