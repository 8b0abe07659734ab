use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use toric_picard::job::{run, Command, RunOptions};

/// Rational Picard groups of toric varieties and their hypersurfaces.
#[derive(Parser)]
#[command(version, about)]
struct Cli {
    /// Command words, e.g. `pic hyp` or `polytope dual`.
    #[arg(required = true, num_args = 1..=2)]
    command: Vec<String>,
    /// Job file; `-` for stdin.
    #[arg(long, default_value = "-")]
    input: PathBuf,
    /// Report file; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Directory for cached reports.
    #[arg(long)]
    cache: Option<PathBuf>,
    #[arg(long)]
    no_cache: bool,
    /// Replace the section by a generic one.
    #[arg(long)]
    assume_generic: bool,
    /// Add wall-clock time to the report.
    #[arg(long)]
    timing: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let command = match cli.command.join(" ").parse::<Command>() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{}", e.to_json());
            return ExitCode::from(1);
        }
    };
    let opts = RunOptions {
        command: Some(command),
        input: Some(cli.input),
        output: cli.output,
        cache: cli.cache,
        no_cache: cli.no_cache,
        assume_generic: cli.assume_generic,
        timing: cli.timing,
    };
    let out = run(&opts, &mut std::io::stdin());
    let _ = std::io::stdout().write_all(&out.stdout);
    let _ = std::io::stderr().write_all(&out.stderr);
    ExitCode::from(out.code as u8)
}
