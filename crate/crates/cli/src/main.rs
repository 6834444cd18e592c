use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use detkit_cli::commands::failure_envelope;
use detkit_cli::problem::parse_box;
use detkit_cli::{run_text, CliError, Command, Exit, Options};

/// Finite determinacy of flat families over Q[t]: cotangent modules, bounds and certified lifts.
#[derive(Parser, Debug)]
#[command(name = "detkit", version)]
struct Args {
    command: Command,
    /// Problem file (`verify`: a JSON report from `lift`); `-` reads stdin.
    file: String,
    /// Largest exponent tried when searching for bounds.
    #[arg(long)]
    cap: Option<u32>,
    /// Target t-order for `lift`.
    #[arg(long)]
    order: Option<u32>,
    /// Truncation box `L,d` for `oracle` and truncated dimensions.
    #[arg(long = "box", value_parser = parse_box)]
    bx: Option<(u32, u32)>,
    /// Also write the JSON report to this file.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print the JSON report instead of the summary.
    #[arg(long)]
    json: bool,
}

fn read_input(file: &str) -> Result<String, CliError> {
    let mut text = String::new();
    if file == "-" {
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| CliError::Usage(format!("stdin: {e}")))?;
    } else {
        text = std::fs::read_to_string(file).map_err(|e| CliError::Usage(format!("{file}: {e}")))?;
    }
    Ok(text)
}

fn main() -> ExitCode {
    let args = Args::parse();
    let opts = Options {
        cap: args.cap,
        order: args.order,
        bx: args.bx,
    };
    let outcome = read_input(&args.file).and_then(|text| run_text(args.command, &text, &opts));
    let (envelope, exit, lines) = match outcome {
        Ok(report) => (report.envelope.clone(), report.exit, report.summary()),
        Err(err) => {
            eprintln!("detkit {}: {err}", args.command.name());
            (failure_envelope(args.command, &err), err.exit(), Vec::new())
        }
    };
    let text = serde_json::to_string_pretty(&envelope).expect("reports serialise");
    if let Some(path) = &args.out {
        if let Err(e) = std::fs::write(path, format!("{text}\n")) {
            eprintln!("detkit: {}: {e}", path.display());
            return ExitCode::from(Exit::Usage as u8);
        }
    }
    if args.json {
        println!("{text}");
    } else {
        for line in lines {
            println!("{line}");
        }
    }
    ExitCode::from(exit as u8)
}
