use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use ckdecide::dot::export_dot;
use ckdecide::presentations::{parse, Format};
use ckdecide::report::{analyze, parse_checks};
use ckdecide::verify::verify_report_json;
use ckdecide::{graph::DEFAULT_CYCLE_CAP, Options, Parsed};

#[derive(Parser)]
#[command(name = "ckdecide", version, about = "Decide structural properties of graph C*-algebras, with certificates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run checks on an input file.
    Analyze {
        file: PathBuf,
        /// edgelist, matrix or periodic; sniffed from .ckg/.mtx/.period otherwise
        #[arg(long)]
        format: Option<Format>,
        /// Comma-separated: af, pi, stable, ideals, traces, shift, all
        #[arg(long, default_value = "all")]
        check: String,
        /// Print the JSON report on stdout
        #[arg(long)]
        json: bool,
        /// Copies of the block explored for periodic inputs
        #[arg(long)]
        depth: Option<u32>,
        /// Most cycles listed in a certificate
        #[arg(long, default_value_t = DEFAULT_CYCLE_CAP)]
        cycle_cap: usize,
    },
    /// Write the graph in Graphviz format.
    Dot {
        file: PathBuf,
        #[arg(long)]
        format: Option<Format>,
        /// Copies of the block written for periodic inputs
        #[arg(long)]
        depth: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-check every certificate in a JSON report.
    Verify { report: PathBuf },
}

fn load(path: &Path, format: Option<Format>) -> Result<(Parsed, Format), String> {
    let format = format
        .or_else(|| Format::sniff(path))
        .ok_or_else(|| format!("{}: cannot tell the format from the extension; pass --format", path.display()))?;
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let parsed = parse(&text, format).map_err(|e| format!("{}:{}:{}: {}", path.display(), e.line, e.column, e.message))?;
    Ok((parsed, format))
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Analyze {
            file,
            format,
            check,
            json,
            depth,
            cycle_cap,
        } => {
            let checks = parse_checks(&check)?;
            let (input, format) = load(&file, format)?;
            let opts = Options {
                depth,
                cycle_cap,
                ..Options::default()
            };
            let start = Instant::now();
            let (report, supported) = analyze(&input, &checks, &opts, format, Some(&file.display().to_string()));
            if json {
                println!("{}", report.to_json());
            } else {
                print!("{}", report.to_text());
                println!("elapsed: {:.3}s", start.elapsed().as_secs_f64());
            }
            Ok(if supported { ExitCode::SUCCESS } else { ExitCode::from(2) })
        }
        Command::Dot {
            file,
            format,
            depth,
            out,
        } => {
            let (input, _) = load(&file, format)?;
            let text = export_dot(&input, depth);
            match out {
                Some(p) => fs::write(&p, text).map_err(|e| format!("{}: {e}", p.display()))?,
                None => print!("{text}"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { report } => {
            let text = fs::read_to_string(&report).map_err(|e| format!("{}: {e}", report.display()))?;
            let outcome = verify_report_json(&text).map_err(|e| e.to_string())?;
            for (key, r) in &outcome.results {
                match r {
                    Ok(()) => println!("{key:<30} ok"),
                    Err(e) => println!("{key:<30} FAILED: {e}"),
                }
            }
            Ok(if outcome.all_ok() { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
