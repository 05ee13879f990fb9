//! `qasm3`: parse, check, and benchmark OpenQASM 3.0 source files.
//!
//! Exit codes follow the usual compiler convention: 0 means every input was
//! processed without error-severity diagnostics, 1 means at least one error
//! was reported, and 2 means the tool itself could not run (unreadable path,
//! empty benchmark corpus, bad output file).

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qasm3::diag::Diagnostic;
use qasm3::{bench, semantics, serializer};

#[derive(Parser)]
#[command(name = "qasm3", version, about = "OpenQASM 3.0 frontend toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse source files and optionally emit their ASTs as JSON
    Parse {
        /// Files to parse
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        /// Print the AST of each file as a JSON document on stdout
        #[arg(long)]
        json: bool,
        /// Pretty-print the JSON output (implies --json)
        #[arg(long)]
        pretty: bool,
        /// Skip semantic analysis; report syntax problems only
        #[arg(long)]
        no_analyze: bool,
    },
    /// Parse and analyze files, printing diagnostics and a summary line
    Check {
        /// Files to check
        #[arg(required = true)]
        paths: Vec<PathBuf>,
    },
    /// Measure parse throughput over a directory of .qasm files
    Bench {
        /// Directory containing the benchmark corpus
        corpus_dir: PathBuf,
        /// Timed iterations per file
        #[arg(long, default_value_t = 100)]
        iterations: u32,
        /// Untimed warmup iterations per file
        #[arg(long, default_value_t = 10)]
        warmup: u32,
        /// Write per-iteration samples to this CSV file
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Include semantic analysis in the timed region
        #[arg(long)]
        analyze: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Parse {
            paths,
            json,
            pretty,
            no_analyze,
        } => cmd_parse(&paths, json || pretty, pretty, no_analyze),
        Command::Check { paths } => cmd_check(&paths),
        Command::Bench {
            corpus_dir,
            iterations,
            warmup,
            csv,
            analyze,
        } => cmd_bench(&corpus_dir, iterations, warmup, csv.as_deref(), analyze),
    };
    ExitCode::from(code)
}

fn read_source(path: &Path) -> Result<String, u8> {
    std::fs::read_to_string(path).map_err(|err| {
        eprintln!("qasm3: cannot read {}: {}", path.display(), err);
        2
    })
}

fn report(path: &Path, diagnostics: &[Diagnostic]) {
    for diag in diagnostics {
        eprintln!("{}", diag.render(&path.display().to_string()));
    }
}

/// Parse one file and collect its diagnostics, optionally running the
/// semantic analyzer on whatever AST came back.
fn process_file(path: &Path, analyze: bool) -> Result<(qasm3::ast::Program, Vec<Diagnostic>), u8> {
    let source = read_source(path)?;
    let outcome = qasm3::parse(&source);
    let mut diagnostics = outcome.diagnostics;
    if analyze {
        diagnostics.extend(semantics::analyze(&outcome.program).diagnostics);
        diagnostics.sort_by_key(|d| (d.span.start_offset, d.span.end_offset));
    }
    Ok((outcome.program, diagnostics))
}

fn cmd_parse(paths: &[PathBuf], json: bool, pretty: bool, no_analyze: bool) -> u8 {
    let mut saw_error = false;
    for path in paths {
        let (program, diagnostics) = match process_file(path, !no_analyze) {
            Ok(result) => result,
            Err(code) => return code,
        };
        report(path, &diagnostics);
        saw_error |= diagnostics.iter().any(|d| d.is_error());
        if json {
            let doc = if pretty {
                serializer::serialize_program_pretty(&program)
            } else {
                serializer::serialize_program(&program)
            };
            println!("{doc}");
        }
    }
    u8::from(saw_error)
}

fn cmd_check(paths: &[PathBuf]) -> u8 {
    let mut errors = 0usize;
    let mut warnings = 0usize;
    for path in paths {
        let (_, diagnostics) = match process_file(path, true) {
            Ok(result) => result,
            Err(code) => return code,
        };
        report(path, &diagnostics);
        errors += diagnostics.iter().filter(|d| d.is_error()).count();
        warnings += diagnostics.iter().filter(|d| !d.is_error()).count();
    }
    println!("{} files, {} errors, {} warnings", paths.len(), errors, warnings);
    u8::from(errors > 0)
}

fn cmd_bench(
    corpus_dir: &Path,
    iterations: u32,
    warmup: u32,
    csv: Option<&Path>,
    analyze: bool,
) -> u8 {
    let report = match bench::run_corpus(corpus_dir, iterations, warmup, analyze) {
        Ok(report) => report,
        Err(err) => {
            eprintln!("qasm3: cannot read corpus {}: {}", corpus_dir.display(), err);
            return 2;
        }
    };
    if report.per_file.is_empty() {
        eprintln!("qasm3: no .qasm files found in {}", corpus_dir.display());
        return 2;
    }
    print!("{}", bench::format_table(&report));
    if let Some(csv_path) = csv {
        let written = std::fs::File::create(csv_path)
            .and_then(|file| bench::write_csv(&report, std::io::BufWriter::new(file)));
        if let Err(err) = written {
            eprintln!("qasm3: cannot write {}: {}", csv_path.display(), err);
            return 2;
        }
    }
    0
}
