use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use thinlie::search::AlgebraKind;
use thinlie_cli::{admissible, analyze, enumerate, read_documents, verify, Analysis, CliError, ReportDocument, Target};

#[derive(Parser)]
#[command(name = "thinlie", version, about = "Graded Lie algebras of maximal class and thin Lie algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate the chain hypothesis against its closed-form classification.
    Admissible {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        max: u64,
        /// Also require the extended-range subset to match its closed form.
        #[arg(long)]
        extended_range: bool,
    },
    /// Enumerate consistent tables as JSON lines.
    Enumerate {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        degree: usize,
        /// Output path; `-` writes documents to stdout and the report to stderr.
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = default_jobs())]
        jobs: usize,
    },
    /// Compute a profile of every document in a JSON-lines file.
    Analyze {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(value_enum)]
        which: AnalysisArg,
    },
    /// Check a theorem over the enumerated universe, or run the identity sweeps.
    Verify {
        #[arg(value_enum)]
        theorem: TargetArg,
        #[arg(long)]
        p: u64,
        /// Truncation degree; for `identities` the bound on n and q.
        #[arg(long)]
        degree: usize,
        #[arg(long, default_value_t = default_jobs())]
        jobs: usize,
        /// Re-check every table against all Jacobi triples (slow).
        #[arg(long)]
        cross_check: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Maxclass,
    Thin,
}

#[derive(Clone, Copy, ValueEnum)]
enum AnalysisArg {
    Constituents,
    Diamonds,
    Sandwich,
    Centralizers,
}

#[derive(Clone, Copy, ValueEnum)]
enum TargetArg {
    FirstConstituent,
    AnyConstituent,
    SecondDiamond,
    HValues,
    Identities,
}

fn default_jobs() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn io_error(path: &std::path::Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.display().to_string(), source }
}

/// Runs the command; the flag says whether the report belongs on stderr.
fn run(command: Command) -> Result<(ReportDocument, bool), CliError> {
    match command {
        Command::Admissible { p, max, extended_range } => Ok((admissible(p, max, extended_range)?, false)),
        Command::Enumerate { kind, p, degree, out, jobs } => {
            let kind = match kind {
                KindArg::Maxclass => AlgebraKind::MaxClass,
                KindArg::Thin => AlgebraKind::Thin,
            };
            let name = out.display().to_string();
            if name == "-" {
                let stdout = io::stdout();
                let mut w = BufWriter::new(stdout.lock());
                return Ok((enumerate(kind, p, degree, jobs.max(1), &mut w, &name)?, true));
            }
            let file = File::create(&out).map_err(io_error(&out))?;
            let mut w = BufWriter::new(file);
            Ok((enumerate(kind, p, degree, jobs.max(1), &mut w, &name)?, false))
        }
        Command::Analyze { input, which } => {
            let file = File::open(&input).map_err(io_error(&input))?;
            let docs = read_documents(BufReader::new(file))?;
            let which = match which {
                AnalysisArg::Constituents => Analysis::Constituents,
                AnalysisArg::Diamonds => Analysis::Diamonds,
                AnalysisArg::Sandwich => Analysis::Sandwich,
                AnalysisArg::Centralizers => Analysis::Centralizers,
            };
            Ok((analyze(&docs, which, &input.display().to_string())?, false))
        }
        Command::Verify { theorem, p, degree, jobs, cross_check } => {
            let target = match theorem {
                TargetArg::FirstConstituent => Target::FirstConstituent,
                TargetArg::AnyConstituent => Target::AnyConstituent,
                TargetArg::SecondDiamond => Target::SecondDiamond,
                TargetArg::HValues => Target::HValues,
                TargetArg::Identities => Target::Identities,
            };
            Ok((verify(target, p, degree, jobs.max(1), cross_check)?, false))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok((report, to_stderr)) => {
            let text = report.to_pretty();
            let written = if to_stderr { writeln!(io::stderr(), "{text}") } else { writeln!(io::stdout(), "{text}") };
            if written.is_err() {
                return ExitCode::from(2);
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
