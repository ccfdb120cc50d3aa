use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use patholab_core::corpus::{parse_corpus, BUNDLED_CORPUS};
use patholab_core::pipeline::{audit_1jt, classify_text, report_text, run, Config};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

/// Classify set-builder predicates as pathological or not.
#[derive(Debug, Parser)]
#[command(name = "patholab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Largest term depth the refuter instantiates with.
    #[arg(long, global = true, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..=200))]
    refute_depth: u64,

    /// Rule applications the refuter may spend.
    #[arg(long, global = true, default_value_t = 50_000)]
    refute_steps: usize,

    /// Largest universe the model finder tries.
    #[arg(long, global = true, default_value_t = 5)]
    model_size: usize,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write the bundled corpus to the corpus file before reading it.
    #[arg(long, global = true)]
    seed_corpus: bool,

    /// Exit with status 1 when any corpus line could not be classified.
    #[arg(long, global = true)]
    fail_on_error: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classify one formula.
    Classify { formula: String },
    /// Classify every entry of a corpus file.
    Run { corpus: PathBuf },
    /// Check that no entry and its negation are both refuted.
    #[command(name = "audit-1jt")]
    Audit1jt { corpus: PathBuf },
}

fn read_corpus(path: &PathBuf, seed: bool) -> Result<String, ExitCode> {
    if seed {
        if let Err(e) = std::fs::write(path, BUNDLED_CORPUS) {
            eprintln!("patholab: cannot write {}: {e}", path.display());
            return Err(ExitCode::from(2));
        }
    }
    std::fs::read_to_string(path).map_err(|e| {
        eprintln!("patholab: cannot read {}: {e}", path.display());
        ExitCode::from(2)
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = Config {
        refute_depth: cli.refute_depth as usize,
        refute_steps: cli.refute_steps,
        model_size: cli.model_size,
    };
    match &cli.command {
        Command::Classify { formula } => {
            if cli.seed_corpus {
                eprintln!(
                    "patholab: --seed-corpus needs a corpus file (use it with run or audit-1jt)"
                );
                return ExitCode::from(2);
            }
            let (report, _) = classify_text(formula, &config);
            match cli.format {
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&report).expect("report serializes")
                ),
                Format::Text => print!("{}", report_text(&report)),
            }
            if report.error.is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            }
        }
        Command::Run { corpus } => {
            let text = match read_corpus(corpus, cli.seed_corpus) {
                Ok(t) => t,
                Err(code) => return code,
            };
            let report = run(&parse_corpus(&text), &config);
            match cli.format {
                Format::Json => println!("{}", report.to_json()),
                Format::Text => print!("{}", report.to_text()),
            }
            if report.has_mismatch() || (cli.fail_on_error && report.summary.errors > 0) {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Command::Audit1jt { corpus } => {
            let text = match read_corpus(corpus, cli.seed_corpus) {
                Ok(t) => t,
                Err(code) => return code,
            };
            let audit = audit_1jt(&parse_corpus(&text), &config);
            match cli.format {
                Format::Json => println!("{}", audit.to_json()),
                Format::Text => print!("{}", audit.to_text()),
            }
            if !audit.pass || (cli.fail_on_error && !audit.errors.is_empty()) {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
    }
}
