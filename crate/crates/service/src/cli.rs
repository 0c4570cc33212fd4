//! The `folgrade` command line.
//!
//! Exit codes: 0 success or valid, 1 negative result, 2 time or resource
//! limit, 3 usage error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Parser, Subcommand};
use folgrade::corpus::{run_corpus, CorpusFile};
use folgrade::normalize::{clausify, equality_axioms};
use folgrade::resolution::{refute, Budget, ExceededReason, ProofResult};
use folgrade::{
    find_countermodel, grade_with, parse_inferring, render_feedback, Exercise, Formula, GraderConfig, Signature,
    StopToken, TableauBudget, Verdict,
};

use crate::config::Config;
use crate::records::VerdictDoc;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_LIMIT: i32 = 2;
pub const EXIT_USAGE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "folgrade", version, about = "Grade first-order logic translations by equivalence checking")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Try to prove a sentence valid by resolution: VALID, NOT-PROVED or TIMEOUT.
    Prove {
        /// Sentence text, or @path to read it from a file.
        #[arg(allow_hyphen_values = true)]
        sentence: String,
        /// Seconds before giving up.
        #[arg(long, default_value = "5", value_parser = seconds)]
        timeout: Duration,
    },
    /// Search for an interpretation that makes a sentence false.
    Countermodel {
        /// Sentence text, or @path.
        #[arg(allow_hyphen_values = true)]
        sentence: String,
        /// Largest domain tried by the finite-model fallback.
        #[arg(long, default_value_t = 4)]
        max_domain: usize,
        #[arg(long, default_value = "5", value_parser = seconds)]
        timeout: Duration,
    },
    /// Grade one answer against an exercise file.
    Grade {
        /// Exercise JSON file.
        #[arg(long)]
        exercise: PathBuf,
        /// Answer text, or @path.
        #[arg(long, allow_hyphen_values = true)]
        answer: String,
        /// Only run the prover; no countermodels.
        #[arg(long)]
        binary: bool,
        /// Print the verdict as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Run the HTTP service.
    Serve {
        /// TOML config file; FOLGRADE_* variables override it.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Grade every submission of a corpus file against its expected verdict.
    Corpus {
        #[arg(long)]
        file: PathBuf,
        /// Also write the rows as JSON to this path.
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, default_value_t = 4)]
        workers: usize,
    },
    /// Print the clause form of a sentence.
    Normalize {
        /// Sentence text, or @path.
        #[arg(allow_hyphen_values = true)]
        sentence: String,
    },
}

fn seconds(s: &str) -> Result<Duration, String> {
    let secs: f64 = s.parse().map_err(|_| format!("not a number of seconds: {s}"))?;
    if !(secs > 0.0 && secs.is_finite()) {
        return Err("must be a positive number of seconds".into());
    }
    Ok(Duration::from_secs_f64(secs))
}

/// A usage problem, reported on stderr with exit code 3.
struct Usage(String);

impl<E: std::fmt::Display> From<E> for Usage {
    fn from(e: E) -> Self {
        Usage(e.to_string())
    }
}

/// Inline text, or the contents of a file for `@path`.
fn input(arg: &str) -> Result<String, Usage> {
    match arg.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|e| Usage(format!("cannot read {path}: {e}"))),
        None => Ok(arg.to_string()),
    }
}

fn read_file(path: &Path) -> Result<String, Usage> {
    std::fs::read_to_string(path).map_err(|e| Usage(format!("cannot read {}: {e}", path.display())))
}

fn sentence(arg: &str) -> Result<(Formula, Signature), Usage> {
    Ok(parse_inferring(input(arg)?.trim())?)
}

/// Entry point used by the binary.
pub fn main() -> i32 {
    run(std::env::args_os(), &mut std::io::stdout(), &mut std::io::stderr())
}

pub fn run(args: impl IntoIterator<Item = impl Into<OsString> + Clone>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return EXIT_USAGE;
            }
            let _ = write!(out, "{}", e.render());
            return EXIT_OK;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
    }
}

fn execute(command: Command, out: &mut dyn Write) -> Result<i32, Usage> {
    match command {
        Command::Prove { sentence: s, timeout } => prove(&s, timeout, out),
        Command::Countermodel {
            sentence: s,
            max_domain,
            timeout,
        } => {
            let (f, sig) = sentence(&s)?;
            let budget = TableauBudget {
                max_domain_size: max_domain,
                ..TableauBudget::with_stop(StopToken::after(timeout))
            };
            match find_countermodel(&f, &sig, &budget) {
                Some(cm) => {
                    write!(out, "{}", cm.render())?;
                    Ok(EXIT_OK)
                }
                None => {
                    writeln!(out, "none found")?;
                    Ok(EXIT_NEGATIVE)
                }
            }
        }
        Command::Grade {
            exercise,
            answer,
            binary,
            json,
        } => {
            let ex = Exercise::from_json(&read_file(&exercise)?)?;
            let text = input(&answer)?;
            let config = if binary { GraderConfig::binary() } else { GraderConfig::default() };
            let verdict = grade_with(&ex, text.trim(), &config);
            if json {
                writeln!(out, "{}", serde_json::to_string_pretty(&VerdictDoc::new(&verdict, &ex))?)?;
            } else {
                writeln!(out, "{}", render_feedback(&verdict, &ex))?;
                if let Some(cm) = verdict.countermodel() {
                    write!(out, "\n{}", cm.render())?;
                }
            }
            Ok(match verdict {
                Verdict::Correct => EXIT_OK,
                Verdict::Incorrect(_) | Verdict::Rejected(_) => EXIT_NEGATIVE,
                Verdict::TimeLimitExceeded(_) => EXIT_LIMIT,
            })
        }
        Command::Serve { config } => {
            let config = Config::load(config.as_deref())?;
            let _ = tracing_subscriber::fmt().with_writer(std::io::stderr).try_init();
            let runtime = tokio::runtime::Runtime::new()?;
            match runtime.block_on(crate::server::serve(config)) {
                Ok(()) => Ok(EXIT_OK),
                Err(e) => {
                    tracing::error!("{e}");
                    Ok(EXIT_LIMIT)
                }
            }
        }
        Command::Corpus { file, report, workers } => {
            let corpus = CorpusFile::from_json(&read_file(&file)?)?;
            let rows = run_corpus(&corpus, &GraderConfig::default(), workers);
            writeln!(out, "{rows}")?;
            if let Some(path) = report {
                std::fs::write(&path, serde_json::to_string_pretty(&rows)?)?;
            }
            Ok(if rows.all_passed() { EXIT_OK } else { EXIT_NEGATIVE })
        }
        Command::Normalize { sentence: s } => {
            let (f, _) = sentence(&s)?;
            let cs = clausify(&f)?;
            write!(out, "{cs}")?;
            if cs.has_equality() {
                writeln!(out, "% equality axioms")?;
                write!(out, "{}", equality_axioms(&cs.signature()))?;
            }
            Ok(EXIT_OK)
        }
    }
}

fn prove(arg: &str, timeout: Duration, out: &mut dyn Write) -> Result<i32, Usage> {
    let (f, _) = sentence(arg)?;
    let cs = match clausify(&Formula::not(f)) {
        Ok(cs) => cs,
        Err(e) => {
            writeln!(out, "TIMEOUT ({e})")?;
            return Ok(EXIT_LIMIT);
        }
    };
    match refute(&cs, &Budget::new(StopToken::after(timeout))) {
        ProofResult::Refuted(steps) => {
            writeln!(out, "VALID")?;
            for step in steps {
                writeln!(out, "{step}")?;
            }
            Ok(EXIT_OK)
        }
        ProofResult::Saturated => {
            writeln!(out, "NOT-PROVED")?;
            Ok(EXIT_NEGATIVE)
        }
        ProofResult::BudgetExceeded(reason) => {
            let why = match reason {
                ExceededReason::Deadline => "time limit",
                ExceededReason::ClauseLimit => "clause limit",
            };
            writeln!(out, "TIMEOUT ({why})")?;
            Ok(EXIT_LIMIT)
        }
    }
}
