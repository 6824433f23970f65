//! Batch front-end behind the `ga-align` binary.
//!
//! Exit codes: `0` success, `2` unreadable/unparsable input or invalid
//! parameters, `3` solver failure, `1` output I/O failure. Failures print a
//! JSON object with an `error` kind on standard error.

pub mod bench;
pub mod csv_io;
pub mod generate;
pub mod json;
pub mod report;
pub mod rng;

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde_json::Value;

use crate::align::{self, AlignmentProblem, SummarizeOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;

/// Caps summarize parallelism; `0` or unset means one thread per core.
pub const THREADS_ENV: &str = "GA_ALIGN_THREADS";

/// A failed command: exit code plus the JSON written to standard error.
#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub code: i32,
    pub report: Value,
}

impl Failure {
    fn new(code: i32, kind: &str, message: impl std::fmt::Display) -> Self {
        Self {
            code,
            report: report::error_report(kind, &message.to_string()),
        }
    }
}

pub fn summarize_options_from_env() -> Result<SummarizeOptions, Failure> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(SummarizeOptions::auto()),
        Ok(s) => s
            .trim()
            .parse()
            .map(|threads| SummarizeOptions { threads })
            .map_err(|_| {
                Failure::new(
                    EXIT_PARSE,
                    "InvalidParameter",
                    format!("{THREADS_ENV} must be a non-negative integer, got {s:?}"),
                )
            }),
    }
}

fn open(path: &Path) -> Result<BufReader<File>, Failure> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Failure::new(EXIT_PARSE, "IoError", format!("{}: {e}", path.display())))
}

fn parse_failure(path: &Path, e: &csv_io::ParseError) -> Failure {
    Failure {
        code: EXIT_PARSE,
        report: report::parse_error_report(&path.display().to_string(), e),
    }
}

fn write_output(path: Option<&Path>, contents: &[u8]) -> Result<(), Failure> {
    let result = match path {
        Some(p) => std::fs::write(p, contents),
        None => io::stdout().lock().write_all(contents),
    };
    result.map_err(|e| Failure::new(EXIT_IO, "IoError", e))
}

pub fn load_problem(input: &Path, priors: Option<&Path>) -> Result<AlignmentProblem, Failure> {
    let pairs = csv_io::read_pairs(open(input)?).map_err(|e| parse_failure(input, &e))?;
    let priors = match priors {
        Some(p) => csv_io::read_priors(open(p)?).map_err(|e| parse_failure(p, &e))?,
        None => Vec::new(),
    };
    Ok(AlignmentProblem { pairs, priors })
}

/// Reads, solves and renders the canonical report.
pub fn solve_to_string(input: &Path, priors: Option<&Path>, opts: &SummarizeOptions) -> Result<String, Failure> {
    let problem = load_problem(input, priors)?;
    let sol =
        align::solve_with(&problem, opts).map_err(|e| Failure::new(EXIT_SOLVER, report::align_error_kind(&e), &e))?;
    Ok(json::to_canonical_string(&report::solution_report(&sol)))
}

pub fn solve(input: &Path, priors: Option<&Path>, output: Option<&Path>) -> Result<(), Failure> {
    let opts = summarize_options_from_env()?;
    let text = solve_to_string(input, priors, &opts)?;
    write_output(output, text.as_bytes())
}

/// Sidecar path for the ground truth of a generated pairs file.
pub fn truth_path(output: &Path) -> PathBuf {
    output.with_extension("truth.json")
}

pub fn generate(params: &generate::GenerateParams, output: &Path) -> Result<(), Failure> {
    let (problem, truth) = generate::generate(params).map_err(|e| Failure::new(EXIT_PARSE, "InvalidParameter", e))?;
    let mut csv = Vec::new();
    csv_io::write_pairs(&mut csv, &problem.pairs).map_err(|e| Failure::new(EXIT_IO, "IoError", e))?;
    write_output(Some(output), &csv)?;
    let truth = json::to_canonical_string(&truth.to_json());
    write_output(Some(&truth_path(output)), truth.as_bytes())
}

pub fn bench(n_list: &[usize], repetitions: usize) -> Result<(), Failure> {
    if n_list.is_empty() || n_list.contains(&0) {
        return Err(Failure::new(
            EXIT_PARSE,
            "InvalidParameter",
            "every n must be at least 1",
        ));
    }
    let opts = summarize_options_from_env()?;
    let rows = bench::run(n_list, repetitions, &opts).map_err(|e| Failure::new(EXIT_PARSE, "InvalidParameter", e))?;
    let stdout = io::stdout();
    bench::write_csv(BufWriter::new(stdout.lock()), &rows).map_err(|e| Failure::new(EXIT_IO, "IoError", e))
}

/// Prints the failure report and maps to an exit code.
pub fn finish(result: Result<(), Failure>) -> i32 {
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            eprint!("{}", json::to_canonical_string(&f.report));
            f.code
        }
    }
}
