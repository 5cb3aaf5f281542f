//! `spectral-tetris` command-line tool.
//!
//! Exit codes: 0 success, 1 usage, I/O or parse error, 2 infeasible or
//! failed verification, 3 search budget exhausted.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use spectral_tetris::formats::{canonical_json, Generator, MatrixFile, SpecFile};
use spectral_tetris::readiness::ReadinessCondition;
use spectral_tetris::scalar::{ScalarError, DEFAULT_FACTOR_BOUND};
use spectral_tetris::search::SearchError;
use spectral_tetris::verify::{
    verify_dense, verify_matrix_bounded, VerifyError, DEFAULT_FLOAT_TOL,
};
use spectral_tetris::{
    check_ready, equal_norm_frame, find_ready_orderings, pnstc, unit_tight_feasible,
    ConstructError, FrameSpec, Rational, SearchRequest, SynthesisMatrix, VerifyMode,
};

const EXIT_ERROR: u8 = 1;
const EXIT_INFEASIBLE: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(
    name = "spectral-tetris",
    version,
    about = "Sparse frames with prescribed spectrum and norms"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the synthesis matrix for a spec, in the given orders.
    Construct {
        spec: PathBuf,
        /// Output file; stdout if omitted.
        #[arg(short, long)]
        out: Option<PathBuf>,
        /// Also write the matrix as dense decimal CSV.
        #[arg(long)]
        float_csv: Option<PathBuf>,
        /// Skip the readiness check and let the constructor fail on its own.
        #[arg(long)]
        skip_check: bool,
        /// Leave out generator metadata.
        #[arg(long)]
        reproducible: bool,
    },
    /// Report whether a spec is ready in its given orders.
    Check {
        spec: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Search for ready orderings of the spec's values.
    Search {
        spec: PathBuf,
        #[arg(long, default_value_t = 10)]
        max_results: usize,
        /// Maximum number of search nodes.
        #[arg(long, default_value_t = 10_000_000)]
        budget: u64,
        /// Keep the norms in their given order.
        #[arg(long)]
        fix_norms: bool,
        /// Keep the eigenvalues in their given order.
        #[arg(long)]
        fix_eigenvalues: bool,
    },
    /// Verify a matrix file (JSON, or CSV of decimals).
    Verify {
        matrix: PathBuf,
        /// Spec to compare against; defaults to the matrix metadata.
        #[arg(long)]
        spec: Option<PathBuf>,
        /// Exact for JSON input, float for CSV input by default.
        #[arg(long, value_enum)]
        mode: Option<Mode>,
        #[arg(long, default_value_t = DEFAULT_FLOAT_TOL)]
        tol: f64,
    },
    /// Decide whether Spectral Tetris builds a unit-norm tight frame.
    Feasible {
        #[arg(long)]
        vectors: usize,
        #[arg(long)]
        dim: usize,
    },
    /// Build an equal-norm frame with the given spectrum.
    EqualNorm {
        /// Decreasing, comma-separated, e.g. `3,2,1` or `5/2,1`.
        #[arg(long, value_delimiter = ',', required = true)]
        eigenvalues: Vec<Rational>,
        /// Use this r instead of the smallest valid one.
        #[arg(long)]
        r: Option<u64>,
        #[arg(short, long)]
        out: Option<PathBuf>,
        #[arg(long)]
        reproducible: bool,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exact,
    Float,
}

/// An error message and the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn error(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_ERROR,
            message: message.into(),
        }
    }

    fn infeasible(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INFEASIBLE,
            message: message.into(),
        }
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_ERROR)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Construct {
            spec,
            out,
            float_csv,
            skip_check,
            reproducible,
        } => cmd_construct(
            &spec,
            out.as_deref(),
            float_csv.as_deref(),
            skip_check,
            reproducible,
        ),
        Command::Check { spec, json } => cmd_check(&spec, json),
        Command::Search {
            spec,
            max_results,
            budget,
            fix_norms,
            fix_eigenvalues,
        } => cmd_search(&spec, max_results, budget, fix_norms, fix_eigenvalues),
        Command::Verify {
            matrix,
            spec,
            mode,
            tol,
        } => cmd_verify(&matrix, spec.as_deref(), mode, tol),
        Command::Feasible { vectors, dim } => cmd_feasible(vectors, dim),
        Command::EqualNorm {
            eigenvalues,
            r,
            out,
            reproducible,
        } => cmd_equal_norm(&eigenvalues, r, out.as_deref(), reproducible),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if !f.message.is_empty() {
                eprintln!("error: {}", f.message);
            }
            ExitCode::from(f.code)
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::error(format!("{}: {e}", path.display())))
}

fn write_output(path: Option<&Path>, text: &str) -> CmdResult {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::error(format!("{}: {e}", p.display()))),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::error(e.to_string())),
    }
}

fn print_json<T: Serialize>(value: &T) -> CmdResult {
    let text = canonical_json(value).map_err(|e| Failure::error(e.to_string()))?;
    write_output(None, &text)
}

fn load_spec(path: &Path) -> Result<FrameSpec, Failure> {
    let file = SpecFile::from_json_str(&read(path)?)
        .map_err(|e| Failure::error(format!("{}: {e}", path.display())))?;
    let (spec, warnings) = file
        .to_frame_spec()
        .map_err(|e| Failure::error(format!("{}: {e}", path.display())))?;
    for w in warnings {
        eprintln!("warning: {w}");
    }
    Ok(spec)
}

fn factor_bound() -> Result<u128, Failure> {
    match std::env::var("ST_FACTOR_BOUND") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::error(format!("ST_FACTOR_BOUND={v} is not a positive integer"))),
        Err(_) => Ok(DEFAULT_FACTOR_BOUND),
    }
}

fn describe_condition(c: ReadinessCondition) -> &'static str {
    match c {
        ReadinessCondition::TraceMismatch => "eigenvalue and squared-norm totals differ",
        ReadinessCondition::UpperBoundI => "the rows so far already cover every column",
        ReadinessCondition::GapII => "the next row fills up before the closing 2x2 block fits",
        ReadinessCondition::NormBoundII => {
            "the closing 2x2 block does not exist: its second column is shorter than the deficit"
        }
    }
}

fn not_ready_message(spec: &FrameSpec) -> Option<String> {
    let report = check_ready(spec);
    report.violation.map(|v| {
        format!(
            "not ready: {:?} violated at k={}: {}",
            v.condition,
            v.k,
            describe_condition(v.condition)
        )
    })
}

fn construct_failure(e: ConstructError) -> Failure {
    match e {
        ConstructError::ConstructionStuck { .. }
        | ConstructError::Infeasible { .. }
        | ConstructError::DegenerateSpectrum(_) => Failure::infeasible(e.to_string()),
        _ => Failure::error(e.to_string()),
    }
}

fn generator(reproducible: bool) -> Option<Generator> {
    (!reproducible).then(|| Generator {
        name: env!("CARGO_PKG_NAME").into(),
        version: env!("CARGO_PKG_VERSION").into(),
    })
}

fn write_matrix(
    f: &SynthesisMatrix,
    spec: &FrameSpec,
    out: Option<&Path>,
    reproducible: bool,
) -> CmdResult {
    let file = MatrixFile::from_matrix(f, Some(spec), generator(reproducible));
    let text = file
        .to_json_string()
        .map_err(|e| Failure::error(e.to_string()))?;
    write_output(out, &text)
}

fn write_csv(f: &SynthesisMatrix, path: &Path) -> CmdResult {
    let io_err = |e: csv::Error| Failure::error(format!("{}: {e}", path.display()));
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_path(path)
        .map_err(io_err)?;
    for row in f.to_dense_f64() {
        w.write_record(row.iter().map(|x| format!("{x:.16e}")))
            .map_err(io_err)?;
    }
    w.flush().map_err(|e| Failure::error(e.to_string()))
}

fn cmd_construct(
    spec_path: &Path,
    out: Option<&Path>,
    float_csv: Option<&Path>,
    skip_check: bool,
    reproducible: bool,
) -> CmdResult {
    let spec = load_spec(spec_path)?;
    if !spec.trace_holds() {
        return Err(Failure::error(format!(
            "trace mismatch: eigenvalues sum to {}, squared norms sum to {}",
            spec.eigen_total(),
            spec.norm_total()
        )));
    }
    if !skip_check {
        if let Some(msg) = not_ready_message(&spec) {
            return Err(Failure::infeasible(msg));
        }
    }
    let f = pnstc(&spec).map_err(construct_failure)?;
    if let Some(p) = float_csv {
        write_csv(&f, p)?;
    }
    write_matrix(&f, &spec, out, reproducible)
}

fn cmd_check(spec_path: &Path, json: bool) -> CmdResult {
    let spec = load_spec(spec_path)?;
    let report = check_ready(&spec);
    if json {
        print_json(&report)?;
    } else {
        println!("{}", if report.ready { "ready" } else { "not ready" });
        if let Some(p) = &report.partition {
            let cuts: Vec<String> = p.cuts.iter().map(usize::to_string).collect();
            println!("partition: {}", cuts.join(","));
        }
        if let Some(v) = report.violation {
            println!(
                "violation: {:?} at k={}: {}",
                v.condition,
                v.k,
                describe_condition(v.condition)
            );
        }
    }
    match report.violation {
        None => Ok(()),
        Some(v) if v.condition == ReadinessCondition::TraceMismatch => {
            Err(Failure::error(format!(
                "TraceMismatch: eigenvalues sum to {}, squared norms sum to {}",
                spec.eigen_total(),
                spec.norm_total()
            )))
        }
        // The report above already says why.
        Some(_) => Err(Failure::infeasible("")),
    }
}

fn cmd_search(
    spec_path: &Path,
    max_results: usize,
    budget: u64,
    fix_norms: bool,
    fix_eigenvalues: bool,
) -> CmdResult {
    let spec = load_spec(spec_path)?;
    let req = SearchRequest {
        norms_sq: spec.norms_sq().to_vec(),
        eigenvalues: spec.eigenvalues().to_vec(),
        max_results,
        budget,
        fix_norm_order: fix_norms,
        fix_eigen_order: fix_eigenvalues,
    };
    match find_ready_orderings(&req) {
        Ok(r) => {
            print_json(&r)?;
            if r.orderings.is_empty() {
                Err(Failure::infeasible("no ready ordering exists"))
            } else {
                Ok(())
            }
        }
        Err(SearchError::BudgetExhausted { partial }) => {
            print_json(&partial)?;
            Err(Failure {
                code: EXIT_BUDGET,
                message: format!("BudgetExhausted after {} nodes", partial.nodes),
            })
        }
        Err(e) => Err(Failure::error(e.to_string())),
    }
}

fn read_csv(path: &Path) -> Result<Vec<Vec<f64>>, Failure> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| Failure::error(format!("{}: {e}", path.display())))?;
    let mut rows = Vec::new();
    for record in r.records() {
        let record = record.map_err(|e| Failure::error(format!("{}: {e}", path.display())))?;
        let row = record
            .iter()
            .map(|s| {
                s.parse::<f64>().map_err(|_| {
                    Failure::error(format!("{}: {s:?} is not a number", path.display()))
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    Ok(rows)
}

fn verify_failure(e: VerifyError) -> Failure {
    match e {
        VerifyError::ZeroRow(_) => Failure::infeasible(e.to_string()),
        VerifyError::Scalar(ScalarError::FactorizationIncomplete { .. }) => Failure::error(
            format!("{e}; rerun with --mode float or raise ST_FACTOR_BOUND"),
        ),
        _ => Failure::error(e.to_string()),
    }
}

fn cmd_verify(matrix: &Path, spec_path: Option<&Path>, mode: Option<Mode>, tol: f64) -> CmdResult {
    let is_csv = matrix
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"));
    if is_csv {
        if mode == Some(Mode::Exact) {
            return Err(Failure::error(
                "CSV input can only be verified in float mode",
            ));
        }
        let report = verify_dense(&read_csv(matrix)?, tol).map_err(verify_failure)?;
        print_json(&report)?;
        return if report.orthogonal {
            Ok(())
        } else {
            Err(Failure::infeasible("rows are not orthogonal"))
        };
    }
    let file = MatrixFile::from_json_str(&read(matrix)?)
        .map_err(|e| Failure::error(format!("{}: {e}", matrix.display())))?;
    let f = file
        .to_matrix()
        .map_err(|e| Failure::error(e.to_string()))?;
    let spec = match spec_path {
        Some(p) => Some(load_spec(p)?),
        None => file.spec().map_err(|e| Failure::error(e.to_string()))?,
    };
    let mode = match mode.unwrap_or(Mode::Exact) {
        Mode::Exact => VerifyMode::Exact,
        Mode::Float => VerifyMode::Float(tol),
    };
    let report =
        verify_matrix_bounded(&f, spec.as_ref(), mode, factor_bound()?).map_err(verify_failure)?;
    print_json(&report)?;
    if !report.orthogonal {
        Err(Failure::infeasible("rows are not orthogonal"))
    } else if report.matches_spec == Some(false) {
        Err(Failure::infeasible("matrix does not match the spec"))
    } else {
        Ok(())
    }
}

fn cmd_feasible(vectors: usize, dim: usize) -> CmdResult {
    let verdict = unit_tight_feasible(vectors, dim).map_err(|e| Failure::error(e.to_string()))?;
    print_json(&verdict)?;
    if verdict.feasible {
        Ok(())
    } else {
        Err(Failure::infeasible(format!(
            "no unit-norm tight frame of {vectors} vectors in dimension {dim} via Spectral Tetris"
        )))
    }
}

fn cmd_equal_norm(
    eigenvalues: &[Rational],
    r: Option<u64>,
    out: Option<&Path>,
    reproducible: bool,
) -> CmdResult {
    let frame = equal_norm_frame(eigenvalues, r).map_err(construct_failure)?;
    eprintln!(
        "r = {}, {} vectors of squared norm {}",
        frame.r,
        frame.matrix.count(),
        frame.norm_sq
    );
    let spec = FrameSpec::new(
        eigenvalues.to_vec(),
        vec![frame.norm_sq; frame.matrix.count()],
    )
    .map_err(|e| Failure::error(e.to_string()))?;
    write_matrix(&frame.matrix, &spec, out, reproducible)
}
