//! `mvbasis`: expansions, basis tables, Cartan-shape bases, chart reports and
//! the invariant suites, all as JSON on stdout.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or parse error.

mod vecspec;

use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use mvbasis::basis::YBasis;
use mvbasis::charts::{charts_report, ChartsMode};
use mvbasis::rep::{mv_basis_of_shape, shape_basis_json, Shape};
use mvbasis::verify::{run_suite, Suite, VerifyOptions};
use mvbasis::{BasisTag, Error, TensorVector, Word};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "mvbasis", version, about = "Exact MV basis of tensor powers of the natural SL2 representation")]
struct Cli {
    /// Caps the number of worker threads.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum BasisArg {
    X,
    Y,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Transition,
    Tilde,
    Verify,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Words,
    Basis,
    Rep,
    Charts,
    Theorem,
    All,
}

#[derive(Subcommand)]
enum Command {
    /// Expands a vector such as "x:-+ + 2*x:+-" in the target basis.
    Expand {
        #[arg(allow_hyphen_values = true)]
        spec: String,
        /// Word length; required for the zero vector, checked otherwise.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long = "to", value_enum, default_value = "y")]
        target: BasisArg,
    },
    /// Runs an invariant suite for every length up to --n-max.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: SuiteArg,
        #[arg(long, default_value_t = 6)]
        n_max: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Prints y_w in the x-basis and x_w in the y-basis for every word of length n.
    Table {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: FormatArg,
    },
    /// Prints the MV basis of the Cartan component for a shape such as "2,1".
    Cartan {
        #[arg(long)]
        shape: String,
    },
    /// Checks the chart computations for one pair of words.
    Charts {
        #[arg(long, allow_hyphen_values = true)]
        v: String,
        #[arg(long, allow_hyphen_values = true)]
        w: String,
        #[arg(long, value_enum, default_value = "verify")]
        mode: ModeArg,
        #[arg(long)]
        print_poly: bool,
    },
}

enum Failure {
    Usage(String),
    Verification,
    Internal(String),
    /// Stdout was closed by the reader; not an error.
    Closed,
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Failure {
        if e.kind() == io::ErrorKind::BrokenPipe {
            Failure::Closed
        } else {
            Failure::Internal(e.to_string())
        }
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Failure {
        match e.into_kind() {
            csv::ErrorKind::Io(e) => e.into(),
            other => Failure::Internal(format!("{other:?}")),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::InvalidLetter(_)
            | Error::SizeExceeded { .. }
            | Error::LengthMismatch { .. }
            | Error::Contract(_)
            | Error::Parse(_)
            | Error::DivisionByZero => Failure::Usage(e.to_string()),
            _ => Failure::Internal(e.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn emit(value: &impl Serialize) -> Outcome {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure::Internal(e.to_string()))?;
    let mut out = io::stdout().lock();
    writeln!(out, "{text}")?;
    Ok(out.flush()?)
}

fn tag(b: BasisArg) -> BasisTag {
    match b {
        BasisArg::X => BasisTag::X,
        BasisArg::Y => BasisTag::Y,
    }
}

fn cmd_expand(spec: &str, n: Option<usize>, target: BasisTag) -> Outcome {
    let terms = vecspec::parse_spec(spec)?;
    let len = match (n, terms.first()) {
        (Some(n), _) => n,
        (None, Some(t)) => t.word.len(),
        (None, None) => 0,
    };
    let basis = YBasis::shared();
    let mut out = TensorVector::zero(len, target);
    for t in terms {
        if t.word.len() != len {
            return Err(Error::LengthMismatch { expected: len, found: t.word.len() }.into());
        }
        let converted = basis.convert(&TensorVector::unit(t.word, t.basis), target)?;
        out.axpy(&t.coeff, &converted)?;
    }
    emit(&out)
}

fn cmd_verify(suite: SuiteArg, n_max: usize, seed: u64, threads: Option<usize>) -> Outcome {
    let suites: Vec<Suite> = match suite {
        SuiteArg::Words => vec![Suite::Words],
        SuiteArg::Basis => vec![Suite::Basis],
        SuiteArg::Rep => vec![Suite::Rep],
        SuiteArg::Charts => vec![Suite::Charts],
        SuiteArg::Theorem => vec![Suite::Theorem],
        SuiteArg::All => Suite::ALL.to_vec(),
    };
    let opts = VerifyOptions { n_max, seed, threads };
    let mut reports = Vec::new();
    for s in suites {
        let r = run_suite(s, opts)?;
        eprintln!("{s}: {:?}", r.status);
        reports.push(r);
    }
    let passed = reports.iter().all(|r| r.passed());
    if reports.len() == 1 {
        emit(&reports[0])?;
    } else {
        emit(&reports)?;
    }
    if passed {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn terms_text(terms: &[mvbasis::exactalg::TermJson]) -> String {
    terms.iter().map(|t| format!("{}*{}", t.coeff, t.word)).collect::<Vec<_>>().join(" ")
}

fn cmd_table(n: usize, format: FormatArg) -> Outcome {
    let rows = YBasis::shared().table(n)?;
    match format {
        FormatArg::Json => emit(&rows),
        FormatArg::Csv => {
            let mut w = csv::Writer::from_writer(io::stdout().lock());
            w.write_record(["word", "y_in_x", "x_in_y"])?;
            for r in &rows {
                w.write_record([r.word.to_string(), terms_text(&r.y_in_x), terms_text(&r.x_in_y)])?;
            }
            Ok(w.flush()?)
        }
    }
}

fn cmd_cartan(shape: &str) -> Outcome {
    let parts = shape
        .split(',')
        .map(|p| p.trim().parse::<usize>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| Failure::Usage(format!("invalid shape {shape:?}: {e}")))?;
    let shape = Shape::new(parts)?;
    let elements = mv_basis_of_shape(&shape)?;
    emit(&shape_basis_json(&shape, &elements))
}

fn cmd_charts(v: &str, w: &str, mode: ModeArg, print_poly: bool) -> Outcome {
    let v: Word = v.parse()?;
    let w: Word = w.parse()?;
    if v.len() != w.len() {
        return Err(Error::LengthMismatch { expected: w.len(), found: v.len() }.into());
    }
    let mode = match mode {
        ModeArg::Transition => ChartsMode::Transition,
        ModeArg::Tilde => ChartsMode::Tilde,
        ModeArg::Verify => ChartsMode::Verify,
    };
    let report = charts_report(&v, &w, mode, print_poly)?;
    emit(&report)?;
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(k) = cli.threads {
        // Ignored if the global pool already exists; suites build their own.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(k.max(1)).build_global();
    }
    let outcome = match &cli.command {
        Command::Expand { spec, n, target } => cmd_expand(spec, *n, tag(*target)),
        Command::Verify { suite, n_max, seed } => cmd_verify(*suite, *n_max, *seed, cli.threads),
        Command::Table { n, format } => cmd_table(*n, *format),
        Command::Cartan { shape } => cmd_cartan(shape),
        Command::Charts { v, w, mode, print_poly } => cmd_charts(v, w, *mode, *print_poly),
    };
    let _ = io::stdout().flush();
    match outcome {
        Ok(()) | Err(Failure::Closed) => ExitCode::SUCCESS,
        Err(Failure::Verification) => {
            eprintln!("verification failed");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
