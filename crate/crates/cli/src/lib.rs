//! Command implementations for the `biquasile` binary.
//!
//! Each command writes its report to `out` and returns an [`Outcome`]
//! carrying the exit code.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use biquasile::algebra::{named, parse_matrix_tables};
use biquasile::boltzmann::{check_weight, enhanced_invariant_with, parse_weight};
use biquasile::diagram::{
    euler_check, parse_diagram, resolve, serialize_diagram, MarkedSchema, Sign,
};
use biquasile::invariants::{compare_with, invariant_table_with, NamedAlgebra, NamedWeight};
use biquasile::solver::{
    build_linear_system, count_colorings_par, count_colorings_with, count_solutions_linear,
    list_colorings_with, oracle_count_with,
};
use biquasile::{
    alexander_biquasile, enumerate_biquasiles, make_biquasile, serialize_matrix, AlgebraError,
    Biquasile, BoltzmannWeight, DiagramError, MarkedGraphDiagram, SolverError, WeightError,
    DEFAULT_ORACLE_BUDGET,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

pub const BUDGET_ENV: &str = "BIQUASILE_ORACLE_BUDGET";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Algebra { path: String, source: AlgebraError },
    #[error("{path}: {source}")]
    Diagram { path: PathBuf, source: DiagramError },
    #[error("{path}: {source}")]
    Weight { path: PathBuf, source: WeightError },
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Domain(String),
    #[error(transparent)]
    Budget(SolverError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Diagram { .. } | CliError::Usage(_) => EXIT_PARSE,
            CliError::Algebra { source, .. } if source.is_malformed() => EXIT_PARSE,
            CliError::Algebra { .. } => EXIT_DOMAIN,
            CliError::Weight { source, .. } => match source {
                WeightError::Parse { .. } | WeightError::ZeroModulus | WeightError::ZeroOrder => {
                    EXIT_PARSE
                }
                _ => EXIT_DOMAIN,
            },
            CliError::Domain(_) => EXIT_DOMAIN,
            CliError::Budget(_) => EXIT_BUDGET,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "biquasile",
    version,
    about = "Biquasile invariants of marked graph diagrams"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Schema {
    Identify,
    Reciprocal,
}

impl From<Schema> for MarkedSchema {
    fn from(s: Schema) -> Self {
        match s {
            Schema::Identify => MarkedSchema::Identify,
            Schema::Reciprocal => MarkedSchema::Reciprocal,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum, PartialEq, Eq)]
pub enum Method {
    Backtrack,
    Oracle,
    Linear,
}

#[derive(Debug, Args)]
pub struct AlgebraArg {
    /// Matrix file, built-in name (X1, X2, X3, Y2) or `alexander:N,d,s,n`.
    #[arg(required_unless_present = "alexander")]
    pub algebra: Option<String>,
    /// Alexander biquasile on Z_N with parameters d, s, n.
    #[arg(long, num_args = 4, value_names = ["N", "D", "S", "NN"], allow_negative_numbers = true)]
    pub alexander: Option<Vec<i64>>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Verify the biquasile axioms of a matrix file.
    Check { algebra: String },
    /// Count or list colorings of a diagram.
    Color {
        diagram: PathBuf,
        #[command(flatten)]
        algebra: AlgebraArg,
        #[arg(long, conflicts_with = "list")]
        count: bool,
        #[arg(long)]
        list: bool,
        #[arg(long, value_enum, default_value = "backtrack")]
        method: Method,
        #[arg(long, value_enum, default_value = "identify")]
        schema: Schema,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Boltzmann-enhanced invariant as a polynomial in u.
    Invariant {
        diagram: PathBuf,
        algebra: String,
        weight: PathBuf,
        #[arg(long, value_enum, default_value = "identify")]
        schema: Schema,
    },
    /// Check a weight file against the Boltzmann weight axioms.
    CheckWeight { algebra: String, weight: PathBuf },
    /// List every biquasile of the given order.
    Enumerate {
        order: usize,
        #[arg(long)]
        count: bool,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Print the positive or negative resolution of a diagram.
    Resolve {
        diagram: PathBuf,
        #[arg(allow_hyphen_values = true)]
        sign: String,
    },
    /// Compare two diagrams by counting and enhanced invariants.
    Compare {
        first: PathBuf,
        second: PathBuf,
        #[arg(long, num_args = 1.., required = true)]
        algebras: Vec<String>,
        /// Entries of the form ALGEBRA:WEIGHT_FILE.
        #[arg(long, num_args = 1..)]
        weights: Vec<String>,
        #[arg(long, value_enum, default_value = "identify")]
        schema: Schema,
    },
    /// Counting invariants of every diagram in a directory.
    Table {
        corpus: PathBuf,
        #[arg(long, num_args = 1.., required = true)]
        algebras: Vec<String>,
        /// Print `diagram algebra count` lines instead of the aligned table.
        #[arg(long)]
        lines: bool,
        #[arg(long, value_enum, default_value = "identify")]
        schema: Schema,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_diagram(path: &Path) -> Result<MarkedGraphDiagram, CliError> {
    let d = parse_diagram(&read(path)?).map_err(|source| CliError::Diagram {
        path: path.to_path_buf(),
        source,
    })?;
    if d.name().is_none() {
        let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned());
        return Ok(match stem {
            Some(s) => d.with_name(s),
            None => d,
        });
    }
    Ok(d)
}

/// Resolves a built-in name, `alexander:N,d,s,n`, or a matrix file.
pub fn load_algebra(spec: &str) -> Result<NamedAlgebra, CliError> {
    if let Some(b) = named::by_name(spec) {
        return Ok(NamedAlgebra::new(spec, b));
    }
    if let Some(rest) = spec.strip_prefix("alexander:") {
        let p: Vec<i64> = rest
            .split(',')
            .map(|t| t.trim().parse::<i64>())
            .collect::<Result<_, _>>()
            .map_err(|_| CliError::Usage(format!("bad alexander spec `{spec}`")))?;
        return alexander(&p).map(|b| NamedAlgebra::new(spec, b));
    }
    let path = Path::new(spec);
    let text = read(path)?;
    let err = |source| CliError::Algebra {
        path: spec.to_string(),
        source,
    };
    let (star, dot) = parse_matrix_tables(&text).map_err(err)?;
    let b = make_biquasile(star, dot).map_err(err)?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| spec.to_string());
    Ok(NamedAlgebra::new(name, b))
}

fn alexander(p: &[i64]) -> Result<Biquasile, CliError> {
    match *p {
        [m, d, s, n] if m > 0 => {
            alexander_biquasile(m as usize, d, s, n).map_err(|source| CliError::Algebra {
                path: "--alexander".into(),
                source,
            })
        }
        _ => Err(CliError::Usage("alexander needs N d s n with N > 0".into())),
    }
}

fn algebra_from(arg: &AlgebraArg) -> Result<NamedAlgebra, CliError> {
    match (&arg.alexander, &arg.algebra) {
        (Some(p), _) => alexander(p).map(|b| NamedAlgebra::new(format!("alexander:{p:?}"), b)),
        (None, Some(spec)) => load_algebra(spec),
        (None, None) => Err(CliError::Usage("an algebra is required".into())),
    }
}

fn load_weight(path: &Path) -> Result<BoltzmannWeight, CliError> {
    parse_weight(&read(path)?).map_err(|source| CliError::Weight {
        path: path.to_path_buf(),
        source,
    })
}

pub fn oracle_budget() -> u128 {
    std::env::var(BUDGET_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_ORACLE_BUDGET)
}

fn with_jobs<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> T {
    match rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
    {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

fn io(e: std::io::Error) -> CliError {
    CliError::Io {
        path: PathBuf::from("<stdout>"),
        source: e,
    }
}

pub fn cmd_check(spec: &str, out: &mut dyn Write) -> Result<(), CliError> {
    let a = load_algebra(spec)?;
    writeln!(out, "ok: order {} biquasile", a.algebra.order()).map_err(io)
}

pub struct ColorOptions {
    pub list: bool,
    pub method: Method,
    pub schema: MarkedSchema,
    pub jobs: usize,
}

pub fn cmd_color(
    diagram: &Path,
    algebra: &NamedAlgebra,
    opts: &ColorOptions,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let d = load_diagram(diagram)?;
    let alg = &algebra.algebra;
    if opts.list {
        for c in list_colorings_with(&d, alg, opts.schema) {
            writeln!(out, "{c}").map_err(io)?;
        }
        return Ok(());
    }
    let n = match opts.method {
        Method::Backtrack if opts.jobs > 1 => {
            with_jobs(opts.jobs, || count_colorings_par(&d, alg, opts.schema))
        }
        Method::Backtrack => count_colorings_with(&d, alg, opts.schema),
        Method::Oracle => {
            oracle_count_with(&d, alg, opts.schema, oracle_budget()).map_err(CliError::Budget)?
        }
        Method::Linear => {
            let p = alg.alexander_params().ok_or_else(|| {
                CliError::Usage("--method linear needs an Alexander biquasile".into())
            })?;
            count_solutions_linear(&build_linear_system(&d, p, opts.schema))
        }
    };
    writeln!(out, "{n}").map_err(io)
}

pub fn cmd_invariant(
    diagram: &Path,
    algebra: &str,
    weight: &Path,
    schema: MarkedSchema,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let d = load_diagram(diagram)?;
    let a = load_algebra(algebra)?;
    let w = load_weight(weight)?;
    if w.order() != a.algebra.order() {
        return Err(CliError::Domain(format!(
            "weight has order {}, algebra has order {}",
            w.order(),
            a.algebra.order()
        )));
    }
    let inv = enhanced_invariant_with(&d, &a.algebra, &w, schema);
    writeln!(out, "{}", inv.polynomial()).map_err(io)
}

pub fn cmd_check_weight(algebra: &str, weight: &Path, out: &mut dyn Write) -> Result<(), CliError> {
    let a = load_algebra(algebra)?;
    let w = load_weight(weight)?;
    let violations = check_weight(&a.algebra, &w).map_err(|source| CliError::Weight {
        path: weight.to_path_buf(),
        source,
    })?;
    if violations.is_empty() {
        return writeln!(out, "ok: valid Boltzmann weight").map_err(io);
    }
    for v in violations.iter().take(10) {
        writeln!(out, "{v}").map_err(io)?;
    }
    Err(CliError::Domain(format!(
        "{} axiom violations",
        violations.len()
    )))
}

pub fn cmd_enumerate(
    order: usize,
    count_only: bool,
    jobs: usize,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    if order == 0 {
        return Err(CliError::Usage("order must be positive".into()));
    }
    let all: Vec<Biquasile> = if jobs > 1 {
        with_jobs(jobs, || biquasile::algebra::enumerate_biquasiles_par(order))
    } else {
        enumerate_biquasiles(order).collect()
    };
    if count_only {
        return writeln!(out, "{}", all.len()).map_err(io);
    }
    for (i, b) in all.iter().enumerate() {
        writeln!(out, "# {}", i + 1).map_err(io)?;
        out.write_all(serialize_matrix(b).as_bytes()).map_err(io)?;
    }
    Ok(())
}

pub fn cmd_resolve(diagram: &Path, sign: &str, out: &mut dyn Write) -> Result<(), CliError> {
    let d = load_diagram(diagram)?;
    let s = Sign::from_symbol(sign)
        .ok_or_else(|| CliError::Usage(format!("sign must be + or -, got `{sign}`")))?;
    let r = resolve(&d, s);
    writeln!(out, "# resolutions computed; triviality not decided").map_err(io)?;
    for w in euler_check(&r) {
        writeln!(out, "# warning: {w}").map_err(io)?;
    }
    out.write_all(serialize_diagram(&r).as_bytes()).map_err(io)
}

pub fn cmd_compare(
    first: &Path,
    second: &Path,
    algebras: &[String],
    weights: &[String],
    schema: MarkedSchema,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let d1 = load_diagram(first)?;
    let d2 = load_diagram(second)?;
    let algs = algebras
        .iter()
        .map(|a| load_algebra(a))
        .collect::<Result<Vec<_>, _>>()?;
    let mut ws = Vec::new();
    for spec in weights {
        let (alg, file) = spec
            .rsplit_once(':')
            .ok_or_else(|| CliError::Usage(format!("weight `{spec}` is not ALGEBRA:FILE")))?;
        let a = load_algebra(alg)?;
        let w = load_weight(Path::new(file))?;
        ws.push(NamedWeight {
            name: format!(
                "{} {}",
                a.name,
                Path::new(file)
                    .file_stem()
                    .map_or(file.into(), |s| s.to_string_lossy())
            ),
            algebra: a.algebra,
            weight: w,
        });
    }
    let v = compare_with(&d1, &d2, &algs, &ws, schema);
    write!(out, "{v}").map_err(io)
}

/// Diagram files of a corpus directory, sorted by file name.
pub fn corpus_files(dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let entries = fs::read_dir(dir).map_err(|source| CliError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "mgd"))
        .collect();
    files.sort();
    Ok(files)
}

pub fn cmd_table(
    corpus: &Path,
    algebras: &[String],
    lines: bool,
    schema: MarkedSchema,
    jobs: usize,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let diagrams = corpus_files(corpus)?
        .iter()
        .map(|p| load_diagram(p))
        .collect::<Result<Vec<_>, _>>()?;
    let algs = algebras
        .iter()
        .map(|a| load_algebra(a))
        .collect::<Result<Vec<_>, _>>()?;
    let t = with_jobs(jobs, || invariant_table_with(&diagrams, &algs, schema));
    let text = if lines { t.render_lines() } else { t.render() };
    out.write_all(text.as_bytes()).map_err(io)
}

pub fn execute(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Check { algebra } => cmd_check(&algebra, out),
        Command::Color {
            diagram,
            algebra,
            count: _,
            list,
            method,
            schema,
            jobs,
        } => {
            let a = algebra_from(&algebra)?;
            let opts = ColorOptions {
                list,
                method,
                schema: schema.into(),
                jobs,
            };
            cmd_color(&diagram, &a, &opts, out)
        }
        Command::Invariant {
            diagram,
            algebra,
            weight,
            schema,
        } => cmd_invariant(&diagram, &algebra, &weight, schema.into(), out),
        Command::CheckWeight { algebra, weight } => cmd_check_weight(&algebra, &weight, out),
        Command::Enumerate { order, count, jobs } => cmd_enumerate(order, count, jobs, out),
        Command::Resolve { diagram, sign } => cmd_resolve(&diagram, &sign, out),
        Command::Compare {
            first,
            second,
            algebras,
            weights,
            schema,
        } => cmd_compare(&first, &second, &algebras, &weights, schema.into(), out),
        Command::Table {
            corpus,
            algebras,
            lines,
            schema,
            jobs,
        } => cmd_table(&corpus, &algebras, lines, schema.into(), jobs, out),
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            if code == EXIT_OK {
                let _ = write!(out, "{e}");
            } else {
                let _ = write!(err, "{e}");
            }
            return code;
        }
    };
    match execute(cli, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
