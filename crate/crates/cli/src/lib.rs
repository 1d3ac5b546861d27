//! Subcommands of the `strongblock` tool. Each returns a JSON report and an
//! exit code: 0 affirmative verdict, 1 negative verdict, 2 usage or parse
//! error, 3 budget exceeded.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use strongblock::blocking::{
    check_lemma1, check_lemma2, verify, BlockingReport, Lemma1Report, Lemma2Report, ReportMode,
};
use strongblock::classify::{classify_subsets, ClassifyConfig, OrbitReport, PG32_NINE_POINT_ORBITS};
use strongblock::codes::{
    is_minimal_code_with_budget, pointset_from_code, MinimalityReport, DEFAULT_ENUMERATION_BUDGET,
};
use strongblock::format::{parse_generator, parse_point_set, write_point_set, write_point_sets};
use strongblock::geometry::{hyperbolic_quadric, parabolic_quadric};
use strongblock::search::{default_budget, run, SearchConfig, SearchMode};
use strongblock::{build_geometry, Error, PointSet};

pub const EXIT_YES: u8 = 0;
pub const EXIT_NO: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_BUDGET: u8 = 3;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(name = "strongblock", version, about = "Strong blocking sets and minimal codes in small projective spaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check whether a point-set file is a strong blocking set
    Verify(VerifyArgs),
    /// Check minimality of the code given by a generator-matrix file
    CodeCheck(CodeCheckArgs),
    /// Classify all subsets of a size into GL(k,2) orbits
    Classify(ClassifyArgs),
    /// Search for strong blocking sets of a given size
    Search(SearchArgs),
    /// Write the hyperbolic (k=4) or parabolic (k=5) quadric of PG(k-1,2)
    Quadric(QuadricArgs),
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub file: PathBuf,
    /// List every failing hyperplane instead of stopping at the first
    #[arg(long)]
    pub total: bool,
}

#[derive(Debug, Args)]
pub struct CodeCheckArgs {
    pub file: PathBuf,
    /// Maximum number of codewords to enumerate
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_BUDGET as u64)]
    pub budget: u64,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value_t = 2)]
    pub q: u32,
    #[arg(long)]
    pub size: usize,
    /// Compare orbit sizes with the known PG(3,2) nine-point table
    #[arg(long)]
    pub golden: bool,
    /// Worker threads, 0 for all cores
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value_t = 2)]
    pub q: u32,
    #[arg(long)]
    pub size: usize,
    /// exhaustive, pruned or line-union
    #[arg(long, default_value = "pruned")]
    pub mode: String,
    /// Node or trial limit; defaults to $STRONGBLOCK_BUDGET or 1e9
    #[arg(long)]
    pub budget: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads, 0 for all cores
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
    /// Write the found sets to this point-set file
    #[arg(long)]
    pub emit: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct QuadricArgs {
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value_t = 2)]
    pub q: u32,
    /// Write the point set to this file
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Io(PathBuf, std::io::Error),
    Usage(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(path, e) => write!(f, "{}: {e}", path.display()),
            CliError::Usage(msg) => f.write_str(msg),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(Error::BudgetExceeded { .. }) => EXIT_BUDGET,
            _ => EXIT_USAGE,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Serialize)]
pub struct Report<I, R> {
    pub command: &'static str,
    pub version: &'static str,
    pub inputs: I,
    pub result: R,
    pub elapsed_seconds: f64,
}

/// A finished command: pretty-printed JSON report and exit code.
#[derive(Debug)]
pub struct Outcome {
    pub json: String,
    pub exit: u8,
}

fn finish<I: Serialize, R: Serialize>(
    command: &'static str,
    inputs: I,
    result: R,
    start: Instant,
    exit: u8,
) -> Outcome {
    let report = Report { command, version: VERSION, inputs, result, elapsed_seconds: start.elapsed().as_secs_f64() };
    let json = serde_json::to_string_pretty(&report).expect("reports serialize");
    Outcome { json, exit }
}

fn read(path: &PathBuf) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(path.clone(), e))
}

fn write(path: &PathBuf, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|e| CliError::Io(path.clone(), e))
}

pub fn execute(command: &Command) -> CliResult<Outcome> {
    match command {
        Command::Verify(a) => cmd_verify(a),
        Command::CodeCheck(a) => cmd_code_check(a),
        Command::Classify(a) => cmd_classify(a),
        Command::Search(a) => cmd_search(a),
        Command::Quadric(a) => cmd_quadric(a),
    }
}

#[derive(Serialize)]
struct VerifyInputs<'a> {
    file: &'a PathBuf,
    k: usize,
    q: u32,
    size: usize,
    total: bool,
}

#[derive(Serialize)]
struct VerifyResult {
    #[serde(flatten)]
    report: BlockingReport,
    lemma1: Option<Lemma1Report>,
    lemma2: Option<Lemma2Report>,
}

pub fn cmd_verify(args: &VerifyArgs) -> CliResult<Outcome> {
    let start = Instant::now();
    let set = parse_point_set(&read(&args.file)?)?;
    let g = set.geometry();
    let mode = if args.total { ReportMode::Total } else { ReportMode::ShortCircuit };
    let report = verify(&set, mode);
    let nine_in_pg32 = (g.k(), g.q(), set.len()) == (4, 2, 9);
    let result = VerifyResult {
        lemma1: nine_in_pg32.then(|| check_lemma1(&set)).transpose()?,
        lemma2: nine_in_pg32.then(|| check_lemma2(&set)).transpose()?,
        report,
    };
    let exit = if result.report.is_strong { EXIT_YES } else { EXIT_NO };
    let inputs = VerifyInputs { file: &args.file, k: g.k(), q: g.q(), size: set.len(), total: args.total };
    Ok(finish("verify", inputs, result, start, exit))
}

#[derive(Serialize)]
struct CodeCheckInputs<'a> {
    file: &'a PathBuf,
    k: usize,
    n: usize,
    q: u32,
    budget: u64,
}

#[derive(Serialize)]
struct GeometrySide {
    is_strong: bool,
    points: usize,
    /// `(column, earlier column)` pairs giving the same point
    collapsed_columns: Vec<(usize, usize)>,
}

#[derive(Serialize)]
struct CodeCheckResult {
    #[serde(flatten)]
    code: MinimalityReport,
    degenerate: bool,
    geometry: Option<GeometrySide>,
    geometry_skipped: Option<String>,
    verdicts_agree: Option<bool>,
}

pub fn cmd_code_check(args: &CodeCheckArgs) -> CliResult<Outcome> {
    let start = Instant::now();
    let code = parse_generator(&read(&args.file)?)?;
    let report = is_minimal_code_with_budget(&code, args.budget as u128)?;
    let degenerate = code.is_degenerate();

    let (geometry, geometry_skipped) = if degenerate {
        (None, Some("code has a zero column".to_string()))
    } else {
        match build_geometry(code.k(), code.q()) {
            Ok(g) => {
                let columns = pointset_from_code(&code, &g)?;
                let side = GeometrySide {
                    is_strong: verify(&columns.set, ReportMode::ShortCircuit).is_strong,
                    points: columns.set.len(),
                    collapsed_columns: columns.collapsed,
                };
                (Some(side), None)
            }
            Err(e) => (None, Some(e.to_string())),
        }
    };
    let verdicts_agree = geometry.as_ref().map(|s| s.is_strong == report.minimal);
    let exit = if report.minimal && verdicts_agree != Some(false) { EXIT_YES } else { EXIT_NO };
    let inputs = CodeCheckInputs { file: &args.file, k: code.k(), n: code.n(), q: code.q(), budget: args.budget };
    let result = CodeCheckResult { code: report, degenerate, geometry, geometry_skipped, verdicts_agree };
    Ok(finish("code-check", inputs, result, start, exit))
}

#[derive(Serialize)]
struct ClassifyInputs {
    k: usize,
    q: u32,
    size: usize,
    golden: bool,
    workers: usize,
}

#[derive(Serialize)]
struct Golden {
    expected: Vec<u64>,
    found: Vec<u64>,
    matches: bool,
}

#[derive(Serialize)]
struct ClassifyResult {
    orbit_count: usize,
    subsets: u64,
    strong_subsets: u64,
    orbits: Vec<OrbitReport>,
    golden: Option<Golden>,
}

pub fn cmd_classify(args: &ClassifyArgs) -> CliResult<Outcome> {
    let start = Instant::now();
    if args.golden && (args.k, args.q, args.size) != (4, 2, 9) {
        return Err(CliError::Usage("--golden is only defined for --k 4 --q 2 --size 9".into()));
    }
    let g = build_geometry(args.k, args.q)?;
    let config = ClassifyConfig { workers: args.workers, ..ClassifyConfig::default() };
    let orbits = classify_subsets(&g, args.size, &config)?;

    let golden = args.golden.then(|| {
        let mut expected = PG32_NINE_POINT_ORBITS.to_vec();
        let mut found: Vec<u64> = orbits.iter().map(|o| o.orbit_size).collect();
        expected.sort_unstable();
        found.sort_unstable();
        Golden { matches: expected == found, expected, found }
    });
    let exit = match &golden {
        Some(g) if !g.matches => EXIT_NO,
        _ => EXIT_YES,
    };
    let result = ClassifyResult {
        orbit_count: orbits.len(),
        subsets: orbits.iter().map(|o| o.orbit_size).sum(),
        strong_subsets: orbits.iter().filter(|o| o.is_strong).map(|o| o.orbit_size).sum(),
        orbits,
        golden,
    };
    let inputs = ClassifyInputs { k: args.k, q: args.q, size: args.size, golden: args.golden, workers: args.workers };
    Ok(finish("classify", inputs, result, start, exit))
}

#[derive(Serialize)]
struct SearchInputs<'a> {
    k: usize,
    q: u32,
    size: usize,
    mode: SearchMode,
    budget: u64,
    seed: u64,
    workers: usize,
    emit: Option<&'a PathBuf>,
}

#[derive(Serialize)]
struct SearchSummary {
    found_count: usize,
    nodes_explored: u64,
    exhausted: bool,
    verified: bool,
    found: Vec<Vec<usize>>,
}

pub fn cmd_search(args: &SearchArgs) -> CliResult<Outcome> {
    let start = Instant::now();
    let mode: SearchMode = args.mode.parse().map_err(|e: Error| CliError::Usage(e.to_string()))?;
    let config = SearchConfig {
        k: args.k,
        q: args.q,
        target_size: args.size,
        mode,
        budget: args.budget.unwrap_or_else(default_budget),
        seed: args.seed,
        workers: args.workers,
    };
    let result = run(&config)?;
    if let Some(path) = &args.emit {
        write(path, &write_point_sets(&result.found))?;
    }
    let verified = result.verify_all();
    let exit = if !verified {
        EXIT_NO
    } else if !result.found.is_empty() {
        EXIT_YES
    } else if result.exhausted {
        EXIT_NO
    } else {
        EXIT_BUDGET
    };
    let summary = SearchSummary {
        found_count: result.found.len(),
        nodes_explored: result.nodes_explored,
        exhausted: result.exhausted,
        verified,
        found: result.found.iter().map(|s| s.indices().collect()).collect(),
    };
    let inputs = SearchInputs {
        k: args.k,
        q: args.q,
        size: args.size,
        mode,
        budget: config.budget,
        seed: args.seed,
        workers: args.workers,
        emit: args.emit.as_ref(),
    };
    Ok(finish("search", inputs, summary, start, exit))
}

#[derive(Serialize)]
struct QuadricInputs<'a> {
    k: usize,
    q: u32,
    out: Option<&'a PathBuf>,
}

#[derive(Serialize)]
struct QuadricResult {
    kind: &'static str,
    equation: &'static str,
    size: usize,
    is_strong: bool,
    intersection_profile: BTreeMap<usize, usize>,
    set: PointSet,
}

pub fn cmd_quadric(args: &QuadricArgs) -> CliResult<Outcome> {
    let start = Instant::now();
    let g = build_geometry(args.k, args.q)?;
    let (kind, equation, set) = match (args.k, args.q) {
        (4, 2) => ("hyperbolic", "x0*x1 + x2*x3 = 0", hyperbolic_quadric(&g)?),
        (5, 2) => ("parabolic", "x0^2 + x1*x2 + x3*x4 = 0", parabolic_quadric(&g)?),
        _ => return Err(CliError::Usage("quadrics are available for --k 4 or --k 5 with --q 2".into())),
    };
    if let Some(path) = &args.out {
        write(path, &format!("# {kind} quadric {equation}\n{}", write_point_set(&set)))?;
    }
    let report = verify(&set, ReportMode::Total);
    let exit = if report.is_strong { EXIT_YES } else { EXIT_NO };
    let result = QuadricResult {
        kind,
        equation,
        size: set.len(),
        is_strong: report.is_strong,
        intersection_profile: report.intersection_profile,
        set,
    };
    Ok(finish("quadric", QuadricInputs { k: args.k, q: args.q, out: args.out.as_ref() }, result, start, exit))
}
