//! The `mws` command-line tool.
//!
//! Reports go to standard output as JSON (or CSV for `bounds --format csv`),
//! diagnostics go to standard error. Exit status: 0 success, 1 a requested
//! check failed, 2 invalid input, 3 a resource guard tripped.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde::Serialize;

use crate::bounds::{bounds_report, CSV_HEADER};
use crate::code::{EnumGuard, LinearCode, SpectrumReport};
use crate::constructions::{self, field, Source};
use crate::error::Error;
use crate::matrix::{parse_matrix, write_matrix};
use crate::search::{self, SearchConfig, SearchMode, Target};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_GUARD: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "mws", version, about = "Maximum weight spectrum and quasi-minimal codes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a code and report its spectrum.
    Construct(ConstructArgs),
    /// Report the spectrum and predicates of a code read from a matrix file.
    Verify(VerifyArgs),
    /// Search for QM or MWS codes over a range of lengths.
    Search(SearchArgs),
    /// Monte-Carlo estimate of the averaged criterion sum.
    Montecarlo(MonteCarloArgs),
    /// Bound table over a grid of (q, k).
    Bounds(BoundsArgs),
    /// Describe GF(q).
    FieldInfo(FieldInfoArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Kind {
    Simplex,
    Identity,
    Embed,
    Repetition,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SourceKind {
    Simplex,
    Identity,
}

#[derive(Args, Debug)]
struct ConstructArgs {
    kind: Kind,
    #[arg(long)]
    q: Option<u64>,
    #[arg(long)]
    k: Option<usize>,
    /// Base code for `embed` and `repetition`.
    #[arg(long, value_enum)]
    source: Option<SourceKind>,
    /// Base code read from a matrix file.
    #[arg(long = "in", value_name = "FILE")]
    input: Option<PathBuf>,
    /// Comma-separated multiplicities for `repetition`.
    #[arg(long)]
    profile: Option<String>,
    /// Uniform multiplicity for `repetition`.
    #[arg(long)]
    repeat: Option<u64>,
    /// Where to write the resulting matrix file.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    verify_qm: bool,
    #[arg(long)]
    verify_mws: bool,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
    #[arg(long)]
    qm: bool,
    #[arg(long)]
    mws: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Random,
    Exhaustive,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TargetArg {
    Qm,
    Mws,
}

#[derive(Args, Debug)]
struct SearchArgs {
    /// JSON search configuration; flags given alongside override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    q: Option<u64>,
    #[arg(long)]
    k: Option<usize>,
    /// Length or inclusive range, e.g. `6` or `5..6`.
    #[arg(long)]
    n: Option<String>,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    #[arg(long, value_enum)]
    target: Option<TargetArg>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    workers: Option<usize>,
    /// Search at the GV-guaranteed QM length instead of `--n`.
    #[arg(long)]
    gv_qm: bool,
    /// Directory to write witness matrix files into.
    #[arg(long)]
    witness_dir: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct MonteCarloArgs {
    #[arg(long)]
    q: u64,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 10_000)]
    samples: u64,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 0)]
    workers: usize,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug)]
struct BoundsArgs {
    /// Comma-separated values or inclusive ranges, e.g. `3,4,5` or `2..9`.
    #[arg(long)]
    q: String,
    #[arg(long)]
    k: String,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args, Debug)]
struct FieldInfoArgs {
    #[arg(long)]
    q: u64,
}

/// A failed command: exit status plus message.
#[derive(Debug)]
struct Failure {
    status: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::NotQuasiMinimal => EXIT_CHECK_FAILED,
            Error::TooLarge { .. } | Error::SearchSpaceTooLarge { .. } => EXIT_GUARD,
            _ => EXIT_INVALID,
        };
        Failure {
            status,
            message: e.to_string(),
        }
    }
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure {
        status: EXIT_INVALID,
        message: message.into(),
    }
}

type CmdResult = Result<(String, i32), Failure>;

#[derive(Serialize)]
struct Checked<T: Serialize> {
    #[serde(flatten)]
    body: T,
    checks: BTreeMap<&'static str, bool>,
    passed: bool,
}

impl<T: Serialize> Checked<T> {
    fn new(body: T, checks: BTreeMap<&'static str, bool>) -> Self {
        let passed = checks.values().all(|&v| v);
        Checked { body, checks, passed }
    }

    fn render(&self) -> Result<(String, i32), Failure> {
        let status = if self.passed { EXIT_OK } else { EXIT_CHECK_FAILED };
        Ok((to_json(self)?, status))
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String, Failure> {
    serde_json::to_string_pretty(value).map_err(|e| invalid(format!("serialization failed: {e}")))
}

fn read_code(path: &Path) -> Result<LinearCode, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))?;
    Ok(parse_matrix(&text)?)
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| invalid(format!("cannot write {}: {e}", path.display())))
}

fn require<T>(v: Option<T>, flag: &str) -> Result<T, Failure> {
    v.ok_or_else(|| invalid(format!("missing --{flag}")))
}

fn base_source(args: &ConstructArgs) -> Result<Source, Failure> {
    match (&args.input, args.source) {
        (Some(path), None) => Ok(Source::External(read_code(path)?)),
        (None, Some(kind)) => {
            let q = require(args.q, "q")?;
            let k = require(args.k, "k")?;
            Ok(match kind {
                SourceKind::Simplex => Source::Simplex { q, k },
                SourceKind::Identity => Source::Identity { q, k },
            })
        }
        (Some(_), Some(_)) => Err(invalid("give either --in or --source, not both")),
        (None, None) => Err(invalid("need a base code: --in FILE or --source KIND")),
    }
}

fn parse_profile(text: &str) -> Result<Vec<BigUint>, Failure> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<BigUint>()
                .map_err(|_| invalid(format!("bad multiplicity `{t}`")))
        })
        .collect()
}

#[derive(Serialize)]
struct ConstructPayload {
    #[serde(flatten)]
    report: SpectrumReport,
    matrix: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    matrix_file: Option<String>,
}

fn cmd_construct(args: &ConstructArgs, guard: &EnumGuard, err: &mut dyn Write) -> CmdResult {
    let (code, report) = match args.kind {
        Kind::Simplex | Kind::Identity => {
            let q = require(args.q, "q")?;
            let k = require(args.k, "k")?;
            let f = field(q)?;
            let (code, name) = match args.kind {
                Kind::Simplex => (constructions::simplex(&f, k, guard)?, "simplex"),
                _ => (constructions::identity_code(&f, k)?, "identity"),
            };
            let report = SpectrumReport::build(&code, guard)?.with_construction(name);
            (code, report)
        }
        Kind::Embed => {
            let source = base_source(args)?;
            let out = constructions::mws_pipeline(&source, guard).inspect_err(|e| {
                if *e == Error::NotQuasiMinimal {
                    let _ = writeln!(err, "the embedding of a non-QM code is not guaranteed MWS");
                }
            })?;
            (out.embedded, out.report)
        }
        Kind::Repetition => {
            let source = base_source(args)?;
            let base = source.build(guard)?;
            let profile = match (&args.profile, args.repeat) {
                (Some(p), None) => parse_profile(p)?,
                (None, Some(r)) => vec![BigUint::from(r); base.base_length()],
                _ => return Err(invalid("repetition needs exactly one of --profile or --repeat")),
            };
            let code = constructions::generalized_repetition(&base, profile)?;
            let report = SpectrumReport::build(&code, guard)?.with_construction(format!("repetition({source})"));
            (code, report)
        }
    };
    let matrix = write_matrix(&code);
    if let Some(path) = &args.out {
        write_file(path, &matrix)?;
        let _ = writeln!(err, "wrote {}", path.display());
    }
    let mut checks = BTreeMap::new();
    if args.verify_qm {
        checks.insert("qm", report.is_qm);
    }
    if args.verify_mws {
        checks.insert("mws", report.is_mws);
    }
    let payload = ConstructPayload {
        report,
        matrix,
        matrix_file: args.out.as_ref().map(|p| p.display().to_string()),
    };
    Checked::new(payload, checks).render()
}

#[derive(Serialize)]
struct VerifyPayload {
    #[serde(flatten)]
    report: SpectrumReport,
    #[serde(serialize_with = "crate::json::wide")]
    mws_criterion_sum: u128,
    is_mws_by_sum: bool,
}

fn cmd_verify(args: &VerifyArgs, guard: &EnumGuard) -> CmdResult {
    let code = read_code(&args.input)?;
    let spectrum = code.weight_spectrum(guard)?;
    let report = SpectrumReport::build(&code, guard)?;
    let mut checks = BTreeMap::new();
    if args.qm {
        checks.insert("qm", report.is_qm);
    }
    if args.mws {
        checks.insert("mws", report.is_mws);
    }
    let payload = VerifyPayload {
        report,
        mws_criterion_sum: spectrum.mws_criterion_sum(),
        is_mws_by_sum: spectrum.is_mws_by_sum(),
    };
    Checked::new(payload, checks).render()
}

/// Parses `a`, `a..b` or `a..=b` (both inclusive).
fn parse_range(text: &str) -> Result<(usize, usize), Failure> {
    let bad = || invalid(format!("bad range `{text}`"));
    let parse = |s: &str| s.trim().parse::<usize>().map_err(|_| bad());
    match text.split_once("..") {
        Some((a, b)) => Ok((parse(a)?, parse(b.trim_start_matches('='))?)),
        None => {
            let v = parse(text)?;
            Ok((v, v))
        }
    }
}

/// Parses `2,3,5..7` into `[2, 3, 5, 6, 7]`.
fn parse_list(text: &str) -> Result<Vec<u64>, Failure> {
    let mut out = Vec::new();
    for part in text.split(',').filter(|p| !p.trim().is_empty()) {
        let (a, b) = parse_range(part)?;
        out.extend((a..=b).map(|v| v as u64));
    }
    if out.is_empty() {
        return Err(invalid(format!("empty list `{text}`")));
    }
    Ok(out)
}

fn seed_or_random(seed: Option<u64>, err: &mut dyn Write) -> u64 {
    seed.unwrap_or_else(|| {
        let s = rand::random::<u64>();
        let _ = writeln!(err, "no --seed given; using seed {s}");
        s
    })
}

#[derive(Serialize)]
struct SearchPayload {
    #[serde(flatten)]
    report: search::SearchReport,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    witness_files: Vec<String>,
}

fn search_config(args: &SearchArgs, err: &mut dyn Write) -> Result<SearchConfig, Failure> {
    let mut config = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))?;
            serde_json::from_str::<SearchConfig>(&text)
                .map_err(|e| invalid(format!("bad config {}: {e}", path.display())))?
        }
        None => {
            let q = require(args.q, "q")?;
            let k = require(args.k, "k")?;
            let (lo, hi) = if args.gv_qm {
                (1, 1)
            } else {
                parse_range(&require(args.n.clone(), "n")?)?
            };
            let mut c = SearchConfig::new(q, k, lo..=hi, SearchMode::Random, Target::Mws);
            c.seed = seed_or_random(args.seed, err);
            c
        }
    };
    if let Some(q) = args.q {
        config.q = q;
    }
    if let Some(k) = args.k {
        config.k = k;
    }
    if let Some(n) = &args.n {
        (config.n_lo, config.n_hi) = parse_range(n)?;
    }
    if let Some(m) = args.mode {
        config.mode = match m {
            ModeArg::Random => SearchMode::Random,
            ModeArg::Exhaustive => SearchMode::Exhaustive,
        };
    }
    if let Some(t) = args.target {
        config.target = match t {
            TargetArg::Qm => Target::Qm,
            TargetArg::Mws => Target::Mws,
        };
    }
    if let Some(t) = args.trials {
        config.trials = t;
    }
    if let Some(s) = args.seed {
        config.seed = s;
    }
    if let Some(w) = args.workers {
        config.workers = w;
    }
    Ok(config)
}

fn cmd_search(args: &SearchArgs, guard: &EnumGuard, err: &mut dyn Write) -> CmdResult {
    let mut config = search_config(args, err)?;
    config.enum_limit = guard.max_messages;
    let report = if args.gv_qm {
        if args.mode.is_some() || args.target.is_some() || args.n.is_some() {
            let _ = writeln!(err, "--gv-qm fixes mode=random, target=qm and the length; ignoring overrides");
        }
        search::gv_qm_search(config.q, config.k, config.trials, config.seed, config.workers)?
    } else {
        search::search(&config)?
    };
    for o in &report.outcomes {
        let _ = writeln!(
            err,
            "n={}: {:?} after {} candidates",
            o.n, o.verdict, o.candidates_examined
        );
    }
    let mut witness_files = Vec::new();
    if let Some(dir) = &args.witness_dir {
        std::fs::create_dir_all(dir).map_err(|e| invalid(format!("cannot create {}: {e}", dir.display())))?;
        for o in &report.outcomes {
            if let Some(w) = &o.witness {
                let path = dir.join(format!("witness_q{}_k{}_n{}.mat", report.q, report.k, o.n));
                write_file(&path, &w.matrix)?;
                witness_files.push(path.display().to_string());
            }
        }
    }
    let mut checks = BTreeMap::new();
    checks.insert("found", report.shortest_success.is_some());
    Checked::new(SearchPayload { report, witness_files }, checks).render()
}

fn cmd_montecarlo(args: &MonteCarloArgs, guard: &EnumGuard, err: &mut dyn Write) -> CmdResult {
    let seed = seed_or_random(args.seed, err);
    let est = search::estimate_expectation(args.q, args.k, args.n, args.samples, seed, args.workers, guard)?;
    let _ = writeln!(
        err,
        "mean {:.6} +- {:.6}, bound {:.6}, MWS fraction {:.4}",
        est.mean, est.stderr, est.bound, est.mws_fraction
    );
    let mut checks = BTreeMap::new();
    checks.insert("within_bound", est.within_bound);
    Checked::new(est, checks).render()
}

fn cmd_bounds(args: &BoundsArgs) -> CmdResult {
    let qs = parse_list(&args.q)?;
    let ks = parse_list(&args.k)?;
    let mut reports = Vec::new();
    for &q in &qs {
        for &k in &ks {
            let k = u32::try_from(k).map_err(|_| invalid(format!("k={k} is too large")))?;
            reports.push(bounds_report(q, k)?);
        }
    }
    let text = match args.format {
        Format::Json => to_json(&reports)?,
        Format::Csv => {
            let mut s = String::from(CSV_HEADER);
            for r in &reports {
                s.push('\n');
                s.push_str(&r.csv_row());
            }
            s
        }
    };
    Ok((text, EXIT_OK))
}

fn cmd_field_info(args: &FieldInfoArgs) -> CmdResult {
    let f = crate::gf::build_field(args.q)?;
    Ok((to_json(&f.info())?, EXIT_OK))
}

/// Runs the tool on `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let _ = if code == EXIT_OK {
                write!(out, "{e}")
            } else {
                write!(err, "{e}")
            };
            return code;
        }
    };
    let result = EnumGuard::from_env().map_err(Failure::from).and_then(|guard| match &cli.command {
        Command::Construct(a) => cmd_construct(a, &guard, err),
        Command::Verify(a) => cmd_verify(a, &guard),
        Command::Search(a) => cmd_search(a, &guard, err),
        Command::Montecarlo(a) => cmd_montecarlo(a, &guard, err),
        Command::Bounds(a) => cmd_bounds(a),
        Command::FieldInfo(a) => cmd_field_info(a),
    });
    match result {
        Ok((text, status)) => {
            let _ = writeln!(out, "{text}");
            status
        }
        Err(f) => {
            let payload = serde_json::json!({ "error": f.message, "status": f.status });
            let _ = writeln!(out, "{payload}");
            let _ = writeln!(err, "error: {}", f.message);
            f.status
        }
    }
}

pub fn main() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}
