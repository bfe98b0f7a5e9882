//! Subcommands of the `euler-horizon` binary.

use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use euler_horizon_core::analytic::{build_atlas, euler_eval, factored_eval, AtlasError, EvalError, ZetaFactorForm};
use euler_horizon_core::classifier::{classify_with_scan, expand_stable, CaseReport, ClassifierConfig, ClassifyError};
use euler_horizon_core::expansion::peel;
use euler_horizon_core::geometry::GeometryError;
use euler_horizon_core::local_zeros::local_roots;
use euler_horizon_core::parse::ParseError;
use euler_horizon_core::primes::primes_up_to;
use euler_horizon_core::{parse_expression, BivariateRational};
use num_complex::Complex64;
use serde_json::json;
use thiserror::Error;

use crate::corpus::{self, CorpusEntry};
use crate::report::{self, AtlasSummary, Report};
use crate::scan::parallel_scan;
use crate::zeros::{self, ZerosFileError, ZEROS_ENV};

pub const EXIT_DECIDED: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_INTERNAL: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "euler-horizon", version, about = "Natural boundaries of Euler products prod_p W(p, p^-s)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Classify W and emit the JSON report.
    Analyze(AnalyzeArgs),
    /// Cyclotomic expansion exponents c(n, m).
    Expand(ExpandArgs),
    /// Local zeros of W(p, p^-s) for every prime up to the bound.
    Zeros(ZerosArgs),
    /// Zeros and poles right of beta up to height T.
    Atlas(AtlasArgs),
    /// Evaluate the Euler product at one point.
    Eval(EvalArgs),
    /// Built-in examples.
    Corpus(CorpusArgs),
}

#[derive(Args, Debug, Clone)]
pub struct RunConfig {
    /// Truncation degree M in Y.
    #[arg(long = "ydeg", default_value_t = 24)]
    pub ydeg: u32,
    #[arg(long, default_value_t = 10_000)]
    pub prime_bound: u64,
    #[arg(long, default_value_t = 1e-6)]
    pub margin_tol: f64,
    #[arg(long, default_value_t = 0.1)]
    pub density_threshold: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { ydeg: 24, prime_bound: 10_000, margin_tol: 1e-6, density_threshold: 0.1 }
    }
}

impl RunConfig {
    fn validate(&self) -> Result<ClassifierConfig, CliError> {
        if self.ydeg < 4 {
            return Err(CliError::input("invalid-config", format!("--ydeg must be at least 4, got {}", self.ydeg)));
        }
        if self.prime_bound < 100 {
            return Err(CliError::input("invalid-config", format!("--prime-bound must be at least 100, got {}", self.prime_bound)));
        }
        Ok(ClassifierConfig {
            ydeg_bound: self.ydeg,
            prime_bound: self.prime_bound,
            margin_tol: self.margin_tol,
            density_threshold: self.density_threshold,
        })
    }
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    #[arg(long)]
    pub expr: String,
    #[command(flatten)]
    pub config: RunConfig,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ExpandArgs {
    #[arg(long)]
    pub expr: String,
    #[arg(long = "ydeg", default_value_t = 24)]
    pub ydeg: u32,
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ZerosArgs {
    #[arg(long)]
    pub expr: String,
    #[command(flatten)]
    pub config: RunConfig,
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct AtlasArgs {
    #[arg(long)]
    pub expr: String,
    /// Height T of the region |Im s| < T.
    #[arg(long = "t", default_value_t = 50.0)]
    pub t: f64,
    #[command(flatten)]
    pub config: RunConfig,
    #[arg(long, env = ZEROS_ENV)]
    pub zeros_file: Option<PathBuf>,
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    #[arg(long)]
    pub expr: String,
    /// Point s, e.g. "3+0i".
    #[arg(long = "s")]
    pub s: String,
    #[arg(long, default_value_t = 100_000)]
    pub prime_bound: u64,
    #[arg(long = "ydeg", default_value_t = 24)]
    pub ydeg: u32,
}

#[derive(Args, Debug)]
pub struct CorpusArgs {
    #[command(subcommand)]
    pub action: CorpusAction,
}

#[derive(Subcommand, Debug)]
pub enum CorpusAction {
    /// Print the entries.
    List,
    /// Classify every entry and compare with the pinned values.
    Run {
        #[arg(long)]
        only: Option<String>,
        #[command(flatten)]
        config: RunConfig,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{message}")]
    Input { code: &'static str, message: String },
    #[error("{message}")]
    Internal { code: &'static str, message: String },
}

impl CliError {
    pub fn input(code: &'static str, message: impl Into<String>) -> Self {
        CliError::Input { code, message: message.into() }
    }

    pub fn internal(code: &'static str, message: impl Into<String>) -> Self {
        CliError::Internal { code, message: message.into() }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input { .. } => EXIT_INPUT,
            CliError::Internal { .. } => EXIT_INTERNAL,
        }
    }

    pub fn code(&self) -> &'static str {
        match self {
            CliError::Input { code, .. } | CliError::Internal { code, .. } => code,
        }
    }

    pub fn to_json(&self) -> String {
        json!({ "error": self.code(), "message": self.to_string() }).to_string()
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        let code = match e {
            ParseError::Syntax { .. } => "parse-error",
            ParseError::DivisionByZeroPoly => "division-by-zero",
            ParseError::Normalization(_) => "normalization-error",
        };
        CliError::input(code, e.to_string())
    }
}

impl From<ClassifyError> for CliError {
    fn from(e: ClassifyError) -> Self {
        match e {
            ClassifyError::Geometry(GeometryError::DegenerateInput) => CliError::input("degenerate-input", e.to_string()),
            ClassifyError::BoundTooSmall(_) => CliError::input("invalid-config", e.to_string()),
            ClassifyError::Series(_) => CliError::internal("series-error", e.to_string()),
            ClassifyError::Geometry(_) => CliError::internal("truncation-insufficient", e.to_string()),
            ClassifyError::Expansion(_) => CliError::internal("expansion-error", e.to_string()),
            ClassifyError::Scan(_) => CliError::internal("scan-error", e.to_string()),
        }
    }
}

impl From<ZerosFileError> for CliError {
    fn from(e: ZerosFileError) -> Self {
        let code = match e {
            ZerosFileError::Missing => "missing-zeros-file",
            _ => "zeros-file-error",
        };
        CliError::input(code, e.to_string())
    }
}

impl From<AtlasError> for CliError {
    fn from(e: AtlasError) -> Self {
        let code = match e {
            AtlasError::MissingZerosFile => "missing-zeros-file",
            AtlasError::ZerosTableTooShort { .. } => "zeros-table-too-short",
            AtlasError::Undecided => "undecided-case",
        };
        CliError::input(code, e.to_string())
    }
}

impl From<EvalError> for CliError {
    fn from(e: EvalError) -> Self {
        let code = match e {
            EvalError::ConvergenceDomain { .. } | EvalError::DomainError { .. } => "convergence-domain",
            EvalError::LocalFactorZero { .. } => "local-factor-zero",
            EvalError::LocalFactorPole { .. } => "local-factor-pole",
            EvalError::FactorPole { .. } => "factor-pole",
        };
        CliError::input(code, e.to_string())
    }
}

fn io_error(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::internal("io-error", format!("{}: {e}", path.display()))
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| io_error(p, e)),
        None => out.write_all(text.as_bytes()).map_err(|e| CliError::internal("io-error", e.to_string())),
    }
}

fn create(path: &Path) -> Result<File, CliError> {
    File::create(path).map_err(|e| io_error(path, e))
}

fn parse(expr: &str) -> Result<BivariateRational, CliError> {
    let w = parse_expression(expr)?;
    if w.is_one() {
        return Err(CliError::input("degenerate-input", "W = 1 has no monomial with positive Y-degree"));
    }
    Ok(w)
}

/// Full classification with the threaded prime scan.
pub fn analyze(w: &BivariateRational, config: &RunConfig) -> Result<CaseReport, CliError> {
    let c = config.validate()?;
    Ok(classify_with_scan(w, &c, |w, beta| parallel_scan(w, beta, c.prime_bound, c.margin_tol))?)
}

fn case_exit(r: &CaseReport) -> i32 {
    if r.is_decided() {
        EXIT_DECIDED
    } else {
        EXIT_INCONCLUSIVE
    }
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    match cli.command {
        Command::Analyze(a) => {
            let w = parse(&a.expr)?;
            let r = analyze(&w, &a.config)?;
            emit(out, a.json.as_deref(), &Report::new(&a.expr, &r).to_json())?;
            Ok(case_exit(&r))
        }
        Command::Expand(a) => {
            let w = parse(&a.expr)?;
            if a.ydeg < 4 {
                return Err(CliError::input("invalid-config", "--ydeg must be at least 4"));
            }
            let (s, _) = expand_stable(&w, a.ydeg).map_err(CliError::from)?;
            let e = peel(&s).map_err(|e| CliError::internal("expansion-error", e.to_string()))?;
            match &a.csv {
                Some(p) => report::write_expansion_csv(create(p)?, &e).map_err(|e| io_error(p, e))?,
                None => report::write_expansion_csv(&mut *out, &e).map_err(|e| CliError::internal("io-error", e.to_string()))?,
            }
            Ok(EXIT_DECIDED)
        }
        Command::Zeros(a) => {
            let w = parse(&a.expr)?;
            let c = a.config.validate()?;
            let (_, ab) = expand_stable(&w, c.ydeg_bound.max(2 * w.ydeg()))?;
            let scan = parallel_scan(&w, ab.beta, c.prime_bound, c.margin_tol)
                .map_err(|e| CliError::internal("scan-error", e.to_string()))?;
            if let Some(p) = &a.csv {
                let records: Vec<_> = primes_up_to(c.prime_bound)
                    .into_iter()
                    .filter_map(|p| local_roots(&w, p, ab.beta).ok())
                    .collect();
                report::write_zeros_csv(create(p)?, &records, ab.beta).map_err(|e| io_error(p, e))?;
            }
            let verdict = scan.verdict(c.density_threshold);
            let summary = json!({
                "expr": a.expr,
                "beta": { "num": ab.beta.num(), "den": ab.beta.den() },
                "bound": scan.prime_bound,
                "scanned": scan.count_scanned,
                "positive": scan.count_positive,
                "density": scan.density,
                "verdict": verdict.as_str(),
                "max_margin": scan.max_margin,
                "skipped": scan.skipped,
            });
            emit(out, a.json.as_deref(), &(serde_json::to_string_pretty(&summary).expect("json") + "\n"))?;
            Ok(EXIT_DECIDED)
        }
        Command::Atlas(a) => {
            let w = parse(&a.expr)?;
            let r = analyze(&w, &a.config)?;
            if !r.is_decided() {
                let err = CliError::from(AtlasError::Undecided);
                writeln!(out, "{}", err.to_json()).map_err(|e| CliError::internal("io-error", e.to_string()))?;
                return Ok(EXIT_INCONCLUSIVE);
            }
            let table = match zeros::resolve(a.zeros_file.as_deref()) {
                Some(p) => Some(zeros::read(&p)?),
                None => None,
            };
            let atlas = build_atlas(&r, a.t, table.as_deref())?;
            if let Some(p) = &a.csv {
                report::write_atlas_csv(create(p)?, &atlas).map_err(|e| io_error(p, e))?;
            }
            let text = serde_json::to_string_pretty(&AtlasSummary::new(&atlas)).expect("json") + "\n";
            emit(out, a.json.as_deref(), &text)?;
            Ok(EXIT_DECIDED)
        }
        Command::Eval(a) => {
            let w = parse(&a.expr)?;
            let s: Complex64 = a
                .s
                .replace(' ', "")
                .parse()
                .map_err(|_| CliError::input("parse-error", format!("cannot read complex number {:?}", a.s)))?;
            let (series, ab) = expand_stable(&w, a.ydeg.max(4).max(2 * w.ydeg()))?;
            let value = euler_eval(&w, ab.alpha, s, a.prime_bound)?;
            let e = peel(&series).map_err(|e| CliError::internal("expansion-error", e.to_string()))?;
            let form = ZetaFactorForm::from_expansion(&e, &w);
            let factored = factored_eval(&form, &w, s, a.prime_bound).ok();
            let summary = json!({
                "expr": a.expr,
                "s": { "re": s.re, "im": s.im },
                "alpha": { "num": ab.alpha.num(), "den": ab.alpha.den() },
                "prime_bound": a.prime_bound,
                "value": { "re": value.value.re, "im": value.value.im },
                "tail_bound": value.tail_bound,
                "factored": factored.map(|f| json!({ "re": f.re, "im": f.im })),
                "remainder_start": { "num": form.remainder_start.num(), "den": form.remainder_start.den() },
            });
            emit(out, None, &(serde_json::to_string_pretty(&summary).expect("json") + "\n"))?;
            Ok(EXIT_DECIDED)
        }
        Command::Corpus(CorpusArgs { action: CorpusAction::List }) => {
            let mut text = String::new();
            for e in corpus::ENTRIES {
                text.push_str(&format!("{:<6} case {}  beta {}/{}  {}\n    {}\n", e.id, e.expected_case, e.expected_beta.0, e.expected_beta.1, e.expr, e.notes));
            }
            for u in corpus::UNSUPPORTED {
                text.push_str(&format!("{:<6} unsupported: {}\n", u.id, u.reason));
            }
            emit(out, None, &text)?;
            Ok(EXIT_DECIDED)
        }
        Command::Corpus(CorpusArgs { action: CorpusAction::Run { only, config } }) => {
            let entries: Vec<&CorpusEntry> = match &only {
                Some(id) => vec![corpus::find(id).ok_or_else(|| CliError::input("unknown-entry", format!("no corpus entry {id:?}")))?],
                None => corpus::ENTRIES.iter().collect(),
            };
            let mut all_pass = true;
            for e in entries {
                let started = Instant::now();
                let w = parse(e.expr)?;
                let r = analyze(&w, &config)?;
                let problems = corpus::check(e, &r);
                all_pass &= problems.is_empty();
                let status = if problems.is_empty() { "PASS" } else { "FAIL" };
                let case = r.case_id.map_or("-".to_string(), |c| c.to_string());
                let mut line = format!(
                    "{:<6} {status}  case {case} (expected {})  beta {} (expected {}/{})  obstructing {}  {:.2}s",
                    e.id,
                    e.expected_case,
                    r.beta,
                    e.expected_beta.0,
                    e.expected_beta.1,
                    r.obstructing.map_or("-", |o| o.as_str()),
                    started.elapsed().as_secs_f64()
                );
                for p in &problems {
                    line.push_str(&format!("\n       {p}"));
                }
                if only.is_some() {
                    if let Some(rr) = &r.ray_report {
                        for p in rr.strip_progressions() {
                            let step = p.step(rr.direction);
                            line.push_str(&format!(
                                "\n       strip line offset {}: {} hits from ({},{}) to ({},{}), step ({},{})",
                                p.offset, p.hits, p.first.n, p.first.m, p.last.n, p.last.m, step.0, step.1
                            ));
                        }
                    }
                }
                writeln!(out, "{line}").map_err(|e| CliError::internal("io-error", e.to_string()))?;
            }
            Ok(if all_pass { EXIT_DECIDED } else { EXIT_INPUT })
        }
    }
}

/// Entry point used by `main`: prints errors as JSON on stderr.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_DECIDED };
            let _ = e.print();
            return code;
        }
    };
    let stdout = io::stdout();
    let mut lock = stdout.lock();
    match run(cli, &mut lock) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{}", e.to_json());
            e.exit_code()
        }
    }
}
