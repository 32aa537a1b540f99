use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use holorec::exactnum::{parse_bigint, parse_rational};
use holorec::guess::{guess_recurrence, GuessSpec};
use holorec::holonomic::{
    ode_to_recurrence, ode_to_recurrence_with, rec_unroll, rec_verify, IndexConvention,
};
use holorec::meixner::{a214615_operator, a214615_recurrence, a214615_terms, build_egf};
use holorec::{DiffOperator, RecurrenceOperator, SequenceTable, VerifyReport};
use serde::Serialize;
use thiserror::Error;

use crate::bfile::{parse_bfile, write_bfile, BFileDocument, BFileError};
use crate::fetch::{default_cache_dir, offline_from_env, BFileCache, FetchError, CACHE_DIR_ENV};
use crate::report::{
    GuessJson, OdeCheckJson, RecurrenceJson, SelfCheckJson, SeriesJson, TermsJson, VerifyJson,
};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_MATH_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "holorec", version, about = "Exact tools for P-recursive sequences and D-finite EGFs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the A214615 pipeline: ODE annihilates the EGF and the order-2
    /// recurrence holds on the unrolled terms.
    Selfcheck(SelfcheckArgs),
    /// Unroll a recurrence (or the recurrence of an ODE) from initial terms.
    Generate(GenerateArgs),
    /// Check a recurrence against a table of terms.
    Verify(VerifyArgs),
    /// Convert a differential operator into the recurrence of its EGF coefficients.
    Ode2rec(Ode2recArgs),
    /// Guess recurrences from terms.
    Guess(GuessArgs),
    /// Expand exp(x0*arctan t)/sqrt(1+t^2) and print its EGF coefficients.
    Series(SeriesArgs),
    /// Download (or read from cache) an OEIS b-file.
    Fetch(FetchArgs),
}

#[derive(Debug, Args)]
pub struct SelfcheckArgs {
    #[arg(long, default_value_t = 500)]
    pub max_n: usize,
    #[arg(long, default_value_t = 100)]
    pub series_order: usize,
    /// Also verify the recurrence against this b-file.
    #[arg(long)]
    pub against: Option<PathBuf>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
#[group(id = "relation", required = true, multiple = false, args = ["rec", "ode"])]
pub struct RelationArgs {
    /// Recurrence, e.g. "a(n) - a(n-1) + (n-1)^2*a(n-2) = 0 for n >= 2".
    #[arg(long)]
    pub rec: Option<String>,
    /// Differential operator annihilating the EGF, e.g. "(1+t^2)*D - (1-t)".
    #[arg(long)]
    pub ode: Option<String>,
}

#[derive(Debug, Args)]
#[group(id = "source", required = true, multiple = false, args = ["bfile", "terms", "oeis"])]
pub struct SourceArgs {
    #[arg(long)]
    pub bfile: Option<PathBuf>,
    /// Comma-separated terms starting at --offset.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub terms: Option<Vec<String>>,
    #[arg(long, default_value_t = 0, requires = "terms")]
    pub offset: i64,
    /// OEIS A-number, fetched through the cache.
    #[arg(long)]
    pub oeis: Option<String>,
    #[command(flatten)]
    pub cache: CacheArgs,
}

#[derive(Debug, Args)]
pub struct CacheArgs {
    #[arg(long, env = CACHE_DIR_ENV)]
    pub cache_dir: Option<PathBuf>,
    /// Never touch the network.
    #[arg(long)]
    pub offline: bool,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub relation: RelationArgs,
    /// Comma-separated initial terms.
    #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
    pub init: Vec<String>,
    /// Index of the first initial term.
    #[arg(long, default_value_t = 0)]
    pub offset: i64,
    /// Last index to compute.
    #[arg(long)]
    pub to: i64,
    /// Write a b-file instead of printing.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub relation: RelationArgs,
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct Ode2recArgs {
    /// Differential operator, e.g. "(1+t^2)*D - (1-t)".
    pub ode: String,
    /// Assert the relation from the first index where it holds with
    /// negative-index terms read as zero.
    #[arg(long)]
    pub zero_convention: bool,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct GuessArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long, default_value_t = 2)]
    pub max_order: usize,
    #[arg(long, default_value_t = 2)]
    pub max_degree: usize,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct SeriesArgs {
    /// Rational x0 in exp(x0*arctan t)/sqrt(1+t^2).
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub x0: String,
    #[arg(long, default_value_t = 12)]
    pub order: usize,
    /// Also print the truncated series.
    #[arg(long)]
    pub show_series: bool,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct FetchArgs {
    pub id: String,
    #[command(flatten)]
    pub cache: CacheArgs,
    /// Copy the b-file here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{context}: {source}")]
    Library {
        context: String,
        #[source]
        source: holorec::Error,
    },
    #[error("{path}: {source}")]
    BFile {
        path: PathBuf,
        #[source]
        source: BFileError,
    },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Fetch(#[from] FetchError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::BFile { .. } => EXIT_USAGE,
            CliError::Library { source, .. } => match source {
                holorec::Error::Parse { .. }
                | holorec::Error::ZeroOperator
                | holorec::Error::InsufficientInitial { .. }
                | holorec::Error::InsufficientTerms { .. }
                | holorec::Error::ZeroDenominator => EXIT_USAGE,
                _ => EXIT_MATH_FAILURE,
            },
            CliError::Io { .. } => EXIT_IO,
            CliError::Fetch(FetchError::InvalidId(_)) | CliError::Fetch(FetchError::Parse { .. }) => {
                EXIT_USAGE
            }
            CliError::Fetch(_) => EXIT_IO,
        }
    }
}

fn lib_err(context: impl Into<String>) -> impl FnOnce(holorec::Error) -> CliError {
    let context = context.into();
    move |source| CliError::Library { context, source }
}

/// Printed text and whether the mathematical checks passed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub text: String,
    pub ok: bool,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, ok: true }
    }
}

/// Exit code, stdout and stderr of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Invocation {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, T>(args: I) -> Invocation
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let rendered = e.render().to_string();
            let (stdout, stderr) = if e.use_stderr() {
                (String::new(), rendered)
            } else {
                (rendered, String::new())
            };
            return Invocation { code, stdout, stderr };
        }
    };
    match execute(&cli.command) {
        Ok(out) => Invocation {
            code: if out.ok { EXIT_PASS } else { EXIT_MATH_FAILURE },
            stdout: out.text,
            stderr: String::new(),
        },
        Err(e) => Invocation {
            code: e.exit_code(),
            stdout: String::new(),
            stderr: format!("{}: {e}\n", command_name(&cli.command)),
        },
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Selfcheck(_) => "selfcheck",
        Command::Generate(_) => "generate",
        Command::Verify(_) => "verify",
        Command::Ode2rec(_) => "ode2rec",
        Command::Guess(_) => "guess",
        Command::Series(_) => "series",
        Command::Fetch(_) => "fetch",
    }
}

pub fn execute(command: &Command) -> Result<Output, CliError> {
    match command {
        Command::Selfcheck(a) => cmd_selfcheck(a),
        Command::Generate(a) => cmd_generate(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Ode2rec(a) => cmd_ode2rec(a),
        Command::Guess(a) => cmd_guess(a),
        Command::Series(a) => cmd_series(a),
        Command::Fetch(a) => cmd_fetch(a),
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report types serialize");
    s.push('\n');
    s
}

pub fn read_bfile(path: &Path) -> Result<BFileDocument, CliError> {
    let bytes = fs::read(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_bfile(&bytes).map_err(|source| CliError::BFile {
        path: path.to_path_buf(),
        source,
    })
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn parse_terms(items: &[String], offset: i64, what: &str) -> Result<SequenceTable, CliError> {
    let terms = items
        .iter()
        .filter(|s| !s.trim().is_empty())
        .map(|s| parse_bigint(s))
        .collect::<Result<Vec<_>, _>>()
        .map_err(lib_err(format!("invalid {what}")))?;
    Ok(SequenceTable::new(offset, terms))
}

fn cache_of(args: &CacheArgs) -> BFileCache {
    BFileCache::new(
        args.cache_dir.clone().unwrap_or_else(default_cache_dir),
        args.offline || offline_from_env(),
    )
}

fn load_source(src: &SourceArgs) -> Result<SequenceTable, CliError> {
    if let Some(path) = &src.bfile {
        return Ok(read_bfile(path)?.entries);
    }
    if let Some(items) = &src.terms {
        return parse_terms(items, src.offset, "--terms");
    }
    if let Some(id) = &src.oeis {
        return Ok(cache_of(&src.cache).fetch(id)?.entries);
    }
    Err(CliError::Usage("one of --bfile, --terms, --oeis is required".into()))
}

fn load_relation(rel: &RelationArgs) -> Result<RecurrenceOperator, CliError> {
    match (&rel.rec, &rel.ode) {
        (Some(r), None) => r.parse().map_err(lib_err("--rec")),
        (None, Some(o)) => {
            let op: DiffOperator = o.parse().map_err(lib_err("--ode"))?;
            Ok(ode_to_recurrence(&op))
        }
        _ => Err(CliError::Usage("exactly one of --rec, --ode is required".into())),
    }
}

fn render_verify(rec: &RecurrenceOperator, rep: &VerifyReport, label: &str) -> String {
    let mut s = String::new();
    if rep.checked_count() == 0 {
        let _ = writeln!(s, "{label}: no index in range to check for {rec}");
        return s;
    }
    match &rep.first_failure {
        None => {
            let _ = writeln!(
                s,
                "{label}: PASS {rec} holds for n = {}..{}",
                rep.n_min_checked, rep.n_max_checked
            );
        }
        Some((n, residual)) => {
            let _ = writeln!(
                s,
                "{label}: FAIL {rec} first fails at n = {n} (residual {residual}); {} of {} indices fail",
                rep.failures.len(),
                rep.checked_count()
            );
        }
    }
    s
}

/// Outcome of the A214615 self-check on a given table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelfCheck {
    pub ode: OdeCheckJson,
    pub unrolled: VerifyReport,
    pub against: Option<VerifyReport>,
}

impl SelfCheck {
    pub fn pass(&self) -> bool {
        self.ode.zero && self.unrolled.pass && self.against.as_ref().is_none_or(|r| r.pass)
    }
}

/// Applies `(1+t^2)D - (1-t)` to the EGF built at `series_order` and checks
/// `a(n) - a(n-1) + (n-1)^2 a(n-2) = 0` on `table` (and `against`).
pub fn selfcheck_on(
    table: &SequenceTable,
    series_order: usize,
    against: Option<&SequenceTable>,
) -> Result<SelfCheck, CliError> {
    let op = a214615_operator();
    let f = build_egf(&num_rational::BigRational::from_integer(1.into()), series_order);
    let applied = op.apply(&f).map_err(lib_err("ODE check"))?;
    let rec = a214615_recurrence();
    Ok(SelfCheck {
        ode: OdeCheckJson {
            operator: op.to_string(),
            series_order,
            checked_mod: applied.order() + 1,
            zero: applied.is_zero(),
            first_nonzero: applied.first_nonzero().map(|(k, c)| (k, c.to_string())),
        },
        unrolled: rec_verify(&rec, table),
        against: against.map(|t| rec_verify(&rec, t)),
    })
}

pub fn cmd_selfcheck(a: &SelfcheckArgs) -> Result<Output, CliError> {
    if a.max_n < 2 || a.series_order < 2 {
        return Err(CliError::Usage("--max-n and --series-order must be at least 2".into()));
    }
    let against = a.against.as_deref().map(read_bfile).transpose()?;
    let table = a214615_terms(a.max_n);
    let check = selfcheck_on(&table, a.series_order, against.as_ref().map(|d| &d.entries))?;
    let rec = a214615_recurrence();
    let ok = check.pass();
    if a.json {
        return Ok(Output {
            text: to_json(&SelfCheckJson {
                pass: ok,
                ode: check.ode.clone(),
                recurrence: rec.to_string(),
                unrolled: (&check.unrolled).into(),
                against: check.against.as_ref().map(Into::into),
            }),
            ok,
        });
    }
    let mut s = String::new();
    match &check.ode.first_nonzero {
        None => {
            let _ = writeln!(
                s,
                "ode: PASS {} annihilates exp(arctan t)/sqrt(1+t^2) mod t^{}",
                check.ode.operator, check.ode.checked_mod
            );
        }
        Some((k, c)) => {
            let _ = writeln!(
                s,
                "ode: FAIL {} leaves coefficient {c} at t^{k}",
                check.ode.operator
            );
        }
    }
    s.push_str(&render_verify(&rec, &check.unrolled, "recurrence"));
    if let Some(rep) = &check.against {
        s.push_str(&render_verify(&rec, rep, "against"));
    }
    if a.max_n <= 30 {
        let _ = writeln!(s, "terms: {}", join_terms(&table));
    }
    let _ = writeln!(s, "{}", if ok { "selfcheck: PASS" } else { "selfcheck: FAIL" });
    Ok(Output { text: s, ok })
}

fn join_terms(t: &SequenceTable) -> String {
    t.terms()
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

pub fn cmd_generate(a: &GenerateArgs) -> Result<Output, CliError> {
    let rec = load_relation(&a.relation)?;
    let init = parse_terms(&a.init, a.offset, "--init")?;
    let table = rec_unroll(&rec, &init, a.to).map_err(lib_err("unroll"))?;
    if let Some(path) = &a.out {
        let doc = BFileDocument {
            sequence_id: None,
            entries: table.clone(),
        };
        write_file(path, &write_bfile(&doc))?;
        return Ok(Output::ok(format!(
            "wrote {} terms to {}\n",
            table.len(),
            path.display()
        )));
    }
    if a.json {
        return Ok(Output::ok(to_json(&TermsJson::from(&table))));
    }
    Ok(Output::ok(format!("{}\n", join_terms(&table))))
}

pub fn cmd_verify(a: &VerifyArgs) -> Result<Output, CliError> {
    let rec = load_relation(&a.relation)?;
    let table = load_source(&a.source)?;
    let rep = rec_verify(&rec, &table);
    let text = if a.json {
        to_json(&VerifyJson::from(&rep))
    } else {
        render_verify(&rec, &rep, "verify")
    };
    Ok(Output { text, ok: rep.pass })
}

pub fn cmd_ode2rec(a: &Ode2recArgs) -> Result<Output, CliError> {
    let op: DiffOperator = a.ode.parse().map_err(lib_err("operator"))?;
    let rec = if a.zero_convention {
        ode_to_recurrence_with(&op, IndexConvention::ZeroBelowOffset)
    } else {
        ode_to_recurrence(&op)
    };
    if a.json {
        return Ok(Output::ok(to_json(&RecurrenceJson::from(&rec))));
    }
    Ok(Output::ok(format!("{rec}\n")))
}

pub fn cmd_guess(a: &GuessArgs) -> Result<Output, CliError> {
    let terms = load_source(&a.source)?;
    let spec = GuessSpec {
        max_order: a.max_order,
        max_degree: a.max_degree,
        terms,
    };
    let found = guess_recurrence(&spec).map_err(lib_err("guess"))?;
    if a.json {
        return Ok(Output::ok(to_json(&GuessJson {
            max_order: a.max_order,
            max_degree: a.max_degree,
            terms_used: spec.terms.len(),
            candidates: found.iter().map(Into::into).collect(),
        })));
    }
    if found.is_empty() {
        return Ok(Output::ok(format!(
            "no recurrence of order <= {} and degree <= {} fits the {} terms\n",
            a.max_order,
            a.max_degree,
            spec.terms.len()
        )));
    }
    Ok(Output::ok(
        found.iter().map(|r| format!("{r}\n")).collect::<String>(),
    ))
}

pub fn cmd_series(a: &SeriesArgs) -> Result<Output, CliError> {
    let x0 = parse_rational(&a.x0).map_err(lib_err("--x0"))?;
    let f = build_egf(&x0, a.order);
    let values: Vec<String> = f.egf_values().iter().map(ToString::to_string).collect();
    if a.json {
        return Ok(Output::ok(to_json(&SeriesJson {
            x0: x0.to_string(),
            order: a.order,
            series: f.to_string(),
            egf_values: values,
        })));
    }
    let mut s = String::new();
    if a.show_series {
        let _ = writeln!(s, "{f}");
    }
    let _ = writeln!(s, "{}", values.join(", "));
    Ok(Output::ok(s))
}

pub fn cmd_fetch(a: &FetchArgs) -> Result<Output, CliError> {
    let cache = cache_of(&a.cache);
    let doc = cache.fetch(&a.id)?;
    if let Some(out) = &a.out {
        write_file(out, &write_bfile(&doc))?;
    }
    Ok(Output::ok(format!(
        "{}: {} terms, n = {}..{} (cached at {})\n",
        a.id,
        doc.entries.len(),
        doc.entries.offset(),
        doc.entries.last_index(),
        cache.path_for(&a.id).display()
    )))
}
