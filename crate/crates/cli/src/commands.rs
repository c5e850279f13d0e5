use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use commdeg::algebra::{self, AlgebraError};
use commdeg::classify::{verify_range, ClassifyError, EnumConfig, EnumerationSummary, Theorem};
use commdeg::degree::{self, asymptotic, sequence_dim1, DegreeError, Family};
use commdeg::field::FieldError;
use commdeg::{DegreeConfig, DegreeReport, FieldSpec, LieAlgebra, Method, Workers};
use thiserror::Error;

use crate::format::{parse_algebra, write_algebra, ParseError};
use crate::report;

pub mod exit {
    pub const OK: u8 = 0;
    pub const INVALID_ALGEBRA: u8 = 2;
    pub const PARSE: u8 = 3;
    pub const BAD_PARAMETER: u8 = 4;
    pub const METHOD_MISMATCH: u8 = 5;
    pub const BUDGET: u8 = 6;
    pub const THEOREM_VIOLATION: u8 = 7;
}

#[derive(Debug, Error)]
#[error("{message}")]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    fn new(code: u8, message: impl Into<String>) -> Self {
        CliError {
            code,
            message: message.into(),
        }
    }

    fn param(message: impl Into<String>) -> Self {
        Self::new(exit::BAD_PARAMETER, message)
    }
}

impl From<AlgebraError> for CliError {
    fn from(e: AlgebraError) -> Self {
        let code = match e {
            AlgebraError::NotAlternating { .. } | AlgebraError::JacobiFails { .. } => {
                exit::INVALID_ALGEBRA
            }
            _ => exit::BAD_PARAMETER,
        };
        CliError::new(code, e.to_string())
    }
}

impl From<DegreeError> for CliError {
    fn from(e: DegreeError) -> Self {
        match e {
            DegreeError::Algebra(a) => a.into(),
            DegreeError::BudgetExceeded { .. } => CliError::new(exit::BUDGET, e.to_string()),
            _ => CliError::param(e.to_string()),
        }
    }
}

impl From<ClassifyError> for CliError {
    fn from(e: ClassifyError) -> Self {
        match e {
            ClassifyError::Degree(d) => d.into(),
            ClassifyError::Algebra(a) => a.into(),
            ClassifyError::BudgetExceeded { .. } => CliError::new(exit::BUDGET, e.to_string()),
            ClassifyError::PreconditionViolated(_) => CliError::param(e.to_string()),
        }
    }
}

impl From<FieldError> for CliError {
    fn from(e: FieldError) -> Self {
        CliError::param(e.to_string())
    }
}

type CmdResult = Result<u8, CliError>;

#[derive(Parser, Debug)]
#[command(
    name = "commdeg",
    version,
    about = "Exact commutativity degree of Lie algebras over finite fields"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check an algebra file and print its structure.
    Validate { path: PathBuf },
    /// Write a built-in algebra as a file.
    Make(MakeArgs),
    /// Compute d(L) for an algebra file.
    Degree(DegreeArgs),
    /// Enumerate every Lie bracket on F_q^n and check the degree theorems.
    Verify(VerifyArgs),
    /// Print d(H(m)) for m = 1..count.
    Sequence {
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 5)]
        count: u32,
    },
    /// Print the members and limit of a family of algebras.
    Asymptotic {
        /// heisenberg, heisenberg-power, class3-even, class3-odd or abelian
        family: String,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long, default_value_t = 5)]
        terms: u32,
    },
}

#[derive(Args, Debug)]
struct MakeArgs {
    #[command(subcommand)]
    kind: MakeKind,
    /// Field order; inferred from the inputs for `sum` and `cprod`.
    #[arg(long, global = true)]
    q: Option<u64>,
    /// Defining polynomial c0,c1,...,ce for extension fields.
    #[arg(long, global = true, value_delimiter = ',')]
    modulus: Option<Vec<u32>>,
    /// Output path (stdout when absent).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum MakeKind {
    Abelian {
        n: usize,
    },
    Heisenberg {
        m: usize,
    },
    Affine,
    L43,
    L55,
    /// Direct sum of two algebra files.
    Sum {
        f1: PathBuf,
        f2: PathBuf,
    },
    /// Central product gluing basis vector z1 of f1 to z2 of f2 (1-based).
    Cprod {
        f1: PathBuf,
        z1: usize,
        f2: PathBuf,
        z2: usize,
    },
}

#[derive(Args, Debug)]
struct DegreeArgs {
    path: PathBuf,
    /// auto, rank, pairs or centralizer
    #[arg(long, default_value = "auto")]
    method: String,
    /// Run every method within budget and require agreement.
    #[arg(long)]
    all_methods: bool,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Maximum enumeration size for every method.
    #[arg(long)]
    budget: Option<u64>,
    /// Print key=value lines instead of the human report.
    #[arg(long)]
    machine: bool,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    q: u64,
    #[arg(long)]
    dim: usize,
    #[arg(long, value_delimiter = ',')]
    modulus: Option<Vec<u32>>,
    /// Required for n >= 4.
    #[arg(long)]
    opt_in_large: bool,
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Maximum number of candidate tensors.
    #[arg(long)]
    budget: Option<u64>,
    /// Where to write the first failing algebra.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                exit::BAD_PARAMETER
            } else {
                exit::OK
            };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    let result = match cli.command {
        Command::Validate { path } => cmd_validate(&path, out),
        Command::Make(a) => cmd_make(a, out),
        Command::Degree(a) => cmd_degree(a, out, err),
        Command::Verify(a) => cmd_verify(a, out, err),
        Command::Sequence { q, count } => cmd_sequence(q, count, out),
        Command::Asymptotic {
            family,
            q,
            k,
            terms,
        } => cmd_asymptotic(&family, q, k, terms, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.code
        }
    }
}

fn io_err(e: std::io::Error) -> CliError {
    CliError::param(format!("i/o error: {e}"))
}

fn read_algebra(path: &Path) -> Result<LieAlgebra, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::param(format!("{}: {e}", path.display())))?;
    parse_algebra(&text)
        .map_err(|e: ParseError| CliError::new(exit::PARSE, format!("{}: {e}", path.display())))
}

fn read_valid_algebra(path: &Path) -> Result<LieAlgebra, CliError> {
    let l = read_algebra(path)?;
    l.validate()
        .map_err(|e| CliError::from(e).with_prefix(path))?;
    Ok(l)
}

impl CliError {
    fn with_prefix(mut self, path: &Path) -> Self {
        self.message = format!("{}: {}", path.display(), self.message);
        self
    }
}

fn cmd_validate(path: &Path, out: &mut dyn Write) -> CmdResult {
    let l = read_valid_algebra(path)?;
    let s = l.structure();
    writeln!(
        out,
        "valid Lie algebra over F_{} of dimension {}",
        l.field().q(),
        l.dim()
    )
    .map_err(io_err)?;
    writeln!(out, "{}", report::structure_line(&s)).map_err(io_err)?;
    Ok(exit::OK)
}

fn field_from(q: Option<u64>, modulus: Option<&[u32]>) -> Result<FieldSpec, CliError> {
    let q = q.ok_or_else(|| CliError::param("--q is required"))?;
    Ok(FieldSpec::new(q, modulus)?)
}

fn check_field(l: &LieAlgebra, q: Option<u64>, path: &Path) -> Result<(), CliError> {
    match q {
        Some(q) if q != l.field().q() as u64 => Err(CliError::param(format!(
            "{}: algebra is over F_{}, not F_{q}",
            path.display(),
            l.field().q()
        ))),
        _ => Ok(()),
    }
}

fn one_based(z: usize, l: &LieAlgebra) -> Result<usize, CliError> {
    if z == 0 || z > l.dim() {
        return Err(CliError::param(format!(
            "basis index {z} is outside 1..={}",
            l.dim()
        )));
    }
    Ok(z - 1)
}

fn cmd_make(a: MakeArgs, out: &mut dyn Write) -> CmdResult {
    let modulus = a.modulus.as_deref();
    let l = match a.kind {
        MakeKind::Abelian { n } => algebra::abelian(&field_from(a.q, modulus)?, n),
        MakeKind::Heisenberg { m } => algebra::heisenberg(&field_from(a.q, modulus)?, m)?,
        MakeKind::Affine => algebra::affine(&field_from(a.q, modulus)?),
        MakeKind::L43 => algebra::l43(&field_from(a.q, modulus)?),
        MakeKind::L55 => algebra::l55(&field_from(a.q, modulus)?),
        MakeKind::Sum { f1, f2 } => {
            let (x, y) = (read_valid_algebra(&f1)?, read_valid_algebra(&f2)?);
            check_field(&x, a.q, &f1)?;
            check_field(&y, a.q, &f2)?;
            algebra::direct_sum(&x, &y)?
        }
        MakeKind::Cprod { f1, z1, f2, z2 } => {
            let (x, y) = (read_valid_algebra(&f1)?, read_valid_algebra(&f2)?);
            check_field(&x, a.q, &f1)?;
            check_field(&y, a.q, &f2)?;
            algebra::central_product(&x, one_based(z1, &x)?, &y, one_based(z2, &y)?)?
        }
    };
    let text = write_algebra(&l);
    match a.out {
        Some(path) => fs::write(&path, text).map_err(io_err)?,
        None => out.write_all(text.as_bytes()).map_err(io_err)?,
    }
    Ok(exit::OK)
}

const ALL_METHODS: [Method; 3] = [Method::RankSum, Method::PairCount, Method::CentralizerSum];

fn cmd_degree(a: DegreeArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let l = read_valid_algebra(&a.path)?;
    let mut cfg = DegreeConfig::default().with_workers(Workers::from_count(a.workers));
    if let Some(b) = a.budget {
        cfg = cfg.with_budget(b);
    }
    let method = match a.method.as_str() {
        "auto" => None,
        m => Some(m.parse::<Method>()?),
    };
    let render = |r: &DegreeReport| {
        if a.machine {
            report::machine(r)
        } else {
            report::human(r)
        }
    };

    if !a.all_methods {
        let r = match method {
            None => degree::degree_auto(&l, &cfg)?,
            Some(m) => degree::degree_with(&l, m, &cfg)?,
        };
        write!(out, "{}", render(&r)).map_err(io_err)?;
        return Ok(exit::OK);
    }

    let mut results: Vec<DegreeReport> = Vec::new();
    for m in ALL_METHODS {
        match degree::degree_with(&l, m, &cfg) {
            Ok(r) => results.push(r),
            Err(DegreeError::BudgetExceeded { needed, budget }) => {
                writeln!(
                    err,
                    "skipping {m}: needs {needed} steps, budget is {budget}"
                )
                .map_err(io_err)?;
            }
            Err(e) => return Err(e.into()),
        }
    }
    let Some(first) = results.first() else {
        return Err(CliError::new(
            exit::BUDGET,
            "no method fits within the budget",
        ));
    };
    write!(out, "{}", render(first)).map_err(io_err)?;
    let mismatched: Vec<&DegreeReport> = results
        .iter()
        .filter(|r| r.degree != first.degree)
        .collect();
    for r in &results {
        let line = if a.machine {
            format!("method.{}={}", r.method, r.degree)
        } else {
            format!("{}: {}", r.method, report::degree_line(&r.degree))
        };
        writeln!(out, "{line}").map_err(io_err)?;
    }
    if !mismatched.is_empty() {
        return Err(CliError::new(
            exit::METHOD_MISMATCH,
            "degree methods disagree",
        ));
    }
    if !a.machine {
        writeln!(out, "all {} methods agree", results.len()).map_err(io_err)?;
    }
    Ok(exit::OK)
}

/// Candidates per progress report.
const CHUNK: u64 = 1 << 18;

fn cmd_verify(a: VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    if a.dim >= 4 && !a.opt_in_large {
        return Err(CliError::param(format!(
            "n = {} needs --opt-in-large",
            a.dim
        )));
    }
    let f = field_from(Some(a.q), a.modulus.as_deref())?;
    let mut cfg = EnumConfig {
        degree: DegreeConfig::default().with_workers(Workers::from_count(a.workers)),
        ..EnumConfig::default()
    };
    if let Some(b) = a.budget {
        cfg.budget = b;
    }
    let total = commdeg::classify::enumeration_size(&f, a.dim, cfg.budget)?;
    let mut summary = EnumerationSummary::default();
    let mut start = 0;
    while start < total {
        let end = (start + CHUNK).min(total);
        summary = summary.merge(verify_range(&f, a.dim, start..end, &cfg)?);
        if total > CHUNK {
            writeln!(err, "progress: {end}/{total} candidates").map_err(io_err)?;
        }
        start = end;
    }

    let q = a.q;
    let s = &summary.spectrum;
    writeln!(out, "q = {q}, n = {}", a.dim).map_err(io_err)?;
    writeln!(out, "candidates: {}", s.candidates).map_err(io_err)?;
    writeln!(out, "lie algebras: {}", s.valid).map_err(io_err)?;
    let dims: Vec<String> = summary
        .derived_dims
        .iter()
        .map(|(k, c)| format!("{k}:{c}"))
        .collect();
    writeln!(out, "dim L^2 counts: {}", dims.join(" ")).map_err(io_err)?;
    writeln!(out, "spectrum:").map_err(io_err)?;
    for (d, c) in s.counts.iter().rev() {
        writeln!(out, "  {d} ({}) x {c}", d.to_decimal(6)).map_err(io_err)?;
    }
    writeln!(out, "checks:").map_err(io_err)?;
    for t in Theorem::ALL {
        let x = summary.tallies.get(&t).cloned().unwrap_or_default();
        writeln!(
            out,
            "  {t}: pass {}, fail {}, vacuous {}",
            x.pass, x.fail, x.vacuous
        )
        .map_err(io_err)?;
    }
    let violations = s.violations(q, a.dim);
    for v in &violations {
        writeln!(out, "spectrum violation: {v}").map_err(io_err)?;
    }
    if summary.all_checks_pass(q, a.dim) {
        writeln!(out, "result: all checks pass").map_err(io_err)?;
        return Ok(exit::OK);
    }
    writeln!(out, "result: FAILED").map_err(io_err)?;
    if let Some(w) = &summary.first_failure {
        let path = a
            .out
            .clone()
            .unwrap_or_else(|| PathBuf::from(format!("witness-q{q}-n{}.alg", a.dim)));
        let mut text = format!("# candidate {}\n", w.index);
        for c in w.report.failures() {
            text.push_str(&format!("# fails {}: {}\n", c.theorem, c.witness));
        }
        text.push_str(&write_algebra(&w.algebra));
        fs::write(&path, text).map_err(io_err)?;
        writeln!(out, "witness written to {}", path.display()).map_err(io_err)?;
    }
    Ok(exit::THEOREM_VIOLATION)
}

fn cmd_sequence(q: u64, count: u32, out: &mut dyn Write) -> CmdResult {
    if count == 0 {
        return Err(CliError::param("--count must be at least 1"));
    }
    for (m, d) in sequence_dim1(q, count)?.iter().enumerate() {
        writeln!(out, "m = {}: {}", m + 1, report::degree_line(d)).map_err(io_err)?;
    }
    let limit = Family::Heisenberg.limit(q)?;
    writeln!(out, "limit: {}", report::degree_line(&limit)).map_err(io_err)?;
    Ok(exit::OK)
}

fn cmd_asymptotic(
    family: &str,
    q: u64,
    k: Option<u32>,
    terms: u32,
    out: &mut dyn Write,
) -> CmdResult {
    let fam = Family::parse(family, k)?;
    let r = asymptotic(fam, q, terms)?;
    writeln!(out, "family {} over F_{q}", fam.name()).map_err(io_err)?;
    for t in &r.terms {
        writeln!(
            out,
            "n = {} (dim {}): {}",
            t.index,
            t.dim,
            report::degree_line(&t.degree)
        )
        .map_err(io_err)?;
    }
    writeln!(out, "limit: {}", report::degree_line(&r.limit)).map_err(io_err)?;
    writeln!(
        out,
        "monotone toward limit: {}",
        if r.is_monotone_toward_limit() {
            "yes"
        } else {
            "no"
        }
    )
    .map_err(io_err)?;
    Ok(exit::OK)
}
