//! `dzeta`: verification sweeps, coefficient tables and numeric audits.
//!
//! Exit codes: 0 success, 1 identity failure, 2 usage error,
//! 3 missing prerequisite (e.g. an audit file), 4 output write failure.

mod selftest;
mod verify;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dzeta_core::bernoulli::bernoulli_range;
use dzeta_core::export::{self, MatrixExport};
use dzeta_core::numerics::audit::{audit_euler_constant, SavedAudit};
use dzeta_core::numerics::{audit_euler, audit_h_ab, EulerAudit, ZetaEngine};
use dzeta_core::reductions::{
    euler_rhs_coefficients, expand_h_to_pi, h_ab_coefficients, inverse_reduction_coefficients,
    printed_constant, CoefficientTable, ConstantSource, Label,
};
use dzeta_core::zagier::{build_named, MatrixName};
use dzeta_core::{BernoulliCache, Error, ExactRational};

#[derive(Parser, Debug)]
#[command(name = "dzeta", version, about = "Euler's double zeta reduction matrix, its inverse, and numeric audits")]
struct Cli {
    /// Write the result here instead of standard output
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Worker threads for sweeps and audits
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    parallel: u32,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Bernoulli numbers B_0..B_max
    Bernoulli {
        #[arg(long)]
        max: usize,
        #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
        format: TableFormat,
    },
    /// Exact identity sweeps; exit 1 if any case fails
    Verify {
        #[command(subcommand)]
        kind: VerifyKind,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text, global = true)]
        format: ReportFormat,
    },
    /// One of the matrices A, B, C, P, Q
    Matrix {
        #[arg(long = "K", visible_alias = "k", value_parser = k_parser())]
        k: u32,
        #[arg(long)]
        which: MatrixName,
        #[arg(long, value_enum, default_value_t = MatrixFormat::Json)]
        format: MatrixFormat,
    },
    /// Coefficient tables
    Reduce {
        #[command(subcommand)]
        kind: ReduceKind,
        #[arg(long, value_enum, default_value_t = ExportFormat::Json, global = true)]
        format: ExportFormat,
    },
    /// Numeric value of zeta(k) or zeta(k1,k2)
    Zeta {
        #[arg(required = true, num_args = 1..=2, value_parser = clap::value_parser!(u32).range(1..))]
        indices: Vec<u32>,
        #[arg(long, default_value_t = 30, value_parser = digits_parser())]
        digits: u32,
    },
    /// Numeric audits (JSON reports)
    Audit {
        #[command(subcommand)]
        kind: AuditKind,
    },
    /// Randomized checks of the exact arithmetic
    Selftest {
        #[command(subcommand)]
        kind: SelftestKind,
    },
}

#[derive(Subcommand, Debug)]
pub enum VerifyKind {
    /// P = Q, PA = AP = I and det A != 0 for each K
    Conjecture {
        #[command(flatten)]
        range: KRange,
        /// Check P against A with A_{1,1} increased by one; every case must fail
        #[arg(long, hide = true)]
        negative_control: bool,
    },
    /// Carlitz's identity for 0 <= m <= n <= max
    Carlitz {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        max: u64,
    },
    /// The derivative relation for f_s, 1 <= s <= s-max, 1 <= m <= m-max
    Series {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        s_max: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        m_max: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        order: u64,
    },
    /// Closed forms of PB and PC against the products for each K
    ClosedForms(KRange),
}

#[derive(Args, Debug, Clone, Copy)]
pub struct KRange {
    #[arg(long, value_parser = k_parser())]
    k_min: u32,
    #[arg(long, value_parser = k_parser())]
    k_max: u32,
}

#[derive(Subcommand, Debug)]
enum ReduceKind {
    /// Double zetas over products and zeta(2K+1)
    Euler {
        #[arg(long = "K", visible_alias = "k", value_parser = k_parser())]
        k: u32,
    },
    /// Products over double zetas and zeta(2K+1)
    Inverse {
        #[arg(long = "K", visible_alias = "k", value_parser = k_parser())]
        k: u32,
        /// printed | audited | explicit:<c_1,...,c_{K-1}>
        #[arg(long, default_value = "printed")]
        constants: ConstantsArg,
        /// Saved `audit euler` report, required by --constants audited
        #[arg(long)]
        audit_file: Option<PathBuf>,
    },
    /// H(a,b) over H(K-r) zeta(2r+1)
    H {
        #[arg(long)]
        a: u32,
        #[arg(long)]
        b: u32,
        /// Write H(n) as a rational multiple of pi^{2n}
        #[arg(long)]
        expand_pi: bool,
    },
}

#[derive(Subcommand, Debug)]
enum AuditKind {
    /// Constant term of each Euler reduction row
    Euler {
        #[arg(long = "K", visible_alias = "k", value_parser = k_parser())]
        k: u32,
        /// Audit only this row
        #[arg(long)]
        r: Option<usize>,
        #[arg(long, value_parser = digits_parser())]
        digits: u32,
    },
    /// Closed formula for H(a,b) against direct summation
    H {
        #[arg(long)]
        a: u32,
        #[arg(long)]
        b: u32,
        #[arg(long, value_parser = digits_parser())]
        digits: u32,
    },
}

#[derive(Subcommand, Debug)]
enum SelftestKind {
    /// Field laws, binomial identities and text round trips on random rationals
    Arith {
        /// Seed for the generator; printed either way
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 500)]
        cases: u32,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MatrixFormat {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ExportFormat {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ReportFormat {
    Text,
    Json,
}

#[derive(Clone, Debug)]
enum ConstantsArg {
    Printed,
    Audited,
    Explicit(Vec<ExactRational>),
}

impl std::str::FromStr for ConstantsArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "printed" => Ok(ConstantsArg::Printed),
            "audited" => Ok(ConstantsArg::Audited),
            _ => {
                let list = s
                    .strip_prefix("explicit:")
                    .ok_or_else(|| "expected printed, audited or explicit:<list>".to_string())?;
                list.split(',')
                    .map(|c| c.trim().parse::<ExactRational>().map_err(|e| e.to_string()))
                    .collect::<Result<Vec<_>, _>>()
                    .map(ConstantsArg::Explicit)
            }
        }
    }
}

fn k_parser() -> clap::builder::RangedI64ValueParser<u32> {
    clap::value_parser!(u32).range(2..)
}

fn digits_parser() -> clap::builder::RangedI64ValueParser<u32> {
    clap::value_parser!(u32).range(1..=10_000)
}

/// Why a command stopped; each maps to one exit code.
#[derive(Debug)]
pub enum Failure {
    Identity(String),
    Usage(String),
    Missing(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Identity(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Missing(_) => 3,
            Failure::Io(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Identity(m) | Failure::Usage(m) | Failure::Missing(m) | Failure::Io(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Serialization(_) => Failure::Io(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

/// Text to emit, and whether the run found an identity failure.
pub struct Outcome {
    pub text: String,
    pub failed: bool,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, failed: false }
    }
}

fn pool(threads: u32) -> Result<rayon::ThreadPool, Failure> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads as usize)
        .build()
        .map_err(|e| Failure::Usage(format!("cannot start {threads} workers: {e}")))
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    match &cli.command {
        Command::Bernoulli { max, format } => {
            let values = bernoulli_range(*max);
            let text = match format {
                TableFormat::Csv => export::bernoulli_csv(&values)?,
                TableFormat::Json => export::bernoulli_json(&values)?,
                TableFormat::Text => values
                    .iter()
                    .enumerate()
                    .map(|(n, v)| format!("B_{n} = {v}\n"))
                    .collect(),
            };
            Ok(Outcome::ok(text))
        }
        Command::Verify { kind, format } => verify::run(kind, *format, &pool(cli.parallel)?),
        Command::Matrix { k, which, format } => {
            let k = *k as usize;
            let m = build_named(*which, k, &mut BernoulliCache::new())?;
            let ex = MatrixExport::new(k, *which, &m);
            let text = match format {
                MatrixFormat::Json => export::to_json(&ex)?,
                MatrixFormat::Csv => export::matrix_csv(&ex)?,
                MatrixFormat::Text => format!("{which} (K={k})\n{m}"),
            };
            Ok(Outcome::ok(text))
        }
        Command::Reduce { kind, format } => {
            let table = reduce_table(kind)?;
            let text = match format {
                ExportFormat::Json => export::to_json(&table)?,
                ExportFormat::Csv => export::table_csv(&table)?,
            };
            Ok(Outcome::ok(text))
        }
        Command::Zeta { indices, digits } => {
            let mut engine = ZetaEngine::new(*digits);
            let value = match indices.as_slice() {
                [k] => engine.zeta_single(*k)?,
                [k1, k2] => engine.zeta_double(*k1, *k2)?,
                _ => unreachable!("clap limits the index count"),
            };
            Ok(Outcome::ok(format!("{} = {value}\n", Label::Zeta(indices.clone()))))
        }
        Command::Audit { kind } => match kind {
            AuditKind::Euler { k, r, digits } => {
                let k = *k as usize;
                let audit = match r {
                    Some(r) => EulerAudit {
                        k,
                        digits: *digits,
                        reports: vec![audit_euler_constant(k, *r, *digits)?],
                    },
                    None if cli.parallel > 1 => {
                        use rayon::prelude::*;
                        let reports = pool(cli.parallel)?.install(|| {
                            (1..k)
                                .into_par_iter()
                                .map(|r| audit_euler_constant(k, r, *digits))
                                .collect::<Result<Vec<_>, _>>()
                        })?;
                        EulerAudit {
                            k,
                            digits: *digits,
                            reports,
                        }
                    }
                    None => audit_euler(k, *digits)?,
                };
                Ok(Outcome::ok(export::to_json(&audit)?))
            }
            AuditKind::H { a, b, digits } => Ok(Outcome::ok(export::to_json(&audit_h_ab(*a, *b, *digits)?)?)),
        },
        Command::Selftest { kind } => match kind {
            SelftestKind::Arith { seed, cases } => Ok(selftest::arith(*seed, *cases)),
        },
    }
}

fn reduce_table(kind: &ReduceKind) -> Result<CoefficientTable, Failure> {
    match kind {
        ReduceKind::Euler { k } => Ok(euler_rhs_coefficients(*k as usize)?),
        ReduceKind::Inverse {
            k,
            constants,
            audit_file,
        } => {
            let k = *k as usize;
            let (values, source) = match constants {
                ConstantsArg::Printed => (vec![printed_constant(); k - 1], ConstantSource::Printed),
                ConstantsArg::Explicit(list) => (list.clone(), ConstantSource::Explicit),
                ConstantsArg::Audited => (load_audited(k, audit_file.as_ref())?, ConstantSource::Audited),
            };
            Ok(inverse_reduction_coefficients(k, &values, source, &mut BernoulliCache::new())?)
        }
        ReduceKind::H { a, b, expand_pi } => {
            let table = h_ab_coefficients(*a, *b);
            Ok(if *expand_pi { expand_h_to_pi(&table) } else { table })
        }
    }
}

fn load_audited(k: usize, path: Option<&PathBuf>) -> Result<Vec<ExactRational>, Failure> {
    let guidance = format!(
        "audited constants need a saved audit: run `dzeta audit euler --K {k} --digits 40 --output audit.json` \
         and pass `--audit-file audit.json`"
    );
    let path = path.ok_or_else(|| Failure::Missing(guidance.clone()))?;
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Missing(format!("cannot read {}: {e}; {guidance}", path.display())))?;
    let saved = SavedAudit::parse(&text)
        .map_err(|e| Failure::Missing(format!("{} is not an audit report: {e}", path.display())))?;
    saved
        .constants_for(k)
        .map_err(|e| Failure::Missing(format!("{}: {e}; {guidance}", path.display())))
}

fn emit(text: &str, output: Option<&PathBuf>) -> Result<(), Failure> {
    let mut text = text.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match output {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Failure::Io(format!("cannot write to standard output: {e}")))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|outcome| {
        emit(&outcome.text, cli.output.as_ref())?;
        if outcome.failed {
            Err(Failure::Identity("one or more identity checks failed".into()))
        } else {
            Ok(())
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
