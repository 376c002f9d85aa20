//! `affchar`: compute character tables and specializations, and check
//! recurrences and identities from the command line.
//!
//! Exit status: 0 success, 1 a verification found a mismatch, 2 usage or
//! input error, 3 request outside the supported scope.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use affchar::identities::{
    level1_principal_product, macdonald_product_a, macdonald_product_d, verify_identity, verify_level1_identity,
    IdentityJob, IdentityReport,
};
use affchar::{closed_form_level1, propagate_from_initial, CharacterTable, Error, Family, LieType, QSeries};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Parser)]
#[command(name = "affchar", version, about = "Characters of affine Lie algebra vacuum modules")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the coefficient table A(n; q).
    Char(TableArgs),
    /// Homogeneous and principal specializations of a table.
    Specialize(TableArgs),
    /// Check the character recurrence on a computed or supplied table.
    VerifyRecurrence(RecurrenceArgs),
    /// Compare a product with its multisum side.
    VerifyIdentity(IdentityArgs),
}

#[derive(Args)]
struct TypeArgs {
    /// Lie type such as A2 or E8, or just the family letter together with --rank.
    #[arg(long = "type")]
    lie_type: Option<String>,
    #[arg(long)]
    rank: Option<usize>,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct TableArgs {
    #[command(flatten)]
    ty: TypeArgs,
    #[arg(long, default_value_t = 1)]
    level: i64,
    #[arg(long)]
    order: i64,
    /// JSON file with seed series on {0..k-1}^l.
    #[arg(long)]
    seed: Option<PathBuf>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct RecurrenceArgs {
    #[command(flatten)]
    ty: TypeArgs,
    #[arg(long, default_value_t = 1)]
    level: i64,
    /// Order to check; defaults to the table order.
    #[arg(long)]
    order: Option<i64>,
    #[arg(long)]
    seed: Option<PathBuf>,
    /// Character table JSON to check instead of computing one.
    #[arg(long)]
    table: Option<PathBuf>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct IdentityArgs {
    #[command(flatten)]
    ty: TypeArgs,
    #[arg(long, value_enum)]
    builtin: Option<Builtin>,
    /// Identity job JSON.
    #[arg(long)]
    identity: Option<PathBuf>,
    #[arg(long, default_value_t = 200)]
    order: i64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum Builtin {
    #[value(name = "A", alias = "a")]
    A,
    #[value(name = "D", alias = "d")]
    D,
    Level1,
}

enum Failure {
    Usage(String),
    Scope(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_scope_error() {
            Failure::Scope(e.to_string())
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

type Outcome = Result<bool, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn resolve_type(args: &TypeArgs) -> Result<LieType, Failure> {
    let t = match (&args.lie_type, args.rank) {
        (None, None) => return Err(usage("--type is required")),
        (None, Some(_)) => return Err(usage("--rank needs --type with a family letter")),
        (Some(s), None) => s.parse()?,
        (Some(s), Some(rank)) => {
            let s = s.trim();
            let mut chars = s.chars();
            let letter = chars.next().ok_or_else(|| usage("empty --type"))?;
            if chars.as_str().is_empty() {
                let family = Family::from_letter(letter.to_ascii_uppercase())
                    .ok_or_else(|| Failure::from(Error::UnknownType(s.to_string())))?;
                LieType::new(family, rank)?
            } else {
                let t: LieType = s.parse()?;
                if t.rank() != rank {
                    return Err(usage(format!("--type {s} conflicts with --rank {rank}")));
                }
                t
            }
        }
    };
    Ok(t)
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

#[derive(Deserialize)]
struct SeedFile {
    seeds: Vec<SeedEntry>,
}

#[derive(Deserialize)]
struct SeedEntry {
    n: Vec<i64>,
    series: QSeries,
}

fn load_seeds(path: &Path) -> Result<BTreeMap<Vec<i64>, QSeries>, Failure> {
    let file: SeedFile = serde_json::from_str(&read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let mut seeds = BTreeMap::new();
    for s in file.seeds {
        if seeds.insert(s.n.clone(), s.series).is_some() {
            return Err(usage(format!("duplicate seed {:?}", s.n)));
        }
    }
    Ok(seeds)
}

fn build_table(ty: &TypeArgs, level: i64, order: i64, seed: Option<&Path>) -> Result<CharacterTable, Failure> {
    let t = resolve_type(ty)?;
    if level < 1 {
        return Err(Error::InvalidLevel(level).into());
    }
    if order < 0 {
        return Err(Error::NegativeOrder(order).into());
    }
    Ok(match seed {
        Some(path) => propagate_from_initial(t, level, &load_seeds(path)?, order)?,
        None if level == 1 => closed_form_level1(t, order)?,
        None => return Err(usage(format!("level {level} needs --seed; only level 1 has a closed form"))),
    })
}

fn emit(out: &OutputArgs, json: impl FnOnce() -> String, text: impl FnOnce() -> String) -> Result<(), Failure> {
    let mut body = match out.format {
        Format::Json => json(),
        Format::Text => text(),
    };
    if !body.ends_with('\n') {
        body.push('\n');
    }
    match &out.output {
        None => {
            std::io::stdout().write_all(body.as_bytes()).map_err(|e| usage(e.to_string()))?;
        }
        Some(path) => {
            let dir = match path.parent() {
                Some(p) if !p.as_os_str().is_empty() => p,
                _ => Path::new("."),
            };
            let write = || -> std::io::Result<()> {
                let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
                tmp.write_all(body.as_bytes())?;
                tmp.persist(path).map_err(|e| e.error)?;
                Ok(())
            };
            write().map_err(|e| usage(format!("{}: {e}", path.display())))?;
        }
    }
    Ok(())
}

fn table_text(table: &CharacterTable) -> String {
    let mut s = format!(
        "{} level {} order {} mu {}\n{}\n",
        table.lie_type(),
        table.level(),
        table.order(),
        table.mu(),
        table.support_policy()
    );
    for (n, series) in table.entries() {
        let _ = writeln!(s, "{n:?}: {series}");
    }
    s
}

fn run_char(args: TableArgs) -> Outcome {
    let table = build_table(&args.ty, args.level, args.order, args.seed.as_deref())?;
    emit(&args.out, || table.to_json(), || table_text(&table))?;
    Ok(true)
}

#[derive(Serialize)]
struct Specialization {
    #[serde(rename = "type")]
    lie_type: String,
    level: i64,
    order: i64,
    mu: String,
    homogeneous: QSeries,
    principal: QSeries,
    principal_certified_order: i64,
}

fn run_specialize(args: TableArgs) -> Outcome {
    let table = build_table(&args.ty, args.level, args.order, args.seed.as_deref())?;
    let homogeneous = table.homogeneous_character()?;
    let principal = table.principal_character()?;
    let spec = Specialization {
        lie_type: table.lie_type().to_string(),
        level: table.level(),
        order: table.order(),
        mu: table.mu().to_string(),
        principal_certified_order: principal.order(),
        homogeneous,
        principal,
    };
    emit(
        &args.out,
        || serde_json::to_string_pretty(&spec).expect("serializable"),
        || {
            format!(
                "{} level {} order {}\nhomogeneous: {}\nprincipal:   {}\n",
                spec.lie_type, spec.level, spec.order, spec.homogeneous, spec.principal
            )
        },
    )?;
    Ok(true)
}

#[derive(Serialize)]
struct RecurrenceOutput {
    #[serde(rename = "type")]
    lie_type: String,
    level: i64,
    pairs_checked: u64,
    report: IdentityReport,
    failure: Option<FailureOutput>,
}

#[derive(Serialize)]
struct FailureOutput {
    point: Vec<i64>,
    direction: usize,
    source: Vec<i64>,
    exponent_shift: i64,
}

fn run_verify_recurrence(args: RecurrenceArgs) -> Outcome {
    let table = match &args.table {
        Some(path) => {
            if args.ty.lie_type.is_some() || args.seed.is_some() {
                return Err(usage("--table cannot be combined with --type or --seed"));
            }
            CharacterTable::from_json(&read(path)?)?
        }
        None => {
            let order = args.order.ok_or_else(|| usage("--order is required without --table"))?;
            build_table(&args.ty, args.level, order, args.seed.as_deref())?
        }
    };
    let order = args.order.unwrap_or(table.order());
    let rep = table.verify_recurrence(order)?;
    let out = RecurrenceOutput {
        lie_type: table.lie_type().to_string(),
        level: table.level(),
        pairs_checked: rep.pairs_checked,
        failure: rep.failure.as_ref().map(|f| FailureOutput {
            point: f.point.clone(),
            direction: f.direction + 1,
            source: f.source.clone(),
            exponent_shift: f.exponent_shift,
        }),
        report: rep.report.clone(),
    };
    emit(&args.out, || serde_json::to_string_pretty(&out).expect("serializable"), || rep.report.to_text())?;
    Ok(rep.passed())
}

fn run_verify_identity(args: IdentityArgs) -> Outcome {
    let report = match (&args.identity, args.builtin) {
        (Some(_), Some(_)) => return Err(usage("use either --identity or --builtin")),
        (None, None) => return Err(usage("one of --identity or --builtin is required")),
        (Some(path), None) => {
            let job = IdentityJob::from_json(&read(path)?)?;
            job.run()?
        }
        (None, Some(builtin)) => {
            let ty = match (&args.ty.lie_type, builtin) {
                (None, Builtin::A) => TypeArgs { lie_type: Some("A".into()), rank: args.ty.rank },
                (None, Builtin::D) => TypeArgs { lie_type: Some("D".into()), rank: args.ty.rank },
                (s, _) => TypeArgs { lie_type: s.clone(), rank: args.ty.rank },
            };
            let t = resolve_type(&ty)?;
            match builtin {
                Builtin::A | Builtin::D => {
                    let family = if matches!(builtin, Builtin::A) { Family::A } else { Family::D };
                    if t.family() != family {
                        return Err(usage(format!("--builtin {} needs type {}l, got {t}", family.letter(), family.letter())));
                    }
                    let lhs = match family {
                        Family::A => macdonald_product_a(t.rank())?,
                        _ => macdonald_product_d(t.rank())?,
                    };
                    verify_identity(&lhs, t, args.order)?
                }
                Builtin::Level1 => verify_level1_identity(&level1_principal_product(t)?, t, args.order)?,
            }
        }
    };
    emit(&args.out, || serde_json::to_string_pretty(&report).expect("serializable"), || report.to_text())?;
    Ok(report.equal)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Char(a) => run_char(a),
        Command::Specialize(a) => run_specialize(a),
        Command::VerifyRecurrence(a) => run_verify_recurrence(a),
        Command::VerifyIdentity(a) => run_verify_identity(a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Scope(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
