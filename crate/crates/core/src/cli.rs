//! The `banzhaf` command-line front end.
//!
//! ```text
//! banzhaf analyze    (--input PATH | --quota INT --weights CSV [--names CSV])
//!                    [--format table|json] [--no-oracle]
//! banzhaf weight     EXPR [--names CSV] [--method table|disjoint|ie|all]
//! banzhaf derivative (--input PATH | --quota INT --weights CSV [--names CSV]
//!                    | --expr EXPR [--names CSV]) --voter NAME
//! ```
//!
//! Exit codes: 0 ok, 1 other failure, 2 parse error, 3 oracle or method
//! disagreement, 4 constant system.
//!
//! JSON reports have a fixed key order: `n`, `quota`, `weights`, `names`,
//! `tbp`, `ntbp` (each `{num, den, decimal}` with six decimal places),
//! `dummies`, `symmetry_classes`, `checks` (`monotone`, `causal`,
//! `constant`), `oracle_verified`.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::banzhaf::{self, AnalyzeOptions, PowerReport};
use crate::boolean_core::TruthTable;
use crate::error::Error;
use crate::sop_algebra::{parse_sop, SopExpr};
use crate::threshold::VotingSystem;

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_PARSE: u8 = 2;
pub const EXIT_DISAGREEMENT: u8 = 3;
pub const EXIT_CONSTANT: u8 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "banzhaf",
    version,
    about = "Banzhaf voting power via switching algebra"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Raw and normalized Banzhaf power of a weighted voting system.
    Analyze {
        #[command(flatten)]
        system: SystemArgs,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        /// Skip the enumeration and subset-sum cross-checks.
        #[arg(long)]
        no_oracle: bool,
    },
    /// Weight (number of true rows) of a sum-of-products expression.
    Weight {
        /// Expression such as "X1 X2 | X2 X3 | X1 X3".
        expr: String,
        /// Variable order; defaults to X1..Xn when every name has that form.
        #[arg(long, value_delimiter = ',')]
        names: Option<Vec<String>>,
        #[arg(long, value_enum, default_value_t = WeightMethod::Disjoint)]
        method: WeightMethod,
    },
    /// Disjoint SOP and weight of the Boolean difference for one voter.
    Derivative {
        #[command(flatten)]
        system: SystemArgs,
        /// Sum-of-products expression instead of a voting system.
        #[arg(long, conflicts_with_all = ["input", "quota", "weights"])]
        expr: Option<String>,
        /// Voter name or 1-based index.
        #[arg(long)]
        voter: String,
    },
}

#[derive(Debug, Args)]
struct SystemArgs {
    /// Voting-system document (JSON, or TOML by extension).
    #[arg(long, conflicts_with_all = ["quota", "weights", "names"])]
    input: Option<PathBuf>,
    #[arg(long)]
    quota: Option<u64>,
    #[arg(long, value_delimiter = ',')]
    weights: Option<Vec<u64>>,
    #[arg(long, value_delimiter = ',')]
    names: Option<Vec<String>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum WeightMethod {
    Table,
    Disjoint,
    Ie,
    All,
}

/// A command failure with its exit code.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            Error::Syntax { .. }
            | Error::UnknownVariable { .. }
            | Error::ContradictoryProduct { .. }
            | Error::InvalidSystem(_)
            | Error::BadTable(_)
            | Error::BadCharset { .. } => EXIT_PARSE,
            Error::OracleDisagreement { .. } => EXIT_DISAGREEMENT,
            _ => EXIT_FAILURE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn parse_failure(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_PARSE,
        message: message.into(),
    }
}

/// Runs the CLI on `args` (including the program name) and returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
            } else {
                let _ = out.write_all(text.as_bytes());
            }
            return e.exit_code().clamp(0, 255) as u8;
        }
    };
    let result = match cli.command {
        Command::Analyze {
            system,
            format,
            no_oracle,
        } => cmd_analyze(&system, format, !no_oracle),
        Command::Weight {
            expr,
            names,
            method,
        } => cmd_weight(&expr, names, method),
        Command::Derivative {
            system,
            expr,
            voter,
        } => cmd_derivative(&system, expr.as_deref(), &voter),
    };
    match result {
        Ok((text, code)) => {
            let _ = out.write_all(text.as_bytes());
            code
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

type Outcome = std::result::Result<(String, u8), Failure>;

fn load_system(args: &SystemArgs) -> std::result::Result<VotingSystem, Failure> {
    if let Some(path) = &args.input {
        return Ok(VotingSystem::load(path)?);
    }
    let (Some(quota), Some(weights)) = (args.quota, args.weights.clone()) else {
        return Err(parse_failure(
            "a system needs --input, or both --quota and --weights",
        ));
    };
    let sys = VotingSystem::new(quota, weights)?;
    Ok(match args.names.clone() {
        Some(names) => sys.with_names(names)?,
        None => sys,
    })
}

fn cmd_analyze(args: &SystemArgs, format: Format, verify: bool) -> Outcome {
    let sys = load_system(args)?;
    let report = banzhaf::analyze_with(&sys, AnalyzeOptions { verify })?;
    let doc = ReportDocument::new(&sys, &report);
    let text = match format {
        Format::Json => doc.to_json(),
        Format::Table => doc.to_table(),
    };
    let code = if report.checks.constant {
        EXIT_CONSTANT
    } else {
        EXIT_OK
    };
    Ok((text, code))
}

/// Names `X1..Xn` inferred from an expression whose identifiers all have
/// that form.
fn infer_names(expr: &str) -> std::result::Result<Vec<String>, Failure> {
    let mut max = 0usize;
    for token in expr.split(|c: char| !(c.is_ascii_alphanumeric() || c == '_')) {
        if token.is_empty() {
            continue;
        }
        let index = token
            .strip_prefix('X')
            .and_then(|d| d.parse::<usize>().ok())
            .filter(|&k| k > 0)
            .ok_or_else(|| {
                parse_failure(format!(
                    "cannot infer variable order for `{token}`; pass --names"
                ))
            })?;
        max = max.max(index);
    }
    Ok((1..=max).map(|i| format!("X{i}")).collect())
}

fn cmd_weight(expr: &str, names: Option<Vec<String>>, method: WeightMethod) -> Outcome {
    let names = match names {
        Some(n) => n,
        None => infer_names(expr)?,
    };
    let sop = parse_sop(expr, &names)?;
    let by_table =
        || -> std::result::Result<u128, Failure> { Ok(u128::from(sop.to_truth_table()?.weight())) };
    let by_disjoint =
        || -> std::result::Result<u128, Failure> { Ok(sop.make_disjoint().weight_disjoint()?) };
    let by_ie = || -> std::result::Result<u128, Failure> { Ok(sop.weight_ie()?) };
    let text = match method {
        WeightMethod::Table => format!("{}\n", by_table()?),
        WeightMethod::Disjoint => format!("{}\n", by_disjoint()?),
        WeightMethod::Ie => format!("{}\n", by_ie()?),
        WeightMethod::All => {
            let (t, d, i) = (by_table()?, by_disjoint()?, by_ie()?);
            if t != d || t != i {
                return Err(Failure {
                    code: EXIT_DISAGREEMENT,
                    message: format!("weight methods disagree: table {t}, disjoint {d}, ie {i}"),
                });
            }
            format!("table {t}\ndisjoint {d}\nie {i}\n")
        }
    };
    Ok((text, EXIT_OK))
}

fn cmd_derivative(args: &SystemArgs, expr: Option<&str>, voter: &str) -> Outcome {
    let (table, names) = match expr {
        Some(expr) => {
            let names = match args.names.clone() {
                Some(n) => n,
                None => infer_names(expr)?,
            };
            (parse_sop(expr, &names)?.to_truth_table()?, names)
        }
        None => {
            let sys = load_system(args)?;
            (sys.truth_table()?, sys.names())
        }
    };
    let index = names
        .iter()
        .position(|n| n == voter)
        .map(|k| k + 1)
        .or_else(|| {
            voter
                .parse::<usize>()
                .ok()
                .filter(|&i| (1..=names.len()).contains(&i))
        })
        .ok_or_else(|| parse_failure(format!("unknown voter `{voter}`")))?;

    let (derivative, vars) = derivative_on_support(&table, index)?;
    let var_names: Vec<&str> = vars.iter().map(|&i| names[i - 1].as_str()).collect();
    let cover = SopExpr::shannon_cover(&derivative);
    let mut text = String::new();
    text.push_str(&format!("voter: {}\n", names[index - 1]));
    let listed = if var_names.is_empty() { "-".to_string() } else { var_names.join(",") };
    text.push_str(&format!("variables: {listed}\n"));
    text.push_str(&format!("derivative: {}\n", cover.render(&var_names)));
    text.push_str(&format!("weight: {}\n", derivative.weight()));
    Ok((text, EXIT_OK))
}

/// `∂f/∂X_i` over the variables `f` depends on, plus the original indices
/// of the derivative's variables. A vacuous `X_i` gives constant 0.
fn derivative_on_support(f: &TruthTable, i: usize) -> crate::Result<(TruthTable, Vec<usize>)> {
    let (reduced, kept) = f.essential_support();
    match kept.iter().position(|&k| k == i) {
        Some(pos) => {
            let d = reduced.boolean_difference(pos + 1)?;
            let vars = kept.into_iter().filter(|&k| k != i).collect();
            Ok((d, vars))
        }
        None => Ok((TruthTable::constant(0, false)?, Vec::new())),
    }
}

/// An exact fraction with a six-place decimal rendering.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FractionDoc {
    pub num: u128,
    pub den: u128,
    pub decimal: String,
}

impl FractionDoc {
    fn new(r: &Ratio<u128>) -> FractionDoc {
        FractionDoc {
            num: *r.numer(),
            den: *r.denom(),
            decimal: decimal6(*r.numer(), *r.denom()),
        }
    }
}

/// `num / den` rounded half-up to six places.
fn decimal6(num: u128, den: u128) -> String {
    let scaled =
        (BigUint::from(num) * 2_000_000u32 + BigUint::from(den)) / (BigUint::from(den) * 2u32);
    let million = BigUint::from(1_000_000u32);
    let int = &scaled / &million;
    let frac = &scaled % &million;
    format!("{int}.{frac:0>6}")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChecksDoc {
    pub monotone: bool,
    pub causal: bool,
    pub constant: bool,
}

/// Machine-readable analysis output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub n: usize,
    pub quota: u64,
    pub weights: Vec<u64>,
    pub names: Vec<String>,
    pub tbp: Vec<u128>,
    pub ntbp: Vec<FractionDoc>,
    pub dummies: Vec<String>,
    pub symmetry_classes: Vec<Vec<String>>,
    pub checks: ChecksDoc,
    pub oracle_verified: bool,
}

impl ReportDocument {
    pub fn new(sys: &VotingSystem, report: &PowerReport) -> ReportDocument {
        let names = sys.names();
        let name = |i: &usize| names[i - 1].clone();
        ReportDocument {
            n: sys.num_voters(),
            quota: sys.quota(),
            weights: sys.weights().to_vec(),
            names: names.clone(),
            tbp: report.tbp.clone(),
            ntbp: report.ntbp.iter().map(FractionDoc::new).collect(),
            dummies: report.dummies.iter().map(name).collect(),
            symmetry_classes: report
                .classes
                .classes()
                .iter()
                .map(|c| c.iter().map(name).collect())
                .collect(),
            checks: ChecksDoc {
                monotone: report.checks.monotone,
                causal: report.checks.causal,
                constant: report.checks.constant,
            },
            oracle_verified: report.oracle_verified,
        }
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> crate::Result<ReportDocument> {
        serde_json::from_str(text).map_err(|e| Error::Syntax {
            pos: e.column(),
            msg: e.to_string(),
        })
    }

    pub fn to_table(&self) -> String {
        let yes_no = |b: bool| if b { "yes" } else { "no" };
        let weights: Vec<String> = self.weights.iter().map(u64::to_string).collect();
        let mut out = format!(
            "system ({}; {}), {} voters\n",
            self.quota,
            weights.join(","),
            self.n
        );

        let header = ["voter", "weight", "TBP", "NTBP", "decimal"];
        let rows: Vec<[String; 5]> = (0..self.n)
            .map(|k| {
                let (frac, dec) = match self.ntbp.get(k) {
                    Some(f) => (format!("{}/{}", f.num, f.den), f.decimal.clone()),
                    None => ("-".to_string(), "-".to_string()),
                };
                [
                    self.names[k].clone(),
                    self.weights[k].to_string(),
                    self.tbp[k].to_string(),
                    frac,
                    dec,
                ]
            })
            .collect();
        let widths: Vec<usize> = (0..5)
            .map(|c| {
                rows.iter()
                    .map(|r| r[c].len())
                    .chain([header[c].len()])
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let line = |cells: [&str; 5]| {
            let padded: Vec<String> = cells
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:<w$}"))
                .collect();
            format!("{}\n", padded.join("  ").trim_end())
        };
        out.push_str(&line(header));
        for r in &rows {
            out.push_str(&line([&r[0], &r[1], &r[2], &r[3], &r[4]]));
        }

        let total: u128 = self.tbp.iter().sum();
        out.push_str(&format!("total TBP: {total}\n"));
        let dummies = if self.dummies.is_empty() {
            "none".to_string()
        } else {
            self.dummies.join(",")
        };
        out.push_str(&format!("dummies: {dummies}\n"));
        let classes: Vec<String> = self
            .symmetry_classes
            .iter()
            .map(|c| format!("{{{}}}", c.join(",")))
            .collect();
        out.push_str(&format!("symmetry classes: {}\n", classes.join(" ")));
        out.push_str(&format!(
            "monotone: {}  causal: {}  constant: {}\n",
            yes_no(self.checks.monotone),
            yes_no(self.checks.causal),
            yes_no(self.checks.constant)
        ));
        if self.checks.constant {
            out.push_str("constant system: every voter is a dummy\n");
        }
        out.push_str(&format!(
            "oracle verified: {}\n",
            yes_no(self.oracle_verified)
        ));
        out
    }
}
