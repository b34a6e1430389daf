//! `resist`: construct, verify and certify loss-resistant entangled states.
//!
//! Exit codes: 0 certified / pass, 1 refuted / fail, 2 inconclusive,
//! 3 usage or input error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use resist_core::arrays::{
    builtin_ca_10_7_3_3, code_to_ca_params, corollary_gate, critical_strength, is_critical_array,
    min_distance, parse_code, search_code, CodeArray,
};
use resist_core::certificate::{emit_certificate, replay, summary};
use resist_core::certifier::{certify_code_resistant, certify_family, CodeOptions};
use resist_core::families::{
    c2_lower_bound, exact_boundary_n3, n5_a2_ratio, parameter_summary, threshold_ratio_n3, Family,
    FamilySpec,
};
use resist_core::scalar::{format_rational, integer, parse_rational, ExactScalar, Limits};
use resist_core::tables::{reproduce_tables, Table, TableOptions};

const EXIT_USAGE: u8 = 3;

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Core(#[from] resist_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
}

type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "resist", version, about = "Certify entanglement that survives particle loss")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Certify a Dicke family member or a code state.
    #[command(subcommand)]
    Certify(CertifyCommand),
    /// Check the critical-array conditions of a code.
    VerifyArray(VerifyArrayArgs),
    /// Print the coefficient rules of a family.
    ParamRange(ParamRangeArgs),
    /// Deterministic search for a code with given parameters.
    SearchCode(SearchCodeArgs),
    /// Reproduce one of the existence tables.
    Tables(TablesArgs),
    /// Recompute a certificate and compare it byte for byte.
    Replay(ReplayArgs),
}

#[derive(Debug, Subcommand)]
enum CertifyCommand {
    /// Strong resistance of a Dicke-superposition family member.
    Dicke(DickeArgs),
    /// Resistance of the state built from the rows of a code.
    Code(CodeArgs),
}

#[derive(Debug, Args)]
struct DickeArgs {
    #[arg(long, value_parser = parse_family)]
    family: Family,
    #[arg(long = "N")]
    n: usize,
    #[arg(long, value_parser = parse_q)]
    a2: Option<ExactScalar>,
    #[arg(long, value_parser = parse_q, default_value = "1")]
    b2: ExactScalar,
    #[arg(long, value_parser = parse_q)]
    c2: Option<ExactScalar>,
    #[arg(long, value_parser = parse_q)]
    margin: Option<ExactScalar>,
    /// Claimed resistance (defaults to the family's own).
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Builtin {
    #[value(name = "ca10-7-3-3")]
    Ca10733,
}

#[derive(Debug, Args)]
struct CodeSource {
    /// Code file: one word per line.
    #[arg(long, requires = "q", conflicts_with = "builtin")]
    file: Option<PathBuf>,
    /// Alphabet size for `--file`.
    #[arg(long)]
    q: Option<usize>,
    #[arg(long, value_enum)]
    builtin: Option<Builtin>,
}

impl CodeSource {
    fn load(&self) -> CliResult<CodeArray> {
        match (&self.file, self.builtin) {
            (Some(path), None) => {
                let q = self.q.ok_or_else(|| CliError::Usage("--file needs --q".into()))?;
                Ok(parse_code(&read(path)?, q)?)
            }
            (None, Some(Builtin::Ca10733)) => Ok(builtin_ca_10_7_3_3()),
            _ => Err(CliError::Usage("give exactly one of --file or --builtin".into())),
        }
    }
}

#[derive(Debug, Args)]
struct CodeArgs {
    #[command(flatten)]
    source: CodeSource,
    /// Comma-separated row coefficients (default all 1).
    #[arg(long)]
    coeffs: Option<String>,
    /// Claimed resistance; an explicit value runs even when the array
    /// preconditions fail.
    #[arg(long)]
    m: Option<usize>,
    /// Evaluate subsets on one thread.
    #[arg(long)]
    serial: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArrayArgs {
    #[command(flatten)]
    source: CodeSource,
    /// Strength to test (default: the smallest that holds).
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ParamRangeArgs {
    #[arg(long, value_parser = parse_family)]
    family: Family,
    #[arg(long = "N")]
    n: usize,
    #[arg(long, value_parser = parse_q, default_value = "1")]
    b2: ExactScalar,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SearchCodeArgs {
    #[arg(long = "N")]
    n: usize,
    #[arg(long)]
    q: usize,
    #[arg(long)]
    d: usize,
    #[arg(long)]
    r: usize,
    #[arg(long, default_value_t = 5_000_000)]
    budget: u64,
    /// Write the code found, in code-file format.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct TablesArgs {
    #[arg(long, value_parser = parse_table)]
    which: Table,
    /// Directory with `<N>_<r>_<d>_<q>.txt` code files.
    #[arg(long)]
    codes_dir: Option<PathBuf>,
    #[arg(long, default_value_t = 5_000_000)]
    budget: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ReplayArgs {
    #[arg(long)]
    cert: PathBuf,
}

fn parse_q(s: &str) -> Result<ExactScalar, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse().map_err(|e: resist_core::Error| e.to_string())
}

fn parse_table(s: &str) -> Result<Table, String> {
    s.parse().map_err(|e: resist_core::Error| e.to_string())
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Document to `--out` (summary on stdout) or to stdout (summary on stderr).
fn deliver(document: &str, out: Option<&Path>, line: &str) -> CliResult<()> {
    match out {
        Some(path) => {
            write(path, document)?;
            println!("{line}");
        }
        None => {
            print!("{document}");
            eprintln!("{line}");
        }
    }
    Ok(())
}

fn pretty(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("json values serialize");
    text.push('\n');
    text
}

const VERSION: &str = concat!("resist ", env!("CARGO_PKG_VERSION"));

fn certify_dicke(args: &DickeArgs) -> CliResult<u8> {
    let spec = FamilySpec {
        family: args.family,
        n: args.n,
        a2: args.a2.clone(),
        b2: args.b2.clone(),
        c2: args.c2.clone(),
        margin: args.margin.clone(),
    };
    let cert = certify_family(&spec, args.m)?;
    deliver(&emit_certificate(&cert), args.out.as_deref(), &summary(&cert))?;
    Ok(cert.outcome.exit_code() as u8)
}

fn parse_coeffs(text: Option<&str>, r: usize) -> CliResult<Vec<ExactScalar>> {
    match text {
        None => Ok(vec![integer(1); r]),
        Some(list) => {
            let coeffs = list
                .split(',')
                .map(|t| parse_rational(t.trim()))
                .collect::<Result<Vec<_>, _>>()?;
            if coeffs.len() != r {
                return Err(CliError::Usage(format!("{} coefficients for {r} rows", coeffs.len())));
            }
            Ok(coeffs)
        }
    }
}

fn certify_code(args: &CodeArgs) -> CliResult<u8> {
    let code = args.source.load()?;
    let coeffs = parse_coeffs(args.coeffs.as_deref(), code.r())?;
    let (m, strict) = match args.m {
        Some(m) => (m, false),
        None => {
            let m = corollary_gate(&code)
                .or_else(|| critical_strength(&code).map(|k| k - 1))
                .filter(|&m| m >= 1)
                .ok_or_else(|| {
                    CliError::Usage("no resistance follows from the code parameters; pass --m".into())
                })?;
            (m, true)
        }
    };
    let cert = certify_code_resistant(
        &code,
        &coeffs,
        m,
        CodeOptions {
            strict,
            parallel: !args.serial,
        },
    )?;
    deliver(&emit_certificate(&cert), args.out.as_deref(), &summary(&cert))?;
    Ok(cert.outcome.exit_code() as u8)
}

fn verify_array(args: &VerifyArrayArgs) -> CliResult<u8> {
    let code = args.source.load()?;
    let k = match args.k {
        Some(k) => Some(k),
        None => critical_strength(&code),
    };
    let report = k.map(|k| is_critical_array(&code, k));
    let holds = report.as_ref().is_some_and(|r| r.holds());
    let violation = report.as_ref().and_then(|r| r.violation.as_ref()).map(|v| format!("{v:?}"));
    let doc = json!({
        "version": VERSION,
        "kind": "verify-array",
        "q": code.q(),
        "n": code.n(),
        "r": code.r(),
        "sha256": code.digest(),
        "k": k,
        "critical": holds,
        "violation": violation,
        "min_distance": min_distance(&code),
        "ca_params": code_to_ca_params(&code).map(|p| json!({"r": p.r, "n": p.n, "q": p.q, "k": p.k})),
        "corollary_m": corollary_gate(&code),
    });
    let line = match (k, holds) {
        (Some(k), true) => format!(
            "PASS: CA({}, {}, {}, {k}), min distance {}",
            code.r(),
            code.n(),
            code.q(),
            min_distance(&code)
        ),
        (Some(k), false) => format!("FAIL: not {k}-critical: {}", violation.unwrap_or_default()),
        (None, _) => "FAIL: critical for no strength".to_string(),
    };
    deliver(&pretty(&doc), args.out.as_deref(), &line)?;
    Ok(if holds { 0 } else { 1 })
}

fn param_range(args: &ParamRangeArgs) -> CliResult<u8> {
    let lines = parameter_summary(args.family, args.n, &args.b2)?;
    let q = |x: ExactScalar| format_rational(&x);
    let doc = match args.family {
        Family::NMinus3 => json!({
            "threshold_ratio": q(threshold_ratio_n3(args.n)?),
            "exact_boundary_ratio": q(exact_boundary_n3(args.n)?),
        }),
        Family::NMinus4 => json!({}),
        Family::NMinus5 => {
            let ratio = n5_a2_ratio(args.n)?;
            let a2 = &ratio * &args.b2;
            json!({
                "a2_ratio": q(ratio),
                "c2_lower_bound": q(c2_lower_bound(args.n, &a2, &args.b2)?),
            })
        }
    };
    let doc = json!({
        "version": VERSION,
        "kind": "param-range",
        "family": args.family.name(),
        "n": args.n,
        "b2": format_rational(&args.b2),
        "lines": lines,
        "values": doc,
    });
    if let Some(path) = &args.out {
        write(path, &pretty(&doc))?;
    }
    for line in &lines {
        println!("{line}");
    }
    Ok(0)
}

fn search(args: &SearchCodeArgs) -> CliResult<u8> {
    let out = search_code(args.n, args.q, args.d, args.r, args.budget, &Limits::from_env())?;
    let doc = json!({
        "version": VERSION,
        "kind": "search-code",
        "n": args.n,
        "q": args.q,
        "d": args.d,
        "r": args.r,
        "budget": args.budget,
        "found": out.code.is_some(),
        "nodes": out.nodes,
        "budget_exhausted": out.budget_exhausted,
        "min_distance": out.code.as_ref().map(min_distance),
        "sha256": out.code.as_ref().map(CodeArray::digest),
        "rows": out.code.as_ref().map(|c| c.to_text().lines().map(str::to_string).collect::<Vec<_>>()),
    });
    let line = match &out.code {
        Some(c) => format!(
            "FOUND: ({}, {}, {})_{} code after {} nodes",
            args.n,
            c.r(),
            min_distance(c),
            args.q,
            out.nodes
        ),
        None if out.budget_exhausted => format!("NOT FOUND: budget of {} nodes used up", args.budget),
        None => format!("NOT FOUND: search finished after {} nodes", out.nodes),
    };
    if let (Some(path), Some(code)) = (&args.out, &out.code) {
        write(path, &code.to_text())?;
    }
    deliver(&pretty(&doc), args.report.as_deref(), &line)?;
    Ok(if out.code.is_some() { 0 } else { 1 })
}

fn tables(args: &TablesArgs) -> CliResult<u8> {
    let opts = TableOptions {
        codes_dir: args.codes_dir.clone(),
        budget: args.budget,
        limits: Limits::from_env(),
    };
    let report = reproduce_tables(args.which, &opts);
    let line = format!(
        "Table {}: {} cells, {} certified, {} refuted, {} inconclusive, {} skipped, {} errors",
        args.which,
        report.cells.len(),
        report.count("CERTIFIED"),
        report.count("REFUTED"),
        report.count("INCONCLUSIVE"),
        report.count("SKIPPED"),
        report.count("ERROR"),
    );
    deliver(&report.to_json(), args.out.as_deref(), &line)?;
    Ok(if report.count("REFUTED") + report.count("ERROR") > 0 { 1 } else { 0 })
}

fn replay_cmd(args: &ReplayArgs) -> CliResult<u8> {
    let text = read(&args.cert)?;
    match replay(&text) {
        Ok(cert) => {
            println!("REPLAY OK: {}", summary(&cert));
            Ok(0)
        }
        Err(e) => {
            println!("REPLAY FAILED: {e}");
            Ok(1)
        }
    }
}

fn run(cli: Cli) -> CliResult<u8> {
    match &cli.command {
        Command::Certify(CertifyCommand::Dicke(args)) => certify_dicke(args),
        Command::Certify(CertifyCommand::Code(args)) => certify_code(args),
        Command::VerifyArray(args) => verify_array(args),
        Command::ParamRange(args) => param_range(args),
        Command::SearchCode(args) => search(args),
        Command::Tables(args) => tables(args),
        Command::Replay(args) => replay_cmd(args),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
