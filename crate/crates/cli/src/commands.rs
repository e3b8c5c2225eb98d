//! One function per verb; each returns the rendered report and exit code.

use num_prime::nt_funcs::is_prime64;
use serde::Serialize;
use toric_np::compare::{compare_with, scan_limit, ComparisonReport};
use toric_np::geometry::{hodge_numbers, HodgeData};
use toric_np::oracle::{oracle_np, OracleOptions, OracleReport};
use toric_np::polygon::PolygonData;
use toric_np::selftest::run_selftest;
use toric_np::slopes::{
    assumption16, predicted_np, prime_bounds_from, vandermonde_report, Assumption14Report,
    Assumption16Report, PrimeBounds,
};
use toric_np::Error;

use crate::{Cli, Command, Format, Global};

/// Oracle runs over fields with more elements than this need `--heavy`.
const HEAVY_FIELD: u128 = 1_000_000;

pub const EXIT_OK: u8 = 0;
pub const EXIT_INVALID: u8 = 2;
pub const EXIT_ASSUMPTION: u8 = 3;
pub const EXIT_MISMATCH: u8 = 4;
const EXIT_INTERNAL: u8 = 1;

pub struct Output {
    pub text: String,
    pub code: u8,
}

pub struct CliError {
    pub message: String,
    pub code: u8,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidParameter(_)
            | Error::DomainTooLarge { .. }
            | Error::MemoryBudget { .. }
            | Error::MixedPrime(..) => EXIT_INVALID,
            Error::AssumptionFailed(_) => EXIT_ASSUMPTION,
            _ => EXIT_INTERNAL,
        };
        CliError { message: e.to_string(), code }
    }
}

fn invalid(message: impl Into<String>) -> CliError {
    CliError { message: message.into(), code: EXIT_INVALID }
}

type CmdResult = Result<Output, CliError>;

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn csv_polygon(poly: &PolygonData) -> String {
    poly.csv_rows().join("\n") + "\n"
}

fn strict_code(global: &Global, failed: bool, code: u8) -> u8 {
    if global.strict && failed {
        code
    } else {
        EXIT_OK
    }
}

pub fn run(cli: &Cli) -> CmdResult {
    let g = &cli.global;
    match &cli.command {
        Command::Hodge { n } => hodge(g, *n),
        Command::Predict { n, p } => predict(g, *n, *p),
        Command::Assumptions { n, p } => assumptions(g, *n, p.as_ref()),
        Command::Oracle { n, p, t, algorithm, max_k_budget } => {
            let residues = t.residues(*p).map_err(invalid)?;
            let opts = oracle_options(g, *n, *p, (*algorithm).into(), *max_k_budget)?;
            oracle(g, *n, *p, &residues, t.is_single(), &opts)
        }
        Command::Compare { n, p, t, algorithm } => {
            let opts = oracle_options(g, *n, *p, (*algorithm).into(), None)?;
            compare(g, *n, *p, *t, &opts)
        }
        Command::ScanLimit { n, p } => scan(g, *n, p.lo, p.hi),
        Command::Selftest => selftest(g),
    }
}

fn hodge(g: &Global, n: u32) -> CmdResult {
    let data: HodgeData = hodge_numbers(n)?;
    let text = match g.format {
        Format::Json => json(&data),
        Format::Csv => csv_polygon(&data.polygon),
    };
    Ok(Output { text, code: EXIT_OK })
}

fn predict(g: &Global, n: u32, p: u64) -> CmdResult {
    let report = predicted_np(n, p)?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    let text = match g.format {
        Format::Json => json(&report),
        Format::Csv => csv_polygon(&report.polygon),
    };
    Ok(Output { text, code: strict_code(g, !report.certified, EXIT_ASSUMPTION) })
}

#[derive(Serialize)]
struct AssumptionsOutput {
    n: u32,
    determinants: Assumption14Report,
    bounds: Option<PrimeBounds>,
    factorial_condition: Vec<Assumption16Report>,
}

fn assumptions(g: &Global, n: u32, range: Option<&crate::ranges::PrimeRange>) -> CmdResult {
    if g.format == Format::Csv {
        return Err(invalid("assumptions has no CSV form; use --format json"));
    }
    let determinants = vandermonde_report(n)?;
    let bounds = prime_bounds_from(&determinants).ok();
    let mut factorial_condition = Vec::new();
    if let Some(r) = range {
        if r.is_single() && !is_prime64(r.lo) {
            return Err(invalid(format!("p = {} is not prime", r.lo)));
        }
        for p in (r.lo.max(n as u64 + 1)..=r.hi).filter(|&p| is_prime64(p)) {
            factorial_condition.push(assumption16(n, p)?);
        }
        if r.is_single() && factorial_condition.is_empty() {
            return Err(invalid(format!("p = {} must exceed n = {n}", r.lo)));
        }
    }
    let failed = !determinants.overall || factorial_condition.iter().any(|a| !a.ok);
    let out = AssumptionsOutput { n, determinants, bounds, factorial_condition };
    Ok(Output { text: json(&out), code: strict_code(g, failed, EXIT_ASSUMPTION) })
}

fn oracle_options(
    g: &Global,
    n: u32,
    p: u64,
    algorithm: toric_np::oracle::SumAlgorithm,
    max_k: Option<usize>,
) -> Result<OracleOptions, CliError> {
    let k = max_k.unwrap_or(0).max(n as usize + 1) as u32;
    let field = (p as u128).checked_pow(k).unwrap_or(u128::MAX);
    if field > HEAVY_FIELD && !g.heavy {
        return Err(invalid(format!(
            "p^{k} = {field} exceeds {HEAVY_FIELD}; pass --heavy to run it"
        )));
    }
    let mem_budget_bytes = match g.mem_budget {
        Some(gb) if !(gb > 0.0) => return Err(invalid("--mem-budget must be positive")),
        Some(gb) => Some((gb * 1e9) as u64),
        None => None,
    };
    Ok(OracleOptions { algorithm, max_k, mem_budget_bytes })
}

fn oracle_failed(r: &OracleReport) -> bool {
    !r.hodge_ok || r.prediction_match == Some(false) || !r.purity_ok
}

fn oracle(g: &Global, n: u32, p: u64, ts: &[u64], single: bool, opts: &OracleOptions) -> CmdResult {
    let reports: Vec<OracleReport> = ts
        .iter()
        .map(|&t| oracle_np(n, p, t, opts))
        .collect::<Result<_, _>>()?;
    for r in &reports {
        for w in &r.warnings {
            eprintln!("warning (t = {}): {w}", r.params.t_residue.unwrap_or(0));
        }
    }
    let failed = reports.iter().any(oracle_failed);
    let text = match g.format {
        Format::Json if single => json(&reports[0]),
        Format::Json => json(&reports),
        Format::Csv => {
            let mut rows = vec![format!("t,{}", PolygonData::csv_header())];
            for r in &reports {
                let t = r.params.t_residue.unwrap_or(0);
                rows.extend(r.polygon.csv_rows().into_iter().skip(1).map(|row| format!("{t},{row}")));
            }
            rows.join("\n") + "\n"
        }
    };
    Ok(Output { text, code: strict_code(g, failed, EXIT_MISMATCH) })
}

fn compare(g: &Global, n: u32, p: u64, t: u64, opts: &OracleOptions) -> CmdResult {
    let oracle = oracle_np(n, p, t, opts)?;
    let report: ComparisonReport = compare_with(n, p, t, Some(&oracle))?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    let text = match g.format {
        Format::Json => json(&report),
        Format::Csv => csv_polygon(report.oracle.as_ref().unwrap_or(&report.predicted)),
    };
    let failed = report.is_failure() || !oracle.hodge_ok;
    Ok(Output { text, code: strict_code(g, failed, EXIT_MISMATCH) })
}

fn scan(g: &Global, n: u32, lo: u64, hi: u64) -> CmdResult {
    let scan = scan_limit(n, lo, hi)?;
    let text = match g.format {
        Format::Json => json(&scan),
        Format::Csv => {
            let mut rows = vec!["p,residue,max_dev_num,max_dev_den".to_string()];
            rows.extend(
                scan.rows
                    .iter()
                    .map(|r| format!("{},{},{},{}", r.p, r.residue, r.max_dev.numer(), r.max_dev.denom())),
            );
            rows.join("\n") + "\n"
        }
    };
    Ok(Output { text, code: strict_code(g, !scan.decreasing_within_classes, EXIT_MISMATCH) })
}

fn selftest(g: &Global) -> CmdResult {
    if g.format == Format::Csv {
        return Err(invalid("selftest has no CSV form; use --format json"));
    }
    let report = run_selftest();
    for c in report.checks.iter().filter(|c| !c.passed) {
        eprintln!("FAILED {}: {}", c.name, c.detail);
    }
    Ok(Output { text: json(&report), code: if report.passed { EXIT_OK } else { EXIT_MISMATCH } })
}
