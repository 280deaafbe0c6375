//! `hq` — quaternionic Heisenberg group toolkit.
//!
//! Exit codes: 0 = success / all checks pass, 1 = a check failed,
//! 2 = usage error. All randomized commands take an explicit `--seed`
//! (default 0, overridable through `HQ_SEED`) and print byte-identical
//! output for identical configuration.

mod checks;
mod emit;

use std::fs;
use std::io::{self, BufRead, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use emit::{emit_records, fmt17, Format};
use hq_core::cc::{self, SolverParams};
use hq_core::equivalence::{estimate_constants, verify_sandwich};
use hq_core::group::haar_scaling_check;
use hq_core::literal::{format_point, parse_point};
use hq_core::operators::{
    check_commutation_table, expansion_diff, horizontal_sum_of_squares, sublaplacian,
    vector_field, FieldName,
};
use hq_core::{EquivEstimate, NormSpec};

#[derive(Parser)]
#[command(name = "hq", version, about = "Quaternionic Heisenberg group toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a quasi-norm at a point, or at each stdin line in batch
    /// mode (CSV `point,family,value`).
    Norm {
        /// Norm family: koranyi | fs | alpha:<a> | box | max.
        #[arg(long)]
        family: NormSpec,
        /// Point literal `q1;...;qn;t1,t2,t3`; omit to read points from
        /// stdin, one per line.
        #[arg(long)]
        point: Option<String>,
    },
    /// Estimate the sandwich constants m, M between two quasi-norms.
    Equiv(EquivArgs),
    /// Carnot–Carathéodory distance to a target by horizontal-path
    /// optimization.
    Ccdist {
        /// Target point literal `q1;...;qn;t1,t2,t3`.
        #[arg(long)]
        target: String,
        #[arg(long, default_value_t = 32)]
        steps: usize,
        #[arg(long, default_value_t = 8)]
        restarts: u32,
        #[arg(long, env = "HQ_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Write the solution path as CSV rows s, controls, γ(s).
        #[arg(long)]
        dump_path: Option<String>,
    },
    /// Symbolic vector-field algebra at n = 1.
    Ops {
        #[command(subcommand)]
        action: OpsAction,
    },
    /// Monte Carlo check of the Haar-measure scaling exponent 4n+6.
    Haar {
        #[arg(long)]
        rho: f64,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, env = "HQ_SEED", default_value_t = 0)]
        seed: u64,
    },
    /// Run the full invariant suite and report per-check results.
    Verify {
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, env = "HQ_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
    },
}

#[derive(Args)]
struct EquivArgs {
    #[command(subcommand)]
    action: Option<EquivAction>,
    /// Family whose unit sphere is sampled (the A in m‖·‖A ≤ ‖·‖B ≤ M‖·‖A).
    #[arg(long)]
    from: Option<NormSpec>,
    /// Family evaluated over that sphere.
    #[arg(long)]
    to: Option<NormSpec>,
    #[arg(long, default_value_t = 100_000)]
    samples: u64,
    #[arg(long, env = "HQ_SEED", default_value_t = 0)]
    seed: u64,
    /// Sharpen both witnesses with a local pattern search.
    #[arg(long)]
    refine: bool,
    #[arg(long, default_value_t = 1)]
    n: usize,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
}

#[derive(Subcommand)]
enum EquivAction {
    /// Check a saved estimate's sandwich on fresh points.
    Verify {
        /// Path to a JSON estimate produced by `hq equiv`.
        #[arg(long)]
        estimate: String,
        #[arg(long, default_value_t = 100_000)]
        fresh: u64,
        #[arg(long, env = "HQ_SEED", default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum OpsAction {
    /// Print the verified commutation table.
    Table,
    /// Print an operator's canonical expansion as sorted monomial text.
    Expand {
        /// sublaplacian | sum-squares | X0..X3 | T1..T3.
        #[arg(long)]
        op: String,
    },
    /// Print the exact disagreement between −Σ Xᵢ² and its widely quoted
    /// expanded form.
    Diff,
}

/// Writes to stdout, exiting quietly when the reader has gone away
/// (e.g. piped into `head`).
fn write_out(args: std::fmt::Arguments<'_>, newline: bool) {
    let mut stdout = io::stdout().lock();
    let ok = stdout
        .write_fmt(args)
        .and_then(|_| if newline { stdout.write_all(b"\n") } else { Ok(()) });
    if ok.is_err() {
        std::process::exit(0);
    }
}

macro_rules! outln {
    ($($t:tt)*) => { crate::write_out(format_args!($($t)*), true) };
}
macro_rules! outp {
    ($($t:tt)*) => { crate::write_out(format_args!($($t)*), false) };
}

/// Usage problems exit with 2, failed checks with 1.
enum CliError {
    Usage(String),
    Check(String),
}

impl From<hq_core::HqError> for CliError {
    fn from(e: hq_core::HqError) -> Self {
        CliError::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Norm { family, point } => run_norm(family, point),
        Command::Equiv(args) => run_equiv(args),
        Command::Ccdist {
            target,
            steps,
            restarts,
            seed,
            tol,
            dump_path,
        } => run_ccdist(&target, steps, restarts, seed, tol, dump_path.as_deref()),
        Command::Ops { action } => run_ops(action),
        Command::Haar {
            rho,
            n,
            samples,
            seed,
        } => run_haar(rho, n, samples, seed),
        Command::Verify {
            samples,
            seed,
            format,
        } => run_verify(samples, seed, format),
    }
}

fn run_norm(family: NormSpec, point: Option<String>) -> Result<(), CliError> {
    match point {
        Some(lit) => {
            let v = parse_point(&lit)?;
            outln!("{}", fmt17(family.eval(&v)?));
            Ok(())
        }
        None => {
            let stdin = io::stdin();
            let mut rows: Vec<Map<String, Value>> = Vec::new();
            for line in stdin.lock().lines() {
                let line = line.map_err(|e| CliError::Usage(e.to_string()))?;
                let lit = line.trim();
                if lit.is_empty() {
                    continue;
                }
                let v = parse_point(lit)?;
                let mut rec = Map::new();
                rec.insert("point".into(), json!(lit));
                rec.insert("family".into(), json!(family.to_string()));
                rec.insert("value".into(), json!(family.eval(&v)?));
                rows.push(rec);
            }
            let out = emit_records(&["point", "family", "value"], &rows, Format::Csv)
                .map_err(CliError::Usage)?;
            outp!("{out}");
            Ok(())
        }
    }
}

fn estimate_record(est: &EquivEstimate) -> Map<String, Value> {
    let mut rec = Map::new();
    rec.insert("from".into(), json!(est.from.to_string()));
    rec.insert("to".into(), json!(est.to.to_string()));
    rec.insert("lower_m".into(), json!(est.lower_m));
    rec.insert("upper_M".into(), json!(est.upper_m));
    rec.insert("argmin".into(), json!(format_point(&est.argmin)));
    rec.insert("argmax".into(), json!(format_point(&est.argmax)));
    rec.insert("samples".into(), json!(est.samples));
    rec.insert("seed".into(), json!(est.seed));
    rec.insert("refined".into(), json!(est.refined));
    rec
}

fn run_equiv(args: EquivArgs) -> Result<(), CliError> {
    if let Some(EquivAction::Verify {
        estimate,
        fresh,
        seed,
    }) = args.action
    {
        let text = fs::read_to_string(&estimate)
            .map_err(|e| CliError::Usage(format!("cannot read {estimate}: {e}")))?;
        let est: EquivEstimate = serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("bad estimate file {estimate}: {e}")))?;
        let check = verify_sandwich(&est, est.from, est.to, fresh, seed)?;
        outln!(
            "{}",
            serde_json::to_string_pretty(&check).expect("serializable")
        );
        if check.violations > 0 {
            return Err(CliError::Check(format!(
                "{} of {} fresh points violate the sandwich",
                check.violations, fresh
            )));
        }
        return Ok(());
    }

    let (from, to) = match (args.from, args.to) {
        (Some(f), Some(t)) => (f, t),
        _ => {
            return Err(CliError::Usage(
                "equiv requires --from and --to (or the `verify` subcommand)".into(),
            ))
        }
    };
    let est = estimate_constants(from, to, args.n, args.samples, args.seed, args.refine)?;
    match args.format {
        OutputFormat::Json => outln!(
            "{}",
            serde_json::to_string_pretty(&est).expect("serializable")
        ),
        OutputFormat::Csv => {
            let rec = estimate_record(&est);
            let schema = [
                "from", "to", "lower_m", "upper_M", "argmin", "argmax", "samples", "seed",
                "refined",
            ];
            outp!(
                "{}",
                emit_records(&schema, &[rec], Format::Csv).map_err(CliError::Usage)?
            );
        }
        OutputFormat::Text => outln!(
            "{} <= |.|_{} / |.|_{} <= {}",
            fmt17(est.lower_m),
            est.to,
            est.from,
            fmt17(est.upper_m)
        ),
    }
    Ok(())
}

fn dump_path_csv(result: &cc::CcResult, file: &str) -> Result<(), CliError> {
    let states = cc::trajectory(&result.path)?;
    let w = 4 * result.path.n;
    let mut out = String::new();
    let mut header = vec!["s".to_string()];
    header.extend((0..w).map(|j| format!("c{j}")));
    header.extend((0..w).map(|j| format!("x{j}")));
    header.extend((1..=3).map(|k| format!("t{k}")));
    out.push_str(&header.join(","));
    out.push('\n');
    for (i, state) in states.iter().enumerate() {
        let s = i as f64 / result.path.steps as f64;
        // the control on the segment starting at s (the last row repeats
        // the final segment's control)
        let seg = i.min(result.path.steps - 1);
        let mut row = vec![fmt17(s)];
        row.extend(result.path.control(seg).iter().map(|&c| fmt17(c)));
        row.extend(state.coords().iter().map(|&c| fmt17(c)));
        out.push_str(&row.join(","));
        out.push('\n');
    }
    fs::File::create(file)
        .and_then(|mut f| f.write_all(out.as_bytes()))
        .map_err(|e| CliError::Usage(format!("cannot write {file}: {e}")))
}

fn run_ccdist(
    target: &str,
    steps: usize,
    restarts: u32,
    seed: u64,
    tol: f64,
    dump_path: Option<&str>,
) -> Result<(), CliError> {
    let target = parse_point(target)?;
    let params = SolverParams {
        steps,
        restarts,
        seed,
        tol,
        ..SolverParams::default()
    };
    let result = cc::cc_distance(&target, &params)?;
    if let Some(file) = dump_path {
        dump_path_csv(&result, file)?;
    }
    outln!(
        "{}",
        serde_json::to_string_pretty(&result).expect("serializable")
    );
    if !result.converged {
        return Err(CliError::Check(format!(
            "endpoint error {} exceeds tolerance {tol}",
            result.endpoint_error
        )));
    }
    Ok(())
}

fn run_ops(action: OpsAction) -> Result<(), CliError> {
    match action {
        OpsAction::Table => {
            let report = check_commutation_table();
            for rel in &report.relations {
                outln!("{}  {}", if rel.pass { "ok " } else { "FAIL" }, rel.name);
            }
            if report.all_pass() {
                Ok(())
            } else {
                Err(CliError::Check("commutation table mismatch".into()))
            }
        }
        OpsAction::Expand { op } => {
            match op.to_ascii_lowercase().as_str() {
                "sublaplacian" => outln!("{}", sublaplacian()),
                "sum-squares" | "sum_squares" => outln!("{}", horizontal_sum_of_squares()),
                other => match other.parse::<FieldName>() {
                    Ok(name) => outln!("{}", vector_field(name)),
                    Err(_) => {
                        return Err(CliError::Usage(format!(
                            "unknown operator {op:?} (expected sublaplacian, sum-squares, or a field X0..X3/T1..T3)"
                        )))
                    }
                },
            }
            Ok(())
        }
        OpsAction::Diff => {
            let entries = expansion_diff();
            for e in &entries {
                outln!("{}:", e.slot);
                outln!("  computed: {}", e.computed);
                outln!("  quoted:   {}", e.quoted);
            }
            if entries.is_empty() {
                outln!("expansions agree exactly");
            }
            Ok(())
        }
    }
}

fn run_haar(rho: f64, n: usize, samples: u64, seed: u64) -> Result<(), CliError> {
    let check = haar_scaling_check(rho, n, samples, seed)?;
    outln!(
        "{}",
        serde_json::to_string_pretty(&check).expect("serializable")
    );
    Ok(())
}

fn run_verify(samples: u64, seed: u64, format: OutputFormat) -> Result<(), CliError> {
    if samples == 0 {
        return Err(CliError::Usage("--samples must be at least 1".into()));
    }
    let rows = checks::run_all(samples, seed);

    match format {
        OutputFormat::Text => {
            for row in &rows {
                let status = match row.status {
                    checks::Status::Pass => "pass",
                    checks::Status::Fail => "FAIL",
                    checks::Status::ExpectedFail => "expected-fail",
                };
                let mut line = format!(
                    "{status:<13} {:<32} measured={} tol={}",
                    row.name,
                    fmt17(row.measured),
                    fmt17(row.tolerance)
                );
                if let Some(w) = &row.witness {
                    line.push_str(&format!(" witness={w}"));
                }
                outln!("{line}");
            }
        }
        OutputFormat::Json | OutputFormat::Csv => {
            let records: Vec<Map<String, Value>> = rows
                .iter()
                .map(|r| {
                    let mut rec = Map::new();
                    rec.insert("name".into(), json!(r.name));
                    rec.insert(
                        "status".into(),
                        json!(match r.status {
                            checks::Status::Pass => "pass",
                            checks::Status::Fail => "fail",
                            checks::Status::ExpectedFail => "expected-fail",
                        }),
                    );
                    rec.insert("measured".into(), json!(r.measured));
                    rec.insert("tolerance".into(), json!(r.tolerance));
                    rec.insert(
                        "witness".into(),
                        r.witness.as_ref().map(|w| json!(w)).unwrap_or(Value::Null),
                    );
                    rec
                })
                .collect();
            let schema = ["name", "status", "measured", "tolerance", "witness"];
            let fmt = if format == OutputFormat::Json {
                Format::Json
            } else {
                Format::Csv
            };
            let rendered = emit_records(&schema, &records, fmt).map_err(CliError::Usage)?;
            if fmt == Format::Json {
                outln!("{rendered}");
            } else {
                outp!("{rendered}");
            }
        }
    }

    let failed: Vec<&str> = rows
        .iter()
        .filter(|r| !r.ok())
        .map(|r| r.name.as_str())
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Check(failed.join(", ")))
    }
}
