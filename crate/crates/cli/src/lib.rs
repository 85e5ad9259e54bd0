//! Command-line front end: coefficient tables, rate bounds, exact oracles,
//! counting bounds and the parity-check cross-check.
//!
//! [`run`] parses an argument vector, writes the result to `out` and
//! diagnostics to `err`, and returns the process exit code: `0` on success,
//! `2` for argument errors, `3` when a computation fails (search budget,
//! bracketing).

mod output;
pub mod pcm;

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use davenport_core::counting::{inadmissible_ratio, prop6_coefficient, prop6_lower_exact, RatioMode};
use davenport_core::rate::{evaluate, RateBoundKind};
use davenport_core::recursion::{
    asymptotic_profile, coefficient_sequence, corollary_bound, round_down_3, round_up_3, solve_increment_detailed,
    theorem_table, Schedule,
};
use davenport_core::zerosum::{bounded_constant_exact, davenport_exact, max_disjoint_zero_sums, OracleLimits, Sequence};
use davenport_core::Error;

pub use output::{fmt_float, sig9, OutputRecord, TOOL_VERSION};
use output::Tsv;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_FAILURE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "davenport", version, about = "Bounds and exact values for j-wise Davenport constants of C_2^r")]
struct Cli {
    /// Output format; tables default to tsv, everything else to json.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Tsv,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Coefficient tables.
    #[command(subcommand)]
    Table(TableCommand),
    /// Rate-bound functions.
    #[command(subcommand)]
    Bounds(BoundsCommand),
    /// Solve the increment equation for one coefficient.
    Solve {
        #[arg(long)]
        p: f64,
        #[arg(long)]
        kind: RateBoundKind,
    },
    /// Coefficients under the Gilbert-Varshamov heuristic.
    Heuristic {
        #[arg(long)]
        jmax: usize,
    },
    /// Growth diagnostics of the Hamming-based coefficients.
    Asymptotic {
        #[arg(long)]
        jmax: usize,
    },
    /// Exact values by exhaustive search.
    #[command(subcommand)]
    Exact(ExactCommand),
    /// Counting-argument lower bounds.
    #[command(subcommand)]
    Counting(CountingCommand),
    /// Upper bound on D_j(C_2^r) with j = ceil(n / 2).
    Corollary {
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "mrrw1")]
        schedule: Schedule,
    },
    /// Randomized cross-checks.
    #[command(subcommand)]
    Verify(VerifyCommand),
}

#[derive(Debug, Subcommand)]
enum TableCommand {
    /// Lower and upper coefficients of D_j(C_2^r) / r.
    Theorem1 {
        #[arg(long)]
        jmax: usize,
        #[arg(long, default_value = "mrrw1")]
        schedule: Schedule,
    },
}

#[derive(Debug, Subcommand)]
enum BoundsCommand {
    /// Evaluate one rate bound at a normalized distance.
    Eval {
        #[arg(long)]
        kind: RateBoundKind,
        #[arg(long)]
        delta: f64,
    },
}

#[derive(Debug, Args)]
struct LimitArgs {
    /// Largest rank the search accepts.
    #[arg(long)]
    max_rank: Option<usize>,
    /// Largest j the Davenport search accepts.
    #[arg(long)]
    max_j: Option<usize>,
    /// Node budget for the search.
    #[arg(long)]
    budget: Option<u64>,
    /// Longest sequence the decomposition accepts.
    #[arg(long)]
    max_len: Option<usize>,
}

impl LimitArgs {
    fn limits(&self) -> OracleLimits {
        let mut limits = OracleLimits::default();
        if let Some(r) = self.max_rank {
            limits.davenport_max_rank = r;
            limits.sconst_max_rank = r;
        }
        if let Some(j) = self.max_j {
            limits.davenport_max_j = j;
        }
        if let Some(b) = self.budget {
            limits.node_budget = b;
        }
        if let Some(n) = self.max_len {
            limits.dp_max_len = n;
        }
        limits
    }
}

#[derive(Debug, Subcommand)]
enum ExactCommand {
    /// D_j(C_2^r) with an extremal sequence.
    Davenport {
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        j: usize,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// s_{<=d}(C_2^r) with an extremal set.
    Sconst {
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        d: usize,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Maximum number of disjoint zero-sum subsequences.
    Decompose {
        #[arg(long)]
        rank: usize,
        /// Elements as integers, comma separated.
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        elements: Vec<u64>,
        #[command(flatten)]
        limits: LimitArgs,
    },
}

#[derive(Debug, Subcommand)]
enum CountingCommand {
    /// Share of codes with j disjoint codewords.
    Ratio {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        j: usize,
        #[arg(long, default_value = "exact")]
        mode: RatioMode,
    },
    /// Finite-r lower bound for D_j(C_2^r).
    Lower {
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        j: usize,
    },
}

#[derive(Debug, Subcommand)]
enum VerifyCommand {
    /// Minimum distance against shortest zero-sum of the columns.
    Pcm {
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 6)]
        max_rank: usize,
        #[arg(long, default_value_t = 12)]
        max_len: usize,
    },
}

/// What a command produced, before formatting.
struct Outcome {
    record: OutputRecord,
    table: Option<Tsv>,
    warnings: Vec<String>,
}

impl Outcome {
    fn scalar(command: &str, parameters: Value, result: Value, provenance: impl Into<String>) -> Self {
        Self { record: OutputRecord::new(command, parameters, result, provenance), table: None, warnings: Vec::new() }
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("result types serialize")
}

fn f(x: f64) -> String {
    fmt_float(x)
}

fn d3(x: f64) -> String {
    format!("{x:.3}")
}

fn execute(command: Command) -> Result<Outcome, Error> {
    match command {
        Command::Table(TableCommand::Theorem1 { jmax, schedule }) => {
            let rows = theorem_table(&schedule, jmax)?;
            let mut tsv = Tsv::new(["j", "lower", "lower_display", "upper", "upper_display"]);
            let mut json_rows = Vec::with_capacity(rows.len());
            for row in &rows {
                let (lo, up) = (round_down_3(row.lower), round_up_3(row.upper));
                tsv.push(vec![row.j.to_string(), f(row.lower), d3(lo), f(row.upper), d3(up)]);
                json_rows.push(json!({
                    "j": row.j,
                    "lower": row.lower,
                    "lower_display": d3(lo),
                    "upper": row.upper,
                    "upper_display": d3(up),
                }));
            }
            let record = OutputRecord::new(
                "table theorem1",
                json!({"jmax": jmax, "schedule": schedule.id()}),
                json!({"rows": json_rows}),
                format!("lower: counting bound; upper: schedule {}", schedule.id()),
            );
            Ok(Outcome { record, table: Some(tsv), warnings: Vec::new() })
        }
        Command::Bounds(BoundsCommand::Eval { kind, delta }) => {
            let value = evaluate(kind, delta)?;
            Ok(Outcome::scalar(
                "bounds eval",
                json!({"kind": kind, "delta": delta}),
                json!({"value": value}),
                format!("rate bound {kind}"),
            ))
        }
        Command::Solve { p, kind } => {
            let sol = solve_increment_detailed(p, kind)?;
            Ok(Outcome::scalar(
                "solve",
                json!({"p": p, "kind": kind}),
                json!({"increment": sol.increment, "residual": sol.residual, "margin": sol.margin}),
                format!("rate bound {kind}"),
            ))
        }
        Command::Heuristic { jmax } => {
            let table = coefficient_sequence(&Schedule::gv_heuristic(), jmax)?;
            let mut tsv = Tsv::new(["j", "increment", "cumulative", "cumulative_display"]);
            for row in &table.rows {
                tsv.push(vec![row.j.to_string(), f(row.increment), f(row.cumulative), d3(round_up_3(row.cumulative))]);
            }
            let record = OutputRecord::new(
                "heuristic",
                json!({"jmax": jmax}),
                to_value(&table),
                "schedule gv-heuristic; not a proven bound",
            );
            Ok(Outcome { record, table: Some(tsv), warnings: Vec::new() })
        }
        Command::Asymptotic { jmax } => {
            let profile = asymptotic_profile(jmax)?;
            let mut tsv = Tsv::new(["j", "increment", "cumulative", "rho", "kappa"]);
            for row in &profile.rows {
                tsv.push(vec![row.j.to_string(), f(row.increment), f(row.cumulative), f(row.rho), f(row.kappa)]);
            }
            let record =
                OutputRecord::new("asymptotic", json!({"jmax": jmax}), to_value(&profile), "schedule hamming");
            Ok(Outcome { record, table: Some(tsv), warnings: Vec::new() })
        }
        Command::Exact(ExactCommand::Davenport { rank, j, limits }) => {
            let res = davenport_exact(rank, j, &limits.limits())?;
            Ok(Outcome::scalar("exact davenport", json!({"rank": rank, "j": j}), to_value(&res), "exhaustive search"))
        }
        Command::Exact(ExactCommand::Sconst { rank, d, limits }) => {
            let res = bounded_constant_exact(rank, d, &limits.limits())?;
            Ok(Outcome::scalar("exact sconst", json!({"rank": rank, "d": d}), to_value(&res), "exhaustive search"))
        }
        Command::Exact(ExactCommand::Decompose { rank, elements, limits }) => {
            let seq = Sequence::from_bits(rank, &elements)?;
            let report = max_disjoint_zero_sums(&seq, &limits.limits())?;
            Ok(Outcome::scalar(
                "exact decompose",
                json!({"rank": rank, "elements": seq.bits()}),
                to_value(&report),
                "exhaustive search; indices refer to the sorted sequence",
            ))
        }
        Command::Counting(CountingCommand::Ratio { n, rank, j, mode }) => {
            let report = inadmissible_ratio(n, rank, j, mode)?;
            Ok(Outcome::scalar(
                "counting ratio",
                json!({"n": n, "rank": rank, "j": j, "mode": mode}),
                to_value(&report),
                format!("mode {}", to_value(&mode).as_str().unwrap_or("")),
            ))
        }
        Command::Counting(CountingCommand::Lower { rank, j }) => {
            let value = prop6_lower_exact(rank, j)?;
            Ok(Outcome::scalar(
                "counting lower",
                json!({"rank": rank, "j": j}),
                json!({"value": value, "coefficient": prop6_coefficient(j)}),
                "counting bound",
            ))
        }
        Command::Corollary { rank, n, schedule } => {
            let bound = corollary_bound(rank, n, &schedule)?;
            let mut out = Outcome::scalar(
                "corollary",
                json!({"rank": rank, "n": n, "schedule": schedule.id()}),
                to_value(&bound),
                format!("schedule {}", schedule.id()),
            );
            if bound.asymptotic_in_r {
                out.warnings.push(format!(
                    "warning: bound {} holds for sufficiently large r only; not certified at r = {rank}",
                    fmt_float(bound.value)
                ));
            }
            Ok(out)
        }
        Command::Verify(VerifyCommand::Pcm { trials, seed, max_rank, max_len }) => {
            let report = pcm::run_trials(trials, seed, max_rank, max_len)?;
            Ok(Outcome::scalar(
                "verify pcm",
                json!({"trials": trials, "seed": seed, "max_rank": max_rank, "max_len": max_len}),
                to_value(&report),
                format!("seed {seed}"),
            ))
        }
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Number(n) if n.is_f64() => fmt_float(n.as_f64().expect("f64")),
        other => other.to_string(),
    }
}

/// Single-row TSV of the top-level result fields.
fn result_tsv(result: &Value) -> Tsv {
    match result {
        Value::Object(map) => {
            let mut tsv = Tsv::new(map.keys().cloned());
            tsv.push(map.values().map(cell).collect());
            tsv
        }
        other => {
            let mut tsv = Tsv::new(["value"]);
            tsv.push(vec![cell(other)]);
            tsv
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    if e.is_computation_failure() {
        EXIT_FAILURE
    } else {
        EXIT_USAGE
    }
}

/// Runs one invocation. `args` includes the program name.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{rendered}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{rendered}");
                EXIT_OK
            };
        }
    };

    let outcome = match execute(cli.command) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return exit_code(&e);
        }
    };
    for w in &outcome.warnings {
        let _ = writeln!(err, "{w}");
    }

    let format = cli.format.unwrap_or(if outcome.table.is_some() { Format::Tsv } else { Format::Json });
    let written = match format {
        Format::Json => outcome.record.write_json(out),
        Format::Tsv => match &outcome.table {
            Some(t) => t.write(out),
            None => result_tsv(&outcome.record.result).write(out),
        },
    };
    match written.and_then(|()| out.flush()) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_IO
        }
    }
}
