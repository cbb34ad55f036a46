//! `rcfir` command-line front end.
//!
//! Exit codes: 0 ok, 1 runtime or I/O error, 2 legality failure,
//! 3 verification mismatch.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::array::{ArrayConfig, Rational};
use crate::mapping::{MappingKind, MappingPlan, PlanError, TapVector};
use crate::reference::fir_reference;
use crate::sim::{run, run_outputs, Extracted};

use super::plan_file::{PlanFile, PlanFileError};
use super::tables::{fig6_csv, sweep, sweep_csv, table, TableOptions, DEFAULT_ORDERS};
use super::trace_file::trace_to_string;
use super::parse_rational;

pub const EXIT_OK: i32 = 0;
pub const EXIT_RUNTIME: i32 = 1;
pub const EXIT_LEGALITY: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;

pub const DEFAULT_SEED: u64 = 0x5eed;

// Aliases keep clap from treating the parsed lists as repeated flags.
type OrderList = Vec<usize>;
type KindList = Vec<MappingKind>;

#[derive(Debug, Parser)]
#[command(name = "rcfir", version, about = "Reconfigurable cell array FIR simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a mapping plan and write it as JSON.
    Plan(PlanArgs),
    /// Run a plan over an input file, writing the trace and extracted outputs.
    Simulate(SimulateArgs),
    /// Check every extracted output against direct convolution.
    Verify(VerifyArgs),
    /// Reproduce a rate/speedup table or the OM speedup curve.
    Perf(PerfArgs),
    /// Rate report for every (kind, order) pair as CSV.
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
struct PlanArgs {
    #[arg(long, value_parser = parse_kind)]
    mapping: MappingKind,
    /// Tap count; weights default to 1, 2, ..., N.
    #[arg(long, conflicts_with = "weights", required_unless_present = "weights")]
    taps: Option<usize>,
    /// JSON array of integer weights.
    #[arg(long)]
    weights: Option<PathBuf>,
    /// Array size as ROWSxCOLS.
    #[arg(long, value_parser = parse_dims)]
    array: (usize, usize),
    #[arg(long)]
    diagonal: bool,
    #[arg(long, default_value = "100", value_parser = parse_clock)]
    clock: Rational,
    #[arg(long, default_value_t = crate::array::DEFAULT_QUADRANT)]
    quadrant: usize,
    /// Cycles of bus frames and extraction events to materialize.
    #[arg(long, default_value_t = 0)]
    horizon: u64,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[arg(long)]
    plan: PathBuf,
    /// JSON array of integer samples.
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    cycles: u64,
    #[arg(long)]
    symbolic: bool,
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Defaults to stdout.
    #[arg(long)]
    outputs: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long)]
    plan: PathBuf,
    #[arg(long, conflicts_with = "random", required_unless_present = "random")]
    input: Option<PathBuf>,
    /// Verify against LEN seeded random samples in [-100, 100] instead of a file.
    #[arg(long)]
    random: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Defaults to a horizon covering every output touched by the input.
    #[arg(long)]
    cycles: Option<u64>,
    /// Skip outputs whose tap window lies entirely past the input.
    #[arg(long)]
    trim_tail: bool,
}

#[derive(Debug, Args)]
struct PerfArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=7), conflicts_with = "fig6", required_unless_present = "fig6")]
    table: Option<u8>,
    #[arg(long)]
    fig6: bool,
    #[arg(long, value_parser = parse_orders)]
    orders: Option<OrderList>,
    #[arg(long, default_value = "100", value_parser = parse_clock)]
    clock: Rational,
    #[arg(long)]
    measure: bool,
    #[arg(long)]
    csv: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long, value_parser = parse_orders)]
    orders: OrderList,
    /// Comma-separated mapping kinds.
    #[arg(long, value_parser = parse_kinds, default_value = "basic,optimized,improved")]
    kinds: KindList,
    #[arg(long, default_value = "100", value_parser = parse_clock)]
    clock: Rational,
    #[arg(long)]
    measure: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

fn parse_kind(s: &str) -> Result<MappingKind, String> {
    s.parse()
}

fn parse_kinds(s: &str) -> Result<Vec<MappingKind>, String> {
    s.split(',').map(|k| k.trim().parse()).collect()
}

fn parse_dims(s: &str) -> Result<(usize, usize), String> {
    let (r, c) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected ROWSxCOLS, got '{s}'"))?;
    let parse = |v: &str| {
        v.trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| format!("bad array dimension '{v}'"))
    };
    Ok((parse(r)?, parse(c)?))
}

fn parse_clock(s: &str) -> Result<Rational, String> {
    let clock = parse_rational(s)?;
    if clock <= Rational::from_integer(0) {
        return Err("clock must be positive".into());
    }
    Ok(clock)
}

fn parse_orders(s: &str) -> Result<Vec<usize>, String> {
    s.split(',')
        .map(|v| {
            v.trim()
                .parse::<usize>()
                .ok()
                .filter(|&n| n > 0)
                .ok_or_else(|| format!("bad filter order '{v}'"))
        })
        .collect()
}

/// A failed command and the exit code it maps to.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn runtime(message: impl ToString) -> Self {
        Self {
            code: EXIT_RUNTIME,
            message: message.to_string(),
        }
    }
}

impl From<PlanError> for Failure {
    fn from(e: PlanError) -> Self {
        let code = match e {
            PlanError::EmptyTaps => EXIT_RUNTIME,
            _ => EXIT_LEGALITY,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<PlanFileError> for Failure {
    fn from(e: PlanFileError) -> Self {
        match e {
            PlanFileError::Plan(p) => p.into(),
            other => Self::runtime(other),
        }
    }
}

/// Entry point shared by the binary and tests.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // --help and --version render to stdout and succeed.
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return EXIT_RUNTIME;
            }
            let _ = write!(out, "{}", e.render());
            return EXIT_OK;
        }
    };
    let result = match cli.command {
        Command::Plan(a) => cmd_plan(a, out),
        Command::Simulate(a) => cmd_simulate(a, out),
        Command::Verify(a) => cmd_verify(a, out),
        Command::Perf(a) => cmd_perf(a, out),
        Command::Sweep(a) => cmd_sweep(a, out),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

/// Writes via a temporary file in the target directory, then renames.
fn write_atomic(path: &Path, contents: &str) -> Result<(), Failure> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let io = |e: std::io::Error| Failure::runtime(format!("{}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

fn emit(path: Option<&Path>, contents: &str, out: &mut dyn Write) -> Result<(), Failure> {
    match path {
        Some(p) => write_atomic(p, contents),
        None => out
            .write_all(contents.as_bytes())
            .map_err(Failure::runtime),
    }
}

fn read_json_ints(path: &Path) -> Result<Vec<i64>, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::runtime(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| {
        Failure::runtime(format!(
            "{}: expected a JSON array of integers ({e})",
            path.display()
        ))
    })
}

fn load_plan(path: &Path) -> Result<MappingPlan, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::runtime(format!("{}: {e}", path.display())))?;
    Ok(PlanFile::parse(&text)?.to_plan()?)
}

fn cmd_plan(a: PlanArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let taps = match (&a.weights, a.taps) {
        (Some(path), _) => TapVector::new(read_json_ints(path)?)?,
        (None, Some(n)) => TapVector::ramp(n)?,
        (None, None) => unreachable!("clap requires one of --taps/--weights"),
    };
    let cfg = ArrayConfig::new(a.array.0, a.array.1)
        .and_then(|c| c.with_quadrant(a.quadrant))
        .and_then(|c| c.with_clock_mhz(a.clock))
        .map_err(Failure::runtime)?
        .with_diagonal(a.diagonal);
    let plan = MappingPlan::build(a.mapping, taps, &cfg)?;
    emit(
        a.output.as_deref(),
        &PlanFile::from_plan(&plan, a.horizon).emit(),
        out,
    )
}

/// One entry of the outputs JSON.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub index: u64,
    pub value: i64,
    pub cycle: u64,
    pub row: usize,
    pub col: usize,
    /// Whole tap window lies past the input; the value is zero-padded.
    pub tail: bool,
}

fn output_records(plan: &MappingPlan, outputs: &[Extracted], input_len: usize) -> Vec<OutputRecord> {
    let mut records: Vec<OutputRecord> = outputs
        .iter()
        .map(|o| OutputRecord {
            index: o.event.output_index,
            value: o.value,
            cycle: o.event.cycle,
            row: o.event.coord.row,
            col: o.event.coord.col,
            tail: plan.is_tail(o.event.output_index, input_len),
        })
        .collect();
    records.sort_by_key(|r| (r.index, r.cycle));
    records
}

fn cmd_simulate(a: SimulateArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let plan = load_plan(&a.plan)?;
    let x = read_json_ints(&a.input)?;
    let result = run(&plan, &x, a.cycles, a.symbolic).map_err(Failure::runtime)?;
    if let Some(path) = &a.trace {
        write_atomic(path, &trace_to_string(&result.trace))?;
    }
    let records = output_records(&plan, &result.outputs, x.len());
    let mut json = serde_json::to_string_pretty(&records).map_err(Failure::runtime)?;
    json.push('\n');
    emit(a.outputs.as_deref(), &json, out)
}

/// Seeded samples in `[-100, 100]`.
pub fn random_input(len: usize, seed: u64) -> Vec<i64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..len).map(|_| rng.gen_range(-100..=100)).collect()
}

fn cmd_verify(a: VerifyArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let plan = load_plan(&a.plan)?;
    let x = match (&a.input, a.random) {
        (Some(path), _) => read_json_ints(path)?,
        (None, Some(len)) => random_input(len, a.seed),
        (None, None) => unreachable!("clap requires one of --input/--random"),
    };
    let cycles = a
        .cycles
        .unwrap_or_else(|| plan.horizon_covering((x.len() + plan.order() - 1) as u64));
    let outputs = run_outputs(&plan, &x, cycles).map_err(Failure::runtime)?;
    let checked: Vec<&Extracted> = outputs
        .iter()
        .filter(|o| !(a.trim_tail && plan.is_tail(o.event.output_index, x.len())))
        .collect();
    let count = checked
        .iter()
        .map(|o| o.event.output_index as usize + 1)
        .max()
        .unwrap_or(0);
    let expected = fir_reference(&x, plan.taps().weights(), count).map_err(Failure::runtime)?;
    for o in &checked {
        let want = expected[o.event.output_index as usize];
        if o.value != want {
            return Err(Failure {
                code: EXIT_MISMATCH,
                message: format!(
                    "mismatch: y{} at cycle {}, cell {}: expected {want}, got {}",
                    o.event.output_index, o.event.cycle, o.event.coord, o.value
                ),
            });
        }
    }
    writeln!(
        out,
        "ok: {} outputs over {cycles} cycles match direct convolution ({} mapping, {} taps)",
        checked.len(),
        plan.kind(),
        plan.order()
    )
    .map_err(Failure::runtime)
}

fn cmd_perf(a: PerfArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let orders = a.orders.unwrap_or_else(|| DEFAULT_ORDERS.to_vec());
    if a.fig6 {
        return emit(a.output.as_deref(), &fig6_csv(&orders), out);
    }
    let opts = TableOptions {
        orders,
        clock_mhz: a.clock,
        measure: a.measure,
    };
    let id = a.table.expect("clap requires --table or --fig6");
    let t = table(id, &opts).ok_or_else(|| Failure::runtime(format!("no table {id}")))?;
    let text = if a.csv { t.render_csv() } else { t.render_text() };
    emit(a.output.as_deref(), &text, out)
}

fn cmd_sweep(a: SweepArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let rows = sweep(&a.orders, &a.kinds, a.clock, a.measure);
    emit(a.output.as_deref(), &sweep_csv(&rows), out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dims_and_orders() {
        assert_eq!(parse_dims("8x8").unwrap(), (8, 8));
        assert_eq!(parse_dims("12X4").unwrap(), (12, 4));
        assert!(parse_dims("8").is_err());
        assert!(parse_dims("0x3").is_err());
        assert_eq!(parse_orders("8, 16,32").unwrap(), vec![8, 16, 32]);
        assert!(parse_orders("8,,16").is_err());
        assert_eq!(
            parse_kinds("bm,improved").unwrap(),
            vec![MappingKind::Basic, MappingKind::Improved]
        );
    }

    #[test]
    fn random_input_is_seeded() {
        assert_eq!(random_input(20, 7), random_input(20, 7));
        assert_ne!(random_input(20, 7), random_input(20, 8));
        assert!(random_input(500, 1).iter().all(|v| (-100..=100).contains(v)));
    }
}
