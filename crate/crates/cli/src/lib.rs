//! The `stlgo` command line: parse, monitor (centralized and distributed),
//! translate, generate scenarios and benchmark.
//!
//! Exit codes: 0 satisfied (or success), 1 usage or parse error, 2 violated,
//! 3 data error, 4 undetermined (distributed monitoring only).

pub mod files;

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use stlgo::casestudy::{drone_bench_run, drone_steps, DroneFormula};
use stlgo::distributed::{is_determinable, monitor_dist_with};
use stlgo::monitor::{monitor_global_with, monitor_local_with};
use stlgo::scenario::{export_station_csv, gen_bike, gen_drone, ingest_station_csv, BikeScenarioConfig, DroneScenarioConfig};
use stlgo::translate::{with_labeled_subgraph, with_shortest_distance, Comparison, CountOp, LabelMap, SpatialOp, StrelOp, Translator};
use stlgo::{parse_global, parse_local, Error, GlobalFormula, LocalFormula, MonitorOptions, ParseError, Verdict, WeightInterval};

pub const EXIT_SAT: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VIOLATED: i32 = 2;
pub const EXIT_DATA: i32 = 3;
pub const EXIT_UNKNOWN: i32 = 4;

/// Environment variable capping the worker threads.
pub const THREADS_ENV: &str = "STLGO_THREADS";

#[derive(Debug, Parser)]
#[command(name = "stlgo", version, about = "Spatio-temporal logic with graph operators")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a formula file and print its canonical form.
    Parse {
        formula: PathBuf,
        /// Parse as a system-level formula.
        #[arg(long)]
        global: bool,
    },
    /// Boolean satisfaction signal of a formula on a run.
    Monitor(MonitorArgs),
    /// Three-valued signal seen by an observer with partial knowledge.
    MonitorDist(DistArgs),
    /// Encode a counting, somewhere/everywhere or reach/escape property.
    Translate(TranslateArgs),
    /// Generate a seeded scenario.
    Gen(GenArgs),
    /// Build a run from station CSV files.
    Ingest(IngestArgs),
    /// Per-step monitoring times on drone scenarios.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct BundleArgs {
    /// Trajectory file.
    #[arg(long)]
    pub run: PathBuf,
    /// Graph file.
    #[arg(long)]
    pub graphs: PathBuf,
}

#[derive(Debug, Args)]
pub struct RangeArgs {
    #[arg(long, default_value_t = 0)]
    pub t0: usize,
    /// Last time of the signal; defaults to `t0`.
    #[arg(long)]
    pub tmax: Option<usize>,
    /// Reject windows running past the end of the trace.
    #[arg(long)]
    pub strict_horizon: bool,
    /// Signal output file; printed to stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MonitorArgs {
    pub formula: PathBuf,
    #[command(flatten)]
    pub bundle: BundleArgs,
    /// Agent to evaluate a local formula at.
    #[arg(long, conflicts_with = "global", required_unless_present = "global")]
    pub agent: Option<usize>,
    /// Treat the formula as system-level.
    #[arg(long)]
    pub global: bool,
    #[command(flatten)]
    pub range: RangeArgs,
}

#[derive(Debug, Args)]
pub struct DistArgs {
    pub formula: PathBuf,
    #[command(flatten)]
    pub bundle: BundleArgs,
    /// Knowledge mask file.
    #[arg(long)]
    pub mask: PathBuf,
    #[arg(long)]
    pub observer: usize,
    #[arg(long)]
    pub subject: usize,
    #[command(flatten)]
    pub range: RangeArgs,
    /// Determinability report output file; printed to stdout when absent.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Source {
    Sastl,
    Sstl,
    Strel,
}

#[derive(Debug, Args)]
pub struct TranslateArgs {
    #[arg(long, value_enum)]
    pub from: Source,
    #[command(flatten)]
    pub bundle: BundleArgs,
    /// Tag of the distance graph in the run.
    #[arg(long, default_value = "d")]
    pub base: String,
    /// Anchor agent.
    #[arg(long)]
    pub agent: usize,
    #[arg(long, default_value_t = 0.0)]
    pub w_lo: f64,
    #[arg(long, default_value_t = f64::INFINITY)]
    pub w_hi: f64,
    /// Operand (text), or `phi1` of reach.
    #[arg(long)]
    pub inner: String,
    /// `phi2` of reach.
    #[arg(long)]
    pub inner2: Option<String>,
    /// sum | avg | somewhere | everywhere | reach | escape.
    #[arg(long)]
    pub op: String,
    /// Label file (counting only).
    #[arg(long)]
    pub labels: Option<PathBuf>,
    #[arg(long)]
    pub label: Option<String>,
    /// One of <=, <, >=, >, = (counting only).
    #[arg(long, default_value = ">=")]
    pub cmp: String,
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
    /// Number of agents averaged over (avg only).
    #[arg(long)]
    pub n_prime: Option<u64>,
    /// Time whose graph fixes the traces (reach/escape).
    #[arg(long, default_value_t = 0)]
    pub t: usize,
    /// Encode reach by nesting graph operators over hop counts (unit weights).
    #[arg(long)]
    pub hops: bool,
    #[arg(long)]
    pub out_formula: PathBuf,
    #[arg(long)]
    pub out_graphs: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Drone,
    Bike,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(value_enum)]
    pub kind: Kind,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Drones or stations.
    #[arg(long)]
    pub size: Option<usize>,
    /// Last sample index.
    #[arg(long)]
    pub length: Option<usize>,
    #[arg(long)]
    pub out_run: PathBuf,
    #[arg(long)]
    pub out_graphs: PathBuf,
    /// Also write bike runs as station CSV files into this directory.
    #[arg(long)]
    pub csv_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    #[arg(long)]
    pub states: PathBuf,
    #[arg(long)]
    pub distances: PathBuf,
    #[arg(long)]
    pub times: PathBuf,
    #[arg(long)]
    pub out_run: PathBuf,
    #[arg(long)]
    pub out_graphs: PathBuf,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_values_t = vec![4, 10, 50])]
    pub sigma: Vec<usize>,
    /// Last monitored step.
    #[arg(long, default_value_t = 80)]
    pub horizon: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Subset of phi3, phi4, Phi3, Phi4.
    #[arg(long, value_delimiter = ',', default_values_t = vec!["phi3".to_string(), "phi4".into(), "Phi3".into(), "Phi4".into()])]
    pub formulas: Vec<String>,
    /// Also write the table as JSON.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

/// A failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_) | Error::InvalidFormula(_) | Error::AvgRequiresCount => EXIT_USAGE,
            _ => EXIT_DATA,
        };
        Failure { code, message: e.to_string() }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure { code: EXIT_USAGE, message: msg.into() }
}

type Outcome = std::result::Result<i32, Failure>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_SAT };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "{}", f.message);
            f.code
        }
    }
}

/// Sizes the global thread pool from [`THREADS_ENV`], once per process.
pub fn init_threads() {
    if let Some(n) = std::env::var(THREADS_ENV).ok().and_then(|v| v.parse::<usize>().ok()).filter(|&n| n > 0) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn execute(cmd: Command, out: &mut dyn Write) -> Outcome {
    match cmd {
        Command::Parse { formula, global } => cmd_parse(&formula, global, out),
        Command::Monitor(a) => cmd_monitor(&a, out),
        Command::MonitorDist(a) => cmd_monitor_dist(&a, out),
        Command::Translate(a) => cmd_translate(&a, out),
        Command::Gen(a) => cmd_gen(&a, out),
        Command::Ingest(a) => cmd_ingest(&a, out),
        Command::Bench(a) => cmd_bench(&a, out),
    }
}

fn io_err(path: &Path, e: std::io::Error) -> Failure {
    Failure { code: EXIT_DATA, message: format!("{}: {e}", path.display()) }
}

fn emit(out: &mut dyn Write, text: &str) -> std::result::Result<(), Failure> {
    out.write_all(text.as_bytes()).map_err(|e| Failure { code: EXIT_DATA, message: format!("stdout: {e}") })
}

fn read_source(path: &Path) -> std::result::Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| io_err(path, e))
}

fn parse_failure(path: &Path, src: &str, e: &ParseError) -> Failure {
    usage(format!("{}:\n{}", path.display(), e.render(src)))
}

fn load_local(path: &Path) -> std::result::Result<LocalFormula, Failure> {
    let src = read_source(path)?;
    parse_local(&src).map_err(|e| parse_failure(path, &src, &e))
}

fn load_global(path: &Path) -> std::result::Result<GlobalFormula, Failure> {
    let src = read_source(path)?;
    parse_global(&src).map_err(|e| parse_failure(path, &src, &e))
}

/// Prints the canonical form; a file that is neither kind of formula
/// reports the error that got further into the text.
pub fn cmd_parse(path: &Path, global: bool, out: &mut dyn Write) -> Outcome {
    let src = read_source(path)?;
    let printed = if global {
        parse_global(&src).map(|f| f.to_string()).map_err(|e| parse_failure(path, &src, &e))?
    } else {
        match parse_local(&src) {
            Ok(f) => f.to_string(),
            Err(le) => match parse_global(&src) {
                Ok(f) => f.to_string(),
                Err(ge) => {
                    let e = if ge.span.start > le.span.start { ge } else { le };
                    return Err(parse_failure(path, &src, &e));
                }
            },
        }
    };
    emit(out, &format!("{printed}\n"))?;
    Ok(EXIT_SAT)
}

fn options(range: &RangeArgs) -> MonitorOptions {
    MonitorOptions { strict_horizon: range.strict_horizon, parallel: true }
}

fn write_signal(range: &RangeArgs, file: &files::SignalFile, out: &mut dyn Write) -> std::result::Result<(), Failure> {
    match &range.out {
        Some(p) => files::write_json(p, file)?,
        None => emit(out, &(serde_json::to_string(file).expect("signals serialize") + "\n"))?,
    }
    Ok(())
}

pub fn cmd_monitor(a: &MonitorArgs, out: &mut dyn Write) -> Outcome {
    let run = files::read_bundle(&a.bundle.run, &a.bundle.graphs)?;
    let (t0, t1) = (a.range.t0, a.range.tmax.unwrap_or(a.range.t0));
    let opts = options(&a.range);
    let signal = match a.agent {
        Some(agent) if !a.global => monitor_local_with(&run, &load_local(&a.formula)?, agent, t0, t1, opts)?,
        _ => monitor_global_with(&run, &load_global(&a.formula)?, t0, t1, opts)?,
    };
    write_signal(&a.range, &files::signal_file(&signal), out)?;
    Ok(if signal.at(t0) == Some(true) { EXIT_SAT } else { EXIT_VIOLATED })
}

pub fn cmd_monitor_dist(a: &DistArgs, out: &mut dyn Write) -> Outcome {
    let run = files::read_bundle(&a.bundle.run, &a.bundle.graphs)?;
    let mask = files::read_mask(&a.mask, &run)?;
    if mask.observer() != a.observer {
        return Err(Error::ObserverMismatch { mask: mask.observer(), expected: a.observer }.into());
    }
    let f = load_local(&a.formula)?;
    let (t0, t1) = (a.range.t0, a.range.tmax.unwrap_or(a.range.t0));
    let signal = monitor_dist_with(&run, &mask, &f, a.subject, t0, t1, options(&a.range))?;
    let report = is_determinable(&run, &mask, &f, a.subject, t1)?;
    write_signal(&a.range, &files::signal_file(&signal), out)?;
    let report = json!({
        "schema": files::SCHEMA,
        "observer": a.observer,
        "subject": a.subject,
        "t": t1,
        "determinable": report.determinable,
        "checked": report.checked,
        "by_knowledge": report.by_knowledge,
        "by_count": report.by_count,
        "unknowns": signal.unknown_count(),
        "failures": report.failures.iter().map(|f| json!({"leaf": f.leaf, "t": f.t})).collect::<Vec<_>>(),
    });
    match &a.report {
        Some(p) => files::write_json(p, &report)?,
        None => emit(out, &(serde_json::to_string_pretty(&report).expect("reports serialize") + "\n"))?,
    }
    Ok(match signal.at(t0) {
        Some(Verdict::True) => EXIT_SAT,
        Some(Verdict::False) => EXIT_VIOLATED,
        _ => EXIT_UNKNOWN,
    })
}

fn inline_local(src: &str) -> std::result::Result<LocalFormula, Failure> {
    parse_local(src).map_err(|e| usage(e.render(src)))
}

pub fn cmd_translate(a: &TranslateArgs, out: &mut dyn Write) -> Outcome {
    let run = files::read_bundle(&a.bundle.run, &a.bundle.graphs)?;
    let w = WeightInterval::new(a.w_lo, a.w_hi)?;
    let tr = Translator::for_graph(&run, &a.base)?;
    let inner = inline_local(&a.inner)?;
    let (formula, run) = match a.from {
        Source::Sastl => {
            let op = match a.op.as_str() {
                "sum" => CountOp::Sum,
                "avg" => CountOp::Avg { n_prime: a.n_prime },
                other => return Err(usage(format!("counting op must be sum or avg, got `{other}`"))),
            };
            let label = a.label.as_deref().ok_or_else(|| usage("--label is required for sastl"))?;
            let labels = match &a.labels {
                Some(p) => files::read_labels(p, run.num_agents())?,
                None => LabelMap::new(run.num_agents()),
            };
            let cmp: Comparison = a.cmp.parse()?;
            let f = tr.sastl_count(label, w, op, cmp, a.c, inner, a.agent)?;
            let run = with_shortest_distance(&run, &a.base, &tr.ds_tag)?;
            let run = with_labeled_subgraph(&run, &tr.ds_tag, &labels, label, a.agent)?;
            (f.to_string(), run)
        }
        Source::Sstl => {
            let op = match a.op.as_str() {
                "somewhere" => SpatialOp::Somewhere,
                "everywhere" => SpatialOp::Everywhere,
                other => return Err(usage(format!("spatial op must be somewhere or everywhere, got `{other}`"))),
            };
            let f = tr.sstl(op, w, inner, a.agent);
            (f.to_string(), with_shortest_distance(&run, &a.base, &tr.ds_tag)?)
        }
        Source::Strel => {
            let op = match a.op.as_str() {
                "reach" => {
                    let phi2 = a.inner2.as_deref().ok_or_else(|| usage("--inner2 is required for reach"))?;
                    StrelOp::Reach(inner, inline_local(phi2)?)
                }
                "escape" => StrelOp::Escape(inner),
                other => return Err(usage(format!("strel op must be reach or escape, got `{other}`"))),
            };
            let f = match (&op, a.hops) {
                (StrelOp::Reach(p1, p2), true) => {
                    let local = tr.strel_reach_hops(p1, p2, w, run.num_agents());
                    GlobalFormula::bind(a.agent, local).to_string()
                }
                (StrelOp::Escape(_), true) => return Err(usage("--hops applies to reach only")),
                _ => tr.strel(&op, w, a.agent, &run, a.t)?.to_string(),
            };
            (f, run)
        }
    };
    fs::write(&a.out_formula, format!("{formula}\n")).map_err(|e| io_err(&a.out_formula, e))?;
    files::write_json(&a.out_graphs, &files::graph_file(run.graphs()))?;
    emit(out, &format!("{formula}\n"))?;
    Ok(EXIT_SAT)
}

pub fn cmd_gen(a: &GenArgs, out: &mut dyn Write) -> Outcome {
    let run = match a.kind {
        Kind::Drone => {
            let mut cfg = DroneScenarioConfig { seed: a.seed, ..Default::default() };
            cfg.sigma = a.size.unwrap_or(cfg.sigma);
            cfg.length = a.length.unwrap_or(cfg.length);
            gen_drone(&cfg)?
        }
        Kind::Bike => {
            let mut cfg = BikeScenarioConfig { seed: a.seed, ..Default::default() };
            cfg.stations = a.size.unwrap_or(cfg.stations);
            cfg.hours = a.length.unwrap_or(cfg.hours);
            gen_bike(&cfg)?
        }
    };
    files::write_bundle(&run, &a.out_run, &a.out_graphs)?;
    if let Some(dir) = &a.csv_dir {
        if a.kind != Kind::Bike {
            return Err(usage("--csv-dir applies to bike runs only"));
        }
        fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
        export_station_csv(&run, &dir.join("states.csv"), &dir.join("distances.csv"), &dir.join("times.csv"))?;
    }
    emit(out, &format!("{} agents, length {}\n", run.num_agents(), run.length()))?;
    Ok(EXIT_SAT)
}

pub fn cmd_ingest(a: &IngestArgs, out: &mut dyn Write) -> Outcome {
    let run = ingest_station_csv(&a.states, &a.distances, &a.times)?;
    files::write_bundle(&run, &a.out_run, &a.out_graphs)?;
    emit(out, &format!("{} stations, length {}\n", run.num_agents(), run.length()))?;
    Ok(EXIT_SAT)
}

pub fn cmd_bench(a: &BenchArgs, out: &mut dyn Write) -> Outcome {
    let formulas = a.formulas.iter().map(|s| s.parse::<DroneFormula>()).collect::<stlgo::Result<Vec<_>>>()?;
    let opts = MonitorOptions { strict_horizon: false, parallel: true };
    let mut table = format!("{:>6} {:>7} {:>6} {:>6} {:>14}\n", "sigma", "formula", "sat", "vio", "mean ms/step");
    let mut rows = Vec::new();
    for &sigma in &a.sigma {
        let run = drone_bench_run(sigma, a.horizon, a.seed)?;
        for &f in &formulas {
            let r = drone_steps(&run, f, a.horizon, opts)?;
            let _ = writeln!(table, "{:>6} {:>7} {:>6} {:>6} {:>14.4}", sigma, f.name(), r.sat, r.vio, r.mean_ms);
            rows.push(json!({
                "sigma": sigma, "formula": f.name(), "sat": r.sat, "vio": r.vio,
                "mean_ms": r.mean_ms, "total_ms": r.total_ms,
            }));
        }
    }
    emit(out, &table)?;
    if let Some(p) = &a.json {
        files::write_json(p, &json!({"schema": files::SCHEMA, "horizon": a.horizon, "seed": a.seed, "rows": rows}))?;
    }
    Ok(EXIT_SAT)
}
