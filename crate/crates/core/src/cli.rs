//! Command-line front end.
//!
//! Every command except `gen` and `bench` prints one [`RunRecord`] as a
//! single-line JSON object. Exit codes: 0 success, 1 input error, 2
//! infeasible.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::backup::multi::DEFAULT_CANDIDATE_CAP;
use crate::cost::{cost_alpha_rftfl, cost_ufl, CostBreakdown, FacilitySet};
use crate::graph::{
    all_pairs_distances, generate_random_instance, generate_tree_instance, parse_instance,
    DistanceMatrix, Instance, TreeFamily,
};
use crate::oracle::{exact_alpha_rftfl, exact_rftfl, exact_ufl, OracleError, OracleResult};
use crate::par;
use crate::pipeline::{
    solve_alpha_rftfl, solve_rftfl, solve_ufl, SolveError, SolveReport, Stage1Kind,
    Stage1Solver, DEFAULT_EXACT_LIMIT,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;

pub const BENCH_HEADER: &str =
    "instance,n,m,alpha,alg_cost,oracle_cost,ratio,certified_bound,stage1,runtime_ms";

#[derive(Debug, Parser)]
#[command(name = "rftfl", version, about = "Robust fault-tolerant facility location toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the three-stage solver (alpha 0 runs plain UFL).
    Solve(SolveArgs),
    /// Evaluate the cost of a given facility set.
    Eval(EvalArgs),
    /// Compute the exact optimum by enumeration.
    Oracle(OracleArgs),
    /// Generate an instance file.
    Gen(GenArgs),
    /// Solve every instance in a directory and emit CSV.
    Bench(BenchArgs),
}

#[derive(Debug, clap::Args)]
struct SolveArgs {
    instance: PathBuf,
    #[arg(long, default_value_t = 1)]
    alpha: usize,
    #[arg(long, default_value = "exact")]
    stage1: Stage1Kind,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_CANDIDATE_CAP)]
    cap: usize,
    /// Also compute the exact optimum and the achieved ratio.
    #[arg(long)]
    oracle: bool,
    /// Include wall-clock stage timings (makes output run-dependent).
    #[arg(long)]
    timings: bool,
}

#[derive(Debug, clap::Args)]
struct EvalArgs {
    instance: PathBuf,
    /// Comma-separated node ids, e.g. 1,2,3.
    #[arg(long)]
    set: String,
    #[arg(long, default_value_t = 1)]
    alpha: usize,
}

#[derive(Debug, clap::Args)]
struct OracleArgs {
    instance: PathBuf,
    #[arg(long, default_value_t = 1)]
    alpha: usize,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum GenKind {
    Random,
    Tree,
}

#[derive(Debug, clap::Args)]
struct GenArgs {
    kind: GenKind,
    /// Tree family: unit_length_variable_demand or unit_demand_variable_length.
    #[arg(long)]
    family: Option<TreeFamily>,
    #[arg(short = 'n')]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0.5)]
    density: f64,
    #[arg(long, default_value_t = 10)]
    max_length: u64,
    #[arg(long, default_value_t = 10)]
    max_demand: u64,
    #[arg(long, default_value_t = 10)]
    max_cost: u64,
    /// Value range for tree families.
    #[arg(long, default_value_t = 9)]
    range: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
struct BenchArgs {
    corpus: PathBuf,
    #[arg(long, default_value_t = 1)]
    alpha: usize,
    #[arg(long, default_value = "exact")]
    stage1: Stage1Kind,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_CANDIDATE_CAP)]
    cap: usize,
    /// Largest instance that still gets an exact optimum column.
    #[arg(long, default_value_t = 12)]
    oracle_limit: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Timings {
    pub stage1_ms: f64,
    pub stage2_ms: f64,
    pub stage3_ms: f64,
}

/// One line of machine-readable output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRecord {
    pub instance: String,
    pub command: String,
    pub alpha: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stage1: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cap: Option<usize>,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub set: Option<FacilitySet>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r1: Option<FacilitySet>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r2: Option<FacilitySet>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cost: Option<CostBreakdown>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub algorithm_cost: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_cost: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certified_bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sets_examined: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub heuristic_sweep: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
}

impl RunRecord {
    fn new(instance: &Path, command: &str, alpha: usize) -> Self {
        RunRecord {
            instance: instance_id(instance),
            command: command.to_string(),
            alpha,
            stage1: None,
            seed: None,
            cap: None,
            status: "ok".into(),
            message: None,
            set: None,
            r1: None,
            r2: None,
            cost: None,
            algorithm_cost: None,
            oracle_cost: None,
            ratio: None,
            certified_bound: None,
            sets_examined: None,
            heuristic_sweep: None,
            timings: None,
        }
    }

    fn infeasible(mut self, message: impl Into<String>) -> Self {
        self.status = "infeasible".into();
        self.message = Some(message.into());
        self
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("record serializes")
    }
}

/// `alg / opt`, with `0 / 0` read as 1.
pub fn ratio(alg: f64, opt: f64) -> Option<f64> {
    if !alg.is_finite() || !opt.is_finite() {
        return None;
    }
    if opt > 0.0 {
        Some(alg / opt)
    } else if alg == 0.0 {
        Some(1.0)
    } else {
        None
    }
}

fn instance_id(path: &Path) -> String {
    path.file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

fn load(path: &Path) -> Result<(Instance, DistanceMatrix), Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))?;
    let inst = parse_instance(&text)
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    let dist = all_pairs_distances(&inst);
    Ok((inst, dist))
}

/// Exact optimum for the given failure count; `alpha == 0` is plain UFL.
pub fn exact_optimum(
    inst: &Instance,
    dist: &DistanceMatrix,
    alpha: usize,
) -> Result<OracleResult, OracleError> {
    match alpha {
        0 => exact_ufl(inst, dist, DEFAULT_EXACT_LIMIT),
        1 => exact_rftfl(inst, dist),
        a => exact_alpha_rftfl(inst, dist, a),
    }
}

/// Dispatches to the solver matching `alpha`.
pub fn solve(
    inst: &Instance,
    dist: &DistanceMatrix,
    alpha: usize,
    s1: &Stage1Solver,
    cap: usize,
) -> Result<SolveReport, SolveError> {
    match alpha {
        0 => solve_ufl(inst, dist, s1),
        1 => solve_rftfl(inst, dist, s1),
        a => solve_alpha_rftfl(inst, dist, s1, a, cap),
    }
}

fn cmd_solve(args: &SolveArgs) -> Result<RunRecord, Failure> {
    let (inst, dist) = load(&args.instance)?;
    let s1 = Stage1Solver::of_kind(args.stage1, args.seed);
    let mut rec = RunRecord::new(&args.instance, "solve", args.alpha);
    rec.stage1 = Some(args.stage1.name().into());
    rec.seed = Some(args.seed);
    rec.cap = Some(args.cap);
    let report = match solve(&inst, &dist, args.alpha, &s1, args.cap) {
        Ok(r) => r,
        Err(e @ SolveError::Infeasible(_)) => return Ok(rec.infeasible(e.to_string())),
        Err(e) => return Err(Failure::input(e.to_string())),
    };
    rec.set = Some(report.final_set.clone());
    rec.r1 = Some(report.r1.clone());
    rec.r2 = Some(report.r2.clone());
    let total = report.cost.total;
    rec.algorithm_cost = Some(total);
    rec.certified_bound = Some(report.certified_ratio);
    rec.heuristic_sweep = Some(report.heuristic_sweep);
    rec.cost = Some(report.cost);
    if args.oracle {
        let opt = exact_optimum(&inst, &dist, args.alpha)
            .map_err(|e| Failure::input(format!("oracle: {e}")))?;
        rec.oracle_cost = Some(opt.best_cost);
        rec.ratio = ratio(total, opt.best_cost);
    }
    if args.timings {
        let ms = |d: std::time::Duration| d.as_secs_f64() * 1e3;
        rec.timings = Some(Timings {
            stage1_ms: ms(report.timings.stage1),
            stage2_ms: ms(report.timings.stage2),
            stage3_ms: ms(report.timings.stage3),
        });
    }
    Ok(rec)
}

fn parse_set(text: &str, n: usize) -> Result<FacilitySet, Failure> {
    let ids = text
        .split(',')
        .map(|t| t.trim())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| Failure::input(format!("invalid node id '{t}'")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let set = FacilitySet::new(ids);
    if set.is_empty() {
        return Err(Failure::input("facility set is empty"));
    }
    set.validate(n).map_err(|e| Failure::input(e.to_string()))?;
    Ok(set)
}

fn cmd_eval(args: &EvalArgs) -> Result<RunRecord, Failure> {
    let (inst, dist) = load(&args.instance)?;
    let set = parse_set(&args.set, inst.n())?;
    let mut rec = RunRecord::new(&args.instance, "eval", args.alpha);
    let cost = if args.alpha == 0 {
        cost_ufl(&inst, &dist, &set).map_err(|e| Failure::input(e.to_string()))?
    } else {
        cost_alpha_rftfl(&inst, &dist, &set, args.alpha)
    };
    rec.set = Some(set.clone());
    if !cost.is_feasible() {
        rec.cost = Some(cost);
        return Ok(rec.infeasible(format!(
            "{set} does not survive {} failure(s)",
            args.alpha
        )));
    }
    rec.algorithm_cost = Some(cost.total);
    rec.cost = Some(cost);
    Ok(rec)
}

fn cmd_oracle(args: &OracleArgs) -> Result<RunRecord, Failure> {
    let (inst, dist) = load(&args.instance)?;
    let rec = RunRecord::new(&args.instance, "oracle", args.alpha);
    match exact_optimum(&inst, &dist, args.alpha) {
        Ok(opt) => Ok(RunRecord {
            set: Some(opt.best_set),
            oracle_cost: Some(opt.best_cost),
            sets_examined: Some(opt.sets_examined),
            ..rec
        }),
        Err(OracleError::Infeasible) => Ok(rec.infeasible("no feasible facility set")),
        Err(e) => Err(Failure::input(e.to_string())),
    }
}

fn cmd_gen(args: &GenArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    let inst = match args.kind {
        GenKind::Random => generate_random_instance(
            args.n,
            args.density,
            args.max_length,
            args.max_demand,
            args.max_cost,
            args.seed,
        ),
        GenKind::Tree => {
            let family = args
                .family
                .ok_or_else(|| Failure::input("gen tree requires --family"))?;
            generate_tree_instance(family, args.n, args.range, args.seed)
        }
    }
    .map_err(|e| Failure::input(e.to_string()))?;
    let text = inst.to_string();
    match &args.out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display()))),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| Failure::input(e.to_string())),
    }
}

/// One bench CSV row.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub instance: String,
    pub n: usize,
    pub m: usize,
    pub alpha: usize,
    pub alg_cost: Option<f64>,
    pub oracle_cost: Option<f64>,
    pub ratio: Option<f64>,
    pub certified_bound: f64,
    pub stage1: String,
    pub runtime_ms: f64,
}

impl BenchRow {
    pub fn to_csv(&self) -> String {
        let opt = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{},{},{:.3}",
            self.instance,
            self.n,
            self.m,
            self.alpha,
            opt(self.alg_cost),
            opt(self.oracle_cost),
            opt(self.ratio),
            self.certified_bound,
            self.stage1,
            self.runtime_ms
        )
    }
}

fn bench_one(
    name: String,
    inst: &Instance,
    args: &BenchArgs,
    s1: &Stage1Solver,
) -> Result<BenchRow, Failure> {
    let dist = all_pairs_distances(inst);
    let t = Instant::now();
    let solved = solve(inst, &dist, args.alpha, s1, args.cap);
    let runtime_ms = t.elapsed().as_secs_f64() * 1e3;
    let certified_bound = match args.alpha {
        0 => s1.ratio,
        1 => crate::pipeline::single_failure_bound(s1.ratio),
        a => crate::pipeline::alpha_failure_bound(s1.ratio, a),
    };
    let alg_cost = match solved {
        Ok(r) => Some(r.cost.total),
        Err(SolveError::Infeasible(_)) => None,
        Err(e) => return Err(Failure::input(format!("{name}: {e}"))),
    };
    let oracle_cost = if inst.n() <= args.oracle_limit {
        exact_optimum(inst, &dist, args.alpha)
            .ok()
            .map(|o| o.best_cost)
    } else {
        None
    };
    let ratio = alg_cost.zip(oracle_cost).and_then(|(a, o)| ratio(a, o));
    Ok(BenchRow {
        instance: name,
        n: inst.n(),
        m: inst.edges().len(),
        alpha: args.alpha,
        alg_cost,
        oracle_cost,
        ratio,
        certified_bound,
        stage1: s1.kind.name().into(),
        runtime_ms,
    })
}

fn cmd_bench(args: &BenchArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    let mut files: Vec<PathBuf> = fs::read_dir(&args.corpus)
        .map_err(|e| Failure::input(format!("cannot read {}: {e}", args.corpus.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file())
        .collect();
    files.sort_by_key(|p| p.file_name().map(|s| s.to_os_string()));
    let mut loaded = Vec::with_capacity(files.len());
    for path in &files {
        let text = fs::read_to_string(path)
            .map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))?;
        let inst = parse_instance(&text)
            .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
        loaded.push((instance_id(path), inst));
    }
    let s1 = Stage1Solver::of_kind(args.stage1, args.seed);
    let rows = par::map_slice(&loaded, |(name, inst)| bench_one(name.clone(), inst, args, &s1));
    let mut csv = String::from(BENCH_HEADER);
    csv.push('\n');
    for row in rows {
        csv.push_str(&row?.to_csv());
        csv.push('\n');
    }
    match &args.out {
        Some(path) => fs::write(path, csv)
            .map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display()))),
        None => stdout
            .write_all(csv.as_bytes())
            .map_err(|e| Failure::input(e.to_string())),
    }
}

fn emit(rec: RunRecord, stdout: &mut dyn Write) -> i32 {
    let code = if rec.status == "ok" { EXIT_OK } else { EXIT_INFEASIBLE };
    if writeln!(stdout, "{}", rec.to_json_line()).is_err() {
        return EXIT_INPUT;
    }
    code
}

/// Runs the CLI on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{e}");
                    EXIT_INPUT
                }
            };
        }
    };
    let result = match &cli.command {
        Command::Solve(a) => cmd_solve(a).map(|r| emit(r, stdout)),
        Command::Eval(a) => cmd_eval(a).map(|r| emit(r, stdout)),
        Command::Oracle(a) => cmd_oracle(a).map(|r| emit(r, stdout)),
        Command::Gen(a) => cmd_gen(a, stdout).map(|_| EXIT_OK),
        Command::Bench(a) => cmd_bench(a, stdout).map(|_| EXIT_OK),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}
