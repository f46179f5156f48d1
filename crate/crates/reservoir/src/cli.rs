//! Command-line front end.
//!
//! Exit codes: 0 optimal, 1 usage or I/O error, 2 infeasible,
//! 3 unbounded, 4 iteration limit.

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use reservoir_core::formulation::{build, extract_plan, FormulationError, Method};
use reservoir_core::lp::{self, LpError, Status};
use reservoir_core::model::{Plan, RealizationMode, Scenario};
use reservoir_core::scenarios::{SweepConfig, SweepParameter};
use reservoir_core::simulation::{ProfitBreakdown, SimulationReport};
use serde::{Deserialize, Serialize};

use crate::mps::{parse_mps, write_mps};
use crate::parallel::{compare, run_monte_carlo, run_sweep, Comparison, MethodRun, SweepRunError};
use crate::report::{
    csv_document, json_document, num, write_atomic, OwnedEnvelope, RunManifest, SweepManifest,
};
use crate::scenario_file::{resolve_scenario, save_scenario, ScenarioFileError};
use crate::sweep_file::{load_sweep, SweepFileError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;
pub const EXIT_UNBOUNDED: i32 = 3;
pub const EXIT_ITERATION_LIMIT: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "reservoir",
    version,
    about = "Risk-aware demand-supply planning for reservoir networks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute a plan and write transfers, releases and a JSON twin.
    Plan(PlanArgs),
    /// Monte Carlo evaluation of a saved plan.
    Evaluate(EvaluateArgs),
    /// Plan with both methods and evaluate them on shared inflow samples.
    Compare(CompareArgs),
    /// Sensitivity sweep over one parameter.
    Sweep(SweepArgs),
    /// Solve an MPS file and print the solution.
    SolveLp(SolveLpArgs),
    /// Write a scenario (for example a built-in one) as a TOML file.
    Export(ExportArgs),
    /// Load and validate a scenario.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Proposed,
    Deterministic,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::Proposed => Method::Proposed,
            MethodArg::Deterministic => Method::Deterministic,
        }
    }
}

#[derive(Debug, Args)]
pub struct ScenarioArgs {
    /// Scenario file or `builtin:<name>` (simple1, simple2, angpuang).
    #[arg(long)]
    pub scenario: String,
    /// Overflow penalty for every reservoir and period.
    #[arg(long = "big-f")]
    pub big_f: Option<f64>,
    /// Cap realized volumes at capacity and floor realized releases at zero.
    #[arg(long = "physical-sim")]
    pub physical_sim: bool,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, default_value = "results")]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SimArgs {
    #[arg(long, default_value_t = 100)]
    pub reps: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct PlanArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    #[arg(long, value_enum, default_value = "proposed")]
    pub method: MethodArg,
    #[command(flatten)]
    pub output: OutputArgs,
    /// Also write the linear program as free-format MPS.
    #[arg(long = "dump-lp")]
    pub dump_lp: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    /// `plan.json` written by the plan command.
    #[arg(long)]
    pub plan: PathBuf,
    #[command(flatten)]
    pub sim: SimArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    #[command(flatten)]
    pub sim: SimArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Sweep file; the flags below override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Scenario file or `builtin:<name>`.
    #[arg(long)]
    pub scenario: Option<String>,
    #[arg(long)]
    pub parameter: Option<SweepParameter>,
    #[arg(long, value_delimiter = ',')]
    pub grid: Option<Vec<f64>>,
    #[arg(long)]
    pub reps: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long = "big-f")]
    pub big_f: Option<f64>,
    #[arg(long = "physical-sim")]
    pub physical_sim: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SolveLpArgs {
    pub file: PathBuf,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    #[arg(long)]
    pub scenario: String,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long)]
    pub scenario: String,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Scenario(#[from] ScenarioFileError),
    #[error(transparent)]
    Sweep(#[from] SweepFileError),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Formulation(#[from] FormulationError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        let solver = |e: &FormulationError| match e {
            FormulationError::NotOptimal(Status::Infeasible) => EXIT_INFEASIBLE,
            FormulationError::NotOptimal(Status::Unbounded) => EXIT_UNBOUNDED,
            FormulationError::Solver(LpError::IterationLimit { .. }) => EXIT_ITERATION_LIMIT,
            _ => EXIT_USAGE,
        };
        match self {
            CliError::Formulation(e) => solver(e),
            _ => EXIT_USAGE,
        }
    }
}

impl From<SweepRunError> for CliError {
    fn from(e: SweepRunError) -> Self {
        match e {
            SweepRunError::Config(c) => CliError::Usage(c.to_string()),
            SweepRunError::Plan { source, .. } => CliError::Formulation(source),
        }
    }
}

/// Parse arguments and run; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let started = Instant::now();
    let mut manifest = None;
    let result = run(cli.command, &mut manifest);
    eprintln!("elapsed: {:.3} s", started.elapsed().as_secs_f64());
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if let Some(m) = manifest {
                eprintln!("manifest: {}", m.to_json_line());
            }
            e.exit_code()
        }
    }
}

fn run(command: Command, manifest: &mut Option<RunManifest>) -> Result<i32, CliError> {
    match command {
        Command::Plan(a) => cmd_plan(a, manifest),
        Command::Evaluate(a) => cmd_evaluate(a, manifest),
        Command::Compare(a) => cmd_compare(a, manifest),
        Command::Sweep(a) => cmd_sweep(a, manifest),
        Command::SolveLp(a) => cmd_solve_lp(a),
        Command::Export(a) => {
            let s = resolve_scenario(&a.scenario)?;
            save_scenario(&s, &a.out)?;
            println!("wrote {}", a.out.display());
            Ok(EXIT_OK)
        }
        Command::Validate(a) => {
            let s = resolve_scenario(&a.scenario)?;
            println!(
                "{}: valid ({} reservoirs, {} links, {} periods)",
                s.name,
                s.num_reservoirs(),
                s.links.len(),
                s.horizon()
            );
            Ok(EXIT_OK)
        }
    }
}

fn apply_overrides(s: &mut Scenario, big_f: Option<f64>, physical: bool) -> Result<(), CliError> {
    if let Some(f) = big_f {
        if !(f.is_finite() && f > 0.0) {
            return Err(CliError::Usage(format!(
                "--big-f must be positive and finite, got {f}"
            )));
        }
        s.default_penalty = Some(f);
        for node in s.nodes.iter_mut().flatten() {
            node.penalty = None;
        }
    }
    if physical {
        s.realization = RealizationMode::Physical;
    }
    Ok(())
}

fn load(args: &ScenarioArgs) -> Result<Scenario, CliError> {
    let mut s = resolve_scenario(&args.scenario)?;
    apply_overrides(&mut s, args.big_f, args.physical_sim)?;
    Ok(s)
}

fn base_manifest(command: &str, args: &ScenarioArgs) -> RunManifest {
    let mut m = RunManifest::new(command, &args.scenario);
    m.big_f = args.big_f;
    m.physical_sim = args.physical_sim;
    m
}

fn emit(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    write_atomic(path, bytes).map_err(|source| CliError::Io {
        path: path.into(),
        source,
    })
}

fn display(p: &Path) -> String {
    p.display().to_string()
}

/// Contents of `plan.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanDocument {
    pub scenario: String,
    pub method: Method,
    pub status: Status,
    pub objective: f64,
    pub lp_variables: usize,
    pub lp_constraints: usize,
    pub iterations: usize,
    pub plan: Plan,
}

fn cmd_plan(a: PlanArgs, manifest: &mut Option<RunManifest>) -> Result<i32, CliError> {
    let method: Method = a.method.into();
    let mut m = base_manifest("plan", &a.scenario);
    m.method = Some(method.to_string());
    let out = &a.output.out;
    let transfers = out.join("transfers.csv");
    let releases = out.join("releases.csv");
    let json = out.join("plan.json");
    if a.output.format == Format::Csv {
        m.outputs.extend([display(&transfers), display(&releases)]);
    }
    m.outputs.push(display(&json));
    if let Some(d) = &a.dump_lp {
        m.outputs.push(display(d));
    }
    *manifest = Some(m.clone());

    let s = load(&a.scenario)?;
    let (problem, map) = build(&s, method)?;
    if let Some(d) = &a.dump_lp {
        emit(d, write_mps(&problem, &s.name).as_bytes())?;
    }
    let sol = lp::solve(&problem).map_err(FormulationError::from)?;
    let plan = extract_plan(&sol, &map, &s)?;
    println!(
        "{} {}: optimal, objective {} ({} variables, {} constraints, {} iterations)",
        s.name,
        method,
        plan.planner_objective,
        problem.num_variables(),
        problem.num_constraints(),
        sol.iterations
    );

    if a.output.format == Format::Csv {
        let plan = &plan;
        let rows = (0..s.horizon()).flat_map(|t| {
            s.links.iter().enumerate().map(move |(l, link)| {
                vec![
                    (t + 1).to_string(),
                    (link.from + 1).to_string(),
                    (link.to + 1).to_string(),
                    num(plan.q[t][l]),
                ]
            })
        });
        emit(
            &transfers,
            &csv_document(&m, &["t", "from", "to", "q"], rows),
        )?;
        let rows = (0..s.horizon()).flat_map(|t| {
            (0..s.num_reservoirs()).map(move |n| {
                vec![
                    (t + 1).to_string(),
                    (n + 1).to_string(),
                    num(plan.g[t][n]),
                    num(plan.x[t][n]),
                    num(plan.v[t][n]),
                ]
            })
        });
        emit(
            &releases,
            &csv_document(&m, &["t", "n", "g", "x", "v"], rows),
        )?;
    }
    let doc = PlanDocument {
        scenario: s.name.clone(),
        method,
        status: sol.status,
        objective: plan.planner_objective,
        lp_variables: problem.num_variables(),
        lp_constraints: problem.num_constraints(),
        iterations: sol.iterations,
        plan,
    };
    emit(&json, &json_document(&m, &doc))?;
    Ok(EXIT_OK)
}

fn breakdown_row(label: String, b: &ProfitBreakdown) -> Vec<String> {
    vec![
        label,
        num(b.release),
        num(b.transfer),
        num(b.risk),
        num(b.total),
    ]
}

/// Column-wise mean and sample standard deviation of the breakdowns.
fn aggregate(r: &SimulationReport) -> (ProfitBreakdown, ProfitBreakdown) {
    use reservoir_core::simulation::mean_std;
    let col = |f: fn(&ProfitBreakdown) -> f64| mean_std(r.replications.iter().map(f));
    let (rm, rs) = col(|b| b.release);
    let (tm, ts) = col(|b| b.transfer);
    let (km, ks) = col(|b| b.risk);
    (
        ProfitBreakdown {
            release: rm,
            transfer: tm,
            risk: km,
            total: r.mean_total,
        },
        ProfitBreakdown {
            release: rs,
            transfer: ts,
            risk: ks,
            total: r.std_total,
        },
    )
}

#[derive(Serialize)]
struct EvaluationDocument<'a> {
    scenario: &'a str,
    replications: &'a [ProfitBreakdown],
    mean: ProfitBreakdown,
    std: ProfitBreakdown,
}

fn cmd_evaluate(a: EvaluateArgs, manifest: &mut Option<RunManifest>) -> Result<i32, CliError> {
    let mut m = base_manifest("evaluate", &a.scenario);
    m.seed = Some(a.sim.seed);
    m.replications = Some(a.sim.reps);
    let path = a.output.out.join(match a.output.format {
        Format::Csv => "evaluation.csv",
        Format::Json => "evaluation.json",
    });
    m.outputs.push(display(&path));
    *manifest = Some(m.clone());
    if a.sim.reps == 0 {
        return Err(CliError::Usage("--reps must be at least 1".into()));
    }

    let s = load(&a.scenario)?;
    let text = std::fs::read_to_string(&a.plan)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", a.plan.display())))?;
    let doc: OwnedEnvelope<PlanDocument> = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("{} is not a plan file: {e}", a.plan.display())))?;
    let plan = doc.result.plan;
    if !plan.matches(&s) {
        return Err(CliError::Usage(format!(
            "plan dimensions do not match scenario `{}` ({} periods, {} reservoirs, {} links)",
            s.name,
            s.horizon(),
            s.num_reservoirs(),
            s.links.len()
        )));
    }
    m.method = Some(doc.result.method.to_string());
    *manifest = Some(m.clone());

    let report = run_monte_carlo(&plan, &s, a.sim.reps, a.sim.seed);
    let (mean, std) = aggregate(&report);
    println!(
        "{}: mean total {} (std {}) over {} replications",
        s.name, mean.total, std.total, a.sim.reps
    );
    let bytes = match a.output.format {
        Format::Csv => {
            let rows = report
                .replications
                .iter()
                .enumerate()
                .map(|(i, b)| breakdown_row((i + 1).to_string(), b))
                .chain([
                    breakdown_row("mean".into(), &mean),
                    breakdown_row("std".into(), &std),
                ]);
            csv_document(&m, &["rep", "release", "transfer", "risk", "total"], rows)
        }
        Format::Json => json_document(
            &m,
            &EvaluationDocument {
                scenario: &s.name,
                replications: &report.replications,
                mean,
                std,
            },
        ),
    };
    emit(&path, &bytes)?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct MethodSummary {
    method: Method,
    mean_total: f64,
    std_total: f64,
    mean_release: f64,
    mean_transfer: f64,
    mean_risk: f64,
    std_risk: f64,
    planner_objective: f64,
    planned_transfer: f64,
}

impl From<&MethodRun> for MethodSummary {
    fn from(r: &MethodRun) -> Self {
        MethodSummary {
            method: r.method,
            mean_total: r.report.mean_total,
            std_total: r.report.std_total,
            mean_release: r.report.mean_release(),
            mean_transfer: r.report.mean_transfer(),
            mean_risk: r.report.mean_risk,
            std_risk: r.report.std_risk,
            planner_objective: r.plan.planner_objective,
            planned_transfer: r.plan.total_transfer(),
        }
    }
}

#[derive(Serialize)]
struct DifferenceSummary {
    mean: f64,
    std: f64,
    standard_error: f64,
}

#[derive(Serialize)]
struct ComparisonDocument<'a> {
    scenario: &'a str,
    methods: [MethodSummary; 2],
    /// Proposed minus deterministic.
    paired_difference: DifferenceSummary,
}

const COMPARE_HEADER: [&str; 10] = [
    "method",
    "mean_total",
    "std_total",
    "mean_release",
    "mean_transfer",
    "mean_risk",
    "std_risk",
    "planner_objective",
    "planned_transfer",
    "standard_error",
];

fn comparison_document<'a>(name: &'a str, c: &Comparison) -> ComparisonDocument<'a> {
    ComparisonDocument {
        scenario: name,
        methods: [(&c.proposed).into(), (&c.deterministic).into()],
        paired_difference: DifferenceSummary {
            mean: c.difference.mean,
            std: c.difference.std,
            standard_error: c.difference.standard_error,
        },
    }
}

fn cmd_compare(a: CompareArgs, manifest: &mut Option<RunManifest>) -> Result<i32, CliError> {
    let mut m = base_manifest("compare", &a.scenario);
    m.seed = Some(a.sim.seed);
    m.replications = Some(a.sim.reps);
    m.sampling = Some("paired".into());
    let path = a.output.out.join(match a.output.format {
        Format::Csv => "comparison.csv",
        Format::Json => "comparison.json",
    });
    m.outputs.push(display(&path));
    *manifest = Some(m.clone());
    if a.sim.reps == 0 {
        return Err(CliError::Usage("--reps must be at least 1".into()));
    }
    let s = load(&a.scenario)?;
    let c = compare(&s, a.sim.reps, a.sim.seed)?;
    println!(
        "{}: proposed {} (std {}), deterministic {} (std {}), difference {} (se {})",
        s.name,
        c.proposed.report.mean_total,
        c.proposed.report.std_total,
        c.deterministic.report.mean_total,
        c.deterministic.report.std_total,
        c.difference.mean,
        c.difference.standard_error
    );
    let doc = comparison_document(&s.name, &c);
    let bytes = match a.output.format {
        Format::Csv => {
            let mut rows: Vec<Vec<String>> = doc
                .methods
                .iter()
                .map(|r| {
                    vec![
                        r.method.to_string(),
                        num(r.mean_total),
                        num(r.std_total),
                        num(r.mean_release),
                        num(r.mean_transfer),
                        num(r.mean_risk),
                        num(r.std_risk),
                        num(r.planner_objective),
                        num(r.planned_transfer),
                        String::new(),
                    ]
                })
                .collect();
            let d = &doc.paired_difference;
            let mut diff = vec!["difference".to_string(), num(d.mean), num(d.std)];
            diff.extend(std::iter::repeat_n(String::new(), 6));
            diff.push(num(d.standard_error));
            rows.push(diff);
            csv_document(&m, &COMPARE_HEADER, rows)
        }
        Format::Json => json_document(&m, &doc),
    };
    emit(&path, &bytes)?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct SweepRow {
    parameter: SweepParameter,
    value: f64,
    method: Method,
    mean: f64,
    std: f64,
    mean_risk: f64,
    planned_transfer: f64,
    planner_objective: f64,
}

const SWEEP_HEADER: [&str; 8] = [
    "parameter",
    "value",
    "method",
    "mean",
    "std",
    "mean_risk",
    "planned_transfer",
    "planner_objective",
];

fn cmd_sweep(a: SweepArgs, manifest: &mut Option<RunManifest>) -> Result<i32, CliError> {
    let (mut config, base_dir) = match &a.config {
        Some(path) => (load_sweep(path)?, path.parent().map(Path::to_path_buf)),
        None => {
            let missing =
                |flag: &str| CliError::Usage(format!("{flag} is required without --config"));
            let config = SweepConfig {
                base: a.scenario.clone().ok_or_else(|| missing("--scenario"))?,
                parameter: a.parameter.ok_or_else(|| missing("--parameter"))?,
                grid: a.grid.clone().ok_or_else(|| missing("--grid"))?,
                replications: 100,
                seed: 0,
            };
            (config, None)
        }
    };
    if let Some(s) = &a.scenario {
        config.base.clone_from(s);
    }
    if let Some(p) = a.parameter {
        config.parameter = p;
    }
    if let Some(g) = &a.grid {
        config.grid.clone_from(g);
    }
    if let Some(r) = a.reps {
        config.replications = r;
    }
    if let Some(seed) = a.seed {
        config.seed = seed;
    }

    let mut m = RunManifest::new("sweep", &config.base);
    m.seed = Some(config.seed);
    m.replications = Some(config.replications);
    m.big_f = a.big_f;
    m.physical_sim = a.physical_sim;
    m.sampling = Some("paired".into());
    m.sweep = Some(SweepManifest {
        parameter: config.parameter.to_string(),
        grid: config.grid.clone(),
    });
    let path = a.output.out.join(match a.output.format {
        Format::Csv => "sweep.csv",
        Format::Json => "sweep.json",
    });
    m.outputs.push(display(&path));
    *manifest = Some(m.clone());
    config.check().map_err(|e| CliError::Usage(e.to_string()))?;

    // scenario paths in a sweep file are relative to that file
    let reference = match (&base_dir, config.base.starts_with("builtin:")) {
        (Some(dir), false) if Path::new(&config.base).is_relative() && a.scenario.is_none() => {
            dir.join(&config.base).display().to_string()
        }
        _ => config.base.clone(),
    };
    let mut base = resolve_scenario(&reference)?;
    apply_overrides(&mut base, a.big_f, a.physical_sim)?;
    let points = run_sweep(&base, &config)?;

    let rows: Vec<SweepRow> = points
        .iter()
        .flat_map(|p| {
            [&p.comparison.proposed, &p.comparison.deterministic].map(|r| SweepRow {
                parameter: config.parameter,
                value: p.value,
                method: r.method,
                mean: r.report.mean_total,
                std: r.report.std_total,
                mean_risk: r.report.mean_risk,
                planned_transfer: r.plan.total_transfer(),
                planner_objective: r.plan.planner_objective,
            })
        })
        .collect();
    for r in &rows {
        println!(
            "{} = {} {}: mean {} (std {})",
            r.parameter, r.value, r.method, r.mean, r.std
        );
    }
    let bytes = match a.output.format {
        Format::Csv => csv_document(
            &m,
            &SWEEP_HEADER,
            rows.iter().map(|r| {
                vec![
                    r.parameter.to_string(),
                    num(r.value),
                    r.method.to_string(),
                    num(r.mean),
                    num(r.std),
                    num(r.mean_risk),
                    num(r.planned_transfer),
                    num(r.planner_objective),
                ]
            }),
        ),
        Format::Json => json_document(&m, &rows),
    };
    emit(&path, &bytes)?;
    Ok(EXIT_OK)
}

fn cmd_solve_lp(a: SolveLpArgs) -> Result<i32, CliError> {
    let text = std::fs::read_to_string(&a.file)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", a.file.display())))?;
    let problem =
        parse_mps(&text).map_err(|e| CliError::Usage(format!("{}: {e}", a.file.display())))?;
    let sol = lp::solve(&problem).map_err(FormulationError::from)?;
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let _ = writeln!(out, "status: {}", sol.status);
    let _ = writeln!(out, "iterations: {}", sol.iterations);
    if sol.status == Status::Optimal {
        let _ = writeln!(out, "objective: {}", sol.objective);
        for (v, &x) in problem.variables.iter().zip(&sol.values) {
            if x != 0.0 {
                let _ = writeln!(out, "{} = {}", v.name, x);
            }
        }
    }
    Ok(match sol.status {
        Status::Optimal => EXIT_OK,
        Status::Infeasible => EXIT_INFEASIBLE,
        Status::Unbounded => EXIT_UNBOUNDED,
    })
}
