#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod emit;
mod source;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use bosegraph::observables::dimer_variance_derivative;
use bosegraph::sweep::sweep_taus;
use bosegraph::{
    complete_graph, dimension, dimer, dimer_analytic, find_derivative_peak, find_entanglement_max,
    ordering_report, sweep, Couplings, DerivativeOf, Execution, RootedGraph, SolverMethod,
    SolverOptions, SpectrumReport, TauGrid, CATALOG_IDS,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use emit::{deliver, json, sweep_csv};
use source::load_graph;

#[derive(Parser)]
#[command(name = "bosegraph", version, about = "Ground-state mode entanglement of bosons on small graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve over a tau grid and emit one row per grid point.
    Sweep(SweepArgs),
    /// Locate the maximum of the root entanglement over a tau range.
    Argmax(ArgmaxArgs),
    /// Adjacency spectrum of a graph and of its root-deleted sub-graph.
    Spectrum(SpectrumArgs),
    /// Rank catalog graphs by entanglement and by spectral radius.
    Order(OrderArgs),
    /// Compare the two-site numerics against the closed-form solution.
    DimerCheck(DimerCheckArgs),
    /// List the built-in catalog graphs.
    Catalog(CatalogArgs),
    /// Sweep complete graphs K_L at unit filling, one CSV per L.
    CompleteScan(CompleteScanArgs),
}

#[derive(Args)]
struct ModelArgs {
    /// catalog:<id> | file:<path> | complete:<L> | pendant:<L> | dimer
    #[arg(long)]
    graph: String,
    /// Particle number; defaults to the vertex count.
    #[arg(long)]
    particles: Option<usize>,
    #[arg(long, default_value_t = 1.0)]
    epsilon: f64,
}

#[derive(Args)]
struct GridArgs {
    #[arg(long)]
    tau_min: Option<f64>,
    #[arg(long)]
    tau_max: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
}

impl GridArgs {
    fn resolve(&self, tau_max: f64, steps: usize) -> Result<TauGrid> {
        Ok(TauGrid::new(
            self.tau_min.unwrap_or(0.0),
            self.tau_max.unwrap_or(tau_max),
            self.steps.unwrap_or(steps),
        )?)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SolverArg {
    Auto,
    Dense,
    Lanczos,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct SolverArgs {
    #[arg(long, value_enum, default_value_t = SolverArg::Auto)]
    solver: SolverArg,
    /// Residual bound for ground-state solves.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
}

fn solver_options(solver: SolverArg, tol: f64) -> Result<SolverOptions> {
    let method = match solver {
        SolverArg::Auto => SolverMethod::Auto,
        SolverArg::Dense => SolverMethod::Dense,
        SolverArg::Lanczos => SolverMethod::Lanczos,
    };
    let opts = SolverOptions {
        tolerance: tol,
        ..SolverOptions::default().with_method(method)
    };
    opts.validate()?;
    Ok(opts)
}

impl SolverArgs {
    fn options(&self) -> Result<SolverOptions> {
        solver_options(self.solver, self.tol)
    }
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    grid: GridArgs,
    #[command(flatten)]
    solver: SolverArgs,
    /// Solve grid points concurrently instead of warm-starting in order.
    #[arg(long)]
    parallel: bool,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ArgmaxArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, default_value_t = 0.0)]
    tau_min: f64,
    #[arg(long, default_value_t = 20.0)]
    tau_max: f64,
    /// Width of the final bracket around the maximum.
    #[arg(long, default_value_t = 1e-3)]
    search_tol: f64,
    #[command(flatten)]
    solver: SolverArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SpectrumArgs {
    #[arg(long)]
    graph: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct OrderArgs {
    #[arg(long, value_delimiter = ',', default_values_t = CATALOG_IDS.collect::<Vec<_>>())]
    ids: Vec<u32>,
    #[arg(long, value_delimiter = ',', default_values_t = [0.1, 20.0])]
    taus: Vec<f64>,
    #[arg(long, default_value_t = 4)]
    particles: usize,
    #[arg(long, default_value_t = 1.0)]
    epsilon: f64,
    #[command(flatten)]
    solver: SolverArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DimerCheckArgs {
    #[arg(long, default_value_t = 1.0)]
    epsilon: f64,
    /// Largest accepted deviation between numerics and the closed form.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, value_enum, default_value_t = SolverArg::Auto)]
    solver: SolverArg,
}

#[derive(Args)]
struct CatalogArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args)]
struct CompleteScanArgs {
    #[arg(long, value_delimiter = ',', default_values_t = [3usize, 4, 5, 6, 7])]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 1.0)]
    epsilon: f64,
    #[command(flatten)]
    grid: GridArgs,
    #[command(flatten)]
    solver: SolverArgs,
    #[arg(long)]
    parallel: bool,
    #[arg(long)]
    out_dir: PathBuf,
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    Couplings::allow_zero(0.0, epsilon)?;
    Ok(())
}

fn particles_for(graph: &RootedGraph, requested: Option<usize>) -> Result<usize> {
    let n = requested.unwrap_or(graph.vertices());
    if n == 0 {
        bail!("--particles must be at least 1");
    }
    dimension(graph.vertices(), n)?;
    Ok(n)
}

fn execution(parallel: bool) -> Execution {
    if parallel {
        Execution::Parallel
    } else {
        Execution::Serial
    }
}

fn cmd_sweep(a: SweepArgs) -> Result<()> {
    let graph = load_graph(&a.model.graph)?;
    let particles = particles_for(&graph, a.model.particles)?;
    check_epsilon(a.model.epsilon)?;
    let grid = a.grid.resolve(20.0, 401)?;
    let opts = a.solver.options()?;

    let result = sweep(&graph, particles, a.model.epsilon, &grid, &opts, execution(a.parallel))?;
    let flagged = result.points.iter().filter(|p| p.degenerate).count();
    if flagged > 0 {
        eprintln!("warning: {flagged} grid points have a near-degenerate ground state");
    }
    let text = match a.format {
        Format::Csv => sweep_csv(&result),
        Format::Json => json(&result)?,
    };
    deliver(&text, a.out.as_deref())
}

#[derive(Serialize)]
struct ArgmaxOutput {
    graph: String,
    particles: usize,
    epsilon: f64,
    tau_min: f64,
    tau_max: f64,
    tau_star: f64,
    #[serde(rename = "E_star")]
    e_star: f64,
    interior: bool,
}

fn cmd_argmax(a: ArgmaxArgs) -> Result<()> {
    let graph = load_graph(&a.model.graph)?;
    let particles = particles_for(&graph, a.model.particles)?;
    check_epsilon(a.model.epsilon)?;
    TauGrid::new(a.tau_min, a.tau_max, 2)?;
    if !(a.search_tol > 0.0) {
        bail!("--search-tol must be positive");
    }
    let opts = a.solver.options()?;

    let m = find_entanglement_max(
        &graph,
        particles,
        a.model.epsilon,
        (a.tau_min, a.tau_max),
        a.search_tol,
        &opts,
    )?;
    let out = ArgmaxOutput {
        graph: graph.name().to_string(),
        particles,
        epsilon: a.model.epsilon,
        tau_min: a.tau_min,
        tau_max: a.tau_max,
        tau_star: m.tau_star,
        e_star: m.e_star,
        interior: m.interior,
    };
    deliver(&json(&out)?, a.out.as_deref())
}

#[derive(Serialize)]
struct SpectrumOutput {
    name: String,
    graph: SpectrumReport,
    subgraph: SpectrumReport,
}

fn cmd_spectrum(a: SpectrumArgs) -> Result<()> {
    let graph = load_graph(&a.graph)?;
    let sub = graph
        .subgraph_without_root()
        .context("graph has no sub-graph once the root is removed")?;
    let out = SpectrumOutput {
        name: graph.name().to_string(),
        graph: graph.adjacency_spectrum(),
        subgraph: sub.adjacency_spectrum(),
    };
    deliver(&json(&out)?, a.out.as_deref())
}

fn cmd_order(a: OrderArgs) -> Result<()> {
    for &id in &a.ids {
        if !CATALOG_IDS.contains(&id) {
            bail!("catalog id {id} outside {}..={}", CATALOG_IDS.start(), CATALOG_IDS.end());
        }
    }
    if a.ids.is_empty() || a.taus.is_empty() {
        bail!("--ids and --taus must be non-empty");
    }
    if a.particles == 0 {
        bail!("--particles must be at least 1");
    }
    for &tau in &a.taus {
        Couplings::allow_zero(tau, a.epsilon)?;
    }
    let opts = a.solver.options()?;

    let reports = a
        .taus
        .iter()
        .map(|&tau| ordering_report(&a.ids, a.particles, a.epsilon, tau, &opts))
        .collect::<bosegraph::Result<Vec<_>>>()?;
    deliver(&json(&reports)?, a.out.as_deref())
}

const DIMER_POINTS: usize = 50;
const PEAK_STEPS: usize = 801;
const PEAK_TOL: f64 = 1e-3;

struct Check {
    name: String,
    pass: bool,
    detail: String,
}

fn cmd_dimer_check(a: DimerCheckArgs) -> Result<bool> {
    if !(a.epsilon > 0.0) || !a.epsilon.is_finite() {
        bail!("--epsilon must be positive for the dimer check");
    }
    if !(a.tol > 0.0) {
        bail!("--tol must be positive");
    }
    let opts = solver_options(a.solver, SolverOptions::default().tolerance)?;
    let eps = a.epsilon;
    let g = dimer();

    let taus: Vec<f64> = (0..DIMER_POINTS)
        .map(|i| 20.0 * eps * i as f64 / (DIMER_POINTS - 1) as f64)
        .collect();
    let numeric = sweep_taus(&g, 2, eps, &taus, &opts, Execution::Serial)?;
    let (mut de, mut dent, mut dvar) = (0f64, 0f64, 0f64);
    for (p, &tau) in numeric.iter().zip(&taus) {
        let exact = dimer_analytic(tau, eps)?;
        de = de.max((p.energy - exact.energy).abs());
        dent = dent.max((p.entanglement - exact.entanglement.normalized).abs());
        dvar = dvar.max((p.variances[0] - exact.variance).abs());
    }
    let mut checks: Vec<Check> = [("energy", de), ("entanglement", dent), ("variance", dvar)]
        .into_iter()
        .map(|(name, dev)| Check {
            name: format!("{name} at {DIMER_POINTS} points"),
            pass: dev <= a.tol,
            detail: format!("max deviation {dev:.3e} (tol {:.1e})", a.tol),
        })
        .collect();

    let expected = eps / (2.0 * 2f64.sqrt());
    let grid = TauGrid::new(0.0, 2.0 * eps, PEAK_STEPS)?;
    let series = sweep(&g, 2, eps, &grid, &opts, Execution::Serial)?;
    match find_derivative_peak(&series, DerivativeOf::Variance, 0) {
        Ok(peak) => {
            let height = dimer_variance_derivative(expected, eps);
            checks.push(Check {
                name: "variance derivative peak location".into(),
                pass: (peak.tau - expected).abs() <= PEAK_TOL,
                detail: format!("tau = {:.5} (expected {expected:.5} +/- {PEAK_TOL:.0e})", peak.tau),
            });
            checks.push(Check {
                name: "variance derivative peak height".into(),
                pass: (peak.height - height).abs() <= PEAK_TOL,
                detail: format!("{:.5} (expected {height:.5} +/- {PEAK_TOL:.0e})", peak.height),
            });
        }
        Err(e) => checks.push(Check {
            name: "variance derivative peak location".into(),
            pass: false,
            detail: e.to_string(),
        }),
    }

    for c in &checks {
        println!("[{}] {}: {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    Ok(checks.iter().all(|c| c.pass))
}

#[derive(Serialize)]
struct CatalogEntry {
    id: u32,
    name: String,
    vertices: usize,
    edges: Vec<(usize, usize)>,
}

fn cmd_catalog(a: CatalogArgs) -> Result<()> {
    let entries = CATALOG_IDS
        .map(|id| {
            let g = bosegraph::catalog_graph(id)?;
            Ok(CatalogEntry {
                id,
                name: g.name().to_string(),
                vertices: g.vertices(),
                edges: g.edges().to_vec(),
            })
        })
        .collect::<bosegraph::Result<Vec<_>>>()?;
    let text = match a.format {
        Format::Json => json(&entries)?,
        Format::Csv => {
            let mut s = String::from("id,name,vertices,edges\n");
            for e in &entries {
                let edges: Vec<String> = e.edges.iter().map(|(u, v)| format!("{u}-{v}")).collect();
                s += &format!("{},{},{},{}\n", e.id, e.name, e.vertices, edges.join(" "));
            }
            s
        }
    };
    deliver(&text, None)
}

#[derive(Serialize)]
struct ScanSummary {
    vertices: usize,
    particles: usize,
    dimension: usize,
    csv: String,
    entanglement_increasing: bool,
    variance_peak_tau: Option<f64>,
    variance_peak_height: Option<f64>,
}

fn cmd_complete_scan(a: CompleteScanArgs) -> Result<()> {
    if a.sizes.is_empty() {
        bail!("--sizes must be non-empty");
    }
    let graphs = a
        .sizes
        .iter()
        .map(|&l| {
            let g = complete_graph(l)?;
            dimension(l, l)?;
            Ok(g)
        })
        .collect::<Result<Vec<_>>>()?;
    check_epsilon(a.epsilon)?;
    let grid = a.grid.resolve(1.0, 201)?;
    let opts = a.solver.options()?;
    if a.out_dir.exists() && !a.out_dir.is_dir() {
        bail!("{} exists and is not a directory", a.out_dir.display());
    }

    let mut files = Vec::new();
    let mut summary = Vec::new();
    for g in &graphs {
        let l = g.vertices();
        let result = sweep(g, l, a.epsilon, &grid, &opts, execution(a.parallel))?;
        let peak = find_derivative_peak(&result, DerivativeOf::Variance, 0).ok();
        let e = result.entanglement_series();
        let csv = format!("{}.csv", g.name());
        summary.push(ScanSummary {
            vertices: l,
            particles: l,
            dimension: dimension(l, l)?,
            csv: csv.clone(),
            entanglement_increasing: e.windows(2).all(|w| w[1] > w[0]),
            variance_peak_tau: peak.map(|p| p.tau),
            variance_peak_height: peak.map(|p| p.height),
        });
        files.push((csv, sweep_csv(&result)));
    }
    files.push(("summary.json".into(), json(&summary)?));

    fs::create_dir_all(&a.out_dir).with_context(|| format!("cannot create {}", a.out_dir.display()))?;
    for (name, text) in &files {
        deliver(text, Some(&a.out_dir.join(name)))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Sweep(a) => cmd_sweep(a)?,
        Command::Argmax(a) => cmd_argmax(a)?,
        Command::Spectrum(a) => cmd_spectrum(a)?,
        Command::Order(a) => cmd_order(a)?,
        Command::DimerCheck(a) => return cmd_dimer_check(a),
        Command::Catalog(a) => cmd_catalog(a)?,
        Command::CompleteScan(a) => cmd_complete_scan(a)?,
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
