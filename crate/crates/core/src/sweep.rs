//! Tunneling sweeps and what is extracted from them: finite-difference
//! derivatives, entanglement maxima, derivative peaks and topology orderings.

use rayon::prelude::*;
use serde::Serialize;

use crate::eigensolver::{ground_state_from, GroundState, SolverOptions};
use crate::error::{Error, Result};
use crate::graphs::{catalog_graph, RootedGraph};
use crate::hamiltonian::{build_hamiltonian, Couplings};
use crate::observables::{entanglement, mode_marginal, moments_of};

/// Uniform grid over `[tau_min, tau_max]` including both endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TauGrid {
    pub tau_min: f64,
    pub tau_max: f64,
    pub steps: usize,
}

impl TauGrid {
    pub fn new(tau_min: f64, tau_max: f64, steps: usize) -> Result<Self> {
        if !(tau_min >= 0.0) || !tau_max.is_finite() || !(tau_max > tau_min) || steps < 2 {
            return Err(Error::InvalidArgument(format!(
                "grid needs 0 <= tau_min < tau_max and steps >= 2, got [{tau_min}, {tau_max}] x {steps}"
            )));
        }
        Ok(Self {
            tau_min,
            tau_max,
            steps,
        })
    }

    pub fn spacing(&self) -> f64 {
        (self.tau_max - self.tau_min) / (self.steps - 1) as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        if i + 1 == self.steps {
            self.tau_max
        } else {
            self.tau_min + i as f64 * self.spacing()
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.steps).map(|i| self.point(i)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    /// In grid order, each solve seeded with the previous ground state.
    #[default]
    Serial,
    /// Grid points solved independently on the rayon pool.
    Parallel,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepPoint {
    pub tau: f64,
    pub energy: f64,
    /// Normalised entanglement of the root vertex.
    pub entanglement: f64,
    pub means: Vec<f64>,
    pub variances: Vec<f64>,
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub graph: String,
    pub vertices: usize,
    pub particles: usize,
    pub epsilon: f64,
    pub grid: TauGrid,
    pub points: Vec<SweepPoint>,
    pub d_entanglement: Vec<f64>,
    /// Vertex whose variance derivative is stored in `d_variance`.
    pub variance_vertex: usize,
    pub d_variance: Vec<f64>,
}

impl SweepResult {
    pub fn taus(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.tau).collect()
    }

    pub fn entanglement_series(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.entanglement).collect()
    }

    pub fn variance_series(&self, vertex: usize) -> Result<Vec<f64>> {
        if vertex >= self.vertices {
            return Err(Error::VertexOutOfRange {
                vertex,
                modes: self.vertices,
            });
        }
        Ok(self.points.iter().map(|p| p.variances[vertex]).collect())
    }
}

/// Second-order finite differences on a uniform grid: central in the
/// interior, three-point one-sided at the ends.
pub fn derivative(values: &[f64], spacing: f64) -> Vec<f64> {
    let n = values.len();
    match n {
        0 | 1 => vec![0.0; n],
        2 => vec![(values[1] - values[0]) / spacing; 2],
        _ => (0..n)
            .map(|i| {
                if i == 0 {
                    (-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * spacing)
                } else if i == n - 1 {
                    (3.0 * values[n - 1] - 4.0 * values[n - 2] + values[n - 3]) / (2.0 * spacing)
                } else {
                    (values[i + 1] - values[i - 1]) / (2.0 * spacing)
                }
            })
            .collect(),
    }
}

fn solve_point(
    graph: &RootedGraph,
    particles: usize,
    epsilon: f64,
    tau: f64,
    opts: &SolverOptions,
    start: Option<&[f64]>,
) -> Result<(SweepPoint, GroundState)> {
    let wrap = |e: Error| Error::SweepPoint {
        tau,
        source: Box::new(e),
    };
    let h = build_hamiltonian(graph, particles, Couplings::allow_zero(tau, epsilon)?).map_err(wrap)?;
    let gs = ground_state_from(&h, opts, start).map_err(wrap)?;
    let sector = h.sector();
    let mut means = Vec::with_capacity(graph.vertices());
    let mut variances = Vec::with_capacity(graph.vertices());
    let mut root_entanglement = 0.0;
    for v in 0..graph.vertices() {
        let m = mode_marginal(&gs, sector, v)?;
        if v == 0 && particles > 0 {
            root_entanglement = entanglement(&m, particles)?.normalized;
        }
        let mo = moments_of(&m);
        means.push(mo.mean);
        variances.push(mo.variance);
    }
    let point = SweepPoint {
        tau,
        energy: gs.energy,
        entanglement: root_entanglement,
        means,
        variances,
        degenerate: gs.degenerate,
    };
    Ok((point, gs))
}

/// Entanglement of the root at a single `tau`.
pub fn entanglement_at(
    graph: &RootedGraph,
    particles: usize,
    epsilon: f64,
    tau: f64,
    opts: &SolverOptions,
) -> Result<f64> {
    Ok(solve_point(graph, particles, epsilon, tau, opts, None)?.0.entanglement)
}

/// Solve at each `tau` in the given order; results come back in the same order.
pub fn sweep_taus(
    graph: &RootedGraph,
    particles: usize,
    epsilon: f64,
    taus: &[f64],
    opts: &SolverOptions,
    execution: Execution,
) -> Result<Vec<SweepPoint>> {
    match execution {
        Execution::Serial => {
            let mut out = Vec::with_capacity(taus.len());
            let mut previous: Option<Vec<f64>> = None;
            for &tau in taus {
                let (p, gs) = solve_point(graph, particles, epsilon, tau, opts, previous.as_deref())?;
                // A seed at tau = 0 is a single number state; fall back to the default start.
                previous = (tau > 0.0).then_some(gs.vector);
                out.push(p);
            }
            Ok(out)
        }
        Execution::Parallel => taus
            .par_iter()
            .map(|&tau| solve_point(graph, particles, epsilon, tau, opts, None).map(|r| r.0))
            .collect(),
    }
}

pub fn sweep(
    graph: &RootedGraph,
    particles: usize,
    epsilon: f64,
    grid: &TauGrid,
    opts: &SolverOptions,
    execution: Execution,
) -> Result<SweepResult> {
    let points = sweep_taus(graph, particles, epsilon, &grid.points(), opts, execution)?;

    let h = grid.spacing();
    let e: Vec<f64> = points.iter().map(|p| p.entanglement).collect();
    let v0: Vec<f64> = points.iter().map(|p| p.variances[0]).collect();
    Ok(SweepResult {
        graph: graph.name().to_string(),
        vertices: graph.vertices(),
        particles,
        epsilon,
        grid: *grid,
        d_entanglement: derivative(&e, h),
        variance_vertex: 0,
        d_variance: derivative(&v0, h),
        points,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntanglementMax {
    pub tau_star: f64,
    pub e_star: f64,
    /// False when the maximum sits on a boundary of the search range.
    pub interior: bool,
}

pub const COARSE_SCAN_POINTS: usize = 64;

/// Global maximum of the root entanglement over `[lo, hi]`.
///
/// A coarse scan brackets the best grid point; golden-section search then
/// refines inside the bracket until it is narrower than `tol`.
pub fn find_entanglement_max(
    graph: &RootedGraph,
    particles: usize,
    epsilon: f64,
    range: (f64, f64),
    tol: f64,
    opts: &SolverOptions,
) -> Result<EntanglementMax> {
    let (lo, hi) = range;
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let grid = TauGrid::new(lo, hi, COARSE_SCAN_POINTS)?;
    let f = |tau: f64| entanglement_at(graph, particles, epsilon, tau, opts);
    let taus = grid.points();
    let values = taus.iter().map(|&t| f(t)).collect::<Result<Vec<_>>>()?;
    let best = values
        .iter()
        .enumerate()
        .fold(0, |b, (i, &v)| if v > values[b] { i } else { b });
    if best == 0 || best == taus.len() - 1 {
        return Ok(EntanglementMax {
            tau_star: taus[best],
            e_star: values[best],
            interior: false,
        });
    }

    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut a, mut b) = (taus[best - 1], taus[best + 1]);
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let (mut f1, mut f2) = (f(x1)?, f(x2)?);
    while b - a > tol {
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2)?;
        }
    }
    let tau_star = 0.5 * (a + b);
    Ok(EntanglementMax {
        tau_star,
        e_star: f(tau_star)?,
        interior: true,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DerivativeOf {
    Entanglement,
    Variance,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivativePeak {
    pub tau: f64,
    pub height: f64,
}

/// Maximum of the finite-difference derivative, refined by the parabola
/// through the best grid point and its neighbours.
pub fn find_derivative_peak(
    series: &SweepResult,
    which: DerivativeOf,
    vertex: usize,
) -> Result<DerivativePeak> {
    if series.points.len() < 5 {
        return Err(Error::InvalidArgument(format!(
            "need at least 5 sweep points, got {}",
            series.points.len()
        )));
    }
    let h = series.grid.spacing();
    let d = match which {
        DerivativeOf::Entanglement => derivative(&series.entanglement_series(), h),
        DerivativeOf::Variance => derivative(&series.variance_series(vertex)?, h),
    };
    let i = d
        .iter()
        .enumerate()
        .fold(0, |b, (i, &v)| if v > d[b] { i } else { b });
    if i == 0 || i == d.len() - 1 {
        return Err(Error::NoInteriorPeak);
    }
    let (l, c, r) = (d[i - 1], d[i], d[i + 1]);
    let curvature = l - 2.0 * c + r;
    let (offset, height) = if curvature < 0.0 {
        let off = 0.5 * (l - r) / curvature;
        (off, c - 0.25 * (l - r) * off)
    } else {
        (0.0, c)
    };
    Ok(DerivativePeak {
        tau: series.points[i].tau + offset * h,
        height,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderingEntry {
    pub id: u32,
    pub name: String,
    pub entanglement: f64,
    pub lambda_max_full: f64,
    pub lambda_max_sub: f64,
}

/// Rankings list graph names from largest to smallest. Concordance is the
/// fraction of graph pairs ordered the same way by entanglement and by the
/// spectral radius, over pairs whose radii are not tied.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderingReport {
    pub tau: f64,
    pub particles: usize,
    pub epsilon: f64,
    pub entries: Vec<OrderingEntry>,
    pub rank_by_entanglement: Vec<String>,
    pub rank_by_full_radius: Vec<String>,
    pub rank_by_sub_radius: Vec<String>,
    pub concordance_full: f64,
    pub concordance_sub: f64,
}

const RADIUS_TIE: f64 = 1e-9;

fn ranking(entries: &[OrderingEntry], key: impl Fn(&OrderingEntry) -> f64) -> Vec<String> {
    let mut idx: Vec<usize> = (0..entries.len()).collect();
    // Stable sort keeps id order among ties.
    idx.sort_by(|&a, &b| key(&entries[b]).total_cmp(&key(&entries[a])));
    idx.into_iter().map(|i| entries[i].name.clone()).collect()
}

fn concordance(entries: &[OrderingEntry], key: impl Fn(&OrderingEntry) -> f64) -> f64 {
    let (mut agree, mut total) = (0usize, 0usize);
    for (i, a) in entries.iter().enumerate() {
        for b in &entries[i + 1..] {
            let dk = key(a) - key(b);
            if dk.abs() <= RADIUS_TIE {
                continue;
            }
            total += 1;
            if (a.entanglement - b.entanglement) * dk > 0.0 {
                agree += 1;
            }
        }
    }
    if total == 0 {
        1.0
    } else {
        agree as f64 / total as f64
    }
}

pub fn ordering_report(
    ids: &[u32],
    particles: usize,
    epsilon: f64,
    tau: f64,
    opts: &SolverOptions,
) -> Result<OrderingReport> {
    let entries = ids
        .iter()
        .map(|&id| {
            let g = catalog_graph(id)?;
            Ok(OrderingEntry {
                id,
                name: g.name().to_string(),
                entanglement: entanglement_at(&g, particles, epsilon, tau, opts)?,
                lambda_max_full: g.adjacency_spectrum().lambda_max,
                lambda_max_sub: g.subgraph_without_root()?.adjacency_spectrum().lambda_max,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(OrderingReport {
        tau,
        particles,
        epsilon,
        rank_by_entanglement: ranking(&entries, |e| e.entanglement),
        rank_by_full_radius: ranking(&entries, |e| e.lambda_max_full),
        rank_by_sub_radius: ranking(&entries, |e| e.lambda_max_sub),
        concordance_full: concordance(&entries, |e| e.lambda_max_full),
        concordance_sub: concordance(&entries, |e| e.lambda_max_sub),
        entries,
    })
}
