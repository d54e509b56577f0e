//! Lowest eigenpair of a [`SectorHamiltonian`].
//!
//! Small sectors go through a dense symmetric eigendecomposition, which also
//! serves as the reference for the Lanczos path. Lanczos keeps the whole
//! Krylov basis and reorthogonalises every new vector against it twice.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hamiltonian::SectorHamiltonian;
use crate::linalg::{symmetric_eigen, tridiagonal_eigen};

/// Largest sector the dense path will agree to materialise.
pub const DENSE_GUARD: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverUsed {
    Dense,
    Lanczos,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SolverMethod {
    /// Dense up to `dense_threshold`, Lanczos above.
    #[default]
    Auto,
    Dense,
    Lanczos,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Bound on the residual norm `|Hv - Ev|`.
    pub tolerance: f64,
    pub max_iterations: usize,
    pub dense_threshold: usize,
    pub degeneracy_warning_gap: f64,
    pub method: SolverMethod,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tolerance: 1e-10,
            max_iterations: 5000,
            dense_threshold: 2000,
            degeneracy_warning_gap: 1e-8,
            method: SolverMethod::Auto,
        }
    }
}

impl SolverOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0) || !(self.degeneracy_warning_gap > 0.0) {
            return Err(Error::InvalidArgument(
                "solver tolerance and degeneracy gap must be positive".into(),
            ));
        }
        if self.max_iterations == 0 || self.dense_threshold == 0 {
            return Err(Error::InvalidArgument(
                "max_iterations and dense_threshold must be positive".into(),
            ));
        }
        Ok(())
    }

    pub fn with_method(mut self, method: SolverMethod) -> Self {
        self.method = method;
        self
    }
}

#[derive(Debug, Clone)]
pub struct GroundState {
    pub energy: f64,
    /// Unit norm; sign chosen so the largest-magnitude component is positive.
    pub vector: Vec<f64>,
    /// Second-lowest minus lowest (Ritz) value; infinite for a one-state sector.
    pub gap_estimate: f64,
    pub residual: f64,
    pub solver_used: SolverUsed,
    pub degenerate: bool,
}

pub fn ground_state(h: &SectorHamiltonian, opts: &SolverOptions) -> Result<GroundState> {
    ground_state_from(h, opts, None)
}

/// Like [`ground_state`], seeding Lanczos with `start` when it is used.
pub fn ground_state_from(
    h: &SectorHamiltonian,
    opts: &SolverOptions,
    start: Option<&[f64]>,
) -> Result<GroundState> {
    opts.validate()?;
    let dense = match opts.method {
        SolverMethod::Auto => h.dimension() <= opts.dense_threshold,
        SolverMethod::Dense => true,
        SolverMethod::Lanczos => false,
    };
    let mut gs = if dense {
        dense_ground_state(h)?
    } else {
        lanczos_ground_state(h, opts, start)?
    };
    gs.degenerate = gs.gap_estimate < opts.degeneracy_warning_gap;
    Ok(gs)
}

pub fn dense_ground_state(h: &SectorHamiltonian) -> Result<GroundState> {
    let n = h.dimension();
    if n > DENSE_GUARD {
        return Err(Error::DenseTooLarge {
            dimension: n,
            limit: DENSE_GUARD,
        });
    }
    let eig = symmetric_eigen(&h.to_dense(), n);
    let gap = eig.values.get(1).map_or(f64::INFINITY, |v| v - eig.values[0]);
    let vector = eig.vector(0).to_vec();
    finish(h, vector, gap, SolverUsed::Dense)
}

/// Normalise, fix the sign, and recompute energy and residual from `h` directly.
fn finish(
    h: &SectorHamiltonian,
    mut vector: Vec<f64>,
    gap_estimate: f64,
    solver_used: SolverUsed,
) -> Result<GroundState> {
    let norm = norm(&vector);
    let pivot = vector
        .iter()
        .enumerate()
        .fold((0, 0.0f64), |best, (i, &v)| if v.abs() > best.1 { (i, v.abs()) } else { best })
        .0;
    let scale = if vector[pivot] < 0.0 { -1.0 / norm } else { 1.0 / norm };
    vector.iter_mut().for_each(|v| *v *= scale);

    let hv = h.matvec(&vector)?;
    let energy = dot(&vector, &hv);
    let residual = hv
        .iter()
        .zip(&vector)
        .map(|(a, b)| (a - energy * b).powi(2))
        .sum::<f64>()
        .sqrt();
    Ok(GroundState {
        energy,
        vector,
        gap_estimate: gap_estimate.max(0.0),
        residual,
        solver_used,
        degenerate: false,
    })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    y.iter_mut().zip(x).for_each(|(yi, xi)| *yi += alpha * xi);
}

/// Lowest two eigenvalues and the lowest eigenvector of the tridiagonal `T`.
fn tridiagonal_lowest(alphas: &[f64], betas: &[f64]) -> (f64, f64, Vec<f64>) {
    let eig = tridiagonal_eigen(alphas, betas);
    let theta1 = eig.values.get(1).copied().unwrap_or(f64::INFINITY);
    (eig.values[0], theta1, eig.vector(0).to_vec())
}

pub fn lanczos_ground_state(
    h: &SectorHamiltonian,
    opts: &SolverOptions,
    start: Option<&[f64]>,
) -> Result<GroundState> {
    let n = h.dimension();
    if n == 1 {
        return finish(h, vec![1.0], f64::INFINITY, SolverUsed::Lanczos);
    }

    let uniform = || vec![1.0 / (n as f64).sqrt(); n];
    let mut q = match start {
        Some(s) if s.len() != n => {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: s.len(),
            })
        }
        Some(s) if norm(s) > 0.0 && s.iter().all(|v| v.is_finite()) => {
            let inv = 1.0 / norm(s);
            s.iter().map(|v| v * inv).collect()
        }
        _ => uniform(),
    };

    let max_steps = opts.max_iterations.min(n);
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut w = vec![0.0; n];
    let mut scale = 0.0f64;
    let mut best_residual = f64::INFINITY;

    for step in 0..max_steps {
        h.matvec_into(&q, &mut w);
        if let (Some(prev), Some(&b)) = (basis.last(), betas.last()) {
            axpy(-b, prev, &mut w);
        }
        let alpha = dot(&w, &q);
        axpy(-alpha, &q, &mut w);
        basis.push(q);
        alphas.push(alpha);
        for _ in 0..2 {
            for v in &basis {
                let c = dot(&w, v);
                axpy(-c, v, &mut w);
            }
        }
        let beta = norm(&w);
        scale = scale.max(alpha.abs() + beta + betas.last().copied().unwrap_or(0.0));

        let m = step + 1;
        let breakdown = beta <= 1e-13 * scale.max(1e-300);
        let exhausted = m == max_steps;
        if m <= 30 || m % 5 == 0 || breakdown || exhausted {
            let (theta0, theta1, y) = tridiagonal_lowest(&alphas, &betas);
            let estimate = if breakdown { 0.0 } else { beta * y[m - 1].abs() };
            if estimate <= 0.5 * opts.tolerance || breakdown || exhausted {
                let mut ritz = vec![0.0; n];
                for (coef, v) in y.iter().zip(&basis) {
                    axpy(*coef, v, &mut ritz);
                }
                let gs = finish(h, ritz, theta1 - theta0, SolverUsed::Lanczos)?;
                best_residual = best_residual.min(gs.residual);
                if gs.residual <= opts.tolerance {
                    return Ok(gs);
                }
                if breakdown || exhausted {
                    break;
                }
            } else {
                best_residual = best_residual.min(estimate);
            }
        }
        if breakdown {
            break;
        }
        betas.push(beta);
        q = w.iter().map(|v| v / beta).collect();
    }

    Err(Error::NotConverged {
        iterations: alphas.len(),
        residual: best_residual,
    })
}
