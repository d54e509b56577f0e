//! Bose-Hubbard Hamiltonian restricted to a fixed-N sector:
//!
//! `H = -tau * sum_{(i,j) in E} (b_i† b_j + b_j† b_i) + epsilon * sum_i n_i^2`
//!
//! The diagonal is stored densely and the hopping part as the strict upper
//! triangle in CSR form; `matvec` applies each stored entry twice.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{hop_in_place, SectorIndex};
use crate::graphs::RootedGraph;

/// Tunneling amplitude and on-site interaction, both in the same energy unit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Couplings {
    pub tau: f64,
    pub epsilon: f64,
}

impl Couplings {
    pub fn new(tau: f64, epsilon: f64) -> Result<Self> {
        let c = Self::allow_zero(tau, epsilon)?;
        if tau == 0.0 && epsilon == 0.0 {
            return Err(Error::InvalidCouplings {
                tau,
                epsilon,
                reason: "tau and epsilon are both zero",
            });
        }
        Ok(c)
    }

    /// Like [`Couplings::new`] but accepts the trivial `tau = epsilon = 0` point.
    pub fn allow_zero(tau: f64, epsilon: f64) -> Result<Self> {
        let bad = |reason| Error::InvalidCouplings {
            tau,
            epsilon,
            reason,
        };
        if !tau.is_finite() || !epsilon.is_finite() {
            return Err(bad("couplings must be finite"));
        }
        if tau < 0.0 || epsilon < 0.0 {
            return Err(bad("couplings must be nonnegative"));
        }
        Ok(Self { tau, epsilon })
    }
}

#[derive(Debug, Clone)]
pub struct SectorHamiltonian {
    sector: SectorIndex,
    couplings: Couplings,
    diagonal: Vec<f64>,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl SectorHamiltonian {
    pub fn sector(&self) -> &SectorIndex {
        &self.sector
    }

    pub fn couplings(&self) -> Couplings {
        self.couplings
    }

    pub fn dimension(&self) -> usize {
        self.diagonal.len()
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diagonal
    }

    /// Stored upper-triangle entries `(row, col, value)` with `row < col`.
    pub fn upper_entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.dimension()).flat_map(move |r| {
            (self.row_ptr[r]..self.row_ptr[r + 1]).map(move |p| (r, self.col_idx[p], self.values[p]))
        })
    }

    pub fn upper_nnz(&self) -> usize {
        self.values.len()
    }

    /// Off-diagonal nonzeros in each full row (upper and mirrored lower).
    pub fn row_offdiag_counts(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.dimension()];
        for (r, c, _) in self.upper_entries() {
            counts[r] += 1;
            counts[c] += 1;
        }
        counts
    }

    /// Full matrix, row-major.
    pub fn to_dense(&self) -> Vec<f64> {
        let n = self.dimension();
        let mut m = vec![0.0; n * n];
        for (k, d) in self.diagonal.iter().enumerate() {
            m[k * n + k] = *d;
        }
        for (r, c, v) in self.upper_entries() {
            m[r * n + c] = v;
            m[c * n + r] = v;
        }
        m
    }

    fn check_len(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.dimension(),
                got: x.len(),
            });
        }
        Ok(())
    }

    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_len(x)?;
        let mut y = vec![0.0; x.len()];
        self.matvec_into(x, &mut y);
        Ok(y)
    }

    /// `y = H x` without length checks; deterministic summation order.
    pub(crate) fn matvec_into(&self, x: &[f64], y: &mut [f64]) {
        for (yi, (d, xi)) in y.iter_mut().zip(self.diagonal.iter().zip(x)) {
            *yi = d * xi;
        }
        for r in 0..self.diagonal.len() {
            let xr = x[r];
            let mut acc = 0.0;
            for p in self.row_ptr[r]..self.row_ptr[r + 1] {
                let c = self.col_idx[p];
                let v = self.values[p];
                acc += v * x[c];
                y[c] += v * xr;
            }
            y[r] += acc;
        }
    }

    /// Row-partitioned product. Each worker scatters its rows into a private
    /// buffer and the buffers are summed, so results match [`matvec`](Self::matvec)
    /// only up to floating-point reassociation.
    pub fn matvec_parallel(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_len(x)?;
        let n = x.len();
        let chunk = (n / rayon::current_num_threads().max(1)).max(256);
        let y = (0..n)
            .into_par_iter()
            .step_by(chunk)
            .map(|start| {
                let mut local = vec![0.0; n];
                for r in start..(start + chunk).min(n) {
                    let xr = x[r];
                    let mut acc = self.diagonal[r] * xr;
                    for p in self.row_ptr[r]..self.row_ptr[r + 1] {
                        let c = self.col_idx[p];
                        let v = self.values[p];
                        acc += v * x[c];
                        local[c] += v * xr;
                    }
                    local[r] += acc;
                }
                local
            })
            .reduce(
                || vec![0.0; n],
                |mut a, b| {
                    a.iter_mut().zip(b).for_each(|(ai, bi)| *ai += bi);
                    a
                },
            );
        Ok(y)
    }
}

/// Assemble `H` for `particles` bosons on `graph`.
pub fn build_hamiltonian(
    graph: &RootedGraph,
    particles: usize,
    couplings: Couplings,
) -> Result<SectorHamiltonian> {
    let sector = SectorIndex::new(graph.vertices(), particles)?;
    let dim = sector.dimension();
    let mut diagonal = Vec::with_capacity(dim);
    let mut row_ptr = Vec::with_capacity(dim + 1);
    let mut col_idx = Vec::new();
    let mut values = Vec::new();
    let hopping = couplings.tau != 0.0;
    let mut scratch = vec![0usize; graph.vertices()];
    let mut row: Vec<(usize, f64)> = Vec::with_capacity(2 * graph.edges().len());

    row_ptr.push(0);
    sector.for_each_state(|k, counts| {
        let onsite: usize = counts.iter().map(|n| n * n).sum();
        diagonal.push(couplings.epsilon * onsite as f64);

        if hopping {
            row.clear();
            for &(i, j) in graph.edges() {
                for (to, from) in [(i, j), (j, i)] {
                    scratch.copy_from_slice(counts);
                    if let Some(amp) = hop_in_place(&mut scratch, to, from) {
                        debug_assert_eq!(scratch.iter().sum::<usize>(), sector.particles());
                        let target = sector.rank_unchecked(&scratch);
                        // The (target, k) entry is emitted when the row of `target` is built.
                        if target > k {
                            row.push((target, -couplings.tau * amp));
                        }
                    }
                }
            }
            row.sort_unstable_by_key(|&(c, _)| c);
            for &(c, v) in &row {
                col_idx.push(c);
                values.push(v);
            }
        }
        row_ptr.push(col_idx.len());
    });

    Ok(SectorHamiltonian {
        sector,
        couplings,
        diagonal,
        row_ptr,
        col_idx,
        values,
    })
}
