//! Fixed-particle-number Fock basis.
//!
//! States of `N` bosons on `L` modes are ordered ascending-lexicographically
//! on `(n_0, ..., n_{L-1})`, so all states sharing a value of `n_0` form one
//! contiguous block. Ranking goes through the combinatorial number system:
//! the number of states lexicographically below a given vector is a sum of
//! `L - 1` binomial differences, read off a precomputed table.

use std::fmt;

use crate::error::{Error, Result};

/// Number of bosons on each vertex. One element of the Fock basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OccupationVector(Vec<usize>);

impl OccupationVector {
    pub fn new(counts: Vec<usize>) -> Self {
        Self(counts)
    }

    pub fn counts(&self) -> &[usize] {
        &self.0
    }

    pub fn modes(&self) -> usize {
        self.0.len()
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn into_inner(self) -> Vec<usize> {
        self.0
    }
}

impl From<Vec<usize>> for OccupationVector {
    fn from(counts: Vec<usize>) -> Self {
        Self(counts)
    }
}

impl fmt::Display for OccupationVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, n) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{n}")?;
        }
        write!(f, ")")
    }
}

/// `binomial(N + L - 1, N)`, the dimension of the `N`-boson sector on `L` modes.
///
/// Fails instead of wrapping when the result does not fit in 63 bits.
pub fn dimension(modes: usize, particles: usize) -> Result<usize> {
    if modes == 0 {
        return Err(Error::NoModes);
    }
    let overflow = || Error::DimensionOverflow { modes, particles };
    let n = (particles as u128) + (modes as u128) - 1;
    let k = (particles as u128).min(modes as u128 - 1);
    let mut acc: u128 = 1;
    for i in 1..=k {
        // acc * (n - k + i) stays below 2^127 while acc < 2^63 and n < 2^64.
        acc = acc
            .checked_mul(n - k + i)
            .ok_or_else(overflow)?
            / i;
        if acc > i64::MAX as u128 {
            return Err(overflow());
        }
    }
    usize::try_from(acc).map_err(|_| overflow())
}

/// Basis bookkeeping for one `(L, N)` sector.
#[derive(Debug, Clone)]
pub struct SectorIndex {
    modes: usize,
    particles: usize,
    dimension: usize,
    /// `table[m * (N + 1) + r] = binomial(r + m, m)`: states of `r` bosons on `m + 1` modes.
    table: Vec<usize>,
}

impl SectorIndex {
    pub fn new(modes: usize, particles: usize) -> Result<Self> {
        let dimension = dimension(modes, particles)?;
        let width = particles + 1;
        let mut table = vec![0usize; modes * width];
        for m in 0..modes {
            for r in 0..width {
                table[m * width + r] = if m == 0 || r == 0 {
                    1
                } else {
                    // Every entry is bounded by the full dimension, which fits.
                    table[(m - 1) * width + r] + table[m * width + r - 1]
                };
            }
        }
        debug_assert_eq!(table[(modes - 1) * width + particles], dimension);
        Ok(Self {
            modes,
            particles,
            dimension,
            table,
        })
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn particles(&self) -> usize {
        self.particles
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Number of ways to place `r` bosons on `m + 1` modes.
    #[inline]
    fn states(&self, m: usize, r: usize) -> usize {
        self.table[m * (self.particles + 1) + r]
    }

    fn check(&self, counts: &[usize]) -> Result<()> {
        if counts.len() != self.modes || counts.iter().sum::<usize>() != self.particles {
            return Err(Error::InvalidOccupation {
                counts: counts.to_vec(),
                modes: self.modes,
                particles: self.particles,
            });
        }
        Ok(())
    }

    pub fn rank(&self, occ: &OccupationVector) -> Result<usize> {
        self.rank_counts(occ.counts())
    }

    pub fn rank_counts(&self, counts: &[usize]) -> Result<usize> {
        self.check(counts)?;
        Ok(self.rank_unchecked(counts))
    }

    /// Rank of a slice already known to lie in this sector.
    #[inline]
    pub(crate) fn rank_unchecked(&self, counts: &[usize]) -> usize {
        let mut rank = 0;
        let mut remaining = self.particles;
        for (i, &n) in counts[..self.modes - 1].iter().enumerate() {
            if n > 0 {
                // States with a smaller count at position i, remaining modes free:
                // sum_{v < n} C(remaining - v + m - 1, m - 1) = C(remaining + m, m) - C(remaining - n + m, m)
                let m = self.modes - i - 2;
                rank += self.states(m + 1, remaining) - self.states(m + 1, remaining - n);
                remaining -= n;
            }
        }
        rank
    }

    pub fn unrank(&self, rank: usize) -> Result<OccupationVector> {
        if rank >= self.dimension {
            return Err(Error::RankOutOfRange {
                rank,
                dimension: self.dimension,
            });
        }
        let mut counts = vec![0usize; self.modes];
        let mut remaining = self.particles;
        let mut k = rank;
        for (i, slot) in counts.iter_mut().enumerate().take(self.modes - 1) {
            let m = self.modes - i - 2;
            let mut n = 0;
            loop {
                let block = self.states(m, remaining - n);
                if k < block {
                    break;
                }
                k -= block;
                n += 1;
            }
            *slot = n;
            remaining -= n;
        }
        counts[self.modes - 1] = remaining;
        Ok(OccupationVector(counts))
    }

    /// Visit every basis state in rank order without allocating per state.
    pub fn for_each_state<F: FnMut(usize, &[usize])>(&self, mut f: F) {
        let mut counts = vec![0usize; self.modes];
        counts[self.modes - 1] = self.particles;
        let mut k = 0;
        loop {
            f(k, &counts);
            k += 1;
            if !next_state(&mut counts) {
                break;
            }
        }
        debug_assert_eq!(k, self.dimension);
    }

    pub fn states_iter(&self) -> impl Iterator<Item = OccupationVector> + '_ {
        let mut current = {
            let mut c = vec![0usize; self.modes];
            c[self.modes - 1] = self.particles;
            Some(c)
        };
        std::iter::from_fn(move || {
            let out = current.take()?;
            let mut next = out.clone();
            if next_state(&mut next) {
                current = Some(next);
            }
            Some(OccupationVector(out))
        })
    }
}

/// Advance to the lexicographic successor with the same total. Returns false at the last state.
fn next_state(counts: &mut [usize]) -> bool {
    let l = counts.len();
    if l < 2 {
        return false;
    }
    // Rightmost position (excluding the last) with something to its right.
    let mut tail = counts[l - 1];
    for i in (0..l - 1).rev() {
        if tail > 0 {
            counts[i] += 1;
            for c in &mut counts[i + 1..] {
                *c = 0;
            }
            counts[l - 1] = tail - 1;
            return true;
        }
        tail += counts[i];
    }
    false
}

/// Matrix element of `b_i† b_j` between number states.
///
/// Returns the target state and `sqrt((n_i + 1) n_j)`, or `None` when vertex `j` is empty.
pub fn hop_apply(
    occ: &OccupationVector,
    i: usize,
    j: usize,
) -> Result<Option<(OccupationVector, f64)>> {
    let modes = occ.modes();
    for v in [i, j] {
        if v >= modes {
            return Err(Error::VertexOutOfRange { vertex: v, modes });
        }
    }
    if i == j {
        return Err(Error::SameVertex(i));
    }
    let mut counts = occ.counts().to_vec();
    Ok(hop_in_place(&mut counts, i, j).map(|amp| (OccupationVector(counts), amp)))
}

/// In-place `b_i† b_j` on a count slice; leaves it untouched and returns `None` if `n_j == 0`.
#[inline]
pub(crate) fn hop_in_place(counts: &mut [usize], i: usize, j: usize) -> Option<f64> {
    if counts[j] == 0 {
        return None;
    }
    let amp = (((counts[i] + 1) * counts[j]) as f64).sqrt();
    counts[i] += 1;
    counts[j] -= 1;
    Some(amp)
}
