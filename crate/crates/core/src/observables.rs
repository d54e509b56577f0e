//! Single-mode observables of a ground state.
//!
//! With the total number fixed, the reduced state of one mode is diagonal in
//! the occupation basis, so the marginal occupation distribution carries the
//! whole reduced density matrix and its von Neumann entropy is a Shannon entropy.

use serde::Serialize;

use crate::eigensolver::GroundState;
use crate::error::{Error, Result};
use crate::fock::SectorIndex;
use crate::graphs::RootedGraph;

/// `probabilities[n]` is the probability that `vertex` holds exactly `n` bosons.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModeMarginal {
    pub vertex: usize,
    pub probabilities: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntanglementValue {
    /// Entropy in bits.
    pub raw_entropy: f64,
    /// `raw_entropy / log2(N + 1)`.
    pub normalized: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OccupationMoments {
    pub vertex: usize,
    pub mean: f64,
    pub variance: f64,
}

fn check_inputs(gs: &GroundState, sector: &SectorIndex, vertex: usize) -> Result<()> {
    if vertex >= sector.modes() {
        return Err(Error::VertexOutOfRange {
            vertex,
            modes: sector.modes(),
        });
    }
    if gs.vector.len() != sector.dimension() {
        return Err(Error::DimensionMismatch {
            expected: sector.dimension(),
            got: gs.vector.len(),
        });
    }
    Ok(())
}

pub fn mode_marginal(gs: &GroundState, sector: &SectorIndex, vertex: usize) -> Result<ModeMarginal> {
    check_inputs(gs, sector, vertex)?;
    let mut probabilities = vec![0.0; sector.particles() + 1];
    sector.for_each_state(|k, counts| {
        probabilities[counts[vertex]] += gs.vector[k] * gs.vector[k];
    });
    Ok(ModeMarginal {
        vertex,
        probabilities,
    })
}

/// Shannon entropy in bits with `0 log 0 = 0`.
pub fn shannon_bits(p: &[f64]) -> f64 {
    -p.iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| x * x.log2())
        .sum::<f64>()
}

pub fn entanglement(m: &ModeMarginal, particles: usize) -> Result<EntanglementValue> {
    if particles == 0 {
        return Err(Error::ZeroParticles);
    }
    if m.probabilities.len() > particles + 1 {
        return Err(Error::InvalidArgument(format!(
            "marginal has {} bins, more than N + 1 = {}",
            m.probabilities.len(),
            particles + 1
        )));
    }
    let raw_entropy = shannon_bits(&m.probabilities);
    Ok(EntanglementValue {
        raw_entropy,
        normalized: raw_entropy / ((particles + 1) as f64).log2(),
    })
}

pub fn moments_of(m: &ModeMarginal) -> OccupationMoments {
    let (mut mean, mut second) = (0.0, 0.0);
    for (n, p) in m.probabilities.iter().enumerate() {
        let n = n as f64;
        mean += n * p;
        second += n * n * p;
    }
    OccupationMoments {
        vertex: m.vertex,
        mean,
        variance: (second - mean * mean).max(0.0),
    }
}

pub fn occupation_moments(
    gs: &GroundState,
    sector: &SectorIndex,
    vertex: usize,
) -> Result<OccupationMoments> {
    Ok(moments_of(&mode_marginal(gs, sector, vertex)?))
}

/// Amplitudes of the state with all `N` bosons in the uniform superposition of
/// vertices `1..L`, i.e. the zero-momentum mode of the root-deleted sub-graph.
pub fn condensate_state(sector: &SectorIndex) -> Result<Vec<f64>> {
    let l = sector.modes();
    if l < 2 {
        return Err(Error::InvalidArgument(
            "condensate over the sub-graph needs L >= 2".into(),
        ));
    }
    let n = sector.particles();
    let ln_fact: Vec<f64> = std::iter::once(0.0)
        .chain((1..=n).scan(0.0, |acc, k| {
            *acc += (k as f64).ln();
            Some(*acc)
        }))
        .collect();
    let base = ln_fact[n] - n as f64 * ((l - 1) as f64).ln();
    let mut amps = vec![0.0; sector.dimension()];
    sector.for_each_state(|k, counts| {
        if counts[0] == 0 {
            let ln = base - counts[1..].iter().map(|&c| ln_fact[c]).sum::<f64>();
            amps[k] = (0.5 * ln).exp();
        }
    });
    Ok(amps)
}

/// `|<GS|C>|^2` with `|C>` from [`condensate_state`].
pub fn condensate_overlap(gs: &GroundState, sector: &SectorIndex, graph: &RootedGraph) -> Result<f64> {
    if graph.vertices() != sector.modes() {
        return Err(Error::InvalidArgument(format!(
            "graph has {} vertices but sector has {} modes",
            graph.vertices(),
            sector.modes()
        )));
    }
    check_inputs(gs, sector, 0)?;
    let c = condensate_state(sector)?;
    let overlap: f64 = gs.vector.iter().zip(&c).map(|(a, b)| a * b).sum();
    Ok(overlap * overlap)
}

/// Closed-form two-site ground state at `N = 2`:
/// `cos(theta/2)|11> + sin(theta/2)(|02> + |20>)/sqrt(2)` with `theta = -atan(2 tau / epsilon)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DimerAnalytic {
    pub theta: f64,
    pub energy: f64,
    pub probabilities: [f64; 3],
    pub entanglement: EntanglementValue,
    pub variance: f64,
}

pub fn dimer_analytic(tau: f64, epsilon: f64) -> Result<DimerAnalytic> {
    if !(epsilon > 0.0) || !(tau >= 0.0) || !tau.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "dimer closed form needs epsilon > 0 and tau >= 0, got tau={tau}, epsilon={epsilon}"
        )));
    }
    let theta = -(2.0 * tau / epsilon).atan();
    let s2 = (theta / 2.0).sin().powi(2);
    let c2 = (theta / 2.0).cos().powi(2);
    let probabilities = [s2 / 2.0, c2, s2 / 2.0];
    let marginal = ModeMarginal {
        vertex: 0,
        probabilities: probabilities.to_vec(),
    };
    Ok(DimerAnalytic {
        theta,
        energy: 3.0 * epsilon - (epsilon * epsilon + 4.0 * tau * tau).sqrt(),
        probabilities,
        entanglement: entanglement(&marginal, 2)?,
        variance: s2,
    })
}

/// `d/dtau` of the dimer on-site variance `(1 - 1/sqrt(1 + 4 (tau/epsilon)^2)) / 2`.
pub fn dimer_variance_derivative(tau: f64, epsilon: f64) -> f64 {
    let x = tau / epsilon;
    2.0 * x * (1.0 + 4.0 * x * x).powf(-1.5) / epsilon
}
