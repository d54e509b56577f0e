//! Exact ground states of the Bose-Hubbard model on small graphs and the
//! entanglement of one vertex mode with the rest of the graph.
//!
//! The pipeline is: pick a [`RootedGraph`], assemble the fixed-N
//! [`SectorHamiltonian`], solve for its [`GroundState`], then reduce to the
//! occupation marginal of the root and take its normalised entropy.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod eigensolver;
pub mod error;
pub mod fock;
pub mod graphs;
pub mod hamiltonian;
pub mod linalg;
pub mod observables;
pub mod sweep;

pub use eigensolver::{
    dense_ground_state, ground_state, ground_state_from, GroundState, SolverMethod, SolverOptions,
    SolverUsed,
};
pub use error::{Error, Result};
pub use fock::{dimension, hop_apply, OccupationVector, SectorIndex};
pub use graphs::{
    catalog_graph, complete_graph, dimer, parse_graph, pendant_complete, RootedGraph,
    SpectrumReport, CATALOG_IDS,
};
pub use hamiltonian::{build_hamiltonian, Couplings, SectorHamiltonian};
pub use observables::{
    condensate_overlap, dimer_analytic, entanglement, mode_marginal, occupation_moments,
    DimerAnalytic, EntanglementValue, ModeMarginal, OccupationMoments,
};
pub use sweep::{
    find_derivative_peak, find_entanglement_max, ordering_report, sweep, DerivativeOf,
    DerivativePeak, EntanglementMax, Execution, OrderingReport, SweepResult, TauGrid,
};
