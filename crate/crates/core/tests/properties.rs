use bosegraph::observables::dimer_variance_derivative;
use bosegraph::sweep::sweep_taus;
use bosegraph::*;

fn opts() -> SolverOptions {
    SolverOptions::default()
}

#[test]
fn sweeps_independent_of_direction_and_execution() {
    let grid = TauGrid::new(0.0, 20.0, 101).unwrap();
    let forward = grid.points();
    let backward: Vec<f64> = forward.iter().rev().copied().collect();
    // Lanczos so the serial path actually warm-starts.
    let lanczos = opts().with_method(SolverMethod::Lanczos);
    for id in CATALOG_IDS {
        let g = catalog_graph(id).unwrap();
        let serial = sweep_taus(&g, 4, 1.0, &forward, &lanczos, Execution::Serial).unwrap();
        let parallel = sweep_taus(&g, 4, 1.0, &forward, &lanczos, Execution::Parallel).unwrap();
        let mut reversed = sweep_taus(&g, 4, 1.0, &backward, &lanczos, Execution::Serial).unwrap();
        reversed.reverse();
        let dense = sweep_taus(&g, 4, 1.0, &forward, &opts(), Execution::Serial).unwrap();
        for k in 0..forward.len() {
            let e = serial[k].entanglement;
            for other in [&parallel[k], &reversed[k], &dense[k]] {
                assert_eq!(other.tau, serial[k].tau);
                assert!((other.entanglement - e).abs() <= 1e-9, "G{id} tau={}", serial[k].tau);
            }
        }
    }
}

#[test]
fn ground_energy_non_increasing_in_tau() {
    let grid = TauGrid::new(0.0, 20.0, 401).unwrap();
    for id in CATALOG_IDS {
        let s = sweep(&catalog_graph(id).unwrap(), 4, 1.0, &grid, &opts(), Execution::Parallel).unwrap();
        for w in s.points.windows(2) {
            assert!(w[1].energy <= w[0].energy + 1e-12, "G{id} at tau={}", w[1].tau);
        }
    }
}

#[test]
fn occupation_means_sum_to_particle_number() {
    let grid = TauGrid::new(0.0, 5.0, 11).unwrap();
    for g in [catalog_graph(4).unwrap(), catalog_graph(11).unwrap(), pendant_complete(6).unwrap()] {
        let n = g.vertices();
        let s = sweep(&g, n, 1.0, &grid, &opts(), Execution::Serial).unwrap();
        for p in &s.points {
            assert!((p.means.iter().sum::<f64>() - n as f64).abs() <= 1e-10);
            assert!(p.entanglement >= 0.0 && p.entanglement <= 1.0);
        }
    }
}

#[test]
fn vertex_transitive_graphs_have_identical_marginals() {
    for (g, n) in [(dimer(), 2), (complete_graph(4).unwrap(), 4), (complete_graph(5).unwrap(), 5)] {
        for tau in [0.05, 0.3, 2.0] {
            let h = build_hamiltonian(&g, n, Couplings::new(tau, 1.0).unwrap()).unwrap();
            let gs = ground_state(&h, &opts()).unwrap();
            let root = mode_marginal(&gs, h.sector(), 0).unwrap();
            for v in 1..g.vertices() {
                let m = mode_marginal(&gs, h.sector(), v).unwrap();
                for (a, b) in root.probabilities.iter().zip(&m.probabilities) {
                    assert!((a - b).abs() <= 1e-10, "{} vertex {v} tau {tau}", g.name());
                }
            }
        }
    }
}

#[test]
fn dimer_pipeline_matches_closed_form() {
    for i in 0..50 {
        let tau = 20.0 * i as f64 / 49.0;
        let h = build_hamiltonian(&dimer(), 2, Couplings::new(tau, 1.0).unwrap()).unwrap();
        let gs = ground_state(&h, &opts()).unwrap();
        let a = dimer_analytic(tau, 1.0).unwrap();
        let m = mode_marginal(&gs, h.sector(), 0).unwrap();
        let mo = occupation_moments(&gs, h.sector(), 0).unwrap();
        assert!((gs.energy - a.energy).abs() <= 1e-9);
        assert!((entanglement(&m, 2).unwrap().normalized - a.entanglement.normalized).abs() <= 1e-9);
        assert!((mo.variance - a.variance).abs() <= 1e-9);
        assert!((mo.mean - 1.0).abs() <= 1e-12);
    }
}

#[test]
fn dimer_peak_scales_with_epsilon() {
    for eps in [1.0, 2.0] {
        let grid = TauGrid::new(0.0, 2.0 * eps, 801).unwrap();
        let s = sweep(&dimer(), 2, eps, &grid, &opts(), Execution::Serial).unwrap();
        let peak = find_derivative_peak(&s, DerivativeOf::Variance, 0).unwrap();
        let expected = eps / (2.0 * 2f64.sqrt());
        assert!((peak.tau - expected).abs() <= 1e-3);
        assert!((peak.height - dimer_variance_derivative(expected, eps)).abs() <= 1e-3);
    }
    // Peak height at epsilon = 1 is 2 t (1 + 4 t^2)^(-3/2) at t = 1/(2 sqrt 2).
    assert!((dimer_variance_derivative(1.0 / (2.0 * 2f64.sqrt()), 1.0) - 0.3849).abs() < 1e-3);
}

#[test]
fn entanglement_maximum_is_boundary_for_monotone_graphs() {
    let m = find_entanglement_max(&dimer(), 2, 1.0, (0.0, 20.0), 1e-3, &opts()).unwrap();
    assert!(!m.interior);
    assert_eq!(m.tau_star, 20.0);
    let m = find_entanglement_max(&catalog_graph(13).unwrap(), 4, 1.0, (0.0, 20.0), 1e-3, &opts()).unwrap();
    assert!(!m.interior);
}

#[test]
fn complete_graph_peaks_move_left_and_sharpen() {
    let grid = TauGrid::new(0.0, 1.0, 201).unwrap();
    let lanczos = opts().with_method(SolverMethod::Lanczos);
    let mut previous: Option<DerivativePeak> = None;
    for l in 3..=7 {
        let s = sweep(&complete_graph(l).unwrap(), l, 1.0, &grid, &lanczos, Execution::Parallel).unwrap();
        let peak = find_derivative_peak(&s, DerivativeOf::Variance, 0).unwrap();
        if let Some(p) = previous {
            assert!(peak.tau < p.tau && peak.height > p.height, "K{l}");
        }
        previous = Some(peak);
    }
}

#[test]
fn rayleigh_quotient_matches_dense_eigenvalue() {
    let g = pendant_complete(6).unwrap();
    let h = build_hamiltonian(&g, 6, Couplings::new(0.7, 1.0).unwrap()).unwrap();
    let dense = dense_ground_state(&h).unwrap();
    let lanczos = ground_state(&h, &opts().with_method(SolverMethod::Lanczos)).unwrap();
    let hv = h.matvec(&lanczos.vector).unwrap();
    let rq: f64 = hv.iter().zip(&lanczos.vector).map(|(a, b)| a * b).sum();
    assert!((rq - dense.energy).abs() <= 1e-10 * dense.energy.abs().max(1.0));
    assert!(lanczos.residual <= 1e-10 && dense.residual <= 1e-10);
}
