//! Cross-module dynamics checks: the dense density path against the
//! pure-branch path, conservation laws over long runs, and determinism.

use quann::architecture::{default_phase_tol, distinct_operator_set, example_network};
use quann::envdyn::{
    initial_state, iterate_mean_energy, pure_branch_mean_energy, EnvCoupling, InitialCondition,
    REFERENCE_P,
};
use quann::neuron::{network_hamiltonian, FiringUnits};
use quann::qcore::{evolve_density, expectation, kron, Cplx, DenseOperator};

fn example_coupling() -> EnvCoupling {
    let set = distinct_operator_set(&example_network(), default_phase_tol()).unwrap();
    EnvCoupling::from_operator_set(&set).unwrap()
}

#[test]
fn pure_branch_matches_density_path_at_reference_p() {
    let coupling = example_coupling();
    let units = FiringUnits::unit_energy();
    let ic = InitialCondition::uniform(REFERENCE_P).unwrap();
    let dense = iterate_mean_energy(&coupling, &ic, 1000, &units).unwrap();
    let fast = pure_branch_mean_energy(&coupling, &ic, 1000, &units).unwrap();
    assert_eq!(dense.len(), 1001);
    let max_dev = dense
        .values()
        .iter()
        .zip(fast.values())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    assert!(max_dev < 1e-10, "paths diverged by {max_dev}");
}

#[test]
fn long_density_run_conserves_trace_and_block_structure() {
    let coupling = example_coupling();
    let u = coupling.u_net();
    let ic = InitialCondition::uniform(0.37).unwrap();
    let mut rho = initial_state(&ic, &coupling).unwrap();
    let nd = coupling.net_dim();
    let mut max_drift = 0.0f64;
    for _ in 0..2000 {
        rho = evolve_density(&u, &rho).unwrap();
        max_drift = max_drift.max((rho.trace() - Cplx::ONE).norm());
    }
    assert!(max_drift < 1e-9, "trace drift {max_drift}");
    // Zero off-blocks are preserved exactly by the dense products.
    let mut max_off_block = 0.0f64;
    for i in 0..rho.dim() {
        for j in 0..rho.dim() {
            if i / nd != j / nd {
                max_off_block = max_off_block.max(rho.get(i, j).norm());
            }
        }
    }
    assert!(max_off_block < 1e-12, "off-block leakage {max_off_block}");
    // Hermiticity is preserved along the way.
    assert!(rho.as_operator().is_hermitian(1e-9));
    rho.validate_positivity(1e-9).unwrap();
}

#[test]
fn repeated_runs_are_bit_identical() {
    let coupling = example_coupling();
    let units = FiringUnits::unit_energy();
    let ic = InitialCondition::uniform(REFERENCE_P).unwrap();
    let a = pure_branch_mean_energy(&coupling, &ic, 3000, &units).unwrap();
    let b = pure_branch_mean_energy(&coupling, &ic, 3000, &units).unwrap();
    assert_eq!(a.values(), b.values());
}

#[test]
fn mean_energy_expectation_consistency() {
    // The recorded series entry equals the expectation computed from the
    // evolved density at the same step.
    let coupling = example_coupling();
    let units = FiringUnits::unit_energy();
    let ic = InitialCondition::uniform(0.7).unwrap();
    let series = iterate_mean_energy(&coupling, &ic, 25, &units).unwrap();

    let u = coupling.u_net();
    let h_full = kron(
        &DenseOperator::identity(coupling.env_dim()),
        &network_hamiltonian(coupling.net_qubits(), &units).unwrap(),
    )
    .unwrap();
    let mut rho = initial_state(&ic, &coupling).unwrap();
    for l in 0..=25usize {
        if l > 0 {
            rho = evolve_density(&u, &rho).unwrap();
        }
        let direct = expectation(&rho, &h_full).unwrap();
        assert!((series.values()[l] - direct).abs() < 1e-12);
    }
}

#[test]
fn energy_bounds_hold_across_p_grid() {
    let coupling = example_coupling();
    let units = FiringUnits::unit_energy();
    let cap = coupling.net_qubits() as f64 * units.energy_quantum();
    for i in 0..=10 {
        let p = i as f64 / 10.0;
        let ic = InitialCondition::uniform(p).unwrap();
        let series = pure_branch_mean_energy(&coupling, &ic, 400, &units).unwrap();
        for (l, &v) in series.values().iter().enumerate() {
            assert!(
                v >= -1e-9 && v <= cap + 1e-9,
                "p = {p}, step {l}: energy {v} outside [0, {cap}]"
            );
        }
    }
}
