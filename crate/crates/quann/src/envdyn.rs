//! Environment-coupled dynamics: the block unitary that applies a different
//! activation order per environment eigenstate, maximum-entropy initial
//! conditions, density-operator iteration, and the mean firing-energy series.
//!
//! Tensor order is environment ⊗ network throughout, so the basis index is
//! `k·2^n + r` for environment eigenstate k (0-based) and network pattern r.
//!
//! The block-diagonal density path is the validation oracle; the pure-branch
//! path evolves one network state per environment eigenstate and is the
//! production path for diagonal environments. The two agree within 1e-10
//! per series entry.

use crate::architecture::OperatorSet;
use crate::error::{Error, Result};
use crate::neuron::{network_hamiltonian, pauli, FiringUnits};
use crate::qcore::{
    evolve_density, expectation, kron, matvec_raw, Cplx, DenseOperator, DensityOperator,
    StateVector,
};

/// Initial-amplitude parameter used by the reference three-neuron runs.
pub const REFERENCE_P: f64 = 0.8918547337153693;

/// Trace drift that aborts the density iteration.
pub const TRACE_DRIFT_ABORT: f64 = 1e-6;

/// Environment coupling: one activation-order operator per environment
/// eigenstate. The full unitary is block-diagonal over the environment
/// basis with these operators as blocks.
#[derive(Clone, Debug)]
pub struct EnvCoupling {
    net_qubits: usize,
    branches: Vec<DenseOperator>,
}

impl EnvCoupling {
    /// Couples environment eigenstates to operators in the given order
    /// (eigenstate k drives branch `opset.member(k)`).
    pub fn from_operator_set(opset: &OperatorSet) -> Result<Self> {
        if opset.is_empty() {
            return Err(Error::Invalid("operator set has no members".into()));
        }
        let dim = opset.member(0).operator.dim();
        let net_qubits = dim.trailing_zeros() as usize;
        Ok(Self {
            net_qubits,
            branches: opset.members().iter().map(|m| m.operator.clone()).collect(),
        })
    }

    pub fn env_dim(&self) -> usize {
        self.branches.len()
    }

    pub fn net_qubits(&self) -> usize {
        self.net_qubits
    }

    pub fn net_dim(&self) -> usize {
        1 << self.net_qubits
    }

    pub fn total_dim(&self) -> usize {
        self.env_dim() * self.net_dim()
    }

    /// Branch operator for environment eigenstate k (0-based).
    pub fn branch(&self, k: usize) -> &DenseOperator {
        &self.branches[k]
    }

    /// The full block-diagonal unitary on environment ⊗ network.
    pub fn u_net(&self) -> DenseOperator {
        let nd = self.net_dim();
        let mut op = DenseOperator::zeros(self.total_dim());
        for (k, branch) in self.branches.iter().enumerate() {
            let base = k * nd;
            for i in 0..nd {
                for j in 0..nd {
                    let v = branch.get(i, j);
                    if v != Cplx::ZERO {
                        op.set(base + i, base + j, v);
                    }
                }
            }
        }
        op
    }
}

/// Builds a coupling from an explicit eigenstate → permutation assignment.
/// The mapping must be a bijection onto the operator set's members.
pub fn build_coupling(opset: &OperatorSet, mapping: &[Vec<usize>]) -> Result<EnvCoupling> {
    if mapping.len() != opset.len() {
        return Err(Error::DimensionMismatch {
            expected: opset.len(),
            actual: mapping.len(),
        });
    }
    let mut chosen = vec![false; opset.len()];
    let mut branches = Vec::with_capacity(mapping.len());
    for perm in mapping {
        let position = opset
            .members()
            .iter()
            .position(|m| &m.permutation == perm)
            .ok_or_else(|| {
                Error::Invalid(format!("{perm:?} does not name a distinct activation order"))
            })?;
        if chosen[position] {
            return Err(Error::Invalid(format!(
                "{perm:?} assigned to more than one environment eigenstate"
            )));
        }
        chosen[position] = true;
        branches.push(opset.member(position).operator.clone());
    }
    let dim = branches[0].dim();
    Ok(EnvCoupling {
        net_qubits: dim.trailing_zeros() as usize,
        branches,
    })
}

/// How the environment starts: a maximum-entropy uniform mixture, a single
/// eigenstate (1-based), or explicit nonnegative weights summing to one.
///
/// Every expressible environment is diagonal in the eigenstate basis, so the
/// pure-branch path below is always applicable.
#[derive(Clone, Debug, PartialEq)]
pub enum EnvSelection {
    Uniform,
    Eigenstate(usize),
    Weights(Vec<f64>),
}

/// Initial condition: the per-neuron firing amplitude parameter p and the
/// environment selection.
#[derive(Clone, Debug)]
pub struct InitialCondition {
    p: f64,
    env: EnvSelection,
}

impl InitialCondition {
    pub fn new(p: f64, env: EnvSelection) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Invalid(format!("p must lie in [0, 1], got {p}")));
        }
        Ok(Self { p, env })
    }

    /// Uniform maximum-entropy environment.
    pub fn uniform(p: f64) -> Result<Self> {
        Self::new(p, EnvSelection::Uniform)
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn env(&self) -> &EnvSelection {
        &self.env
    }

    /// Resolves the selection into per-eigenstate weights for an
    /// environment of dimension `env_dim`.
    pub fn env_weights(&self, env_dim: usize) -> Result<Vec<f64>> {
        match &self.env {
            EnvSelection::Uniform => Ok(vec![1.0 / env_dim as f64; env_dim]),
            EnvSelection::Eigenstate(k) => {
                if *k < 1 || *k > env_dim {
                    return Err(Error::Invalid(format!(
                        "eigenstate index {k} outside 1..={env_dim}"
                    )));
                }
                let mut w = vec![0.0; env_dim];
                w[k - 1] = 1.0;
                Ok(w)
            }
            EnvSelection::Weights(w) => {
                if w.len() != env_dim {
                    return Err(Error::DimensionMismatch {
                        expected: env_dim,
                        actual: w.len(),
                    });
                }
                if w.iter().any(|&x| !(x >= 0.0) || !x.is_finite()) {
                    return Err(Error::Invalid("environment weights must be nonnegative".into()));
                }
                let sum: f64 = w.iter().sum();
                if (sum - 1.0).abs() > 1e-12 {
                    return Err(Error::NotNormalized { norm_sq: sum });
                }
                Ok(w.clone())
            }
        }
    }
}

/// Mean firing-energy values, one per iteration including l = 0.
///
/// Values stay within [0, n·energy_quantum] up to rounding; that bound is
/// exercised by the property tests rather than enforced per entry.
#[derive(Clone, Debug, PartialEq)]
pub struct EnergySeries {
    values: Vec<f64>,
}

impl EnergySeries {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}

/// The single-qubit preparation √(1−p)·σ₃ + √p·σ₁; unitary and Hermitian
/// for every p in [0, 1], and the Walsh-Hadamard transform at p = 1/2.
pub fn u_p(p: f64) -> Result<DenseOperator> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Invalid(format!("p must lie in [0, 1], got {p}")));
    }
    let s3 = pauli(3)?.scaled(Cplx::new((1.0 - p).sqrt(), 0.0));
    let s1 = pauli(1)?.scaled(Cplx::new(p.sqrt(), 0.0));
    s3.add(&s1)
}

/// The network start state U_p^{⊗n}|0…0⟩: every neuron fires with
/// amplitude √p.
pub fn network_initial_state(p: f64, net_qubits: usize) -> Result<StateVector> {
    let gate = u_p(p)?;
    let single = StateVector::new(1, vec![gate.get(0, 0), gate.get(1, 0)])?;
    let mut state = single.clone();
    for _ in 1..net_qubits {
        state = state.tensor(&single)?;
    }
    Ok(state)
}

/// The full initial density: Σ_k w_k |ε_k⟩⟨ε_k| ⊗ |p⟩⟨p|.
pub fn initial_state(ic: &InitialCondition, coupling: &EnvCoupling) -> Result<DensityOperator> {
    let weights = ic.env_weights(coupling.env_dim())?;
    let net = DensityOperator::from_pure(&network_initial_state(ic.p(), coupling.net_qubits())?);
    let nd = coupling.net_dim();
    let total = coupling.total_dim();
    let mut entries = vec![Cplx::ZERO; total * total];
    for (k, &w) in weights.iter().enumerate() {
        if w == 0.0 {
            continue;
        }
        let base = k * nd;
        for i in 0..nd {
            for j in 0..nd {
                entries[(base + i) * total + (base + j)] = net.get(i, j) * w;
            }
        }
    }
    DensityOperator::new(total, entries)
}

/// Density-path iteration of the mean total firing energy: evolves the full
/// density operator step by step and records Tr(ρ·(1_E ⊗ H_net)). Aborts if
/// the trace drifts by more than [`TRACE_DRIFT_ABORT`].
pub fn iterate_mean_energy(
    coupling: &EnvCoupling,
    ic: &InitialCondition,
    steps: usize,
    units: &FiringUnits,
) -> Result<EnergySeries> {
    let u = coupling.u_net();
    let h_net = network_hamiltonian(coupling.net_qubits(), units)?;
    let h_full = kron(&DenseOperator::identity(coupling.env_dim()), &h_net)?;
    let mut rho = initial_state(ic, coupling)?;
    let mut values = Vec::with_capacity(steps + 1);
    values.push(expectation(&rho, &h_full)?);
    for step in 1..=steps {
        rho = evolve_density(&u, &rho)?;
        let drift = (rho.trace() - Cplx::ONE).norm();
        if drift > TRACE_DRIFT_ABORT {
            return Err(Error::TraceDrift { step, drift });
        }
        values.push(expectation(&rho, &h_full)?);
    }
    Ok(EnergySeries { values })
}

fn hamiltonian_diagonal(net_qubits: usize, units: &FiringUnits) -> Vec<f64> {
    let eq = units.energy_quantum();
    (0..1usize << net_qubits)
        .map(|pattern| pattern.count_ones() as f64 * eq)
        .collect()
}

/// Pure-branch iteration: evolves one pure network state per environment
/// eigenstate under its fixed activation order and weight-averages the
/// energies. Mathematically identical to the density path for the diagonal
/// environments expressible by [`InitialCondition`] (the typed selection
/// cannot carry environment coherences, so no non-diagonal error arm
/// exists here).
pub fn pure_branch_mean_energy(
    coupling: &EnvCoupling,
    ic: &InitialCondition,
    steps: usize,
    units: &FiringUnits,
) -> Result<EnergySeries> {
    let weights = ic.env_weights(coupling.env_dim())?;
    let diag = hamiltonian_diagonal(coupling.net_qubits(), units);
    let nd = coupling.net_dim();
    let start = network_initial_state(ic.p(), coupling.net_qubits())?;
    let mut values = vec![0.0f64; steps + 1];
    for (k, &w) in weights.iter().enumerate() {
        if w == 0.0 {
            continue;
        }
        let branch = coupling.branch(k);
        let mut amps = start.amps().to_vec();
        for (l, slot) in values.iter_mut().enumerate() {
            if l > 0 {
                amps = matvec_raw(branch.entries(), &amps, nd);
            }
            let energy: f64 = amps
                .iter()
                .zip(&diag)
                .map(|(a, &e)| a.norm_sqr() * e)
                .sum();
            *slot += w * energy;
        }
    }
    Ok(EnergySeries { values })
}

/// Energy series with the environment pinned to eigenstate k (1-based).
pub fn per_eigenstate_series(
    coupling: &EnvCoupling,
    k: usize,
    p: f64,
    steps: usize,
    units: &FiringUnits,
) -> Result<EnergySeries> {
    let ic = InitialCondition::new(p, EnvSelection::Eigenstate(k))?;
    // Resolve now so an out-of-range index fails before any work happens.
    ic.env_weights(coupling.env_dim())?;
    pure_branch_mean_energy(coupling, &ic, steps, units)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::architecture::{default_phase_tol, distinct_operator_set, example_network};
    use crate::qcore::apply;

    fn example_coupling() -> EnvCoupling {
        let set = distinct_operator_set(&example_network(), default_phase_tol()).unwrap();
        EnvCoupling::from_operator_set(&set).unwrap()
    }

    #[test]
    fn u_p_special_values() {
        let w = u_p(0.5).unwrap();
        let inv = std::f64::consts::FRAC_1_SQRT_2;
        assert!((w.get(0, 0).re - inv).abs() < 1e-15);
        assert!((w.get(1, 1).re + inv).abs() < 1e-15);
        assert!(u_p(0.0).unwrap().max_abs_diff(&pauli(3).unwrap()) < 1e-15);
        assert!(u_p(1.0).unwrap().max_abs_diff(&pauli(1).unwrap()) < 1e-15);
        for p in [0.0, 0.1, 0.37, 0.5, 0.9, 1.0] {
            let u = u_p(p).unwrap();
            assert!(u.is_unitary(1e-12));
            assert!(u.is_hermitian(1e-12));
        }
        assert!(u_p(-0.1).is_err());
        assert!(u_p(1.1).is_err());
    }

    #[test]
    fn initial_state_network_blocks() {
        let coupling = example_coupling();
        // p = 1/2 leaves every network entry at 1/8 within each
        // environment block.
        let ic = InitialCondition::uniform(0.5).unwrap();
        let rho = initial_state(&ic, &coupling).unwrap();
        for k in 0..6 {
            let base = k * 8;
            for i in 0..8 {
                for j in 0..8 {
                    let v = rho.get(base + i, base + j);
                    assert!((v.re - 1.0 / 48.0).abs() < 1e-12 && v.im.abs() < 1e-15);
                }
            }
        }
        // p = 0 keeps the network at the all-resting pattern.
        let ic0 = InitialCondition::uniform(0.0).unwrap();
        let rho0 = initial_state(&ic0, &coupling).unwrap();
        for k in 0..6 {
            let base = k * 8;
            assert!((rho0.get(base, base).re - 1.0 / 6.0).abs() < 1e-12);
            for i in 1..8 {
                assert!(rho0.get(base + i, base + i).norm() < 1e-15);
            }
        }
        assert!((rho.trace().re - 1.0).abs() < 1e-12);
        assert!((rho0.trace().re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn coupling_blocks_match_members_and_offblocks_vanish() {
        let set = distinct_operator_set(&example_network(), default_phase_tol()).unwrap();
        let coupling = EnvCoupling::from_operator_set(&set).unwrap();
        let u = coupling.u_net();
        assert_eq!(u.dim(), 48);
        for k in 0..6 {
            let member = &set.member(k).operator;
            for i in 0..8 {
                for j in 0..8 {
                    assert_eq!(u.get(k * 8 + i, k * 8 + j), member.get(i, j));
                }
            }
        }
        for i in 0..48 {
            for j in 0..48 {
                if i / 8 != j / 8 {
                    assert_eq!(u.get(i, j), Cplx::ZERO);
                }
            }
        }
        assert!(u.is_unitary(1e-10));
    }

    #[test]
    fn single_member_coupling_is_the_branch_itself() {
        use crate::architecture::{OperatorSet, OperatorSetMember};
        let set = distinct_operator_set(&example_network(), default_phase_tol()).unwrap();
        let only = OperatorSet::from_members(
            vec![OperatorSetMember {
                permutation: vec![1, 2, 3],
                operator: set.member(0).operator.clone(),
            }],
            default_phase_tol(),
        )
        .unwrap();
        let coupling = EnvCoupling::from_operator_set(&only).unwrap();
        assert_eq!(coupling.env_dim(), 1);
        assert!(coupling.u_net().max_abs_diff(&set.member(0).operator) < 1e-15);
    }

    #[test]
    fn build_coupling_follows_explicit_mapping() {
        let set = distinct_operator_set(&example_network(), default_phase_tol()).unwrap();
        let mapping: Vec<Vec<usize>> = set.members().iter().map(|m| m.permutation.clone()).collect();
        let coupling = build_coupling(&set, &mapping).unwrap();
        assert_eq!(coupling.env_dim(), 6);
        for k in 0..6 {
            assert!(coupling.branch(k).max_abs_diff(&set.member(k).operator) < 1e-15);
        }

        let mut swapped = mapping.clone();
        swapped.swap(0, 5);
        let coupling2 = build_coupling(&set, &swapped).unwrap();
        assert!(coupling2.branch(0).max_abs_diff(&set.member(5).operator) < 1e-15);

        let mut duplicated = mapping.clone();
        duplicated[1] = duplicated[0].clone();
        assert!(build_coupling(&set, &duplicated).is_err());
        assert!(build_coupling(&set, &mapping[..3].to_vec()).is_err());
    }

    #[test]
    fn initial_energy_is_three_p() {
        let coupling = example_coupling();
        let units = FiringUnits::unit_energy();
        for p in [0.0, 0.25, REFERENCE_P, 1.0] {
            let ic = InitialCondition::uniform(p).unwrap();
            let series = iterate_mean_energy(&coupling, &ic, 0, &units).unwrap();
            assert_eq!(series.len(), 1);
            assert!((series.values()[0] - 3.0 * p).abs() < 1e-10, "p = {p}");
        }
    }

    #[test]
    fn one_step_from_resting_state_matches_matrix_oracle() {
        // Environment pinned to the last activation order, p = 0: one step
        // must equal the direct 8-dim product computed independently.
        let coupling = example_coupling();
        let units = FiringUnits::unit_energy();
        let series = per_eigenstate_series(&coupling, 6, 0.0, 1, &units).unwrap();

        let start = StateVector::basis(3, 0);
        let evolved = apply(coupling.branch(5), &start).unwrap();
        let h = network_hamiltonian(3, &units).unwrap();
        let rho = DensityOperator::from_pure(&evolved);
        let expected = expectation(&rho, &h).unwrap();
        assert!((series.values()[1] - expected).abs() < 1e-12);
        assert!((series.values()[0] - 0.0).abs() < 1e-15);
    }

    #[test]
    fn pure_branch_agrees_with_density_path() {
        let coupling = example_coupling();
        let units = FiringUnits::unit_energy();
        let ic = InitialCondition::uniform(0.3).unwrap();
        let dense = iterate_mean_energy(&coupling, &ic, 1000, &units).unwrap();
        let fast = pure_branch_mean_energy(&coupling, &ic, 1000, &units).unwrap();
        let max_dev = dense
            .values()
            .iter()
            .zip(fast.values())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(max_dev < 1e-10, "max deviation {max_dev}");
    }

    #[test]
    fn eigenstate_series_matches_concentrated_weights() {
        let coupling = example_coupling();
        let units = FiringUnits::unit_energy();
        let direct = per_eigenstate_series(&coupling, 2, 0.7, 50, &units).unwrap();
        let mut w = vec![0.0; 6];
        w[1] = 1.0;
        let ic = InitialCondition::new(0.7, EnvSelection::Weights(w)).unwrap();
        let via_weights = pure_branch_mean_energy(&coupling, &ic, 50, &units).unwrap();
        assert_eq!(direct, via_weights);
    }

    #[test]
    fn first_and_last_eigenstate_series_differ() {
        let coupling = example_coupling();
        let units = FiringUnits::unit_energy();
        let a = per_eigenstate_series(&coupling, 1, REFERENCE_P, 100, &units).unwrap();
        let b = per_eigenstate_series(&coupling, 6, REFERENCE_P, 100, &units).unwrap();
        let max_gap = a
            .values()
            .iter()
            .zip(b.values())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        assert!(max_gap > 1e-3, "different activation orders must diverge");
    }

    #[test]
    fn eigenstate_index_bounds() {
        let coupling = example_coupling();
        let units = FiringUnits::unit_energy();
        assert!(per_eigenstate_series(&coupling, 0, 0.5, 1, &units).is_err());
        assert!(per_eigenstate_series(&coupling, 7, 0.5, 1, &units).is_err());
    }

    #[test]
    fn energy_stays_in_physical_bounds() {
        let coupling = example_coupling();
        let units = FiringUnits::unit_energy();
        for p in [0.1, 0.5, REFERENCE_P] {
            let ic = InitialCondition::uniform(p).unwrap();
            let series = pure_branch_mean_energy(&coupling, &ic, 500, &units).unwrap();
            for &v in series.values() {
                assert!(v >= -1e-9 && v <= 3.0 + 1e-9);
            }
        }
    }

    #[test]
    fn weights_validation() {
        assert!(InitialCondition::new(0.5, EnvSelection::Weights(vec![0.5, 0.6]))
            .unwrap()
            .env_weights(2)
            .is_err());
        assert!(InitialCondition::new(0.5, EnvSelection::Weights(vec![0.5, -0.5]))
            .unwrap()
            .env_weights(2)
            .is_err());
        assert!(InitialCondition::new(1.5, EnvSelection::Uniform).is_err());
        let ok = InitialCondition::new(0.5, EnvSelection::Weights(vec![0.25; 4])).unwrap();
        assert_eq!(ok.env_weights(4).unwrap(), vec![0.25; 4]);
    }
}
