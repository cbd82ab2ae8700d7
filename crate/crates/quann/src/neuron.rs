//! Single-neuron physics: the firing Hamiltonian, Pauli operators,
//! conditional U(2) rotations, and the N-neuron total-firing-energy
//! Hamiltonian.

use crate::error::{Error, Result};
use crate::qcore::{kron, Cplx, DenseOperator};

/// Reduced Planck constant in J·s.
pub const HBAR: f64 = 1.054_571_817e-34;

/// Largest neuron count accepted by dense network operators.
pub const MAX_NETWORK_QUBITS: usize = 12;

/// Firing period and the energy quantum 2πħ/τ it induces.
///
/// The default convention fixes the firing eigenvalue at exactly one Joule,
/// which makes the mean firing energy numerically equal to the mean number
/// of firing neurons.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FiringUnits {
    tau: f64,
    energy_quantum: f64,
}

impl FiringUnits {
    /// Units with the firing eigenvalue pinned to exactly 1 J
    /// (τ = 2πħ seconds).
    pub fn unit_energy() -> Self {
        Self {
            tau: 2.0 * std::f64::consts::PI * HBAR,
            energy_quantum: 1.0,
        }
    }

    /// Units derived from an explicit firing period in seconds.
    pub fn from_tau(tau: f64) -> Result<Self> {
        if !(tau > 0.0) || !tau.is_finite() {
            return Err(Error::Invalid(format!("firing period must be positive, got {tau}")));
        }
        Ok(Self {
            tau,
            energy_quantum: 2.0 * std::f64::consts::PI * HBAR / tau,
        })
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// Energy of the firing eigenstate, in Joules.
    pub fn energy_quantum(&self) -> f64 {
        self.energy_quantum
    }
}

impl Default for FiringUnits {
    fn default() -> Self {
        Self::unit_energy()
    }
}

/// Pauli operator σ_j for j ∈ {1, 2, 3}.
pub fn pauli(j: usize) -> Result<DenseOperator> {
    let z = Cplx::ZERO;
    let one = Cplx::ONE;
    match j {
        1 => Ok(DenseOperator::two_by_two(z, one, one, z)),
        2 => Ok(DenseOperator::two_by_two(
            z,
            Cplx::new(0.0, -1.0),
            Cplx::new(0.0, 1.0),
            z,
        )),
        3 => Ok(DenseOperator::two_by_two(one, z, z, -one)),
        _ => Err(Error::Invalid(format!("Pauli index must be 1, 2 or 3, got {j}"))),
    }
}

/// Single-neuron firing Hamiltonian: eigenvalue 0 on the nonfiring state,
/// `energy_quantum` on the firing state.
pub fn firing_hamiltonian(units: &FiringUnits) -> DenseOperator {
    DenseOperator::diagonal(&[0.0, units.energy_quantum()])
}

/// Total-firing-energy Hamiltonian on n neurons: diagonal, with the entry at
/// pattern r equal to (number of firing neurons in r)·energy_quantum.
pub fn network_hamiltonian(n: usize, units: &FiringUnits) -> Result<DenseOperator> {
    if n < 1 || n > MAX_NETWORK_QUBITS {
        return Err(Error::Guard {
            context: "network Hamiltonian qubit count",
            limit: MAX_NETWORK_QUBITS,
            actual: n,
        });
    }
    let eq = units.energy_quantum();
    let diag: Vec<f64> = (0..1usize << n)
        .map(|pattern| pattern.count_ones() as f64 * eq)
        .collect();
    Ok(DenseOperator::diagonal(&diag))
}

/// Phase angle, rotation angle, and rotation axis of a conditional U(2)
/// transformation. The axis is a unit 3-vector (within 1e-12).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConditionalU2Params {
    omega: f64,
    theta: f64,
    axis: [f64; 3],
}

impl ConditionalU2Params {
    pub fn new(omega: f64, theta: f64, axis: [f64; 3]) -> Result<Self> {
        let norm = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > 1e-12 {
            return Err(Error::Invalid(format!(
                "rotation axis must be a unit vector, got norm {norm}"
            )));
        }
        if !omega.is_finite() || !theta.is_finite() {
            return Err(Error::NonFinite { context: "rotation angles" });
        }
        Ok(Self { omega, theta, axis })
    }

    /// Parameters of the identity transformation.
    pub fn identity() -> Self {
        Self {
            omega: 0.0,
            theta: 0.0,
            axis: [0.0, 0.0, 1.0],
        }
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn axis(&self) -> [f64; 3] {
        self.axis
    }
}

/// Conditional U(2) rotation evaluated at a fraction of the learning period:
/// e^{iωf/2}·[cos(θf/2)·1 − i·sin(θf/2)·(u₁σ₁ + u₂σ₂ + u₃σ₃)].
///
/// The closed form is exact, so no matrix exponential is involved; the
/// identity part of the generating Hamiltonian only contributes the global
/// phase factor.
pub fn rotation_u2(params: &ConditionalU2Params, fraction: f64) -> DenseOperator {
    let half = 0.5 * fraction;
    let phase = Cplx::from_polar(1.0, params.omega * half);
    let (s, c) = (params.theta * half).sin_cos();
    let [u1, u2, u3] = params.axis;
    // cos·1 − i·sin·(u·σ), assembled entrywise.
    let a = Cplx::new(c, -s * u3);
    let b = Cplx::new(-s * u2, -s * u1);
    let c_entry = Cplx::new(s * u2, -s * u1);
    let d = Cplx::new(c, s * u3);
    DenseOperator::two_by_two(phase * a, phase * b, phase * c_entry, phase * d)
}

/// Parameters that drive an output neuron from |+⟩ to the basis state of a
/// Boolean value: ω = (1−f)π, θ = (2−f)π/2, axis ((1−f)/√2, f, (1−f)/√2).
pub fn boolean_gate_params(f_value: bool) -> ConditionalU2Params {
    let f = f_value as u8 as f64;
    let pi = std::f64::consts::PI;
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    ConditionalU2Params {
        omega: (1.0 - f) * pi,
        theta: (2.0 - f) * pi / 2.0,
        axis: [(1.0 - f) * inv_sqrt2, f, (1.0 - f) * inv_sqrt2],
    }
}

/// Lift of a single-qubit gate onto qubit `k` (1-based) of an `n`-qubit
/// register: 1^⊗(k−1) ⊗ gate ⊗ 1^⊗(n−k).
pub fn lift_single_qubit(gate: &DenseOperator, k: usize, n: usize) -> Result<DenseOperator> {
    if gate.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            actual: gate.dim(),
        });
    }
    if k < 1 || k > n {
        return Err(Error::Invalid(format!("qubit index {k} outside 1..={n}")));
    }
    let left = DenseOperator::identity(1 << (k - 1));
    let right = DenseOperator::identity(1 << (n - k));
    kron(&kron(&left, gate)?, &right)
}
