//! Two-layer feedforward networks: the neural links operator, the learning
//! stage, the backpropagation operator, and the two canonical problem
//! constructions (firing-pattern selection and Boolean-function
//! representation).
//!
//! Registers are laid out input-first: for m input and n output neurons the
//! basis index is `r·2^n + s` with `r` the input pattern and `s` the output
//! pattern, both most-significant-neuron-first.

use crate::error::{Error, Result};
use crate::neuron::{boolean_gate_params, pauli, rotation_u2, ConditionalU2Params, MAX_NETWORK_QUBITS};
use crate::qcore::{apply, kron, neuron_bit, DenseOperator, StateVector};

/// Unitarity tolerance for backpropagation circuits.
pub const CIRCUIT_UNITARITY_TOL: f64 = 1e-10;

/// A feedforward net holds one conditional U(2) parameter set per
/// (output neuron, input firing pattern) pair. The table is total by
/// construction and the network size is capped at [`MAX_NETWORK_QUBITS`].
#[derive(Clone, Debug)]
pub struct FeedforwardNet {
    inputs: usize,
    outputs: usize,
    // params[r * outputs + k] for input pattern r and output slot k (0-based)
    params: Vec<ConditionalU2Params>,
}

impl FeedforwardNet {
    /// Builds a net from a parameter function over (output slot, input
    /// pattern). Output slots are 0-based; input patterns run over 0..2^m.
    pub fn from_fn(
        inputs: usize,
        outputs: usize,
        mut f: impl FnMut(usize, usize) -> ConditionalU2Params,
    ) -> Result<Self> {
        if inputs < 1 || outputs < 1 {
            return Err(Error::Invalid(
                "a feedforward net needs at least one input and one output neuron".into(),
            ));
        }
        let total = inputs + outputs;
        if total > MAX_NETWORK_QUBITS {
            return Err(Error::Guard {
                context: "feedforward network size",
                limit: MAX_NETWORK_QUBITS,
                actual: total,
            });
        }
        let patterns = 1usize << inputs;
        let mut params = Vec::with_capacity(patterns * outputs);
        for r in 0..patterns {
            for k in 0..outputs {
                params.push(f(k, r));
            }
        }
        Ok(Self {
            inputs,
            outputs,
            params,
        })
    }

    /// Builds a net whose gates drive each output neuron from |+⟩ to the
    /// basis state of `f(k, r)`.
    pub fn from_boolean_functions(
        inputs: usize,
        outputs: usize,
        mut f: impl FnMut(usize, usize) -> bool,
    ) -> Result<Self> {
        Self::from_fn(inputs, outputs, |k, r| boolean_gate_params(f(k, r)))
    }

    pub fn inputs(&self) -> usize {
        self.inputs
    }

    pub fn outputs(&self) -> usize {
        self.outputs
    }

    pub fn qubits(&self) -> usize {
        self.inputs + self.outputs
    }

    /// Parameters for output slot `k` (0-based) under input pattern `r`.
    pub fn param(&self, k: usize, r: usize) -> &ConditionalU2Params {
        &self.params[r * self.outputs + k]
    }
}

/// Backpropagation circuits, one unitary on the input register per output
/// firing pattern.
#[derive(Clone, Debug)]
pub struct BackpropSpec {
    input_qubits: usize,
    output_qubits: usize,
    circuits: Vec<DenseOperator>,
}

impl BackpropSpec {
    /// Validates that there is one circuit per output pattern, all of
    /// dimension 2^m and unitary within [`CIRCUIT_UNITARITY_TOL`].
    pub fn new(input_qubits: usize, circuits: Vec<DenseOperator>) -> Result<Self> {
        if input_qubits < 1 {
            return Err(Error::Invalid("backpropagation needs at least one input qubit".into()));
        }
        if circuits.is_empty() || !circuits.len().is_power_of_two() {
            return Err(Error::Invalid(format!(
                "circuit count must be a power of two, got {}",
                circuits.len()
            )));
        }
        let output_qubits = circuits.len().trailing_zeros() as usize;
        if input_qubits + output_qubits > MAX_NETWORK_QUBITS {
            return Err(Error::Guard {
                context: "backpropagation network size",
                limit: MAX_NETWORK_QUBITS,
                actual: input_qubits + output_qubits,
            });
        }
        let dim = 1usize << input_qubits;
        for c in &circuits {
            if c.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    actual: c.dim(),
                });
            }
            if !c.is_unitary(CIRCUIT_UNITARITY_TOL) {
                return Err(Error::Invalid("backpropagation circuit is not unitary".into()));
            }
        }
        Ok(Self {
            input_qubits,
            output_qubits,
            circuits,
        })
    }

    pub fn input_qubits(&self) -> usize {
        self.input_qubits
    }

    pub fn output_qubits(&self) -> usize {
        self.output_qubits
    }

    /// Circuit selected by output pattern `s`.
    pub fn circuit(&self, s: usize) -> &DenseOperator {
        &self.circuits[s]
    }
}

/// The neural links operator at a fraction of the learning period:
/// block-diagonal over input patterns, with the block for pattern r being
/// the tensor product of the per-output conditional rotations.
pub fn links_operator(net: &FeedforwardNet, fraction: f64) -> Result<DenseOperator> {
    let in_dim = 1usize << net.inputs;
    let out_dim = 1usize << net.outputs;
    let mut op = DenseOperator::zeros(in_dim * out_dim);
    for r in 0..in_dim {
        let mut block = rotation_u2(net.param(0, r), fraction);
        for k in 1..net.outputs {
            block = kron(&block, &rotation_u2(net.param(k, r), fraction))?;
        }
        let base = r * out_dim;
        for i in 0..out_dim {
            for j in 0..out_dim {
                op.set(base + i, base + j, block.get(i, j));
            }
        }
    }
    Ok(op)
}

/// The learning-stage transition: the links operator evaluated at the full
/// learning period, applied to the initial state.
pub fn learning_stage(net: &FeedforwardNet, psi0: &StateVector) -> Result<StateVector> {
    if psi0.num_qubits() != net.qubits() {
        return Err(Error::DimensionMismatch {
            expected: net.qubits(),
            actual: psi0.num_qubits(),
        });
    }
    apply(&links_operator(net, 1.0)?, psi0)
}

/// The backpropagation operator: Σ_s Ĉ_s ⊗ |s⟩⟨s|, applying circuit Ĉ_s to
/// the input register whenever the output register shows pattern s.
pub fn backprop_operator(spec: &BackpropSpec) -> Result<DenseOperator> {
    let in_dim = 1usize << spec.input_qubits;
    let out_dim = 1usize << spec.output_qubits;
    let mut op = DenseOperator::zeros(in_dim * out_dim);
    for s in 0..out_dim {
        let circuit = spec.circuit(s);
        for i in 0..in_dim {
            for j in 0..in_dim {
                op.set(i * out_dim + s, j * out_dim + s, circuit.get(i, j));
            }
        }
    }
    Ok(op)
}

/// The two-stage transition: learning stage followed by backpropagation.
pub fn two_stage(
    net: &FeedforwardNet,
    spec: &BackpropSpec,
    psi0: &StateVector,
) -> Result<StateVector> {
    if spec.input_qubits != net.inputs || spec.output_qubits != net.outputs {
        return Err(Error::DimensionMismatch {
            expected: net.qubits(),
            actual: spec.input_qubits + spec.output_qubits,
        });
    }
    let learned = learning_stage(net, psi0)?;
    apply(&backprop_operator(spec)?, &learned)
}

/// Tensor product of identity and NOT gates selected by the bits of `s`:
/// neuron k gets σ₁ when bit k of s is set, identity otherwise.
fn conditional_not_circuit(s: usize, m: usize) -> Result<DenseOperator> {
    let x = pauli(1)?;
    let identity = DenseOperator::identity(2);
    let first = if neuron_bit(s, 1, m) == 1 { &x } else { &identity };
    let mut acc = first.clone();
    for k in 2..=m {
        let gate = if neuron_bit(s, k, m) == 1 { &x } else { &identity };
        acc = kron(&acc, gate)?;
    }
    Ok(acc)
}

/// Builds the firing-pattern-selection network for the target pattern `q`:
/// the learning stage marks every input neuron that deviates from `q`, and
/// the backpropagation stage applies the corresponding controlled negations,
/// leaving the input register exactly in |q⟩.
pub fn build_firing_pattern_selector(q: &[bool]) -> Result<(FeedforwardNet, BackpropSpec)> {
    let m = q.len();
    if m < 1 {
        return Err(Error::Invalid("target pattern must have at least one neuron".into()));
    }
    let net = FeedforwardNet::from_boolean_functions(m, m, |k, r| {
        (neuron_bit(r, k + 1, m) == 1) != q[k]
    })?;
    let circuits = (0..1usize << m)
        .map(|s| conditional_not_circuit(s, m))
        .collect::<Result<Vec<_>>>()?;
    let spec = BackpropSpec::new(m, circuits)?;
    Ok((net, spec))
}

/// Total map from n-bit inputs to m-bit outputs, stored as a table over all
/// 2^n input strings.
#[derive(Clone, Debug)]
pub struct BooleanMap {
    n_in: usize,
    m_out: usize,
    table: Vec<usize>,
}

impl BooleanMap {
    pub fn new(n_in: usize, m_out: usize, table: Vec<usize>) -> Result<Self> {
        if n_in < 1 || m_out < 1 {
            return Err(Error::Invalid("Boolean map needs at least one input and output bit".into()));
        }
        if table.len() != 1usize << n_in {
            return Err(Error::Invalid(format!(
                "Boolean map table must cover all {} inputs, got {} rows",
                1usize << n_in,
                table.len()
            )));
        }
        if let Some(&bad) = table.iter().find(|&&v| v >= 1usize << m_out) {
            return Err(Error::Invalid(format!(
                "Boolean map value {bad} does not fit in {m_out} output bits"
            )));
        }
        Ok(Self { n_in, m_out, table })
    }

    pub fn n_in(&self) -> usize {
        self.n_in
    }

    pub fn m_out(&self) -> usize {
        self.m_out
    }

    /// Output string (as an integer, most significant bit first) for input h.
    pub fn value(&self, h: usize) -> usize {
        self.table[h]
    }
}

/// Builds the Boolean-representation network for `g`: n+m input neurons
/// (function argument followed by function value register) and m output
/// neurons. After the two stages on an all-|+⟩ start, the input register
/// holds the equally weighted superposition of all |h g(h)⟩ and the output
/// register returns to |+⟩^⊗m.
pub fn build_boolean_representation(g: &BooleanMap) -> Result<(FeedforwardNet, BackpropSpec)> {
    let n = g.n_in();
    let m = g.m_out();
    let input_qubits = n + m;
    let net = FeedforwardNet::from_boolean_functions(input_qubits, m, |k, pattern| {
        let h = pattern >> m;
        let r = pattern & ((1 << m) - 1);
        let r_k = neuron_bit(r, k + 1, m);
        let g_k = neuron_bit(g.value(h), k + 1, m);
        r_k != g_k
    })?;
    let id_n = DenseOperator::identity(1 << n);
    let circuits = (0..1usize << m)
        .map(|s| kron(&id_n, &conditional_not_circuit(s, m)?))
        .collect::<Result<Vec<_>>>()?;
    let spec = BackpropSpec::new(input_qubits, circuits)?;
    Ok((net, spec))
}

/// Initial state for the selection problem: the given input-layer state with
/// every output neuron at |+⟩.
pub fn selector_initial_state(psi_input: &StateVector) -> Result<StateVector> {
    psi_input.tensor(&StateVector::plus(psi_input.num_qubits()))
}

/// Initial state for the Boolean-representation problem: every neuron at |+⟩.
pub fn boolean_initial_state(n: usize, m: usize) -> StateVector {
    StateVector::plus(n + 2 * m)
}
