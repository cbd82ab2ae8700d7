//! General digraph networks: per-neuron conditional link operators lifted to
//! the full register, products over permuted activation orders, and the set
//! of activation operators that are distinct up to a global phase.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::neuron::{pauli, MAX_NETWORK_QUBITS};
use crate::qcore::{equal_up_to_global_phase, neuron_bit, Cplx, DenseOperator, GLOBAL_PHASE_TOL};

/// Unitarity tolerance for the per-pattern link gates.
pub const LINK_UNITARITY_TOL: f64 = 1e-10;

/// Cap on the number of activation orders enumerated (6! products).
pub const MAX_PERMUTED_NEURONS: usize = 6;

/// Connection digraph over neurons 1..=n. An edge (j, k) makes neuron j an
/// input of neuron k; self-loops are rejected.
#[derive(Clone, Debug)]
pub struct Digraph {
    neurons: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl Digraph {
    pub fn new(neurons: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if neurons < 1 || neurons > MAX_NETWORK_QUBITS {
            return Err(Error::Guard {
                context: "digraph neuron count",
                limit: MAX_NETWORK_QUBITS,
                actual: neurons,
            });
        }
        let mut set = BTreeSet::new();
        for (j, k) in edges {
            if j < 1 || j > neurons || k < 1 || k > neurons {
                return Err(Error::Invalid(format!(
                    "edge ({j}, {k}) references a neuron outside 1..={neurons}"
                )));
            }
            if j == k {
                return Err(Error::Invalid(format!("self-loop on neuron {j} is not allowed")));
            }
            set.insert((j, k));
        }
        Ok(Self { neurons, edges: set })
    }

    pub fn neurons(&self) -> usize {
        self.neurons
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    /// Input neurons of k, ascending.
    pub fn inputs_of(&self, k: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter(|&&(_, to)| to == k)
            .map(|&(from, _)| from)
            .collect()
    }

    /// Neurons with at least one input link, ascending.
    pub fn receiving_neurons(&self) -> Vec<usize> {
        (1..=self.neurons)
            .filter(|&k| self.edges.iter().any(|&(_, to)| to == k))
            .collect()
    }
}

/// Per-neuron table mapping each firing pattern of the neuron's inputs
/// (read in ascending neuron order) to a single-qubit unitary.
#[derive(Clone, Debug)]
pub struct NeuralLinksFunction {
    owner: usize,
    input_order: Vec<usize>,
    table: Vec<DenseOperator>,
}

impl NeuralLinksFunction {
    pub fn new(owner: usize, input_order: Vec<usize>, table: Vec<DenseOperator>) -> Result<Self> {
        if input_order.is_empty() {
            return Err(Error::Invalid(format!("neuron {owner} has no input links")));
        }
        if !input_order.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::Invalid("input neurons must be listed in ascending order".into()));
        }
        if input_order.contains(&owner) {
            return Err(Error::Invalid(format!("neuron {owner} cannot be its own input")));
        }
        if table.len() != 1usize << input_order.len() {
            return Err(Error::Invalid(format!(
                "link table for neuron {owner} must have {} entries, got {}",
                1usize << input_order.len(),
                table.len()
            )));
        }
        for gate in &table {
            if gate.dim() != 2 {
                return Err(Error::DimensionMismatch {
                    expected: 2,
                    actual: gate.dim(),
                });
            }
            if !gate.is_unitary(LINK_UNITARITY_TOL) {
                return Err(Error::Invalid(format!(
                    "link gate for neuron {owner} is not unitary"
                )));
            }
        }
        Ok(Self {
            owner,
            input_order,
            table,
        })
    }

    pub fn owner(&self) -> usize {
        self.owner
    }

    pub fn input_order(&self) -> &[usize] {
        &self.input_order
    }

    /// Gate selected by the input substring, most significant bit first.
    pub fn gate(&self, s_in: usize) -> &DenseOperator {
        &self.table[s_in]
    }
}

/// A network architecture: neuron set, connection digraph, and one links
/// function per neuron that receives inputs.
#[derive(Clone, Debug)]
pub struct Architecture {
    digraph: Digraph,
    links: Vec<NeuralLinksFunction>,
}

impl Architecture {
    pub fn new(digraph: Digraph, mut links: Vec<NeuralLinksFunction>) -> Result<Self> {
        links.sort_by_key(|l| l.owner);
        let owners: Vec<usize> = links.iter().map(|l| l.owner).collect();
        let receiving = digraph.receiving_neurons();
        if owners != receiving {
            return Err(Error::Invalid(format!(
                "links must cover exactly the receiving neurons {receiving:?}, got {owners:?}"
            )));
        }
        for link in &links {
            let expected = digraph.inputs_of(link.owner);
            if link.input_order != expected {
                return Err(Error::Invalid(format!(
                    "neuron {} lists inputs {:?} but the digraph gives {:?}",
                    link.owner, link.input_order, expected
                )));
            }
        }
        Ok(Self { digraph, links })
    }

    pub fn neuron_count(&self) -> usize {
        self.digraph.neurons()
    }

    pub fn digraph(&self) -> &Digraph {
        &self.digraph
    }

    pub fn links(&self) -> &[NeuralLinksFunction] {
        &self.links
    }

    pub fn link_for(&self, k: usize) -> Option<&NeuralLinksFunction> {
        self.links.iter().find(|l| l.owner == k)
    }

    /// Indices of the neurons that take part in activation orderings.
    pub fn activation_indices(&self) -> Vec<usize> {
        self.digraph.receiving_neurons()
    }
}

/// One activation-order operator together with the permutation that produced
/// it. The permutation lists neuron indices in application order (first
/// entry acts first).
#[derive(Clone, Debug)]
pub struct OperatorSetMember {
    pub permutation: Vec<usize>,
    pub operator: DenseOperator,
}

impl OperatorSetMember {
    /// Written product label, rightmost factor acting first: the application
    /// order (1, 2, 3) reads "L3L2L1".
    pub fn label(&self) -> String {
        self.permutation
            .iter()
            .rev()
            .map(|k| format!("L{k}"))
            .collect()
    }
}

/// Activation operators pairwise distinct up to a global phase, in
/// lexicographic order of their application-order permutations.
#[derive(Clone, Debug)]
pub struct OperatorSet {
    members: Vec<OperatorSetMember>,
}

impl OperatorSet {
    /// Builds a set from explicit members, validating that all operators are
    /// unitary, share one dimension, and are pairwise distinct up to a
    /// global phase at the given tolerance.
    pub fn from_members(members: Vec<OperatorSetMember>, tol: f64) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::Invalid("operator set needs at least one member".into()));
        }
        let dim = members[0].operator.dim();
        for m in &members {
            if m.operator.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    actual: m.operator.dim(),
                });
            }
            if !m.operator.is_unitary(LINK_UNITARITY_TOL) {
                return Err(Error::Invalid("operator-set member is not unitary".into()));
            }
        }
        for i in 0..members.len() {
            for j in (i + 1)..members.len() {
                if equal_up_to_global_phase(&members[i].operator, &members[j].operator, tol)? {
                    return Err(Error::Invalid(format!(
                        "members {i} and {j} coincide up to a global phase"
                    )));
                }
            }
        }
        Ok(Self { members })
    }

    pub fn members(&self) -> &[OperatorSetMember] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn member(&self, index: usize) -> &OperatorSetMember {
        &self.members[index]
    }
}

/// Lifts the links function of neuron k onto the full 2^n register: for each
/// basis pattern the gate selected by the input neurons' bits acts on qubit
/// k, identity elsewhere.
pub fn lift_links_operator(arch: &Architecture, k: usize) -> Result<DenseOperator> {
    let n = arch.neuron_count();
    let link = arch
        .link_for(k)
        .ok_or_else(|| Error::Invalid(format!("neuron {k} has no input links")))?;
    let dim = 1usize << n;
    let mut op = DenseOperator::zeros(dim);
    for col in 0..dim {
        let mut s_in = 0usize;
        for &input in link.input_order() {
            s_in = (s_in << 1) | neuron_bit(col, input, n);
        }
        let gate = link.gate(s_in);
        let old_bit = neuron_bit(col, k, n);
        let mask = 1usize << (n - k);
        for new_bit in 0..2usize {
            let row = (col & !mask) | (new_bit << (n - k));
            let value = gate.get(new_bit, old_bit);
            if value != Cplx::ZERO {
                op.set(row, col, value);
            }
        }
    }
    Ok(op)
}

/// Product of the lifted operators in the given application order: the first
/// listed neuron acts first, so the written product has it rightmost.
pub fn permutation_operator(arch: &Architecture, perm: &[usize]) -> Result<DenseOperator> {
    let expected = arch.activation_indices();
    let mut sorted = perm.to_vec();
    sorted.sort_unstable();
    if sorted != expected {
        return Err(Error::Invalid(format!(
            "{perm:?} is not a permutation of the receiving neurons {expected:?}"
        )));
    }
    let mut acc = DenseOperator::identity(1 << arch.neuron_count());
    for &k in perm {
        acc = lift_links_operator(arch, k)?.matmul(&acc)?;
    }
    Ok(acc)
}

fn lexicographic_permutations(items: &[usize]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(items.len());
    let mut used = vec![false; items.len()];
    fn descend(
        items: &[usize],
        used: &mut [bool],
        current: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if current.len() == items.len() {
            out.push(current.clone());
            return;
        }
        for i in 0..items.len() {
            if !used[i] {
                used[i] = true;
                current.push(items[i]);
                descend(items, used, current, out);
                current.pop();
                used[i] = false;
            }
        }
    }
    descend(items, &mut used, &mut current, &mut out);
    out
}

/// Enumerates every activation order, keeping the first representative of
/// each global-phase equivalence class in lexicographic permutation order.
pub fn distinct_operator_set(arch: &Architecture, tol: f64) -> Result<OperatorSet> {
    let indices = arch.activation_indices();
    if indices.len() > MAX_PERMUTED_NEURONS {
        return Err(Error::Guard {
            context: "permuted activation orders",
            limit: MAX_PERMUTED_NEURONS,
            actual: indices.len(),
        });
    }
    if indices.is_empty() {
        return Err(Error::Invalid("architecture has no receiving neurons".into()));
    }
    let mut lifted = Vec::new();
    for &k in &indices {
        lifted.push((k, lift_links_operator(arch, k)?));
    }
    let lift_of = |k: usize| -> &DenseOperator {
        &lifted.iter().find(|(owner, _)| *owner == k).expect("lifted").1
    };

    let mut members: Vec<OperatorSetMember> = Vec::new();
    for perm in lexicographic_permutations(&indices) {
        let mut acc = DenseOperator::identity(1 << arch.neuron_count());
        for &k in &perm {
            acc = lift_of(k).matmul(&acc)?;
        }
        let mut duplicate = false;
        for member in &members {
            if equal_up_to_global_phase(&member.operator, &acc, tol)? {
                duplicate = true;
                break;
            }
        }
        if !duplicate {
            members.push(OperatorSetMember {
                permutation: perm,
                operator: acc,
            });
        }
    }
    Ok(OperatorSet { members })
}

/// The built-in three-neuron recurrent network: every neuron is conditioned
/// on the other two via Walsh-Hadamard, identity, or NOT gates.
///
/// - neuron 1 gets the identity when neurons 2, 3 agree and Walsh-Hadamard
///   when they differ;
/// - neuron 2 gets Walsh-Hadamard exactly when neuron 1 fires;
/// - neuron 3 gets NOT when neurons 1, 2 agree and the identity otherwise.
pub fn example_network() -> Architecture {
    let inv = std::f64::consts::FRAC_1_SQRT_2;
    let walsh = DenseOperator::two_by_two(
        Cplx::new(inv, 0.0),
        Cplx::new(inv, 0.0),
        Cplx::new(inv, 0.0),
        Cplx::new(-inv, 0.0),
    );
    let identity = DenseOperator::identity(2);
    let not = pauli(1).expect("σ₁ exists");

    let digraph = Digraph::new(3, [(2, 1), (3, 1), (1, 2), (1, 3), (2, 3)]).expect("valid digraph");
    let links = vec![
        NeuralLinksFunction::new(
            1,
            vec![2, 3],
            vec![identity.clone(), walsh.clone(), walsh.clone(), identity.clone()],
        )
        .expect("valid links for neuron 1"),
        NeuralLinksFunction::new(2, vec![1], vec![identity.clone(), walsh])
            .expect("valid links for neuron 2"),
        NeuralLinksFunction::new(
            3,
            vec![1, 2],
            vec![not.clone(), identity.clone(), identity, not],
        )
        .expect("valid links for neuron 3"),
    ];
    Architecture::new(digraph, links).expect("example network is consistent")
}

/// Default global-phase tolerance re-exported for operator-set callers.
pub fn default_phase_tol() -> f64 {
    GLOBAL_PHASE_TOL
}
