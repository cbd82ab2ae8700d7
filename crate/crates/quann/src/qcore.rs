//! Dense complex linear algebra over the firing-pattern basis.
//!
//! Everything here is a plain dense representation: state vectors over the
//! 2^N firing-pattern basis, square operators, and density operators on the
//! environment ⊗ network space. Neuron `k` (1-based) maps to the k-th bit
//! from the most significant side of the basis index, so the pattern
//! `r₁r₂r₃` has index `4r₁ + 2r₂ + r₃`. All values are immutable after
//! construction and every operation is a pure function.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Complex amplitude scalar.
pub type Cplx = Complex64;

/// Normalization tolerance on Σ|amps|² for state vectors.
pub const NORM_TOL: f64 = 1e-10;
/// Elementwise Hermiticity tolerance for density operators.
pub const HERMITICITY_TOL: f64 = 1e-10;
/// Trace tolerance for density operators.
pub const TRACE_TOL: f64 = 1e-9;
/// Tolerance on the imaginary residue of an expectation-value trace.
pub const EXPECTATION_IMAG_TOL: f64 = 1e-9;
/// Default tolerance for the global-phase comparison of unitaries.
pub const GLOBAL_PHASE_TOL: f64 = 1e-8;

/// Bit of `pattern` belonging to neuron `k` (1-based) in an `n`-neuron
/// register. Neuron 1 is the most significant bit.
#[inline]
pub fn neuron_bit(pattern: usize, k: usize, n: usize) -> usize {
    debug_assert!(k >= 1 && k <= n);
    (pattern >> (n - k)) & 1
}

fn all_finite(entries: &[Cplx]) -> bool {
    entries.iter().all(|c| c.re.is_finite() && c.im.is_finite())
}

// ---------------------------------------------------------------------------
// StateVector
// ---------------------------------------------------------------------------

/// Normalized complex amplitude vector over the 2^N firing-pattern basis.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<Cplx>,
}

impl StateVector {
    /// Builds a state from raw amplitudes, enforcing finiteness and
    /// normalization within [`NORM_TOL`].
    pub fn new(num_qubits: usize, amps: Vec<Cplx>) -> Result<Self> {
        if num_qubits == 0 {
            return Err(Error::Invalid("state needs at least one qubit".into()));
        }
        let dim = 1usize
            .checked_shl(num_qubits as u32)
            .ok_or(Error::SizeOverflow {
                left: 2,
                right: num_qubits,
            })?;
        if amps.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: amps.len(),
            });
        }
        if !all_finite(&amps) {
            return Err(Error::NonFinite { context: "state amplitudes" });
        }
        let norm_sq: f64 = amps.iter().map(|c| c.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm_sq });
        }
        Ok(Self { num_qubits, amps })
    }

    /// Computational basis state |pattern⟩.
    pub fn basis(num_qubits: usize, pattern: usize) -> Self {
        let dim = 1usize << num_qubits;
        assert!(pattern < dim, "basis index out of range");
        let mut amps = vec![Cplx::ZERO; dim];
        amps[pattern] = Cplx::ONE;
        Self { num_qubits, amps }
    }

    /// The symmetric superposition |+⟩^⊗n with every amplitude 2^{-n/2}.
    pub fn plus(num_qubits: usize) -> Self {
        let dim = 1usize << num_qubits;
        let amp = Cplx::new(1.0 / (dim as f64).sqrt(), 0.0);
        Self {
            num_qubits,
            amps: vec![amp; dim],
        }
    }

    pub(crate) fn from_raw_unchecked(num_qubits: usize, amps: Vec<Cplx>) -> Self {
        Self { num_qubits, amps }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[Cplx] {
        &self.amps
    }

    pub fn amp(&self, index: usize) -> Cplx {
        self.amps[index]
    }

    pub fn norm_sq(&self) -> f64 {
        self.amps.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Tensor product self ⊗ other, with self supplying the high bits.
    pub fn tensor(&self, other: &StateVector) -> Result<StateVector> {
        let qubits = self
            .num_qubits
            .checked_add(other.num_qubits)
            .filter(|&q| q < usize::BITS as usize)
            .ok_or(Error::SizeOverflow {
                left: self.dim(),
                right: other.dim(),
            })?;
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        Ok(StateVector {
            num_qubits: qubits,
            amps,
        })
    }

    /// ⟨self|other⟩
    pub fn inner(&self, other: &StateVector) -> Cplx {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Largest |self_i − other_i| over the amplitude entries.
    pub fn max_abs_diff(&self, other: &StateVector) -> f64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Euclidean distance ‖self − other‖.
    pub fn l2_distance(&self, other: &StateVector) -> f64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

// ---------------------------------------------------------------------------
// DenseOperator
// ---------------------------------------------------------------------------

/// Square complex matrix in row-major order. Unitaries, Hamiltonians and
/// projectors all share this representation.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseOperator {
    dim: usize,
    entries: Vec<Cplx>,
}

impl DenseOperator {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "operator dimension must be at least 1");
        Self {
            dim,
            entries: vec![Cplx::ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut op = Self::zeros(dim);
        for i in 0..dim {
            op.entries[i * dim + i] = Cplx::ONE;
        }
        op
    }

    /// Builds an operator entry by entry from `f(row, col)`.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Cplx) -> Self {
        let mut op = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                op.entries[i * dim + j] = f(i, j);
            }
        }
        op
    }

    /// 2×2 operator [[a, b], [c, d]].
    pub fn two_by_two(a: Cplx, b: Cplx, c: Cplx, d: Cplx) -> Self {
        Self {
            dim: 2,
            entries: vec![a, b, c, d],
        }
    }

    /// Diagonal operator with the given real entries.
    pub fn diagonal(diag: &[f64]) -> Self {
        let mut op = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            op.entries[i * diag.len() + i] = Cplx::new(d, 0.0);
        }
        op
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Cplx] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Cplx {
        self.entries[row * self.dim + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: Cplx) {
        self.entries[row * self.dim + col] = value;
    }

    pub fn all_finite(&self) -> bool {
        all_finite(&self.entries)
    }

    /// Matrix product self·other.
    pub fn matmul(&self, other: &DenseOperator) -> Result<DenseOperator> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: other.dim,
            });
        }
        Ok(DenseOperator {
            dim: self.dim,
            entries: matmul_raw(&self.entries, &other.entries, self.dim),
        })
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> DenseOperator {
        let d = self.dim;
        DenseOperator::from_fn(d, |i, j| self.entries[j * d + i].conj())
    }

    pub fn scaled(&self, factor: Cplx) -> DenseOperator {
        DenseOperator {
            dim: self.dim,
            entries: self.entries.iter().map(|e| e * factor).collect(),
        }
    }

    pub fn add(&self, other: &DenseOperator) -> Result<DenseOperator> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: other.dim,
            });
        }
        Ok(DenseOperator {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &DenseOperator) -> Result<DenseOperator> {
        self.add(&other.scaled(Cplx::new(-1.0, 0.0)))
    }

    pub fn trace(&self) -> Cplx {
        (0..self.dim).map(|i| self.entries[i * self.dim + i]).sum()
    }

    /// Largest |self_ij − other_ij|; panics on dimension mismatch.
    pub fn max_abs_diff(&self, other: &DenseOperator) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.entries.iter().map(|e| e.norm()).fold(0.0, f64::max)
    }

    /// U†U = I within `tol` elementwise.
    pub fn is_unitary(&self, tol: f64) -> bool {
        let product = self.dagger().matmul(self).expect("dims match");
        product.max_abs_diff(&DenseOperator::identity(self.dim)) <= tol
    }

    /// A = A† within `tol` elementwise.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        let d = self.dim;
        for i in 0..d {
            for j in i..d {
                if (self.entries[i * d + j] - self.entries[j * d + i].conj()).norm() > tol {
                    return false;
                }
            }
        }
        true
    }
}

fn matmul_raw(a: &[Cplx], b: &[Cplx], dim: usize) -> Vec<Cplx> {
    let mut out = vec![Cplx::ZERO; dim * dim];
    for i in 0..dim {
        for k in 0..dim {
            let aik = a[i * dim + k];
            if aik == Cplx::ZERO {
                continue;
            }
            let brow = &b[k * dim..(k + 1) * dim];
            let orow = &mut out[i * dim..(i + 1) * dim];
            for j in 0..dim {
                orow[j] += aik * brow[j];
            }
        }
    }
    out
}

pub(crate) fn matvec_raw(a: &[Cplx], x: &[Cplx], dim: usize) -> Vec<Cplx> {
    let mut out = vec![Cplx::ZERO; dim];
    for i in 0..dim {
        let row = &a[i * dim..(i + 1) * dim];
        let mut acc = Cplx::ZERO;
        for j in 0..dim {
            acc += row[j] * x[j];
        }
        out[i] = acc;
    }
    out
}

// ---------------------------------------------------------------------------
// DensityOperator
// ---------------------------------------------------------------------------

/// Hermitian, unit-trace operator on the environment ⊗ network space.
///
/// Hermiticity and trace are enforced at construction; positive
/// semidefiniteness is only checked in explicit validation paths, never per
/// evolution step.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator {
    dim: usize,
    entries: Vec<Cplx>,
}

impl DensityOperator {
    pub fn new(dim: usize, entries: Vec<Cplx>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                actual: entries.len(),
            });
        }
        if !all_finite(&entries) {
            return Err(Error::NonFinite { context: "density entries" });
        }
        let rho = Self { dim, entries };
        if !rho.as_operator().is_hermitian(HERMITICITY_TOL) {
            return Err(Error::Numerical {
                context: "density Hermiticity",
                residue: f64::NAN,
            });
        }
        let trace = rho.trace();
        if (trace.re - 1.0).abs() > TRACE_TOL || trace.im.abs() > TRACE_TOL {
            return Err(Error::Numerical {
                context: "density trace",
                residue: (trace - Cplx::ONE).norm(),
            });
        }
        Ok(rho)
    }

    /// |ψ⟩⟨ψ| for a normalized state.
    pub fn from_pure(psi: &StateVector) -> Self {
        let d = psi.dim();
        let mut entries = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                entries.push(psi.amp(i) * psi.amp(j).conj());
            }
        }
        Self { dim: d, entries }
    }

    pub(crate) fn from_raw_unchecked(dim: usize, entries: Vec<Cplx>) -> Self {
        Self { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Cplx] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Cplx {
        self.entries[row * self.dim + col]
    }

    pub fn trace(&self) -> Cplx {
        (0..self.dim).map(|i| self.entries[i * self.dim + i]).sum()
    }

    /// View as a plain operator (copies the entries).
    pub fn as_operator(&self) -> DenseOperator {
        DenseOperator {
            dim: self.dim,
            entries: self.entries.clone(),
        }
    }

    pub fn max_abs_diff(&self, other: &DensityOperator) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Validation-path check that every eigenvalue is ≥ −tol.
    pub fn validate_positivity(&self, tol: f64) -> Result<()> {
        let eigs = hermitian_eigenvalues(&self.as_operator())?;
        match eigs.first() {
            Some(&min) if min < -tol => Err(Error::Numerical {
                context: "density positivity",
                residue: -min,
            }),
            _ => Ok(()),
        }
    }
}

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// Tensor (Kronecker) product a ⊗ b, with a supplying the high bits.
pub fn kron(a: &DenseOperator, b: &DenseOperator) -> Result<DenseOperator> {
    let dim = a
        .dim
        .checked_mul(b.dim)
        .filter(|&d| d <= 1 << 30)
        .ok_or(Error::SizeOverflow {
            left: a.dim,
            right: b.dim,
        })?;
    let mut out = DenseOperator::zeros(dim);
    for ia in 0..a.dim {
        for ja in 0..a.dim {
            let factor = a.get(ia, ja);
            if factor == Cplx::ZERO {
                continue;
            }
            for ib in 0..b.dim {
                for jb in 0..b.dim {
                    out.set(ia * b.dim + ib, ja * b.dim + jb, factor * b.get(ib, jb));
                }
            }
        }
    }
    Ok(out)
}

/// Applies u to a state: u·ψ. The caller guarantees u is unitary; dimension
/// agreement, finiteness, and norm preservation are checked on the result.
pub fn apply(u: &DenseOperator, psi: &StateVector) -> Result<StateVector> {
    if u.dim != psi.dim() {
        return Err(Error::DimensionMismatch {
            expected: psi.dim(),
            actual: u.dim,
        });
    }
    let amps = matvec_raw(&u.entries, psi.amps(), u.dim);
    if !all_finite(&amps) {
        return Err(Error::NonFinite { context: "apply result" });
    }
    let norm_sq: f64 = amps.iter().map(|c| c.norm_sqr()).sum();
    if (norm_sq - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized { norm_sq });
    }
    Ok(StateVector::from_raw_unchecked(psi.num_qubits(), amps))
}

/// One unitary step of the density dynamics: u·ρ·u†.
pub fn evolve_density(u: &DenseOperator, rho: &DensityOperator) -> Result<DensityOperator> {
    if u.dim != rho.dim {
        return Err(Error::DimensionMismatch {
            expected: rho.dim,
            actual: u.dim,
        });
    }
    let udag = u.dagger();
    let tmp = matmul_raw(&u.entries, &rho.entries, u.dim);
    let entries = matmul_raw(&tmp, &udag.entries, u.dim);
    Ok(DensityOperator::from_raw_unchecked(rho.dim, entries))
}

/// Tr(ρ·a) for Hermitian a; the imaginary residue of the trace must stay
/// below [`EXPECTATION_IMAG_TOL`] and is discarded after the check.
pub fn expectation(rho: &DensityOperator, a: &DenseOperator) -> Result<f64> {
    if rho.dim != a.dim {
        return Err(Error::DimensionMismatch {
            expected: rho.dim,
            actual: a.dim,
        });
    }
    let d = rho.dim;
    let mut acc = Cplx::ZERO;
    for i in 0..d {
        for j in 0..d {
            acc += rho.entries[i * d + j] * a.entries[j * d + i];
        }
    }
    if acc.im.abs() > EXPECTATION_IMAG_TOL {
        return Err(Error::Numerical {
            context: "expectation imaginary residue",
            residue: acc.im.abs(),
        });
    }
    Ok(acc.re)
}

/// Whether a = e^{iφ}·b for some phase φ, judged by |Tr(a†·b)| ≥ dim·(1−tol).
pub fn equal_up_to_global_phase(a: &DenseOperator, b: &DenseOperator, tol: f64) -> Result<bool> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch {
            expected: a.dim,
            actual: b.dim,
        });
    }
    let d = a.dim;
    let mut overlap = Cplx::ZERO;
    for i in 0..d {
        for j in 0..d {
            overlap += a.entries[i * d + j].conj() * b.entries[i * d + j];
        }
    }
    Ok(overlap.norm() >= d as f64 * (1.0 - tol))
}

// ---------------------------------------------------------------------------
// Hermitian eigenvalues (validation utility)
// ---------------------------------------------------------------------------

/// Eigenvalues of a Hermitian operator, ascending, via cyclic Jacobi
/// rotations. Used only on validation paths; O(dim³) per sweep.
pub fn hermitian_eigenvalues(a: &DenseOperator) -> Result<Vec<f64>> {
    if !a.is_hermitian(1e-8) {
        return Err(Error::Invalid("eigenvalues need a Hermitian operator".into()));
    }
    let d = a.dim;
    let mut m = a.entries.clone();
    let scale = a.max_abs_entry().max(1.0);

    for _sweep in 0..100 {
        let mut off = 0.0f64;
        for i in 0..d {
            for j in (i + 1)..d {
                off += m[i * d + j].norm_sqr();
            }
        }
        if off.sqrt() <= 1e-14 * scale {
            break;
        }
        for p in 0..d {
            for q in (p + 1)..d {
                let apq = m[p * d + q];
                let mag = apq.norm();
                if mag <= 1e-300 {
                    continue;
                }
                let nu = apq / mag; // phase of the off-diagonal entry
                let alpha = m[p * d + p].re;
                let beta = m[q * d + q].re;
                let theta = 0.5 * (2.0 * mag).atan2(alpha - beta);
                let (s, c) = theta.sin_cos();
                let cs = Cplx::new(c, 0.0);
                let sn = Cplx::new(s, 0.0);
                // Column update: A ← A·R with R mixing columns p and q.
                for i in 0..d {
                    let aip = m[i * d + p];
                    let aiq = m[i * d + q];
                    m[i * d + p] = cs * aip + nu.conj() * sn * aiq;
                    m[i * d + q] = -sn * aip + nu.conj() * cs * aiq;
                }
                // Row update: A ← R†·A.
                for j in 0..d {
                    let apj = m[p * d + j];
                    let aqj = m[q * d + j];
                    m[p * d + j] = cs * apj + nu * sn * aqj;
                    m[q * d + j] = -sn * apj + nu * cs * aqj;
                }
            }
        }
    }

    let mut eigs: Vec<f64> = (0..d).map(|i| m[i * d + i].re).collect();
    eigs.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
    Ok(eigs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::neuron::{firing_hamiltonian, pauli, FiringUnits};

    fn c(re: f64, im: f64) -> Cplx {
        Cplx::new(re, im)
    }

    fn hadamard() -> DenseOperator {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        DenseOperator::two_by_two(c(h, 0.0), c(h, 0.0), c(h, 0.0), c(-h, 0.0))
    }

    #[test]
    fn kron_of_identities_is_identity() {
        let i2 = DenseOperator::identity(2);
        let i4 = kron(&i2, &i2).unwrap();
        assert_eq!(i4, DenseOperator::identity(4));
    }

    #[test]
    fn kron_sigma3_sigma3_flips_sign_on_mixed_pattern() {
        let s3 = pauli(3).unwrap();
        let zz = kron(&s3, &s3).unwrap();
        // |01⟩ has index 1; one firing neuron gives eigenvalue (−1)¹·(−1)⁰ = −1.
        assert_eq!(zz.get(1, 1), c(-1.0, 0.0));
        assert_eq!(zz.get(0, 0), c(1.0, 0.0));
        assert_eq!(zz.get(3, 3), c(1.0, 0.0));
    }

    #[test]
    fn kron_sigma1_identity_maps_00_to_10() {
        // Oracle: direct 4×4 matrix-vector product.
        let op = kron(&pauli(1).unwrap(), &DenseOperator::identity(2)).unwrap();
        let psi = apply(&op, &StateVector::basis(2, 0b00)).unwrap();
        assert!(psi.max_abs_diff(&StateVector::basis(2, 0b10)) < 1e-15);
    }

    #[test]
    fn kron_associativity() {
        let a = pauli(1).unwrap();
        let b = hadamard();
        let s2 = pauli(2).unwrap();
        let left = kron(&kron(&a, &b).unwrap(), &s2).unwrap();
        let right = kron(&a, &kron(&b, &s2).unwrap()).unwrap();
        assert!(left.max_abs_diff(&right) < 1e-12);
    }

    #[test]
    fn apply_identity_returns_state() {
        let psi = StateVector::plus(2);
        let out = apply(&DenseOperator::identity(4), &psi).unwrap();
        assert!(out.max_abs_diff(&psi) < 1e-15);
    }

    #[test]
    fn apply_sigma1_flips_basis() {
        let out = apply(&pauli(1).unwrap(), &StateVector::basis(1, 0)).unwrap();
        assert!(out.max_abs_diff(&StateVector::basis(1, 1)) < 1e-15);
    }

    #[test]
    fn apply_sigma2_on_one_gives_minus_i_zero() {
        let out = apply(&pauli(2).unwrap(), &StateVector::basis(1, 1)).unwrap();
        assert_eq!(out.amp(0), c(0.0, -1.0));
        assert_eq!(out.amp(1), Cplx::ZERO);
    }

    #[test]
    fn apply_rejects_dimension_mismatch() {
        let err = apply(&DenseOperator::identity(4), &StateVector::basis(1, 0));
        assert!(matches!(err, Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn apply_rejects_non_finite_result() {
        let bad = DenseOperator::two_by_two(
            c(f64::INFINITY, 0.0),
            Cplx::ZERO,
            Cplx::ZERO,
            Cplx::ONE,
        );
        assert!(matches!(
            apply(&bad, &StateVector::basis(1, 0)),
            Err(Error::NonFinite { .. })
        ));
    }

    #[test]
    fn evolve_density_identity_is_noop() {
        let rho = DensityOperator::from_pure(&StateVector::plus(1));
        let out = evolve_density(&DenseOperator::identity(2), &rho).unwrap();
        assert!(out.max_abs_diff(&rho) < 1e-15);
    }

    #[test]
    fn evolve_density_sigma1_flips_projector() {
        let rho = DensityOperator::from_pure(&StateVector::basis(1, 0));
        let out = evolve_density(&pauli(1).unwrap(), &rho).unwrap();
        let expected = DensityOperator::from_pure(&StateVector::basis(1, 1));
        assert!(out.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn evolve_density_hadamard_gives_uniform_entries() {
        // Oracle: explicit 2×2 product H·|0⟩⟨0|·H† has every entry 1/2.
        let rho = DensityOperator::from_pure(&StateVector::basis(1, 0));
        let out = evolve_density(&hadamard(), &rho).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((out.get(i, j) - c(0.5, 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn expectation_of_firing_states() {
        let h = firing_hamiltonian(&FiringUnits::unit_energy());
        let fired = DensityOperator::from_pure(&StateVector::basis(1, 1));
        let resting = DensityOperator::from_pure(&StateVector::basis(1, 0));
        let half = DensityOperator::from_pure(&StateVector::plus(1));
        assert!((expectation(&fired, &h).unwrap() - 1.0).abs() < 1e-12);
        assert!(expectation(&resting, &h).unwrap().abs() < 1e-12);
        assert!((expectation(&half, &h).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn expectation_flags_imaginary_residue() {
        // A manifestly non-Hermitian operand leaves an imaginary trace.
        let rho = DensityOperator::from_pure(&StateVector::plus(1));
        let skew = DenseOperator::two_by_two(Cplx::ZERO, c(0.0, 1.0), Cplx::ZERO, Cplx::ZERO);
        assert!(matches!(
            expectation(&rho, &skew),
            Err(Error::Numerical { .. })
        ));
        assert!(matches!(
            expectation(&rho, &DenseOperator::identity(4)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn global_phase_comparison() {
        let a = hadamard();
        let phase = Cplx::from_polar(1.0, std::f64::consts::PI / 3.0);
        assert!(equal_up_to_global_phase(&a, &a.scaled(phase), 1e-8).unwrap());
        assert!(!equal_up_to_global_phase(
            &DenseOperator::identity(2),
            &pauli(1).unwrap(),
            1e-8
        )
        .unwrap());
        let s2 = pauli(2).unwrap();
        let minus_i_s2 = s2.scaled(c(0.0, -1.0));
        assert!(equal_up_to_global_phase(&minus_i_s2, &s2, 1e-8).unwrap());
    }

    #[test]
    fn density_constructor_rejects_bad_trace_and_non_hermitian() {
        let entries = vec![c(0.9, 0.0), Cplx::ZERO, Cplx::ZERO, c(0.2, 0.0)];
        assert!(matches!(
            DensityOperator::new(2, entries),
            Err(Error::Numerical { .. })
        ));
        let skew = vec![c(0.5, 0.0), c(0.1, 0.0), c(-0.1, 0.0), c(0.5, 0.0)];
        assert!(matches!(
            DensityOperator::new(2, skew),
            Err(Error::Numerical { .. })
        ));
    }

    #[test]
    fn state_constructor_rejects_unnormalized_and_nonfinite() {
        assert!(matches!(
            StateVector::new(1, vec![c(1.0, 0.0), c(1.0, 0.0)]),
            Err(Error::NotNormalized { .. })
        ));
        assert!(matches!(
            StateVector::new(1, vec![c(f64::NAN, 0.0), Cplx::ZERO]),
            Err(Error::NonFinite { .. })
        ));
    }

    #[test]
    fn jacobi_eigenvalues_match_known_spectra() {
        let eigs = hermitian_eigenvalues(&pauli(1).unwrap()).unwrap();
        assert!((eigs[0] + 1.0).abs() < 1e-12 && (eigs[1] - 1.0).abs() < 1e-12);

        let rho = DensityOperator::from_pure(&StateVector::plus(2)).as_operator();
        let eigs = hermitian_eigenvalues(&rho).unwrap();
        assert!(eigs[..3].iter().all(|e| e.abs() < 1e-12));
        assert!((eigs[3] - 1.0).abs() < 1e-12);

        // Trace and Frobenius consistency on a fixed dense Hermitian matrix.
        let m = DenseOperator::from_fn(4, |i, j| {
            let v = c(
                ((i * 7 + j * 3) % 5) as f64 - 2.0,
                if i == j { 0.0 } else { ((i + 2 * j) % 3) as f64 - 1.0 },
            );
            if i <= j {
                v
            } else {
                c(((j * 7 + i * 3) % 5) as f64 - 2.0, -(((j + 2 * i) % 3) as f64 - 1.0))
            }
        });
        let eigs = hermitian_eigenvalues(&m).unwrap();
        let tr: f64 = (0..4).map(|i| m.get(i, i).re).sum();
        let fro: f64 = m.entries().iter().map(|e| e.norm_sqr()).sum();
        assert!((eigs.iter().sum::<f64>() - tr).abs() < 1e-9);
        assert!((eigs.iter().map(|e| e * e).sum::<f64>() - fro).abs() < 1e-8);
    }

    #[test]
    fn positivity_validation() {
        let rho = DensityOperator::from_pure(&StateVector::plus(2));
        rho.validate_positivity(1e-9).unwrap();
    }
}
