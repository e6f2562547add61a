use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::{Error, Result};
use crate::sim::matrix::{Matrix, C64, ONE, ZERO};

/// Norm tolerance for state vectors.
pub const NORM_TOL: f64 = 1e-12;

/// Purity a subset must reach before it may be reset.
pub const RESET_PURITY_TOL: f64 = 1e-9;

/// Normalized amplitude vector over `n_qubits` qubits.
///
/// Qubit 0 is the leftmost ket label and the most significant bit of the
/// amplitude index, so `|q0 q1 ... q_{n-1}>` has index `q0·2^{n-1} + ... + q_{n-1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<C64>,
}

impl StateVector {
    /// `|0...0>`
    pub fn zero(n_qubits: usize) -> Self {
        Self::basis(n_qubits, 0)
    }

    pub fn basis(n_qubits: usize, index: usize) -> Self {
        assert!(n_qubits >= 1, "a register needs at least one qubit");
        let dim = 1usize << n_qubits;
        assert!(index < dim, "basis index {index} out of range");
        let mut amps = vec![ZERO; dim];
        amps[index] = ONE;
        StateVector { n_qubits, amps }
    }

    /// Computational basis state from a bit string, leftmost bit = qubit 0.
    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::InvalidArgument("empty bit string".into()));
        }
        let mut index = 0usize;
        for &b in bits {
            if b > 1 {
                return Err(Error::InvalidArgument(format!("bit value {b}")));
            }
            index = (index << 1) | b as usize;
        }
        Ok(Self::basis(bits.len(), index))
    }

    /// Wraps raw amplitudes, checking the length and normalization.
    pub fn from_amplitudes(amps: Vec<C64>) -> Result<Self> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "amplitude count {len} is not a power of two"
            )));
        }
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(StateVector {
            n_qubits: len.trailing_zeros() as usize,
            amps,
        })
    }

    /// Tensor product `self ⊗ other` (self's qubits come first).
    pub fn tensor(&self, other: &StateVector) -> StateVector {
        let mut amps = Vec::with_capacity(self.amps.len() * other.amps.len());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        StateVector {
            n_qubits: self.n_qubits + other.n_qubits,
            amps,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> C64 {
        self.amps[index]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn inner(&self, other: &StateVector) -> C64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn fidelity(&self, other: &StateVector) -> f64 {
        self.inner(other).norm_sqr()
    }

    /// Applies a `2^k`-dimensional gate to the listed qubits in place. The first
    /// listed qubit is the most significant bit of the gate's own index.
    pub fn apply_gate(&mut self, gate: &Matrix, qubits: &[usize]) -> Result<()> {
        check_qubits(qubits, self.n_qubits)?;
        let k = qubits.len();
        if gate.dim() != 1 << k {
            return Err(Error::DimensionMismatch {
                expected: 1 << k,
                found: gate.dim(),
            });
        }
        apply_local(&mut self.amps, self.n_qubits, gate, qubits);
        Ok(())
    }

    pub(crate) fn amps_mut(&mut self) -> &mut [C64] {
        &mut self.amps
    }

    pub(crate) fn from_raw(n_qubits: usize, amps: Vec<C64>) -> Self {
        debug_assert_eq!(amps.len(), 1 << n_qubits);
        StateVector { n_qubits, amps }
    }
}

pub(crate) fn check_qubits(qubits: &[usize], n_qubits: usize) -> Result<()> {
    for (i, &q) in qubits.iter().enumerate() {
        if q >= n_qubits {
            return Err(Error::QubitOutOfRange { qubit: q, n_qubits });
        }
        if qubits[..i].contains(&q) {
            return Err(Error::DuplicateQubit(q));
        }
    }
    Ok(())
}

#[inline]
fn bit_mask(q: usize, n_qubits: usize) -> usize {
    1 << (n_qubits - 1 - q)
}

/// Offsets of the gate's local basis states inside the full index space.
fn local_offsets(qubits: &[usize], n_qubits: usize) -> Vec<usize> {
    let k = qubits.len();
    (0..1usize << k)
        .map(|r| {
            qubits
                .iter()
                .enumerate()
                .filter(|(i, _)| (r >> (k - 1 - i)) & 1 == 1)
                .map(|(_, &q)| bit_mask(q, n_qubits))
                .sum()
        })
        .collect()
}

pub(crate) fn apply_local(amps: &mut [C64], n_qubits: usize, gate: &Matrix, qubits: &[usize]) {
    let offsets = local_offsets(qubits, n_qubits);
    let mask: usize = qubits.iter().map(|&q| bit_mask(q, n_qubits)).sum();
    let d = offsets.len();
    let mut buf = vec![ZERO; d];
    for base in 0..amps.len() {
        if base & mask != 0 {
            continue;
        }
        for (slot, &off) in buf.iter_mut().zip(&offsets) {
            *slot = amps[base + off];
        }
        for (r, &off) in offsets.iter().enumerate() {
            let row = &gate.data()[r * d..(r + 1) * d];
            amps[base + off] = row.iter().zip(&buf).map(|(g, a)| g * a).sum();
        }
    }
}

/// Embeds a gate acting on `qubits` (in the listed order) into an `n`-qubit register.
pub fn embed(gate: &Matrix, qubits: &[usize], n: usize) -> Result<Matrix> {
    check_qubits(qubits, n)?;
    if gate.dim() != 1 << qubits.len() {
        return Err(Error::DimensionMismatch {
            expected: 1 << qubits.len(),
            found: gate.dim(),
        });
    }
    let dim = 1usize << n;
    let mut out = Matrix::zeros(dim);
    let mut col = vec![ZERO; dim];
    for c in 0..dim {
        col.iter_mut().for_each(|v| *v = ZERO);
        col[c] = ONE;
        apply_local(&mut col, n, gate, qubits);
        for (r, &v) in col.iter().enumerate() {
            out.set(r, c, v);
        }
    }
    Ok(out)
}

/// `<Z_q>`: +1 weight when bit `q` is 0, -1 when it is 1.
pub fn expectation_z(s: &StateVector, q: usize) -> Result<f64> {
    check_qubits(&[q], s.n_qubits)?;
    let mask = bit_mask(q, s.n_qubits);
    Ok(s.amps
        .iter()
        .enumerate()
        .map(|(b, a)| if b & mask == 0 { a.norm_sqr() } else { -a.norm_sqr() })
        .sum())
}

/// Splits amplitudes into a `2^k × 2^{n-k}` array indexed by (subset bits, rest bits).
fn bipartition(s: &StateVector, subset: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let n = s.n_qubits;
    let rest: Vec<usize> = (0..n).filter(|q| !subset.contains(q)).collect();
    (local_offsets(subset, n), local_offsets(&rest, n))
}

/// Reduced density matrix of the listed qubits (listed order = index order).
pub fn reduced_density_matrix(s: &StateVector, subset: &[usize]) -> Result<Matrix> {
    if subset.is_empty() {
        return Err(Error::InvalidArgument("empty qubit subset".into()));
    }
    check_qubits(subset, s.n_qubits)?;
    let (sub, rest) = bipartition(s, subset);
    let d = sub.len();
    let mut rho = Matrix::zeros(d);
    for i in 0..d {
        for j in i..d {
            let v: C64 = rest
                .iter()
                .map(|&r| s.amps[sub[i] + r] * s.amps[sub[j] + r].conj())
                .sum();
            rho.set(i, j, v);
            rho.set(j, i, v.conj());
        }
    }
    Ok(rho)
}

/// `Tr(ρ²)` of the subset's reduced state.
pub fn reduced_purity(s: &StateVector, subset: &[usize]) -> Result<f64> {
    let rho = reduced_density_matrix(s, subset)?;
    Ok(rho.data().iter().map(|v| v.norm_sqr()).sum())
}

/// Target state for [`reset_qubits`].
#[derive(Clone, Debug, PartialEq)]
pub enum ResetTarget {
    /// One computational basis label per qubit.
    Basis(Vec<u8>),
    /// `(|01> - |10>)/√2` on exactly two qubits.
    PsiMinus,
}

impl ResetTarget {
    pub fn zeros(k: usize) -> Self {
        ResetTarget::Basis(vec![0; k])
    }

    pub fn arity(&self) -> Option<usize> {
        match self {
            ResetTarget::Basis(bits) => Some(bits.len()),
            ResetTarget::PsiMinus => Some(2),
        }
    }

    pub fn state_vector(&self) -> Vec<C64> {
        match self {
            ResetTarget::Basis(bits) => {
                let idx = bits.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize);
                let mut v = vec![ZERO; 1 << bits.len()];
                v[idx] = ONE;
                v
            }
            ResetTarget::PsiMinus => vec![ZERO, C64::new(FRAC_1_SQRT_2, 0.0), C64::new(-FRAC_1_SQRT_2, 0.0), ZERO],
        }
    }

    pub fn label(&self) -> String {
        match self {
            ResetTarget::Basis(bits) => bits.iter().map(|b| char::from(b'0' + b)).collect(),
            ResetTarget::PsiMinus => "psi-".to_string(),
        }
    }
}

/// Replaces the factor of `subset` by `target`, returning the new state and
/// the purity observed before the reset.
///
/// The subset must already be disentangled from the rest of the register;
/// anything else is treated as a construction bug and reported as
/// [`Error::EntangledReset`].
pub fn reset_qubits_traced(s: &StateVector, subset: &[usize], target: &ResetTarget) -> Result<(StateVector, f64)> {
    if subset.is_empty() {
        return Err(Error::InvalidArgument("empty qubit subset".into()));
    }
    check_qubits(subset, s.n_qubits)?;
    if let ResetTarget::Basis(bits) = target {
        if bits.iter().any(|&b| b > 1) {
            return Err(Error::InvalidArgument("reset labels must be 0 or 1".into()));
        }
    }
    if target.arity() != Some(subset.len()) {
        return Err(Error::ArityMismatch {
            gate: format!("RESET({})", target.label()),
            expected: target.arity().unwrap_or(0),
            found: subset.len(),
        });
    }
    let rho = reduced_density_matrix(s, subset)?;
    let purity: f64 = rho.data().iter().map(|v| v.norm_sqr()).sum();
    if purity < 1.0 - RESET_PURITY_TOL {
        return Err(Error::EntangledReset { purity });
    }

    // For a pure marginal every column of ρ is proportional to the subset state.
    let d = rho.dim();
    let pivot = (0..d)
        .max_by(|&a, &b| rho.get(a, a).re.total_cmp(&rho.get(b, b).re))
        .expect("non-empty");
    let scale = rho.get(pivot, pivot).re.sqrt();
    let mut phi: Vec<C64> = (0..d).map(|i| rho.get(i, pivot) / scale).collect();
    // canonical phase: largest component real and positive (first index wins ties)
    let mut lead = 0;
    for i in 1..d {
        if phi[i].norm() > phi[lead].norm() + 1e-12 {
            lead = i;
        }
    }
    let fix = phi[lead].norm() / phi[lead];
    phi.iter_mut().for_each(|v| *v *= fix);

    let (sub, rest) = bipartition(s, subset);
    let chi: Vec<C64> = rest
        .iter()
        .map(|&r| sub.iter().zip(&phi).map(|(&o, p)| p.conj() * s.amps[o + r]).sum())
        .collect();
    let chi_norm = chi.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    if (chi_norm - 1.0).abs() > 1e-6 {
        return Err(Error::EntangledReset { purity });
    }

    let tv = target.state_vector();
    let mut amps = vec![ZERO; s.amps.len()];
    for (&r, c) in rest.iter().zip(&chi) {
        for (&o, t) in sub.iter().zip(&tv) {
            amps[o + r] = t * c / chi_norm;
        }
    }
    Ok((StateVector::from_raw(s.n_qubits, amps), purity))
}

pub fn reset_qubits(s: &StateVector, subset: &[usize], target: &ResetTarget) -> Result<StateVector> {
    reset_qubits_traced(s, subset, target).map(|(state, _)| state)
}

/// Outcome of [`equal_up_to_global_phase`]. `phase` is meaningful only when `equal`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseEquality {
    pub equal: bool,
    pub phase: C64,
    /// `max_kl |phase·U_kl − V_kl|`
    pub max_deviation: f64,
}

/// Tests whether `v = phase · u` for a unit-modulus `phase`.
pub fn equal_up_to_global_phase(u: &Matrix, v: &Matrix, tol: f64) -> Result<PhaseEquality> {
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch {
            expected: u.dim(),
            found: v.dim(),
        });
    }
    let (idx, pivot) = u
        .data()
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
        .map(|(i, &x)| (i, x))
        .ok_or(Error::ZeroMatrix)?;
    if pivot.norm() <= tol {
        return Err(Error::ZeroMatrix);
    }
    let phase = v.data()[idx] / pivot;
    let max_deviation = u
        .data()
        .iter()
        .zip(v.data())
        .map(|(a, b)| (phase * a - b).norm())
        .fold(0.0, f64::max);
    let equal = (phase.norm() - 1.0).abs() <= tol && max_deviation <= tol;
    Ok(PhaseEquality {
        equal,
        phase,
        max_deviation,
    })
}
