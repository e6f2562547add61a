//! Quantum Fourier transform: the dense reference and three diamond-native circuits.
//!
//! Every builder leaves the final bit reversal out of the circuit. The
//! returned [`QftLayout`] records where each output bit ends up instead.

mod cns_chain;
mod diamond_string;
mod double_string;
pub mod identities;

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::circuit::{apply_circuit_traced, Circuit, GateOp};
use crate::error::{Error, Result};
use crate::gates::Gate;
use crate::sim::{reduced_density_matrix, Matrix, ResetTarget, StateVector, C64, ZERO};

pub use cns_chain::build_cns_qft;
pub use diamond_string::build_diamond_string_qft;
pub use double_string::build_double_string_qft;

/// Largest register for the dense reference matrix.
pub const MAX_REFERENCE_QUBITS: usize = 13;

/// Default cutoff when approximate mode is switched on: `R_k` with `k > 8` is dropped.
pub const DEFAULT_APPROX_THRESHOLD: u32 = 8;

/// `F_{kj} = e^{2πi jk/N}/√N`
pub fn reference_qft(n: usize) -> Result<Matrix> {
    if !(1..=MAX_REFERENCE_QUBITS).contains(&n) {
        return Err(out_of_range(n, 1, MAX_REFERENCE_QUBITS));
    }
    Ok(qft_matrix(n))
}

fn qft_matrix(n: usize) -> Matrix {
    let dim = 1usize << n;
    let norm = 1.0 / (dim as f64).sqrt();
    let mut m = Matrix::zeros(dim);
    for k in 0..dim {
        for j in 0..dim {
            let e = ((j * k) % dim) as f64 * 2.0 * PI / dim as f64;
            m.set(k, j, C64::from_polar(norm, e));
        }
    }
    m
}

/// Textbook circuit: per qubit `i`, H then `CR_{k-i+1}` controlled by each later
/// qubit `k`. Rotations beyond `approx_threshold` are dropped. The output is bit-reversed.
pub fn textbook_qft_circuit(n: usize, approx_threshold: Option<u32>) -> Circuit {
    let mut c = Circuit::new(n);
    for i in 0..n {
        c.g(Gate::H, &[i]);
        for k in i + 1..n {
            let m = (k - i + 1) as u32;
            if keeps(approx_threshold, m) {
                c.g(Gate::controlled(&[true], Gate::Rn(m)), &[k, i]);
            }
        }
    }
    c
}

pub(crate) fn keeps(threshold: Option<u32>, k: u32) -> bool {
    threshold.is_none_or(|t| k <= t)
}

fn out_of_range(n: usize, lo: usize, hi: usize) -> Error {
    Error::OutOfRange {
        name: "n",
        value: n as f64,
        range: format!("{lo}..={hi}"),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QftScheme {
    /// Two interconnected qubit lines, `2n` qubits.
    DoubleString,
    /// Chain of diamonds used as CNS gates, `3n+1` qubits.
    CnsChain,
    /// String of diamonds with Bell-pair ancillas, `4n` qubits.
    DiamondString,
}

impl QftScheme {
    pub const ALL: [QftScheme; 3] = [QftScheme::DoubleString, QftScheme::CnsChain, QftScheme::DiamondString];

    pub fn max_inputs(self) -> usize {
        match self {
            QftScheme::DoubleString => 6,
            QftScheme::CnsChain => 4,
            QftScheme::DiamondString => 3,
        }
    }

    pub fn total_qubits(self, n: usize) -> usize {
        match self {
            QftScheme::DoubleString => 2 * n,
            QftScheme::CnsChain => 3 * n + 1,
            QftScheme::DiamondString => 4 * n,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            QftScheme::DoubleString => "double-string",
            QftScheme::CnsChain => "cns-chain",
            QftScheme::DiamondString => "diamond-string",
        }
    }

    pub(crate) fn check_n(self, n: usize) -> Result<()> {
        if n == 0 || n > self.max_inputs() {
            return Err(out_of_range(n, 1, self.max_inputs()));
        }
        Ok(())
    }
}

impl fmt::Display for QftScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for QftScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "double-string" => Ok(QftScheme::DoubleString),
            "cns-chain" | "cns" => Ok(QftScheme::CnsChain),
            "diamond-string" => Ok(QftScheme::DiamondString),
            _ => Err(Error::UnknownIdentifier(s.to_string())),
        }
    }
}

/// Physical placement of a QFT instance.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QftLayout {
    pub scheme: QftScheme,
    pub n_inputs: usize,
    pub total_qubits: usize,
    /// Qubit holding input bit `m` (most significant first).
    pub inputs: Vec<usize>,
    /// Qubit holding bit `m` of the transformed index (most significant first).
    pub outputs: Vec<usize>,
    /// Role label for each physical qubit, e.g. `A1`, `B2'`.
    pub roles: Vec<String>,
    /// Non-input qubits and the states they start in.
    #[serde(skip)]
    pub ancilla_init: Vec<(Vec<usize>, ResetTarget)>,
    /// Non-output qubits and the states they must end in.
    #[serde(skip)]
    pub ancilla_final: Vec<(Vec<usize>, ResetTarget)>,
}

impl QftLayout {
    pub fn role_of(&self, q: usize) -> &str {
        &self.roles[q]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct QftProgram {
    pub circuit: Circuit,
    pub layout: QftLayout,
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct QftOptions {
    /// Drop every `R_k` with `k` above this value.
    pub approx_threshold: Option<u32>,
}

pub fn build_qft(scheme: QftScheme, n: usize, opts: &QftOptions) -> Result<QftProgram> {
    match scheme {
        QftScheme::DoubleString => double_string::build(n, opts),
        QftScheme::CnsChain => cns_chain::build(n, opts),
        QftScheme::DiamondString => diamond_string::build(n, opts),
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateCountReport {
    pub h: usize,
    pub x: usize,
    pub rn: usize,
    pub iswap: usize,
    /// Diamond gates, reported separately from the standard-gate tally.
    pub diamond: usize,
}

impl GateCountReport {
    /// Controlled-phase stages: one Hadamard plus one `R_n` per control.
    pub fn phase_stages(&self) -> usize {
        self.h + self.rn
    }
}

pub fn gate_counts(c: &Circuit) -> GateCountReport {
    let mut r = GateCountReport::default();
    for op in c.ops() {
        if let GateOp::Gate { gate, .. } = op {
            match gate {
                Gate::H => r.h += 1,
                Gate::X => r.x += 1,
                Gate::Rn(_) | Gate::RnDagger(_) => r.rn += 1,
                Gate::ISwap(_) => r.iswap += 1,
                Gate::Diamond { .. } => r.diamond += 1,
                _ => {}
            }
        }
    }
    r
}

/// Outcome of running a program on every computational input.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QftCheck {
    /// `max_j ‖out_j − φ·expected_j‖_∞` with one phase `φ` for all inputs.
    pub max_deviation: f64,
    #[serde(skip)]
    pub global_phase: C64,
    /// Smallest overlap of the ancilla marginal with its expected final state.
    pub min_ancilla_fidelity: f64,
    /// Smallest purity seen by any reset, if the circuit has resets.
    pub min_reset_purity: Option<f64>,
    pub resets: usize,
    /// Largest `|‖out‖² − 1|` across runs.
    pub norm_error: f64,
}

impl QftCheck {
    pub fn passes(&self, tol: f64, ancilla_tol: f64) -> bool {
        self.max_deviation <= tol && self.min_ancilla_fidelity >= 1.0 - ancilla_tol
    }
}

/// Register state for input index `j` with ancillas in their start states.
pub fn prepare_input(layout: &QftLayout, j: usize) -> Result<StateVector> {
    let n = layout.n_inputs;
    if j >= 1 << n {
        return Err(Error::InvalidArgument(format!(
            "input index {j} needs more than {n} bits"
        )));
    }
    let mut bits = vec![0u8; layout.total_qubits];
    for (m, &q) in layout.inputs.iter().enumerate() {
        bits[q] = ((j >> (n - 1 - m)) & 1) as u8;
    }
    let mut s = StateVector::from_bits(&bits)?;
    for (qs, target) in &layout.ancilla_init {
        s = crate::sim::reset_qubits(&s, qs, target)?;
    }
    Ok(s)
}

/// `column ⊗ ancilla finals` placed on the layout's physical qubits.
pub fn expected_output(layout: &QftLayout, column: &[C64]) -> StateVector {
    let total = layout.total_qubits;
    let mut groups: Vec<(Vec<usize>, Vec<C64>)> = vec![(layout.outputs.clone(), column.to_vec())];
    for (qs, t) in &layout.ancilla_final {
        groups.push((qs.clone(), t.state_vector()));
    }
    let mut amps = vec![C64::new(1.0, 0.0)];
    let mut order: Vec<usize> = Vec::new();
    for (qs, v) in &groups {
        let mut next = Vec::with_capacity(amps.len() * v.len());
        for a in &amps {
            for b in v {
                next.push(a * b);
            }
        }
        amps = next;
        order.extend(qs);
    }
    let mut out = vec![ZERO; 1 << total];
    for (logical, a) in amps.iter().enumerate() {
        if *a == ZERO {
            continue;
        }
        let mut phys = 0usize;
        for (l, &q) in order.iter().enumerate() {
            if (logical >> (order.len() - 1 - l)) & 1 == 1 {
                phys |= 1 << (total - 1 - q);
            }
        }
        out[phys] = *a;
    }
    StateVector::from_raw(total, out)
}

/// Runs `program` on all `2^n` inputs and compares against `reference`
/// (the transform to expect, before any output permutation).
pub fn check_program(program: &QftProgram, reference: &Matrix) -> Result<QftCheck> {
    let layout = &program.layout;
    let n = layout.n_inputs;
    if reference.dim() != 1 << n {
        return Err(Error::DimensionMismatch {
            expected: 1 << n,
            found: reference.dim(),
        });
    }
    let mut phase: Option<C64> = None;
    let mut check = QftCheck {
        max_deviation: 0.0,
        global_phase: C64::new(1.0, 0.0),
        min_ancilla_fidelity: 1.0,
        min_reset_purity: None,
        resets: 0,
        norm_error: 0.0,
    };
    for j in 0..1usize << n {
        let input = prepare_input(layout, j)?;
        let (out, records) = apply_circuit_traced(&program.circuit, &input)?;
        check.resets += records.len();
        for r in &records {
            let p = check.min_reset_purity.get_or_insert(r.purity);
            *p = p.min(r.purity);
        }
        check.norm_error = check.norm_error.max((out.norm_sqr() - 1.0).abs());

        let expected = expected_output(layout, &reference.column(j));
        let ph = *phase.get_or_insert_with(|| {
            let ov = expected.inner(&out);
            if ov.norm() > 1e-12 {
                ov / ov.norm()
            } else {
                C64::new(1.0, 0.0)
            }
        });
        let dev = out
            .amplitudes()
            .iter()
            .zip(expected.amplitudes())
            .map(|(o, e)| (o - ph * e).norm())
            .fold(0.0, f64::max);
        check.max_deviation = check.max_deviation.max(dev);

        for (qs, target) in &layout.ancilla_final {
            let rho = reduced_density_matrix(&out, qs)?;
            let t = target.state_vector();
            let f = rho.apply(&t).iter().zip(&t).map(|(r, a)| a.conj() * r).sum::<C64>().re;
            check.min_ancilla_fidelity = check.min_ancilla_fidelity.min(f);
        }
    }
    check.global_phase = phase.unwrap_or(C64::new(1.0, 0.0));
    Ok(check)
}

/// [`check_program`] against the exact (or truncated) transform.
pub fn check_qft(program: &QftProgram, approx_threshold: Option<u32>) -> Result<QftCheck> {
    check_program(program, &target_transform(program.layout.n_inputs, approx_threshold)?)
}

/// The exact transform, or the truncated textbook circuit with its output
/// order restored when `approx_threshold` is set.
pub fn target_transform(n: usize, approx_threshold: Option<u32>) -> Result<Matrix> {
    match approx_threshold {
        None => reference_qft(n),
        Some(_) => {
            if n == 0 || n > MAX_REFERENCE_QUBITS {
                return reference_qft(n);
            }
            let u = crate::circuit::circuit_unitary(&textbook_qft_circuit(n, approx_threshold))?;
            Ok(bit_reverse_rows(&u, n))
        }
    }
}

/// Action of `program` on the embedded input subspace as a `2^n × 2^n`
/// matrix in the output-bit basis.
pub fn restricted_action(program: &QftProgram) -> Result<Matrix> {
    let layout = &program.layout;
    let n = layout.n_inputs;
    let dim = 1usize << n;
    let mut m = Matrix::zeros(dim);
    for j in 0..dim {
        let (out, _) = apply_circuit_traced(&program.circuit, &prepare_input(layout, j)?)?;
        for k in 0..dim {
            let mut col = vec![ZERO; dim];
            col[k] = C64::new(1.0, 0.0);
            m.set(k, j, expected_output(layout, &col).inner(&out));
        }
    }
    Ok(m)
}

pub(crate) fn bit_reverse_rows(u: &Matrix, n: usize) -> Matrix {
    let dim = u.dim();
    let mut out = Matrix::zeros(dim);
    for r in 0..dim {
        let rr = r.reverse_bits() >> (usize::BITS as usize - n);
        for c in 0..dim {
            out.set(rr, c, u.get(r, c));
        }
    }
    out
}
