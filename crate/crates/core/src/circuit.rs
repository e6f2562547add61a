//! Circuits as ordered gate lists, their simulation, and a line-oriented text format.
//!
//! ```text
//! qubits 4
//! H 0
//! RN(3) 2
//! CTRL[10]:RZ(0.5) 0 1 3
//! DIAMOND(3.141592653589793,0.0) 0 1 2 3
//! RESET(psi-) 1 2
//! ```

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::gates::Gate;
use crate::sim::{apply_local, check_qubits, reset_qubits_traced, Matrix, ResetTarget, StateVector, C64, ONE, ZERO};

#[derive(Clone, Debug, PartialEq)]
pub enum GateOp {
    Gate { gate: Gate, qubits: Vec<usize> },
    Reset { qubits: Vec<usize>, target: ResetTarget },
}

impl GateOp {
    pub fn qubits(&self) -> &[usize] {
        match self {
            GateOp::Gate { qubits, .. } | GateOp::Reset { qubits, .. } => qubits,
        }
    }

    pub fn is_reset(&self) -> bool {
        matches!(self, GateOp::Reset { .. })
    }

    fn validate(&self, n_qubits: usize) -> Result<()> {
        check_qubits(self.qubits(), n_qubits)?;
        let (name, expected) = match self {
            GateOp::Gate { gate, .. } => (gate.to_string(), gate.arity()),
            GateOp::Reset { target, .. } => {
                if let ResetTarget::Basis(bits) = target {
                    if bits.iter().any(|&b| b > 1) {
                        return Err(Error::InvalidArgument("reset labels must be 0 or 1".into()));
                    }
                }
                (format!("RESET({})", target.label()), target.arity().unwrap_or(0))
            }
        };
        if expected != self.qubits().len() {
            return Err(Error::ArityMismatch {
                gate: name,
                expected,
                found: self.qubits().len(),
            });
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    n_qubits: usize,
    ops: Vec<GateOp>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Circuit {
            n_qubits,
            ops: Vec::new(),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn ops(&self) -> &[GateOp] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn has_resets(&self) -> bool {
        self.ops.iter().any(GateOp::is_reset)
    }

    pub fn push_op(&mut self, op: GateOp) -> Result<&mut Self> {
        op.validate(self.n_qubits)?;
        self.ops.push(op);
        Ok(self)
    }

    pub fn push(&mut self, gate: Gate, qubits: &[usize]) -> Result<&mut Self> {
        self.push_op(GateOp::Gate {
            gate,
            qubits: qubits.to_vec(),
        })
    }

    pub fn reset(&mut self, qubits: &[usize], target: ResetTarget) -> Result<&mut Self> {
        self.push_op(GateOp::Reset {
            qubits: qubits.to_vec(),
            target,
        })
    }

    /// Builder shorthand for layouts fixed at compile time.
    ///
    /// # Panics
    /// If the op is invalid for this register.
    pub(crate) fn g(&mut self, gate: Gate, qubits: &[usize]) -> &mut Self {
        self.push(gate, qubits).expect("invalid gate in fixed layout");
        self
    }

    pub(crate) fn r(&mut self, qubits: &[usize], target: ResetTarget) -> &mut Self {
        self.reset(qubits, target).expect("invalid reset in fixed layout");
        self
    }

    /// Appends `other`, sending its qubit `q` to `map[q]`.
    pub fn append_mapped(&mut self, other: &Circuit, map: &[usize]) -> Result<&mut Self> {
        if map.len() != other.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: other.n_qubits,
                found: map.len(),
            });
        }
        check_qubits(map, self.n_qubits)?;
        for op in &other.ops {
            let mut op = op.clone();
            match &mut op {
                GateOp::Gate { qubits, .. } | GateOp::Reset { qubits, .. } => {
                    qubits.iter_mut().for_each(|q| *q = map[*q]);
                }
            }
            self.ops.push(op);
        }
        Ok(self)
    }

    /// Appends `other` on the same qubits.
    pub fn append(&mut self, other: &Circuit) -> Result<&mut Self> {
        let map: Vec<usize> = (0..other.n_qubits).collect();
        self.append_mapped(other, &map)
    }

    /// The reversed circuit of adjoint gates.
    pub fn inverse(&self) -> Result<Circuit> {
        let mut out = Circuit::new(self.n_qubits);
        for op in self.ops.iter().rev() {
            match op {
                GateOp::Gate { gate, qubits } => out.ops.push(GateOp::Gate {
                    gate: gate.adjoint(),
                    qubits: qubits.clone(),
                }),
                GateOp::Reset { .. } => return Err(Error::ResetInUnitary),
            }
        }
        Ok(out)
    }

    /// Keeps only the ops for which `keep` returns true.
    pub fn filtered(&self, mut keep: impl FnMut(&GateOp) -> bool) -> Circuit {
        Circuit {
            n_qubits: self.n_qubits,
            ops: self.ops.iter().filter(|op| keep(op)).cloned().collect(),
        }
    }

    /// Text form, one op per line after a `qubits N` header.
    pub fn to_text(&self) -> String {
        self.to_string()
    }

    pub fn from_text(text: &str) -> Result<Circuit> {
        text.parse()
    }
}

/// Trace of one reset during [`apply_circuit_traced`].
#[derive(Clone, Debug, PartialEq)]
pub struct ResetRecord {
    pub op_index: usize,
    pub qubits: Vec<usize>,
    pub purity: f64,
}

pub fn apply_circuit(c: &Circuit, s: &StateVector) -> Result<StateVector> {
    apply_circuit_traced(c, s).map(|(state, _)| state)
}

/// Runs the circuit and records the reduced purity measured at every reset.
pub fn apply_circuit_traced(c: &Circuit, s: &StateVector) -> Result<(StateVector, Vec<ResetRecord>)> {
    if c.n_qubits != s.n_qubits() {
        return Err(Error::DimensionMismatch {
            expected: c.n_qubits,
            found: s.n_qubits(),
        });
    }
    let mut state = s.clone();
    let mut records = Vec::new();
    for (i, op) in c.ops.iter().enumerate() {
        match op {
            GateOp::Gate { gate, qubits } => {
                apply_local(state.amps_mut(), c.n_qubits, &gate.matrix(), qubits);
            }
            GateOp::Reset { qubits, target } => {
                let (next, purity) = reset_qubits_traced(&state, qubits, target)?;
                state = next;
                records.push(ResetRecord {
                    op_index: i,
                    qubits: qubits.clone(),
                    purity,
                });
            }
        }
    }
    Ok((state, records))
}

/// Product of the embedded gates, first op rightmost.
pub fn circuit_unitary(c: &Circuit) -> Result<Matrix> {
    if c.has_resets() {
        return Err(Error::ResetInUnitary);
    }
    let n = c.n_qubits;
    let dim = 1usize << n;
    let mats: Vec<(Matrix, &[usize])> = c
        .ops
        .iter()
        .map(|op| match op {
            GateOp::Gate { gate, qubits } => (gate.matrix(), qubits.as_slice()),
            GateOp::Reset { .. } => unreachable!(),
        })
        .collect();
    let mut out = Matrix::zeros(dim);
    let mut col = vec![ZERO; dim];
    for j in 0..dim {
        col.iter_mut().for_each(|v| *v = ZERO);
        col[j] = ONE;
        for (m, q) in &mats {
            apply_local(&mut col, n, m, q);
        }
        for (i, &v) in col.iter().enumerate() {
            out.set(i, j, v);
        }
    }
    Ok(out)
}

impl fmt::Display for GateOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (head, qubits) = match self {
            GateOp::Gate { gate, qubits } => (gate.to_string(), qubits),
            GateOp::Reset { qubits, target } => (format!("RESET({})", target.label()), qubits),
        };
        f.write_str(&head)?;
        for q in qubits {
            write!(f, " {q}")?;
        }
        Ok(())
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "qubits {}", self.n_qubits)?;
        for op in &self.ops {
            writeln!(f, "{op}")?;
        }
        Ok(())
    }
}

impl FromStr for Circuit {
    type Err = Error;

    fn from_str(text: &str) -> Result<Circuit> {
        let mut circuit: Option<Circuit> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let perr = |message: String| Error::Parse { line: line_no, message };
            let Some(c) = circuit.as_mut() else {
                let n = line
                    .strip_prefix("qubits")
                    .and_then(|rest| rest.trim().parse::<usize>().ok())
                    .filter(|&n| n >= 1)
                    .ok_or_else(|| perr("expected header 'qubits N'".into()))?;
                circuit = Some(Circuit::new(n));
                continue;
            };
            let (head, rest) = split_head(line);
            let qubits = rest
                .split_whitespace()
                .map(|t| t.parse::<usize>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| perr(format!("bad qubit index: {e}")))?;
            let op = if let Some(label) = head.strip_prefix("RESET(").and_then(|s| s.strip_suffix(')')) {
                GateOp::Reset {
                    qubits,
                    target: parse_reset_label(label).map_err(perr)?,
                }
            } else {
                GateOp::Gate {
                    gate: parse_gate(head).map_err(perr)?,
                    qubits,
                }
            };
            c.push_op(op).map_err(|e| perr(e.to_string()))?;
        }
        circuit.ok_or(Error::Parse {
            line: 0,
            message: "missing 'qubits N' header".into(),
        })
    }
}

/// Splits off the gate token, which may contain commas but no spaces.
fn split_head(line: &str) -> (&str, &str) {
    match line.find(char::is_whitespace) {
        Some(i) => (&line[..i], &line[i..]),
        None => (line, ""),
    }
}

fn parse_reset_label(label: &str) -> std::result::Result<ResetTarget, String> {
    if label == "psi-" {
        return Ok(ResetTarget::PsiMinus);
    }
    if label.is_empty() || !label.bytes().all(|b| b == b'0' || b == b'1') {
        return Err(format!("bad reset label '{label}'"));
    }
    Ok(ResetTarget::Basis(label.bytes().map(|b| b - b'0').collect()))
}

fn parse_gate(token: &str) -> std::result::Result<Gate, String> {
    if let Some(rest) = token.strip_prefix("CTRL[") {
        let (bits, base) = rest
            .split_once("]:")
            .ok_or_else(|| format!("bad controlled gate '{token}'"))?;
        if bits.is_empty() || !bits.bytes().all(|b| b == b'0' || b == b'1') {
            return Err(format!("bad control pattern '{bits}'"));
        }
        let pattern: Vec<bool> = bits.bytes().map(|b| b == b'1').collect();
        return Ok(Gate::controlled(&pattern, parse_gate(base)?));
    }
    let (name, params) = match token.split_once('(') {
        Some((name, rest)) => {
            let inner = rest
                .strip_suffix(')')
                .ok_or_else(|| format!("unclosed parameter list in '{token}'"))?;
            let vals = inner
                .split(',')
                .map(|p| p.trim().parse::<f64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| format!("bad parameter in '{token}': {e}"))?;
            (name, vals)
        }
        None => (token, Vec::new()),
    };
    let want = |k: usize| -> std::result::Result<(), String> {
        if params.len() == k {
            Ok(())
        } else {
            Err(format!("{name} takes {k} parameter(s), got {}", params.len()))
        }
    };
    let index = |v: f64| -> std::result::Result<u32, String> {
        if v >= 1.0 && v.fract() == 0.0 && v <= 64.0 {
            Ok(v as u32)
        } else {
            Err(format!("{name} needs an integer index in 1..=64, got {v}"))
        }
    };
    let gate = match name {
        "I" | "X" | "Y" | "Z" | "H" | "S" | "CNOT" | "CZ" | "SWAP" => {
            want(0)?;
            match name {
                "I" => Gate::I,
                "X" => Gate::X,
                "Y" => Gate::Y,
                "Z" => Gate::Z,
                "H" => Gate::H,
                "S" => Gate::S,
                "CNOT" => Gate::Cnot,
                "CZ" => Gate::Cz,
                _ => Gate::Swap,
            }
        }
        "RX" | "RY" | "RZ" | "PSWAP" | "ISWAP" => {
            want(1)?;
            let t = params[0];
            match name {
                "RX" => Gate::Rx(t),
                "RY" => Gate::Ry(t),
                "RZ" => Gate::Rz(t),
                "PSWAP" => Gate::PSwap(t),
                _ => Gate::ISwap(t),
            }
        }
        "RN" => {
            want(1)?;
            Gate::Rn(index(params[0])?)
        }
        "RNDG" => {
            want(1)?;
            Gate::RnDagger(index(params[0])?)
        }
        "DIAMOND" => {
            want(2)?;
            Gate::Diamond {
                zeta_t: params[0],
                jc_t: params[1],
            }
        }
        "MATRIX" => {
            if params.len() % 2 != 0 {
                return Err("MATRIX needs (re, im) pairs".into());
            }
            let entries: Vec<C64> = params.chunks(2).map(|p| C64::new(p[0], p[1])).collect();
            let m = Matrix::from_vec(entries).map_err(|e| e.to_string())?;
            if m.n_qubits().is_none() {
                return Err(format!("MATRIX dimension {} is not a power of two", m.dim()));
            }
            Gate::Unitary(m)
        }
        _ => return Err(format!("unknown gate '{name}'")),
    };
    Ok(gate)
}
