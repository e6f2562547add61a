use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::diamond::{diamond_unitary, DiamondParams};
use crate::error::{Error, Result};
use crate::gates::Gate;
use crate::sim::{expectation_z, StateVector, C64, ZERO};

use super::encoding::to_array16;

/// Qubits per model; the diamond gate spans exactly four.
pub const MODEL_QUBITS: usize = 4;

/// Parameters per layer: three angles per qubit plus one diamond time.
pub const PARAMS_PER_LAYER: usize = 3 * MODEL_QUBITS + 1;

/// Layered diamond-entangled circuit with an affine read-out.
///
/// Layer `l` applies `U(times[l])` on `(q0, q1, q2, q3)` and then
/// `Rz(θ1) Ry(θ2) Rz(θ3)` on each qubit. The read-out is `⟨Z⟩` on qubit 0.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PqcModel {
    pub n_qubits: usize,
    pub n_layers: usize,
    pub thetas: Vec<[[f64; 3]; MODEL_QUBITS]>,
    pub times: Vec<f64>,
    pub scale_a: f64,
    pub shift_b: f64,
}

impl PqcModel {
    /// All angles and times zero, `a = 1`, `b = 0`: the identity network.
    pub fn identity(n_layers: usize) -> Self {
        PqcModel {
            n_qubits: MODEL_QUBITS,
            n_layers,
            thetas: vec![[[0.0; 3]; MODEL_QUBITS]; n_layers],
            times: vec![0.0; n_layers],
            scale_a: 1.0,
            shift_b: 0.0,
        }
    }

    /// Angles in `[0, 2π)`, times in `[0, 2t_g)`, `a = 1`, `b = 0`.
    pub fn random<R: Rng + ?Sized>(n_layers: usize, rng: &mut R) -> Self {
        let two_pi = 2.0 * std::f64::consts::PI;
        let t_max = 2.0 * DiamondParams::default().t_gate();
        let mut m = Self::identity(n_layers);
        for l in 0..n_layers {
            for q in 0..MODEL_QUBITS {
                for k in 0..3 {
                    m.thetas[l][q][k] = rng.gen_range(0.0..two_pi);
                }
            }
            m.times[l] = rng.gen_range(0.0..t_max);
        }
        m
    }

    pub fn param_count(&self) -> usize {
        self.n_layers * PARAMS_PER_LAYER + 2
    }

    /// Per layer the twelve angles (qubit-major) then the time; `a` and `b` last.
    pub fn to_flat(&self) -> Vec<f64> {
        let mut p = Vec::with_capacity(self.param_count());
        for l in 0..self.n_layers {
            for q in 0..MODEL_QUBITS {
                p.extend_from_slice(&self.thetas[l][q]);
            }
            p.push(self.times[l]);
        }
        p.push(self.scale_a);
        p.push(self.shift_b);
        p
    }

    pub fn set_flat(&mut self, p: &[f64]) -> Result<()> {
        if p.len() != self.param_count() {
            return Err(Error::ShapeMismatch {
                expected: self.param_count(),
                found: p.len(),
            });
        }
        for l in 0..self.n_layers {
            let base = l * PARAMS_PER_LAYER;
            for q in 0..MODEL_QUBITS {
                for k in 0..3 {
                    self.thetas[l][q][k] = p[base + 3 * q + k];
                }
            }
            self.times[l] = p[base + 3 * MODEL_QUBITS];
        }
        self.scale_a = p[p.len() - 2];
        self.shift_b = p[p.len() - 1];
        Ok(())
    }

    pub fn with_flat(&self, p: &[f64]) -> Result<Self> {
        let mut m = self.clone();
        m.set_flat(p)?;
        Ok(m)
    }

    /// Layer that flat parameter `idx` belongs to, `None` for `a` and `b`.
    pub fn layer_of(&self, idx: usize) -> Option<usize> {
        let l = idx / PARAMS_PER_LAYER;
        (l < self.n_layers).then_some(l)
    }

    fn validate(&self) -> Result<()> {
        if self.n_qubits != MODEL_QUBITS {
            return Err(Error::ArityMismatch {
                gate: "diamond".into(),
                expected: MODEL_QUBITS,
                found: self.n_qubits,
            });
        }
        if self.thetas.len() != self.n_layers || self.times.len() != self.n_layers {
            return Err(Error::ShapeMismatch {
                expected: self.n_layers,
                found: self.thetas.len().min(self.times.len()),
            });
        }
        Ok(())
    }
}

/// One layer with the diamond as a sparse row list and fused single-qubit rotations.
#[derive(Clone, Debug)]
pub(crate) struct CompiledLayer {
    diamond: Vec<Vec<(usize, C64)>>,
    rotations: [[C64; 4]; MODEL_QUBITS],
}

impl CompiledLayer {
    pub(crate) fn new(thetas: &[[f64; 3]; MODEL_QUBITS], time: f64) -> Self {
        let u = diamond_unitary(time, &DiamondParams::default());
        let diamond = (0..16)
            .map(|r| {
                (0..16)
                    .filter_map(|c| {
                        let v = u.get(r, c);
                        (v != ZERO).then_some((c, v))
                    })
                    .collect()
            })
            .collect();
        let mut rotations = [[ZERO; 4]; MODEL_QUBITS];
        for (q, th) in thetas.iter().enumerate() {
            let m = Gate::Rz(th[0])
                .matrix()
                .matmul(&Gate::Ry(th[1]).matrix())
                .matmul(&Gate::Rz(th[2]).matrix());
            rotations[q] = [m.get(0, 0), m.get(0, 1), m.get(1, 0), m.get(1, 1)];
        }
        CompiledLayer { diamond, rotations }
    }

    pub(crate) fn apply(&self, s: &mut [C64; 16]) {
        let mut next = [ZERO; 16];
        for (r, row) in self.diamond.iter().enumerate() {
            next[r] = row.iter().map(|&(c, v)| v * s[c]).sum();
        }
        for (q, g) in self.rotations.iter().enumerate() {
            let mask = 1 << (MODEL_QUBITS - 1 - q);
            for i in 0..16 {
                if i & mask == 0 {
                    let (a, b) = (next[i], next[i | mask]);
                    next[i] = g[0] * a + g[1] * b;
                    next[i | mask] = g[2] * a + g[3] * b;
                }
            }
        }
        *s = next;
    }
}

pub(crate) fn compile(m: &PqcModel) -> Vec<CompiledLayer> {
    (0..m.n_layers)
        .map(|l| CompiledLayer::new(&m.thetas[l], m.times[l]))
        .collect()
}

pub(crate) fn z0(s: &[C64; 16]) -> f64 {
    s[..8].iter().map(|a| a.norm_sqr()).sum::<f64>() - s[8..].iter().map(|a| a.norm_sqr()).sum::<f64>()
}

/// `⟨Z_0⟩` after running the model's layers on `s_in`.
pub fn pqc_forward(m: &PqcModel, s_in: &StateVector) -> Result<f64> {
    m.validate()?;
    if s_in.n_qubits() != MODEL_QUBITS {
        return Err(Error::ArityMismatch {
            gate: "diamond".into(),
            expected: MODEL_QUBITS,
            found: s_in.n_qubits(),
        });
    }
    let mut s = to_array16(s_in)?;
    for layer in compile(m) {
        layer.apply(&mut s);
    }
    Ok(z0(&s))
}

/// Reference forward pass through the general circuit simulator.
pub fn pqc_circuit(m: &PqcModel) -> Result<crate::circuit::Circuit> {
    m.validate()?;
    let p = DiamondParams::default();
    let mut c = crate::circuit::Circuit::new(MODEL_QUBITS);
    for l in 0..m.n_layers {
        c.push(p.gate(m.times[l]), &[0, 1, 2, 3])?;
        for q in 0..MODEL_QUBITS {
            let th = m.thetas[l][q];
            c.push(Gate::Rz(th[2]), &[q])?
                .push(Gate::Ry(th[1]), &[q])?
                .push(Gate::Rz(th[0]), &[q])?;
        }
    }
    Ok(c)
}

/// `⟨Z_0⟩` via [`pqc_circuit`]; slower, used to cross-check [`pqc_forward`].
pub fn pqc_forward_reference(m: &PqcModel, s_in: &StateVector) -> Result<f64> {
    let out = crate::circuit::apply_circuit(&pqc_circuit(m)?, s_in)?;
    expectation_z(&out, 0)
}
