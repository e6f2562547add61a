//! Chain of diamonds used as CNS gates.
//!
//! Data sites `D_1..D_{n+1}` sit at `3(k-1)`; diamond `k` links `D_k` and
//! `D_{k+1}` through its control pair `(3k-2, 3k-1)`, held in |00>. The last
//! diamond and `D_{n+1}` complete the `3n+1` chain and stay idle.
//!
//! Each stage rewrites `CR_m` as `R_{m+1}` on both wires plus a conjugated
//! `R†_{m+1}`, and routes the target down the chain with CNOT+SWAP pairs
//! that are exactly CNS gates: all pairs run CNOT forward except the last,
//! which runs it backward.

use super::{keeps, QftLayout, QftOptions, QftProgram, QftScheme};
use crate::circuit::Circuit;
use crate::diamond::cns_circuit;
use crate::error::Result;
use crate::gates::Gate;
use crate::sim::ResetTarget;

fn d(k: usize) -> usize {
    3 * (k - 1)
}

fn controls(k: usize) -> [usize; 2] {
    [3 * k - 2, 3 * k - 1]
}

pub fn build_cns_qft(n: usize) -> Result<Circuit> {
    build(n, &QftOptions::default()).map(|p| p.circuit)
}

/// SWAP then CNOT `t1 → t2` on adjacent data sites.
fn cns(c: &mut Circuit, t1: usize, t2: usize) -> Result<()> {
    let (lo, hi) = (t1.min(t2), t1.max(t2));
    let k = lo / 3 + 1;
    debug_assert_eq!(hi, d(k + 1));
    let [c1, c2] = controls(k);
    c.append_mapped(&cns_circuit(), &[c1, c2, t1, t2])?;
    Ok(())
}

pub(super) fn build(n: usize, opts: &QftOptions) -> Result<QftProgram> {
    QftScheme::CnsChain.check_n(n)?;
    let total = 3 * n + 1;
    let mut c = Circuit::new(total);
    for i in 1..=n {
        let wires: Vec<usize> = (i..=n).map(d).collect();
        let l = wires.len();
        let a = wires[0];
        c.g(Gate::H, &[a]);
        for m in 2..=l {
            if keeps(opts.approx_threshold, m as u32) {
                let r = Gate::Rn(m as u32 + 1);
                c.g(r.clone(), &[a]).g(r, &[wires[m - 1]]);
            }
        }
        // (t1, t2) of each CNS; CNOT x→y then SWAP equals CNS(t1 = y, t2 = x)
        let forward: Vec<(usize, usize)> = (0..l.saturating_sub(1))
            .map(|k| {
                let (x, y) = (wires[k], wires[k + 1]);
                if k + 2 == l {
                    (x, y)
                } else {
                    (y, x)
                }
            })
            .collect();
        for &(t1, t2) in &forward {
            cns(&mut c, t1, t2)?;
        }
        let slots = wires[..l.saturating_sub(2)]
            .iter()
            .chain(wires.last().filter(|_| l >= 2));
        for (m, &q) in (2..=l).zip(slots) {
            if keeps(opts.approx_threshold, m as u32) {
                c.g(Gate::RnDagger(m as u32 + 1), &[q]);
            }
        }
        // reversed pair: SWAP then CNOT x→y, which is CNS(t1 = x, t2 = y) for
        // forward pairs and CNS(t1 = y, t2 = x) for the backward one
        for &(t1, t2) in forward.iter().rev() {
            cns(&mut c, t2, t1)?;
        }
    }
    let inputs: Vec<usize> = (1..=n).map(d).collect();
    let mut ancillas: Vec<(Vec<usize>, ResetTarget)> =
        (1..=n).map(|k| (controls(k).to_vec(), ResetTarget::zeros(2))).collect();
    ancillas.push((vec![d(n + 1)], ResetTarget::zeros(1)));
    let mut roles = vec![String::new(); total];
    for k in 1..=n + 1 {
        roles[d(k)] = format!("D{k}");
    }
    for k in 1..=n {
        let [c1, c2] = controls(k);
        roles[c1] = format!("E{k}");
        roles[c2] = format!("E{k}'");
    }
    let layout = QftLayout {
        scheme: QftScheme::CnsChain,
        n_inputs: n,
        total_qubits: total,
        outputs: inputs.iter().rev().copied().collect(),
        inputs,
        roles,
        ancilla_init: ancillas.clone(),
        ancilla_final: ancillas,
    };
    Ok(QftProgram { circuit: c, layout })
}
