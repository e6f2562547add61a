//! String of diamonds: per input `A_i` (data), `C_i` (output) and a Bell-pair
//! ancilla `(B_i, B_i')` that keeps diamond `i` idle while it sits in `|Ψ->`.
//!
//! The controlled rotation on `C_j` runs diamond `j` in the roles
//! `(C1, C2, T1, T2) = (B_j, B_j', C_j, A_j)`: `B_j` holds the control state
//! moved over from `A_j`, `B_j'` is flipped to |1>, and `A_j`, emptied by the
//! iSWAP, is the |0> ancilla.

use std::f64::consts::PI;

use super::{keeps, QftLayout, QftOptions, QftProgram, QftScheme};
use crate::circuit::Circuit;
use crate::diamond::cns_circuit;
use crate::error::Result;
use crate::gates::Gate;
use crate::sim::ResetTarget;

fn a(i: usize) -> usize {
    4 * (i - 1)
}

fn c_(i: usize) -> usize {
    4 * (i - 1) + 1
}

fn b(i: usize) -> usize {
    4 * (i - 1) + 2
}

fn bp(i: usize) -> usize {
    4 * (i - 1) + 3
}

pub fn build_diamond_string_qft(n: usize) -> Result<Circuit> {
    build(n, &QftOptions::default()).map(|p| p.circuit)
}

pub(super) fn build(n: usize, opts: &QftOptions) -> Result<QftProgram> {
    QftScheme::DiamondString.check_n(n)?;
    let u = Gate::diamond(PI);
    let quarter = Gate::ISwap(PI / 2.0);
    let back = Gate::ISwap(3.0 * PI / 2.0);
    let mut c = Circuit::new(4 * n);
    for i in 1..=n {
        c.r(&[b(i), bp(i)], ResetTarget::PsiMinus);
    }
    for i in 1..=n {
        c.g(Gate::H, &[a(i)]);
        c.r(&[b(i), bp(i)], ResetTarget::zeros(2));
        c.append_mapped(&cns_circuit(), &[b(i), bp(i), a(i), c_(i)])?;
        c.r(&[b(i), bp(i)], ResetTarget::PsiMinus);
        for j in i + 1..=n {
            let k = (j - i + 1) as u32;
            let quad = [b(j), bp(j), c_(j), a(j)];
            c.g(quarter.clone(), &[c_(j - 1), c_(j)]);
            c.r(&[b(j), bp(j)], ResetTarget::zeros(2));
            c.g(quarter.clone(), &[a(j), b(j)]);
            if keeps(opts.approx_threshold, k) {
                c.g(Gate::X, &[bp(j)])
                    .g(u.clone(), &quad)
                    .g(Gate::Rn(k), &[a(j)])
                    .g(u.clone(), &quad)
                    .g(Gate::X, &[bp(j)]);
            }
            c.g(back.clone(), &[a(j), b(j)]);
            c.r(&[b(j), bp(j)], ResetTarget::PsiMinus);
        }
        for j in (i + 1..=n).rev() {
            c.g(back.clone(), &[c_(j - 1), c_(j)]);
        }
    }
    let mut roles = vec![String::new(); 4 * n];
    let mut ancilla_init = Vec::new();
    let mut ancilla_final = Vec::new();
    for i in 1..=n {
        roles[a(i)] = format!("A{i}");
        roles[c_(i)] = format!("C{i}");
        roles[b(i)] = format!("B{i}");
        roles[bp(i)] = format!("B{i}'");
        ancilla_init.push((vec![c_(i)], ResetTarget::zeros(1)));
        ancilla_init.push((vec![b(i), bp(i)], ResetTarget::PsiMinus));
        ancilla_final.push((vec![a(i)], ResetTarget::zeros(1)));
        ancilla_final.push((vec![b(i), bp(i)], ResetTarget::PsiMinus));
    }
    let layout = QftLayout {
        scheme: QftScheme::DiamondString,
        n_inputs: n,
        total_qubits: 4 * n,
        inputs: (1..=n).map(a).collect(),
        outputs: (1..=n).rev().map(c_).collect(),
        roles,
        ancilla_init,
        ancilla_final,
    };
    Ok(QftProgram { circuit: c, layout })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::apply_circuit;
    use crate::qft::{check_qft, prepare_input};
    use crate::sim::{expectation_z, reduced_density_matrix, Matrix, C64};

    #[test]
    fn single_input_moves_hadamard_to_output() {
        let p = build(1, &QftOptions::default()).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        for j in 0..2 {
            let out = apply_circuit(&p.circuit, &prepare_input(&p.layout, j).unwrap()).unwrap();
            let rho = reduced_density_matrix(&out, &[c_(1)]).unwrap();
            let sign = if j == 0 { h } else { -h };
            let want = [C64::new(h, 0.0), C64::new(sign, 0.0)];
            assert!(rho.max_abs_diff(&Matrix::outer(&want, &want)) < 1e-12);
            assert!((expectation_z(&out, a(1)).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn resets_stay_pure() {
        for n in 1..=3 {
            let p = build(n, &QftOptions::default()).unwrap();
            let r = check_qft(&p, None).unwrap();
            assert!(r.passes(1e-8, 1e-9), "n = {n}: {r:?}");
            assert!(r.min_reset_purity.unwrap() >= 1.0 - 1e-9);
            assert_eq!(r.resets, (1 << n) * (n + 2 * n + n * (n - 1)));
        }
    }
}
