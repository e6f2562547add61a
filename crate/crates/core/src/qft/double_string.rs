//! Two interconnected lines `A_1..A_n` (data) and `B_1..B_n` (ancillas in |0>).
//!
//! The `(i, j)` controlled rotation runs the diamond on `(A_j, B_{j-1}, A_{j-1}, B_j)`
//! in the roles `(C1, C2, T1, T2)`: `A_j` controls, `B_{j-1}` is flipped to |1>,
//! `A_{j-1}` (where the target state currently sits) is the target and `B_j`
//! is the |0> ancilla that carries the rotation.

use std::f64::consts::PI;

use super::{keeps, QftLayout, QftOptions, QftProgram, QftScheme};
use crate::circuit::Circuit;
use crate::error::Result;
use crate::gates::Gate;
use crate::sim::ResetTarget;

fn a(i: usize) -> usize {
    i - 1
}

fn b(n: usize, i: usize) -> usize {
    n + i - 1
}

pub fn build_double_string_qft(n: usize) -> Result<Circuit> {
    build(n, &QftOptions::default()).map(|p| p.circuit)
}

pub(super) fn build(n: usize, opts: &QftOptions) -> Result<QftProgram> {
    QftScheme::DoubleString.check_n(n)?;
    let u = Gate::diamond(PI);
    let mut c = Circuit::new(2 * n);
    for i in 1..=n {
        c.g(Gate::H, &[a(i)]);
        for j in i + 1..=n {
            let k = (j - i + 1) as u32;
            let quad = [a(j), b(n, j - 1), a(j - 1), b(n, j)];
            if keeps(opts.approx_threshold, k) {
                c.g(Gate::X, &[b(n, j - 1)])
                    .g(u.clone(), &quad)
                    .g(Gate::Rn(k), &[b(n, j)])
                    .g(u.clone(), &quad)
                    .g(Gate::X, &[b(n, j - 1)]);
            }
            if j != n {
                c.g(Gate::ISwap(PI / 2.0), &[a(j - 1), a(j)]);
            }
        }
        for j in (i + 1..n).rev() {
            c.g(Gate::ISwap(3.0 * PI / 2.0), &[a(j - 1), a(j)]);
        }
    }
    let inputs: Vec<usize> = (1..=n).map(a).collect();
    let ancillas: Vec<(Vec<usize>, ResetTarget)> = (1..=n).map(|i| (vec![b(n, i)], ResetTarget::zeros(1))).collect();
    let roles = (1..=n)
        .map(|i| format!("A{i}"))
        .chain((1..=n).map(|i| format!("B{i}")))
        .collect();
    let layout = QftLayout {
        scheme: QftScheme::DoubleString,
        n_inputs: n,
        total_qubits: 2 * n,
        outputs: inputs.iter().rev().copied().collect(),
        inputs,
        roles,
        ancilla_init: ancillas.clone(),
        ancilla_final: ancillas,
    };
    Ok(QftProgram { circuit: c, layout })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Circuit;
    use crate::qft::{check_qft, gate_counts, GateCountReport};

    #[test]
    fn single_input_is_one_hadamard() {
        let c = build_double_string_qft(1).unwrap();
        let mut want = Circuit::new(2);
        want.g(Gate::H, &[0]);
        assert_eq!(c, want);
    }

    #[test]
    fn literal_counts() {
        for n in 1..=6 {
            let r = gate_counts(&build_double_string_qft(n).unwrap());
            let pairs = n * (n - 1) / 2;
            let want = GateCountReport {
                h: n,
                x: 2 * pairs,
                rn: pairs,
                iswap: (n - 1) * n.saturating_sub(2),
                diamond: 2 * pairs,
            };
            assert_eq!(r, want, "n = {n}");
            assert_eq!(r.phase_stages(), n * (n + 1) / 2);
        }
    }

    #[test]
    fn four_inputs_follow_worked_example() {
        let c = build_double_string_qft(4).unwrap();
        let text = c.to_text();
        let head: Vec<&str> = text.lines().skip(1).take(7).collect();
        assert_eq!(
            head,
            [
                "H 0",
                "X 4",
                "DIAMOND(3.141592653589793,0.0) 1 4 0 5",
                "RN(2) 5",
                "DIAMOND(3.141592653589793,0.0) 1 4 0 5",
                "X 4",
                "ISWAP(1.5707963267948966) 0 1",
            ]
        );
        let p = build(4, &QftOptions::default()).unwrap();
        assert!(check_qft(&p, None).unwrap().passes(1e-8, 1e-9));
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(build_double_string_qft(0).is_err());
        assert!(build_double_string_qft(7).is_err());
    }
}
