//! CNOT/SWAP rewrites behind the CNS-chain transform, as `(lhs, rhs)` circuit pairs.

use crate::circuit::Circuit;
use crate::gates::Gate;

/// `CR_n` (control q1, target q0) against
/// `[R_{n+1} q0; R_{n+1} q1; CNOT 1→0; SWAP; R†_{n+1} q1; SWAP; CNOT 1→0]`.
pub fn controlled_rotation(n: u32) -> (Circuit, Circuit) {
    let mut lhs = Circuit::new(2);
    lhs.g(Gate::controlled(&[true], Gate::Rn(n)), &[1, 0]);
    let mut rhs = Circuit::new(2);
    rhs.g(Gate::Rn(n + 1), &[0])
        .g(Gate::Rn(n + 1), &[1])
        .g(Gate::Cnot, &[1, 0])
        .g(Gate::Swap, &[0, 1])
        .g(Gate::RnDagger(n + 1), &[1])
        .g(Gate::Swap, &[0, 1])
        .g(Gate::Cnot, &[1, 0]);
    (lhs, rhs)
}

/// A long-range CNOT/SWAP sandwich against the same sandwich routed through
/// the middle wire with nearest-neighbour pairs only.
pub fn pseudo_swap(n: u32) -> (Circuit, Circuit) {
    let mut lhs = Circuit::new(3);
    lhs.g(Gate::Cnot, &[2, 0])
        .g(Gate::Swap, &[0, 2])
        .g(Gate::RnDagger(n), &[2])
        .g(Gate::Swap, &[0, 2])
        .g(Gate::Cnot, &[2, 0]);
    let mut rhs = Circuit::new(3);
    rhs.g(Gate::Cnot, &[0, 1])
        .g(Gate::Swap, &[0, 1])
        .g(Gate::Cnot, &[2, 1])
        .g(Gate::Swap, &[1, 2])
        .g(Gate::RnDagger(n), &[2])
        .g(Gate::Swap, &[1, 2])
        .g(Gate::Cnot, &[2, 1])
        .g(Gate::Swap, &[0, 1])
        .g(Gate::Cnot, &[0, 1]);
    (lhs, rhs)
}

/// `[SWAP; CNOT 1→0; R_n q0; CNOT 0→1; SWAP]` against `[SWAP; CNOT 0→1; R_n q1]`.
pub fn refactor(n: u32) -> (Circuit, Circuit) {
    let mut lhs = Circuit::new(2);
    lhs.g(Gate::Swap, &[0, 1])
        .g(Gate::Cnot, &[1, 0])
        .g(Gate::Rn(n), &[0])
        .g(Gate::Cnot, &[0, 1])
        .g(Gate::Swap, &[0, 1]);
    let mut rhs = Circuit::new(2);
    rhs.g(Gate::Swap, &[0, 1]).g(Gate::Cnot, &[0, 1]).g(Gate::Rn(n), &[1]);
    (lhs, rhs)
}

/// First stage of the four-qubit transform, textbook form against the
/// nearest-neighbour CNOT/SWAP form.
pub fn first_stage_four() -> (Circuit, Circuit) {
    let mut lhs = Circuit::new(4);
    lhs.g(Gate::H, &[0]);
    for k in 1..4 {
        lhs.g(Gate::controlled(&[true], Gate::Rn(k as u32 + 1)), &[k, 0]);
    }
    let mut rhs = Circuit::new(4);
    rhs.g(Gate::H, &[0])
        .g(Gate::Rn(3), &[0])
        .g(Gate::Rn(4), &[0])
        .g(Gate::Rn(5), &[0])
        .g(Gate::Rn(3), &[1])
        .g(Gate::Rn(4), &[2])
        .g(Gate::Rn(5), &[3]);
    let forward = [([0, 1], [0, 1]), ([1, 2], [1, 2]), ([3, 2], [2, 3])];
    for (cnot, swap) in forward {
        rhs.g(Gate::Cnot, &cnot).g(Gate::Swap, &swap);
    }
    rhs.g(Gate::RnDagger(3), &[0])
        .g(Gate::RnDagger(4), &[1])
        .g(Gate::RnDagger(5), &[3]);
    for (cnot, swap) in forward.iter().rev() {
        rhs.g(Gate::Swap, swap).g(Gate::Cnot, cnot);
    }
    (lhs, rhs)
}

/// Every identity with a descriptive name, for `n = 1..=4` where parameterized.
pub fn all() -> Vec<(String, Circuit, Circuit)> {
    let mut out = Vec::new();
    for n in 1..=4 {
        let (l, r) = controlled_rotation(n);
        out.push((format!("controlled_rotation_n{n}"), l, r));
        let (l, r) = pseudo_swap(n);
        out.push((format!("pseudo_swap_n{n}"), l, r));
        let (l, r) = refactor(n);
        out.push((format!("refactor_n{n}"), l, r));
    }
    let (l, r) = first_stage_four();
    out.push(("first_stage_four".into(), l, r));
    out
}
