//! Standard-gate building blocks and the symmetric decomposition of the diamond gate.
//!
//! Let `M` be the unitary of [`bell_transform_circuit`]. Its columns are the
//! Bell sectors in the order `|00>, |11>, |Ψ+>, |Ψ->`, so `M†` takes control
//! states to computational labels where sector phases become ordinary
//! controlled phases.

use crate::circuit::Circuit;
use crate::diamond::{DiamondParams, C1, C2, T1, T2};
use crate::error::{Error, Result};
use crate::gates::Gate;
use crate::sim::Matrix;

/// Partial swap: identity on `|00>, |11>`, `[[cos θ, −i sin θ], [−i sin θ, cos θ]]`
/// on `{|01>, |10>}`.
pub fn pswap_gate(theta: f64) -> Matrix {
    Gate::PSwap(theta).matrix()
}

/// `|00><00| + |11><11| + e^{−iζt}|Ψ+><Ψ+| + e^{iζt}|Ψ−><Ψ−|`
pub fn iswap_gate(t: f64, p: &DiamondParams) -> Matrix {
    Gate::ISwap(p.zeta() * t).matrix()
}

/// `[X q1; CNOT q0→q1; CH q0→q1; CNOT q1→q0; X q0; X q1]`
///
/// Maps `|00>, |01>, |10>, |11>` to `|00>, |11>, |Ψ+>, |Ψ->`.
pub fn bell_transform_circuit() -> Circuit {
    let mut c = Circuit::new(2);
    c.g(Gate::X, &[1])
        .g(Gate::Cnot, &[0, 1])
        .g(Gate::controlled(&[true], Gate::H), &[0, 1])
        .g(Gate::Cnot, &[1, 0])
        .g(Gate::X, &[0])
        .g(Gate::X, &[1]);
    c
}

/// `[X q1; CNOT q1→q0; X q0; H q1; CNOT q1→q0; X q1]`, the bit flip `M·XX·M†`
/// of the Bell labels.
pub fn xx_in_bell_circuit() -> Circuit {
    let mut c = Circuit::new(2);
    c.g(Gate::X, &[1])
        .g(Gate::Cnot, &[1, 0])
        .g(Gate::X, &[0])
        .g(Gate::H, &[1])
        .g(Gate::Cnot, &[1, 0])
        .g(Gate::X, &[1]);
    c
}

/// The diamond gate `U(t)` at `J_C = 0` from standard and doubly-controlled gates.
///
/// 1. Controls `|00>`: `pSWAP(ζt/2)` on the targets, dressed by `Rz(−ζt/2)` on each target.
/// 2. Controls `|11>`: `pSWAP(−ζt/2)` with the same dressing, plus the sector
///    phase `e^{iζt}` as a controlled `Rz` between the controls.
/// 3. In the Bell-label frame of the controls, `|Ψ+>` picks up `e^{±iζt}`
///    when the targets read `|00>` or `|11>`.
pub fn standard_decomposition_circuit(t: f64, p: &DiamondParams) -> Result<Circuit> {
    if p.j_c != 0.0 {
        return Err(Error::InvalidArgument(
            "the symmetric decomposition assumes J_C = 0; append jc_phase_circuit".into(),
        ));
    }
    let zt = p.zeta() * t;
    let a = zt / 2.0;
    let mut c = Circuit::new(4);
    for (bits, theta) in [([false, false], a), ([true, true], -a)] {
        c.g(Gate::controlled(&bits, Gate::PSwap(theta)), &[C1, C2, T1, T2])
            .g(Gate::controlled(&bits, Gate::Rz(-a)), &[C1, C2, T1])
            .g(Gate::controlled(&bits, Gate::Rz(-a)), &[C1, C2, T2]);
    }
    c.g(Gate::controlled(&[true], Gate::Rz(zt)), &[C1, C2]);

    let bell = bell_transform_circuit();
    c.append_mapped(&bell.inverse()?, &[C1, C2])?;
    // label |10> is Ψ+; the open C2 control singles it out
    c.g(
        Gate::controlled(&[false, false, false], Gate::Rz(zt)),
        &[T1, T2, C2, C1],
    )
    .g(Gate::controlled(&[true, true, false], Gate::Rz(-zt)), &[T1, T2, C2, C1]);
    c.append_mapped(&bell, &[C1, C2])?;
    Ok(c)
}

/// Phases `e^{−iJ_C t}` on `|Ψ+>` and `e^{iJ_C t}` on `|Ψ->` of a control pair.
pub fn jc_phase_circuit(t: f64, j_c: f64) -> Circuit {
    let phi = j_c * t;
    let bell = bell_transform_circuit();
    let mut c = Circuit::new(2);
    c.append(&bell.inverse().expect("unitary")).expect("same width");
    c.g(Gate::Rz(-phi), &[0])
        .g(Gate::controlled(&[true], Gate::Rz(2.0 * phi)), &[0, 1]);
    c.append(&bell).expect("same width");
    c
}

/// [`standard_decomposition_circuit`] followed by [`jc_phase_circuit`] on the controls,
/// valid for any `J_C`.
pub fn full_decomposition_circuit(t: f64, p: &DiamondParams) -> Result<Circuit> {
    let mut c = standard_decomposition_circuit(t, &p.with_j_c(0.0))?;
    c.append_mapped(&jc_phase_circuit(t, p.j_c), &[C1, C2])?;
    Ok(c)
}
