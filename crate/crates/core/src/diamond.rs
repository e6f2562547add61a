//! The diamond gate `U(t)` and its native derivatives.
//!
//! Qubit order is `(C1, C2, T1, T2)`. `U(t)` is block diagonal over the Bell
//! sectors of the control pair; every identity here depends only on the
//! products `ζt` and `J_C t`.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use serde::{Deserialize, Serialize};

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::gates::Gate;
use crate::sim::{Matrix, C64, ONE, ZERO};

pub const C1: usize = 0;
pub const C2: usize = 1;
pub const T1: usize = 2;
pub const T2: usize = 3;

/// Physical constants of the diamond circuit in dimensionless units.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiamondParams {
    pub j: f64,
    pub j_c: f64,
    pub delta: f64,
    zeta: f64,
    t_gate: f64,
}

impl DiamondParams {
    pub fn new(j: f64, j_c: f64, delta: f64) -> Result<Self> {
        if delta == 0.0 || !delta.is_finite() {
            return Err(Error::InvalidArgument("detuning must be finite and nonzero".into()));
        }
        if j == 0.0 || !j.is_finite() || !j_c.is_finite() {
            return Err(Error::InvalidArgument("coupling must be finite and J nonzero".into()));
        }
        let zeta = 4.0 * j * j / delta;
        Ok(DiamondParams {
            j,
            j_c,
            delta,
            zeta,
            t_gate: PI / zeta,
        })
    }

    /// `ζ = 4J²/Δ`
    pub fn zeta(&self) -> f64 {
        self.zeta
    }

    /// `t_g = π/ζ`
    pub fn t_gate(&self) -> f64 {
        self.t_gate
    }

    pub fn with_j_c(self, j_c: f64) -> Self {
        DiamondParams { j_c, ..self }
    }

    /// The diamond gate at time `t` as a circuit element.
    pub fn gate(&self, t: f64) -> Gate {
        Gate::Diamond {
            zeta_t: self.zeta * t,
            jc_t: self.j_c * t,
        }
    }
}

impl Default for DiamondParams {
    /// `J = 1/2`, `Δ = 1`, `J_C = 0`, giving `ζ = 1` and `t_g = π`.
    fn default() -> Self {
        DiamondParams::new(0.5, 0.0, 1.0).expect("valid defaults")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ControlSector {
    Zero,
    One,
    PsiPlus,
    PsiMinus,
}

impl ControlSector {
    pub const ALL: [ControlSector; 4] = [
        ControlSector::Zero,
        ControlSector::One,
        ControlSector::PsiPlus,
        ControlSector::PsiMinus,
    ];

    /// Control-pair state in the computational basis `|C1 C2>`.
    pub fn state(self) -> [C64; 4] {
        let h = C64::new(FRAC_1_SQRT_2, 0.0);
        match self {
            ControlSector::Zero => [ONE, ZERO, ZERO, ZERO],
            ControlSector::One => [ZERO, ZERO, ZERO, ONE],
            ControlSector::PsiPlus => [ZERO, h, h, ZERO],
            ControlSector::PsiMinus => [ZERO, h, -h, ZERO],
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            ControlSector::Zero => "00",
            ControlSector::One => "11",
            ControlSector::PsiPlus => "psi+",
            ControlSector::PsiMinus => "psi-",
        }
    }

    fn projector(self) -> Matrix {
        let s = self.state();
        Matrix::outer(&s, &s)
    }
}

/// `U_T^{sector}` from the phases `ζt` and `J_C t`.
pub fn target_block_phases(sector: ControlSector, zeta_t: f64, jc_t: f64) -> Matrix {
    let e = |x: f64| C64::from_polar(1.0, x);
    let swap_block = |p: C64, first: C64, last: C64| {
        let (a, b) = ((p + ONE) / 2.0, (p - ONE) / 2.0);
        Matrix::from_rows(&[
            &[first, ZERO, ZERO, ZERO],
            &[ZERO, a, b, ZERO],
            &[ZERO, b, a, ZERO],
            &[ZERO, ZERO, ZERO, last],
        ])
    };
    match sector {
        ControlSector::Zero => swap_block(e(-zeta_t), ONE, e(-zeta_t)),
        ControlSector::One => swap_block(e(zeta_t), e(zeta_t), ONE),
        ControlSector::PsiPlus => Matrix::from_diagonal(&[e(zeta_t), ONE, ONE, e(-zeta_t)]).scale(e(-jc_t)),
        ControlSector::PsiMinus => Matrix::identity(4).scale(e(jc_t)),
    }
}

pub fn target_block(sector: ControlSector, t: f64, p: &DiamondParams) -> Matrix {
    target_block_phases(sector, p.zeta * t, p.j_c * t)
}

/// `Σ_s |s><s| ⊗ U_T^s` on `(C1, C2, T1, T2)`.
pub fn diamond_matrix(zeta_t: f64, jc_t: f64) -> Matrix {
    let mut u = Matrix::zeros(16);
    for s in ControlSector::ALL {
        u = u.add(&s.projector().kron(&target_block_phases(s, zeta_t, jc_t)));
    }
    u
}

pub fn diamond_unitary(t: f64, p: &DiamondParams) -> Matrix {
    diamond_matrix(p.zeta * t, p.j_c * t)
}

/// `(<s| ⊗ I) U (|s> ⊗ I)` for a 16×16 operator on `(C1, C2, T1, T2)`.
pub fn sector_block(u: &Matrix, sector: ControlSector) -> Matrix {
    let s = sector.state();
    let mut out = Matrix::zeros(4);
    for r in 0..4 {
        for c in 0..4 {
            let mut acc = ZERO;
            for (a, sa) in s.iter().enumerate() {
                for (b, sb) in s.iter().enumerate() {
                    acc += sa.conj() * u.get(4 * a + r, 4 * b + c) * sb;
                }
            }
            out.set(r, c, acc);
        }
    }
    out
}

/// Standard-gate forms of the four sector blocks at `t = t_g`:
/// `ZZ·CZ·SWAP`, `−CZ·SWAP`, `−ZZ·e^{−iJ_C t_g}` and `II·e^{iJ_C t_g}`.
pub fn gate_time_forms(jc_tg: f64) -> [(ControlSector, Matrix); 4] {
    let z = Gate::Z.matrix();
    let zz = z.kron(&z);
    let cz_swap = Gate::Cz.matrix().matmul(&Gate::Swap.matrix());
    [
        (ControlSector::Zero, zz.matmul(&cz_swap)),
        (ControlSector::One, cz_swap.scale(-ONE)),
        (ControlSector::PsiPlus, zz.scale(-C64::from_polar(1.0, -jc_tg))),
        (
            ControlSector::PsiMinus,
            Matrix::identity(4).scale(C64::from_polar(1.0, jc_tg)),
        ),
    ]
}

fn gate_time() -> Gate {
    Gate::diamond(PI)
}

/// `[H T1; Z T1; Z T2; U(t_g); H T2]`. With controls in |00> this is SWAP
/// followed by CNOT from T1 to T2.
pub fn cns_circuit() -> Circuit {
    let mut c = Circuit::new(4);
    c.g(Gate::H, &[T1])
        .g(Gate::Z, &[T1])
        .g(Gate::Z, &[T2])
        .g(gate_time(), &[C1, C2, T1, T2])
        .g(Gate::H, &[T2]);
    c
}

/// `[U(t_g); R_n on T2; U(t_g)]`, a controlled-R_n from C1 to T1 when C2 = |1>
/// and T2 = |0>.
pub fn controlled_rn_circuit(n: u32) -> Result<Circuit> {
    if n == 0 {
        return Err(Error::InvalidArgument("R_n needs n >= 1".into()));
    }
    let mut c = Circuit::new(4);
    c.g(gate_time(), &[C1, C2, T1, T2])
        .g(Gate::Rn(n), &[T2])
        .g(gate_time(), &[C1, C2, T1, T2]);
    Ok(c)
}

/// `[U(t_g); Rz(t1) C1; Rz(t2) C2; Rz(t3) T1; Rz(t4) T2; U(t_g)]`
pub fn phase_program_circuit(t1: f64, t2: f64, t3: f64, t4: f64) -> Circuit {
    let mut c = Circuit::new(4);
    c.g(gate_time(), &[C1, C2, T1, T2])
        .g(Gate::Rz(t1), &[C1])
        .g(Gate::Rz(t2), &[C2])
        .g(Gate::Rz(t3), &[T1])
        .g(Gate::Rz(t4), &[T2])
        .g(gate_time(), &[C1, C2, T1, T2]);
    c
}

/// The equivalent network of doubly-controlled `Rz` gates.
///
/// Each pair steers phases onto the opposite pair: equal target bits leave the
/// control phases crossed (`t2` on C1, `t1` on C2), unequal target bits keep
/// them in place, and symmetrically for the controls. Open controls are
/// closed controls conjugated by X.
pub fn phase_program_network(t1: f64, t2: f64, t3: f64, t4: f64) -> Circuit {
    let mut c = Circuit::new(4);
    let mut cc_rz = |ctrl: [usize; 2], bits: [bool; 2], theta: f64, target: usize| {
        for (&q, &b) in ctrl.iter().zip(&bits) {
            if !b {
                c.g(Gate::X, &[q]);
            }
        }
        c.g(
            Gate::controlled(&[true, true], Gate::Rz(theta)),
            &[ctrl[0], ctrl[1], target],
        );
        for (&q, &b) in ctrl.iter().zip(&bits) {
            if !b {
                c.g(Gate::X, &[q]);
            }
        }
    };
    let patterns = [[false, false], [true, true], [true, false], [false, true]];
    for bits in patterns {
        let equal = bits[0] == bits[1];
        let (on_c1, on_c2) = if equal { (t2, t1) } else { (t1, t2) };
        cc_rz([T1, T2], bits, on_c1, C1);
        cc_rz([T1, T2], bits, on_c2, C2);
        let (on_t1, on_t2) = if equal { (t4, t3) } else { (t3, t4) };
        cc_rz([C1, C2], bits, on_t1, T1);
        cc_rz([C1, C2], bits, on_t2, T2);
    }
    c
}

/// Phase picked up by `|C1 C2 T1 T2>` under a diagonal 16×16 operator.
pub fn basis_phase(u: &Matrix, bits: [u8; 4]) -> C64 {
    let idx = bits.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize);
    u.get(idx, idx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{apply_circuit, circuit_unitary};
    use crate::sim::{embed, equal_up_to_global_phase, StateVector};
    use proptest::prelude::*;

    fn tg() -> f64 {
        DiamondParams::default().t_gate()
    }

    #[test]
    fn params_derive_zeta_and_gate_time() {
        let p = DiamondParams::new(0.3, 0.1, 2.0).unwrap();
        assert_eq!(p.zeta(), 4.0 * 0.09 / 2.0);
        assert!((p.t_gate() * p.zeta() - PI).abs() < 1e-12);
        assert!(DiamondParams::new(0.3, 0.0, 0.0).is_err());
        let d = DiamondParams::default();
        assert_eq!(d.zeta(), 1.0);
        assert!((d.t_gate() - PI).abs() < 1e-15);
    }

    #[test]
    fn sector_zero_at_gate_time() {
        let p = DiamondParams::default();
        let b = target_block(ControlSector::Zero, tg(), &p);
        let z = Gate::Z.matrix();
        let expect = z.kron(&z).matmul(&Gate::Cz.matrix()).matmul(&Gate::Swap.matrix());
        assert!(b.max_abs_diff(&expect) < 1e-12);
        assert!((b.get(2, 1) + ONE).norm() < 1e-12);
        assert!((b.get(3, 3) + ONE).norm() < 1e-12);
        assert!((b.get(0, 0) - ONE).norm() < 1e-12);
    }

    #[test]
    fn sector_psi_blocks() {
        let p = DiamondParams::default();
        for k in 0..20 {
            let t = 0.37 * k as f64;
            let b = target_block(ControlSector::PsiMinus, t, &p);
            assert!(b.max_abs_diff(&Matrix::identity(4)) < 1e-15);
        }
        let z = Gate::Z.matrix();
        let b = target_block(ControlSector::PsiPlus, tg(), &p);
        assert!(b.max_abs_diff(&z.kron(&z).scale(-ONE)) < 1e-12);
    }

    #[test]
    fn gate_time_blocks_match_standard_forms() {
        for jc in [0.0, 0.3] {
            let p = DiamondParams::default().with_j_c(jc);
            let u = diamond_unitary(tg(), &p);
            for (s, form) in gate_time_forms(jc * tg()) {
                assert!(sector_block(&u, s).max_abs_diff(&form) < 1e-12, "{}", s.label());
                assert!(target_block(s, tg(), &p).max_abs_diff(&form) < 1e-12);
            }
        }
    }

    #[test]
    fn zero_time_is_identity() {
        let u = diamond_unitary(0.0, &DiamondParams::default());
        assert!(u.max_abs_diff(&Matrix::identity(16)) < 1e-15);
    }

    #[test]
    fn idle_control_state_untouched() {
        let psi_m = StateVector::from_amplitudes(ControlSector::PsiMinus.state().to_vec()).unwrap();
        let h = C64::new(FRAC_1_SQRT_2, 0.0);
        let tgt = StateVector::from_amplitudes(vec![h, ZERO, C64::new(0.0, 0.5), C64::new(0.5, 0.0)]).unwrap();
        let s = psi_m.tensor(&tgt);
        let mut c = Circuit::new(4);
        c.g(Gate::diamond(PI), &[0, 1, 2, 3]);
        let out = apply_circuit(&c, &s).unwrap();
        assert!(out.fidelity(&s) > 1.0 - 1e-14);
    }

    #[test]
    fn equal_controls_swap_targets() {
        let u = diamond_unitary(tg(), &DiamondParams::default());
        let out = u.apply(StateVector::from_bits(&[1, 1, 1, 0]).unwrap().amplitudes());
        // controls 11 carry the −CZ·SWAP sign
        assert!((out[0b1101] + ONE).norm() < 1e-12);
    }

    #[test]
    fn diamond_is_block_diagonal_in_bell_frame() {
        let p = DiamondParams::default();
        let mut v = Matrix::zeros(4);
        for (col, s) in ControlSector::ALL.iter().enumerate() {
            for (row, a) in s.state().iter().enumerate() {
                v.set(row, col, *a);
            }
        }
        let v = v.kron(&Matrix::identity(4));
        for k in 0..20 {
            let t = 2.0 * tg() * k as f64 / 19.0;
            let w = v.adjoint().matmul(&diamond_unitary(t, &p)).matmul(&v);
            for r in 0..16 {
                for c in 0..16 {
                    if r / 4 != c / 4 {
                        assert!(w.get(r, c).norm() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn mirror_and_rotation_symmetries() {
        let p = DiamondParams::default();
        for k in 0..10 {
            let t = 0.61 * k as f64;
            let u = diamond_unitary(t, &p);
            for perm in [[1, 0, 2, 3], [0, 1, 3, 2], [1, 0, 3, 2]] {
                let w = embed(&u, &perm, 4).unwrap();
                assert!(w.max_abs_diff(&u) < 1e-12, "{perm:?}");
            }
            let swapped = embed(&u, &[2, 3, 0, 1], 4).unwrap();
            let inverted = diamond_unitary(2.0 * tg() - t, &p);
            assert!(equal_up_to_global_phase(&inverted, &swapped, 1e-10).unwrap().equal);
        }
    }

    #[test]
    fn gate_time_squares_to_identity() {
        let u = diamond_unitary(tg(), &DiamondParams::default());
        assert!(u.matmul(&u).max_abs_diff(&Matrix::identity(16)) < 1e-12);
        let u = circuit_unitary(&phase_program_circuit(0.0, 0.0, 0.0, 0.0)).unwrap();
        assert!(u.max_abs_diff(&Matrix::identity(16)) < 1e-12);
    }

    #[test]
    fn cns_on_zero_controls() {
        let u = circuit_unitary(&cns_circuit()).unwrap();
        let mut expect = Circuit::new(2);
        expect.g(Gate::Swap, &[0, 1]).g(Gate::Cnot, &[0, 1]);
        let e = circuit_unitary(&expect).unwrap();
        for j in 0..4 {
            for i in 0..4 {
                assert!((u.get(i, j) - e.get(i, j)).norm() < 1e-10);
            }
        }
        // |00>|10> -> |00>|01>, |00>|11> -> |00>|10>
        assert!((u.get(0b0001, 0b0010) - ONE).norm() < 1e-10);
        assert!((u.get(0b0010, 0b0011) - ONE).norm() < 1e-10);
        assert!((u.get(0, 0) - ONE).norm() < 1e-10);
    }

    #[test]
    fn controlled_rn_flow() {
        for n in 1..=4u32 {
            let u = circuit_unitary(&controlled_rn_circuit(n).unwrap()).unwrap();
            assert!(u.is_diagonal(1e-12));
            let ph = C64::from_polar(1.0, 2.0 * PI / 2f64.powi(n as i32));
            for (c1, t1) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
                let want = if c1 == 1 && t1 == 1 { ph } else { ONE };
                assert!((basis_phase(&u, [c1, 1, t1, 0]) - want).norm() < 1e-10);
            }
        }
        let u = circuit_unitary(&controlled_rn_circuit(1).unwrap()).unwrap();
        assert!((basis_phase(&u, [1, 1, 1, 0]) + ONE).norm() < 1e-12);
        assert!(controlled_rn_circuit(0).is_err());
    }

    #[test]
    fn phase_program_reduces_to_controlled_rn() {
        let t = 2.0 * PI / 8.0;
        let a = circuit_unitary(&phase_program_circuit(0.0, 0.0, 0.0, t)).unwrap();
        let b = circuit_unitary(&controlled_rn_circuit(3).unwrap()).unwrap();
        assert!(a.max_abs_diff(&b) < 1e-12);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn phase_program_identity(t1 in -PI..PI, t2 in -PI..PI, t3 in -PI..PI, t4 in -PI..PI) {
            let lhs = circuit_unitary(&phase_program_circuit(t1, t2, t3, t4)).unwrap();
            let rhs = circuit_unitary(&phase_program_network(t1, t2, t3, t4)).unwrap();
            prop_assert!(equal_up_to_global_phase(&rhs, &lhs, 1e-10).unwrap().equal);
        }

        #[test]
        fn diamond_unitary_everywhere(t in -10.0f64..10.0, jc in -1.0f64..1.0) {
            let p = DiamondParams::default().with_j_c(jc);
            prop_assert!(diamond_unitary(t, &p).is_unitary(1e-10));
        }
    }
}
