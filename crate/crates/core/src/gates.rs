//! Gate catalog.
//!
//! Phase conventions: `Rz(θ) = diag(1, e^{iθ})`, so `R_n = Rz(2π/2^n)`.
//! `Rx` and `Ry` are the usual `exp(-iθσ/2)` rotations.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;

use crate::diamond;
use crate::sim::{Matrix, C64, I, ONE, ZERO};

#[derive(Clone, Debug, PartialEq)]
pub enum Gate {
    I,
    X,
    Y,
    Z,
    H,
    S,
    Rx(f64),
    Ry(f64),
    Rz(f64),
    /// `diag(1, e^{2πi/2^k})`
    Rn(u32),
    /// `diag(1, e^{-2πi/2^k})`
    RnDagger(u32),
    Cnot,
    Cz,
    Swap,
    /// Partial swap with angle θ on the `{|01>, |10>}` block.
    PSwap(f64),
    /// Parameterized iSWAP at phase `ζt`.
    ISwap(f64),
    /// Diamond gate on `(C1, C2, T1, T2)` at phases `ζt` and `J_C t`.
    Diamond {
        zeta_t: f64,
        jc_t: f64,
    },
    /// `base` applied when the leading control qubits match `pattern`
    /// (`true` = closed control on |1>, `false` = open control on |0>).
    Controlled {
        pattern: Vec<bool>,
        base: Box<Gate>,
    },
    /// Matrix literal.
    Unitary(Matrix),
}

impl Gate {
    pub fn controlled(pattern: &[bool], base: Gate) -> Gate {
        Gate::Controlled {
            pattern: pattern.to_vec(),
            base: Box::new(base),
        }
    }

    /// Diamond gate with `J_C = 0`.
    pub fn diamond(zeta_t: f64) -> Gate {
        Gate::Diamond { zeta_t, jc_t: 0.0 }
    }

    pub fn arity(&self) -> usize {
        match self {
            Gate::I
            | Gate::X
            | Gate::Y
            | Gate::Z
            | Gate::H
            | Gate::S
            | Gate::Rx(_)
            | Gate::Ry(_)
            | Gate::Rz(_)
            | Gate::Rn(_)
            | Gate::RnDagger(_) => 1,
            Gate::Cnot | Gate::Cz | Gate::Swap | Gate::PSwap(_) | Gate::ISwap(_) => 2,
            Gate::Diamond { .. } => 4,
            Gate::Controlled { pattern, base } => pattern.len() + base.arity(),
            Gate::Unitary(m) => m.n_qubits().unwrap_or(0),
        }
    }

    /// Upper-case mnemonic used by the text format.
    pub fn name(&self) -> &'static str {
        match self {
            Gate::I => "I",
            Gate::X => "X",
            Gate::Y => "Y",
            Gate::Z => "Z",
            Gate::H => "H",
            Gate::S => "S",
            Gate::Rx(_) => "RX",
            Gate::Ry(_) => "RY",
            Gate::Rz(_) => "RZ",
            Gate::Rn(_) => "RN",
            Gate::RnDagger(_) => "RNDG",
            Gate::Cnot => "CNOT",
            Gate::Cz => "CZ",
            Gate::Swap => "SWAP",
            Gate::PSwap(_) => "PSWAP",
            Gate::ISwap(_) => "ISWAP",
            Gate::Diamond { .. } => "DIAMOND",
            Gate::Controlled { .. } => "CTRL",
            Gate::Unitary(_) => "MATRIX",
        }
    }

    pub fn matrix(&self) -> Matrix {
        let h = FRAC_1_SQRT_2;
        match self {
            Gate::I => Matrix::identity(2),
            Gate::X => Matrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]),
            Gate::Y => Matrix::from_rows(&[&[ZERO, -I], &[I, ZERO]]),
            Gate::Z => Matrix::from_diagonal(&[ONE, -ONE]),
            Gate::H => Matrix::from_real_rows(&[&[h, h], &[h, -h]]),
            Gate::S => Matrix::from_diagonal(&[ONE, I]),
            Gate::Rx(t) => {
                let (s, c) = (t / 2.0).sin_cos();
                let (c, s) = (C64::new(c, 0.0), C64::new(0.0, -s));
                Matrix::from_rows(&[&[c, s], &[s, c]])
            }
            Gate::Ry(t) => {
                let (s, c) = (t / 2.0).sin_cos();
                Matrix::from_real_rows(&[&[c, -s], &[s, c]])
            }
            Gate::Rz(t) => phase(*t),
            Gate::Rn(k) => phase(rn_angle(*k)),
            Gate::RnDagger(k) => phase(-rn_angle(*k)),
            Gate::Cnot => permutation(&[0, 1, 3, 2]),
            Gate::Cz => Matrix::from_diagonal(&[ONE, ONE, ONE, -ONE]),
            Gate::Swap => permutation(&[0, 2, 1, 3]),
            Gate::PSwap(t) | Gate::ISwap(t) => {
                let (s, c) = t.sin_cos();
                let (c, s) = (C64::new(c, 0.0), C64::new(0.0, -s));
                Matrix::from_rows(&[
                    &[ONE, ZERO, ZERO, ZERO],
                    &[ZERO, c, s, ZERO],
                    &[ZERO, s, c, ZERO],
                    &[ZERO, ZERO, ZERO, ONE],
                ])
            }
            Gate::Diamond { zeta_t, jc_t } => diamond::diamond_matrix(*zeta_t, *jc_t),
            Gate::Controlled { pattern, base } => controlled_matrix(pattern, &base.matrix()),
            Gate::Unitary(m) => m.clone(),
        }
    }

    pub fn adjoint(&self) -> Gate {
        match self {
            Gate::S => Gate::Rz(-PI / 2.0),
            Gate::Rx(t) => Gate::Rx(-t),
            Gate::Ry(t) => Gate::Ry(-t),
            Gate::Rz(t) => Gate::Rz(-t),
            Gate::Rn(k) => Gate::RnDagger(*k),
            Gate::RnDagger(k) => Gate::Rn(*k),
            Gate::PSwap(t) => Gate::PSwap(-t),
            Gate::ISwap(t) => Gate::ISwap(-t),
            Gate::Diamond { zeta_t, jc_t } => Gate::Diamond {
                zeta_t: -zeta_t,
                jc_t: -jc_t,
            },
            Gate::Controlled { pattern, base } => Gate::Controlled {
                pattern: pattern.clone(),
                base: Box::new(base.adjoint()),
            },
            Gate::Unitary(m) => Gate::Unitary(m.adjoint()),
            g => g.clone(),
        }
    }

    /// Real parameters in text-format order.
    pub fn params(&self) -> Vec<f64> {
        match self {
            Gate::Rx(t) | Gate::Ry(t) | Gate::Rz(t) | Gate::PSwap(t) | Gate::ISwap(t) => vec![*t],
            Gate::Rn(k) | Gate::RnDagger(k) => vec![*k as f64],
            Gate::Diamond { zeta_t, jc_t } => vec![*zeta_t, *jc_t],
            _ => Vec::new(),
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gate::Rn(k) | Gate::RnDagger(k) => write!(f, "{}({k})", self.name()),
            Gate::Controlled { pattern, base } => {
                let bits: String = pattern.iter().map(|&b| if b { '1' } else { '0' }).collect();
                write!(f, "CTRL[{bits}]:{base}")
            }
            Gate::Unitary(m) => {
                let parts: Vec<String> = m
                    .data()
                    .iter()
                    .flat_map(|c| [format!("{:?}", c.re), format!("{:?}", c.im)])
                    .collect();
                write!(f, "MATRIX({})", parts.join(","))
            }
            g => {
                let p = g.params();
                if p.is_empty() {
                    f.write_str(g.name())
                } else {
                    let parts: Vec<String> = p.iter().map(|v| format!("{v:?}")).collect();
                    write!(f, "{}({})", g.name(), parts.join(","))
                }
            }
        }
    }
}

pub fn rn_angle(k: u32) -> f64 {
    2.0 * PI / 2f64.powi(k as i32)
}

fn phase(theta: f64) -> Matrix {
    Matrix::from_diagonal(&[ONE, C64::from_polar(1.0, theta)])
}

fn permutation(images: &[usize]) -> Matrix {
    let mut m = Matrix::zeros(images.len());
    for (col, &row) in images.iter().enumerate() {
        m.set(row, col, ONE);
    }
    m
}

/// Projector-sum form: `base` on the block whose control bits match `pattern`,
/// identity elsewhere. Controls are the most significant qubits.
pub fn controlled_matrix(pattern: &[bool], base: &Matrix) -> Matrix {
    let k = pattern.len();
    let d = base.dim();
    let mut m = Matrix::identity(d << k);
    let sel = pattern.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize);
    let off = sel * d;
    for r in 0..d {
        for c in 0..d {
            m.set(off + r, off + c, base.get(r, c));
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn catalog() -> Vec<Gate> {
        vec![
            Gate::I,
            Gate::X,
            Gate::Y,
            Gate::Z,
            Gate::H,
            Gate::S,
            Gate::Rx(0.3),
            Gate::Ry(-1.1),
            Gate::Rz(2.0),
            Gate::Rn(3),
            Gate::RnDagger(2),
            Gate::Cnot,
            Gate::Cz,
            Gate::Swap,
            Gate::PSwap(0.7),
            Gate::ISwap(1.9),
            Gate::diamond(0.4),
            Gate::Diamond { zeta_t: 1.0, jc_t: 0.3 },
            Gate::controlled(&[false, true], Gate::PSwap(0.2)),
        ]
    }

    #[test]
    fn catalog_is_unitary() {
        for g in catalog() {
            assert!(g.matrix().is_unitary(1e-12), "{g}");
            assert_eq!(g.matrix().dim(), 1 << g.arity(), "{g}");
        }
    }

    #[test]
    fn adjoint_inverts() {
        for g in catalog() {
            let p = g.adjoint().matrix().matmul(&g.matrix());
            assert!(p.max_abs_diff(&Matrix::identity(p.dim())) < 1e-12, "{g}");
        }
    }

    #[test]
    fn rn_is_rz_of_binary_fraction() {
        for k in 1..6 {
            assert!(Gate::Rn(k).matrix().max_abs_diff(&Gate::Rz(rn_angle(k)).matrix()) < 1e-15);
        }
        assert!(Gate::Rn(1).matrix().max_abs_diff(&Gate::Z.matrix()) < 1e-15);
        assert!(Gate::Rn(2).matrix().max_abs_diff(&Gate::S.matrix()) < 1e-15);
    }

    #[test]
    fn pswap_quarter_turn_swaps_with_minus_i() {
        let m = Gate::PSwap(PI / 2.0).matrix();
        assert!((m.get(2, 1) + I).norm() < 1e-15);
        assert!((m.get(1, 2) + I).norm() < 1e-15);
        assert!(m.get(1, 1).norm() < 1e-15);
    }

    #[test]
    fn open_control_selects_zero_block() {
        let m = Gate::controlled(&[false], Gate::X).matrix();
        let expect = Matrix::from_real_rows(&[
            &[0.0, 1.0, 0.0, 0.0],
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, 0.0, 1.0, 0.0],
            &[0.0, 0.0, 0.0, 1.0],
        ]);
        assert_eq!(m, expect);
        assert_eq!(Gate::controlled(&[true], Gate::X).matrix(), Gate::Cnot.matrix());
    }

    proptest! {
        #[test]
        fn parameterized_gates_unitary(t in -10.0f64..10.0) {
            for g in [Gate::Rx(t), Gate::Ry(t), Gate::Rz(t), Gate::PSwap(t), Gate::ISwap(t)] {
                prop_assert!(g.matrix().is_unitary(1e-12));
            }
        }
    }
}
