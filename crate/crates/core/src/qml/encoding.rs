//! Product-state data encodings.

use std::f64::consts::FRAC_PI_4;

use crate::error::{Error, Result};
use crate::gates::Gate;
use crate::sim::{Matrix, StateVector, C64, ZERO};

fn product_state(n: usize, single: impl Fn(usize) -> [C64; 2]) -> Result<StateVector> {
    if n == 0 {
        return Err(Error::InvalidArgument("encoding needs at least one qubit".into()));
    }
    let mut amps = vec![C64::new(1.0, 0.0)];
    for q in 0..n {
        let s = single(q);
        amps = amps.iter().flat_map(|a| [a * s[0], a * s[1]]).collect();
    }
    StateVector::from_amplitudes(amps)
}

fn on_zero(m: &Matrix) -> [C64; 2] {
    [m.get(0, 0), m.get(1, 0)]
}

/// `Π_i R_Y(asin x) R_Z(acos x²) |0>` on `n` qubits.
pub fn encode_regression(x: f64, n: usize) -> Result<StateVector> {
    if !(-1.0..=1.0).contains(&x) {
        return Err(Error::OutOfRange {
            name: "x",
            value: x,
            range: "[-1, 1]".into(),
        });
    }
    let m = Gate::Ry(x.asin()).matrix().matmul(&Gate::Rz((x * x).acos()).matrix());
    let s = on_zero(&m);
    product_state(n, |_| s)
}

/// `Π_i R_Z(π/4) R_Y(π/4) R_X(x_{i mod 2}) |0>` on `n` qubits.
pub fn encode_classification(x0: f64, x1: f64, n: usize) -> Result<StateVector> {
    let dress = Gate::Rz(FRAC_PI_4).matrix().matmul(&Gate::Ry(FRAC_PI_4).matrix());
    let s0 = on_zero(&dress.matmul(&Gate::Rx(x0).matrix()));
    let s1 = on_zero(&dress.matmul(&Gate::Rx(x1).matrix()));
    product_state(n, |q| if q % 2 == 0 { s0 } else { s1 })
}

/// `(I + x X + √(1−x²) Z)/2`, the single-qubit marginal of [`encode_regression`].
pub fn regression_marginal(x: f64) -> Matrix {
    let z = (1.0 - x * x).max(0.0).sqrt();
    let c = |v: f64| C64::new(v, 0.0);
    Matrix::from_rows(&[&[c((1.0 + z) / 2.0), c(x / 2.0)], &[c(x / 2.0), c((1.0 - z) / 2.0)]])
}

pub(crate) fn to_array16(s: &StateVector) -> Result<[C64; 16]> {
    let mut out = [ZERO; 16];
    if s.amplitudes().len() != 16 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: s.n_qubits(),
        });
    }
    out.copy_from_slice(s.amplitudes());
    Ok(out)
}
