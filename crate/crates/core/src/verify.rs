//! Named invariant suites over the diamond gate, its decompositions and the QFT rewrites.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::{apply_circuit, circuit_unitary, Circuit};
use crate::decomp::{full_decomposition_circuit, standard_decomposition_circuit};
use crate::diamond::{
    basis_phase, cns_circuit, controlled_rn_circuit, diamond_unitary, gate_time_forms, phase_program_circuit,
    phase_program_network, sector_block, target_block, ControlSector, DiamondParams,
};
use crate::error::{Error, Result};
use crate::gates::Gate;
use crate::qft::identities;
use crate::sim::{embed, equal_up_to_global_phase, Matrix, StateVector, C64, ONE};

pub const GRID_POINTS: usize = 20;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub max_error: f64,
}

impl Check {
    pub fn new(name: impl Into<String>, max_error: f64, tol: f64) -> Self {
        Check {
            name: name.into(),
            pass: max_error.is_finite() && max_error <= tol,
            max_error,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scope {
    All,
    Diamond,
    Decomp,
    QftIdentities,
}

impl Scope {
    pub fn as_str(self) -> &'static str {
        match self {
            Scope::All => "all",
            Scope::Diamond => "diamond",
            Scope::Decomp => "decomp",
            Scope::QftIdentities => "qft-identities",
        }
    }
}

impl fmt::Display for Scope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scope {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.replace('_', "-").to_ascii_lowercase().as_str() {
            "all" => Ok(Scope::All),
            "diamond" => Ok(Scope::Diamond),
            "decomp" => Ok(Scope::Decomp),
            "qft-identities" | "qft" => Ok(Scope::QftIdentities),
            _ => Err(Error::UnknownIdentifier(s.into())),
        }
    }
}

/// `GRID_POINTS` evenly spaced times over `[0, 2t_g]`.
pub fn time_grid(p: &DiamondParams) -> Vec<f64> {
    (0..GRID_POINTS)
        .map(|k| 2.0 * p.t_gate() * k as f64 / (GRID_POINTS - 1) as f64)
        .collect()
}

fn phase_error(a: &Matrix, b: &Matrix) -> Result<f64> {
    let eq = equal_up_to_global_phase(a, b, 1e-10)?;
    Ok(eq.max_deviation.max((eq.phase.norm() - 1.0).abs()))
}

pub fn run(scope: Scope) -> Result<Vec<Check>> {
    Ok(match scope {
        Scope::All => {
            let mut v = diamond_suite()?;
            v.extend(decomp_suite()?);
            v.extend(qft_identity_suite()?);
            v
        }
        Scope::Diamond => diamond_suite()?,
        Scope::Decomp => decomp_suite()?,
        Scope::QftIdentities => qft_identity_suite()?,
    })
}

pub fn diamond_suite() -> Result<Vec<Check>> {
    let p = DiamondParams::default();
    let tg = p.t_gate();
    let grid = time_grid(&p);
    let mut out = Vec::new();

    let mut unit = 0.0f64;
    let mut sectors = 0.0f64;
    let mut idle = 0.0f64;
    for &t in &grid {
        let u = diamond_unitary(t, &p);
        unit = unit.max(u.adjoint().matmul(&u).max_abs_diff(&Matrix::identity(16)));
        for s in ControlSector::ALL {
            sectors = sectors.max(sector_block(&u, s).max_abs_diff(&target_block(s, t, &p)));
        }
        idle = idle.max(sector_block(&u, ControlSector::PsiMinus).max_abs_diff(&Matrix::identity(4)));
    }
    out.push(Check::new("diamond_unitary_on_grid", unit, 1e-12));
    out.push(Check::new("sector_blocks_on_grid", sectors, 1e-12));
    out.push(Check::new("idle_sector_identity", idle, 1e-12));

    for jc in [0.0, 0.3] {
        let q = p.with_j_c(jc);
        let u = diamond_unitary(tg, &q);
        let mut err = 0.0f64;
        for (s, want) in gate_time_forms(jc * tg) {
            err = err.max(sector_block(&u, s).max_abs_diff(&want));
        }
        out.push(Check::new(format!("gate_time_sector_forms_jc{jc}"), err, 1e-12));
    }

    let u = diamond_unitary(tg, &p);
    out.push(Check::new(
        "gate_time_squares_to_identity",
        u.matmul(&u).max_abs_diff(&Matrix::identity(16)),
        1e-12,
    ));

    let mut mirror = 0.0f64;
    let mut reverse = 0.0f64;
    for &t in &grid {
        let u = diamond_unitary(t, &p);
        for perm in [[1, 0, 2, 3], [0, 1, 3, 2]] {
            mirror = mirror.max(embed(&u, &perm, 4)?.max_abs_diff(&u));
        }
        let swapped = embed(&u, &[2, 3, 0, 1], 4)?;
        reverse = reverse.max(phase_error(&diamond_unitary(2.0 * tg - t, &p), &swapped)?);
    }
    out.push(Check::new("pair_mirror_symmetry", mirror, 1e-12));
    out.push(Check::new("control_target_exchange_reverses_time", reverse, 1e-10));

    let cns = circuit_unitary(&cns_circuit())?;
    let mut expect = Circuit::new(2);
    expect.push(Gate::Swap, &[0, 1])?.push(Gate::Cnot, &[0, 1])?;
    let e = circuit_unitary(&expect)?;
    let mut err = 0.0f64;
    for j in 0..4 {
        for i in 0..4 {
            err = err.max((cns.get(i, j) - e.get(i, j)).norm());
        }
    }
    out.push(Check::new("cns_on_zero_controls", err, 1e-10));

    let mut err = 0.0f64;
    for n in 1..=4u32 {
        let u = circuit_unitary(&controlled_rn_circuit(n)?)?;
        let ph = C64::from_polar(1.0, 2.0 * PI / 2f64.powi(n as i32));
        for (c1, t1) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            let want = if c1 == 1 && t1 == 1 { ph } else { ONE };
            let idx = (c1 << 3) | (1 << 2) | (t1 << 1);
            let col = u.column(idx);
            let off: f64 = col
                .iter()
                .enumerate()
                .filter(|&(r, _)| r != idx)
                .map(|(_, v)| v.norm())
                .fold(0.0, f64::max);
            err = err
                .max((basis_phase(&u, [c1 as u8, 1, t1 as u8, 0]) - want).norm())
                .max(off);
        }
    }
    out.push(Check::new("controlled_rn_phases", err, 1e-10));

    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut err = 0.0f64;
    for _ in 0..10 {
        let t: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-PI..PI));
        let lhs = circuit_unitary(&phase_program_circuit(t[0], t[1], t[2], t[3]))?;
        let rhs = circuit_unitary(&phase_program_network(t[0], t[1], t[2], t[3]))?;
        err = err.max(phase_error(&rhs, &lhs)?);
    }
    out.push(Check::new("phase_programming_random_draws", err, 1e-10));

    let mut norm = 0.0f64;
    let s = StateVector::from_amplitudes((0..16).map(|k| C64::from_polar(1.0, 0.37 * k as f64) / 4.0).collect())?;
    for c in [
        cns_circuit(),
        controlled_rn_circuit(3)?,
        phase_program_circuit(0.1, 0.2, 0.3, 0.4),
    ] {
        norm = norm.max((apply_circuit(&c, &s)?.norm_sqr() - 1.0).abs());
    }
    out.push(Check::new("norm_preserved", norm, 1e-12));
    Ok(out)
}

pub fn decomp_suite() -> Result<Vec<Check>> {
    let p = DiamondParams::default();
    let mut out = Vec::new();
    let mut err = 0.0f64;
    for &t in &time_grid(&p) {
        let u = circuit_unitary(&standard_decomposition_circuit(t, &p)?)?;
        err = err.max(phase_error(&diamond_unitary(t, &p), &u)?);
    }
    out.push(Check::new("standard_decomposition_on_grid", err, 1e-10));

    let q = p.with_j_c(0.3);
    let mut err = 0.0f64;
    for &t in &time_grid(&q) {
        let u = circuit_unitary(&full_decomposition_circuit(t, &q)?)?;
        err = err.max(phase_error(&diamond_unitary(t, &q), &u)?);
    }
    out.push(Check::new("decomposition_with_control_coupling", err, 1e-10));

    let bell = circuit_unitary(&crate::decomp::bell_transform_circuit())?;
    let mut err = 0.0f64;
    for (col, s) in ControlSector::ALL.iter().enumerate() {
        for (row, w) in s.state().iter().enumerate() {
            err = err.max((bell.get(row, col) - w).norm());
        }
    }
    out.push(Check::new("bell_transform_columns", err, 1e-12));

    let x = Gate::X.matrix();
    let lhs = bell.matmul(&x.kron(&x)).matmul(&bell.adjoint());
    let rhs = circuit_unitary(&crate::decomp::xx_in_bell_circuit())?;
    out.push(Check::new("bit_flip_in_bell_frame", lhs.max_abs_diff(&rhs), 1e-12));
    Ok(out)
}

pub fn qft_identity_suite() -> Result<Vec<Check>> {
    identities::all()
        .into_iter()
        .map(|(name, l, r)| {
            let err = phase_error(&circuit_unitary(&l)?, &circuit_unitary(&r)?)?;
            Ok(Check::new(name, err, 1e-10))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_suite_passes() {
        for scope in [Scope::Diamond, Scope::Decomp, Scope::QftIdentities] {
            let checks = run(scope).unwrap();
            assert!(!checks.is_empty());
            for c in &checks {
                assert!(c.pass, "{scope}: {} = {:e}", c.name, c.max_error);
            }
        }
    }

    #[test]
    fn scope_names() {
        for s in [Scope::All, Scope::Diamond, Scope::Decomp, Scope::QftIdentities] {
            assert_eq!(s.as_str().parse::<Scope>().unwrap(), s);
        }
        assert!("gates".parse::<Scope>().is_err());
    }

    #[test]
    fn failing_check_is_reported() {
        assert!(!Check::new("x", 1e-3, 1e-10).pass);
        assert!(!Check::new("x", f64::NAN, 1e-10).pass);
    }
}
