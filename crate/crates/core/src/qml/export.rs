//! Plot-ready curves and grids, and their CSV/JSON writers.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::sim::StateVector;

use super::data::{linspace, Target};
use super::model::PqcModel;
use super::train::{predict_class_prob, predict_regression};

/// `(x, f(x), F(x))` over `xs`.
pub fn fit_curve(m: &PqcModel, target: Target, xs: &[f64]) -> Result<Vec<(f64, f64, f64)>> {
    xs.iter()
        .map(|&x| Ok((x, target.eval(x), predict_regression(m, x)?)))
        .collect()
}

/// Class-1 probabilities on a `resolution²` grid over `[−1, 1]²`, rows along `x1`
/// and columns along `x0`, returned row-major as `(x0, x1, prob)`.
pub fn decision_grid(m: &PqcModel, resolution: usize) -> Result<Vec<(f64, f64, f64)>> {
    if resolution < 2 {
        return Err(Error::OutOfRange {
            name: "resolution",
            value: resolution as f64,
            range: ">= 2".into(),
        });
    }
    let axis = linspace(resolution);
    let mut out = Vec::with_capacity(resolution * resolution);
    for &x1 in &axis {
        for &x0 in &axis {
            out.push((x0, x1, predict_class_prob(m, x0, x1)?));
        }
    }
    Ok(out)
}

fn write_rows<R: Serialize>(path: &Path, header: &[&str], rows: impl IntoIterator<Item = R>) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(header)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_loss_csv(path: &Path, history: &[f64]) -> Result<()> {
    write_rows(path, &["epoch", "loss"], history.iter().enumerate())
}

pub fn write_fit_csv(path: &Path, rows: &[(f64, f64, f64)]) -> Result<()> {
    write_rows(path, &["x", "f", "F"], rows)
}

pub fn write_grid_csv(path: &Path, rows: &[(f64, f64, f64)]) -> Result<()> {
    write_rows(path, &["x0", "x1", "prob"], rows)
}

pub fn write_points_csv(path: &Path, points: &[(f64, f64, u8)]) -> Result<()> {
    write_rows(path, &["x0", "x1", "label"], points)
}

pub fn write_amplitudes_csv(path: &Path, s: &StateVector) -> Result<()> {
    write_rows(
        path,
        &["basis_index", "re", "im"],
        s.amplitudes().iter().enumerate().map(|(i, a)| (i, a.re, a.im)),
    )
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut f = File::create(path)?;
    serde_json::to_writer_pretty(&mut f, value)?;
    f.write_all(b"\n")?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_model_grid() {
        let mut m = PqcModel::identity(1);
        m.scale_a = 0.0;
        let g = decision_grid(&m, 7).unwrap();
        assert_eq!(g.len(), 49);
        assert!(g.iter().all(|c| c.2 == 0.5));
        assert_eq!((g[1].0, g[1].1), (-1.0 + 2.0 / 6.0, -1.0));
        assert_eq!(g[7].1, -1.0 + 2.0 / 6.0);
        assert!(decision_grid(&m, 1).is_err());
    }

    #[test]
    fn csv_layouts() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("loss.csv");
        write_loss_csv(&p, &[0.5, 0.25]).unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "epoch,loss\n0,0.5\n1,0.25\n");

        let p = dir.path().join("fit.csv");
        let m = PqcModel::identity(1);
        write_fit_csv(&p, &fit_curve(&m, Target::X2, &[0.0]).unwrap()).unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "x,f,F\n0.0,0.0,1.0\n");

        let p = dir.path().join("amps.csv");
        write_amplitudes_csv(&p, &StateVector::zero(1)).unwrap();
        assert_eq!(
            std::fs::read_to_string(&p).unwrap(),
            "basis_index,re,im\n0,1.0,0.0\n1,0.0,0.0\n"
        );

        let p = dir.path().join("meta.json");
        write_json(&p, &serde_json::json!({"seed": 1})).unwrap();
        let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap();
        assert_eq!(v["seed"], 1);
    }
}
