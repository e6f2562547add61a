use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde_json::json;

use diamondq::circuit::apply_circuit_traced;
use diamondq::qft::{self, QftOptions, QftScheme};
use diamondq::qml::data::{linspace, DEFAULT_DATA_SEED, DEFAULT_POINTS, DEFAULT_SAMPLES, EVAL_GRID_POINTS};
use diamondq::qml::export::{
    fit_curve, write_amplitudes_csv, write_fit_csv, write_grid_csv, write_json, write_loss_csv, write_points_csv,
};
use diamondq::qml::{self, Problem, RegressionTask, Shape, Target, TrainConfig};
use diamondq::sim::{reduced_density_matrix, RESET_PURITY_TOL};
use diamondq::verify::{self, Scope};
use diamondq::C64;

use crate::config::{FileConfig, Resolver};
use crate::report::RunReport;
use crate::{Common, QftArgs, TrainArgs};

const QFT_TOL: f64 = 1e-8;
const NORM_TOL: f64 = 1e-12;
const DEFAULT_GRID_RESOLUTION: usize = 51;

fn out_dir(r: &mut Resolver, common: &Common) -> Result<PathBuf> {
    let dir = r.pick("out_dir", common.out_dir.clone(), PathBuf::from("out"))?;
    std::fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    Ok(dir)
}

pub fn verify(file: &FileConfig, scope: Option<String>) -> Result<RunReport> {
    let mut r = Resolver::new(file);
    let scope: Scope = r.pick("scope", scope, "all".into())?.parse()?;
    let mut report = RunReport::new("verify");
    report.checks = verify::run(scope)?;
    report.config_echo = r.finish();
    Ok(report)
}

fn parse_bits(s: &str) -> Result<usize> {
    if s.is_empty() || !s.chars().all(|c| c == '0' || c == '1') {
        bail!("input '{s}' is not a bit string");
    }
    Ok(usize::from_str_radix(s, 2)?)
}

pub fn qft(common: &Common, file: &FileConfig, a: &QftArgs) -> Result<RunReport> {
    let mut r = Resolver::new(file);
    let scheme: QftScheme = r.pick("scheme", a.scheme.clone(), "double-string".into())?.parse()?;
    let input = r.pick_opt("input", a.input.clone())?;
    let default_n = input.as_ref().map_or(3, |s| s.len());
    let n = r.pick("n", a.n, default_n)?;
    let input = input.unwrap_or_else(|| "0".repeat(n));
    if input.len() != n {
        bail!("input '{input}' has {} bits but n = {n}", input.len());
    }
    let j = parse_bits(&input)?;
    let approx = r.pick_opt("approx_threshold", a.approx_threshold)?;
    let counts = r.pick("counts", a.counts.then_some(true), false)?;
    let dump = r.pick("dump_circuit", a.dump_circuit.then_some(true), false)?;
    let dir = out_dir(&mut r, common)?;

    let program = qft::build_qft(
        scheme,
        n,
        &QftOptions {
            approx_threshold: approx,
        },
    )?;
    let layout = &program.layout;
    let mut report = RunReport::new("qft");

    let state = qft::prepare_input(layout, j)?;
    let (out, resets) = apply_circuit_traced(&program.circuit, &state)?;
    let target = qft::target_transform(n, approx)?;
    let expected = qft::expected_output(layout, &target.column(j));
    let ov = expected.inner(&out);
    let phase = if ov.norm() > 1e-12 {
        ov / ov.norm()
    } else {
        C64::new(1.0, 0.0)
    };
    let dev = out
        .amplitudes()
        .iter()
        .zip(expected.amplitudes())
        .map(|(o, e)| (o - phase * e).norm())
        .fold(0.0, f64::max);
    report.check("output_matches_reference", dev, QFT_TOL);
    report.check("norm_preserved", (out.norm_sqr() - 1.0).abs(), NORM_TOL);
    let mut anc = 1.0f64;
    for (qs, t) in &layout.ancilla_final {
        let rho = reduced_density_matrix(&out, qs)?;
        let v = t.state_vector();
        let f = rho.apply(&v).iter().zip(&v).map(|(x, y)| y.conj() * x).sum::<C64>().re;
        anc = anc.min(f);
    }
    report.check("ancillas_restored", 1.0 - anc, 1e-9);
    if !resets.is_empty() {
        let worst = resets.iter().map(|r| r.purity).fold(1.0, f64::min);
        report.check("reset_purity", 1.0 - worst, RESET_PURITY_TOL);
    }
    let all = qft::check_qft(&program, approx)?;
    report.check("all_inputs_match_reference", all.max_deviation, QFT_TOL);

    report.result("total_qubits", layout.total_qubits);
    report.result("output_qubits", &layout.outputs);
    report.result("roles", &layout.roles);
    report.result("resets", resets.len());
    if approx.is_some() {
        report.result("deviation_from_exact", qft::check_qft(&program, None)?.max_deviation);
    }
    if counts {
        let c = qft::gate_counts(&program.circuit);
        report.result("counts", c);
        report.result("phase_stages", c.phase_stages());
        if scheme == QftScheme::DoubleString {
            report.result(
                "closed_form_counts",
                json!({"h": n, "x": n * (n + 1), "rn": n * (n + 1) / 2, "iswap": n * n.saturating_sub(1)}),
            );
        }
    }

    let amps = dir.join("amplitudes.csv");
    write_amplitudes_csv(&amps, &out)?;
    report.artifact(&amps);
    if dump {
        let p = dir.join("circuit.txt");
        std::fs::write(&p, program.circuit.to_text())?;
        report.artifact(&p);
    }
    report.config_echo = r.finish();
    Ok(report)
}

fn train_config(r: &mut Resolver, common: &Common, a: &TrainArgs, base: TrainConfig) -> Result<TrainConfig> {
    Ok(TrainConfig {
        seed: r.pick("seed", common.seed, base.seed)?,
        n_layers: r.pick("layers", a.layers, base.n_layers)?,
        epochs: r.pick("epochs", a.epochs, base.epochs)?,
        learning_rate: r.pick("learning_rate", a.learning_rate, base.learning_rate)?,
        beta1: r.pick("beta1", None, base.beta1)?,
        beta2: r.pick("beta2", None, base.beta2)?,
        epsilon: r.pick("epsilon", None, base.epsilon)?,
        fd_step: r.pick("fd_step", a.fd_step, base.fd_step)?,
        threads: r.pick("threads", common.threads, base.threads)?,
    })
}

fn training_checks(report: &mut RunReport, history: &[f64], best: f64) {
    let finite = history.iter().all(|l| l.is_finite());
    report.check("loss_finite", if finite { 0.0 } else { f64::INFINITY }, 0.0);
    report.check("best_not_above_initial", (best - history[0]).max(0.0), 0.0);
}

fn write_common(report: &mut RunReport, dir: &Path, history: &[f64]) -> Result<()> {
    let p = dir.join("loss.csv");
    write_loss_csv(&p, history)?;
    report.artifact(&p);
    Ok(())
}

pub fn qcl(common: &Common, file: &FileConfig, a: &TrainArgs) -> Result<RunReport> {
    let mut r = Resolver::new(file);
    let target: Target = r.pick("target", a.target.clone(), "x2".into())?.parse()?;
    let samples = r.pick("samples", a.samples, DEFAULT_SAMPLES)?;
    let data_seed = r.pick("data_seed", a.data_seed, DEFAULT_DATA_SEED)?;
    let cfg = train_config(&mut r, common, a, TrainConfig::default())?;
    let dir = out_dir(&mut r, common)?;

    let task = RegressionTask::sampled(target, samples, data_seed)?;
    let result = qml::train(&Problem::regression(&task)?, &cfg)?;
    let fit = fit_curve(&result.model, target, &linspace(EVAL_GRID_POINTS))?;
    let grid_mse = qml::train::mse(fit.iter().map(|&(_, f, p)| (p, f)))?;

    let mut report = RunReport::new("qcl");
    training_checks(&mut report, &result.history, result.best_loss);
    report.result("final_mse", result.best_loss);
    report.result("grid_mse", grid_mse);
    report.result("best_epoch", result.best_epoch);

    write_common(&mut report, &dir, &result.history)?;
    let p = dir.join("fit.csv");
    write_fit_csv(&p, &fit)?;
    report.artifact(&p);
    let p = dir.join("metadata.json");
    r.echo("target_formula", target.formula())?;
    report.config_echo = r.finish();
    write_json(
        &p,
        &json!({
            "command": "qcl",
            "config": report.config_echo,
            "seed": cfg.seed,
            "final_loss": result.best_loss,
            "grid_mse": grid_mse,
            "model": result.model,
        }),
    )?;
    report.artifact(&p);
    Ok(report)
}

pub fn classify(common: &Common, file: &FileConfig, a: &TrainArgs) -> Result<RunReport> {
    let mut r = Resolver::new(file);
    let shape: Shape = r.pick("shape", a.shape.clone(), "1b".into())?.parse()?;
    let points = r.pick("samples", a.samples, DEFAULT_POINTS)?;
    let data_seed = r.pick("data_seed", a.data_seed, DEFAULT_DATA_SEED)?;
    let resolution = r.pick("resolution", a.resolution, DEFAULT_GRID_RESOLUTION)?;
    let cfg = train_config(&mut r, common, a, TrainConfig::classification())?;
    let dir = out_dir(&mut r, common)?;

    let data = qml::make_dataset(shape, points, data_seed)?;
    let result = qml::train(&Problem::classification(&data)?, &cfg)?;
    let acc = qml::accuracy(&result.model, &data)?;
    let grid = qml::decision_grid(&result.model, resolution)?;

    let mut report = RunReport::new("classify");
    training_checks(&mut report, &result.history, result.best_loss);
    report.result("final_bce", result.best_loss);
    report.result("accuracy", acc);
    report.result("best_epoch", result.best_epoch);

    write_common(&mut report, &dir, &result.history)?;
    let p = dir.join("grid.csv");
    write_grid_csv(&p, &grid)?;
    report.artifact(&p);
    let p = dir.join("points.csv");
    write_points_csv(&p, &data.points)?;
    report.artifact(&p);
    r.echo("dataset", shape.description())?;
    report.config_echo = r.finish();
    let p = dir.join("metadata.json");
    write_json(
        &p,
        &json!({
            "command": "classify",
            "config": report.config_echo,
            "seed": cfg.seed,
            "final_loss": result.best_loss,
            "accuracy": acc,
            "dataset": shape.description(),
            "model": result.model,
        }),
    )?;
    report.artifact(&p);
    Ok(report)
}
