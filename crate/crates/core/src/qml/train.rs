//! Losses, finite-difference gradients, Adam and the full-batch training loop.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sim::C64;

use super::data::{Dataset2D, RegressionTask};
use super::encoding::{encode_classification, encode_regression, to_array16};
use super::model::{compile, pqc_forward, z0, CompiledLayer, PqcModel, MODEL_QUBITS, PARAMS_PER_LAYER};

const PROB_CLAMP: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
    pub epochs: usize,
    pub fd_step: f64,
    pub seed: u64,
    pub n_layers: usize,
    /// Worker threads for per-sample evaluation; 0 or 1 runs serially.
    pub threads: usize,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            learning_rate: 0.05,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
            epochs: 300,
            fd_step: 1e-4,
            seed: 0,
            n_layers: 4,
            threads: 1,
        }
    }
}

impl TrainConfig {
    pub fn classification() -> Self {
        TrainConfig {
            n_layers: 2,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("learning_rate", self.learning_rate),
            ("beta1", self.beta1),
            ("beta2", self.beta2),
            ("epsilon", self.epsilon),
            ("fd_step", self.fd_step),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::OutOfRange {
                    name,
                    value: v,
                    range: "(0, inf)".into(),
                });
            }
        }
        for (name, v) in [("beta1", self.beta1), ("beta2", self.beta2)] {
            if v >= 1.0 {
                return Err(Error::OutOfRange {
                    name,
                    value: v,
                    range: "(0, 1)".into(),
                });
            }
        }
        Ok(())
    }
}

pub fn logistic(v: f64) -> f64 {
    1.0 / (1.0 + (-v).exp())
}

pub fn predict_regression(m: &PqcModel, x: f64) -> Result<f64> {
    Ok(m.scale_a * pqc_forward(m, &encode_regression(x, MODEL_QUBITS)?)? + m.shift_b)
}

pub fn predict_class_prob(m: &PqcModel, x0: f64, x1: f64) -> Result<f64> {
    let z = pqc_forward(m, &encode_classification(x0, x1, MODEL_QUBITS)?)?;
    Ok(logistic(m.scale_a * z + m.shift_b))
}

pub fn predict_class(m: &PqcModel, x0: f64, x1: f64) -> Result<u8> {
    Ok(u8::from(predict_class_prob(m, x0, x1)? > 0.5))
}

/// Mean squared error over `(prediction, target)` pairs.
pub fn mse(pairs: impl IntoIterator<Item = (f64, f64)>) -> Result<f64> {
    let (mut sum, mut n) = (0.0, 0usize);
    for (p, y) in pairs {
        sum += (p - y) * (p - y);
        n += 1;
    }
    if n == 0 {
        return Err(Error::EmptyData);
    }
    Ok(sum / n as f64)
}

/// Mean binary cross-entropy with probabilities clamped away from 0 and 1.
pub fn bce(pairs: impl IntoIterator<Item = (f64, u8)>) -> Result<f64> {
    let (mut sum, mut n) = (0.0, 0usize);
    for (p, y) in pairs {
        let p = p.clamp(PROB_CLAMP, 1.0 - PROB_CLAMP);
        sum -= if y == 1 { p.ln() } else { (1.0 - p).ln() };
        n += 1;
    }
    if n == 0 {
        return Err(Error::EmptyData);
    }
    Ok(sum / n as f64)
}

pub fn loss_quadratic(m: &PqcModel, task: &RegressionTask) -> Result<f64> {
    Problem::regression(task)?.loss(m)
}

pub fn loss_bce(m: &PqcModel, data: &Dataset2D) -> Result<f64> {
    Problem::classification(data)?.loss(m)
}

pub fn accuracy(m: &PqcModel, data: &Dataset2D) -> Result<f64> {
    if data.is_empty() {
        return Err(Error::EmptyData);
    }
    let mut hits = 0usize;
    for &(x0, x1, y) in &data.points {
        hits += usize::from(predict_class(m, x0, x1)? == y);
    }
    Ok(hits as f64 / data.len() as f64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum LossKind {
    Quadratic,
    CrossEntropy,
}

/// Encoded inputs and targets for repeated loss evaluation.
#[derive(Clone, Debug)]
pub struct Problem {
    kind: LossKind,
    inputs: Vec<[C64; 16]>,
    targets: Vec<f64>,
    threads: usize,
}

impl Problem {
    pub fn regression(task: &RegressionTask) -> Result<Self> {
        if task.samples.is_empty() {
            return Err(Error::EmptyData);
        }
        let mut inputs = Vec::with_capacity(task.samples.len());
        for &(x, _) in &task.samples {
            inputs.push(to_array16(&encode_regression(x, MODEL_QUBITS)?)?);
        }
        Ok(Problem {
            kind: LossKind::Quadratic,
            inputs,
            targets: task.samples.iter().map(|s| s.1).collect(),
            threads: 1,
        })
    }

    pub fn classification(data: &Dataset2D) -> Result<Self> {
        if data.is_empty() {
            return Err(Error::EmptyData);
        }
        let mut inputs = Vec::with_capacity(data.len());
        for &(x0, x1, _) in &data.points {
            inputs.push(to_array16(&encode_classification(x0, x1, MODEL_QUBITS)?)?);
        }
        Ok(Problem {
            kind: LossKind::CrossEntropy,
            inputs,
            targets: data.points.iter().map(|p| f64::from(p.2)).collect(),
            threads: 1,
        })
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = threads.max(1);
        self
    }

    pub fn len(&self) -> usize {
        self.inputs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inputs.is_empty()
    }

    fn loss_from(&self, zs: &[f64], a: f64, b: f64) -> f64 {
        let n = zs.len() as f64;
        match self.kind {
            LossKind::Quadratic => {
                zs.iter()
                    .zip(&self.targets)
                    .map(|(z, y)| (a * z + b - y).powi(2))
                    .sum::<f64>()
                    / n
            }
            LossKind::CrossEntropy => {
                zs.iter()
                    .zip(&self.targets)
                    .map(|(z, &y)| {
                        let p = logistic(a * z + b).clamp(PROB_CLAMP, 1.0 - PROB_CLAMP);
                        if y > 0.5 {
                            -p.ln()
                        } else {
                            -(1.0 - p).ln()
                        }
                    })
                    .sum::<f64>()
                    / n
            }
        }
    }

    /// Runs `f` on every sample index, splitting across worker threads.
    fn per_sample<T: Send, F: Fn(usize) -> T + Sync>(&self, f: F) -> Vec<T> {
        let n = self.len();
        if self.threads <= 1 || n < 2 * self.threads {
            return (0..n).map(f).collect();
        }
        let chunk = n.div_ceil(self.threads);
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..n)
                .step_by(chunk)
                .map(|start| {
                    let f = &f;
                    scope.spawn(move || (start..(start + chunk).min(n)).map(f).collect::<Vec<_>>())
                })
                .collect();
            handles
                .into_iter()
                .flat_map(|h| h.join().expect("worker panicked"))
                .collect()
        })
    }

    fn check(&self, m: &PqcModel) -> Result<()> {
        if m.n_qubits != MODEL_QUBITS {
            return Err(Error::ArityMismatch {
                gate: "diamond".into(),
                expected: MODEL_QUBITS,
                found: m.n_qubits,
            });
        }
        Ok(())
    }

    /// Raw `⟨Z_0⟩` per sample.
    pub fn outputs(&self, m: &PqcModel) -> Result<Vec<f64>> {
        self.check(m)?;
        let layers = compile(m);
        Ok(self.per_sample(|i| {
            let mut s = self.inputs[i];
            for l in &layers {
                l.apply(&mut s);
            }
            z0(&s)
        }))
    }

    pub fn loss(&self, m: &PqcModel) -> Result<f64> {
        let zs = self.outputs(m)?;
        Ok(self.loss_from(&zs, m.scale_a, m.shift_b))
    }

    /// Central-difference gradient over the flat parameter vector.
    ///
    /// States before each layer are cached per sample, so a perturbation in
    /// layer `l` re-runs only layers `l..`.
    pub fn gradient(&self, m: &PqcModel, h: f64) -> Result<Vec<f64>> {
        self.check(m)?;
        if h.is_nan() || h <= 0.0 {
            return Err(Error::OutOfRange {
                name: "fd_step",
                value: h,
                range: "(0, inf)".into(),
            });
        }
        let layers = compile(m);
        let n_layers = layers.len();
        let prefix: Vec<Vec<[C64; 16]>> = self.per_sample(|i| {
            let mut states = Vec::with_capacity(n_layers + 1);
            let mut s = self.inputs[i];
            states.push(s);
            for l in &layers {
                l.apply(&mut s);
                states.push(s);
            }
            states
        });
        let zs: Vec<f64> = prefix.iter().map(|p| z0(&p[n_layers])).collect();
        let (a, b) = (m.scale_a, m.shift_b);
        let flat = m.to_flat();
        let mut grad = vec![0.0; flat.len()];

        let run_from = |l: usize, replaced: &CompiledLayer| -> Vec<f64> {
            self.per_sample(|i| {
                let mut s = prefix[i][l];
                replaced.apply(&mut s);
                for layer in &layers[l + 1..] {
                    layer.apply(&mut s);
                }
                z0(&s)
            })
        };

        for l in 0..n_layers {
            for k in 0..PARAMS_PER_LAYER {
                let idx = l * PARAMS_PER_LAYER + k;
                let mut losses = [0.0; 2];
                for (slot, sign) in [1.0, -1.0].into_iter().enumerate() {
                    let mut thetas = m.thetas[l];
                    let mut time = m.times[l];
                    if k < 3 * MODEL_QUBITS {
                        thetas[k / 3][k % 3] += sign * h;
                    } else {
                        time += sign * h;
                    }
                    let zs = run_from(l, &CompiledLayer::new(&thetas, time));
                    losses[slot] = self.loss_from(&zs, a, b);
                }
                grad[idx] = (losses[0] - losses[1]) / (2.0 * h);
            }
        }
        let na = flat.len() - 2;
        grad[na] = (self.loss_from(&zs, a + h, b) - self.loss_from(&zs, a - h, b)) / (2.0 * h);
        grad[na + 1] = (self.loss_from(&zs, a, b + h) - self.loss_from(&zs, a, b - h)) / (2.0 * h);
        Ok(grad)
    }
}

/// Central-difference gradient of an arbitrary scalar function.
pub fn fd_gradient(f: impl Fn(&[f64]) -> f64, params: &[f64], h: f64) -> Vec<f64> {
    let mut p = params.to_vec();
    (0..params.len())
        .map(|i| {
            let orig = p[i];
            p[i] = orig + h;
            let up = f(&p);
            p[i] = orig - h;
            let down = f(&p);
            p[i] = orig;
            (up - down) / (2.0 * h)
        })
        .collect()
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AdamState {
    pub m: Vec<f64>,
    pub v: Vec<f64>,
    pub t: u64,
}

impl AdamState {
    pub fn new(n: usize) -> Self {
        AdamState {
            m: vec![0.0; n],
            v: vec![0.0; n],
            t: 0,
        }
    }
}

/// One bias-corrected Adam update.
pub fn adam_step(params: &[f64], grads: &[f64], state: &AdamState, cfg: &TrainConfig) -> Result<(Vec<f64>, AdamState)> {
    let n = params.len();
    for found in [grads.len(), state.m.len(), state.v.len()] {
        if found != n {
            return Err(Error::ShapeMismatch { expected: n, found });
        }
    }
    let t = state.t + 1;
    let c1 = 1.0 - cfg.beta1.powi(t as i32);
    let c2 = 1.0 - cfg.beta2.powi(t as i32);
    let mut next = AdamState {
        m: Vec::with_capacity(n),
        v: Vec::with_capacity(n),
        t,
    };
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let m = cfg.beta1 * state.m[i] + (1.0 - cfg.beta1) * grads[i];
        let v = cfg.beta2 * state.v[i] + (1.0 - cfg.beta2) * grads[i] * grads[i];
        out.push(params[i] - cfg.learning_rate * (m / c1) / ((v / c2).sqrt() + cfg.epsilon));
        next.m.push(m);
        next.v.push(v);
    }
    Ok((out, next))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainResult {
    /// Parameters with the lowest loss seen.
    pub model: PqcModel,
    /// Loss before training followed by the loss after each epoch.
    pub history: Vec<f64>,
    pub best_loss: f64,
    pub best_epoch: usize,
}

/// Seeded initial model, as used by [`train`].
pub fn initial_model(cfg: &TrainConfig) -> PqcModel {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    PqcModel::random(cfg.n_layers, &mut rng)
}

/// Full-batch Adam from [`initial_model`].
pub fn train(problem: &Problem, cfg: &TrainConfig) -> Result<TrainResult> {
    train_from(problem, initial_model(cfg), cfg)
}

pub fn train_from(problem: &Problem, start: PqcModel, cfg: &TrainConfig) -> Result<TrainResult> {
    cfg.validate()?;
    let problem = problem.clone().with_threads(cfg.threads);
    let mut model = start;
    let mut state = AdamState::new(model.param_count());
    let mut loss = problem.loss(&model)?;
    if !loss.is_finite() {
        return Err(Error::NonFiniteLoss { epoch: 0 });
    }
    let mut history = vec![loss];
    let (mut best, mut best_loss, mut best_epoch) = (model.clone(), loss, 0);
    for epoch in 1..=cfg.epochs {
        let grad = problem.gradient(&model, cfg.fd_step)?;
        let (p, s) = adam_step(&model.to_flat(), &grad, &state, cfg)?;
        model.set_flat(&p)?;
        state = s;
        loss = problem.loss(&model)?;
        if !loss.is_finite() {
            return Err(Error::NonFiniteLoss { epoch });
        }
        history.push(loss);
        if loss < best_loss {
            best = model.clone();
            best_loss = loss;
            best_epoch = epoch;
        }
    }
    Ok(TrainResult {
        model: best,
        history,
        best_loss,
        best_epoch,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qml::data::Target;

    fn task(f: impl Fn(f64) -> f64, n: usize) -> RegressionTask {
        RegressionTask {
            target: Target::X2,
            samples: (0..n)
                .map(|i| {
                    let x = -1.0 + 2.0 * i as f64 / (n - 1).max(1) as f64;
                    (x, f(x))
                })
                .collect(),
        }
    }

    fn random_model(seed: u64, layers: usize) -> PqcModel {
        initial_model(&TrainConfig {
            seed,
            n_layers: layers,
            ..TrainConfig::default()
        })
    }

    #[test]
    fn loss_examples() {
        assert!(mse([(1.0, 1.0), (0.5, 0.5)]).unwrap() == 0.0);
        assert!((mse([(0.4, 0.3)]).unwrap() - 0.01).abs() < 1e-15);
        assert!((bce([(0.5, 0), (0.5, 1)]).unwrap() - 2f64.ln()).abs() < 1e-15);
        assert!(bce([(0.0, 1)]).unwrap().is_finite());
        assert_eq!(mse(Vec::new()), Err(Error::EmptyData));
        assert_eq!(bce(Vec::new()), Err(Error::EmptyData));
    }

    #[test]
    fn predictions() {
        let m = PqcModel::identity(2);
        assert!((predict_regression(&m, 0.0).unwrap() - 1.0).abs() < 1e-14);
        let mut flat = m.clone();
        flat.scale_a = 0.0;
        flat.shift_b = 0.3;
        assert!((predict_regression(&flat, 0.7).unwrap() - 0.3).abs() < 1e-15);
        flat.shift_b = 0.0;
        assert_eq!(predict_class_prob(&flat, 0.2, -0.4).unwrap(), 0.5);
        let r = random_model(5, 3);
        for i in 0..21 {
            let x = -1.0 + 0.1 * i as f64;
            assert!(predict_regression(&r, x).unwrap().abs() <= r.scale_a.abs() + r.shift_b.abs());
        }
        let mut lo = r.clone();
        let mut p_prev = 0.0;
        for b in [-1.0, 0.0, 1.0] {
            lo.shift_b = b;
            let p = predict_class_prob(&lo, 0.3, 0.1).unwrap();
            assert!(p > p_prev);
            p_prev = p;
        }
    }

    #[test]
    fn problem_matches_direct_loss() {
        let t = RegressionTask::sampled(Target::Sin, 30, 2).unwrap();
        let m = random_model(1, 2);
        let direct = mse(t.samples.iter().map(|&(x, y)| (predict_regression(&m, x).unwrap(), y))).unwrap();
        assert!((loss_quadratic(&m, &t).unwrap() - direct).abs() < 1e-14);
        let threaded = Problem::regression(&t).unwrap().with_threads(4).loss(&m).unwrap();
        assert_eq!(threaded, Problem::regression(&t).unwrap().loss(&m).unwrap());

        let d = crate::qml::data::make_dataset(crate::qml::data::Shape::S2a, 40, 1).unwrap();
        let direct = bce(d
            .points
            .iter()
            .map(|&(a, b, y)| (predict_class_prob(&m, a, b).unwrap(), y)))
        .unwrap();
        assert!((loss_bce(&m, &d).unwrap() - direct).abs() < 1e-14);
    }

    #[test]
    fn gradient_examples() {
        // F = a·z + b, target F + 1 ⇒ ∂L/∂b = −2
        let m = random_model(9, 1);
        let x = 0.3;
        let f = predict_regression(&m, x).unwrap();
        let t = task(|_| f + 1.0, 1);
        let t = RegressionTask {
            samples: vec![(x, t.samples[0].1)],
            ..t
        };
        let g = Problem::regression(&t).unwrap().gradient(&m, 1e-4).unwrap();
        assert!((g[g.len() - 1] + 2.0).abs() < 1e-8);

        // a = 0 makes the loss independent of the circuit
        let mut flat = m.clone();
        flat.scale_a = 0.0;
        let g = Problem::regression(&task(|_| flat.shift_b, 5))
            .unwrap()
            .gradient(&flat, 1e-4)
            .unwrap();
        assert!(g.iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn cached_gradient_matches_generic() {
        let t = RegressionTask::sampled(Target::Abs, 12, 4).unwrap();
        let p = Problem::regression(&t).unwrap();
        let m = random_model(2, 3);
        let g = p.gradient(&m, 1e-4).unwrap();
        let generic = fd_gradient(|q| p.loss(&m.with_flat(q).unwrap()).unwrap(), &m.to_flat(), 1e-4);
        for (a, b) in g.iter().zip(&generic) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn step_halving_converges() {
        let t = RegressionTask::sampled(Target::X2, 20, 8).unwrap();
        let p = Problem::regression(&t).unwrap();
        let m = random_model(4, 2);
        let g1 = p.gradient(&m, 1e-3).unwrap();
        let g2 = p.gradient(&m, 5e-4).unwrap();
        for (a, b) in g1.iter().zip(&g2) {
            assert!((a - b).abs() < 1e-5);
        }
    }

    #[test]
    fn adam_examples() {
        let cfg = TrainConfig::default();
        let s = AdamState {
            m: vec![0.2, -0.1],
            v: vec![0.04, 0.01],
            t: 3,
        };
        let (p, s2) = adam_step(&[1.0, 2.0], &[0.0, 0.0], &s, &cfg).unwrap();
        assert!((s2.m[0] - 0.18).abs() < 1e-15 && (s2.v[1] - 0.01 * 0.999).abs() < 1e-15);
        assert_eq!(s2.t, 4);
        assert!(p[0] < 1.0 && p[1] > 2.0);

        let z = AdamState::new(2);
        let (p, _) = adam_step(&[1.0, 2.0], &[0.0, 0.0], &z, &cfg).unwrap();
        assert_eq!(p, vec![1.0, 2.0]);

        let (p, _) = adam_step(&[0.0, 0.0, 0.0], &[3.0, -0.01, 1e-3], &AdamState::new(3), &cfg).unwrap();
        for (v, sign) in p.iter().zip([-1.0, 1.0, -1.0]) {
            assert!((v - sign * cfg.learning_rate).abs() < 1e-5 * cfg.learning_rate.max(1.0));
        }
        assert!(adam_step(&[0.0], &[1.0, 2.0], &AdamState::new(1), &cfg).is_err());

        // f(x) = (x − 3)²
        let (mut x, mut st) = (vec![0.0], AdamState::new(1));
        let mut losses = vec![9.0];
        for _ in 0..2 {
            let (nx, ns) = adam_step(&x, &[2.0 * (x[0] - 3.0)], &st, &cfg).unwrap();
            x = nx;
            st = ns;
            losses.push((x[0] - 3.0).powi(2));
        }
        assert!(losses[2] < losses[1] && losses[1] < losses[0]);
    }

    #[test]
    fn constant_target_converges() {
        let p = Problem::regression(&task(|_| 0.37, 20)).unwrap();
        let mut converged = 0;
        for seed in 0..6 {
            let cfg = TrainConfig {
                epochs: 200,
                seed,
                ..TrainConfig::default()
            };
            let r = train(&p, &cfg).unwrap();
            assert_eq!(r.history.len(), 201);
            assert!(r.history.iter().all(|l| l.is_finite()));
            assert!(r.best_loss <= r.history[0]);
            converged += usize::from(r.best_loss < 1e-6);
        }
        assert!(converged >= 4, "{converged} of 6 seeds");
    }

    #[test]
    fn training_is_deterministic() {
        let t = RegressionTask::sampled(Target::Sin, 20, 1).unwrap();
        let cfg = TrainConfig {
            epochs: 5,
            n_layers: 2,
            seed: 11,
            ..TrainConfig::default()
        };
        let p = Problem::regression(&t).unwrap();
        let a = train(&p, &cfg).unwrap();
        let b = train(
            &p,
            &TrainConfig {
                threads: 3,
                ..cfg.clone()
            },
        )
        .unwrap();
        assert_eq!(a.history, b.history);
        assert_eq!(a.model, b.model);
    }

    #[test]
    fn zero_epochs_returns_initial_model() {
        let t = RegressionTask::sampled(Target::Abs, 10, 1).unwrap();
        let cfg = TrainConfig {
            epochs: 0,
            seed: 2,
            ..TrainConfig::default()
        };
        let r = train(&Problem::regression(&t).unwrap(), &cfg).unwrap();
        assert_eq!(r.model, initial_model(&cfg));
        assert_eq!(r.history.len(), 1);
    }

    #[test]
    fn config_validation() {
        let bad = TrainConfig {
            learning_rate: 0.0,
            ..TrainConfig::default()
        };
        assert!(bad.validate().is_err());
        assert!(TrainConfig {
            beta2: 1.0,
            ..TrainConfig::default()
        }
        .validate()
        .is_err());
        assert!(TrainConfig::default().validate().is_ok());
        let p = Problem::regression(&task(|x| x, 3)).unwrap();
        assert!(p.gradient(&PqcModel::identity(1), 0.0).is_err());
    }
}
