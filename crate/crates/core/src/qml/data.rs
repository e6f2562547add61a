//! Regression targets and reconstructed two-dimensional classification sets.
//!
//! The nine shapes are reconstructions of the published panels, not the
//! original data: row 1 separates blobs or half-planes with growing overlap,
//! row 2 is circular, row 3 striped.

use std::f64::consts::{E, PI};
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default number of training samples per regression target.
pub const DEFAULT_SAMPLES: usize = 100;

/// Number of points in the fixed evaluation grid over `[−1, 1]`.
pub const EVAL_GRID_POINTS: usize = 201;

/// Default size of a classification data set.
pub const DEFAULT_POINTS: usize = 200;

/// Seed used for training data when none is given.
pub const DEFAULT_DATA_SEED: u64 = 7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    /// `x²`
    X2,
    /// `eˣ`, min-max rescaled from `[e⁻¹, e]` to `[−1, 1]`.
    Exp,
    /// `sin x`
    Sin,
    /// `|x|`
    Abs,
    /// `sin(πx) cos(πx/2)`
    SinCos,
    /// `sin(2πx) eˣ`
    SinExp,
}

impl Target {
    pub const ALL: [Target; 6] = [
        Target::X2,
        Target::Exp,
        Target::Sin,
        Target::Abs,
        Target::SinCos,
        Target::SinExp,
    ];

    pub fn eval(self, x: f64) -> f64 {
        match self {
            Target::X2 => x * x,
            Target::Exp => 2.0 * (x.exp() - 1.0 / E) / (E - 1.0 / E) - 1.0,
            Target::Sin => x.sin(),
            Target::Abs => x.abs(),
            Target::SinCos => (PI * x).sin() * (PI * x / 2.0).cos(),
            Target::SinExp => (2.0 * PI * x).sin() * x.exp(),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Target::X2 => "x2",
            Target::Exp => "exp",
            Target::Sin => "sin",
            Target::Abs => "abs",
            Target::SinCos => "sincos",
            Target::SinExp => "sinexp",
        }
    }

    pub fn formula(self) -> &'static str {
        match self {
            Target::X2 => "x^2",
            Target::Exp => "e^x (rescaled to [-1, 1])",
            Target::Sin => "sin(x)",
            Target::Abs => "|x|",
            Target::SinCos => "sin(pi x) cos(pi x / 2)",
            Target::SinExp => "sin(2 pi x) e^x",
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Target {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = match s.to_ascii_lowercase().as_str() {
            "x2" | "x^2" | "square" => Target::X2,
            "exp" | "e^x" => Target::Exp,
            "sin" => Target::Sin,
            "abs" | "|x|" => Target::Abs,
            "sincos" => Target::SinCos,
            "sinexp" => Target::SinExp,
            _ => return Err(Error::UnknownIdentifier(s.into())),
        };
        Ok(t)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegressionTask {
    pub target: Target,
    pub samples: Vec<(f64, f64)>,
}

impl RegressionTask {
    /// `n` points drawn uniformly from `[−1, 1]` with a seeded generator.
    pub fn sampled(target: Target, n: usize, seed: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyData);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let samples = (0..n)
            .map(|_| {
                let x = rng.gen_range(-1.0..=1.0);
                (x, target.eval(x))
            })
            .collect();
        Ok(RegressionTask { target, samples })
    }
}

/// `n` evenly spaced points from −1 to 1 inclusive.
pub fn linspace(n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![0.0],
        _ => (0..n).map(|i| -1.0 + 2.0 * i as f64 / (n - 1) as f64).collect(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Shape {
    #[serde(rename = "1a")]
    S1a,
    #[serde(rename = "1b")]
    S1b,
    #[serde(rename = "1c")]
    S1c,
    #[serde(rename = "2a")]
    S2a,
    #[serde(rename = "2b")]
    S2b,
    #[serde(rename = "2c")]
    S2c,
    #[serde(rename = "3a")]
    S3a,
    #[serde(rename = "3b")]
    S3b,
    #[serde(rename = "3c")]
    S3c,
}

impl Shape {
    pub const ALL: [Shape; 9] = [
        Shape::S1a,
        Shape::S1b,
        Shape::S1c,
        Shape::S2a,
        Shape::S2b,
        Shape::S2c,
        Shape::S3a,
        Shape::S3b,
        Shape::S3c,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Shape::S1a => "1a",
            Shape::S1b => "1b",
            Shape::S1c => "1c",
            Shape::S2a => "2a",
            Shape::S2b => "2b",
            Shape::S2c => "2c",
            Shape::S3a => "3a",
            Shape::S3b => "3b",
            Shape::S3c => "3c",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Shape::S1a => "reconstruction: gaussian blobs at ±(0.4, 0.4), sigma 0.25",
            Shape::S1b => {
                "reconstruction: blobs at ±(0.4, 0.4), sigma 0.25, kept on their side of x0 + x1 = 0 with margin 0.15"
            }
            Shape::S1c => "reconstruction: gaussian blobs at ±(0.4, 0.4), sigma 0.35",
            Shape::S2a => "reconstruction: disc r < 0.5 against r > 0.7",
            Shape::S2b => "reconstruction: ring 0.4 < r < 0.7 against r < 0.25 or r > 0.85",
            Shape::S2c => "reconstruction: circle r = 0.6 with label noise",
            Shape::S3a => "reconstruction: stripe |x0| < 0.25 against |x0| > 0.55",
            Shape::S3b => "reconstruction: diagonal stripes of width 0.5 with margin",
            Shape::S3c => "reconstruction: XOR quadrants",
        }
    }

    /// Draws one candidate point; `None` means reject and redraw.
    fn draw(self, rng: &mut ChaCha8Rng, label: u8) -> Option<(f64, f64)> {
        let uniform = |rng: &mut ChaCha8Rng| (rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0));
        let (x0, x1) = match self {
            Shape::S1a | Shape::S1b | Shape::S1c => {
                let sigma = match self {
                    Shape::S1a => 0.25,
                    Shape::S1b => 0.25,
                    _ => 0.35,
                };
                let c = if label == 0 { -0.4 } else { 0.4 };
                (c + sigma * gaussian(rng), c + sigma * gaussian(rng))
            }
            _ => uniform(rng),
        };
        if !(-1.0..=1.0).contains(&x0) || !(-1.0..=1.0).contains(&x1) {
            return None;
        }
        let r = x0.hypot(x1);
        let accept = match self {
            Shape::S1a | Shape::S1c => true,
            Shape::S1b => {
                let d = (x0 + x1) / std::f64::consts::SQRT_2;
                d.abs() >= 0.15 && (d > 0.0) == (label == 1)
            }
            Shape::S2a => {
                if label == 0 {
                    r < 0.5
                } else {
                    r > 0.7
                }
            }
            Shape::S2b => {
                if label == 0 {
                    (0.4..0.7).contains(&r)
                } else {
                    !(0.25..=0.85).contains(&r)
                }
            }
            Shape::S2c => {
                // 10% of labels flipped across the circle
                let inside = r + 0.08 * gaussian(rng) < 0.6;
                let flip = rng.gen_bool(0.1);
                (inside != flip) == (label == 0)
            }
            Shape::S3a => {
                if label == 0 {
                    x0.abs() < 0.25
                } else {
                    x0.abs() > 0.55
                }
            }
            Shape::S3b => {
                let u = (x0 - x1) / std::f64::consts::SQRT_2 + 2.0;
                let band = (u / 0.5).floor() as i64;
                let frac = u / 0.5 - band as f64;
                (0.1..0.9).contains(&frac) && (band.rem_euclid(2) as u8 == label)
            }
            Shape::S3c => x0.abs() >= 0.1 && x1.abs() >= 0.1 && (((x0 > 0.0) == (x1 > 0.0)) == (label == 0)),
        };
        accept.then_some((x0, x1))
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Shape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Shape::ALL
            .into_iter()
            .find(|sh| sh.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownIdentifier(s.into()))
    }
}

fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = 1.0 - rng.gen::<f64>();
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * PI * u2).cos()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Dataset2D {
    pub shape: Shape,
    pub points: Vec<(f64, f64, u8)>,
}

impl Dataset2D {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn count_label(&self, label: u8) -> usize {
        self.points.iter().filter(|p| p.2 == label).count()
    }
}

/// `n_points` samples, half per class (the odd one goes to class 0),
/// shuffled deterministically from `seed`.
pub fn make_dataset(shape: Shape, n_points: usize, seed: u64) -> Result<Dataset2D> {
    if n_points < 20 {
        return Err(Error::OutOfRange {
            name: "n_points",
            value: n_points as f64,
            range: ">= 20".into(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_da7a);
    let quota = [n_points - n_points / 2, n_points / 2];
    let mut points = Vec::with_capacity(n_points);
    for (label, &q) in quota.iter().enumerate() {
        let label = label as u8;
        let mut got = 0;
        while got < q {
            if let Some((x0, x1)) = shape.draw(&mut rng, label) {
                points.push((x0, x1, label));
                got += 1;
            }
        }
    }
    for i in (1..points.len()).rev() {
        let j = rng.gen_range(0..=i);
        points.swap(i, j);
    }
    Ok(Dataset2D { shape, points })
}
