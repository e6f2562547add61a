//! Diamond-entangled variational circuits for regression and binary classification.

pub mod data;
pub mod encoding;
pub mod export;
pub mod model;
pub mod train;

pub use data::{make_dataset, Dataset2D, RegressionTask, Shape, Target};
pub use encoding::{encode_classification, encode_regression, regression_marginal};
pub use export::{decision_grid, fit_curve};
pub use model::{pqc_forward, PqcModel, MODEL_QUBITS, PARAMS_PER_LAYER};
pub use train::{
    accuracy, adam_step, fd_gradient, loss_bce, loss_quadratic, predict_class, predict_class_prob, predict_regression,
    train, AdamState, Problem, TrainConfig, TrainResult,
};
