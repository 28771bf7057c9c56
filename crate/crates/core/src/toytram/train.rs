use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{seeded, sub_seed};

use super::model::{
    inverse_cumulative_softplus, linear_predictor, ModelKind, ToyModelParams, ToyModelSpec,
};
use super::simulate::Dataset;

const ARMIJO: f64 = 1e-4;
const MAX_HALVINGS: usize = 60;
const GRAD_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Loss {
    Nll,
    Rps,
}

impl fmt::Display for Loss {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Loss::Nll => "nll",
            Loss::Rps => "rps",
        })
    }
}

impl FromStr for Loss {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nll" => Ok(Loss::Nll),
            "rps" => Ok(Loss::Rps),
            other => Err(Error::Parse(format!(
                "unknown loss '{other}' (expected nll | rps)"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum InitScheme {
    /// Intercepts from the empirical class frequencies, shifts uniform on
    /// `(-0.1, 0.1)` drawn from the config seed.
    Empirical,
    Given(ToyModelParams),
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrainConfig {
    pub loss: Loss,
    /// Initial step size of the line search.
    pub learning_rate: f64,
    pub epochs: usize,
    /// Share of the data held out for early stopping by [`train`].
    pub validation_fraction: f64,
    pub init: InitScheme,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            loss: Loss::Nll,
            learning_rate: 0.1,
            epochs: 500,
            validation_fraction: 0.2,
            init: InitScheme::Empirical,
            seed: 0,
        }
    }
}

/// Losses per epoch; index 0 is the initialization.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct TrainTrace {
    pub train_loss: Vec<f64>,
    pub valid_loss: Vec<f64>,
    pub best_epoch: usize,
    /// True when the line search could not improve the loss any further.
    pub stalled: bool,
}

/// Mean loss over a dataset.
pub fn mean_loss(
    spec: &ToyModelSpec,
    params: &ToyModelParams,
    data: &Dataset,
    loss: Loss,
) -> Result<f64> {
    params.check(spec)?;
    check_data(spec, data)?;
    Ok(loss_and_grad(spec, &params.flat(), data, loss, false).0)
}

/// Analytic gradient of the mean loss with respect to `(gamma, beta)`.
pub fn loss_gradient(
    spec: &ToyModelSpec,
    params: &ToyModelParams,
    data: &Dataset,
    loss: Loss,
) -> Result<(f64, Vec<f64>)> {
    params.check(spec)?;
    check_data(spec, data)?;
    Ok(loss_and_grad(spec, &params.flat(), data, loss, true))
}

fn check_data(spec: &ToyModelSpec, data: &Dataset) -> Result<()> {
    if data.classes != spec.classes {
        return Err(Error::Shape(format!(
            "data has {} classes, model {}",
            data.classes, spec.classes
        )));
    }
    if spec.kind == ModelKind::SimpleInterceptLinearShift && data.predictors() != spec.predictors {
        return Err(Error::Shape(format!(
            "data has {} predictors, model {}",
            data.predictors(),
            spec.predictors
        )));
    }
    if data.is_empty() {
        return Err(Error::DegenerateData("empty dataset".into()));
    }
    Ok(())
}

fn loss_and_grad(
    spec: &ToyModelSpec,
    flat: &[f64],
    data: &Dataset,
    loss: Loss,
    want_grad: bool,
) -> (f64, Vec<f64>) {
    let nk = spec.classes - 1;
    let params = ToyModelParams::from_flat(flat, nk);
    let theta = params.intercepts();
    let z = spec.target;
    let mut total = 0.0;
    let mut g_theta = vec![0.0; nk];
    let mut g_beta = vec![0.0; params.beta.len()];
    let mut dh = vec![0.0; nk];
    for (x, &y) in data.x.iter().zip(&data.y) {
        let eta = linear_predictor(spec, &params.beta, x).unwrap_or(0.0);
        dh.iter_mut().for_each(|d| *d = 0.0);
        match loss {
            Loss::Nll => {
                // upper-tail intervals are measured with survival functions
                let mass = if y > 0 && theta[y - 1] - eta > 0.0 {
                    let s_upper = if y < nk {
                        z.sf_unchecked(theta[y] - eta)
                    } else {
                        0.0
                    };
                    z.sf_unchecked(theta[y - 1] - eta) - s_upper
                } else {
                    let upper = if y < nk {
                        z.cdf_unchecked(theta[y] - eta)
                    } else {
                        1.0
                    };
                    let lower = if y > 0 {
                        z.cdf_unchecked(theta[y - 1] - eta)
                    } else {
                        0.0
                    };
                    upper - lower
                };
                total -= mass.ln();
                if want_grad && mass > 0.0 {
                    if y < nk {
                        dh[y] -= z.density_unchecked(theta[y] - eta) / mass;
                    }
                    if y > 0 {
                        dh[y - 1] += z.density_unchecked(theta[y - 1] - eta) / mass;
                    }
                }
            }
            Loss::Rps => {
                let scale = nk as f64;
                for l in 0..nk {
                    let h = theta[l] - eta;
                    let f = z.cdf_unchecked(h);
                    let ind = if y <= l { 1.0 } else { 0.0 };
                    total += (f - ind).powi(2) / scale;
                    if want_grad {
                        dh[l] = 2.0 * (f - ind) * z.density_unchecked(h) / scale;
                    }
                }
            }
        }
        if want_grad {
            let s: f64 = dh.iter().sum();
            for (g, d) in g_theta.iter_mut().zip(&dh) {
                *g += d;
            }
            if spec.kind == ModelKind::SimpleInterceptLinearShift {
                for (g, xj) in g_beta.iter_mut().zip(x) {
                    *g -= s * xj;
                }
            }
        }
    }
    let n = data.len() as f64;
    if !want_grad {
        return (total / n, Vec::new());
    }
    // chain rule through the cumulative softplus: d theta_k / d gamma_j is 1
    // for j = 0 and sigmoid(gamma_j) for 1 <= j <= k
    let mut grad = vec![0.0; flat.len()];
    let mut suffix = 0.0;
    for j in (0..nk).rev() {
        suffix += g_theta[j];
        let d = if j == 0 {
            1.0
        } else {
            crate::dist::logistic_cdf(params.gamma[j])
        };
        grad[j] = suffix * d / n;
    }
    for (j, g) in g_beta.iter().enumerate() {
        grad[nk + j] = g / n;
    }
    (total / n, grad)
}

/// Raw intercepts reproducing the empirical class frequencies.
pub fn empirical_init(spec: &ToyModelSpec, data: &Dataset) -> Result<Vec<f64>> {
    let counts = data.class_counts();
    if let Some(k) = counts.iter().position(|&c| c == 0) {
        return Err(Error::DegenerateData(format!(
            "class {} never observed in training data",
            k + 1
        )));
    }
    let n = data.len() as f64;
    let mut acc = 0.0;
    let theta: Vec<f64> = counts[..spec.classes - 1]
        .iter()
        .map(|&c| {
            acc += c as f64;
            spec.target.quantile_unchecked(acc / n)
        })
        .collect();
    inverse_cumulative_softplus(&theta)
}

fn initial_params(
    spec: &ToyModelSpec,
    data: &Dataset,
    cfg: &TrainConfig,
) -> Result<ToyModelParams> {
    match &cfg.init {
        InitScheme::Given(p) => {
            p.check(spec)?;
            Ok(p.clone())
        }
        InitScheme::Empirical => {
            let gamma = empirical_init(spec, data)?;
            let mut rng = seeded(cfg.seed);
            let beta = (0..spec.predictors)
                .map(|_| rng.random_range(-0.1..0.1))
                .collect();
            Ok(ToyModelParams { gamma, beta })
        }
    }
}

/// Full-batch gradient descent with backtracking, keeping the parameters of
/// the epoch with the smallest validation loss (training loss when `valid`
/// is `None`).
pub fn train_with_validation(
    train: &Dataset,
    valid: Option<&Dataset>,
    spec: &ToyModelSpec,
    cfg: &TrainConfig,
) -> Result<(ToyModelParams, TrainTrace)> {
    if !(cfg.learning_rate > 0.0) || !cfg.learning_rate.is_finite() {
        return Err(Error::Domain("learning rate must be positive".into()));
    }
    check_data(spec, train)?;
    if let Some(v) = valid {
        check_data(spec, v)?;
    }
    if let Some(k) = train.class_counts().iter().position(|&c| c == 0) {
        return Err(Error::DegenerateData(format!(
            "class {} never observed in training data",
            k + 1
        )));
    }
    let init = initial_params(spec, train, cfg)?;
    let nk = spec.classes - 1;
    let mut theta = init.flat();
    let (mut loss, mut grad) = loss_and_grad(spec, &theta, train, cfg.loss, true);
    if !loss.is_finite() {
        return Err(Error::Training(format!("initial training loss is {loss}")));
    }
    let eval_valid = |flat: &[f64]| valid.map(|v| loss_and_grad(spec, flat, v, cfg.loss, false).0);

    let mut trace = TrainTrace::default();
    trace.train_loss.push(loss);
    let first_valid = eval_valid(&theta).unwrap_or(loss);
    trace.valid_loss.push(first_valid);
    let mut best = (first_valid, theta.clone());
    let mut lr = cfg.learning_rate;

    for epoch in 1..=cfg.epochs {
        let g2: f64 = grad.iter().map(|g| g * g).sum();
        if g2.sqrt() < GRAD_TOL {
            break;
        }
        let mut accepted = None;
        for _ in 0..MAX_HALVINGS {
            let cand: Vec<f64> = theta.iter().zip(&grad).map(|(t, g)| t - lr * g).collect();
            let (l, g) = loss_and_grad(spec, &cand, train, cfg.loss, true);
            if l.is_finite() && l <= loss - ARMIJO * lr * g2 {
                accepted = Some((cand, l, g));
                break;
            }
            lr *= 0.5;
        }
        let Some((cand, l, g)) = accepted else {
            trace.stalled = true;
            break;
        };
        theta = cand;
        loss = l;
        grad = g;
        lr *= 2.0;
        trace.train_loss.push(loss);
        let v = eval_valid(&theta).unwrap_or(loss);
        trace.valid_loss.push(v);
        if v < best.0 {
            best = (v, theta.clone());
            trace.best_epoch = epoch;
        }
    }
    Ok((ToyModelParams::from_flat(&best.1, nk), trace))
}

/// Splits off `validation_fraction` of `data` (shuffled with a stream derived
/// from the seed) and trains on the rest.
pub fn train(
    data: &Dataset,
    spec: &ToyModelSpec,
    cfg: &TrainConfig,
) -> Result<(ToyModelParams, TrainTrace)> {
    if !(0.0..1.0).contains(&cfg.validation_fraction) {
        return Err(Error::Domain(
            "validation fraction must lie in [0, 1)".into(),
        ));
    }
    let n_valid = (cfg.validation_fraction * data.len() as f64).round() as usize;
    if n_valid == 0 {
        return train_with_validation(data, None, spec, cfg);
    }
    let mut idx: Vec<usize> = (0..data.len()).collect();
    idx.shuffle(&mut seeded(sub_seed(cfg.seed, u64::MAX)));
    let (v, t) = idx.split_at(n_valid);
    let (train_part, valid_part) = (data.subset(t), data.subset(v));
    train_with_validation(&train_part, Some(&valid_part), spec, cfg)
}
