//! Tuning ensemble weights on hold-out predictions.
//!
//! Minimizes the empirical mean score of the pooled prediction over the
//! probability simplex. Weights are parameterized as `w = softmax(theta)` with
//! `theta_1 = 0`, so every iterate is feasible. The search is gradient descent
//! with central finite-difference gradients and a backtracking line search,
//! started from equal weights and from `restarts - 1` random points.

use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::clamp_prob;
use crate::dist::TargetDistribution;
use crate::error::{Error, Result};
use crate::panel::{pdf_from_cdf, MemberPanel};
use crate::pooling::{pool_panel, PoolKind, SimplexWeights};
use crate::rng::{seeded, sub_seed};
use crate::scoring::{mean_score, ScoreKind};

/// Weights below this are set to exactly zero after optimization.
pub const SNAP_THRESHOLD: f64 = 1e-10;

const FD_STEP: f64 = 1e-5;
const ARMIJO: f64 = 1e-4;

#[derive(Clone, Debug, PartialEq)]
pub struct TuneConfig {
    pub score: ScoreKind,
    pub pool: PoolKind,
    pub max_iterations: usize,
    pub restarts: usize,
    pub step_tolerance: f64,
    /// Lower clamp for event masses inside the objective.
    pub epsilon: f64,
    pub seed: u64,
}

impl TuneConfig {
    pub fn new(score: ScoreKind, pool: PoolKind) -> Self {
        Self {
            score,
            pool,
            max_iterations: 500,
            restarts: 5,
            step_tolerance: 1e-8,
            epsilon: 1e-12,
            seed: 0,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_restarts(mut self, restarts: usize) -> Self {
        self.restarts = restarts;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.max_iterations == 0 {
            return Err(Error::Domain("max_iterations must be at least 1".into()));
        }
        if self.restarts == 0 {
            return Err(Error::Domain("restarts must be at least 1".into()));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 0.5) {
            return Err(Error::Domain(format!(
                "invalid clamp epsilon {}",
                self.epsilon
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TuneResult {
    pub weights: SimplexWeights,
    /// Mean validation score at `weights`, computed without clamping.
    pub score: f64,
    /// Clamped objective value at `weights`.
    pub objective: f64,
    /// Index of the restart that produced the weights.
    pub restart: usize,
}

/// `1/M` for each of `M` members.
pub fn equal_weights(m: usize) -> Result<SimplexWeights> {
    SimplexWeights::equal(m)
}

/// `softmax((0, theta_2, ..., theta_M))`.
pub fn softmax_weights(theta: &[f64]) -> Vec<f64> {
    let max = theta.iter().copied().fold(0.0f64, f64::max);
    let mut w: Vec<f64> = std::iter::once(0.0)
        .chain(theta.iter().copied())
        .map(|t| (t - max).exp())
        .collect();
    let s: f64 = w.iter().sum();
    for x in w.iter_mut() {
        *x /= s;
    }
    w
}

enum Scale {
    Linear,
    Log,
    Quantile(TargetDistribution),
    LogDensity,
}

/// Clamped mean-score objective with member predictions pre-transformed to
/// the pooling scale.
pub struct Objective {
    score: ScoreKind,
    scale: Scale,
    eps: f64,
    k: usize,
    n: usize,
    width: usize,
    /// `values[m][i * width + c]`
    values: Vec<Vec<f64>>,
    bounds: Vec<(Option<usize>, usize)>,
    exact: Vec<Option<usize>>,
}

impl Objective {
    pub fn new(panel: &MemberPanel, score: ScoreKind, pool: PoolKind, eps: f64) -> Result<Self> {
        let k = panel.n_classes();
        score.check_classes(k)?;
        if matches!(score, ScoreKind::Rps | ScoreKind::Brier)
            && panel.outcomes.iter().any(|o| o.exact().is_none())
        {
            return Err(Error::UnsupportedObservation(format!(
                "{score} needs exact outcomes"
            )));
        }
        let scale = match pool {
            PoolKind::Linear => Scale::Linear,
            PoolKind::LogLinearCdf => Scale::Log,
            PoolKind::Transformation(d) => Scale::Quantile(d),
            PoolKind::LogLinearPdf => Scale::LogDensity,
        };
        let width = if matches!(scale, Scale::LogDensity) {
            k
        } else {
            k - 1
        };
        let values = panel
            .cdfs
            .iter()
            .map(|row| {
                let mut out = Vec::with_capacity(row.len() * width);
                for cdf in row {
                    match scale {
                        Scale::Linear => out.extend_from_slice(&cdf.values()[..k - 1]),
                        // raw logs: the pools themselves do not clamp, and an
                        // exact zero stays zero under any positive weight
                        Scale::Log => out.extend(cdf.values()[..k - 1].iter().map(|f| f.ln())),
                        Scale::Quantile(d) => out.extend(
                            cdf.values()[..k - 1]
                                .iter()
                                .map(|&f| d.quantile_unchecked(clamp_prob(f))),
                        ),
                        Scale::LogDensity => out.extend(pdf_from_cdf(cdf).iter().map(|f| f.ln())),
                    }
                }
                out
            })
            .collect();
        Ok(Self {
            score,
            scale,
            eps,
            k,
            n: panel.n_instances(),
            width,
            values,
            bounds: panel.outcomes.iter().map(|o| o.bounds()).collect(),
            exact: panel.outcomes.iter().map(|o| o.exact()).collect(),
        })
    }

    /// Mean clamped score of the pool with weights `w`.
    pub fn value(&self, w: &[f64]) -> f64 {
        let active: Vec<(usize, f64)> = w
            .iter()
            .copied()
            .enumerate()
            .filter(|(_, x)| *x > 0.0)
            .collect();
        let k = self.k;
        let mut pooled = vec![0.0; k];
        let mut total = 0.0;
        for i in 0..self.n {
            let base = i * self.width;
            match self.scale {
                Scale::LogDensity => {
                    let mut acc = 0.0;
                    let mut z = 0.0;
                    for c in 0..k {
                        let g = self.combine(&active, base, c).exp();
                        z += g;
                        acc += g;
                        pooled[c] = acc;
                    }
                    if !(z > 0.0) {
                        return f64::INFINITY;
                    }
                    for p in pooled.iter_mut() {
                        *p /= z;
                    }
                    pooled[k - 1] = 1.0;
                }
                _ => {
                    match self.score {
                        ScoreKind::Nll => {
                            let (lo, hi) = self.bounds[i];
                            if let Some(l) = lo {
                                pooled[l] = self.pooled_cdf(&active, base, l);
                            }
                            pooled[hi] = self.pooled_cdf(&active, base, hi);
                        }
                        _ => {
                            for c in 0..k - 1 {
                                pooled[c] = self.pooled_cdf(&active, base, c);
                            }
                        }
                    }
                    pooled[k - 1] = 1.0;
                }
            }
            total += match self.score {
                ScoreKind::Nll => {
                    let (lo, hi) = self.bounds[i];
                    let below = lo.map_or(0.0, |l| pooled[l]);
                    -(pooled[hi] - below).max(self.eps).ln()
                }
                ScoreKind::Rps => {
                    let y = self.exact[i].unwrap_or(0);
                    let s: f64 = (0..k - 1)
                        .map(|c| {
                            let ind = if y <= c { 1.0 } else { 0.0 };
                            (pooled[c] - ind) * (pooled[c] - ind)
                        })
                        .sum();
                    s / (k - 1) as f64
                }
                ScoreKind::Brier => {
                    let y = if self.exact[i] == Some(1) { 1.0 } else { 0.0 };
                    let p = 1.0 - pooled[0];
                    (y - p) * (y - p)
                }
            };
        }
        total / self.n as f64
    }

    fn combine(&self, active: &[(usize, f64)], base: usize, c: usize) -> f64 {
        active
            .iter()
            .map(|&(m, wm)| wm * self.values[m][base + c])
            .sum()
    }

    /// Pooled CDF at class `c < K - 1`; the last class is structurally 1.
    fn pooled_cdf(&self, active: &[(usize, f64)], base: usize, c: usize) -> f64 {
        if c == self.k - 1 {
            return 1.0;
        }
        let t = self.combine(active, base, c);
        match self.scale {
            Scale::Linear => t,
            Scale::Log => t.exp(),
            Scale::Quantile(d) => d.cdf_unchecked(t),
            Scale::LogDensity => unreachable!("density pools are normalized per instance"),
        }
    }

    fn at_theta(&self, theta: &[f64]) -> f64 {
        self.value(&softmax_weights(theta))
    }
}

struct Descent {
    theta: Vec<f64>,
    value: f64,
}

fn descend(obj: &Objective, theta0: Vec<f64>, cfg: &TuneConfig) -> Descent {
    let mut theta = theta0;
    let mut value = obj.at_theta(&theta);
    if !value.is_finite() {
        return Descent { theta, value };
    }
    let d = theta.len();
    let mut step = 1.0;
    let mut probe = theta.clone();
    for _ in 0..cfg.max_iterations {
        let mut grad = vec![0.0; d];
        for j in 0..d {
            probe[j] = theta[j] + FD_STEP;
            let up = obj.at_theta(&probe);
            probe[j] = theta[j] - FD_STEP;
            let down = obj.at_theta(&probe);
            probe[j] = theta[j];
            grad[j] = (up - down) / (2.0 * FD_STEP);
        }
        let gnorm2: f64 = grad.iter().map(|g| g * g).sum();
        if !gnorm2.is_finite() || gnorm2 == 0.0 {
            break;
        }
        let gnorm = gnorm2.sqrt();
        let mut accepted = false;
        while step * gnorm >= cfg.step_tolerance {
            let cand: Vec<f64> = theta.iter().zip(&grad).map(|(t, g)| t - step * g).collect();
            let v = obj.at_theta(&cand);
            if v.is_finite() && v <= value - ARMIJO * step * gnorm2 {
                theta = cand;
                value = v;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
        let moved = step * gnorm;
        step *= 2.0;
        if moved < cfg.step_tolerance {
            break;
        }
        probe.clone_from(&theta);
    }
    Descent { theta, value }
}

/// Greedily drops members while that does not worsen the objective; optima
/// on a face of the simplex are only reached asymptotically in `theta`.
fn prune(obj: &Objective, mut w: Vec<f64>, mut value: f64) -> (Vec<f64>, f64) {
    loop {
        let active = w.iter().filter(|x| **x > 0.0).count();
        if active <= 1 {
            return (w, value);
        }
        let mut best: Option<(Vec<f64>, f64)> = None;
        for m in 0..w.len() {
            if w[m] == 0.0 {
                continue;
            }
            let rest = 1.0 - w[m];
            let cand: Vec<f64> = w
                .iter()
                .enumerate()
                .map(|(j, x)| if j == m { 0.0 } else { x / rest })
                .collect();
            let v = obj.value(&cand);
            if v <= value && best.as_ref().is_none_or(|(_, bv)| v < *bv) {
                best = Some((cand, v));
            }
        }
        match best {
            Some((cand, v)) => {
                w = cand;
                value = v;
            }
            None => return (w, value),
        }
    }
}

fn snap(w: Vec<f64>) -> Result<SimplexWeights> {
    let snapped: Vec<f64> = w
        .into_iter()
        .map(|x| if x < SNAP_THRESHOLD { 0.0 } else { x })
        .collect();
    SimplexWeights::normalized(snapped)
}

/// Finds simplex weights minimizing the mean validation score of the pool.
pub fn tune_weights(panel: &MemberPanel, config: &TuneConfig) -> Result<TuneResult> {
    config.validate()?;
    let m = panel.n_members();
    if m == 0 {
        return Err(Error::Shape("panel has no members".into()));
    }
    let obj = Objective::new(panel, config.score, config.pool, config.epsilon)?;
    let unclamped = |w: &SimplexWeights| -> Result<f64> {
        mean_score(
            &pool_panel(panel, config.pool, w)?,
            &panel.outcomes,
            config.score,
        )
    };
    let equal = SimplexWeights::equal(m)?;
    if m == 1 {
        return Ok(TuneResult {
            score: unclamped(&equal)?,
            objective: obj.value(equal.as_slice()),
            weights: equal,
            restart: 0,
        });
    }

    let starts: Vec<Vec<f64>> = (0..config.restarts)
        .map(|r| {
            if r == 0 {
                vec![0.0; m - 1]
            } else {
                let mut rng = seeded(sub_seed(config.seed, r as u64));
                (0..m - 1)
                    .map(|_| StandardNormal.sample(&mut rng))
                    .collect()
            }
        })
        .collect();
    let runs: Vec<Descent> = starts
        .into_par_iter()
        .map(|t| descend(&obj, t, config))
        .collect();

    let (restart, best) = runs
        .iter()
        .enumerate()
        .filter(|(_, d)| d.value.is_finite())
        .fold(None::<(usize, &Descent)>, |acc, (r, d)| match acc {
            Some((_, b)) if b.value <= d.value => acc,
            _ => Some((r, d)),
        })
        .ok_or_else(|| Error::Optimization("objective is not finite at any restart".into()))?;

    let (w, _) = prune(&obj, softmax_weights(&best.theta), best.value);
    let mut weights = snap(w)?;
    let mut score = unclamped(&weights)?;
    let eq_score = unclamped(&equal)?;
    if !(score <= eq_score) {
        // only reachable when clamping distorts the objective
        weights = equal;
        score = eq_score;
    }
    Ok(TuneResult {
        objective: obj.value(weights.as_slice()),
        weights,
        score,
        restart,
    })
}
