use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rng::{seeded, sub_seed};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BootstrapConfig {
    pub resamples: usize,
    pub quantiles: (f64, f64),
    pub seed: u64,
}

impl Default for BootstrapConfig {
    fn default() -> Self {
        BootstrapConfig {
            resamples: 1000,
            quantiles: (0.025, 0.975),
            seed: 0,
        }
    }
}

impl BootstrapConfig {
    pub fn with_seed(seed: u64) -> Self {
        BootstrapConfig {
            seed,
            ..Default::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BootstrapInterval {
    pub estimate: f64,
    pub lo: f64,
    pub hi: f64,
    pub resamples: usize,
    /// Resamples on which the metric was undefined and skipped.
    pub undefined: usize,
    pub seed: u64,
}

/// Type 7 sample quantile (linear interpolation between order statistics).
pub fn empirical_quantile(sorted: &[f64], q: f64) -> f64 {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let h = (n - 1) as f64 * q.clamp(0.0, 1.0);
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(n - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Nonparametric bootstrap interval for a metric over `n` instances.
///
/// `metric` receives instance indices (the full sample for the point
/// estimate, a resample drawn with replacement otherwise). Resample `b` is
/// drawn from its own generator seeded by `(seed, b)`, so results do not
/// depend on evaluation order.
pub fn bootstrap_ci<F>(n: usize, metric: F, cfg: &BootstrapConfig) -> Result<BootstrapInterval>
where
    F: Fn(&[usize]) -> Result<f64> + Sync,
{
    if cfg.resamples == 0 {
        return Err(Error::Domain(
            "bootstrap needs at least one resample".into(),
        ));
    }
    let (qa, qb) = cfg.quantiles;
    if !(0.0..=1.0).contains(&qa) || !(0.0..=1.0).contains(&qb) || qa > qb {
        return Err(Error::Domain(format!(
            "invalid bootstrap quantiles ({qa}, {qb})"
        )));
    }
    if n == 0 {
        return Err(Error::Shape("bootstrap over zero instances".into()));
    }
    let all: Vec<usize> = (0..n).collect();
    let estimate = metric(&all)?;

    let draws: Vec<Option<f64>> = (0..cfg.resamples)
        .into_par_iter()
        .map(|b| {
            let mut rng = seeded(sub_seed(cfg.seed, b as u64));
            let idx: Vec<usize> = (0..n).map(|_| rng.random_range(0..n)).collect();
            match metric(&idx) {
                Ok(v) => Ok(Some(v)),
                Err(Error::UndefinedMetric(_) | Error::DegenerateInput(_)) => Ok(None),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<_>>()?;

    let mut values: Vec<f64> = draws.into_iter().flatten().collect();
    let undefined = cfg.resamples - values.len();
    if 2 * undefined > cfg.resamples {
        return Err(Error::UnstableMetric {
            undefined,
            total: cfg.resamples,
        });
    }
    values.sort_by(f64::total_cmp);
    Ok(BootstrapInterval {
        estimate,
        lo: empirical_quantile(&values, qa),
        hi: empirical_quantile(&values, qb),
        resamples: cfg.resamples,
        undefined,
        seed: cfg.seed,
    })
}
