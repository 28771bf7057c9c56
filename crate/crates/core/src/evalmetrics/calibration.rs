use serde::Serialize;
use statrs::function::beta::beta_reg;

use crate::clamp_prob;
use crate::dist::{logistic_cdf, logit};
use crate::error::{Error, Result};
use crate::panel::{pdf_from_cdf, DiscreteCdf, Observation};

const IRLS_TOL: f64 = 1e-10;
const IRLS_MAX_ITER: usize = 100;
const IRLS_DIVERGENCE: f64 = 20.0;

/// One reliability bin.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CalibrationBin {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
    pub mean_pred: Option<f64>,
    pub obs_rate: Option<f64>,
    /// Exact 95% Clopper-Pearson interval for the event rate.
    pub ci: Option<(f64, f64)>,
}

/// Exact binomial interval for `x` events out of `n` at level `1 - alpha`.
pub fn clopper_pearson(x: usize, n: usize, alpha: f64) -> Result<(f64, f64)> {
    if n == 0 || x > n {
        return Err(Error::Domain(format!("invalid binomial count {x}/{n}")));
    }
    let (xf, nf) = (x as f64, n as f64);
    let lo = if x == 0 {
        0.0
    } else {
        invert_increasing(|p| beta_reg(xf, nf - xf + 1.0, p), alpha / 2.0)
    };
    let hi = if x == n {
        1.0
    } else {
        invert_increasing(|p| beta_reg(xf + 1.0, nf - xf, p), 1.0 - alpha / 2.0)
    };
    Ok((lo, hi))
}

// bisection on [0, 1] for an increasing function
fn invert_increasing(f: impl Fn(f64) -> f64, target: f64) -> f64 {
    let (mut a, mut b) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if f(mid) < target {
            a = mid;
        } else {
            b = mid;
        }
        if b - a < 1e-15 {
            break;
        }
    }
    0.5 * (a + b)
}

/// Smallest prediction whose empirical CDF reaches `q`.
fn lower_quantile(sorted: &[f64], q: f64) -> f64 {
    let n = sorted.len();
    let idx = ((q * n as f64).ceil() as usize).clamp(1, n) - 1;
    sorted[idx]
}

/// Reliability table with bins split at empirical quantiles of the
/// predictions.
///
/// `cut_levels` are quantile levels in `(0, 1)`, e.g. `[0.5, 0.9, 0.99, 0.999]`.
/// The first bin is `[0, q_1]`, the others `(q_j, q_{j+1}]`, the last ends at 1.
pub fn calibration_bins(
    pred: &[f64],
    events: &[bool],
    cut_levels: &[f64],
) -> Result<Vec<CalibrationBin>> {
    if pred.len() != events.len() || pred.is_empty() {
        return Err(Error::Shape(
            "predictions and events differ in length".into(),
        ));
    }
    if pred.iter().any(|p| !(0.0..=1.0).contains(p)) {
        return Err(Error::Domain("predictions must lie in [0, 1]".into()));
    }
    if cut_levels.iter().any(|q| !(*q > 0.0 && *q < 1.0))
        || cut_levels.windows(2).any(|w| w[1] <= w[0])
    {
        return Err(Error::Domain(
            "cut levels must be strictly increasing in (0, 1)".into(),
        ));
    }
    let mut sorted = pred.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut edges = vec![0.0];
    edges.extend(cut_levels.iter().map(|&q| lower_quantile(&sorted, q)));
    edges.push(1.0);

    let nb = edges.len() - 1;
    let mut count = vec![0usize; nb];
    let mut hits = vec![0usize; nb];
    let mut psum = vec![0.0; nb];
    for (&p, &e) in pred.iter().zip(events) {
        // first bin whose upper edge covers p
        let b = (0..nb).find(|&b| p <= edges[b + 1]).unwrap_or(nb - 1);
        count[b] += 1;
        psum[b] += p;
        if e {
            hits[b] += 1;
        }
    }
    (0..nb)
        .map(|b| {
            let (mean_pred, obs_rate, ci) = if count[b] == 0 {
                (None, None, None)
            } else {
                let n = count[b] as f64;
                (
                    Some(psum[b] / n),
                    Some(hits[b] as f64 / n),
                    Some(clopper_pearson(hits[b], count[b], 0.05)?),
                )
            };
            Ok(CalibrationBin {
                lo: edges[b],
                hi: edges[b + 1],
                count: count[b],
                mean_pred,
                obs_rate,
                ci,
            })
        })
        .collect()
}

/// Logistic recalibration of predicted exceedance probabilities.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RecalibrationFit {
    /// Intercept `a` of `logit P(event) = a + r`.
    pub citl: f64,
    /// Slope `b_1` of `logit P(event) = b_0 + b_1 r`.
    pub slope: f64,
    pub slope_intercept: f64,
    pub converged: bool,
    pub diagnostic: Option<String>,
}

struct IrlsFit {
    params: Vec<f64>,
    converged: bool,
    diagnostic: Option<String>,
}

// Newton-Raphson / IRLS for logistic regression with intercept, optional
// slope on `r`, and an optional offset.
fn irls(r: &[f64], y: &[bool], with_slope: bool, offset: bool) -> IrlsFit {
    let dim = if with_slope { 2 } else { 1 };
    let mut beta = vec![0.0; dim];
    for iter in 0..IRLS_MAX_ITER {
        let mut grad = [0.0; 2];
        let mut hess = [[0.0; 2]; 2];
        for (&ri, &yi) in r.iter().zip(y) {
            let mut eta = beta[0] + if offset { ri } else { 0.0 };
            if with_slope {
                eta += beta[1] * ri;
            }
            let mu = logistic_cdf(eta);
            let wgt = mu * (1.0 - mu);
            let resid = (if yi { 1.0 } else { 0.0 }) - mu;
            let x = [1.0, ri];
            for a in 0..dim {
                grad[a] += x[a] * resid;
                for b in 0..dim {
                    hess[a][b] += wgt * x[a] * x[b];
                }
            }
        }
        let delta = if dim == 1 {
            vec![grad[0] / hess[0][0]]
        } else {
            let det = hess[0][0] * hess[1][1] - hess[0][1] * hess[1][0];
            vec![
                (hess[1][1] * grad[0] - hess[0][1] * grad[1]) / det,
                (hess[0][0] * grad[1] - hess[1][0] * grad[0]) / det,
            ]
        };
        if delta.iter().any(|d| !d.is_finite()) {
            return IrlsFit {
                params: beta,
                converged: false,
                diagnostic: Some(format!("singular information matrix at iteration {iter}")),
            };
        }
        for (b, d) in beta.iter_mut().zip(&delta) {
            *b += d;
        }
        if beta.iter().any(|b| b.abs() > IRLS_DIVERGENCE) {
            return IrlsFit {
                params: beta,
                converged: false,
                diagnostic: Some(format!(
                    "parameters exceeded {IRLS_DIVERGENCE} in absolute value (separation?)"
                )),
            };
        }
        if delta.iter().all(|d| d.abs() < IRLS_TOL) {
            return IrlsFit {
                params: beta,
                converged: true,
                diagnostic: None,
            };
        }
    }
    IrlsFit {
        params: beta,
        converged: false,
        diagnostic: Some(format!("no convergence within {IRLS_MAX_ITER} iterations")),
    }
}

/// Calibration-in-the-large and calibration slope for predicted exceedance
/// probabilities `P(Y > y_k)` against events `1(Y > y_k)`.
pub fn citl_and_slope(pred: &[f64], events: &[bool]) -> Result<RecalibrationFit> {
    if pred.len() != events.len() || pred.is_empty() {
        return Err(Error::Shape(
            "predictions and events differ in length".into(),
        ));
    }
    if !events.iter().any(|e| *e) || events.iter().all(|e| *e) {
        return Err(Error::DegenerateInput(
            "both event classes must be present".into(),
        ));
    }
    let r: Vec<f64> = pred.iter().map(|&p| logit(clamp_prob(p))).collect();
    let mean = r.iter().sum::<f64>() / r.len() as f64;
    let var = r.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / r.len() as f64;
    if !(var > 0.0) {
        return Err(Error::DegenerateInput(
            "calibration slope is undefined for constant predictions".into(),
        ));
    }
    let slope_fit = irls(&r, events, true, false);
    let citl_fit = irls(&r, events, false, true);
    let diagnostic = match (&slope_fit.diagnostic, &citl_fit.diagnostic) {
        (None, None) => None,
        (a, b) => Some(
            [
                a.as_ref().map(|d| format!("slope: {d}")),
                b.as_ref().map(|d| format!("citl: {d}")),
            ]
            .into_iter()
            .flatten()
            .collect::<Vec<_>>()
            .join("; "),
        ),
    };
    Ok(RecalibrationFit {
        citl: citl_fit.params[0],
        slope: slope_fit.params[1],
        slope_intercept: slope_fit.params[0],
        converged: slope_fit.converged && citl_fit.converged,
        diagnostic,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassCalibration {
    pub class: usize,
    pub bins: Vec<CalibrationBin>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThresholdCalibration {
    /// Events are `Y > y_threshold`.
    pub threshold: usize,
    pub fit: Option<RecalibrationFit>,
    pub error: Option<String>,
}

/// Reliability bins on predicted class probabilities and recalibration fits
/// on exceedance probabilities, for every class / threshold.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CalibrationReport {
    pub classes: Vec<ClassCalibration>,
    pub thresholds: Vec<ThresholdCalibration>,
}

pub fn calibration_report(
    cdfs: &[DiscreteCdf],
    outcomes: &[Observation],
    cut_levels: &[f64],
) -> Result<CalibrationReport> {
    if cdfs.len() != outcomes.len() || cdfs.is_empty() {
        return Err(Error::Shape(
            "predictions and outcomes differ in length".into(),
        ));
    }
    let ys: Vec<usize> = outcomes
        .iter()
        .map(|o| {
            o.exact().ok_or_else(|| {
                Error::UnsupportedObservation("calibration needs exact outcomes".into())
            })
        })
        .collect::<Result<_>>()?;
    let k = cdfs[0].len();
    let pdfs: Vec<Vec<f64>> = cdfs.iter().map(pdf_from_cdf).collect();
    let mut classes = Vec::with_capacity(k);
    for c in 0..k {
        let pred: Vec<f64> = pdfs.iter().map(|p| p[c].clamp(0.0, 1.0)).collect();
        let ev: Vec<bool> = ys.iter().map(|&y| y == c).collect();
        classes.push(ClassCalibration {
            class: c,
            bins: calibration_bins(&pred, &ev, cut_levels)?,
        });
    }
    let thresholds = (0..k - 1)
        .map(|t| {
            let pred: Vec<f64> = cdfs.iter().map(|f| 1.0 - f.at(t)).collect();
            let ev: Vec<bool> = ys.iter().map(|&y| y > t).collect();
            match citl_and_slope(&pred, &ev) {
                Ok(fit) => ThresholdCalibration {
                    threshold: t,
                    fit: Some(fit),
                    error: None,
                },
                Err(e) => ThresholdCalibration {
                    threshold: t,
                    fit: None,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();
    Ok(CalibrationReport {
        classes,
        thresholds,
    })
}
