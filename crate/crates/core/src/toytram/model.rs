use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dist::TargetDistribution;
use crate::error::{Error, Result};
use crate::panel::DiscreteCdf;
use crate::pooling::CoefficientBundle;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModelKind {
    /// `h(y_k) = theta_k`
    #[serde(rename = "si")]
    SimpleIntercept,
    /// `h(y_k | x) = theta_k - x' beta`
    #[serde(rename = "si-ls")]
    SimpleInterceptLinearShift,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::SimpleIntercept => "si",
            ModelKind::SimpleInterceptLinearShift => "si-ls",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "si" => Ok(ModelKind::SimpleIntercept),
            "si-ls" => Ok(ModelKind::SimpleInterceptLinearShift),
            other => Err(Error::Parse(format!(
                "unknown model '{other}' (expected si | si-ls)"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ToyModelSpec {
    pub kind: ModelKind,
    pub classes: usize,
    pub predictors: usize,
    pub target: TargetDistribution,
}

impl ToyModelSpec {
    pub fn new(
        kind: ModelKind,
        classes: usize,
        predictors: usize,
        target: TargetDistribution,
    ) -> Result<Self> {
        if classes < 2 {
            return Err(Error::Domain(format!(
                "need at least 2 classes, got {classes}"
            )));
        }
        match (kind, predictors) {
            (ModelKind::SimpleIntercept, 0) | (ModelKind::SimpleInterceptLinearShift, 1..) => {
                Ok(ToyModelSpec {
                    kind,
                    classes,
                    predictors,
                    target,
                })
            }
            _ => Err(Error::Domain(format!(
                "{kind} models need {} predictors",
                if kind == ModelKind::SimpleIntercept {
                    "zero"
                } else {
                    "at least one"
                }
            ))),
        }
    }

    pub fn n_params(&self) -> usize {
        self.classes - 1 + self.predictors
    }
}

/// Raw intercepts `gamma` (mapped through [`cumulative_softplus`]) and shift
/// coefficients `beta`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ToyModelParams {
    pub gamma: Vec<f64>,
    pub beta: Vec<f64>,
}

impl ToyModelParams {
    pub fn check(&self, spec: &ToyModelSpec) -> Result<()> {
        if self.gamma.len() != spec.classes - 1 || self.beta.len() != spec.predictors {
            return Err(Error::Shape(format!(
                "parameters have {} intercepts and {} shifts, model needs {} and {}",
                self.gamma.len(),
                self.beta.len(),
                spec.classes - 1,
                spec.predictors
            )));
        }
        if self.gamma.iter().chain(&self.beta).any(|v| !v.is_finite()) {
            return Err(Error::Input("non-finite model parameter".into()));
        }
        Ok(())
    }

    pub fn intercepts(&self) -> Vec<f64> {
        cumulative_softplus(&self.gamma)
    }

    pub fn coefficients(&self) -> CoefficientBundle {
        CoefficientBundle {
            intercepts: self.intercepts(),
            shifts: self.beta.clone(),
        }
    }

    /// Inverse of [`ToyModelParams::coefficients`]; intercepts must be
    /// strictly increasing.
    pub fn from_coefficients(c: &CoefficientBundle) -> Result<Self> {
        Ok(ToyModelParams {
            gamma: inverse_cumulative_softplus(&c.intercepts)?,
            beta: c.shifts.clone(),
        })
    }

    pub(crate) fn flat(&self) -> Vec<f64> {
        self.gamma.iter().chain(&self.beta).copied().collect()
    }

    pub(crate) fn from_flat(v: &[f64], n_gamma: usize) -> Self {
        ToyModelParams {
            gamma: v[..n_gamma].to_vec(),
            beta: v[n_gamma..].to_vec(),
        }
    }
}

/// `log(1 + exp(x))` without overflow.
pub fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

/// `theta_1 = gamma_1`, `theta_k = gamma_1 + sum_{j=2..k} softplus(gamma_j)`.
pub fn cumulative_softplus(gamma: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(gamma.len());
    let mut acc = 0.0;
    for (j, &g) in gamma.iter().enumerate() {
        acc += if j == 0 { g } else { softplus(g) };
        out.push(acc);
    }
    out
}

pub fn inverse_cumulative_softplus(theta: &[f64]) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(theta.len());
    for (j, &t) in theta.iter().enumerate() {
        if j == 0 {
            out.push(t);
            continue;
        }
        let d = t - theta[j - 1];
        if !(d > 0.0) {
            return Err(Error::Domain(
                "intercepts must be strictly increasing".into(),
            ));
        }
        // softplus^{-1}(d) = log(expm1(d))
        out.push(if d > 30.0 {
            d + (-(-d).exp()).ln_1p()
        } else {
            d.exp_m1().ln()
        });
    }
    Ok(out)
}

/// `x' beta`, or 0 for intercept-only models.
pub fn linear_predictor(spec: &ToyModelSpec, beta: &[f64], x: &[f64]) -> Result<f64> {
    match spec.kind {
        ModelKind::SimpleIntercept => Ok(0.0),
        ModelKind::SimpleInterceptLinearShift => {
            if x.len() != beta.len() {
                return Err(Error::Shape(format!(
                    "{} covariates for {} coefficients",
                    x.len(),
                    beta.len()
                )));
            }
            Ok(x.iter().zip(beta).map(|(a, b)| a * b).sum())
        }
    }
}

pub(crate) fn cdf_from_intercepts(
    target: TargetDistribution,
    theta: &[f64],
    eta: f64,
) -> DiscreteCdf {
    let mut v: Vec<f64> = theta
        .iter()
        .map(|t| target.cdf_unchecked(t - eta))
        .collect();
    v.push(1.0);
    DiscreteCdf::from_raw(v)
}

/// `F(y_k | x) = F_Z(theta_k - x' beta)`.
pub fn predict(spec: &ToyModelSpec, params: &ToyModelParams, x: &[f64]) -> Result<DiscreteCdf> {
    params.check(spec)?;
    let eta = linear_predictor(spec, &params.beta, x)?;
    Ok(cdf_from_intercepts(spec.target, &params.intercepts(), eta))
}

/// Prediction of the model with (already monotone) intercepts and shifts.
pub fn predict_coefficients(
    spec: &ToyModelSpec,
    c: &CoefficientBundle,
    x: &[f64],
) -> Result<DiscreteCdf> {
    if c.intercepts.len() != spec.classes - 1 || c.shifts.len() != spec.predictors {
        return Err(Error::Shape("coefficients do not match the model".into()));
    }
    let eta = linear_predictor(spec, &c.shifts, x)?;
    Ok(cdf_from_intercepts(spec.target, &c.intercepts, eta))
}

/// Transformation function values `h(y_k | x)` for the first `K - 1` classes.
pub fn transformation_values(
    spec: &ToyModelSpec,
    params: &ToyModelParams,
    x: &[f64],
) -> Result<Vec<f64>> {
    params.check(spec)?;
    let eta = linear_predictor(spec, &params.beta, x)?;
    Ok(params.intercepts().iter().map(|t| t - eta).collect())
}
