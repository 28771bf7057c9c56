use crate::dist::TargetDistribution;
use crate::error::{Error, Result};
use crate::panel::ContinuousCurve;

use super::SimplexWeights;

/// Averaged transformation function and the resulting ensemble density.
#[derive(Clone, Debug, PartialEq)]
pub struct ContinuousPool {
    pub mean: ContinuousCurve,
    /// `f_Z(h_bar(y)) * h_bar'(y)` at every grid point.
    pub density: Vec<f64>,
}

/// Transformation ensemble of continuous members given on a shared grid.
///
/// The derivative of the averaged curve is taken by finite differences, so
/// the density is exact only up to discretization error.
pub fn pool_continuous(
    curves: &[ContinuousCurve],
    w: &SimplexWeights,
    dist: TargetDistribution,
) -> Result<ContinuousPool> {
    let first = curves
        .first()
        .ok_or_else(|| Error::Shape("no curves to pool".into()))?;
    if curves.len() != w.len() {
        return Err(Error::Shape(format!(
            "{} curves but {} weights",
            curves.len(),
            w.len()
        )));
    }
    let grid = first.grid();
    if let Some(m) = curves.iter().position(|c| c.grid() != grid) {
        return Err(Error::Shape(format!("curve {m} uses a different grid")));
    }
    let h_bar: Vec<f64> = (0..grid.len())
        .map(|g| w.weighted_mean(&curves.iter().map(|c| c.h()[g]).collect::<Vec<_>>()))
        .collect();
    let mean = ContinuousCurve::new(grid.to_vec(), h_bar)?;
    let density = mean
        .h()
        .iter()
        .zip(mean.derivative())
        .map(|(&h, d)| dist.density_unchecked(h) * d)
        .collect();
    Ok(ContinuousPool { mean, density })
}

/// A member `F(y) = F_Z((y - location) / scale)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LocationScale {
    pub location: f64,
    pub scale: f64,
}

impl LocationScale {
    pub fn new(location: f64, scale: f64) -> Result<Self> {
        if !location.is_finite() || !(scale > 0.0) || !scale.is_finite() {
            return Err(Error::Domain(format!(
                "invalid location/scale ({location}, {scale})"
            )));
        }
        Ok(Self { location, scale })
    }

    fn h(&self, y: f64) -> f64 {
        (y - self.location) / self.scale
    }
}

/// Member and ensemble densities on a grid for location-scale members of one
/// reference family.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityCurves {
    pub grid: Vec<f64>,
    pub members: Vec<Vec<f64>>,
    pub linear: Vec<f64>,
    pub log_linear: Vec<f64>,
    pub transformation: Vec<f64>,
    /// `sum_m w_m (-log f_m(y))`
    pub avg_member_nll: Vec<f64>,
    pub linear_nll: Vec<f64>,
    pub log_linear_nll: Vec<f64>,
    pub transformation_nll: Vec<f64>,
}

/// Densities of the linear, log-linear (CDF scale) and transformation
/// ensembles of location-scale members, with point-wise negative
/// log-densities.
pub fn ensemble_density_curves(
    members: &[LocationScale],
    w: &SimplexWeights,
    dist: TargetDistribution,
    grid: &[f64],
) -> Result<DensityCurves> {
    if members.len() != w.len() || members.is_empty() {
        return Err(Error::Shape(format!(
            "{} members but {} weights",
            members.len(),
            w.len()
        )));
    }
    let ws = w.as_slice();
    let log_f = |m: &LocationScale, y: f64| dist.log_density_unchecked(m.h(y)) - m.scale.ln();
    let log_cdf = |m: &LocationScale, y: f64| dist.cdf_unchecked(m.h(y)).ln();

    let member_dens: Vec<Vec<f64>> = members
        .iter()
        .map(|m| grid.iter().map(|&y| log_f(m, y).exp()).collect())
        .collect();

    let mut linear = Vec::with_capacity(grid.len());
    let mut log_linear = Vec::with_capacity(grid.len());
    let mut avg_member_nll = Vec::with_capacity(grid.len());
    for &y in grid {
        let lf: Vec<f64> = members.iter().map(|m| log_f(m, y)).collect();
        let lc: Vec<f64> = members.iter().map(|m| log_cdf(m, y)).collect();
        linear.push(w.weighted_mean(&lf.iter().map(|x| x.exp()).collect::<Vec<_>>()));
        avg_member_nll.push(-w.weighted_mean(&lf));
        // d/dy exp(sum w log F_m) = F_bar * sum w f_m / F_m
        let log_f_bar = w.weighted_mean(&lc);
        let ratio: f64 = lf
            .iter()
            .zip(&lc)
            .zip(ws)
            .map(|((a, b), wm)| if *wm == 0.0 { 0.0 } else { wm * (a - b).exp() })
            .sum();
        log_linear.push((log_f_bar + ratio.ln()).exp());
    }

    let curves = members
        .iter()
        .map(|m| ContinuousCurve::new(grid.to_vec(), grid.iter().map(|&y| m.h(y)).collect()))
        .collect::<Result<Vec<_>>>()?;
    let transformation = pool_continuous(&curves, w, dist)?.density;

    let nll = |v: &[f64]| v.iter().map(|d| -d.ln()).collect::<Vec<f64>>();
    Ok(DensityCurves {
        grid: grid.to_vec(),
        members: member_dens,
        linear_nll: nll(&linear),
        log_linear_nll: nll(&log_linear),
        transformation_nll: nll(&transformation),
        linear,
        log_linear,
        transformation,
        avg_member_nll,
    })
}
