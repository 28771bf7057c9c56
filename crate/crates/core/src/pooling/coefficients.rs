use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::SimplexWeights;

/// Parameters of a simple-intercept / linear-shift model
/// `h(y_k | x) = intercepts[k] - x' shifts`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoefficientBundle {
    /// Non-decreasing intercepts for the first `K - 1` classes.
    pub intercepts: Vec<f64>,
    pub shifts: Vec<f64>,
}

/// Element-wise weighted mean of member parameters.
///
/// Members sharing `F_Z` pool to the model with these parameters under the
/// transformation ensemble, since `h` is linear in them.
pub fn average_coefficients(
    bundles: &[CoefficientBundle],
    w: &SimplexWeights,
) -> Result<CoefficientBundle> {
    let first = bundles
        .first()
        .ok_or_else(|| Error::Shape("no parameter bundles".into()))?;
    if bundles.len() != w.len() {
        return Err(Error::Shape(format!(
            "{} bundles but {} weights",
            bundles.len(),
            w.len()
        )));
    }
    let (ni, ns) = (first.intercepts.len(), first.shifts.len());
    for (m, b) in bundles.iter().enumerate() {
        if b.intercepts.len() != ni || b.shifts.len() != ns {
            return Err(Error::Shape(format!(
                "bundle {m} has mismatched dimensions"
            )));
        }
        if b.intercepts.windows(2).any(|p| p[1] < p[0]) {
            return Err(Error::Domain(format!(
                "bundle {m} has decreasing intercepts"
            )));
        }
    }
    let avg = |get: &dyn Fn(&CoefficientBundle) -> &[f64], len: usize| -> Vec<f64> {
        (0..len)
            .map(|j| w.weighted_mean(&bundles.iter().map(|b| get(b)[j]).collect::<Vec<_>>()))
            .collect()
    };
    Ok(CoefficientBundle {
        intercepts: avg(&|b| &b.intercepts, ni),
        shifts: avg(&|b| &b.shifts, ns),
    })
}
