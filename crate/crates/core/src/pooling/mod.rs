//! Ensemble operators.
//!
//! Four ways to combine member CDFs `F_1, ..., F_M` with simplex weights `w`:
//!
//! * linear: `sum_m w_m F_m`
//! * log-linear on the CDF scale: `exp(sum_m w_m log F_m)`
//! * log-linear on the density scale: `c * exp(sum_m w_m log f_m)`, with
//!   normalizing constant `c >= 1`
//! * transformation: `F_Z(sum_m w_m F_Z^{-1}(F_m))` for a reference
//!   distribution `F_Z`
//!
//! All of them are instances of quasi-arithmetic pooling, exposed directly as
//! [`pool_quasi_arithmetic`]. Zero-weight members never influence the result,
//! and a weight vector concentrated on one member returns that member exactly.

mod coefficients;
mod continuous;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::clamp_prob;
use crate::dist::{logistic_cdf, logit, TargetDistribution};
use crate::error::{Error, Result};
use crate::panel::{pdf_from_cdf, DiscreteCdf, MemberPanel};

pub use coefficients::{average_coefficients, CoefficientBundle};
pub use continuous::{
    ensemble_density_curves, pool_continuous, ContinuousPool, DensityCurves, LocationScale,
};

/// Tolerance on the weight sum.
pub const WEIGHT_SUM_TOL: f64 = 1e-12;

/// `M` non-negative weights summing to one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct SimplexWeights(Vec<f64>);

impl SimplexWeights {
    pub fn new(w: Vec<f64>) -> Result<Self> {
        if w.is_empty() {
            return Err(Error::Domain(
                "weights must contain at least one entry".into(),
            ));
        }
        if let Some(bad) = w.iter().find(|x| !x.is_finite() || **x < 0.0) {
            return Err(Error::Domain(format!(
                "weight {bad} is not a non-negative number"
            )));
        }
        let s = compensated_sum(&w);
        if (s - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::Domain(format!("weights sum to {s}, not 1")));
        }
        Ok(Self(w))
    }

    /// `1/M` for every member.
    pub fn equal(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::Domain(
                "equal weights need at least one member".into(),
            ));
        }
        Self::new(vec![1.0 / m as f64; m])
    }

    /// All weight on member `j`.
    pub fn vertex(m: usize, j: usize) -> Result<Self> {
        if j >= m {
            return Err(Error::Domain(format!(
                "vertex {j} out of range for {m} members"
            )));
        }
        let mut w = vec![0.0; m];
        w[j] = 1.0;
        Self::new(w)
    }

    /// Divides by the sum; the sum must be positive.
    pub fn normalized(w: Vec<f64>) -> Result<Self> {
        let s = compensated_sum(&w);
        if !(s > 0.0) || w.iter().any(|x| *x < 0.0 || !x.is_finite()) {
            return Err(Error::Domain("cannot normalize weights".into()));
        }
        Self::new(w.into_iter().map(|x| x / s).collect())
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `sum_m w_m x_m`.
    pub fn weighted_mean(&self, xs: &[f64]) -> f64 {
        self.0
            .iter()
            .zip(xs)
            .map(|(w, x)| if *w == 0.0 { 0.0 } else { w * x })
            .sum()
    }

    /// Index of the single member carrying all weight, if any.
    fn sole_member(&self) -> Option<usize> {
        let mut active = self.0.iter().enumerate().filter(|(_, w)| **w > 0.0);
        match (active.next(), active.next()) {
            (Some((j, _)), None) => Some(j),
            _ => None,
        }
    }
}

impl TryFrom<Vec<f64>> for SimplexWeights {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<SimplexWeights> for Vec<f64> {
    fn from(w: SimplexWeights) -> Vec<f64> {
        w.0
    }
}

/// Neumaier summation.
pub fn compensated_sum(xs: &[f64]) -> f64 {
    let mut sum = 0.0f64;
    let mut c = 0.0f64;
    for &x in xs {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            c += (sum - t) + x;
        } else {
            c += (x - t) + sum;
        }
        sum = t;
    }
    sum + c
}

/// Which ensemble operator to apply.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PoolKind {
    Linear,
    LogLinearCdf,
    LogLinearPdf,
    Transformation(TargetDistribution),
}

impl PoolKind {
    pub fn name(&self) -> String {
        match self {
            PoolKind::Linear => "linear".into(),
            PoolKind::LogLinearCdf => "log-cdf".into(),
            PoolKind::LogLinearPdf => "log-pdf".into(),
            PoolKind::Transformation(d) => format!("trafo:{d}"),
        }
    }
}

impl fmt::Display for PoolKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for PoolKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(PoolKind::Linear),
            "log-cdf" => Ok(PoolKind::LogLinearCdf),
            "log-pdf" => Ok(PoolKind::LogLinearPdf),
            other => match other.strip_prefix("trafo:") {
                Some(d) => Ok(PoolKind::Transformation(d.parse()?)),
                None => Err(Error::Parse(format!(
                    "unknown pool '{other}' (expected linear | log-cdf | log-pdf | trafo:<dist>)"
                ))),
            },
        }
    }
}

impl Serialize for PoolKind {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.name())
    }
}

impl<'de> Deserialize<'de> for PoolKind {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn check_shapes(cdfs: &[&DiscreteCdf], w: &SimplexWeights) -> Result<usize> {
    if cdfs.is_empty() {
        return Err(Error::Shape("no members to pool".into()));
    }
    if cdfs.len() != w.len() {
        return Err(Error::Shape(format!(
            "{} members but {} weights",
            cdfs.len(),
            w.len()
        )));
    }
    let k = cdfs[0].len();
    if let Some((m, c)) = cdfs.iter().enumerate().find(|(_, c)| c.len() != k) {
        return Err(Error::Shape(format!(
            "member {m} has {} classes, member 0 has {k}",
            c.len()
        )));
    }
    Ok(k)
}

/// Tidies a pooled CDF: entries clipped into `[0, 1]`, running maximum to
/// remove rounding inversions, last entry exactly 1.
fn finish_cdf(mut v: Vec<f64>) -> DiscreteCdf {
    let mut prev = 0.0f64;
    for x in v.iter_mut() {
        *x = x.clamp(prev, 1.0);
        prev = *x;
    }
    if let Some(last) = v.last_mut() {
        *last = 1.0;
    }
    DiscreteCdf::from_raw(v)
}

/// Point-wise weighted average of the member CDFs.
pub fn pool_linear(cdfs: &[&DiscreteCdf], w: &SimplexWeights) -> Result<DiscreteCdf> {
    let k = check_shapes(cdfs, w)?;
    if let Some(j) = w.sole_member() {
        return Ok(cdfs[j].clone());
    }
    let out = (0..k)
        .map(|c| {
            cdfs.iter()
                .zip(w.as_slice())
                .filter(|(_, &wm)| wm > 0.0)
                .map(|(f, wm)| wm * f.at(c))
                .sum()
        })
        .collect();
    Ok(finish_cdf(out))
}

/// Point-wise weighted geometric mean of the member CDFs.
pub fn pool_loglinear_cdf(cdfs: &[&DiscreteCdf], w: &SimplexWeights) -> Result<DiscreteCdf> {
    let k = check_shapes(cdfs, w)?;
    if let Some(j) = w.sole_member() {
        return Ok(cdfs[j].clone());
    }
    let out = (0..k)
        .map(|c| weighted_geometric_mean(cdfs.iter().map(|f| f.at(c)), w))
        .collect();
    Ok(finish_cdf(out))
}

fn weighted_geometric_mean(values: impl Iterator<Item = f64>, w: &SimplexWeights) -> f64 {
    let mut acc = 0.0;
    for (v, &wm) in values.zip(w.as_slice()) {
        if wm == 0.0 {
            continue;
        }
        if v <= 0.0 {
            return 0.0;
        }
        acc += wm * v.ln();
    }
    acc.exp()
}

/// Result of log-linear density pooling.
#[derive(Clone, Debug, PartialEq)]
pub struct PdfPool {
    /// Normalized pooled class probabilities.
    pub density: Vec<f64>,
    /// Normalizing constant `c = 1 / sum_k exp(sum_m w_m log f_m(y_k))`.
    pub normalizer: f64,
}

/// Normalized weighted geometric mean of member class probabilities.
pub fn pool_loglinear_pdf(pdfs: &[&[f64]], w: &SimplexWeights) -> Result<PdfPool> {
    if pdfs.is_empty() || pdfs.len() != w.len() {
        return Err(Error::Shape(format!(
            "{} members but {} weights",
            pdfs.len(),
            w.len()
        )));
    }
    let k = pdfs[0].len();
    if pdfs.iter().any(|p| p.len() != k) {
        return Err(Error::Shape("member densities differ in length".into()));
    }
    if let Some(j) = w.sole_member() {
        return Ok(PdfPool {
            density: pdfs[j].to_vec(),
            normalizer: 1.0,
        });
    }
    let g: Vec<f64> = (0..k)
        .map(|c| weighted_geometric_mean(pdfs.iter().map(|f| f[c]), w))
        .collect();
    let total: f64 = g.iter().sum();
    if !(total > 0.0) {
        return Err(Error::DegeneratePool(
            "every class has zero density under some member".into(),
        ));
    }
    Ok(PdfPool {
        density: g.iter().map(|x| x / total).collect(),
        normalizer: 1.0 / total,
    })
}

/// Transformation ensemble `F_Z(sum_m w_m F_Z^{-1}(F_m))`.
///
/// Interior probabilities are clamped to `[1e-12, 1 - 1e-12]` before the
/// quantile transform; the last class stays exactly 1.
pub fn pool_transformation(
    cdfs: &[&DiscreteCdf],
    w: &SimplexWeights,
    dist: TargetDistribution,
) -> Result<DiscreteCdf> {
    let k = check_shapes(cdfs, w)?;
    if let Some(j) = w.sole_member() {
        return Ok(cdfs[j].clone());
    }
    let mut out: Vec<f64> = (0..k - 1)
        .map(|c| {
            let z: f64 = cdfs
                .iter()
                .zip(w.as_slice())
                .filter(|(_, &wm)| wm > 0.0)
                .map(|(f, wm)| wm * dist.quantile_unchecked(clamp_prob(f.at(c))))
                .sum();
            dist.cdf_unchecked(z)
        })
        .collect();
    out.push(1.0);
    Ok(finish_cdf(out))
}

/// Dispatch on [`PoolKind`].
pub fn pool(kind: PoolKind, cdfs: &[&DiscreteCdf], w: &SimplexWeights) -> Result<DiscreteCdf> {
    match kind {
        PoolKind::Linear => pool_linear(cdfs, w),
        PoolKind::LogLinearCdf => pool_loglinear_cdf(cdfs, w),
        PoolKind::Transformation(d) => pool_transformation(cdfs, w, d),
        PoolKind::LogLinearPdf => {
            let k = check_shapes(cdfs, w)?;
            if let Some(j) = w.sole_member() {
                return Ok(cdfs[j].clone());
            }
            let pdfs: Vec<Vec<f64>> = cdfs.iter().map(|c| pdf_from_cdf(c)).collect();
            let refs: Vec<&[f64]> = pdfs.iter().map(Vec::as_slice).collect();
            let pooled = pool_loglinear_pdf(&refs, w)?;
            let mut acc = 0.0;
            let cum = pooled
                .density
                .iter()
                .take(k)
                .map(|d| {
                    acc += d;
                    acc
                })
                .collect();
            Ok(finish_cdf(cum))
        }
    }
}

/// Pools every instance of a panel.
pub fn pool_panel(
    panel: &MemberPanel,
    kind: PoolKind,
    w: &SimplexWeights,
) -> Result<Vec<DiscreteCdf>> {
    if w.len() != panel.n_members() {
        return Err(Error::Shape(format!(
            "{} weights for {} members",
            w.len(),
            panel.n_members()
        )));
    }
    (0..panel.n_instances())
        .map(|i| pool(kind, &panel.instance(i), w))
        .collect()
}

/// A monotone transform `g` with inverse, used by quasi-arithmetic pooling.
pub trait MonotoneTransform {
    fn forward(&self, x: f64) -> Result<f64>;
    fn inverse(&self, y: f64) -> Result<f64>;
}

pub struct Identity;
/// Natural logarithm on `(0, inf)`.
pub struct Log;
/// Log-odds on `(0, 1)`.
pub struct Logit;

impl MonotoneTransform for Identity {
    fn forward(&self, x: f64) -> Result<f64> {
        Ok(x)
    }
    fn inverse(&self, y: f64) -> Result<f64> {
        Ok(y)
    }
}

impl MonotoneTransform for Log {
    fn forward(&self, x: f64) -> Result<f64> {
        if x > 0.0 {
            Ok(x.ln())
        } else {
            Err(Error::Domain(format!(
                "log requires a positive value, got {x}"
            )))
        }
    }
    fn inverse(&self, y: f64) -> Result<f64> {
        Ok(y.exp())
    }
}

impl MonotoneTransform for Logit {
    fn forward(&self, x: f64) -> Result<f64> {
        if x > 0.0 && x < 1.0 {
            Ok(logit(x))
        } else {
            Err(Error::Domain(format!(
                "logit requires a value in (0, 1), got {x}"
            )))
        }
    }
    fn inverse(&self, y: f64) -> Result<f64> {
        Ok(logistic_cdf(y))
    }
}

impl MonotoneTransform for TargetDistribution {
    fn forward(&self, x: f64) -> Result<f64> {
        self.quantile(x)
    }
    fn inverse(&self, y: f64) -> Result<f64> {
        self.cdf(y)
    }
}

/// Generalized mean `g^{-1}(sum_m w_m g(v_m))`.
pub fn pool_quasi_arithmetic<G: MonotoneTransform + ?Sized>(
    values: &[f64],
    w: &SimplexWeights,
    g: &G,
) -> Result<f64> {
    if values.len() != w.len() {
        return Err(Error::Shape(format!(
            "{} values but {} weights",
            values.len(),
            w.len()
        )));
    }
    let mut acc = 0.0;
    for (&v, &wm) in values.iter().zip(w.as_slice()) {
        let t = g.forward(v)?;
        if wm > 0.0 {
            acc += wm * t;
        }
    }
    g.inverse(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::Rng;

    fn cdf(v: &[f64]) -> DiscreteCdf {
        DiscreteCdf::new(v.to_vec()).unwrap()
    }

    fn eq(m: usize) -> SimplexWeights {
        SimplexWeights::equal(m).unwrap()
    }

    fn random_cdf(rng: &mut impl Rng, k: usize) -> DiscreteCdf {
        let mut v: Vec<f64> = (0..k - 1).map(|_| rng.random()).collect();
        v.sort_by(f64::total_cmp);
        v.push(1.0);
        DiscreteCdf::new(v).unwrap()
    }

    #[test]
    fn weights_validation() {
        assert!(SimplexWeights::new(vec![0.5, 0.6]).is_err());
        assert!(SimplexWeights::new(vec![1.5, -0.5]).is_err());
        assert!(SimplexWeights::new(vec![]).is_err());
        assert!(SimplexWeights::equal(0).is_err());
        assert_eq!(SimplexWeights::equal(5).unwrap().as_slice(), &[0.2; 5]);
        assert_eq!(SimplexWeights::equal(1).unwrap().as_slice(), &[1.0]);
        let w3 = SimplexWeights::equal(3).unwrap();
        assert_eq!(compensated_sum(w3.as_slice()), 1.0);
    }

    #[test]
    fn pool_kind_names() {
        for s in [
            "linear",
            "log-cdf",
            "log-pdf",
            "trafo:logistic",
            "trafo:normal",
            "trafo:mev",
        ] {
            assert_eq!(s.parse::<PoolKind>().unwrap().name(), s);
        }
        assert!("trafo:cauchy".parse::<PoolKind>().is_err());
        assert!("mean".parse::<PoolKind>().is_err());
    }

    #[test]
    fn linear_examples() {
        let a = cdf(&[0.2, 0.7, 1.0]);
        let p = pool_linear(&[&a, &a, &a], &eq(3)).unwrap();
        for (x, y) in p.values().iter().zip(a.values()) {
            assert_abs_diff_eq!(x, y, epsilon = 1e-15);
        }
        let p = pool_linear(&[&cdf(&[0.2, 1.0]), &cdf(&[0.4, 1.0])], &eq(2)).unwrap();
        assert_abs_diff_eq!(p.at(0), 0.3, epsilon = 1e-15);
    }

    #[test]
    fn linear_matches_per_class_mean() {
        let mut rng = crate::rng::seeded(1);
        for _ in 0..50 {
            let members: Vec<DiscreteCdf> = (0..3).map(|_| random_cdf(&mut rng, 5)).collect();
            let refs: Vec<&DiscreteCdf> = members.iter().collect();
            let raw: Vec<f64> = (0..3).map(|_| rng.random::<f64>() + 0.01).collect();
            let w = SimplexWeights::normalized(raw).unwrap();
            let p = pool_linear(&refs, &w).unwrap();
            for k in 0..4 {
                let mut brute = 0.0;
                for m in 0..3 {
                    brute += w.as_slice()[m] * members[m].values()[k];
                }
                assert_abs_diff_eq!(p.at(k), brute, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn shape_mismatch() {
        let a = cdf(&[0.2, 1.0]);
        let b = cdf(&[0.2, 0.5, 1.0]);
        for kind in ["linear", "log-cdf", "log-pdf", "trafo:logistic"] {
            let kind: PoolKind = kind.parse().unwrap();
            assert!(matches!(
                pool(kind, &[&a, &b], &eq(2)),
                Err(Error::Shape(_))
            ));
            assert!(matches!(pool(kind, &[&a], &eq(2)), Err(Error::Shape(_))));
        }
    }

    #[test]
    fn loglinear_cdf_examples() {
        let p = pool_loglinear_cdf(&[&cdf(&[0.2, 1.0]), &cdf(&[0.8, 1.0])], &eq(2)).unwrap();
        assert_abs_diff_eq!(p.at(0), 0.4, epsilon = 1e-15);
        assert_eq!(p.at(1), 1.0);
        let z = pool_loglinear_cdf(&[&cdf(&[0.0, 1.0]), &cdf(&[0.8, 1.0])], &eq(2)).unwrap();
        assert_eq!(z.at(0), 0.0);
        // a zero-weight member with zero mass is ignored
        let w = SimplexWeights::new(vec![0.0, 1.0]).unwrap();
        let z = pool_loglinear_cdf(&[&cdf(&[0.0, 1.0]), &cdf(&[0.8, 1.0])], &w).unwrap();
        assert_eq!(z.at(0), 0.8);
    }

    #[test]
    fn loglinear_pdf_examples() {
        let a = [0.5, 0.5];
        let r = pool_loglinear_pdf(&[&a, &a], &eq(2)).unwrap();
        assert_abs_diff_eq!(r.density[0], 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(r.normalizer, 1.0, epsilon = 1e-15);

        let r = pool_loglinear_pdf(&[&[0.8, 0.2], &[0.2, 0.8]], &eq(2)).unwrap();
        assert_abs_diff_eq!(r.density[0], 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(r.density[1], 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(r.normalizer, 1.25, epsilon = 1e-14);

        let err = pool_loglinear_pdf(&[&[1.0, 0.0], &[0.0, 1.0]], &eq(2));
        assert!(matches!(err, Err(Error::DegeneratePool(_))));
    }

    #[test]
    fn transformation_examples() {
        let d = TargetDistribution::Logistic;
        let p = pool_transformation(&[&cdf(&[0.2, 1.0]), &cdf(&[0.8, 1.0])], &eq(2), d).unwrap();
        assert_abs_diff_eq!(p.at(0), 0.5, epsilon = 1e-15);
        let p = pool_transformation(&[&cdf(&[0.2, 1.0]), &cdf(&[0.4, 1.0])], &eq(2), d).unwrap();
        // expit((logit 0.2 + logit 0.4) / 2)
        let hand = {
            let z = ((0.25f64).ln() + (0.4f64 / 0.6).ln()) / 2.0;
            1.0 / (1.0 + (-z).exp())
        };
        assert_abs_diff_eq!(p.at(0), hand, epsilon = 1e-15);
        assert_abs_diff_eq!(p.at(0), 0.289898, epsilon = 1e-6);
    }

    #[test]
    fn identical_members_are_fixed_points() {
        let mut rng = crate::rng::seeded(2);
        let a = random_cdf(&mut rng, 6);
        for kind in [
            "linear",
            "log-cdf",
            "log-pdf",
            "trafo:logistic",
            "trafo:normal",
            "trafo:mev",
        ] {
            let kind: PoolKind = kind.parse().unwrap();
            let p = pool(kind, &[&a, &a, &a], &eq(3)).unwrap();
            for (x, y) in p.values().iter().zip(a.values()) {
                assert!((x - y).abs() < 1e-12, "{kind}");
            }
        }
    }

    #[test]
    fn vertex_weights_return_member_exactly() {
        let mut rng = crate::rng::seeded(3);
        let members: Vec<DiscreteCdf> = (0..4).map(|_| random_cdf(&mut rng, 5)).collect();
        let refs: Vec<&DiscreteCdf> = members.iter().collect();
        let w = SimplexWeights::vertex(4, 0).unwrap();
        for kind in [
            "linear",
            "log-cdf",
            "log-pdf",
            "trafo:logistic",
            "trafo:normal",
            "trafo:mev",
        ] {
            let kind: PoolKind = kind.parse().unwrap();
            assert_eq!(pool(kind, &refs, &w).unwrap(), members[0], "{kind}");
        }
    }

    #[test]
    fn quasi_arithmetic() {
        let w = eq(2);
        assert_abs_diff_eq!(
            pool_quasi_arithmetic(&[0.2, 0.4], &w, &Identity).unwrap(),
            0.3,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            pool_quasi_arithmetic(&[0.2, 0.8], &w, &Log).unwrap(),
            0.4,
            epsilon = 1e-15
        );
        assert!(matches!(
            pool_quasi_arithmetic(&[0.0, 0.8], &w, &Log),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            pool_quasi_arithmetic(&[1.0, 0.8], &w, &Logit),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn logit_pooling_matches_transformation_pool() {
        let mut rng = crate::rng::seeded(4);
        for _ in 0..100 {
            let members: Vec<DiscreteCdf> = (0..3).map(|_| random_cdf(&mut rng, 4)).collect();
            let refs: Vec<&DiscreteCdf> = members.iter().collect();
            let w =
                SimplexWeights::normalized((0..3).map(|_| rng.random::<f64>() + 0.01).collect())
                    .unwrap();
            let t = pool_transformation(&refs, &w, TargetDistribution::Logistic).unwrap();
            for k in 0..3 {
                let vals: Vec<f64> = members.iter().map(|m| clamp_prob(m.at(k))).collect();
                let qa = pool_quasi_arithmetic(&vals, &w, &Logit).unwrap();
                assert!((qa - t.at(k)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn weights_serde() {
        let w: SimplexWeights = serde_json::from_str("[0.25, 0.75]").unwrap();
        assert_eq!(w.as_slice(), &[0.25, 0.75]);
        assert!(serde_json::from_str::<SimplexWeights>("[0.5, 0.75]").is_err());
        let k: PoolKind = serde_json::from_str("\"trafo:normal\"").unwrap();
        assert_eq!(
            k,
            PoolKind::Transformation(TargetDistribution::StandardNormal)
        );
    }
}
