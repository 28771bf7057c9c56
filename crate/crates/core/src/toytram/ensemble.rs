use rayon::prelude::*;
use serde::Serialize;

use crate::clamp_prob;
use crate::dist::TargetDistribution;
use crate::error::{Error, Result};
use crate::panel::{ContinuousCurve, DiscreteCdf, MemberPanel, Observation, OrderedSampleSpace};
use crate::pooling::SimplexWeights;
use crate::rng::sub_seed;

use super::model::{predict, ToyModelParams, ToyModelSpec};
use super::simulate::Dataset;
use super::train::{train_with_validation, TrainConfig, TrainTrace};

/// Trained members and their predictions on held-out data.
#[derive(Clone, Debug)]
pub struct MemberSet {
    pub spec: ToyModelSpec,
    pub params: Vec<ToyModelParams>,
    pub seeds: Vec<u64>,
    pub traces: Vec<TrainTrace>,
    /// Member predictions for the test instances.
    pub panel: MemberPanel,
}

/// Trains `m` members on the same split, member `j` seeded with
/// `sub_seed(seed, j)`.
pub fn make_members(
    train: &Dataset,
    valid: Option<&Dataset>,
    test: &Dataset,
    spec: &ToyModelSpec,
    cfg: &TrainConfig,
    m: usize,
    seed: u64,
) -> Result<MemberSet> {
    if m < 2 {
        return Err(Error::Domain(format!(
            "an ensemble needs at least 2 members, got {m}"
        )));
    }
    let seeds: Vec<u64> = (0..m as u64).map(|j| sub_seed(seed, j)).collect();
    make_members_with_seeds(train, valid, test, spec, cfg, &seeds)
}

/// As [`make_members`] with explicit member seeds.
pub fn make_members_with_seeds(
    train: &Dataset,
    valid: Option<&Dataset>,
    test: &Dataset,
    spec: &ToyModelSpec,
    cfg: &TrainConfig,
    seeds: &[u64],
) -> Result<MemberSet> {
    let fits: Vec<(ToyModelParams, TrainTrace)> = seeds
        .par_iter()
        .enumerate()
        .map(|(index, &s)| {
            let member_cfg = TrainConfig {
                seed: s,
                ..cfg.clone()
            };
            train_with_validation(train, valid, spec, &member_cfg).map_err(|e| Error::Member {
                index,
                source: Box::new(e),
            })
        })
        .collect::<Result<_>>()?;
    let (params, traces): (Vec<_>, Vec<_>) = fits.into_iter().unzip();
    let cdfs = params
        .iter()
        .map(|p| {
            test.x
                .iter()
                .map(|x| predict(spec, p, x))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let panel = MemberPanel::new(
        OrderedSampleSpace::indexed(spec.classes)?,
        (0..seeds.len())
            .map(|j| format!("member_{}", j + 1))
            .collect(),
        cdfs,
        test.y.iter().map(|&y| Observation::Exact(y)).collect(),
    )?;
    Ok(MemberSet {
        spec: *spec,
        params,
        seeds: seeds.to_vec(),
        traces,
        panel,
    })
}

/// Pointwise mean and spread of member transformation functions.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EpistemicBand {
    pub mean: Vec<f64>,
    pub sd: Vec<f64>,
    pub cdf_lower: Vec<f64>,
    pub cdf_mean: Vec<f64>,
    pub cdf_upper: Vec<f64>,
}

/// `F_Z(h_bar -+ 2 sd(h_m))` from member values `h[m][point]`; `h_bar` is the
/// weighted mean and `sd` the sample standard deviation over members.
pub fn epistemic_band(
    h: &[Vec<f64>],
    w: &SimplexWeights,
    dist: TargetDistribution,
) -> Result<EpistemicBand> {
    let m = h.len();
    if m < 2 {
        return Err(Error::UndefinedMetric(
            "an epistemic band needs at least 2 members".into(),
        ));
    }
    if w.len() != m {
        return Err(Error::Shape(format!("{m} members but {} weights", w.len())));
    }
    let len = h[0].len();
    if h.iter().any(|row| row.len() != len) {
        return Err(Error::Shape("member curves differ in length".into()));
    }
    if h.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::Input("non-finite transformation value".into()));
    }
    let mut band = EpistemicBand {
        mean: Vec::with_capacity(len),
        sd: Vec::with_capacity(len),
        cdf_lower: Vec::with_capacity(len),
        cdf_mean: Vec::with_capacity(len),
        cdf_upper: Vec::with_capacity(len),
    };
    for g in 0..len {
        let col: Vec<f64> = h.iter().map(|row| row[g]).collect();
        let mean = w.weighted_mean(&col);
        let plain = col.iter().sum::<f64>() / m as f64;
        let sd = (col.iter().map(|v| (v - plain).powi(2)).sum::<f64>() / (m - 1) as f64).sqrt();
        band.mean.push(mean);
        band.sd.push(sd);
        band.cdf_lower.push(dist.cdf_unchecked(mean - 2.0 * sd));
        band.cdf_mean.push(dist.cdf_unchecked(mean));
        band.cdf_upper.push(dist.cdf_unchecked(mean + 2.0 * sd));
    }
    Ok(band)
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "quantile level {alpha} outside (0, 1)"
        )))
    }
}

/// `h_bar^{-1}(F_Z^{-1}(alpha))` by linear interpolation; levels beyond the
/// curve map to the grid ends.
pub fn quantile_predict_curve(
    curve: &ContinuousCurve,
    dist: TargetDistribution,
    alpha: f64,
) -> Result<f64> {
    check_alpha(alpha)?;
    let z = dist.quantile_unchecked(alpha);
    let (g, h) = (curve.grid(), curve.h());
    if z <= h[0] {
        return Ok(g[0]);
    }
    if z >= h[h.len() - 1] {
        return Ok(g[g.len() - 1]);
    }
    let i = h.partition_point(|&v| v < z);
    let t = (z - h[i - 1]) / (h[i] - h[i - 1]);
    Ok(g[i - 1] + t * (g[i] - g[i - 1]))
}

/// Smallest class whose transformation value reaches `F_Z^{-1}(alpha)`; `h`
/// holds the first `K - 1` values, the last class is the fallback.
pub fn quantile_predict_discrete(h: &[f64], dist: TargetDistribution, alpha: f64) -> Result<usize> {
    check_alpha(alpha)?;
    let z = dist.quantile_unchecked(alpha);
    Ok(h.iter().position(|&v| v >= z).unwrap_or(h.len()))
}

/// One point of a structure check plot.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StructurePair {
    pub instance: usize,
    pub member: usize,
    pub member_z: f64,
    pub ensemble_z: f64,
}

/// Member and ensemble predictions at the observed outcome, both mapped
/// through `F_Z^{-1}`. For censored outcomes the upper bound is used.
pub fn structure_check_pairs(
    panel: &MemberPanel,
    ensemble: &[DiscreteCdf],
    dist: TargetDistribution,
) -> Result<Vec<StructurePair>> {
    if ensemble.len() != panel.n_instances() {
        return Err(Error::Shape(format!(
            "{} ensemble predictions for {} instances",
            ensemble.len(),
            panel.n_instances()
        )));
    }
    let mut out = Vec::with_capacity(panel.n_instances() * panel.n_members());
    for (i, (obs, e)) in panel.outcomes.iter().zip(ensemble).enumerate() {
        let (_, y) = obs.bounds();
        let ez = dist.quantile_unchecked(clamp_prob(e.at(y)));
        for (m, row) in panel.cdfs.iter().enumerate() {
            out.push(StructurePair {
                instance: i,
                member: m,
                member_z: dist.quantile_unchecked(clamp_prob(row[i].at(y))),
                ensemble_z: ez,
            });
        }
    }
    Ok(out)
}
