//! Seeded random panels for property checks and benchmarks.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::dist::TargetDistribution;
use crate::panel::{DiscreteCdf, MemberPanel, Observation, OrderedSampleSpace};
use crate::pooling::SimplexWeights;

#[derive(Clone, Copy, Debug)]
pub struct PanelShape {
    pub members: usize,
    pub classes: usize,
    pub instances: usize,
    /// Fraction of outcomes replaced by interval-censored observations.
    pub censored_fraction: f64,
}

/// A CDF with uniformly drawn, sorted interior values.
pub fn random_cdf<R: Rng + ?Sized>(rng: &mut R, k: usize) -> DiscreteCdf {
    let mut v: Vec<f64> = (0..k - 1).map(|_| rng.random::<f64>()).collect();
    v.sort_by(f64::total_cmp);
    v.push(1.0);
    DiscreteCdf::from_raw(v)
}

/// Weights drawn uniformly from the simplex.
pub fn random_weights<R: Rng + ?Sized>(rng: &mut R, m: usize) -> SimplexWeights {
    let e: Vec<f64> = (0..m).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    SimplexWeights::normalized(e).expect("exponential draws are positive")
}

/// A panel whose members are perturbed cumulative-link models around a
/// shared instance effect. Even-indexed members use the logistic link,
/// odd-indexed members alternate between normal and minimum extreme value,
/// so no single reference distribution matches all members.
pub fn random_panel<R: Rng + ?Sized>(rng: &mut R, shape: PanelShape) -> MemberPanel {
    let PanelShape {
        members,
        classes: k,
        instances: n,
        censored_fraction,
    } = shape;
    let links = [
        TargetDistribution::Logistic,
        TargetDistribution::StandardNormal,
        TargetDistribution::Logistic,
        TargetDistribution::MinExtremeValue,
    ];
    let intercepts: Vec<Vec<f64>> = (0..members)
        .map(|_| {
            let mut t: Vec<f64> = (0..k - 1)
                .map(|_| {
                    let z: f64 = StandardNormal.sample(rng);
                    2.0 * z
                })
                .collect();
            t.sort_by(f64::total_cmp);
            t
        })
        .collect();
    let mut cdfs = vec![Vec::with_capacity(n); members];
    let mut outcomes = Vec::with_capacity(n);
    for _ in 0..n {
        let eta: f64 = StandardNormal.sample(rng);
        for m in 0..members {
            let link = links[m % links.len()];
            let noise: f64 = StandardNormal.sample(rng);
            let shift = eta + 0.5 * noise;
            let mut v: Vec<f64> = intercepts[m]
                .iter()
                .map(|t| link.cdf_unchecked(t - shift))
                .collect();
            v.push(1.0);
            cdfs[m].push(DiscreteCdf::from_raw(v));
        }
        let y = rng.random_range(0..k);
        let obs = if rng.random::<f64>() < censored_fraction {
            let lower = if y == 0 || rng.random_bool(0.3) {
                None
            } else {
                Some(rng.random_range(0..y))
            };
            let upper = rng.random_range(y..k).max(lower.map_or(0, |l| l + 1));
            Observation::Interval { lower, upper }
        } else {
            Observation::Exact(y)
        };
        outcomes.push(obs);
    }
    MemberPanel::new(
        OrderedSampleSpace::indexed(k).expect("k >= 2"),
        (0..members).map(|m| format!("member_{m}")).collect(),
        cdfs,
        outcomes,
    )
    .expect("generated panel is valid")
}

/// A panel whose members are independent uniform random CDFs.
pub fn random_uniform_panel<R: Rng + ?Sized>(rng: &mut R, shape: PanelShape) -> MemberPanel {
    let k = shape.classes;
    let cdfs = (0..shape.members)
        .map(|_| (0..shape.instances).map(|_| random_cdf(rng, k)).collect())
        .collect();
    let outcomes = (0..shape.instances)
        .map(|_| Observation::Exact(rng.random_range(0..k)))
        .collect();
    MemberPanel::new(
        OrderedSampleSpace::indexed(k).expect("k >= 2"),
        (0..shape.members).map(|m| format!("member_{m}")).collect(),
        cdfs,
        outcomes,
    )
    .expect("generated panel is valid")
}
