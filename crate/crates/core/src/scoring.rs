//! Proper scoring rules for discrete predictions.
//!
//! Scores are negatively oriented (lower is better). Zero predicted mass on
//! an observed event yields `+inf` for the log-score; no clamping happens here.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::panel::{DiscreteCdf, MemberPanel, Observation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScoreKind {
    Nll,
    Brier,
    Rps,
}

impl ScoreKind {
    pub fn name(self) -> &'static str {
        match self {
            ScoreKind::Nll => "nll",
            ScoreKind::Brier => "brier",
            ScoreKind::Rps => "rps",
        }
    }

    /// Rejects sample-space sizes the score is not defined for.
    pub fn check_classes(self, k: usize) -> Result<()> {
        match self {
            ScoreKind::Brier if k != 2 => Err(Error::ScoreKind(format!(
                "the Brier score needs exactly 2 classes, got {k}"
            ))),
            _ if k < 2 => Err(Error::ScoreKind(format!("{self} needs at least 2 classes"))),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for ScoreKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScoreKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nll" => Ok(ScoreKind::Nll),
            "brier" => Ok(ScoreKind::Brier),
            "rps" => Ok(ScoreKind::Rps),
            other => Err(Error::Parse(format!(
                "unknown score '{other}' (expected nll | brier | rps)"
            ))),
        }
    }
}

/// Probability mass `F(upper) - F(lower)` of an observed event.
pub fn event_mass(cdf: &DiscreteCdf, obs: &Observation) -> f64 {
    let (lo, hi) = obs.bounds();
    (cdf.at(hi) - cdf.at_or_zero(lo)).max(0.0)
}

/// Negative log-likelihood; interval-censored outcomes use the mass of
/// `(y_lower, y_upper]`.
pub fn nll(cdf: &DiscreteCdf, obs: &Observation) -> f64 {
    -event_mass(cdf, obs).ln()
}

/// `(y - p)^2` with `p` the predicted probability of the second class.
pub fn brier(p: f64, y: bool) -> f64 {
    let y = if y { 1.0 } else { 0.0 };
    (y - p) * (y - p)
}

/// Ranked probability score, averaged over the first `K - 1` thresholds.
pub fn rps(cdf: &DiscreteCdf, obs: &Observation) -> Result<f64> {
    let y = obs.exact().ok_or_else(|| {
        Error::UnsupportedObservation("the RPS is only defined for exact outcomes".into())
    })?;
    let k = cdf.len();
    let sum: f64 = cdf.values()[..k - 1]
        .iter()
        .enumerate()
        .map(|(l, &f)| {
            let ind = if y <= l { 1.0 } else { 0.0 };
            (f - ind) * (f - ind)
        })
        .sum();
    Ok(sum / (k - 1) as f64)
}

/// Score of one prediction.
pub fn score(kind: ScoreKind, cdf: &DiscreteCdf, obs: &Observation) -> Result<f64> {
    kind.check_classes(cdf.len())?;
    match kind {
        ScoreKind::Nll => Ok(nll(cdf, obs)),
        ScoreKind::Rps => rps(cdf, obs),
        ScoreKind::Brier => {
            let y = obs.exact().ok_or_else(|| {
                Error::UnsupportedObservation("the Brier score needs exact outcomes".into())
            })?;
            Ok(brier(1.0 - cdf.at(0), y == 1))
        }
    }
}

/// Empirical mean score over instances; `+inf` propagates.
pub fn mean_score(cdfs: &[DiscreteCdf], outcomes: &[Observation], kind: ScoreKind) -> Result<f64> {
    if cdfs.len() != outcomes.len() {
        return Err(Error::Shape(format!(
            "{} predictions for {} outcomes",
            cdfs.len(),
            outcomes.len()
        )));
    }
    if cdfs.is_empty() {
        return Err(Error::Shape("no instances to score".into()));
    }
    let mut total = 0.0;
    for (c, o) in cdfs.iter().zip(outcomes) {
        total += score(kind, c, o)?;
    }
    Ok(total / cdfs.len() as f64)
}

/// Mean score of every member of a panel.
pub fn member_mean_scores(panel: &MemberPanel, kind: ScoreKind) -> Result<Vec<f64>> {
    panel
        .cdfs
        .iter()
        .map(|row| mean_score(row, &panel.outcomes, kind))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::Rng;

    fn cdf(v: &[f64]) -> DiscreteCdf {
        DiscreteCdf::new(v.to_vec()).unwrap()
    }

    #[test]
    fn nll_examples() {
        let c = cdf(&[0.2, 0.7, 1.0]);
        // pdf (0.2, 0.5, 0.3), observed y_2 -> -ln 0.5
        assert_abs_diff_eq!(
            nll(&c, &Observation::Exact(1)),
            0.5f64.ln().abs(),
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            nll(&c, &Observation::Exact(1)),
            std::f64::consts::LN_2,
            epsilon = 1e-12
        );
        let obs = Observation::Interval {
            lower: Some(0),
            upper: 2,
        };
        assert_abs_diff_eq!(nll(&c, &obs), -(0.8f64.ln()), epsilon = 1e-15);
        assert_abs_diff_eq!(nll(&c, &obs), 0.223144, epsilon = 1e-6);
        assert_eq!(
            nll(&cdf(&[0.0, 1.0]), &Observation::Exact(0)),
            f64::INFINITY
        );
    }

    #[test]
    fn brier_examples() {
        assert_eq!(brier(0.5, true), 0.25);
        assert_eq!(brier(1.0, true), 0.0);
        assert_abs_diff_eq!(brier(0.2, false), 0.04, epsilon = 1e-15);
        let err = score(
            ScoreKind::Brier,
            &cdf(&[0.2, 0.7, 1.0]),
            &Observation::Exact(0),
        );
        assert!(matches!(err, Err(Error::ScoreKind(_))));
    }

    #[test]
    fn rps_examples() {
        let c = cdf(&[0.2, 0.7, 1.0]);
        assert_abs_diff_eq!(
            rps(&c, &Observation::Exact(0)).unwrap(),
            0.365,
            epsilon = 1e-15
        );
        assert_eq!(
            rps(&cdf(&[0.0, 0.0, 1.0]), &Observation::Exact(2)).unwrap(),
            0.0
        );
        let censored = Observation::Interval {
            lower: None,
            upper: 1,
        };
        assert!(matches!(
            rps(&c, &censored),
            Err(Error::UnsupportedObservation(_))
        ));
    }

    #[test]
    fn rps_equals_brier_for_two_classes() {
        let mut rng = crate::rng::seeded(3);
        for _ in 0..1000 {
            let p: f64 = rng.random();
            let y = rng.random_bool(0.5);
            let c = DiscreteCdf::new(vec![1.0 - p, 1.0]).unwrap();
            let r = rps(&c, &Observation::Exact(y as usize)).unwrap();
            assert!((r - brier(p, y)).abs() < 1e-12);
        }
    }

    #[test]
    fn rps_is_mean_of_cumulative_brier_scores() {
        let mut rng = crate::rng::seeded(4);
        for _ in 0..200 {
            let k = rng.random_range(2..9);
            let mut v: Vec<f64> = (0..k - 1).map(|_| rng.random()).collect();
            v.sort_by(f64::total_cmp);
            v.push(1.0);
            let c = DiscreteCdf::new(v.clone()).unwrap();
            let y = rng.random_range(0..k);
            // Brier on the event {Y <= y_l}, predicted with F(y_l)
            let via_brier: f64 =
                (0..k - 1).map(|l| brier(v[l], y <= l)).sum::<f64>() / (k - 1) as f64;
            assert!((rps(&c, &Observation::Exact(y)).unwrap() - via_brier).abs() < 1e-12);
        }
    }

    #[test]
    fn mean_score_examples() {
        let c = cdf(&[0.5, 1.0]);
        // brier scores 0.25 (y=1) and 0.25 (y=0)
        let m = mean_score(
            &[c.clone(), c.clone()],
            &[Observation::Exact(1), Observation::Exact(0)],
            ScoreKind::Brier,
        )
        .unwrap();
        assert_eq!(m, 0.25);
        let zero = cdf(&[0.0, 1.0]);
        let m = mean_score(
            &[c.clone(), zero],
            &[Observation::Exact(1), Observation::Exact(0)],
            ScoreKind::Nll,
        )
        .unwrap();
        assert_eq!(m, f64::INFINITY);
        let single = mean_score(
            std::slice::from_ref(&c),
            &[Observation::Exact(0)],
            ScoreKind::Nll,
        )
        .unwrap();
        assert_eq!(single, nll(&c, &Observation::Exact(0)));
    }

    #[test]
    fn mean_of_two_scores() {
        let a = cdf(&[0.2, 0.7, 1.0]);
        let b = cdf(&[0.1, 0.6, 1.0]);
        let oa = Observation::Exact(0);
        let ob = Observation::Exact(2);
        let sa = rps(&a, &oa).unwrap();
        let sb = rps(&b, &ob).unwrap();
        let m = mean_score(&[a, b], &[oa, ob], ScoreKind::Rps).unwrap();
        assert_abs_diff_eq!(m, (sa + sb) / 2.0, epsilon = 1e-15);
    }

    #[test]
    fn propriety_by_exact_expectation() {
        let mut rng = crate::rng::seeded(5);
        let truth = [0.2, 0.5, 0.3];
        let f_true = cdf(&[0.2, 0.7, 1.0]);
        let expected = |c: &DiscreteCdf, kind| -> f64 {
            (0..3)
                .map(|k| truth[k] * score(kind, c, &Observation::Exact(k)).unwrap())
                .sum()
        };
        for kind in [ScoreKind::Nll, ScoreKind::Rps] {
            let best = expected(&f_true, kind);
            for _ in 0..500 {
                let mut v = vec![rng.random::<f64>(), rng.random::<f64>()];
                v.sort_by(f64::total_cmp);
                v.push(1.0);
                let g = DiscreteCdf::new(v).unwrap();
                assert!(best <= expected(&g, kind), "{kind}");
            }
        }
    }

    #[test]
    fn parse_names() {
        for k in [ScoreKind::Nll, ScoreKind::Brier, ScoreKind::Rps] {
            assert_eq!(k.name().parse::<ScoreKind>().unwrap(), k);
        }
        assert!("crps".parse::<ScoreKind>().is_err());
    }
}
