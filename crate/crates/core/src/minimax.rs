//! Regret of pooled predictions against their members, with brute-force
//! checks that the logit and linear pools minimize the worst case.

use rayon::prelude::*;
use serde::Serialize;

use crate::dist::{logit, TargetDistribution};
use crate::error::{Error, Result};
use crate::panel::{pdf_from_cdf, DiscreteCdf, Observation};
use crate::pooling::{pool_linear, pool_transformation, SimplexWeights};
use crate::scoring::{score, ScoreKind};

/// Outcome-wise regret of a pooled prediction against the weighted member
/// average.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegretProfile {
    /// `None` where the regret is `inf - inf`.
    pub regrets: Vec<Option<f64>>,
    pub max_regret: f64,
    pub argmax: usize,
    /// Set when at least one cell was undefined and left out of the max.
    pub undefined_cells: bool,
}

pub fn regret_profile(
    pool: &DiscreteCdf,
    members: &[&DiscreteCdf],
    w: &SimplexWeights,
    kind: ScoreKind,
) -> Result<RegretProfile> {
    if members.len() != w.len() || members.is_empty() {
        return Err(Error::Shape(format!(
            "{} members but {} weights",
            members.len(),
            w.len()
        )));
    }
    let k = pool.len();
    if members.iter().any(|m| m.len() != k) {
        return Err(Error::Shape(
            "pool and members differ in class count".into(),
        ));
    }
    let mut regrets = Vec::with_capacity(k);
    for y in 0..k {
        let obs = Observation::Exact(y);
        let own = score(kind, pool, &obs)?;
        let mut avg = 0.0;
        for (m, &wm) in members.iter().zip(w.as_slice()) {
            if wm > 0.0 {
                avg += wm * score(kind, m, &obs)?;
            }
        }
        let r = own - avg;
        regrets.push(if r.is_nan() { None } else { Some(r) });
    }
    let mut argmax = 0;
    let mut max_regret = f64::NEG_INFINITY;
    for (y, r) in regrets.iter().enumerate() {
        if let Some(r) = *r {
            if r > max_regret {
                max_regret = r;
                argmax = y;
            }
        }
    }
    Ok(RegretProfile {
        undefined_cells: regrets.iter().any(Option::is_none),
        regrets,
        max_regret,
        argmax,
    })
}

/// `G(p) = int_0^p F_Z^{-1}(u) du`, normalized so that `G(0) = 0`.
pub fn integrated_quantile(dist: TargetDistribution, p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!("probability {p} outside [0, 1]")));
    }
    if p == 0.0 {
        return Ok(0.0);
    }
    match dist {
        TargetDistribution::Logistic => {
            let xlogx = |x: f64| if x == 0.0 { 0.0 } else { x * x.ln() };
            Ok(xlogx(p) + xlogx(1.0 - p))
        }
        _ => {
            // substitute u = F_Z(z): int_{-inf}^{Q(p)} z f(z) dz
            let (lower, top) = match dist {
                TargetDistribution::StandardNormal => (-40.0, 40.0),
                _ => (-40.0, 5.0),
            };
            let upper = if p < 1.0 {
                dist.quantile_unchecked(p).min(top)
            } else {
                top
            };
            let f = |z: f64| z * dist.density_unchecked(z);
            Ok(adaptive_simpson(&f, lower, upper, 1e-13))
        }
    }
}

fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    // start from a fixed partition so narrow peaks are not missed
    let pieces = 64;
    let h = (b - a) / pieces as f64;
    (0..pieces)
        .map(|i| {
            let (lo, hi) = (a + i as f64 * h, a + (i + 1) as f64 * h);
            let (flo, fhi, fmid) = (f(lo), f(hi), f(0.5 * (lo + hi)));
            let whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
            simpson_step(f, lo, hi, flo, fmid, fhi, whole, tol / pieces as f64, 40)
        })
        .sum()
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
}

fn binary_cdf(p_event: f64) -> DiscreteCdf {
    DiscreteCdf::from_raw(vec![1.0 - p_event, 1.0])
}

// max over y of NLL(p, y) - sum_m w_m NLL(p_m, y), binary case
fn binary_max_regret(p: f64, avg0: f64, avg1: f64) -> f64 {
    let r1 = -p.ln() - avg1;
    let r0 = -(1.0 - p).ln() - avg0;
    r0.max(r1)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BinaryMinimaxCheck {
    pub scan_argmin: f64,
    pub scan_min: f64,
    /// Transformation (logistic) pool of the member event probabilities.
    pub pool_value: f64,
    pub max_regret: f64,
    pub pass: bool,
}

/// Grid scan of the binary NLL regret over `p in {rho, 2 rho, ..., 1 - rho}`.
///
/// `members` are event probabilities `P(Y = 1)`.
pub fn verify_minimax_binary(
    members: &[f64],
    w: &SimplexWeights,
    rho: f64,
) -> Result<BinaryMinimaxCheck> {
    if members.is_empty() || members.len() != w.len() {
        return Err(Error::Shape(format!(
            "{} members but {} weights",
            members.len(),
            w.len()
        )));
    }
    if members.iter().any(|p| !(0.0..=1.0).contains(p)) {
        return Err(Error::Domain(
            "member probabilities must lie in [0, 1]".into(),
        ));
    }
    if !(rho > 0.0 && rho <= 1e-3) {
        return Err(Error::Domain(format!(
            "resolution {rho} must lie in (0, 1e-3]"
        )));
    }
    let cdfs: Vec<DiscreteCdf> = members.iter().map(|&p| binary_cdf(p)).collect();
    let refs: Vec<&DiscreteCdf> = cdfs.iter().collect();
    let pooled = pool_transformation(&refs, w, TargetDistribution::Logistic)?;
    let pool_value = 1.0 - pooled.at(0);

    let weighted = |f: &dyn Fn(f64) -> f64| -> f64 {
        members
            .iter()
            .zip(w.as_slice())
            .filter(|(_, &wm)| wm > 0.0)
            .map(|(&p, &wm)| wm * f(p))
            .sum()
    };
    let avg1 = weighted(&|p| -p.ln());
    let avg0 = weighted(&|p| -(1.0 - p).ln());

    let n = (1.0 / rho).round() as usize;
    let (scan_min, best) = (1..n)
        .into_par_iter()
        .map(|i| (binary_max_regret(i as f64 * rho, avg0, avg1), i))
        .filter(|(v, _)| !v.is_nan())
        .reduce(
            || (f64::INFINITY, usize::MAX),
            |a, b| {
                if b.0 < a.0 || (b.0 == a.0 && b.1 < a.1) {
                    b
                } else {
                    a
                }
            },
        );
    if best == usize::MAX {
        return Err(Error::Optimization(
            "every scan candidate has undefined regret".into(),
        ));
    }
    let scan_argmin = best as f64 * rho;
    let max_regret = binary_max_regret(pool_value, avg0, avg1);
    let pass = max_regret <= scan_min + 1e-9 && (scan_argmin - pool_value).abs() <= rho + 1e-12;
    Ok(BinaryMinimaxCheck {
        scan_argmin,
        scan_min,
        pool_value,
        max_regret,
        pass,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RpsMinimaxCheck {
    /// Best grid candidate `(F(y_1), F(y_2))`.
    pub scan_argmin: (f64, f64),
    pub scan_min: f64,
    /// Linear pool CDF.
    pub pool_value: Vec<f64>,
    pub max_regret: f64,
    pub pass: bool,
}

/// Exhaustive check that the linear pool minimizes the maximal RPS regret
/// over all three-class CDFs on a grid with the given step.
pub fn verify_minimax_rps(
    members: &[&DiscreteCdf],
    w: &SimplexWeights,
    step: f64,
) -> Result<RpsMinimaxCheck> {
    if members.is_empty() || members.len() != w.len() {
        return Err(Error::Shape(format!(
            "{} members but {} weights",
            members.len(),
            w.len()
        )));
    }
    if members.iter().any(|m| m.len() != 3) {
        return Err(Error::Shape("the RPS minimax check needs K = 3".into()));
    }
    if !(step > 0.0 && step <= 0.01) {
        return Err(Error::Domain(format!(
            "grid step {step} must lie in (0, 0.01]"
        )));
    }
    // weighted member RPS per outcome
    let mut avg = [0.0; 3];
    for (y, a) in avg.iter_mut().enumerate() {
        for (m, &wm) in members.iter().zip(w.as_slice()) {
            if wm > 0.0 {
                *a += wm * score(ScoreKind::Rps, m, &Observation::Exact(y))?;
            }
        }
    }
    let max_regret_at = |f1: f64, f2: f64| -> f64 {
        let mut worst = f64::NEG_INFINITY;
        for (y, a) in avg.iter().enumerate() {
            let i1 = if y == 0 { 1.0 } else { 0.0 };
            let i2 = if y <= 1 { 1.0 } else { 0.0 };
            let s = ((f1 - i1).powi(2) + (f2 - i2).powi(2)) / 2.0;
            worst = worst.max(s - a);
        }
        worst
    };
    let n = (1.0 / step).round() as usize;
    let (scan_min, (bi, bj)) = (0..=n)
        .into_par_iter()
        .map(|i| {
            let mut best = (f64::INFINITY, (i, i));
            for j in i..=n {
                let v = max_regret_at(i as f64 * step, j as f64 * step);
                if v < best.0 {
                    best = (v, (i, j));
                }
            }
            best
        })
        .reduce(
            || (f64::INFINITY, (usize::MAX, usize::MAX)),
            |a, b| {
                if b.0 < a.0 || (b.0 == a.0 && b.1 < a.1) {
                    b
                } else {
                    a
                }
            },
        );
    let pooled = pool_linear(members, w)?;
    let max_regret = max_regret_at(pooled.at(0), pooled.at(1));
    Ok(RpsMinimaxCheck {
        scan_argmin: (bi as f64 * step, bj as f64 * step),
        scan_min,
        pool_value: pooled.into_values(),
        max_regret,
        pass: max_regret <= scan_min + 1e-9,
    })
}

/// A prediction for entropy / divergence computations.
#[derive(Clone, Debug, PartialEq)]
pub enum Prediction {
    /// Event probability `P(Y = 1)` of a binary outcome.
    Binary(f64),
    Distribution(DiscreteCdf),
}

impl Prediction {
    fn cdf(&self) -> DiscreteCdf {
        match self {
            Prediction::Binary(p) => binary_cdf(*p),
            Prediction::Distribution(c) => c.clone(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EntropyDivergence {
    pub entropy: f64,
    pub divergence: f64,
}

fn kl_term(p: f64, q: f64) -> f64 {
    if p <= 0.0 {
        0.0
    } else if q <= 0.0 {
        f64::INFINITY
    } else {
        p * (p / q).ln()
    }
}

fn entropy_term(p: f64) -> f64 {
    if p <= 0.0 {
        0.0
    } else {
        -p * p.ln()
    }
}

/// Entropy of `p` and divergence `d(p, q)` of a proper score; both
/// predictions must live on the same sample space.
pub fn score_entropy_and_divergence(
    kind: ScoreKind,
    p: &Prediction,
    q: &Prediction,
) -> Result<EntropyDivergence> {
    let (fp, fq) = (p.cdf(), q.cdf());
    if fp.len() != fq.len() {
        return Err(Error::Shape(
            "predictions live on different sample spaces".into(),
        ));
    }
    let k = fp.len();
    kind.check_classes(k)?;
    Ok(match kind {
        ScoreKind::Brier => {
            let (a, b) = (1.0 - fp.at(0), 1.0 - fq.at(0));
            EntropyDivergence {
                entropy: a * (1.0 - a),
                divergence: (a - b) * (a - b),
            }
        }
        ScoreKind::Nll => {
            let (pp, pq) = (pdf_from_cdf(&fp), pdf_from_cdf(&fq));
            EntropyDivergence {
                entropy: pp.iter().map(|&x| entropy_term(x)).sum(),
                divergence: pp
                    .iter()
                    .zip(&pq)
                    .map(|(&a, &b)| kl_term(a, b))
                    .sum::<f64>()
                    .max(0.0),
            }
        }
        ScoreKind::Rps => {
            let d = (k - 1) as f64;
            let (a, b) = (&fp.values()[..k - 1], &fq.values()[..k - 1]);
            EntropyDivergence {
                entropy: a.iter().map(|f| f * (1.0 - f)).sum::<f64>() / d,
                divergence: a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>() / d,
            }
        }
    })
}

/// Binary NLL-minimax pool `expit(sum_m w_m logit p_m)`.
pub fn logit_pool(members: &[f64], w: &SimplexWeights) -> f64 {
    let z: f64 = members
        .iter()
        .zip(w.as_slice())
        .filter(|(_, &wm)| wm > 0.0)
        .map(|(&p, &wm)| wm * logit(crate::clamp_prob(p)))
        .sum();
    crate::dist::logistic_cdf(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;
    use crate::synth::{random_cdf, random_weights};
    use rand::Rng;

    fn cdf(v: &[f64]) -> DiscreteCdf {
        DiscreteCdf::new(v.to_vec()).unwrap()
    }

    #[test]
    fn regret_of_sole_member_is_zero() {
        let m = cdf(&[0.2, 0.5, 1.0]);
        let w = SimplexWeights::equal(1).unwrap();
        for kind in [ScoreKind::Nll, ScoreKind::Rps] {
            let r = regret_profile(&m, &[&m], &w, kind).unwrap();
            assert!(r.regrets.iter().all(|x| *x == Some(0.0)));
            assert_eq!(r.max_regret, 0.0);
        }
    }

    #[test]
    fn binary_equalizer_example() {
        let (a, b) = (binary_cdf(0.2), binary_cdf(0.8));
        let w = SimplexWeights::equal(2).unwrap();
        let pool = pool_transformation(&[&a, &b], &w, TargetDistribution::Logistic).unwrap();
        assert!((pool.at(0) - 0.5).abs() < 1e-15);
        let r = regret_profile(&pool, &[&a, &b], &w, ScoreKind::Nll).unwrap();
        let expected = -(0.5f64).ln() - (-(0.2f64).ln() - (0.8f64).ln()) / 2.0;
        for x in &r.regrets {
            assert!((x.unwrap() - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn regret_equalization_random_pairs() {
        let mut rng = seeded(31);
        let w = SimplexWeights::equal(2).unwrap();
        for _ in 0..200 {
            let (p, q) = (rng.random_range(0.01..0.99), rng.random_range(0.01..0.99));
            let (a, b) = (binary_cdf(p), binary_cdf(q));
            let pool = pool_transformation(&[&a, &b], &w, TargetDistribution::Logistic).unwrap();
            let r = regret_profile(&pool, &[&a, &b], &w, ScoreKind::Nll).unwrap();
            assert!((r.regrets[0].unwrap() - r.regrets[1].unwrap()).abs() < 1e-9);
        }
    }

    #[test]
    fn linear_rps_regret_matches_termwise_oracle() {
        let mut rng = seeded(32);
        for _ in 0..50 {
            let ms: Vec<DiscreteCdf> = (0..3).map(|_| random_cdf(&mut rng, 3)).collect();
            let refs: Vec<&DiscreteCdf> = ms.iter().collect();
            let w = random_weights(&mut rng, 3);
            let pool = pool_linear(&refs, &w).unwrap();
            let r = regret_profile(&pool, &refs, &w, ScoreKind::Rps).unwrap();
            for y in 0..3 {
                let s = |f: &DiscreteCdf| {
                    let mut t = 0.0;
                    for l in 0..2 {
                        let ind = if y <= l { 1.0 } else { 0.0 };
                        t += (f.at(l) - ind).powi(2);
                    }
                    t / 2.0
                };
                let avg: f64 = ms.iter().zip(w.as_slice()).map(|(m, wm)| wm * s(m)).sum();
                assert!((r.regrets[y].unwrap() - (s(&pool) - avg)).abs() < 1e-12);
            }
            // equalizer: -(1/(K-1)) sum_l Var_w F_m(y_l)
            let mut var = 0.0;
            for l in 0..2 {
                let mean = pool.at(l);
                var += ms
                    .iter()
                    .zip(w.as_slice())
                    .map(|(m, wm)| wm * (m.at(l) - mean).powi(2))
                    .sum::<f64>();
            }
            for x in &r.regrets {
                assert!((x.unwrap() + var / 2.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn undefined_cells_are_flagged() {
        let a = cdf(&[1.0, 1.0]);
        let w = SimplexWeights::equal(1).unwrap();
        let r = regret_profile(&a, &[&a], &w, ScoreKind::Nll).unwrap();
        assert_eq!(r.regrets[0], Some(0.0));
        assert_eq!(r.regrets[1], None);
        assert!(r.undefined_cells);
        assert_eq!(r.max_regret, 0.0);
    }

    #[test]
    fn integrated_quantile_examples() {
        let l = TargetDistribution::Logistic;
        assert!((integrated_quantile(l, 0.5).unwrap() - 0.5f64.ln()).abs() < 1e-15);
        assert_eq!(integrated_quantile(l, 1.0).unwrap(), 0.0);
        assert_eq!(integrated_quantile(l, 0.0).unwrap(), 0.0);
        assert!(integrated_quantile(l, 1.5).is_err());
        for i in 1..100 {
            let p = i as f64 / 100.0;
            let h = -p * p.ln() - (1.0 - p) * (1.0 - p).ln();
            assert!((integrated_quantile(l, p).unwrap() + h).abs() < 1e-12);
        }
    }

    #[test]
    fn normal_integrated_quantile_closed_form() {
        let n = TargetDistribution::StandardNormal;
        for i in 1..200 {
            let p = i as f64 / 200.0;
            let z = n.quantile(p).unwrap();
            let exact = -n.density(z).unwrap();
            assert!(
                (integrated_quantile(n, p).unwrap() - exact).abs() < 1e-9,
                "p = {p}"
            );
        }
        assert!(integrated_quantile(n, 1.0).unwrap().abs() < 1e-9);
    }

    #[test]
    fn riemann_oracle() {
        // midpoint sum over 1e6 cells in u-space
        for (dist, p) in [
            (TargetDistribution::StandardNormal, 0.5),
            (TargetDistribution::MinExtremeValue, 0.5),
            (TargetDistribution::MinExtremeValue, 0.9),
        ] {
            let cells = 1_000_000;
            let h = p / cells as f64;
            let riemann: f64 = (0..cells)
                .map(|i| dist.quantile((i as f64 + 0.5) * h).unwrap())
                .sum::<f64>()
                * h;
            assert!((integrated_quantile(dist, p).unwrap() - riemann).abs() < 1e-6);
        }
        // MEV mean is minus the Euler-Mascheroni constant
        let g = integrated_quantile(TargetDistribution::MinExtremeValue, 1.0).unwrap();
        assert!((g + 0.577_215_664_901_532_9).abs() < 1e-9);
    }

    #[test]
    fn minimax_binary_examples() {
        let w1 = SimplexWeights::equal(1).unwrap();
        let r = verify_minimax_binary(&[0.37], &w1, 1e-3).unwrap();
        assert!(r.pass && (r.scan_argmin - 0.37).abs() <= 1e-3);
        let w2 = SimplexWeights::equal(2).unwrap();
        let r = verify_minimax_binary(&[0.2, 0.8], &w2, 1e-3).unwrap();
        assert!(r.pass && (r.scan_argmin - 0.5).abs() <= 1e-3);
        let r = verify_minimax_binary(&[0.2, 0.4], &w2, 1e-3).unwrap();
        assert!(r.pass && (r.scan_argmin - 0.289898).abs() <= 1e-3);
        assert!((r.pool_value - 0.289898).abs() < 1e-6);
        assert!(verify_minimax_binary(&[0.2, 0.4], &w2, 0.01).is_err());
    }

    #[test]
    fn logit_pool_matches_transformation_pool() {
        let w = SimplexWeights::new(vec![0.3, 0.7]).unwrap();
        let r = verify_minimax_binary(&[0.1, 0.6], &w, 1e-3).unwrap();
        assert!((logit_pool(&[0.1, 0.6], &w) - r.pool_value).abs() < 1e-12);
    }

    #[test]
    fn minimax_rps_examples() {
        let a = cdf(&[0.3, 0.6, 1.0]);
        let r = verify_minimax_rps(&[&a, &a], &SimplexWeights::equal(2).unwrap(), 0.01).unwrap();
        assert!(r.pass && r.max_regret.abs() < 1e-15);
        let b = cdf(&[0.1, 0.9, 1.0]);
        let r =
            verify_minimax_rps(&[&a, &b], &SimplexWeights::vertex(2, 0).unwrap(), 0.01).unwrap();
        assert!(r.pass && r.max_regret == 0.0);
        assert_eq!(r.pool_value, a.values());
        let mut rng = seeded(33);
        for _ in 0..5 {
            let (x, y) = (random_cdf(&mut rng, 3), random_cdf(&mut rng, 3));
            let r =
                verify_minimax_rps(&[&x, &y], &SimplexWeights::equal(2).unwrap(), 0.01).unwrap();
            assert!(r.pass);
        }
    }

    #[test]
    fn entropy_divergence_examples() {
        let half = Prediction::Binary(0.5);
        let e = score_entropy_and_divergence(ScoreKind::Brier, &half, &half).unwrap();
        assert_eq!((e.entropy, e.divergence), (0.25, 0.0));
        let e = score_entropy_and_divergence(ScoreKind::Nll, &half, &half).unwrap();
        assert!((e.entropy - 2f64.ln()).abs() < 1e-15 && e.divergence == 0.0);
        let f = Prediction::Distribution(cdf(&[0.2, 0.7, 1.0]));
        let g = Prediction::Distribution(cdf(&[0.4, 0.7, 1.0]));
        let e = score_entropy_and_divergence(ScoreKind::Rps, &f, &g).unwrap();
        assert!((e.divergence - 0.02).abs() < 1e-15);
        let z = Prediction::Binary(1.0);
        let e = score_entropy_and_divergence(ScoreKind::Nll, &half, &z).unwrap();
        assert_eq!(e.divergence, f64::INFINITY);
    }

    fn expected_score(kind: ScoreKind, p: &DiscreteCdf, q: &DiscreteCdf) -> f64 {
        pdf_from_cdf(p)
            .iter()
            .enumerate()
            .filter(|(_, &m)| m > 0.0)
            .map(|(y, m)| m * score(kind, q, &Observation::Exact(y)).unwrap())
            .sum()
    }

    #[test]
    fn divergence_is_expected_score_difference() {
        let mut rng = seeded(34);
        for _ in 0..500 {
            let (p, q) = (rng.random_range(0.01..0.99), rng.random_range(0.01..0.99));
            for kind in [ScoreKind::Brier, ScoreKind::Nll, ScoreKind::Rps] {
                let (a, b) = (binary_cdf(p), binary_cdf(q));
                let e = score_entropy_and_divergence(
                    kind,
                    &Prediction::Binary(p),
                    &Prediction::Binary(q),
                )
                .unwrap();
                let d = expected_score(kind, &a, &b) - expected_score(kind, &a, &a);
                assert!((e.divergence - d).abs() < 1e-10);
                assert!((e.entropy - expected_score(kind, &a, &a)).abs() < 1e-10);
                assert!(e.divergence > 0.0 || p == q);
            }
        }
    }

    #[test]
    fn divergence_nonnegative_on_distributions() {
        let mut rng = seeded(35);
        for _ in 0..500 {
            let k = rng.random_range(2..8);
            let (f, g) = (random_cdf(&mut rng, k), random_cdf(&mut rng, k));
            for kind in [ScoreKind::Nll, ScoreKind::Rps] {
                let pf = Prediction::Distribution(f.clone());
                let e =
                    score_entropy_and_divergence(kind, &pf, &Prediction::Distribution(g.clone()))
                        .unwrap();
                assert!(e.divergence >= 0.0);
                let same = score_entropy_and_divergence(kind, &pf, &pf).unwrap();
                assert_eq!(same.divergence, 0.0);
                // the RPS decomposition holds for every K
                if kind == ScoreKind::Rps {
                    let d = expected_score(kind, &f, &g) - expected_score(kind, &f, &f);
                    assert!((e.divergence - d).abs() < 1e-10);
                }
            }
        }
    }
}
