use crate::error::{Error, Result};
use crate::panel::{pdf_from_cdf, DiscreteCdf, Observation};

/// Most probable class; ties go to the lowest index.
pub fn classify(cdf: &DiscreteCdf) -> usize {
    let pdf = pdf_from_cdf(cdf);
    let mut best = 0;
    for (k, &p) in pdf.iter().enumerate() {
        if p > pdf[best] {
            best = k;
        }
    }
    best
}

fn exact_outcomes(outcomes: &[Observation]) -> Result<Vec<usize>> {
    outcomes
        .iter()
        .map(|o| {
            o.exact()
                .ok_or_else(|| Error::UnsupportedObservation("metric needs exact outcomes".into()))
        })
        .collect()
}

/// Fraction of instances whose most probable class was observed.
pub fn accuracy(predictions: &[DiscreteCdf], outcomes: &[Observation]) -> Result<f64> {
    if predictions.len() != outcomes.len() || predictions.is_empty() {
        return Err(Error::Shape(format!(
            "{} predictions for {} outcomes",
            predictions.len(),
            outcomes.len()
        )));
    }
    let ys = exact_outcomes(outcomes)?;
    let hits = predictions
        .iter()
        .zip(ys)
        .filter(|(p, y)| classify(p) == *y)
        .count();
    Ok(hits as f64 / predictions.len() as f64)
}

/// `P(score of a positive > score of a negative) + P(tie) / 2`, computed from
/// mid-ranks.
pub fn probabilistic_index(scores: &[f64], events: &[bool]) -> Result<f64> {
    if scores.len() != events.len() {
        return Err(Error::Shape("scores and events differ in length".into()));
    }
    if scores.iter().any(|s| s.is_nan()) {
        return Err(Error::Input("NaN risk score".into()));
    }
    let n_pos = events.iter().filter(|e| **e).count();
    let n_neg = events.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::UndefinedMetric(
            "AUC needs both outcome groups".into(),
        ));
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    let mut rank_sum_pos = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && scores[order[j + 1]] == scores[order[i]] {
            j += 1;
        }
        // ranks i+1 ..= j+1 share their mean
        let mid = (i + j + 2) as f64 / 2.0;
        for &idx in &order[i..=j] {
            if events[idx] {
                rank_sum_pos += mid;
            }
        }
        i = j + 1;
    }
    let u = rank_sum_pos - (n_pos * (n_pos + 1)) as f64 / 2.0;
    Ok(u / (n_pos as f64 * n_neg as f64))
}

/// `max(PI, 1 - PI)`.
pub fn auc(scores: &[f64], events: &[bool]) -> Result<f64> {
    let pi = probabilistic_index(scores, events)?;
    Ok(pi.max(1.0 - pi))
}

/// Quadratic weighted kappa, `1 - sum w O / sum w E` with
/// `w_ij = (i - j)^2 / (K - 1)^2`.
pub fn qwk(predicted: &[usize], observed: &[usize], k: usize) -> Result<f64> {
    if predicted.len() != observed.len() || predicted.is_empty() {
        return Err(Error::Shape(
            "predicted and observed classes differ in length".into(),
        ));
    }
    if k < 2 {
        return Err(Error::Domain("kappa needs at least 2 classes".into()));
    }
    if let Some(c) = predicted.iter().chain(observed).find(|&&c| c >= k) {
        return Err(Error::Domain(format!("class {c} out of range for K = {k}")));
    }
    let n = predicted.len() as f64;
    let mut o = vec![vec![0.0; k]; k];
    let mut rows = vec![0.0; k];
    let mut cols = vec![0.0; k];
    for (&p, &y) in predicted.iter().zip(observed) {
        o[y][p] += 1.0 / n;
        rows[y] += 1.0 / n;
        cols[p] += 1.0 / n;
    }
    let denom_k = ((k - 1) * (k - 1)) as f64;
    let (mut num, mut den) = (0.0, 0.0);
    for i in 0..k {
        for j in 0..k {
            let w = ((i as f64 - j as f64).powi(2)) / denom_k;
            num += w * o[i][j];
            den += w * rows[i] * cols[j];
        }
    }
    if den == 0.0 {
        return Err(Error::UndefinedMetric(
            "kappa is undefined when expected disagreement is zero".into(),
        ));
    }
    Ok(1.0 - num / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn cdf(v: &[f64]) -> DiscreteCdf {
        DiscreteCdf::new(v.to_vec()).unwrap()
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(&cdf(&[0.2, 0.7, 1.0])), 1);
        assert_eq!(classify(&cdf(&[0.5, 1.0])), 0);
        assert_eq!(classify(&cdf(&[0.0, 0.0, 1.0])), 2);
    }

    #[test]
    fn accuracy_examples() {
        let preds = vec![
            cdf(&[0.9, 1.0]),
            cdf(&[0.1, 1.0]),
            cdf(&[0.8, 1.0]),
            cdf(&[0.3, 1.0]),
        ];
        let all: Vec<Observation> = [0, 1, 0, 1].into_iter().map(Observation::Exact).collect();
        assert_eq!(accuracy(&preds, &all).unwrap(), 1.0);
        let none: Vec<Observation> = [1, 0, 1, 0].into_iter().map(Observation::Exact).collect();
        assert_eq!(accuracy(&preds, &none).unwrap(), 0.0);
        let three: Vec<Observation> = [0, 1, 0, 0].into_iter().map(Observation::Exact).collect();
        assert_eq!(accuracy(&preds, &three).unwrap(), 0.75);
        let cens = vec![
            Observation::Interval {
                lower: None,
                upper: 1
            };
            4
        ];
        assert!(matches!(
            accuracy(&preds, &cens),
            Err(Error::UnsupportedObservation(_))
        ));
    }

    fn brute_pi(scores: &[f64], events: &[bool]) -> f64 {
        let (mut s, mut c) = (0.0, 0.0);
        for (i, &a) in scores.iter().enumerate() {
            for (j, &b) in scores.iter().enumerate() {
                if events[i] && !events[j] {
                    c += 1.0;
                    s += if a > b {
                        1.0
                    } else if a == b {
                        0.5
                    } else {
                        0.0
                    };
                }
            }
        }
        s / c
    }

    #[test]
    fn auc_examples() {
        let e = [false, false, true, true];
        assert_eq!(auc(&[0.1, 0.2, 0.3, 0.4], &e).unwrap(), 1.0);
        assert_eq!(auc(&[0.5; 4], &e).unwrap(), 0.5);
        let s = [0.1, 0.4, 0.35, 0.8];
        assert_eq!(probabilistic_index(&s, &e).unwrap(), 0.75);
        assert_eq!(auc(&s, &e).unwrap(), 0.75);
        assert_eq!(brute_pi(&s, &e), 0.75);
        assert!(matches!(
            auc(&[0.1, 0.2], &[true, true]),
            Err(Error::UndefinedMetric(_))
        ));
    }

    #[test]
    fn auc_matches_pairwise_brute_force_with_ties() {
        let mut rng = crate::rng::seeded(8);
        for _ in 0..100 {
            let n = rng.random_range(2..40);
            let scores: Vec<f64> = (0..n)
                .map(|_| (rng.random_range(0..6)) as f64 / 5.0)
                .collect();
            let mut events: Vec<bool> = (0..n).map(|_| rng.random_bool(0.4)).collect();
            events[0] = true;
            events[1] = false;
            let pi = probabilistic_index(&scores, &events).unwrap();
            assert!((pi - brute_pi(&scores, &events)).abs() < 1e-12);
        }
    }

    #[test]
    fn auc_rank_invariance() {
        let mut rng = crate::rng::seeded(9);
        let scores: Vec<f64> = (0..50).map(|_| rng.random::<f64>()).collect();
        let events: Vec<bool> = (0..50).map(|i| i % 3 == 0).collect();
        let a = auc(&scores, &events).unwrap();
        let t: Vec<f64> = scores.iter().map(|s| (5.0 * s).exp() - 3.0).collect();
        assert_eq!(a, auc(&t, &events).unwrap());
    }

    // kappa through the pairwise form 1 - mean (p_i - o_i)^2 / mean_{i,j} (p_i - o_j)^2
    fn brute_qwk(p: &[usize], o: &[usize]) -> f64 {
        let n = p.len() as f64;
        let num: f64 = p
            .iter()
            .zip(o)
            .map(|(&a, &b)| (a as f64 - b as f64).powi(2))
            .sum::<f64>()
            / n;
        let mut den = 0.0;
        for &a in p {
            for &b in o {
                den += (a as f64 - b as f64).powi(2);
            }
        }
        1.0 - num / (den / (n * n))
    }

    #[test]
    fn qwk_examples() {
        assert_eq!(qwk(&[0, 1, 2, 2], &[0, 1, 2, 2], 3).unwrap(), 1.0);
        let (p, o) = ([0, 0, 1, 2], [0, 1, 1, 2]);
        assert!((qwk(&p, &o, 3).unwrap() - brute_qwk(&p, &o)).abs() < 1e-12);
        // K = 2: unweighted Cohen's kappa, (p_o - p_e) / (1 - p_e)
        let (p, o) = ([0, 1, 1, 0, 1, 1], [0, 1, 0, 0, 1, 1]);
        let po = 5.0 / 6.0;
        let pe = (3.0 / 6.0) * (2.0 / 6.0) + (3.0 / 6.0) * (4.0 / 6.0);
        assert!((qwk(&p, &o, 2).unwrap() - (po - pe) / (1.0 - pe)).abs() < 1e-12);
        assert!(matches!(
            qwk(&[1, 1], &[1, 1], 3),
            Err(Error::UndefinedMetric(_))
        ));
    }

    #[test]
    fn qwk_matches_pairwise_form() {
        let mut rng = crate::rng::seeded(10);
        for _ in 0..100 {
            let k = rng.random_range(2..8);
            let n = rng.random_range(2..60);
            let p: Vec<usize> = (0..n).map(|_| rng.random_range(0..k)).collect();
            let o: Vec<usize> = (0..n).map(|_| rng.random_range(0..k)).collect();
            match qwk(&p, &o, k) {
                Ok(v) => assert!((v - brute_qwk(&p, &o)).abs() < 1e-10),
                Err(_) => assert!(p.iter().chain(&o).all(|&c| c == p[0])),
            }
        }
    }
}
