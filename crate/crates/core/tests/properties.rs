use proptest::prelude::*;

use trafo_ensemble::evalmetrics::{auc, probabilistic_index};
use trafo_ensemble::pooling::{average_coefficients, pool, CoefficientBundle};
use trafo_ensemble::scoring::score;
use trafo_ensemble::toytram::{cumulative_softplus, inverse_cumulative_softplus};
use trafo_ensemble::{
    DiscreteCdf, Observation, PoolKind, ScoreKind, SimplexWeights, TargetDistribution,
};

fn cdf_strategy(k: usize) -> impl Strategy<Value = DiscreteCdf> {
    prop::collection::vec(0.001f64..0.999, k - 1).prop_map(|mut v| {
        v.sort_by(f64::total_cmp);
        v.push(1.0);
        DiscreteCdf::new(v).unwrap()
    })
}

fn weights_strategy(m: usize) -> impl Strategy<Value = SimplexWeights> {
    prop::collection::vec(0.01f64..1.0, m).prop_map(|v| SimplexWeights::normalized(v).unwrap())
}

/// `M` members over `K` classes with weights and an exact outcome.
fn instance_strategy() -> impl Strategy<Value = (Vec<DiscreteCdf>, SimplexWeights, usize)> {
    (2usize..6, 2usize..8).prop_flat_map(|(m, k)| {
        (
            prop::collection::vec(cdf_strategy(k), m),
            weights_strategy(m),
            0..k,
        )
    })
}

fn all_pools() -> Vec<PoolKind> {
    let mut v = vec![
        PoolKind::Linear,
        PoolKind::LogLinearCdf,
        PoolKind::LogLinearPdf,
    ];
    v.extend(TargetDistribution::ALL.map(PoolKind::Transformation));
    v
}

fn weighted_member_score(
    kind: ScoreKind,
    members: &[DiscreteCdf],
    w: &SimplexWeights,
    obs: &Observation,
) -> f64 {
    let s: Vec<f64> = members
        .iter()
        .map(|c| score(kind, c, obs).unwrap())
        .collect();
    w.weighted_mean(&s)
}

proptest! {
    #![proptest_config(ProptestConfig {
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn pooled_predictions_are_cdfs((members, w, _) in instance_strategy()) {
        let refs: Vec<&DiscreteCdf> = members.iter().collect();
        for kind in all_pools() {
            let p = pool(kind, &refs, &w).unwrap();
            let v = p.values();
            prop_assert_eq!(v.len(), members[0].len());
            prop_assert_eq!(v[v.len() - 1], 1.0);
            prop_assert!(v.iter().all(|x| (0.0..=1.0).contains(x)));
            prop_assert!(v.windows(2).all(|p| p[0] <= p[1]), "{kind}: {v:?}");
        }
    }

    #[test]
    fn every_pool_beats_average_member_nll((members, w, y) in instance_strategy()) {
        let refs: Vec<&DiscreteCdf> = members.iter().collect();
        let obs = Observation::Exact(y);
        let avg = weighted_member_score(ScoreKind::Nll, &members, &w, &obs);
        for kind in all_pools() {
            let s = score(ScoreKind::Nll, &pool(kind, &refs, &w).unwrap(), &obs).unwrap();
            prop_assert!(s <= avg + 1e-10, "{kind}: {s} > {avg}");
        }
    }

    #[test]
    fn censored_bounds_hold((members, w, y) in instance_strategy(), widen in 0usize..3) {
        let k = members[0].len();
        let refs: Vec<&DiscreteCdf> = members.iter().collect();
        let obs = Observation::Interval {
            lower: y.checked_sub(1 + widen),
            upper: y,
        };
        let avg = weighted_member_score(ScoreKind::Nll, &members, &w, &obs);
        for kind in [PoolKind::Linear, PoolKind::LogLinearCdf]
            .into_iter()
            .chain(TargetDistribution::ALL.map(PoolKind::Transformation))
        {
            let s = score(ScoreKind::Nll, &pool(kind, &refs, &w).unwrap(), &obs).unwrap();
            prop_assert!(s <= avg + 1e-10, "{kind} K={k}: {s} > {avg}");
        }
    }

    #[test]
    fn linear_pool_beats_average_rps((members, w, y) in instance_strategy()) {
        let refs: Vec<&DiscreteCdf> = members.iter().collect();
        let obs = Observation::Exact(y);
        let avg = weighted_member_score(ScoreKind::Rps, &members, &w, &obs);
        let s = score(ScoreKind::Rps, &pool(PoolKind::Linear, &refs, &w).unwrap(), &obs).unwrap();
        prop_assert!(s <= avg + 1e-12);
        prop_assert!((0.0..=1.0).contains(&s));
    }

    #[test]
    fn identical_members_pool_to_themselves(c in cdf_strategy(5), w in weights_strategy(3)) {
        let refs = [&c, &c, &c];
        for kind in all_pools() {
            let p = pool(kind, &refs, &w).unwrap();
            for (a, b) in p.values().iter().zip(c.values()) {
                prop_assert!((a - b).abs() < 1e-9, "{kind}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn pools_ignore_member_order((members, w, _) in instance_strategy()) {
        let refs: Vec<&DiscreteCdf> = members.iter().collect();
        let rev_refs: Vec<&DiscreteCdf> = members.iter().rev().collect();
        let rev_w = SimplexWeights::new(w.as_slice().iter().rev().copied().collect()).unwrap();
        for kind in all_pools() {
            let a = pool(kind, &refs, &w).unwrap();
            let b = pool(kind, &rev_refs, &rev_w).unwrap();
            for (x, y) in a.values().iter().zip(b.values()) {
                prop_assert!((x - y).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn quantile_inverts_cdf(p in 1e-9f64..(1.0 - 1e-9)) {
        for d in TargetDistribution::ALL {
            let z = d.quantile(p).unwrap();
            let back = d.cdf(z).unwrap();
            prop_assert!((back - p).abs() <= 1e-12 * p.max(1e-3), "{d}: {p} -> {back}");
        }
    }

    #[test]
    fn probabilistic_index_reverses_under_negation(
        scores in prop::collection::vec(-10.0f64..10.0, 2..40),
        flips in prop::collection::vec(any::<bool>(), 40),
    ) {
        let events: Vec<bool> = scores.iter().zip(&flips).map(|(_, &f)| f).collect();
        prop_assume!(events.iter().any(|&e| e) && events.iter().any(|&e| !e));
        let a = probabilistic_index(&scores, &events).unwrap();
        let neg: Vec<f64> = scores.iter().map(|s| -s).collect();
        let b = probabilistic_index(&neg, &events).unwrap();
        prop_assert!((0.0..=1.0).contains(&a));
        prop_assert!((a + b - 1.0).abs() < 1e-12);
        // AUC is orientation-free
        prop_assert!((auc(&scores, &events).unwrap() - auc(&neg, &events).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn softplus_parameterization_round_trips(gamma in prop::collection::vec(-5.0f64..5.0, 1..8)) {
        let theta = cumulative_softplus(&gamma);
        prop_assert!(theta.windows(2).all(|p| p[0] < p[1]));
        let back = inverse_cumulative_softplus(&theta).unwrap();
        for (a, b) in back.iter().zip(&gamma) {
            prop_assert!((a - b).abs() < 1e-8, "{a} vs {b}");
        }
    }

    #[test]
    fn averaging_identical_bundles_is_identity(
        intercepts in prop::collection::vec(-3.0f64..3.0, 1..6),
        shifts in prop::collection::vec(-2.0f64..2.0, 0..5),
        w in weights_strategy(4),
    ) {
        let mut intercepts = intercepts;
        intercepts.sort_by(f64::total_cmp);
        let b = CoefficientBundle { intercepts, shifts };
        let avg = average_coefficients(&vec![b.clone(); 4], &w).unwrap();
        for (x, y) in avg.intercepts.iter().chain(&avg.shifts).zip(b.intercepts.iter().chain(&b.shifts)) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }
}
