mod common;

use jamtexter::textsim::{
    AttemptType, InterceptorProfile, ModeKind, NetworkProbSet, TextingModel, TransmissionMode,
};

fn model() -> TextingModel {
    TextingModel::new(
        &NetworkProbSet::defaults(),
        &InterceptorProfile::default(),
        &TransmissionMode::defaults(),
    )
    .unwrap()
}

#[test]
fn enumeration_matches_integer_oracle() {
    let m = model();
    let cases: [(ModeKind, Vec<Vec<i64>>); 3] = [
        (ModeKind::Baseline, vec![common::W1.to_vec()]),
        (
            ModeKind::Partial,
            vec![
                common::W1.to_vec(),
                common::W2.to_vec(),
                common::W3.to_vec(),
            ],
        ),
        (
            ModeKind::Full,
            vec![
                common::W1.to_vec(),
                common::W2.to_vec(),
                common::W3.to_vec(),
                common::W3.to_vec(),
                common::W3.to_vec(),
            ],
        ),
    ];
    for (mode, sets) in cases {
        let (delivered, total) = common::delivery_probability_hundredths(&sets, &common::I1);
        let exact = m.enumerate_exact(mode).unwrap();
        assert_eq!(exact.combinations, total);
        assert_eq!(
            exact.delivery_probability,
            delivered as f64 / total as f64,
            "{mode}"
        );
    }
}

#[test]
fn monte_carlo_agrees_with_enumeration() {
    let m = model();
    let n = 10_000u64;
    let outcomes = m.run_trials(n, 2024);
    for attempt in AttemptType::ALL {
        for mode in m.modes().collect::<Vec<_>>() {
            let p = m.enumerate_exact(mode).unwrap().delivery_probability;
            let hits = outcomes
                .iter()
                .filter(|o| o.attempt_type == attempt && o.mode == mode && o.delivered)
                .count() as f64;
            let freq = hits / n as f64;
            let se = (p * (1.0 - p) / n as f64).sqrt();
            assert!(
                (freq - p).abs() <= 4.0 * se,
                "{attempt} {mode}: {freq} vs {p}"
            );
        }
    }
}

#[test]
fn mean_p_ic_tracks_exact_mean() {
    let m = model();
    let n = 10_000u64;
    let outcomes = m.run_trials(n, 99);
    for mode in m.modes().collect::<Vec<_>>() {
        let exact = m.enumerate_exact(mode).unwrap().expected_p_ic;
        let mean = outcomes
            .iter()
            .filter(|o| o.attempt_type == AttemptType::Interception && o.mode == mode)
            .map(|o| o.p_ic)
            .sum::<f64>()
            / n as f64;
        // p_ic is bounded in [0, 1], so its standard deviation is at most 0.5.
        assert!(
            (mean - exact).abs() < 4.0 * 0.5 / (n as f64).sqrt(),
            "{mode}"
        );
    }
}

#[test]
fn sampled_values_come_from_the_sets() {
    let m = model();
    let allowed: Vec<i64> = common::W1
        .iter()
        .flat_map(|s| common::I1.iter().map(move |k| (s - k).max(0)))
        .collect();
    for o in m.run_trials(300, 5) {
        if o.mode == ModeKind::Baseline {
            let hundredths = (o.p_ic * 100.0).round() as i64;
            assert!((o.p_ic * 100.0 - hundredths as f64).abs() < 1e-9);
            assert!(allowed.contains(&hundredths));
            assert!(o.p_ic <= 0.35);
        }
    }
}
