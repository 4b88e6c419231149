use proptest::prelude::*;

use recursive_experts::belief::{Belief, Domain};
use recursive_experts::doubling::block_of;
use recursive_experts::environment::{
    dynamic_comparator, generate, static_comparator, EnvironmentConfig, EnvironmentKind, LossSequence,
    SegmentSchedule,
};
use recursive_experts::learner::{Learner, OnlineGradientDescent};
use recursive_experts::loss::LossFunction;
use recursive_experts::mixture::{reset_target, WeightVector};
use recursive_experts::reset::{ResetPolicy, Resetting};

fn ogd() -> OnlineGradientDescent {
    OnlineGradientDescent::new(Domain::unit_interval(), 2.0).unwrap()
}

fn squared_losses(targets: &[f64]) -> Vec<LossFunction> {
    targets
        .iter()
        .enumerate()
        .map(|(k, y)| LossFunction::squared(k as u64 + 1, vec![*y], 1.0).unwrap())
        .collect()
}

fn sequence(targets: &[f64], cuts: &[u64]) -> LossSequence {
    let horizon = targets.len() as u64;
    let mut change_points: Vec<u64> = cuts.iter().copied().filter(|c| *c < horizon).collect();
    change_points.push(horizon);
    change_points.sort_unstable();
    change_points.dedup();
    let optima = vec![Belief::scalar(0.5); change_points.len()];
    let schedule = SegmentSchedule::new(change_points, optima).unwrap();
    LossSequence::new(squared_losses(targets), schedule, Domain::unit_interval()).unwrap()
}

proptest! {
    #[test]
    fn weight_updates_stay_on_the_simplex(
        raw in prop::collection::vec(0.0f64..1.0, 2..12),
        rounds in prop::collection::vec(prop::collection::vec(0.0f64..=1.0, 12), 1..40),
        eta in 0.01f64..5.0,
        sigma in 0.0f64..=1.0,
        shared in any::<bool>(),
    ) {
        let n = raw.len();
        let total: f64 = raw.iter().sum::<f64>() + 1e-3;
        let init: Vec<f64> = raw.iter().map(|w| (w + 1e-3 / n as f64) / total).collect();
        let mut w = WeightVector::from_weights(init, eta).unwrap();
        for (t, losses) in rounds.iter().enumerate() {
            let losses = &losses[..n];
            if shared {
                let target = (t % n != 0).then_some(t % n);
                w.shared_update(losses, sigma, target).unwrap();
            } else {
                w.ew_update(losses).unwrap();
            }
            prop_assert!(w.weights().iter().all(|x| *x >= 0.0));
            prop_assert!((w.weights().iter().sum::<f64>() - 1.0).abs() <= 1e-9);
        }
    }

    #[test]
    fn hedge_regret_within_bound(
        n in 2usize..10,
        losses in prop::collection::vec(prop::collection::vec(0.0f64..=1.0, 10), 1..300),
    ) {
        let horizon = losses.len() as f64;
        let eta = (8.0 * (n as f64).ln() / horizon).sqrt();
        let mut w = WeightVector::uniform(n, eta);
        let mut incurred = 0.0;
        let mut totals = vec![0.0; n];
        for round in &losses {
            let round = &round[..n];
            incurred += w.expectation(round);
            w.ew_update(round).unwrap();
            for (s, l) in totals.iter_mut().zip(round) {
                *s += l;
            }
        }
        let best = totals.iter().cloned().fold(f64::INFINITY, f64::min);
        prop_assert!(incurred - best <= (n as f64).ln() / eta + eta * horizon / 8.0 + 1e-9);
    }

    #[test]
    fn resetting_replays_fresh_runs(
        targets in prop::collection::vec(0.0f64..=1.0, 1..120),
        period in 2u64..20,
        phase_seed in 0u64..20,
    ) {
        let phase = phase_seed % period;
        let policy = ResetPolicy::new(period, phase).unwrap();
        let losses = squared_losses(&targets);
        let mut wrapped = Resetting::new(ogd(), policy);
        let mut fresh = ogd();
        for loss in &losses {
            let want = fresh.step(&loss.with_time(fresh.steps() + 1)).unwrap();
            prop_assert_eq!(wrapped.step_with_reset(loss).unwrap(), want);
            if policy.should_reset(loss.time_index()) {
                fresh = ogd();
            }
        }
    }

    #[test]
    fn dynamic_comparator_never_exceeds_static(
        targets in prop::collection::vec(0.0f64..=1.0, 2..200),
        cuts in prop::collection::vec(1u64..200, 0..5),
    ) {
        let seq = sequence(&targets, &cuts);
        let (_, fixed) = static_comparator(&seq, 129);
        let dynamic = dynamic_comparator(&seq, seq.schedule(), 129).unwrap();
        prop_assert!(dynamic.cumulative <= fixed + 1e-12);
        prop_assert!(dynamic.per_step.iter().all(|l| (0.0..=1.0).contains(l)));
        let sum: f64 = dynamic.per_step.iter().sum();
        prop_assert!((sum - dynamic.cumulative).abs() <= 1e-9);
    }

    #[test]
    fn finer_nested_grid_never_hurts(
        targets in prop::collection::vec(0.0f64..=1.0, 1..100),
        k in 1usize..7,
    ) {
        let seq = sequence(&targets, &[]);
        let coarse = static_comparator(&seq, (1 << k) + 1).1;
        let fine = static_comparator(&seq, (1 << (k + 1)) + 1).1;
        prop_assert!(fine <= coarse + 1e-12);
    }

    #[test]
    fn reset_target_matches_schedule_scan(t in 1u64..1_000_000, n in 1u32..24) {
        let scan: Vec<u32> = (1..=n).filter(|&i| ResetPolicy::phased(i).should_reset(t + 1)).collect();
        prop_assert!(scan.len() <= 1);
        prop_assert_eq!(reset_target(t, n), scan.first().copied());
    }

    #[test]
    fn blocks_tile_time(t in 1u64..u64::MAX / 2) {
        let (i, offset) = block_of(t);
        prop_assert!(offset >= 1 && offset <= 1u64 << i);
        prop_assert_eq!((1u64 << i) + offset - 1, t);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn ogd_static_regret_is_order_sqrt_t(seed in any::<u64>(), k in 8u32..=12, noise in 0.0f64..0.5) {
        let horizon = 1u64 << k;
        let cfg = EnvironmentConfig::new(EnvironmentKind::PiecewiseMeanSquared, horizon, 1, seed).with_noise(noise);
        let seq = generate(&cfg).unwrap();
        let mut learner = ogd();
        let incurred: f64 = seq.losses().iter().map(|l| learner.step(l).unwrap()).sum();
        let (_, best) = static_comparator(&seq, 1025);
        let bound = learner.spec().regret_constant * (horizon as f64).sqrt();
        prop_assert!(incurred - best <= bound, "regret {} > {}", incurred - best, bound);
    }
}
