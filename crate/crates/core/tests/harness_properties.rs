use gaplab::concepts::ClassSpec;
use gaplab::distributions::DistSpec;
use gaplab::learners::LearnerKind;
use gaplab::mc_harness::{tail_inequality_check, Experiment, TargetSpec, TrialConfig};
use proptest::prelude::*;

fn cfg(n: usize, eps: f64, learner: LearnerKind, eps_acc: f64, trials: u64, seed: u64) -> TrialConfig {
    TrialConfig {
        class: ClassSpec::Projections { n },
        dist: DistSpec::Pne { n, eps, i: 1 },
        target: TargetSpec::Random,
        learner,
        m: 0,
        eps_acc,
        trials,
        gamma: 0.01,
        seed,
        stream: 0,
        cover: None,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn failure_means_error_above_threshold(
        n in 2usize..500,
        eps in 0.01f64..0.24,
        eps_acc in 0.001f64..0.9,
        m in 0usize..12,
        seed in any::<u64>(),
        learner in prop::sample::select(vec![LearnerKind::Erm, LearnerKind::Cover, LearnerKind::BayesPosterior]),
    ) {
        let exp = Experiment::new(cfg(n, eps, learner, eps_acc, 40, seed)).unwrap();
        let outcomes = exp.run_trials_at(m).unwrap();
        for o in &outcomes {
            prop_assert_eq!(o.failed, o.error > eps_acc);
            prop_assert!((0.0..=1.0).contains(&o.error));
        }
        let errors: Vec<f64> = outcomes.iter().map(|o| o.error).collect();
        prop_assert!(tail_inequality_check(&errors, &eps_acc.min(0.99)).unwrap());
    }
}

#[test]
fn aggregate_counts_do_not_depend_on_threads() {
    for learner in [LearnerKind::Erm, LearnerKind::Cover, LearnerKind::BayesPosterior] {
        let exp = Experiment::new(cfg(2048, 0.1, learner, 1.0 / 16.0, 3000, 17)).unwrap();
        let run = |threads: usize| {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
            pool.install(|| exp.failure_estimate_at(4).unwrap())
        };
        assert_eq!(run(1), run(3));
    }
}

#[test]
fn erm_failure_roughly_decreases_in_m() {
    for n in [64, 1024] {
        let exp = Experiment::new(cfg(n, 0.1, LearnerKind::Erm, 1.0 / 16.0, 2000, 3)).unwrap();
        let grid: Vec<_> = (0..=30).step_by(5).map(|m| exp.failure_estimate_at(m).unwrap()).collect();
        for w in grid.windows(2) {
            assert!(w[1].estimate <= w[0].estimate + 2.0 * w[0].radius, "n={n}: {:?}", w);
        }
    }
}
