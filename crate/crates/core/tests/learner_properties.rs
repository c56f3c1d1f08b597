use gaplab::concepts::{ConceptClass, Point, TableClass};
use gaplab::distributions::{sample_points, FiniteSupportDistribution, ProductDistribution, RngSeed};
use gaplab::learners::{
    bayes_posterior_predict, consistent_memorizer, cover_learner, empirical_error, erm, posterior_over_index,
    LabeledSample, PosteriorState, Predictor,
};
use gaplab::metric_cover::small_cover;
use gaplab::Exact;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn pne_sample(n: usize, eps: f64, i: usize, m: usize, master: u64) -> (ConceptClass, LabeledSample) {
    let dist = ProductDistribution::pne(n, eps, i).unwrap();
    let class = ConceptClass::projections(n).unwrap();
    let points = sample_points(&dist, m, RngSeed::new(master, 9));
    let sample = LabeledSample::labeled_by(&class, class.concept(i - 1), points).unwrap();
    (class, sample)
}

fn index_in(n: usize, frac: f64) -> usize {
    1 + ((n as f64 * frac) as usize).min(n - 1)
}

proptest! {
    #[test]
    fn erm_is_deterministic_and_consistent(n in 2usize..300, m in 0usize..30, eps in 0.01f64..0.49, f in 0.0f64..1.0, master in any::<u64>()) {
        let i = index_in(n, f);
        let (class, sample) = pne_sample(n, eps, i, m, master);
        let a = erm(&class, &sample).unwrap();
        prop_assert_eq!(a, erm(&class, &sample).unwrap());
        prop_assert_eq!(empirical_error::<Exact>(&class, a, &sample).unwrap(), Exact::zero());
        prop_assert!(a.index() < i);
    }

    #[test]
    fn cover_learner_is_deterministic(n in 2usize..300, m in 0usize..30, eps in 0.01f64..0.24, f in 0.0f64..1.0, master in any::<u64>()) {
        let i = index_in(n, f);
        let (class, sample) = pne_sample(n, eps, i, m, master);
        let cover = small_cover(&ProductDistribution::pne(n, eps, i).unwrap()).unwrap();
        let a = cover_learner(&cover, &class, &sample).unwrap();
        prop_assert_eq!(a, cover_learner(&cover, &class, &sample).unwrap());
        prop_assert!(cover.members.contains(&a));
    }

    #[test]
    fn posterior_is_uniform_and_contains_truth(n in 2usize..200, m in 0usize..8, eps in 0.01f64..0.49, f in 0.0f64..1.0, master in any::<u64>()) {
        let i = index_in(n, f);
        let (_, sample) = pne_sample(n, eps, i, m, master);
        let post = posterior_over_index::<Exact>(n, &sample).unwrap();
        let total = post.iter().fold(Exact::zero(), |acc, (_, p)| acc + p.clone());
        prop_assert_eq!(total, Exact::one());
        prop_assert!(post.windows(2).all(|w| w[0].1 == w[1].1));
        prop_assert!(post.iter().any(|(id, _)| id.number() == i));
        let state = PosteriorState::from_sample(n, eps, &sample).unwrap();
        prop_assert!(state.k_set().contains(&(i - 1)));
    }

    /// Relabeling coordinates (moving `k` and `z` together) leaves the
    /// prediction unchanged.
    #[test]
    fn bayes_prediction_depends_on_k_and_s_only(
        n in 2usize..64,
        k_mask in any::<u64>(),
        z_bits in any::<u64>(),
        keys in prop::collection::vec(any::<u32>(), 64),
        eps in 0.01f64..0.49,
    ) {
        let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let k_mask = (k_mask & full).max(1);
        let mut perm: Vec<usize> = (0..n).collect();
        perm.sort_by_key(|&j| (keys[j], j));
        let z = Point::from_index(n, z_bits & full);
        let z_perm = Point::from_bits(&(0..n).map(|j| z.get(perm[j])).collect::<Vec<_>>());
        let k: Vec<usize> = (0..n).filter(|j| (k_mask >> j) & 1 == 1).collect();
        let mut k_perm: Vec<usize> = (0..n).filter(|&j| (k_mask >> perm[j]) & 1 == 1).collect();
        k_perm.sort_unstable();
        let build = |cols: &[usize]| -> PosteriorState<f64> {
            // One row whose 1s mark `cols`, labeled 1, keeps exactly `cols`.
            let row = Point::from_bits(&(0..n).map(|j| cols.contains(&j)).collect::<Vec<_>>());
            PosteriorState::from_sample(n, eps, &LabeledSample::new(vec![row], vec![true]).unwrap()).unwrap()
        };
        let a = bayes_posterior_predict(&build(&k), &z).unwrap();
        let b = bayes_posterior_predict(&build(&k_perm), &z_perm).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn memorizer_reproduces_labels(draws in prop::collection::vec(0u64..16, 0..30), target in any::<u16>(), default in any::<bool>()) {
        let domain: Vec<Point> = (0..16).map(|v| Point::from_index(4, v)).collect();
        let class = ConceptClass::Table(TableClass::all_functions(domain.clone()).unwrap());
        let points: Vec<Point> = draws.iter().map(|&v| domain[v as usize].clone()).collect();
        let sample = LabeledSample::labeled_by(&class, class.concept(target as usize), points).unwrap();
        let predictor: Predictor<f64> = consistent_memorizer(&sample, default).unwrap();
        for (x, y) in sample.iter() {
            prop_assert_eq!(predictor.predict(&class, x).unwrap(), y);
        }
    }

    #[test]
    fn memorizer_error_at_most_missing_mass(
        weights in prop::collection::vec(0u64..20, 1..=12),
        draws in prop::collection::vec(any::<u8>(), 0..24),
        target in any::<u16>(),
        default in any::<bool>(),
    ) {
        prop_assume!(weights.iter().sum::<u64>() > 0);
        let d = weights.len();
        let support: Vec<Point> = (0..d as u64).map(|v| Point::from_index(4, v)).collect();
        let dist = FiniteSupportDistribution::<Exact>::weighted(support.clone(), &weights).unwrap();
        let class = ConceptClass::Table(TableClass::all_functions(support.clone()).unwrap());
        let target = class.concept(target as usize % class.len());
        let points: Vec<Point> = draws.iter().map(|&k| support[k as usize % d].clone()).collect();
        let sample = LabeledSample::labeled_by(&class, target, points).unwrap();
        let predictor = consistent_memorizer(&sample, default).unwrap();
        let error = predictor.disagreement(&class, target, &dist).unwrap();
        prop_assert!(error <= dist.missing_mass(sample.points()));
    }
}
