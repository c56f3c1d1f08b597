use gaplab::concepts::{ConceptClass, ConceptId, Point, TableClass};
use gaplab::distributions::{FiniteSupportDistribution, ProductDistribution, RngSeed};
use gaplab::metric_cover::{
    disagreement_exact_projections, disagreement_mc, greedy_packing_cover, sauer_bound, sauer_estimate, verify_cover,
    DistanceOracle, ProjectionMetric, TableMetric,
};
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use proptest::prelude::*;

const TOL: f64 = 1e-12;

fn check_axioms<O: DistanceOracle<f64>>(oracle: &O) {
    let k = oracle.concept_count();
    let d = |a: usize, b: usize| oracle.distance(oracle.concept(a), oracle.concept(b)).unwrap();
    for a in 0..k {
        assert_eq!(d(a, a), 0.0);
        for b in 0..k {
            assert!((d(a, b) - d(b, a)).abs() <= TOL);
            for c in 0..k {
                assert!(d(a, c) <= d(a, b) + d(b, c) + TOL, "triangle fails at ({a}, {b}, {c})");
            }
        }
    }
}

fn table_setup(domain_bits: usize, masks: &[u64], weights: &[u64]) -> (TableClass, FiniteSupportDistribution<f64>) {
    let d = 1usize << domain_bits;
    let domain: Vec<Point> = (0..d as u64).map(|v| Point::from_index(domain_bits, v)).collect();
    let masks = masks.iter().map(|m| m & ((1u64 << d) - 1)).collect();
    let class = TableClass::new(domain.clone(), masks).unwrap();
    let dist = FiniteSupportDistribution::weighted(domain, &weights[..d]).unwrap();
    (class, dist)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn projection_metric_axioms(marginals in prop::collection::vec(0.0f64..=1.0, 1..24)) {
        let dist = ProductDistribution::new(marginals).unwrap();
        check_axioms(&ProjectionMetric::new(&dist));
    }

    #[test]
    fn table_metric_axioms(masks in prop::collection::vec(any::<u64>(), 1..24), weights in prop::collection::vec(0u64..9, 8)) {
        prop_assume!(weights.iter().sum::<u64>() > 0);
        let (class, dist) = table_setup(3, &masks, &weights);
        check_axioms(&TableMetric::new(&class, &dist).unwrap());
    }

    #[test]
    fn greedy_cover_is_packing_and_covering(
        masks in prop::collection::vec(any::<u64>(), 1..40),
        weights in prop::collection::vec(1u64..9, 8),
        level in 0.0f64..0.6,
    ) {
        let (class, dist) = table_setup(3, &masks, &weights);
        let metric = TableMetric::new(&class, &dist).unwrap();
        let cover = greedy_packing_cover(&metric, level).unwrap();
        prop_assert_eq!(verify_cover(&metric, &cover).unwrap(), (true, true));
        prop_assert!(cover.certificate.unwrap() <= level);
    }

    #[test]
    fn projection_cover_size_is_monotone(marginals in prop::collection::vec(0.0f64..=1.0, 1..40), a in 0.0f64..1.0, b in 0.0f64..1.0) {
        let dist = ProductDistribution::new(marginals).unwrap();
        let metric = ProjectionMetric::new(&dist);
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(greedy_packing_cover(&metric, hi).unwrap().len() <= greedy_packing_cover(&metric, lo).unwrap().len());
    }

    #[test]
    fn table_cover_size_is_monotone(
        masks in prop::collection::vec(any::<u64>(), 1..40),
        weights in prop::collection::vec(1u64..9, 8),
        a in 0.0f64..0.7,
        b in 0.0f64..0.7,
    ) {
        let (class, dist) = table_setup(3, &masks, &weights);
        let metric = TableMetric::new(&class, &dist).unwrap();
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(greedy_packing_cover(&metric, hi).unwrap().len() <= greedy_packing_cover(&metric, lo).unwrap().len());
    }
}

#[test]
fn exact_and_monte_carlo_distances_agree() {
    let trials = 4000;
    let mut inside = 0;
    for case in 0..100u64 {
        let n = 3 + (case % 13) as usize;
        let marginals: Vec<f64> = (0..n).map(|j| ((case * 7 + j as u64 * 13) % 20) as f64 / 20.0).collect();
        let dist = ProductDistribution::new(marginals).unwrap();
        let class = ConceptClass::projections(n).unwrap();
        let (a, b) = (ConceptId::projection(1 + case as usize % n), ConceptId::projection(1 + (case as usize * 5 + 1) % n));
        let exact = disagreement_exact_projections(&dist, a, b).unwrap();
        let mc = disagreement_mc(&class, &dist, a, b, trials, 0.05, RngSeed::new(77, case)).unwrap();
        inside += usize::from(mc.contains(exact));
    }
    assert!(inside >= 95, "{inside}/100 within the interval");
}

#[test]
fn small_cover_size_is_two_on_the_grid() {
    for n in [4, 16, 64, 256, 1024, 4096] {
        for eps in [0.01, 0.05, 0.2] {
            for i in [1, n / 2, n] {
                let dist = ProductDistribution::pne(n, eps, i).unwrap();
                let cover = greedy_packing_cover(&ProjectionMetric::new(&dist), 2.0 * eps).unwrap();
                assert_eq!(cover.len(), 2, "n={n} eps={eps} i={i}");
            }
        }
    }
}

#[test]
fn sauer_bound_below_estimate() {
    for k in 1..=60u64 {
        for d in 1..=20u64.min(k) {
            let exact: BigUint = sauer_bound(k, d);
            let estimate = sauer_estimate(k, d).unwrap();
            assert!(exact.to_f64().unwrap() <= estimate, "K={k} d={d}");
        }
    }
}
