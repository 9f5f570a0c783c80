mod common;

use common::{random_quasi_metric, realized_distances};
use proptest::prelude::*;
use qmc::classifier::{bound_agnostic, CandidateKind};
use qmc::cover::{exact_minimum_cover, iterated_evaluation_budget};
use qmc::fixtures::{gen_line, gen_random_bounded};
use qmc::{
    arbitrary_cover, bound_consistent, build_classifier, density_constant, directional_constant, doubling_constant,
    greedy_cover, greedy_cover_eps, iterated_cover, margins, to_max_metric, to_min_semimetric, to_sum_metric,
    verify_cover, ArbitraryOrder, ClassifierMode, CoverAlgorithm, Direction, DistanceMatrix, LabeledSample, Method,
    Mode, QuasiMetric, Query,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn instance(seed: u64, lo: usize, hi: usize) -> QuasiMetric {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(lo..=hi);
    let density = rng.gen_range(0.05..0.6);
    random_quasi_metric(&mut rng, n, density, 9)
}

fn pick_radius(m: &QuasiMetric, seed: u64) -> f64 {
    let radii = realized_distances(m);
    radii[(seed as usize) % radii.len()]
}

fn direction(flag: bool) -> Direction {
    if flag {
        Direction::Outer
    } else {
        Direction::Inner
    }
}

/// Random labels with both classes present.
fn sample<'a>(m: &'a QuasiMetric, seed: u64) -> LabeledSample<'a> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let n = m.len();
    let mut pos = vec![0];
    let mut neg = vec![1];
    for x in 2..n {
        if rng.gen_bool(0.5) {
            pos.push(x);
        } else {
            neg.push(x);
        }
    }
    LabeledSample::new(m, pos, neg).unwrap()
}

fn symmetric_copy<M: DistanceMatrix>(s: &M) -> QuasiMetric {
    let rows = (0..s.len()).map(|i| (0..s.len()).map(|j| s.dist(i, j)).collect()).collect();
    QuasiMetric::from_matrix(rows, Mode::Strict).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn every_cover_verifies(seed in any::<u64>(), outer in any::<bool>(), pick in any::<u64>()) {
        let m = instance(seed, 2, 14);
        let n = m.len();
        let all: Vec<usize> = (0..n).collect();
        let d = direction(outer);
        let alpha = pick_radius(&m, pick);
        let half: Vec<usize> = (0..n).filter(|x| x % 2 == 0).collect();
        let covers = [
            greedy_cover(&m, &all, &all, alpha, d).unwrap(),
            arbitrary_cover(&m, &all, &all, alpha, d, ArbitraryOrder::Shuffled { seed: pick }).unwrap(),
            greedy_cover_eps(&m, &all, &all, alpha, d, 0.25).unwrap(),
            iterated_cover(&m, &all, &all, alpha, d, 2.0).unwrap(),
            greedy_cover(&m, &half, &all, alpha, d).unwrap(),
        ];
        for (i, c) in covers.iter().enumerate() {
            let target = if i == 4 { &half } else { &all };
            let report = verify_cover(&m, c, target, alpha, d);
            prop_assert!(report.ok, "cover {} failed: {:?}", i, report.violations);
        }
        prop_assert!(covers[0].stats.distance_evaluations <= (n * n) as u64);
        prop_assert!(covers[3].stats.distance_evaluations <= iterated_evaluation_budget(n));
        prop_assert!(covers[2].uncovered.len() as f64 <= 0.25 * n as f64);
    }

    #[test]
    fn greedy_respects_transpose_and_scaling(seed in any::<u64>(), outer in any::<bool>(), pick in any::<u64>(), e in -3i32..4) {
        let m = instance(seed, 2, 14);
        let all: Vec<usize> = (0..m.len()).collect();
        let d = direction(outer);
        let alpha = pick_radius(&m, pick);
        let base = greedy_cover(&m, &all, &all, alpha, d).unwrap();
        let flipped = greedy_cover(&m.transpose(), &all, &all, alpha, d.flip()).unwrap();
        prop_assert_eq!(&base.cover_ids, &flipped.cover_ids);
        let factor = (e as f64).exp2();
        let scaled = greedy_cover(&m.scaled(factor), &all, &all, alpha * factor, d).unwrap();
        prop_assert_eq!(&base.cover_ids, &scaled.cover_ids);
    }

    #[test]
    fn greedy_within_log_factor_of_optimum(seed in any::<u64>(), outer in any::<bool>(), pick in any::<u64>()) {
        let m = instance(seed, 2, 12);
        let n = m.len();
        let all: Vec<usize> = (0..n).collect();
        let d = direction(outer);
        let alpha = pick_radius(&m, pick);
        let g = greedy_cover(&m, &all, &all, alpha, d).unwrap().len();
        let opt = exact_minimum_cover(&m, &all, &all, alpha, d, 12).unwrap().len();
        prop_assert!(opt <= g);
        prop_assert!(g <= ((n as f64).ln().ceil() as usize + 1) * opt);
    }

    #[test]
    fn eps_cover_is_monotone(seed in any::<u64>(), outer in any::<bool>(), pick in any::<u64>(), a in 0.01f64..0.5, b in 0.01f64..0.5) {
        let m = instance(seed, 2, 14);
        let all: Vec<usize> = (0..m.len()).collect();
        let d = direction(outer);
        let alpha = pick_radius(&m, pick);
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let small = greedy_cover_eps(&m, &all, &all, alpha, d, lo).unwrap();
        let large = greedy_cover_eps(&m, &all, &all, alpha, d, hi).unwrap();
        prop_assert!(small.len() >= large.len());
        prop_assert!(small.cover_ids.starts_with(&large.cover_ids));
        if (lo * m.len() as f64) < 1.0 {
            prop_assert_eq!(small.cover_ids, greedy_cover(&m, &all, &all, alpha, d).unwrap().cover_ids);
        }
    }

    #[test]
    fn constants_swap_under_transpose(seed in any::<u64>()) {
        let m = instance(seed, 1, 10);
        let t = m.transpose();
        for method in [Method::Exact, Method::Greedy] {
            let out = directional_constant(&m, Direction::Outer, method).unwrap().value;
            let inn = directional_constant(&m, Direction::Inner, method).unwrap().value;
            prop_assert_eq!(directional_constant(&t, Direction::Inner, method).unwrap().value, out);
            prop_assert_eq!(directional_constant(&t, Direction::Outer, method).unwrap().value, inn);
        }
    }

    #[test]
    fn greedy_constant_brackets_exact(seed in any::<u64>(), outer in any::<bool>()) {
        let m = instance(seed, 1, 10);
        let n = m.len();
        let d = direction(outer);
        let exact = directional_constant(&m, d, Method::Exact).unwrap().value;
        let greedy = directional_constant(&m, d, Method::Greedy).unwrap().value;
        prop_assert!(exact >= 1);
        prop_assert!(exact <= greedy);
        prop_assert!(greedy <= exact * ((n as f64).ln().ceil() as usize + 1));
    }

    #[test]
    fn doubling_is_at_most_density(seed in any::<u64>(), use_min in any::<bool>()) {
        // a maximal r/2-separated subset of a ball is also a cover of it by r/2-balls
        let m = instance(seed, 1, 10);
        let s = if use_min { to_min_semimetric(&m).unwrap() } else { to_max_metric(&m).unwrap() };
        let lambda = doubling_constant(&s, Method::Exact).unwrap().value;
        let mu = density_constant(&s, Method::Exact).unwrap();
        let mu_greedy = density_constant(&s, Method::Greedy).unwrap();
        prop_assert!(lambda <= mu.value);
        prop_assert!(mu_greedy.lower_bound.unwrap() <= mu.value);
        prop_assert!(mu.value <= mu_greedy.value);
    }

    #[test]
    fn symmetrizations_are_ordered_and_metric(seed in any::<u64>()) {
        let m = instance(seed, 2, 14);
        let (mn, mx, sm) = (to_min_semimetric(&m).unwrap(), to_max_metric(&m).unwrap(), to_sum_metric(&m).unwrap());
        for i in 0..m.len() {
            for j in 0..m.len() {
                prop_assert!(mn.dist(i, j) <= m.dist(i, j));
                prop_assert!(m.dist(i, j) <= mx.dist(i, j));
                prop_assert!(mx.dist(i, j) <= sm.dist(i, j));
            }
        }
        prop_assert!(mx.validate(0.0).passed);
        prop_assert!(sm.validate(0.0).passed);
        prop_assert!(mn.validate(0.0).symmetry_failures.is_empty());
    }

    #[test]
    fn min_symmetrization_margin(seed in any::<u64>()) {
        let m = instance(seed, 2, 14);
        let s = sample(&m, seed);
        let original = margins(&s).unwrap();
        let min_space = symmetric_copy(&to_min_semimetric(&m).unwrap());
        let reduced = margins(&LabeledSample::new(&min_space, s.pos().to_vec(), s.neg().to_vec()).unwrap()).unwrap();
        prop_assert_eq!(reduced.rho_pm, original.rho_pm.min(original.rho_mp));
        prop_assert_eq!(reduced.rho_mp, reduced.rho_pm);
    }

    #[test]
    fn consistent_classifier_replays_cleanly(seed in any::<u64>(), e in -2i32..3) {
        let m = instance(seed, 2, 14);
        let s = sample(&m, seed);
        let Ok(h) = build_classifier(&s, CoverAlgorithm::Greedy, ClassifierMode::Consistent) else {
            // every candidate can tie at zero gap on tiny samples
            return Ok(());
        };
        for (x, label) in s.labeled() {
            let p = h.predict(&m, Query::Point(x)).unwrap();
            prop_assert_eq!(p.label, label);
            prop_assert_eq!(p.evaluations, h.k);
        }
        for c in h.candidates.iter().filter(|c| c.threshold.is_some()) {
            prop_assert!(h.k <= c.cover_size);
        }
        let class = if h.cover_label == 1 { s.pos() } else { s.neg() };
        prop_assert!(h.cover.cover_ids.iter().all(|c| class.contains(c)));

        let factor = (e as f64).exp2();
        let scaled = m.scaled(factor);
        let s2 = LabeledSample::new(&scaled, s.pos().to_vec(), s.neg().to_vec()).unwrap();
        let h2 = build_classifier(&s2, CoverAlgorithm::Greedy, ClassifierMode::Consistent).unwrap();
        prop_assert_eq!(h2.kind, h.kind);
        prop_assert_eq!(&h2.cover.cover_ids, &h.cover.cover_ids);
        prop_assert_eq!(h2.threshold, h.threshold * factor);
    }

    #[test]
    fn iterated_classifier_is_consistent(seed in any::<u64>()) {
        let m = instance(seed, 2, 14);
        let s = sample(&m, seed);
        if let Ok(h) = build_classifier(&s, CoverAlgorithm::Iterated { lambda: 2.0 }, ClassifierMode::Consistent) {
            prop_assert_eq!(h.training_errors, 0);
        }
    }

    #[test]
    fn symmetric_spaces_pair_candidates(seed in any::<u64>()) {
        let m = instance(seed, 2, 14);
        let sym = symmetric_copy(&to_max_metric(&m).unwrap());
        let s = sample(&sym, seed);
        let mg = margins(&s).unwrap();
        prop_assert_eq!(mg.rho_pm, mg.rho_mp);
        if let Ok(h) = build_classifier(&s, CoverAlgorithm::Greedy, ClassifierMode::Consistent) {
            let size = |k: CandidateKind| h.candidates.iter().find(|c| c.kind == k).unwrap().cover_size;
            prop_assert_eq!(size(CandidateKind::PosOuter), size(CandidateKind::PosInner));
            prop_assert_eq!(size(CandidateKind::NegInner), size(CandidateKind::NegOuter));
        }
    }

    #[test]
    fn eps_classifier_error_within_budget(seed in any::<u64>(), eps in 0.05f64..0.5) {
        let m = instance(seed, 4, 14);
        let s = sample(&m, seed);
        if let Ok(h) = build_classifier(&s, CoverAlgorithm::Greedy, ClassifierMode::Eps { eps }) {
            let replayed = s.labeled().into_iter().filter(|&(x, l)| h.predict(&m, Query::Point(x)).unwrap().label != l).count();
            prop_assert_eq!(replayed, h.training_errors);
            let class = if h.cover_label == 1 { s.pos().len() } else { s.neg().len() };
            prop_assert!(h.training_errors as f64 <= eps * class as f64);
            let b = h.bound(0.05, qmc::LogBase::Natural).unwrap();
            prop_assert_eq!(b.theorem, 2);
        }
    }

    #[test]
    fn consistent_bound_monotone(n in 3usize..100_000, kf in 0.0f64..1.0, delta in 0.0001f64..0.9999) {
        let k = ((n - 2) as f64 * kf) as usize;
        let b = bound_consistent(n, k, delta).unwrap().raw;
        prop_assert!(b > 0.0);
        prop_assert!(bound_consistent(n, k + 1, delta).unwrap().raw > b);
        prop_assert!(bound_consistent(n + 1, k, delta).unwrap().raw < b);
        prop_assert!(bound_consistent(n, k, delta / 2.0).unwrap().raw > b);
    }

    #[test]
    fn agnostic_bound_monotone(n in 3usize..100_000, kf in 0.0f64..1.0, delta in 0.0001f64..0.9999, e1 in 0.0f64..0.5, e2 in 0.0f64..0.5) {
        let k = ((n - 2) as f64 * kf) as usize;
        let (lo, hi) = if e1 <= e2 { (e1, e2) } else { (e2, e1) };
        let at = |e| bound_agnostic(n, k, delta, e).unwrap();
        prop_assert!(at(0.0).raw >= 0.0);
        prop_assert!(at(hi).value >= at(lo).value);
        prop_assert!(at(0.0).raw <= bound_consistent(n, k, delta).unwrap().raw);
    }
}

#[test]
fn consistent_bound_can_rise_from_two_to_three_points() {
    // with δ close to 1 the log n term dominates at the smallest sizes
    let two = bound_consistent(2, 0, 0.95).unwrap().raw;
    let three = bound_consistent(3, 0, 0.95).unwrap().raw;
    assert!(three > two);
    assert!(bound_consistent(3, 0, 0.5).unwrap().raw < bound_consistent(2, 0, 0.5).unwrap().raw);
}

#[test]
fn line_transpose_swaps_directions() {
    let line = gen_line(9).unwrap().space;
    let t = line.transpose();
    let all: Vec<usize> = (0..9).collect();
    for alpha in [1.0, 2.0, 3.0] {
        for x in 0..9 {
            assert_eq!(t.ball(x, alpha, Direction::Outer), line.ball(x, alpha, Direction::Inner));
        }
        assert_eq!(
            greedy_cover(&t, &all, &all, alpha, Direction::Outer).unwrap().cover_ids,
            greedy_cover(&line, &all, &all, alpha, Direction::Inner).unwrap().cover_ids
        );
    }
}

#[test]
fn random_bounded_meets_its_target() {
    for seed in 0..4 {
        let f = gen_random_bounded(64, 8, seed).unwrap();
        assert!(f.space.validate(0.0).passed);
        for d in [Direction::Outer, Direction::Inner] {
            assert!(directional_constant(&f.space, d, Method::Greedy).unwrap().value <= 8);
        }
    }
}
