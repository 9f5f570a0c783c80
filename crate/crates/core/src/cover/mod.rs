//! Directional α-covers.
//!
//! A set `C` is an α-inner-cover of a target `T` when every `x ∈ T` has some
//! `c ∈ C` with `ρ(x, c) ≤ α`, and an α-outer-cover when `ρ(c, x) ≤ α`.
//! Every constructor here counts the distance entries it reads; the counts
//! are part of the returned [`CoverStats`].

mod bucket;

use crate::dimension::log_star;
use crate::setcover;
use crate::space::{Direction, DistanceMatrix};
use bucket::BucketQueue;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CoverError {
    #[error("candidate set is empty but the target is not")]
    EmptyCandidates,
    #[error("point {point} has no candidate within radius {radius}")]
    Uncoverable { point: usize, radius: f64 },
    #[error("radius must be a non-negative number, got {0}")]
    InvalidRadius(f64),
    #[error("epsilon must lie in (0, 1/2], got {0}")]
    InvalidEpsilon(f64),
    #[error("covering-constant estimate must be finite and at least 2, got {0}")]
    InvalidLambda(f64),
    #[error("point id {id} out of range for a space of {n} points")]
    PointOutOfRange { id: usize, n: usize },
    #[error("distance ({i}, {j}) is infinite; this construction needs finite distances")]
    InfiniteDistance { i: usize, j: usize },
    #[error("{uncovered} points remain uncovered, at most {allowed} allowed")]
    CoverageShortfall { uncovered: usize, allowed: usize },
    #[error("point {point} ended at distance {distance} from the cover, above radius {radius}")]
    CertificateFailed { point: usize, distance: f64, radius: f64 },
    #[error("exact cover limited to {cap} target points, got {size}")]
    TooLarge { size: usize, cap: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoverKind {
    Arbitrary,
    Greedy,
    GreedyEps,
    Iterated,
    Exact,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverStats {
    pub algorithm: CoverKind,
    /// Selection rounds summed over all greedy passes.
    pub iterations: usize,
    pub distance_evaluations: u64,
    /// Radii of the successive passes (iterated construction only).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub schedule: Vec<f64>,
    /// Iterated construction degenerated into one greedy pass.
    #[serde(default)]
    pub fallback: bool,
    /// The partial-sum guard ended the iterated schedule early.
    #[serde(default)]
    pub guard_triggered: bool,
}

impl CoverStats {
    fn new(algorithm: CoverKind) -> Self {
        Self {
            algorithm,
            iterations: 0,
            distance_evaluations: 0,
            schedule: Vec::new(),
            fallback: false,
            guard_triggered: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cover {
    pub direction: Direction,
    #[serde(with = "crate::serde_inf")]
    pub radius: f64,
    /// Cover points in selection order.
    pub cover_ids: Vec<usize>,
    /// Covered target point → the cover point responsible for it.
    pub assignment: BTreeMap<usize, usize>,
    /// Target points left uncovered (ε-relaxed and arbitrary covers only).
    pub uncovered: Vec<usize>,
    pub stats: CoverStats,
}

impl Cover {
    pub fn len(&self) -> usize {
        self.cover_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cover_ids.is_empty()
    }
}

/// Candidate processing order for [`arbitrary_cover`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArbitraryOrder {
    Ascending,
    Shuffled { seed: u64 },
}

fn normalize<M: DistanceMatrix + ?Sized>(m: &M, ids: &[usize]) -> Result<Vec<usize>, CoverError> {
    let n = m.len();
    if let Some(&id) = ids.iter().find(|&&id| id >= n) {
        return Err(CoverError::PointOutOfRange { id, n });
    }
    let mut v = ids.to_vec();
    v.sort_unstable();
    v.dedup();
    Ok(v)
}

fn check_radius(alpha: f64) -> Result<(), CoverError> {
    if alpha.is_nan() || alpha < 0.0 {
        Err(CoverError::InvalidRadius(alpha))
    } else {
        Ok(())
    }
}

/// Take candidates in a fixed order, keeping each one that covers at least
/// one still-uncovered target point.
///
/// Target points no candidate reaches are returned in `uncovered`.
pub fn arbitrary_cover<M: DistanceMatrix + ?Sized>(
    m: &M,
    target: &[usize],
    candidates: &[usize],
    alpha: f64,
    direction: Direction,
    order: ArbitraryOrder,
) -> Result<Cover, CoverError> {
    check_radius(alpha)?;
    let target = normalize(m, target)?;
    let mut candidates = normalize(m, candidates)?;
    if candidates.is_empty() && !target.is_empty() {
        return Err(CoverError::EmptyCandidates);
    }
    if let ArbitraryOrder::Shuffled { seed } = order {
        candidates.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    }

    let mut stats = CoverStats::new(CoverKind::Arbitrary);
    let mut remaining = target;
    let mut cover_ids = Vec::new();
    let mut assignment = BTreeMap::new();
    for &c in &candidates {
        if remaining.is_empty() {
            break;
        }
        stats.distance_evaluations += remaining.len() as u64;
        let (hit, miss): (Vec<usize>, Vec<usize>) =
            remaining.iter().partition(|&&x| direction.reach(m, c, x) <= alpha);
        if !hit.is_empty() {
            stats.iterations += 1;
            cover_ids.push(c);
            assignment.extend(hit.into_iter().map(|x| (x, c)));
            remaining = miss;
        }
    }
    Ok(Cover { direction, radius: alpha, cover_ids, assignment, uncovered: remaining, stats })
}

/// Greedy α-cover of `target` using centers from `candidates`: repeatedly take
/// the candidate covering the most still-uncovered target points (lowest id
/// on ties) until everything is covered.
///
/// Reads each candidate/target distance once, `|candidates|·|target|` in all.
pub fn greedy_cover<M: DistanceMatrix + ?Sized>(
    m: &M,
    target: &[usize],
    candidates: &[usize],
    alpha: f64,
    direction: Direction,
) -> Result<Cover, CoverError> {
    greedy(m, target, candidates, alpha, direction, None)
}

/// Greedy cover of the subset `subset` using centers drawn from `sample`.
pub fn greedy_cover_subset<M: DistanceMatrix + ?Sized>(
    m: &M,
    sample: &[usize],
    subset: &[usize],
    alpha: f64,
    direction: Direction,
) -> Result<Cover, CoverError> {
    greedy(m, subset, sample, alpha, direction, None)
}

/// Greedy cover that stops once at most `eps·|target|` points remain.
pub fn greedy_cover_eps<M: DistanceMatrix + ?Sized>(
    m: &M,
    target: &[usize],
    candidates: &[usize],
    alpha: f64,
    direction: Direction,
    eps: f64,
) -> Result<Cover, CoverError> {
    if !(eps > 0.0 && eps <= 0.5) {
        return Err(CoverError::InvalidEpsilon(eps));
    }
    greedy(m, target, candidates, alpha, direction, Some(eps))
}

fn greedy<M: DistanceMatrix + ?Sized>(
    m: &M,
    target: &[usize],
    candidates: &[usize],
    alpha: f64,
    direction: Direction,
    eps: Option<f64>,
) -> Result<Cover, CoverError> {
    check_radius(alpha)?;
    let target = normalize(m, target)?;
    let candidates = normalize(m, candidates)?;
    let kind = if eps.is_some() { CoverKind::GreedyEps } else { CoverKind::Greedy };
    let mut stats = CoverStats::new(kind);
    if target.is_empty() {
        return Ok(Cover {
            direction,
            radius: alpha,
            cover_ids: Vec::new(),
            assignment: BTreeMap::new(),
            uncovered: Vec::new(),
            stats,
        });
    }
    if candidates.is_empty() {
        return Err(CoverError::EmptyCandidates);
    }

    // covers[c] = target positions reached by candidate position c; holders is the transpose
    let mut covers: Vec<Vec<usize>> = vec![Vec::new(); candidates.len()];
    let mut holders: Vec<Vec<usize>> = vec![Vec::new(); target.len()];
    for (ci, &c) in candidates.iter().enumerate() {
        for (ti, &x) in target.iter().enumerate() {
            if direction.reach(m, c, x) <= alpha {
                covers[ci].push(ti);
                holders[ti].push(ci);
            }
        }
    }
    stats.distance_evaluations = (candidates.len() * target.len()) as u64;

    if eps.is_none() {
        if let Some(ti) = holders.iter().position(Vec::is_empty) {
            return Err(CoverError::Uncoverable { point: target[ti], radius: alpha });
        }
    }
    let allowed = match eps {
        Some(e) => (e * target.len() as f64).floor() as usize,
        None => 0,
    };

    let counts: Vec<usize> = covers.iter().map(Vec::len).collect();
    let mut queue = BucketQueue::new(&counts);
    let mut covered = vec![false; target.len()];
    let mut remaining = target.len();
    let mut cover_ids = Vec::new();
    let mut assignment = BTreeMap::new();

    while remaining > allowed {
        let Some((ci, _)) = queue.pop_max() else { break };
        stats.iterations += 1;
        let center = candidates[ci];
        cover_ids.push(center);
        for &ti in &covers[ci] {
            if covered[ti] {
                continue;
            }
            covered[ti] = true;
            remaining -= 1;
            assignment.insert(target[ti], center);
            for &other in &holders[ti] {
                queue.decrement(other);
            }
        }
    }
    if remaining > allowed {
        return Err(CoverError::CoverageShortfall { uncovered: remaining, allowed });
    }

    let uncovered = target.iter().zip(&covered).filter(|(_, &c)| !c).map(|(&x, _)| x).collect();
    Ok(Cover { direction, radius: alpha, cover_ids, assignment, uncovered, stats })
}

/// Radii of the refinement passes of [`iterated_cover`].
///
/// Pass `i` uses `diam / 2^⌈log₂(log^(i) n) / log₂ λ⌉`, the radius at which
/// `λ^⌈log₂(diam/α_i)⌉` reaches the `i`-fold logarithm of `n`. Passes stop
/// once the radius reaches `α/3`, once `log^(i) n ≤ 1`, or once the partial
/// sum would exceed `2α/3`. The second component reports whether that last
/// guard fired.
pub fn iterated_schedule(n: usize, diameter: f64, alpha: f64, lambda: f64) -> (Vec<f64>, bool) {
    let mut schedule = Vec::new();
    let mut sum = 0.0;
    let mut level = n as f64;
    loop {
        level = level.log2();
        if !(level > 1.0) {
            return (schedule, false);
        }
        let exponent = (level.log2() / lambda.log2()).ceil();
        let radius = diameter / exponent.exp2();
        if radius >= alpha / 3.0 {
            return (schedule, false);
        }
        if sum + radius > 2.0 * alpha / 3.0 {
            return (schedule, true);
        }
        sum += radius;
        schedule.push(radius);
    }
}

/// Cover built by repeated greedy passes at growing radii.
///
/// The first pass covers `target` at the smallest scheduled radius, each
/// later pass covers the previous cover points, and a final pass uses the
/// leftover radius `α − Σ αᵢ`. Chained triangle inequalities keep every
/// target point within `α` of the final cover; the assignment is recomputed
/// against the final cover and checked point by point rather than inferred.
///
/// When the schedule is empty the result is a single [`greedy_cover`] pass
/// with `stats.fallback` set.
pub fn iterated_cover<M: DistanceMatrix + ?Sized>(
    m: &M,
    target: &[usize],
    candidates: &[usize],
    alpha: f64,
    direction: Direction,
    lambda: f64,
) -> Result<Cover, CoverError> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(CoverError::InvalidRadius(alpha));
    }
    if !(lambda >= 2.0 && lambda.is_finite()) {
        return Err(CoverError::InvalidLambda(lambda));
    }
    let target = normalize(m, target)?;
    let candidates = normalize(m, candidates)?;
    let mut sample = target.clone();
    sample.extend_from_slice(&candidates);
    sample.sort_unstable();
    sample.dedup();

    let mut diameter: f64 = 0.0;
    for &i in &sample {
        for &j in &sample {
            let d = m.dist(i, j);
            if d.is_infinite() {
                return Err(CoverError::InfiniteDistance { i, j });
            }
            diameter = diameter.max(d);
        }
    }

    let (schedule, guard_triggered) = iterated_schedule(sample.len(), diameter, alpha, lambda);
    if schedule.is_empty() {
        let mut cover = greedy(m, &target, &candidates, alpha, direction, None)?;
        cover.stats.algorithm = CoverKind::Iterated;
        cover.stats.fallback = true;
        cover.stats.guard_triggered = guard_triggered;
        cover.stats.schedule = vec![alpha];
        return Ok(cover);
    }

    let mut stats = CoverStats::new(CoverKind::Iterated);
    stats.guard_triggered = guard_triggered;
    let mut working = target.clone();
    let mut last_order = Vec::new();
    let final_radius = alpha - schedule.iter().sum::<f64>();
    for &radius in schedule.iter().chain(std::iter::once(&final_radius)) {
        let pass = greedy(m, &working, &candidates, radius, direction, None)?;
        stats.iterations += pass.stats.iterations;
        stats.distance_evaluations += pass.stats.distance_evaluations;
        stats.schedule.push(radius);
        last_order = pass.cover_ids.clone();
        working = pass.cover_ids;
        working.sort_unstable();
    }

    let mut assignment = BTreeMap::new();
    for &x in &target {
        let mut best = (f64::INFINITY, usize::MAX);
        for &c in &working {
            let d = direction.reach(m, c, x);
            if d < best.0 || (d == best.0 && c < best.1) {
                best = (d, c);
            }
        }
        stats.distance_evaluations += working.len() as u64;
        if best.0 > alpha {
            return Err(CoverError::CertificateFailed { point: x, distance: best.0, radius: alpha });
        }
        assignment.insert(x, best.1);
    }

    Ok(Cover {
        direction,
        radius: alpha,
        cover_ids: last_order,
        assignment,
        uncovered: Vec::new(),
        stats,
    })
}

/// Upper bound on distance reads of [`iterated_cover`] over `n` sample points.
pub fn iterated_evaluation_budget(n: usize) -> u64 {
    let n = n as u64;
    n * n * (log_star(n as f64) as u64 + 1)
}

/// Minimum-cardinality α-cover by exhaustive search. Exponential; limited to
/// `cap` target points (and never more than 32).
pub fn exact_minimum_cover<M: DistanceMatrix + ?Sized>(
    m: &M,
    target: &[usize],
    candidates: &[usize],
    alpha: f64,
    direction: Direction,
    cap: usize,
) -> Result<Cover, CoverError> {
    check_radius(alpha)?;
    let target = normalize(m, target)?;
    let candidates = normalize(m, candidates)?;
    let cap = cap.min(setcover::MAX_BITS);
    if target.len() > cap {
        return Err(CoverError::TooLarge { size: target.len(), cap });
    }
    if candidates.is_empty() && !target.is_empty() {
        return Err(CoverError::EmptyCandidates);
    }
    let mut stats = CoverStats::new(CoverKind::Exact);
    let masks: Vec<u32> = candidates
        .iter()
        .map(|&c| {
            target
                .iter()
                .enumerate()
                .filter(|(_, &x)| direction.reach(m, c, x) <= alpha)
                .fold(0u32, |mask, (ti, _)| mask | 1 << ti)
        })
        .collect();
    stats.distance_evaluations = (candidates.len() * target.len()) as u64;
    let universe = if target.is_empty() { 0 } else { u32::MAX >> (32 - target.len()) };
    let chosen = setcover::min_cover(universe, &masks).ok_or_else(|| {
        let missing = (0..target.len()).find(|&ti| masks.iter().all(|mk| mk >> ti & 1 == 0)).unwrap_or(0);
        CoverError::Uncoverable { point: target[missing], radius: alpha }
    })?;
    stats.iterations = chosen.len();

    let mut assignment = BTreeMap::new();
    for &s in &chosen {
        for (ti, &x) in target.iter().enumerate() {
            if masks[s] >> ti & 1 == 1 {
                assignment.entry(x).or_insert(candidates[s]);
            }
        }
    }
    Ok(Cover {
        direction,
        radius: alpha,
        cover_ids: chosen.into_iter().map(|s| candidates[s]).collect(),
        assignment,
        uncovered: Vec::new(),
        stats,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CoverViolation {
    DistanceExceeded {
        point: usize,
        center: usize,
        #[serde(with = "crate::serde_inf")]
        distance: f64,
    },
    CenterNotInCover { point: usize, center: usize },
    AssignedAndUncovered { point: usize },
    Unaccounted { point: usize },
    NotInTarget { point: usize },
    OutOfRange { point: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverVerification {
    pub ok: bool,
    pub violations: Vec<CoverViolation>,
}

/// Independent replay of a cover's claims against the distance matrix.
pub fn verify_cover<M: DistanceMatrix + ?Sized>(
    m: &M,
    cover: &Cover,
    target: &[usize],
    alpha: f64,
    direction: Direction,
) -> CoverVerification {
    let n = m.len();
    let mut violations = Vec::new();
    let centers: std::collections::BTreeSet<usize> = cover.cover_ids.iter().copied().collect();
    let target_set: std::collections::BTreeSet<usize> = target.iter().copied().collect();
    let uncovered: std::collections::BTreeSet<usize> = cover.uncovered.iter().copied().collect();

    for (&point, &center) in &cover.assignment {
        if point >= n || center >= n {
            violations.push(CoverViolation::OutOfRange { point: point.max(center) });
            continue;
        }
        if !centers.contains(&center) {
            violations.push(CoverViolation::CenterNotInCover { point, center });
        }
        let distance = direction.reach(m, center, point);
        if !(distance <= alpha) {
            violations.push(CoverViolation::DistanceExceeded { point, center, distance });
        }
        if uncovered.contains(&point) {
            violations.push(CoverViolation::AssignedAndUncovered { point });
        }
        if !target_set.contains(&point) {
            violations.push(CoverViolation::NotInTarget { point });
        }
    }
    for &point in &uncovered {
        if !target_set.contains(&point) {
            violations.push(CoverViolation::NotInTarget { point });
        }
    }
    for &point in &target_set {
        if !cover.assignment.contains_key(&point) && !uncovered.contains(&point) {
            violations.push(CoverViolation::Unaccounted { point });
        }
    }
    CoverVerification { ok: violations.is_empty(), violations }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{Mode, QuasiMetric};

    fn line(n: usize) -> QuasiMetric {
        let edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1, 1.0)).collect();
        QuasiMetric::from_digraph(n, &edges, Mode::Relaxed).unwrap()
    }

    fn cycle(n: usize) -> QuasiMetric {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n, 1.0)).collect();
        QuasiMetric::from_digraph(n, &edges, Mode::Strict).unwrap()
    }

    fn all(n: usize) -> Vec<usize> {
        (0..n).collect()
    }

    /// Smallest cover size by enumerating candidate subsets in size order.
    fn brute_min_cover(m: &QuasiMetric, alpha: f64, direction: Direction) -> usize {
        let n = m.len();
        (0u32..1 << n)
            .filter(|pick| {
                (0..n).all(|x| (0..n).any(|c| pick >> c & 1 == 1 && direction.reach(m, c, x) <= alpha))
            })
            .map(|pick| pick.count_ones() as usize)
            .min()
            .unwrap()
    }

    #[test]
    fn arbitrary_cover_on_the_directed_line_takes_every_point() {
        let qm = line(8);
        let cover = arbitrary_cover(&qm, &all(8), &all(8), 1.0, Direction::Inner, ArbitraryOrder::Ascending).unwrap();
        assert_eq!(cover.cover_ids, all(8));
        assert!(cover.uncovered.is_empty());
        assert!(verify_cover(&qm, &cover, &all(8), 1.0, Direction::Inner).ok);
    }

    #[test]
    fn arbitrary_cover_trivial_cases() {
        let qm = cycle(5);
        let single = arbitrary_cover(&qm, &[3], &[3], 0.0, Direction::Outer, ArbitraryOrder::Ascending).unwrap();
        assert_eq!(single.cover_ids, vec![3]);
        let wide = arbitrary_cover(&qm, &all(5), &all(5), 4.0, Direction::Outer, ArbitraryOrder::Ascending).unwrap();
        assert_eq!(wide.cover_ids, vec![0]);
        assert_eq!(
            arbitrary_cover(&qm, &[1], &[], 1.0, Direction::Outer, ArbitraryOrder::Ascending),
            Err(CoverError::EmptyCandidates)
        );
        let shuffled = arbitrary_cover(&qm, &all(5), &all(5), 1.0, Direction::Outer, ArbitraryOrder::Shuffled { seed: 7 }).unwrap();
        assert!(verify_cover(&qm, &shuffled, &all(5), 1.0, Direction::Outer).ok);
    }

    #[test]
    fn arbitrary_cover_reports_unreachable_residual() {
        let qm = line(4);
        let cover = arbitrary_cover(&qm, &[0, 3], &[1], 5.0, Direction::Outer, ArbitraryOrder::Ascending).unwrap();
        assert_eq!(cover.uncovered, vec![0]);
        assert_eq!(cover.assignment.get(&3), Some(&1));
    }

    #[test]
    fn greedy_cover_on_the_directed_line_is_optimal() {
        let qm = line(8);
        let cover = greedy_cover(&qm, &all(8), &all(8), 1.0, Direction::Inner).unwrap();
        assert_eq!(cover.len(), brute_min_cover(&qm, 1.0, Direction::Inner));
        assert_eq!(cover.cover_ids, vec![1, 3, 5, 7]);
        assert!(cover.stats.distance_evaluations <= 64);
        assert!(verify_cover(&qm, &cover, &all(8), 1.0, Direction::Inner).ok);
    }

    #[test]
    fn greedy_cover_with_radius_at_the_diameter() {
        let qm = cycle(6);
        let cover = greedy_cover(&qm, &all(6), &all(6), 5.0, Direction::Outer).unwrap();
        assert_eq!(cover.cover_ids, vec![0]);
    }

    #[test]
    fn greedy_reports_uncoverable_point() {
        let qm = line(4);
        let err = greedy_cover(&qm, &all(4), &[1, 2], 1.0, Direction::Outer).unwrap_err();
        assert_eq!(err, CoverError::Uncoverable { point: 0, radius: 1.0 });
        assert!(matches!(greedy_cover(&qm, &[0], &[0], -1.0, Direction::Outer), Err(CoverError::InvalidRadius(_))));
        assert!(matches!(greedy_cover(&qm, &[9], &[0], 1.0, Direction::Outer), Err(CoverError::PointOutOfRange { id: 9, n: 4 })));
    }

    #[test]
    fn subset_cover_examples() {
        let qm = cycle(8);
        let sub = greedy_cover_subset(&qm, &all(8), &[2, 3], 1.0, Direction::Outer).unwrap();
        assert_eq!(sub.cover_ids, vec![2]);
        let one = greedy_cover_subset(&qm, &all(8), &[5], 0.0, Direction::Inner).unwrap();
        assert_eq!(one.cover_ids, vec![5]);
        let same = greedy_cover_subset(&qm, &all(8), &all(8), 2.0, Direction::Inner).unwrap();
        assert_eq!(same, greedy_cover(&qm, &all(8), &all(8), 2.0, Direction::Inner).unwrap());
    }

    #[test]
    fn eps_cover_stops_early() {
        let qm = line(8);
        let cover = greedy_cover_eps(&qm, &all(8), &all(8), 1.0, Direction::Inner, 0.5).unwrap();
        assert_eq!(cover.cover_ids, vec![1, 3]);
        assert_eq!(cover.uncovered, vec![4, 5, 6, 7]);
        assert!(verify_cover(&qm, &cover, &all(8), 1.0, Direction::Inner).ok);

        let tiny = greedy_cover_eps(&qm, &all(8), &all(8), 1.0, Direction::Inner, 0.1).unwrap();
        let full = greedy_cover(&qm, &all(8), &all(8), 1.0, Direction::Inner).unwrap();
        assert_eq!(tiny.cover_ids, full.cover_ids);

        for bad in [0.0, 0.6, f64::NAN] {
            assert!(matches!(
                greedy_cover_eps(&qm, &all(8), &all(8), 1.0, Direction::Inner, bad),
                Err(CoverError::InvalidEpsilon(_))
            ));
        }
    }

    #[test]
    fn eps_cover_tolerates_unreachable_points_within_budget() {
        let qm = line(4);
        let cover = greedy_cover_eps(&qm, &all(4), &[1, 2, 3], 1.0, Direction::Outer, 0.25).unwrap();
        assert_eq!(cover.uncovered, vec![0]);
        let err = greedy_cover_eps(&qm, &all(4), &[3], 1.0, Direction::Outer, 0.5).unwrap_err();
        assert!(matches!(err, CoverError::CoverageShortfall { uncovered: 3, allowed: 2 }));
    }

    #[test]
    fn iterated_falls_back_on_small_inputs() {
        let qm = cycle(8);
        let it = iterated_cover(&qm, &all(8), &all(8), 4.0, Direction::Inner, 2.0).unwrap();
        let gr = greedy_cover(&qm, &all(8), &all(8), 4.0, Direction::Inner).unwrap();
        assert!(it.stats.fallback);
        assert_eq!(it.cover_ids, gr.cover_ids);
        assert!(verify_cover(&qm, &it, &all(8), 4.0, Direction::Inner).ok);
    }

    #[test]
    fn iterated_rejects_bad_parameters() {
        let qm = cycle(4);
        assert!(matches!(iterated_cover(&qm, &all(4), &all(4), 1.0, Direction::Inner, 1.5), Err(CoverError::InvalidLambda(_))));
        assert!(matches!(iterated_cover(&qm, &all(4), &all(4), 0.0, Direction::Inner, 2.0), Err(CoverError::InvalidRadius(_))));
        let l = line(3);
        assert!(matches!(iterated_cover(&l, &all(3), &all(3), 1.0, Direction::Inner, 2.0), Err(CoverError::InfiniteDistance { .. })));
    }

    #[test]
    fn schedule_radii_follow_the_defining_equation() {
        // n = 1024: log n = 10, log log n ≈ 3.32, log^(3) n ≈ 1.73, log^(4) n < 1,
        // so with λ = 2 the exponents are ⌈log2 10⌉ = 4, ⌈log2 3.32⌉ = 2, ⌈log2 1.73⌉ = 1
        let (s, guard) = iterated_schedule(1024, 64.0, 60.0, 2.0);
        assert_eq!(s, vec![4.0, 16.0]);
        assert!(!guard);
        // 16 is not below α/3 = 16
        let (s, _) = iterated_schedule(1024, 64.0, 48.0, 2.0);
        assert_eq!(s, vec![4.0]);
        let (s, _) = iterated_schedule(1024, 64.0, 12.0, 2.0);
        assert!(s.is_empty());
        let (s, _) = iterated_schedule(8, 7.0, 4.0, 2.0);
        assert!(s.is_empty());
    }

    #[test]
    fn schedule_guard_caps_partial_sum() {
        // distinct exponents give a geometric series that never reaches 2α/3
        let (s, guard) = iterated_schedule(1 << 16, 1024.0, 1600.0, 2.0);
        assert_eq!(s, vec![64.0, 256.0, 512.0]);
        assert!(!guard);
        // a large λ repeats the exponent 1, so radii 512 pile up: the third would pass 2α/3
        let (s, guard) = iterated_schedule(1 << 16, 1024.0, 2000.0, 1000.0);
        assert_eq!(s, vec![512.0, 512.0]);
        assert!(guard);
    }

    #[test]
    fn exact_cover_matches_enumeration() {
        let qm = line(8);
        let exact = exact_minimum_cover(&qm, &all(8), &all(8), 1.0, Direction::Inner, 12).unwrap();
        assert_eq!(exact.len(), 4);
        assert!(verify_cover(&qm, &exact, &all(8), 1.0, Direction::Inner).ok);
        assert!(matches!(
            exact_minimum_cover(&line(14), &all(14), &all(14), 1.0, Direction::Inner, 12),
            Err(CoverError::TooLarge { size: 14, cap: 12 })
        ));
    }

    #[test]
    fn verify_flags_forged_assignments() {
        let qm = line(8);
        let mut cover = greedy_cover(&qm, &all(8), &all(8), 1.0, Direction::Inner).unwrap();
        cover.assignment.insert(0, 7);
        let report = verify_cover(&qm, &cover, &all(8), 1.0, Direction::Inner);
        assert!(!report.ok);
        assert_eq!(
            report.violations,
            vec![CoverViolation::DistanceExceeded { point: 0, center: 7, distance: 7.0 }]
        );

        let mut partial = greedy_cover(&qm, &all(8), &all(8), 1.0, Direction::Inner).unwrap();
        partial.assignment.remove(&2);
        partial.uncovered.push(3);
        let report = verify_cover(&qm, &partial, &all(8), 1.0, Direction::Inner);
        assert!(report.violations.contains(&CoverViolation::Unaccounted { point: 2 }));
        assert!(report.violations.contains(&CoverViolation::AssignedAndUncovered { point: 3 }));
    }

    #[test]
    fn budget_formula() {
        assert_eq!(iterated_evaluation_budget(16), 16 * 16 * 4);
        assert_eq!(iterated_evaluation_budget(1000), 1000 * 1000 * 5);
    }
}
