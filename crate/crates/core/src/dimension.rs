//! Covering and packing constants of finite spaces.
//!
//! All constants are maxima over balls `B_r(x)`. A ball only changes
//! contents at radii realized as distances from its center, so the search
//! runs over every center and every finite distance in its row (outer) or
//! column (inner). Half-radius covering balls are centered at points of the
//! space itself.

use crate::cover::greedy_cover;
use crate::setcover;
use crate::space::{Direction, DistanceMatrix};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default point limit for the exhaustive methods.
pub const DEFAULT_EXACT_CAP: usize = 16;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DimensionError {
    #[error("space has no points")]
    Empty,
    #[error("exact method limited to {cap} points, space has {n}")]
    TooLarge { n: usize, cap: usize },
    #[error("distance matrix is not symmetric at ({i}, {j})")]
    Asymmetric { i: usize, j: usize },
    #[error("logarithm of non-positive value {0}")]
    LogDomain(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Greedy set cover per ball; an upper bound on the exact constant.
    Greedy,
    /// Exhaustive minimum cover (or maximum packing) per ball.
    Exact,
}

impl std::str::FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "greedy" => Ok(Method::Greedy),
            "exact" => Ok(Method::Exact),
            other => Err(format!("unknown method `{other}` (expected greedy|exact)")),
        }
    }
}

/// Which balls the maximum was taken over.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Scope {
    /// Every center and every critical radius.
    Full,
    /// A random subset of centers over a geometric grid of radii. The value
    /// is then a maximum over those balls only.
    Sampled { centers: usize, radii: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BallCount {
    pub center: usize,
    pub radius: f64,
    pub ball_size: usize,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub center: usize,
    pub radius: f64,
    /// Half-radius ball centers covering the witness ball, or the packed
    /// points for the density constant.
    pub points: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstantEstimate {
    pub value: usize,
    pub method: Method,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub direction: Option<Direction>,
    pub witness: Witness,
    /// Density only, greedy only: size of a maximal packing found greedily.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lower_bound: Option<usize>,
    pub scope: Scope,
    pub per_ball: Vec<BallCount>,
}

struct BallResult {
    center: usize,
    radius: f64,
    ball_size: usize,
    points: Vec<usize>,
    lower: usize,
}

/// `λ^out` (outer) or `λ^inn` (inner), with the default exact cap.
pub fn directional_constant<M: DistanceMatrix + Sync + ?Sized>(
    m: &M,
    direction: Direction,
    method: Method,
) -> Result<ConstantEstimate, DimensionError> {
    directional_constant_capped(m, direction, method, DEFAULT_EXACT_CAP)
}

pub fn directional_constant_capped<M: DistanceMatrix + Sync + ?Sized>(
    m: &M,
    direction: Direction,
    method: Method,
    cap: usize,
) -> Result<ConstantEstimate, DimensionError> {
    check_size(m, method, cap)?;
    let balls = all_balls(m, direction);
    let results = covering_counts(m, direction, method, &balls);
    Ok(summarize(results, method, Some(direction), Scope::Full, false))
}

/// Greedy directional constant over `centers` random centers and the radii
/// `diam/2^j` down to the smallest positive distance.
///
/// For spaces too large for the full sweep. Deterministic per `seed`.
pub fn directional_constant_sampled<M: DistanceMatrix + Sync + ?Sized>(
    m: &M,
    direction: Direction,
    centers: usize,
    seed: u64,
) -> Result<ConstantEstimate, DimensionError> {
    let n = m.len();
    if n == 0 {
        return Err(DimensionError::Empty);
    }
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for i in 0..n {
        for j in 0..n {
            let d = m.dist(i, j);
            if d.is_finite() && d > 0.0 {
                lo = lo.min(d);
                hi = hi.max(d);
            }
        }
    }
    let mut radii = Vec::new();
    let mut r = hi;
    while r >= lo && r > 0.0 {
        radii.push(r);
        r /= 2.0;
    }
    if radii.is_empty() {
        radii.push(0.0);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picked = sample(&mut rng, n, centers.min(n)).into_vec();
    picked.sort_unstable();
    let balls: Vec<(usize, f64)> =
        picked.iter().flat_map(|&c| radii.iter().map(move |&r| (c, r))).collect();
    let scope = Scope::Sampled { centers: picked.len(), radii: radii.len(), seed };
    let results = covering_counts(m, direction, Method::Greedy, &balls);
    Ok(summarize(results, Method::Greedy, Some(direction), scope, false))
}

/// Doubling constant `λ` of a symmetric space.
pub fn doubling_constant<M: DistanceMatrix + Sync + ?Sized>(
    m: &M,
    method: Method,
) -> Result<ConstantEstimate, DimensionError> {
    doubling_constant_capped(m, method, DEFAULT_EXACT_CAP)
}

pub fn doubling_constant_capped<M: DistanceMatrix + Sync + ?Sized>(
    m: &M,
    method: Method,
    cap: usize,
) -> Result<ConstantEstimate, DimensionError> {
    check_symmetric(m)?;
    check_size(m, method, cap)?;
    let balls = all_balls(m, Direction::Outer);
    let results = covering_counts(m, Direction::Outer, method, &balls);
    Ok(summarize(results, method, None, Scope::Full, false))
}

/// Density constant `μ` of a symmetric space: the most points at mutual
/// distance at least `r/2` inside any ball of radius `r`.
///
/// The greedy method reports a clique-partition upper bound as `value` and
/// a greedy maximal packing as `lower_bound`.
pub fn density_constant<M: DistanceMatrix + Sync + ?Sized>(
    m: &M,
    method: Method,
) -> Result<ConstantEstimate, DimensionError> {
    density_constant_capped(m, method, DEFAULT_EXACT_CAP)
}

pub fn density_constant_capped<M: DistanceMatrix + Sync + ?Sized>(
    m: &M,
    method: Method,
    cap: usize,
) -> Result<ConstantEstimate, DimensionError> {
    check_symmetric(m)?;
    check_size(m, method, cap)?;
    let balls = all_balls(m, Direction::Outer);
    let results: Vec<BallResult> = balls
        .par_iter()
        .map(|&(center, radius)| {
            let ball = crate::space::ball(m, center, radius, Direction::Outer);
            let conflict = |a: usize, b: usize| m.dist(ball[a], ball[b]) < radius / 2.0;
            let (points, lower) = match method {
                Method::Exact => {
                    let masks: Vec<u32> = (0..ball.len())
                        .map(|a| {
                            (0..ball.len())
                                .filter(|&b| b != a && conflict(a, b))
                                .fold(0, |mask, b| mask | 1 << b)
                        })
                        .collect();
                    let all = if ball.len() == 32 { u32::MAX } else { (1u32 << ball.len()) - 1 };
                    let packed: Vec<usize> =
                        setcover::max_packing(all, &masks).into_iter().map(|a| ball[a]).collect();
                    let size = packed.len();
                    (packed, size)
                }
                Method::Greedy => {
                    let mut packed: Vec<usize> = Vec::new();
                    let mut cliques: Vec<Vec<usize>> = Vec::new();
                    for a in 0..ball.len() {
                        if packed.iter().all(|&b| !conflict(a, b)) {
                            packed.push(a);
                        }
                        match cliques.iter_mut().find(|c| c.iter().all(|&b| conflict(a, b))) {
                            Some(c) => c.push(a),
                            None => cliques.push(vec![a]),
                        }
                    }
                    // one representative per clique stands in for the upper bound
                    let reps = cliques.iter().map(|c| ball[c[0]]).collect();
                    (reps, packed.len())
                }
            };
            BallResult { center, radius, ball_size: ball.len(), points, lower }
        })
        .collect();
    Ok(summarize(results, method, None, Scope::Full, method == Method::Greedy))
}

fn check_size<M: DistanceMatrix + ?Sized>(m: &M, method: Method, cap: usize) -> Result<(), DimensionError> {
    let n = m.len();
    if n == 0 {
        return Err(DimensionError::Empty);
    }
    let cap = cap.min(setcover::MAX_BITS);
    if method == Method::Exact && n > cap {
        return Err(DimensionError::TooLarge { n, cap });
    }
    Ok(())
}

fn check_symmetric<M: DistanceMatrix + ?Sized>(m: &M) -> Result<(), DimensionError> {
    let n = m.len();
    for i in 0..n {
        for j in i + 1..n {
            if m.dist(i, j) != m.dist(j, i) {
                return Err(DimensionError::Asymmetric { i, j });
            }
        }
    }
    Ok(())
}

/// Every center paired with each distinct finite distance it sees.
fn all_balls<M: DistanceMatrix + ?Sized>(m: &M, direction: Direction) -> Vec<(usize, f64)> {
    let n = m.len();
    let mut balls = Vec::new();
    for c in 0..n {
        let mut radii: Vec<f64> =
            (0..n).map(|y| direction.reach(m, c, y)).filter(|d| d.is_finite()).collect();
        radii.sort_by(f64::total_cmp);
        radii.dedup();
        balls.extend(radii.into_iter().map(|r| (c, r)));
    }
    balls
}

fn covering_counts<M: DistanceMatrix + Sync + ?Sized>(
    m: &M,
    direction: Direction,
    method: Method,
    balls: &[(usize, f64)],
) -> Vec<BallResult> {
    let everyone: Vec<usize> = (0..m.len()).collect();
    balls
        .par_iter()
        .map(|&(center, radius)| {
            let ball = crate::space::ball(m, center, radius, direction);
            let half = radius / 2.0;
            let points = match method {
                Method::Greedy => {
                    greedy_cover(m, &ball, &everyone, half, direction)
                        .expect("every point covers itself at radius zero")
                        .cover_ids
                }
                Method::Exact => {
                    let masks: Vec<u32> = everyone
                        .iter()
                        .map(|&y| {
                            ball.iter()
                                .enumerate()
                                .filter(|(_, &x)| direction.reach(m, y, x) <= half)
                                .fold(0u32, |mask, (b, _)| mask | 1 << b)
                        })
                        .collect();
                    let universe = if ball.len() == 32 { u32::MAX } else { (1u32 << ball.len()) - 1 };
                    setcover::min_cover(universe, &masks)
                        .expect("every point covers itself at radius zero")
                }
            };
            let size = points.len();
            BallResult { center, radius, ball_size: ball.len(), points, lower: size }
        })
        .collect()
}

fn summarize(
    results: Vec<BallResult>,
    method: Method,
    direction: Option<Direction>,
    scope: Scope,
    with_lower: bool,
) -> ConstantEstimate {
    let mut best = 0;
    let mut lower = 0;
    for (i, r) in results.iter().enumerate() {
        if r.points.len() > results[best].points.len() {
            best = i;
        }
        lower = lower.max(r.lower);
    }
    let w = &results[best];
    let witness = Witness { center: w.center, radius: w.radius, points: w.points.clone() };
    ConstantEstimate {
        value: w.points.len(),
        method,
        direction,
        witness,
        lower_bound: with_lower.then_some(lower),
        scope,
        per_ball: results
            .iter()
            .map(|r| BallCount { center: r.center, radius: r.radius, ball_size: r.ball_size, count: r.points.len() })
            .collect(),
    }
}

/// `i`-fold base-2 logarithm: `log^(1) x = log₂ x`, `log^(i) x = log₂ log^(i−1) x`.
pub fn log_iter(x: f64, i: u32) -> Result<f64, DimensionError> {
    let mut v = x;
    for _ in 0..i {
        if !(v > 0.0) {
            return Err(DimensionError::LogDomain(v));
        }
        v = v.log2();
    }
    Ok(v)
}

/// Smallest `i` with `log^(i) x ≤ 1`; zero when `x ≤ 1`.
pub fn log_star(x: f64) -> u32 {
    let mut v = x;
    let mut count = 0;
    while v > 1.0 {
        v = v.log2();
        count += 1;
    }
    count
}
