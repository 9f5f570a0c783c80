//! Finite quasi-metric spaces backed by a dense distance matrix.

mod apsp;
pub mod io;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

pub use apsp::shortest_path_matrix;

/// Upper limit on the triangle violations kept verbatim in a report.
pub const MAX_RECORDED_VIOLATIONS: usize = 10_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpaceError {
    #[error("distance matrix must have at least one point")]
    Empty,
    #[error("row {row} has {len} entries, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },
    #[error("negative distance {value} at ({i}, {j})")]
    NegativeEntry { i: usize, j: usize, value: f64 },
    #[error("distance at ({i}, {j}) is NaN")]
    NotANumber { i: usize, j: usize },
    #[error("infinite distance at ({i}, {j}) is not allowed in strict mode")]
    InfiniteInStrict { i: usize, j: usize },
    #[error("edge ({u}, {v}) references a vertex outside 0..{n}")]
    VertexOutOfRange { u: usize, v: usize, n: usize },
    #[error("edge ({u}, {v}) has invalid weight {weight}")]
    InvalidWeight { u: usize, v: usize, weight: f64 },
    #[error("vertex {to} is unreachable from {from} (strict mode)")]
    Unreachable { from: usize, to: usize },
    #[error("point id {id} out of range for a space of {n} points")]
    PointOutOfRange { id: usize, n: usize },
    #[error("set argument must be non-empty")]
    EmptySet,
    #[error("query vector has length {got}, expected {expected}")]
    QueryLength { expected: usize, got: usize },
    #[error("query has no {0} distances")]
    MissingQueryDirection(Direction),
    #[error("distinct points {i} and {j} are at distance zero")]
    IdentityViolation { i: usize, j: usize },
}

/// Read-only access to a square distance matrix.
///
/// Implemented by [`QuasiMetric`] and by the symmetric spaces produced in
/// [`crate::transforms`], so covering routines run unchanged over both.
pub trait DistanceMatrix {
    fn len(&self) -> usize;

    /// `ρ(i, j)`; may be `+∞` for relaxed spaces.
    fn dist(&self, i: usize, j: usize) -> f64;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn is_symmetric(&self) -> bool {
        let n = self.len();
        (0..n).all(|i| (i + 1..n).all(|j| self.dist(i, j) == self.dist(j, i)))
    }
}

/// Whether `+∞` (unreachable) entries are permitted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Strict,
    Relaxed,
}

/// Which way a ball or cover reads the distance function.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// Distance measured from the center: `ρ(center, x)`.
    Outer,
    /// Distance measured to the center: `ρ(x, center)`.
    Inner,
}

impl Direction {
    pub fn flip(self) -> Self {
        match self {
            Direction::Outer => Direction::Inner,
            Direction::Inner => Direction::Outer,
        }
    }

    /// The distance that decides whether `center` reaches `point`.
    #[inline]
    pub fn reach<M: DistanceMatrix + ?Sized>(self, m: &M, center: usize, point: usize) -> f64 {
        match self {
            Direction::Outer => m.dist(center, point),
            Direction::Inner => m.dist(point, center),
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Direction::Outer => f.write_str("outer"),
            Direction::Inner => f.write_str("inner"),
        }
    }
}

impl std::str::FromStr for Direction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "outer" | "out" => Ok(Direction::Outer),
            "inner" | "in" => Ok(Direction::Inner),
            other => Err(format!("unknown direction `{other}` (expected outer|inner)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ValidationStatus {
    Unchecked,
    Passed,
    Failed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TriangleViolation {
    pub i: usize,
    pub j: usize,
    /// Intermediate point of the violated path `i -> k -> j`.
    pub k: usize,
    #[serde(with = "crate::serde_inf")]
    pub lhs: f64,
    #[serde(with = "crate::serde_inf")]
    pub rhs: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntryViolation {
    pub i: usize,
    pub j: usize,
    #[serde(with = "crate::serde_inf")]
    pub value: f64,
}

/// Result of the exhaustive axiom check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub passed: bool,
    pub tolerance: f64,
    /// Directed triangle violations in `(i, j, k)` lexicographic order,
    /// truncated at [`MAX_RECORDED_VIOLATIONS`].
    pub violations: Vec<TriangleViolation>,
    pub violation_count: usize,
    pub negative_entries: Vec<EntryViolation>,
    pub nonzero_diagonal: Vec<EntryViolation>,
    /// Off-diagonal zeros; only populated when the space demands identity.
    pub identity_violations: Vec<EntryViolation>,
}

/// Maximum distance over ordered pairs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Diameter {
    /// Largest finite entry.
    pub value: f64,
    /// Set when some pair is unreachable (relaxed mode only).
    pub has_infinite: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Nearest {
    pub id: usize,
    #[serde(with = "crate::serde_inf")]
    pub distance: f64,
    /// Number of distance entries read to answer the query.
    pub evaluations: usize,
}

/// Distances between an out-of-sample query `q` and every point of a space.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct QueryDistances {
    /// `to_query[i] = ρ(x_i, q)`.
    #[serde(default, skip_serializing_if = "Option::is_none", with = "crate::serde_inf::opt_vec")]
    pub to_query: Option<Vec<f64>>,
    /// `from_query[i] = ρ(q, x_i)`.
    #[serde(default, skip_serializing_if = "Option::is_none", with = "crate::serde_inf::opt_vec")]
    pub from_query: Option<Vec<f64>>,
}

impl QueryDistances {
    /// The vector that [`Direction::reach`] would read with `q` as the point.
    pub fn for_direction(&self, direction: Direction) -> Option<&[f64]> {
        match direction {
            Direction::Outer => self.to_query.as_deref(),
            Direction::Inner => self.from_query.as_deref(),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub enum Query<'a> {
    Point(usize),
    External(&'a QueryDistances),
}

/// A finite quasi-metric: `n` points and an `n × n` distance matrix.
///
/// Immutable after construction. Axioms are not checked on construction;
/// call [`QuasiMetric::validate`] or [`QuasiMetric::checked`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuasiMetric {
    n: usize,
    #[serde(with = "crate::serde_inf::vec")]
    dist: Vec<f64>,
    mode: Mode,
    strict_identity: bool,
    status: ValidationStatus,
}

impl DistanceMatrix for QuasiMetric {
    #[inline]
    fn len(&self) -> usize {
        self.n
    }

    #[inline]
    fn dist(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.n + j]
    }
}

impl QuasiMetric {
    pub fn from_matrix(rows: Vec<Vec<f64>>, mode: Mode) -> Result<Self, SpaceError> {
        let n = rows.len();
        if n == 0 {
            return Err(SpaceError::Empty);
        }
        let mut dist = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(SpaceError::NotSquare { row: i, len: row.len(), expected: n });
            }
            for (j, value) in row.into_iter().enumerate() {
                check_entry(i, j, value, mode)?;
                dist.push(value);
            }
        }
        Ok(Self::from_parts(n, dist, mode))
    }

    /// Shortest directed path lengths over a weighted digraph.
    pub fn from_digraph(
        n: usize,
        edges: &[(usize, usize, f64)],
        mode: Mode,
    ) -> Result<Self, SpaceError> {
        if n == 0 {
            return Err(SpaceError::Empty);
        }
        for &(u, v, weight) in edges {
            if u >= n || v >= n {
                return Err(SpaceError::VertexOutOfRange { u, v, n });
            }
            if weight.is_nan() || weight < 0.0 || weight.is_infinite() {
                return Err(SpaceError::InvalidWeight { u, v, weight });
            }
        }
        let dist = shortest_path_matrix(n, edges);
        if mode == Mode::Strict {
            if let Some(pos) = dist.iter().position(|d| d.is_infinite()) {
                return Err(SpaceError::Unreachable { from: pos / n, to: pos % n });
            }
        }
        Ok(Self::from_parts(n, dist, mode))
    }

    pub(crate) fn from_parts(n: usize, dist: Vec<f64>, mode: Mode) -> Self {
        debug_assert_eq!(dist.len(), n * n);
        Self { n, dist, mode, strict_identity: false, status: ValidationStatus::Unchecked }
    }

    /// Require `ρ(x, y) > 0` for `x ≠ y`.
    pub fn with_strict_identity(mut self) -> Result<Self, SpaceError> {
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j && self.dist(i, j) == 0.0 {
                    return Err(SpaceError::IdentityViolation { i, j });
                }
            }
        }
        self.strict_identity = true;
        Ok(self)
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn status(&self) -> ValidationStatus {
        self.status
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.dist[i * self.n..(i + 1) * self.n]
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn has_infinite(&self) -> bool {
        self.dist.iter().any(|d| d.is_infinite())
    }

    /// True when every finite entry is a whole number.
    pub fn is_integral(&self) -> bool {
        self.dist.iter().all(|d| d.is_infinite() || d.fract() == 0.0)
    }

    pub fn check_id(&self, id: usize) -> Result<(), SpaceError> {
        if id < self.n {
            Ok(())
        } else {
            Err(SpaceError::PointOutOfRange { id, n: self.n })
        }
    }

    /// The reflected space `ρ'(x, y) = ρ(y, x)`.
    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut dist = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                dist[j * n + i] = self.dist(i, j);
            }
        }
        Self { dist, ..self.clone() }
    }

    /// The subspace induced by `ids`, renumbered `0..ids.len()` in order.
    pub fn induced(&self, ids: &[usize]) -> Result<Self, SpaceError> {
        if ids.is_empty() {
            return Err(SpaceError::EmptySet);
        }
        for &id in ids {
            self.check_id(id)?;
        }
        let m = ids.len();
        let mut dist = Vec::with_capacity(m * m);
        for &a in ids {
            for &b in ids {
                dist.push(self.dist(a, b));
            }
        }
        Ok(Self::from_parts(m, dist, self.mode))
    }

    /// Uniformly scale every distance by `factor > 0`.
    pub fn scaled(&self, factor: f64) -> Self {
        assert!(factor > 0.0 && factor.is_finite(), "scale factor must be positive");
        let dist = self.dist.iter().map(|d| d * factor).collect();
        Self { dist, status: ValidationStatus::Unchecked, ..self.clone() }
    }

    /// Exhaustive `O(n³)` check of the quasi-metric axioms.
    ///
    /// A triangle violation is recorded when `ρ(i,j) > (ρ(i,k) + ρ(k,j))·(1 + tolerance)`.
    /// Paths through an unreachable pair never constrain anything, but an
    /// unreachable `ρ(i,j)` with a finite detour `i → k → j` is a violation.
    pub fn validate(&self, tolerance: f64) -> ValidationReport {
        let n = self.n;
        let mut negative_entries = Vec::new();
        let mut nonzero_diagonal = Vec::new();
        let mut identity_violations = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let value = self.dist(i, j);
                if value < 0.0 {
                    negative_entries.push(EntryViolation { i, j, value });
                }
                if i == j && value != 0.0 {
                    nonzero_diagonal.push(EntryViolation { i, j, value });
                }
                if self.strict_identity && i != j && value == 0.0 {
                    identity_violations.push(EntryViolation { i, j, value });
                }
            }
        }

        let per_row: Vec<(usize, Vec<TriangleViolation>)> = (0..n)
            .into_par_iter()
            .map(|i| {
                let mut count = 0usize;
                let mut found = Vec::new();
                for j in 0..n {
                    if i == j {
                        continue;
                    }
                    let lhs = self.dist(i, j);
                    for k in 0..n {
                        if k == i || k == j {
                            continue;
                        }
                        let rhs = self.dist(i, k) + self.dist(k, j);
                        if rhs.is_finite() && lhs > rhs * (1.0 + tolerance) {
                            count += 1;
                            if found.len() < MAX_RECORDED_VIOLATIONS {
                                found.push(TriangleViolation { i, j, k, lhs, rhs });
                            }
                        }
                    }
                }
                (count, found)
            })
            .collect();

        let violation_count = per_row.iter().map(|(c, _)| c).sum();
        let violations: Vec<_> = per_row
            .into_iter()
            .flat_map(|(_, v)| v)
            .take(MAX_RECORDED_VIOLATIONS)
            .collect();
        let passed = violation_count == 0
            && negative_entries.is_empty()
            && nonzero_diagonal.is_empty()
            && identity_violations.is_empty();
        ValidationReport {
            passed,
            tolerance,
            violations,
            violation_count,
            negative_entries,
            nonzero_diagonal,
            identity_violations,
        }
    }

    /// Validate and record the outcome on the space.
    pub fn checked(mut self, tolerance: f64) -> (Self, ValidationReport) {
        let report = self.validate(tolerance);
        self.status = if report.passed { ValidationStatus::Passed } else { ValidationStatus::Failed };
        (self, report)
    }

    /// `B^out_r(center)` or `B^in_r(center)` in ascending id order.
    pub fn ball(&self, center: usize, radius: f64, direction: Direction) -> Vec<usize> {
        ball(self, center, radius, direction)
    }

    /// `ρ(A, B) = min over a ∈ A, b ∈ B of ρ(a, b)`.
    pub fn set_distance(&self, a: &[usize], b: &[usize]) -> Result<f64, SpaceError> {
        if a.is_empty() || b.is_empty() {
            return Err(SpaceError::EmptySet);
        }
        for &id in a.iter().chain(b) {
            self.check_id(id)?;
        }
        Ok(a.iter()
            .flat_map(|&x| b.iter().map(move |&y| (x, y)))
            .map(|(x, y)| self.dist(x, y))
            .fold(f64::INFINITY, f64::min))
    }

    pub fn diameter(&self) -> Diameter {
        let mut value: f64 = 0.0;
        let mut has_infinite = false;
        for &d in &self.dist {
            if d.is_infinite() {
                has_infinite = true;
            } else {
                value = value.max(d);
            }
        }
        Diameter { value, has_infinite }
    }

    /// Brute-force nearest neighbor of a query within `candidates`.
    ///
    /// `Outer` minimizes `ρ(s, q)`, `Inner` minimizes `ρ(q, s)`; ties go to
    /// the lowest id. Reads exactly `candidates.len()` distances.
    pub fn nearest(
        &self,
        query: Query<'_>,
        candidates: &[usize],
        direction: Direction,
    ) -> Result<Nearest, SpaceError> {
        if candidates.is_empty() {
            return Err(SpaceError::EmptySet);
        }
        for &s in candidates {
            self.check_id(s)?;
        }
        match query {
            Query::Point(q) => {
                self.check_id(q)?;
                Ok(scan(candidates, |s| direction.reach(self, s, q)))
            }
            Query::External(qd) => {
                let v = qd
                    .for_direction(direction)
                    .ok_or(SpaceError::MissingQueryDirection(direction))?;
                if v.len() != self.n {
                    return Err(SpaceError::QueryLength { expected: self.n, got: v.len() });
                }
                Ok(scan(candidates, |s| v[s]))
            }
        }
    }
}

fn check_entry(i: usize, j: usize, value: f64, mode: Mode) -> Result<(), SpaceError> {
    if value.is_nan() {
        return Err(SpaceError::NotANumber { i, j });
    }
    if value < 0.0 {
        return Err(SpaceError::NegativeEntry { i, j, value });
    }
    if value.is_infinite() && mode == Mode::Strict {
        return Err(SpaceError::InfiniteInStrict { i, j });
    }
    Ok(())
}

fn scan(candidates: &[usize], mut read: impl FnMut(usize) -> f64) -> Nearest {
    let mut best = Nearest { id: usize::MAX, distance: f64::INFINITY, evaluations: 0 };
    for &s in candidates {
        let d = read(s);
        best.evaluations += 1;
        if d < best.distance || (d == best.distance && s < best.id) {
            best.id = s;
            best.distance = d;
        }
    }
    best
}

/// Ball over any distance matrix; the center is always included.
pub fn ball<M: DistanceMatrix + ?Sized>(
    m: &M,
    center: usize,
    radius: f64,
    direction: Direction,
) -> Vec<usize> {
    (0..m.len())
        .filter(|&y| y == center || direction.reach(m, center, y) <= radius)
        .collect()
}
