//! Symmetrizations of a quasi-metric.
//!
//! * `max`: `ρ^max(x, y) = max{ρ(x, y), ρ(y, x)}`, always a metric.
//! * `min`: `ρ^min(x, y) = min{ρ(x, y), ρ(y, x)}`, symmetric but may break
//!   the triangle inequality.
//! * `sum`: `ρ^+(x, y) = ρ(x, y) + ρ(y, x)`, always a metric.

use crate::space::{DistanceMatrix, EntryViolation, QuasiMetric, TriangleViolation, MAX_RECORDED_VIOLATIONS};
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TransformError {
    #[error("{op} needs finite distances but ({i}, {j}) is infinite")]
    Infinite { op: Transform, i: usize, j: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Transform {
    Max,
    Min,
    Sum,
}

impl fmt::Display for Transform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Transform::Max => "max",
            Transform::Min => "min",
            Transform::Sum => "sum",
        })
    }
}

impl std::str::FromStr for Transform {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "max" => Ok(Transform::Max),
            "min" => Ok(Transform::Min),
            "sum" => Ok(Transform::Sum),
            other => Err(format!("unknown transform `{other}` (expected max|min|sum)")),
        }
    }
}

/// What the construction guarantees about the triangle inequality.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SymmetricKind {
    MetricClaimed,
    SemimetricClaimed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymmetricSpace {
    n: usize,
    dist: Vec<f64>,
    kind: SymmetricKind,
    origin: Transform,
}

impl DistanceMatrix for SymmetricSpace {
    #[inline]
    fn len(&self) -> usize {
        self.n
    }

    #[inline]
    fn dist(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.n + j]
    }

    fn is_symmetric(&self) -> bool {
        true
    }
}

impl SymmetricSpace {
    pub fn kind(&self) -> SymmetricKind {
        self.kind
    }

    pub fn origin(&self) -> Transform {
        self.origin
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.dist.chunks(self.n).map(<[f64]>::to_vec).collect()
    }

    pub fn validate(&self, tolerance: f64) -> SymmetricReport {
        check_symmetric_axioms(self, tolerance, self.kind)
    }
}

pub fn to_max_metric(qm: &QuasiMetric) -> Result<SymmetricSpace, TransformError> {
    combine(qm, Transform::Max, SymmetricKind::MetricClaimed, f64::max)
}

pub fn to_min_semimetric(qm: &QuasiMetric) -> Result<SymmetricSpace, TransformError> {
    combine(qm, Transform::Min, SymmetricKind::SemimetricClaimed, f64::min)
}

pub fn to_sum_metric(qm: &QuasiMetric) -> Result<SymmetricSpace, TransformError> {
    combine(qm, Transform::Sum, SymmetricKind::MetricClaimed, |a, b| a + b)
}

pub fn apply(qm: &QuasiMetric, op: Transform) -> Result<SymmetricSpace, TransformError> {
    match op {
        Transform::Max => to_max_metric(qm),
        Transform::Min => to_min_semimetric(qm),
        Transform::Sum => to_sum_metric(qm),
    }
}

fn combine(
    qm: &QuasiMetric,
    op: Transform,
    kind: SymmetricKind,
    f: impl Fn(f64, f64) -> f64,
) -> Result<SymmetricSpace, TransformError> {
    let n = qm.len();
    let mut dist = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let v = f(qm.dist(i, j), qm.dist(j, i));
            if v.is_infinite() {
                let (i, j) = if qm.dist(i, j).is_infinite() { (i, j) } else { (j, i) };
                return Err(TransformError::Infinite { op, i, j });
            }
            dist[i * n + j] = v;
            dist[j * n + i] = v;
        }
    }
    Ok(SymmetricSpace { n, dist, kind, origin: op })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymmetryFailure {
    pub i: usize,
    pub j: usize,
    pub forward: f64,
    pub backward: f64,
}

/// Axiom check for a (claimed) symmetric distance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymmetricReport {
    pub passed: bool,
    pub tolerance: f64,
    pub kind: SymmetricKind,
    pub symmetry_failures: Vec<SymmetryFailure>,
    pub negative_entries: Vec<EntryViolation>,
    pub nonzero_diagonal: Vec<EntryViolation>,
    /// Unordered triangles `{i, j}` (with `i < j`) whose direct distance
    /// exceeds the detour through `k`. Informational for semi-metrics.
    pub triangle_violations: Vec<TriangleViolation>,
    pub triangle_violation_count: usize,
}

/// Check symmetry, zero diagonal, non-negativity and the triangle inequality.
///
/// Triangle violations only fail the report when `kind` claims a metric.
pub fn check_symmetric_axioms<M: DistanceMatrix + ?Sized>(
    m: &M,
    tolerance: f64,
    kind: SymmetricKind,
) -> SymmetricReport {
    let n = m.len();
    let mut symmetry_failures = Vec::new();
    let mut negative_entries = Vec::new();
    let mut nonzero_diagonal = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let value = m.dist(i, j);
            if value < 0.0 {
                negative_entries.push(EntryViolation { i, j, value });
            }
            if i == j && value != 0.0 {
                nonzero_diagonal.push(EntryViolation { i, j, value });
            }
            if i < j && value != m.dist(j, i) {
                symmetry_failures.push(SymmetryFailure { i, j, forward: value, backward: m.dist(j, i) });
            }
        }
    }

    let mut triangle_violations = Vec::new();
    let mut triangle_violation_count = 0;
    for i in 0..n {
        for j in i + 1..n {
            let lhs = m.dist(i, j);
            for k in 0..n {
                if k == i || k == j {
                    continue;
                }
                let rhs = m.dist(i, k) + m.dist(k, j);
                if rhs.is_finite() && lhs > rhs * (1.0 + tolerance) {
                    triangle_violation_count += 1;
                    if triangle_violations.len() < MAX_RECORDED_VIOLATIONS {
                        triangle_violations.push(TriangleViolation { i, j, k, lhs, rhs });
                    }
                }
            }
        }
    }

    let triangle_ok = kind == SymmetricKind::SemimetricClaimed || triangle_violation_count == 0;
    SymmetricReport {
        passed: triangle_ok
            && symmetry_failures.is_empty()
            && negative_entries.is_empty()
            && nonzero_diagonal.is_empty(),
        tolerance,
        kind,
        symmetry_failures,
        negative_entries,
        nonzero_diagonal,
        triangle_violations,
        triangle_violation_count,
    }
}
