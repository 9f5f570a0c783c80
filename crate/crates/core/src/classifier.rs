//! Margin classifiers built from a small directional cover of one class,
//! plus the sample-compression generalization bounds.
//!
//! With margins `ρ^± = ρ(S₊, S₋)` and `ρ^∓ = ρ(S₋, S₊)` there are four ways
//! to cover one class so that the cover separates the classes:
//!
//! | kind        | covers | direction | radius | rule                       |
//! |-------------|--------|-----------|--------|----------------------------|
//! | `PosOuter`  | `S₊`   | outer     | `ρ^±`  | `+1` iff `ρ(C, x) ≤ θ`     |
//! | `NegInner`  | `S₋`   | inner     | `ρ^±`  | `−1` iff `ρ(x, C) ≤ θ`     |
//! | `PosInner`  | `S₊`   | inner     | `ρ^∓`  | `+1` iff `ρ(x, C) ≤ θ`     |
//! | `NegOuter`  | `S₋`   | outer     | `ρ^∓`  | `−1` iff `ρ(C, x) ≤ θ`     |
//!
//! The smallest cover wins; its size `k` enters the bounds.

use crate::cover::{greedy_cover, greedy_cover_eps, iterated_cover, Cover, CoverError};
use crate::space::{Direction, DistanceMatrix, QuasiMetric, Query, SpaceError};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClassifierError {
    #[error("the {0} class is empty")]
    EmptyClass(&'static str),
    #[error("point {0} carries both labels")]
    Overlap(usize),
    #[error("label {label} for point {id} is not +1 or -1")]
    BadLabel { id: usize, label: i64 },
    #[error("zero margin between {from} and {to}: the sample is not separable")]
    ZeroMargin { from: usize, to: usize },
    #[error("all four candidate covers have a zero separation gap")]
    NoCandidate,
    #[error("replay found {errors} training errors in consistent mode")]
    Inconsistent { errors: usize },
    #[error("query vector has length {got}, expected {n} (sample size) or {k} (cover size)")]
    QueryLength { got: usize, n: usize, k: usize },
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error("{0}")]
    Bound(String),
}

/// A labeled subset of the points of a space.
#[derive(Clone, Debug)]
pub struct LabeledSample<'a> {
    space: &'a QuasiMetric,
    pos: Vec<usize>,
    neg: Vec<usize>,
}

impl<'a> LabeledSample<'a> {
    pub fn new(space: &'a QuasiMetric, pos: Vec<usize>, neg: Vec<usize>) -> Result<Self, ClassifierError> {
        let mut pos = pos;
        let mut neg = neg;
        pos.sort_unstable();
        pos.dedup();
        neg.sort_unstable();
        neg.dedup();
        for &id in pos.iter().chain(&neg) {
            space.check_id(id)?;
        }
        let p: BTreeSet<usize> = pos.iter().copied().collect();
        if let Some(&id) = neg.iter().find(|id| p.contains(id)) {
            return Err(ClassifierError::Overlap(id));
        }
        Ok(Self { space, pos, neg })
    }

    /// Build from `(id, label)` pairs with labels `±1`.
    pub fn from_labels(space: &'a QuasiMetric, labels: &[(usize, i64)]) -> Result<Self, ClassifierError> {
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        for &(id, label) in labels {
            match label {
                1 => pos.push(id),
                -1 => neg.push(id),
                _ => return Err(ClassifierError::BadLabel { id, label }),
            }
        }
        Self::new(space, pos, neg)
    }

    pub fn space(&self) -> &QuasiMetric {
        self.space
    }

    pub fn pos(&self) -> &[usize] {
        &self.pos
    }

    pub fn neg(&self) -> &[usize] {
        &self.neg
    }

    pub fn len(&self) -> usize {
        self.pos.len() + self.neg.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All labeled points with their labels, ascending by id.
    pub fn labeled(&self) -> Vec<(usize, i8)> {
        let mut all: Vec<(usize, i8)> =
            self.pos.iter().map(|&x| (x, 1)).chain(self.neg.iter().map(|&x| (x, -1))).collect();
        all.sort_unstable();
        all
    }
}

/// Parse a labels file: one `id label` pair per line, label `+1`/`1`/`-1`.
pub fn parse_labels(text: &str) -> Result<Vec<(usize, i64)>, crate::space::io::ParseError> {
    use crate::space::io::ParseError;
    let mut out = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let syntax = |message: String| ParseError::Syntax { line: no + 1, message };
        let mut tokens = line.split_whitespace();
        let (Some(id), Some(label), None) = (tokens.next(), tokens.next(), tokens.next()) else {
            return Err(syntax("expected `id label`".into()));
        };
        let id = id.parse().map_err(|_| syntax(format!("`{id}` is not a point id")))?;
        let label = label.trim_start_matches('+').parse().map_err(|_| syntax(format!("`{label}` is not a label")))?;
        out.push((id, label));
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Margins {
    /// `ρ(S₊, S₋)`
    #[serde(with = "crate::serde_inf")]
    pub rho_pm: f64,
    /// `ρ(S₋, S₊)`
    #[serde(with = "crate::serde_inf")]
    pub rho_mp: f64,
}

/// Both directed class-to-class distances. A zero in either direction
/// means some cross-class pair is indistinguishable and is reported as an
/// error.
pub fn margins(sample: &LabeledSample<'_>) -> Result<Margins, ClassifierError> {
    if sample.pos.is_empty() {
        return Err(ClassifierError::EmptyClass("positive"));
    }
    if sample.neg.is_empty() {
        return Err(ClassifierError::EmptyClass("negative"));
    }
    let m = sample.space;
    for (from, to) in [(&sample.pos, &sample.neg), (&sample.neg, &sample.pos)] {
        for &a in from.iter() {
            if let Some(&b) = to.iter().find(|&&b| m.dist(a, b) == 0.0) {
                return Err(ClassifierError::ZeroMargin { from: a, to: b });
            }
        }
    }
    Ok(Margins {
        rho_pm: m.set_distance(&sample.pos, &sample.neg)?,
        rho_mp: m.set_distance(&sample.neg, &sample.pos)?,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CandidateKind {
    PosOuter,
    NegInner,
    PosInner,
    NegOuter,
}

impl CandidateKind {
    pub const ALL: [CandidateKind; 4] =
        [CandidateKind::PosOuter, CandidateKind::NegInner, CandidateKind::PosInner, CandidateKind::NegOuter];

    /// Label of the covered class.
    pub fn cover_label(self) -> i8 {
        match self {
            CandidateKind::PosOuter | CandidateKind::PosInner => 1,
            CandidateKind::NegInner | CandidateKind::NegOuter => -1,
        }
    }

    pub fn direction(self) -> Direction {
        match self {
            CandidateKind::PosOuter | CandidateKind::NegOuter => Direction::Outer,
            CandidateKind::NegInner | CandidateKind::PosInner => Direction::Inner,
        }
    }

    /// Cover radius: `ρ^±` for the first two kinds, `ρ^∓` for the others.
    pub fn radius(self, m: &Margins) -> f64 {
        match self {
            CandidateKind::PosOuter | CandidateKind::NegInner => m.rho_pm,
            CandidateKind::PosInner | CandidateKind::NegOuter => m.rho_mp,
        }
    }
}

impl fmt::Display for CandidateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CandidateKind::PosOuter => "pos-outer",
            CandidateKind::NegInner => "neg-inner",
            CandidateKind::PosInner => "pos-inner",
            CandidateKind::NegOuter => "neg-outer",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CoverAlgorithm {
    Greedy,
    /// Iterated refinement with an estimate `λ̂ ≥ 2` of the covering constant.
    Iterated { lambda: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ClassifierMode {
    /// Cover every point of the class; zero training error.
    Consistent,
    /// Leave up to `eps·|class|` points of the covered class uncovered.
    Eps { eps: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CandidateReport {
    pub kind: CandidateKind,
    #[serde(with = "crate::serde_inf")]
    pub radius: f64,
    pub cover_size: usize,
    /// Largest same-class distance to the cover (covered points only).
    #[serde(with = "crate::serde_inf")]
    pub max_same: f64,
    /// Smallest opposite-class distance to the cover.
    #[serde(with = "crate::serde_inf")]
    pub min_opposite: f64,
    /// Midpoint threshold; absent when the gap is zero.
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_inf")]
    pub threshold: Option<f64>,
    pub training_errors: usize,
}

mod opt_inf {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(x) if x.is_infinite() => "inf".serialize(s),
            other => other.serialize(s),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Option::<Raw>::deserialize(d)? {
            None => Ok(None),
            Some(Raw::Num(x)) => Ok(Some(x)),
            Some(Raw::Text(t)) if t == "inf" => Ok(Some(f64::INFINITY)),
            Some(Raw::Text(t)) => Err(serde::de::Error::custom(format!("bad number `{t}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompressedClassifier {
    pub kind: CandidateKind,
    pub cover_label: i8,
    #[serde(with = "crate::serde_inf")]
    pub threshold: f64,
    pub k: usize,
    pub cover: Cover,
    pub margins: Margins,
    pub mode: ClassifierMode,
    pub algorithm: CoverAlgorithm,
    /// Sample size `n = |S₊| + |S₋|`.
    pub n: usize,
    pub training_errors: usize,
    pub training_error: f64,
    /// Every candidate that was built, kept or not, in `a, b, c, d` order.
    pub candidates: Vec<CandidateReport>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub label: i8,
    /// Distance from the query to the cover in the rule's direction.
    #[serde(with = "crate::serde_inf")]
    pub distance: f64,
    pub evaluations: usize,
}

/// Build the four candidates and keep the smallest usable cover.
///
/// Ties go to the earlier candidate in `PosOuter, NegInner, PosInner,
/// NegOuter` order. The chosen rule is replayed over the whole sample; in
/// consistent mode any error is reported rather than returned.
pub fn build_classifier(
    sample: &LabeledSample<'_>,
    algorithm: CoverAlgorithm,
    mode: ClassifierMode,
) -> Result<CompressedClassifier, ClassifierError> {
    let margins = margins(sample)?;
    let built: Vec<Result<(CandidateReport, Cover), ClassifierError>> = CandidateKind::ALL
        .par_iter()
        .map(|&kind| build_candidate(sample, &margins, kind, algorithm, mode))
        .collect();

    let mut candidates = Vec::with_capacity(4);
    let mut best: Option<(CandidateReport, Cover)> = None;
    for result in built {
        let (report, cover) = result?;
        candidates.push(report.clone());
        if report.threshold.is_none() {
            continue;
        }
        if best.as_ref().is_none_or(|(b, _)| report.cover_size < b.cover_size) {
            best = Some((report, cover));
        }
    }
    let (chosen, cover) = best.ok_or(ClassifierError::NoCandidate)?;
    if mode == ClassifierMode::Consistent && chosen.training_errors > 0 {
        return Err(ClassifierError::Inconsistent { errors: chosen.training_errors });
    }
    let n = sample.len();
    Ok(CompressedClassifier {
        kind: chosen.kind,
        cover_label: chosen.kind.cover_label(),
        threshold: chosen.threshold.expect("kept candidates have a threshold"),
        k: cover.len(),
        cover,
        margins,
        mode,
        algorithm,
        n,
        training_errors: chosen.training_errors,
        training_error: chosen.training_errors as f64 / n as f64,
        candidates,
    })
}

fn build_candidate(
    sample: &LabeledSample<'_>,
    margins: &Margins,
    kind: CandidateKind,
    algorithm: CoverAlgorithm,
    mode: ClassifierMode,
) -> Result<(CandidateReport, Cover), ClassifierError> {
    let m = sample.space;
    let direction = kind.direction();
    let radius = kind.radius(margins);
    let (same, opposite) = if kind.cover_label() == 1 { (&sample.pos, &sample.neg) } else { (&sample.neg, &sample.pos) };
    let cover = match (mode, algorithm) {
        (ClassifierMode::Eps { eps }, _) => greedy_cover_eps(m, same, same, radius, direction, eps)?,
        (ClassifierMode::Consistent, CoverAlgorithm::Greedy) => greedy_cover(m, same, same, radius, direction)?,
        (ClassifierMode::Consistent, CoverAlgorithm::Iterated { lambda }) => {
            iterated_cover(m, same, same, radius, direction, lambda)?
        }
    };

    let to_cover = |x: usize| cover.cover_ids.iter().map(|&c| direction.reach(m, c, x)).fold(f64::INFINITY, f64::min);
    let max_same = cover.assignment.keys().map(|&x| to_cover(x)).fold(0.0, f64::max);
    let min_opposite = opposite.iter().map(|&x| to_cover(x)).fold(f64::INFINITY, f64::min);
    let threshold = (max_same < min_opposite).then(|| {
        if min_opposite.is_infinite() {
            f64::INFINITY
        } else {
            max_same + (min_opposite - max_same) / 2.0
        }
    });

    let training_errors = match threshold {
        Some(theta) => {
            let label = kind.cover_label();
            let wrong = |x: usize, truth: i8| {
                let predicted = if to_cover(x) <= theta { label } else { -label };
                predicted != truth
            };
            same.iter().filter(|&&x| wrong(x, label)).count()
                + opposite.iter().filter(|&&x| wrong(x, -label)).count()
        }
        None => 0,
    };

    let report = CandidateReport {
        kind,
        radius,
        cover_size: cover.len(),
        max_same,
        min_opposite,
        threshold,
        training_errors,
    };
    Ok((report, cover))
}

impl CompressedClassifier {
    /// Classify a sample point or an external query.
    ///
    /// Reads exactly `k` distances. External queries may give length-`n`
    /// vectors indexed by point id or length-`k` vectors aligned with
    /// `cover.cover_ids`; only the direction the rule uses is consulted.
    pub fn predict(&self, space: &QuasiMetric, query: Query<'_>) -> Result<Prediction, ClassifierError> {
        let direction = self.kind.direction();
        let ids = &self.cover.cover_ids;
        let distance = match query {
            Query::Point(q) => {
                space.check_id(q)?;
                ids.iter().map(|&c| direction.reach(space, c, q)).fold(f64::INFINITY, f64::min)
            }
            Query::External(qd) => {
                let v = qd.for_direction(direction).ok_or(SpaceError::MissingQueryDirection(direction))?;
                if v.len() == space.len() {
                    ids.iter().map(|&c| v[c]).fold(f64::INFINITY, f64::min)
                } else if v.len() == ids.len() {
                    v.iter().copied().fold(f64::INFINITY, f64::min)
                } else {
                    return Err(ClassifierError::QueryLength { got: v.len(), n: space.len(), k: ids.len() });
                }
            }
        };
        let label = if distance <= self.threshold { self.cover_label } else { -self.cover_label };
        Ok(Prediction { label, distance, evaluations: ids.len() })
    }

    /// Generalization bound for this classifier: the consistent bound in
    /// consistent mode, the agnostic bound at the realized training error
    /// otherwise.
    pub fn bound(&self, delta: f64, base: LogBase) -> Result<BoundReport, ClassifierError> {
        match self.mode {
            ClassifierMode::Consistent => bound_consistent_with(self.n, self.k, delta, base),
            ClassifierMode::Eps { .. } => bound_agnostic_with(self.n, self.k, delta, self.training_error, base),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LogBase {
    Natural,
    Two,
}

impl LogBase {
    fn log(self, x: f64) -> f64 {
        match self {
            LogBase::Natural => x.ln(),
            LogBase::Two => x.log2(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    /// 1 for the consistent bound, 2 for the agnostic one.
    pub theorem: u8,
    pub n: usize,
    pub k: usize,
    pub delta: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    /// `εn/(n−k)`, agnostic bound only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps_tilde: Option<f64>,
    pub log_base: LogBase,
    /// The formula's value, possibly above 1.
    pub raw: f64,
    /// `min(raw, 1)`.
    pub value: f64,
    /// Set when `raw ≥ 1`, i.e. the bound says nothing.
    pub vacuous: bool,
}

fn check_common(n: usize, k: usize, delta: f64) -> Result<(), ClassifierError> {
    if k >= n {
        return Err(ClassifierError::Bound(format!("need k < n, got k = {k}, n = {n}")));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(ClassifierError::Bound(format!("delta must lie in (0, 1), got {delta}")));
    }
    Ok(())
}

/// `(1/(n−k))·((k+1)·log n + log(1/δ))` with natural logarithms.
pub fn bound_consistent(n: usize, k: usize, delta: f64) -> Result<BoundReport, ClassifierError> {
    bound_consistent_with(n, k, delta, LogBase::Natural)
}

pub fn bound_consistent_with(n: usize, k: usize, delta: f64, base: LogBase) -> Result<BoundReport, ClassifierError> {
    check_common(n, k, delta)?;
    let (nf, kf) = (n as f64, k as f64);
    let raw = ((kf + 1.0) * base.log(nf) + base.log(1.0 / delta)) / (nf - kf);
    Ok(BoundReport {
        theorem: 1,
        n,
        k,
        delta,
        epsilon: None,
        eps_tilde: None,
        log_base: base,
        raw,
        value: raw.min(1.0),
        vacuous: raw >= 1.0,
    })
}

/// `ε̃ + 2L/(3(n−k)) + sqrt(9ε̃(1−ε̃)L/(2(n−k)))` with `L = log(n^{k+1}/δ)`
/// and `ε̃ = εn/(n−k)`, natural logarithms.
pub fn bound_agnostic(n: usize, k: usize, delta: f64, eps: f64) -> Result<BoundReport, ClassifierError> {
    bound_agnostic_with(n, k, delta, eps, LogBase::Natural)
}

pub fn bound_agnostic_with(
    n: usize,
    k: usize,
    delta: f64,
    eps: f64,
    base: LogBase,
) -> Result<BoundReport, ClassifierError> {
    check_common(n, k, delta)?;
    if !(0.0..=0.5).contains(&eps) {
        return Err(ClassifierError::Bound(format!("epsilon must lie in [0, 1/2], got {eps}")));
    }
    let (nf, kf) = (n as f64, k as f64);
    let log_term = (kf + 1.0) * base.log(nf) + base.log(1.0 / delta);
    let eps_tilde = eps * nf / (nf - kf);
    let spread = (eps_tilde * (1.0 - eps_tilde)).max(0.0);
    let raw = eps_tilde
        + 2.0 * log_term / (3.0 * (nf - kf))
        + (9.0 * spread * log_term / (2.0 * (nf - kf))).sqrt();
    Ok(BoundReport {
        theorem: 2,
        n,
        k,
        delta,
        epsilon: Some(eps),
        eps_tilde: Some(eps_tilde),
        log_base: base,
        raw,
        value: raw.min(1.0),
        vacuous: raw >= 1.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{Mode, QueryDistances};

    /// Positives 0..4 on a 4-cycle of step 0.5, negatives 4..7 on a 3-cycle
    /// of step 0.25, bridges 3 → 4 (length 1) and 4 → 0 (length 2).
    fn margin_instance() -> QuasiMetric {
        let mut edges = vec![(0, 1, 0.5), (1, 2, 0.5), (2, 3, 0.5), (3, 0, 0.5)];
        edges.extend([(4, 5, 0.25), (5, 6, 0.25), (6, 4, 0.25)]);
        edges.extend([(3, 4, 1.0), (4, 0, 2.0)]);
        QuasiMetric::from_digraph(7, &edges, Mode::Strict).unwrap()
    }

    #[test]
    fn margins_of_the_two_cycle_instance() {
        let qm = margin_instance();
        let s = LabeledSample::new(&qm, vec![0, 1, 2, 3], vec![4, 5, 6]).unwrap();
        assert_eq!(margins(&s).unwrap(), Margins { rho_pm: 1.0, rho_mp: 2.0 });
    }

    #[test]
    fn chosen_candidate_is_smallest_and_consistent() {
        let qm = margin_instance();
        let s = LabeledSample::new(&qm, vec![0, 1, 2, 3], vec![4, 5, 6]).unwrap();
        let h = build_classifier(&s, CoverAlgorithm::Greedy, ClassifierMode::Consistent).unwrap();
        let sizes: Vec<usize> = h.candidates.iter().map(|c| c.cover_size).collect();
        assert_eq!(sizes, vec![2, 1, 1, 1]);
        assert_eq!(h.kind, CandidateKind::NegInner);
        assert_eq!(h.k, 1);
        for (x, label) in s.labeled() {
            assert_eq!(h.predict(&qm, Query::Point(x)).unwrap().label, label);
        }
    }

    #[test]
    fn singleton_class_compresses_to_itself() {
        let qm = margin_instance();
        let s = LabeledSample::new(&qm, vec![2], vec![4, 5, 6]).unwrap();
        let h = build_classifier(&s, CoverAlgorithm::Greedy, ClassifierMode::Consistent).unwrap();
        assert_eq!(h.k, 1);
        assert_eq!(h.candidates[0].cover_size, 1);
    }

    #[test]
    fn prediction_reads_k_distances_and_handles_external_queries() {
        let qm = margin_instance();
        let s = LabeledSample::new(&qm, vec![0, 1, 2, 3], vec![4, 5, 6]).unwrap();
        let h = build_classifier(&s, CoverAlgorithm::Greedy, ClassifierMode::Consistent).unwrap();
        let c = h.cover.cover_ids[0];
        let own = h.predict(&qm, Query::Point(c)).unwrap();
        assert_eq!((own.label, own.distance, own.evaluations), (h.cover_label, 0.0, h.k));

        let far = QueryDistances { to_query: Some(vec![100.0; 7]), from_query: Some(vec![100.0; 7]) };
        assert_eq!(h.predict(&qm, Query::External(&far)).unwrap().label, -h.cover_label);
        let short = QueryDistances { from_query: Some(vec![0.0]), to_query: None };
        assert_eq!(h.predict(&qm, Query::External(&short)).unwrap().label, h.cover_label);
        let bad = QueryDistances { from_query: Some(vec![0.0; 3]), to_query: None };
        assert!(matches!(h.predict(&qm, Query::External(&bad)), Err(ClassifierError::QueryLength { got: 3, .. })));
        let missing = QueryDistances { to_query: Some(vec![0.0; 7]), from_query: None };
        assert!(matches!(
            h.predict(&qm, Query::External(&missing)),
            Err(ClassifierError::Space(SpaceError::MissingQueryDirection(Direction::Inner)))
        ));
    }

    #[test]
    fn sample_errors() {
        let qm = margin_instance();
        assert!(matches!(LabeledSample::new(&qm, vec![0], vec![0]), Err(ClassifierError::Overlap(0))));
        let s = LabeledSample::new(&qm, vec![], vec![1]).unwrap();
        assert_eq!(margins(&s), Err(ClassifierError::EmptyClass("positive")));
        let dup = QuasiMetric::from_matrix(vec![vec![0.0, 0.0], vec![0.0, 0.0]], Mode::Strict).unwrap();
        let s = LabeledSample::new(&dup, vec![0], vec![1]).unwrap();
        assert_eq!(margins(&s), Err(ClassifierError::ZeroMargin { from: 0, to: 1 }));
        assert!(matches!(
            LabeledSample::from_labels(&qm, &[(0, 2)]),
            Err(ClassifierError::BadLabel { id: 0, label: 2 })
        ));
    }

    #[test]
    fn labels_file_parsing() {
        let parsed = parse_labels("# labels\n0 +1\n1 -1\n\n2 1\n").unwrap();
        assert_eq!(parsed, vec![(0, 1), (1, -1), (2, 1)]);
        assert!(parse_labels("0\n").is_err());
        assert!(parse_labels("x 1\n").is_err());
    }

    #[test]
    fn consistent_bound_values() {
        let b = bound_consistent(100, 5, 0.05).unwrap();
        let expected = (6.0 * 100f64.ln() + 20f64.ln()) / 95.0;
        assert!((b.raw - expected).abs() <= 1e-12 * expected);
        assert!((b.raw - 0.322387).abs() < 1e-6);
        let near_one = bound_consistent(100, 0, 1.0 - 1e-12).unwrap();
        assert!((near_one.raw - 100f64.ln() / 100.0).abs() < 1e-9);
        let vacuous = bound_consistent(10, 9, 0.5).unwrap();
        assert!(vacuous.vacuous && vacuous.value == 1.0 && vacuous.raw > 1.0);
        assert!(bound_consistent(5, 5, 0.1).is_err());
        assert!(bound_consistent(5, 1, 1.0).is_err());
        let two = bound_consistent_with(100, 5, 0.05, LogBase::Two).unwrap();
        assert!((two.raw - (6.0 * 100f64.log2() + 20f64.log2()) / 95.0).abs() < 1e-12);
    }

    #[test]
    fn agnostic_bound_values() {
        let zero = bound_agnostic(200, 5, 0.05, 0.0).unwrap();
        let l = 6.0 * 200f64.ln() + 20f64.ln();
        assert!((zero.raw - 2.0 * l / (3.0 * 195.0)).abs() < 1e-12);
        let b = bound_agnostic(200, 5, 0.05, 0.05).unwrap();
        let et = 0.05 * 200.0 / 195.0;
        assert!((b.eps_tilde.unwrap() - et).abs() < 1e-15);
        let expected = et + 2.0 * l / (3.0 * 195.0) + (9.0 * et * (1.0 - et) * l / (2.0 * 195.0)).sqrt();
        assert!((b.raw - expected).abs() < 1e-12);
        assert!(bound_agnostic(200, 5, 0.05, 0.6).is_err());
    }
}
