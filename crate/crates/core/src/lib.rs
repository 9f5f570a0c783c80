//! Compression-based nearest-neighbor classification in quasi-metric spaces.
//!
//! A quasi-metric is a distance that is non-negative, vanishes on the
//! diagonal and obeys the directed triangle inequality, but need not be
//! symmetric. Because `ρ(x, y)` and `ρ(y, x)` differ, every ball, cover and
//! nearest-neighbor query comes in two flavors, selected by [`Direction`]:
//!
//! * [`Direction::Outer`] reads distances *from* a center: `ρ(c, x)`.
//! * [`Direction::Inner`] reads distances *to* a center: `ρ(x, c)`.
//!
//! The crate is organized as:
//!
//! * [`space`] – construction, validation and brute-force queries.
//! * [`dimension`] – directional covering constants, doubling and density
//!   constants, iterated logarithms.
//! * [`cover`] – arbitrary, greedy, iterated and ε-relaxed α-covers.
//! * [`classifier`] – the four-candidate margin classifier and the
//!   sample-compression generalization bounds.
//! * [`transforms`] – symmetrizations `max`, `min` and `sum`.
//! * [`fixtures`] – deterministic generators for the counterexample
//!   instances together with their known properties.
//!
//! ```
//! use qmc::{build_classifier, ClassifierMode, CoverAlgorithm, LabeledSample, LogBase, Mode, QuasiMetric, Query};
//!
//! # fn main() -> Result<(), Box<dyn std::error::Error>> {
//! let edges = [(0, 1, 0.5), (1, 0, 0.5), (2, 3, 0.5), (3, 2, 0.5), (1, 2, 1.0), (2, 0, 2.0)];
//! let space = QuasiMetric::from_digraph(4, &edges, Mode::Strict)?;
//! let sample = LabeledSample::new(&space, vec![0, 1], vec![2, 3])?;
//!
//! let h = build_classifier(&sample, CoverAlgorithm::Greedy, ClassifierMode::Consistent)?;
//! assert_eq!((h.margins.rho_pm, h.margins.rho_mp), (1.0, 2.0));
//! assert_eq!(h.predict(&space, Query::Point(3))?.label, -1);
//!
//! let bound = h.bound(0.05, LogBase::Natural)?;
//! assert!(bound.vacuous, "four points say nothing");
//! # Ok(())
//! # }
//! ```

pub mod classifier;
pub mod cover;
pub mod dimension;
pub mod fixtures;
pub mod serde_inf;
pub mod setcover;
pub mod space;
pub mod transforms;

pub use classifier::{
    bound_agnostic, bound_consistent, build_classifier, margins, BoundReport, CandidateKind,
    ClassifierMode, CompressedClassifier, CoverAlgorithm, LabeledSample, LogBase, Margins,
};
pub use cover::{
    arbitrary_cover, greedy_cover, greedy_cover_eps, greedy_cover_subset, iterated_cover,
    verify_cover, ArbitraryOrder, Cover, CoverStats, CoverVerification,
};
pub use dimension::{
    density_constant, directional_constant, doubling_constant, log_iter, log_star,
    ConstantEstimate, Method,
};
pub use space::{
    DistanceMatrix, Direction, Mode, Nearest, QuasiMetric, Query, QueryDistances,
    ValidationReport,
};
pub use transforms::{to_max_metric, to_min_semimetric, to_sum_metric, SymmetricSpace};

/// Default relative tolerance for triangle-inequality checks.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;
