//! Regret of data-driven policies when historical samples come from
//! heterogeneous distributions inside a Kolmogorov, total-variation or
//! Wasserstein ball around the out-of-sample distribution.
//!
//! Everything is exact on finite-support measures: distances, expected
//! objectives, oracles and worst-case constructions. Monte-Carlo is only
//! used to estimate finite-sample regret.

pub mod approx;
pub mod error;
pub mod measures;
pub mod metrics;
pub mod policies;
pub mod problems;
pub mod random;
pub mod regret;

pub use error::{Error, Result};
pub use measures::FiniteMeasure;
pub use metrics::{in_ball, kolmogorov, total_variation, wasserstein1, DistanceKind};
pub use policies::{recommended_parameter, PolicyKind, PolicySpec};
pub use problems::{ProblemSpec, Sense};
pub use regret::{AdversarialPair, Bounds, GridConfig, RegretReport};
