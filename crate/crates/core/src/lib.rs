//! Weighted A* with post hoc suboptimality bounds.
//!
//! The crate provides a generic best-first search engine ([`search`]), the
//! bound computations that turn its trace into certified suboptimality
//! estimates ([`bounds`]), benchmark state spaces ([`domains`]), an
//! optimal-cost and heuristic-property oracle ([`oracle`]) and an experiment
//! harness ([`bench`]).
//!
//! Costs are generic over [`Scalar`]; the aliases below fix the common
//! instantiations.

pub mod bench;
pub mod bounds;
pub mod domains;
pub mod oracle;
pub mod scalar;
pub mod search;

pub use bounds::{BoundError, BoundReport, TraceCollector, TraceSummary};
pub use scalar::{Rational, Scalar};
pub use search::{weighted_astar, Limits, SearchError, SearchOptions, SearchResult, SearchStatus, StateSpace, Weight};

/// Default cost type used by the domains, the harness and the CLI.
pub type Cost = f64;
pub type Weight64 = Weight<f64>;
pub type Report64 = BoundReport<f64>;
pub type Trace64 = TraceSummary<f64>;
pub type ExactWeight = Weight<Rational>;
pub type ExactReport = BoundReport<Rational>;

/// The weight sweep used throughout the experiments.
pub const DEFAULT_WEIGHTS: [f64; 6] = [1.2, 1.5, 2.0, 4.0, 8.0, 16.0];
