//! Ranking of items from pairwise comparison judgments.
//!
//! Judgments are supplied as [`ComparisonRecord`]s: a left item, a right item, the
//! outcome and an optional weight. Every algorithm turns them into per-item scores
//! wrapped in a [`RatingResult`]:
//!
//! * [`counting`] and [`average_win_rate`] tally outcomes,
//! * [`elo`] applies sequential rating updates in input order,
//! * [`bradley_terry`] and [`newman`] fit maximum-likelihood strengths,
//! * [`eigen`] and [`pagerank`] score items by the stationary structure of the win graph.
//!
//! Internally the algorithms work on dense integer ids assigned by an [`Index`]. An
//! index built once can be passed to repeated calls (for example, bootstrap rounds) so
//! that items dropped from a resample keep their place in the output.
//!
//! ```
//! use pairrank::{elo, ComparisonRecord, EloParams, Winner};
//!
//! let records = vec![
//!     ComparisonRecord::new("pizza", "burger", Winner::Left),
//!     ComparisonRecord::new("burger", "sushi", Winner::Right),
//!     ComparisonRecord::new("pizza", "sushi", Winner::Draw),
//! ];
//! let result = elo(&records, None, &EloParams::default()).unwrap();
//! assert!((result.scores["pizza"] - 1014.972058).abs() < 1e-6);
//! ```

pub mod analytics;
mod error;
pub mod matrices;
pub mod model;
pub mod ratings;

pub use analytics::{
    bootstrap_ci, pairwise_win_rates, quantile, rank, resample, BootstrapInterval, BootstrapSummary,
    PairwiseMatrix, RankedScore,
};
pub use error::{Error, Result};
pub use matrices::{effective_matrix, win_matrices, WinMatrices};
pub use model::{validate_batch, ComparisonRecord, Index, IndexedComparison, Winner};
pub use ratings::{
    average_win_rate, bradley_terry, counting, eigen, elo, list_algorithms, newman, pagerank,
    rate, rate_indexed, Algorithm, AlgorithmDescriptor, AlgorithmParams, EloParams, IterParams,
    ParameterDescriptor, RatingResult,
};
