//! Reference implementations and test harnesses for `pairrank`.
//!
//! * [`naive`]: every algorithm rewritten from its definition with plain loops.
//! * [`generator`]: seeded random comparison sets.
//! * [`differential`]: optimized vs. naive agreement, one JSON report per case.
//! * [`property`]: the corner-case battery.
//! * [`exact`]: direct solves for the eigenvector and PageRank on tiny instances.

pub mod differential;
pub mod exact;
pub mod generator;
pub mod naive;
pub mod property;

pub use differential::{run_case, run_suite, CaseReport};
pub use generator::DifferentialCase;
pub use naive::naive_rate;
pub use property::{property_suite, PropertyReport};
