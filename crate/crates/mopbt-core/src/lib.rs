//! Core algorithms for multi-objective population-based training.
//!
//! Everything in this crate is pure computation over objective vectors:
//! Pareto domination, non-dominated sorting, population ranking orders,
//! scalarization of objective vectors, and front-quality metrics
//! (hypervolume, reference points, coverage, gap curves).
//!
//! The crate is `no_std` (with `alloc`) so the same code can back the
//! std-side engine, tests, and any embedded consumer. All objectives are
//! maximized; callers with minimization problems negate before entry.

#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

mod dominance;
mod error;
mod hypervolume;
mod metrics;
mod objective;
mod pareto;
mod ranking;
mod scalarize;
mod sorting;

pub use dominance::{constraint_dominates, dominates};
pub use error::CoreError;
pub use hypervolume::hypervolume;
pub use metrics::{
    compute_reference_point, coverage, log_hv_gap_curve, ArchiveEntry, FrontArchive, GapPoint,
    ReferencePoint, TimedObjective, DEFAULT_COVERAGE_DIVISIONS, GAP_FLOOR, REFERENCE_MARGIN,
};
pub use objective::{ConstraintStatus, ObjectiveVector};
pub use pareto::pareto_filter;
pub use ranking::{
    crowding_distance_order, crowding_distances, greedy_scattered_subset_order,
    greedy_scattered_subset_order_with,
};
pub use scalarize::{
    chebyshev, golovin, max_scalarization, parego, sample_unit_weight, weighted_sum,
    ScalarizerKind, DEFAULT_PAREGO_RHO,
};
pub use sorting::{non_dominated_sort, non_dominated_sort_constrained, FrontPartition};

/// Convenience alias used throughout the crate.
pub type Result<T> = core::result::Result<T, CoreError>;
