//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Instance data violates a type invariant.
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    /// Assignment matrix violates a type invariant (shape, row sums, binarity).
    #[error("invalid assignment: {0}")]
    InvalidAssignment(String),

    /// A resource allocation is inconsistent with the assignment it is paired
    /// with; `helper` is the 1-based TDMA slot of the offending node.
    #[error("invalid allocation at helper {helper}: {reason}")]
    InvalidAllocation { helper: usize, reason: String },

    /// Positive bits requested over a zero-duration link.
    #[error("link requires infinite power: {bits} bits in zero time")]
    InfinitePower { bits: f64 },

    /// Non-positive duration where a positive one is required.
    #[error("non-positive duration: {0}")]
    NonPositiveDuration(f64),

    /// The problem (or a scheme's induced subproblem) has no feasible point.
    #[error("infeasible: {0}")]
    Infeasible(String),

    /// The interior-point solver exhausted its Newton-step budget.
    #[error("solver exceeded its iteration budget")]
    MaxIterations,

    /// Exhaustive enumeration would exceed the configured limit.
    #[error("enumeration of {combinations} assignments exceeds limit {limit}")]
    EnumerationTooLarge { combinations: u128, limit: u128 },
}
