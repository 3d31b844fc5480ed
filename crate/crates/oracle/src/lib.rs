//! Ground truth for the series pipeline, by direct combinatorics.
//!
//! Everything here is definition-level: the stack-sorting map as a recursion
//! and as a stack simulation, exhaustive sortability counts, preimage counts
//! both by brute force and by the hook decomposition, the statistics (legal
//! spaces, tail length) that drive the two-catalytic-variable generating
//! function, and small-order expansions of that generating function with its
//! transformation chain down to the grid form Q(t,x,a).

pub mod counts;
pub mod jseries;
pub mod perm;
pub mod poly;
pub mod preimage;
pub mod qchain;
pub mod stats;
pub mod west;

pub use counts::count_sortable;
pub use perm::Permutation;
pub use preimage::{preimage_count_brute, preimage_count_decomposition};
pub use stats::{stats, PermStats};
pub use west::west_check;

#[derive(Debug, thiserror::Error)]
pub enum OracleError {
    #[error("enumeration cap exceeded: {0}")]
    Cap(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
}

pub type Result<T> = std::result::Result<T, OracleError>;
