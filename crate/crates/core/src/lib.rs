//! Exact generation of the 3-stack-sortable counting sequence w_n.
//!
//! The generating function Q(t,x,a) satisfies a quadratic functional equation in
//! two catalytic variables; its t-coefficients Q_n(x,a) are polynomials of degree
//! n+1 in each variable and obey a convolution recurrence. Evaluating that
//! recurrence on the integer grid (x,a) in [1, N+2]^2 modulo many 32-bit primes,
//! recovering the x=0 and a=0 lines from the degree bound by alternating binomial
//! sums, and combining residues with the Chinese Remainder Theorem yields w_n =
//! Q_n(0,0) for n <= N. A certification step turns the heuristic prime count
//! into a proof that the reconstructed integers are exact.
//!
//! Note on the recurrence: the printed form of the coefficient recurrence one
//! derives from the functional equation carries a spurious factor t on the
//! convolution term if the t-extraction is transcribed too literally. The
//! convolution here is over levels j + j' = n - 1 with no extra t; this is
//! cross-checked against brute-force enumeration in the oracle crate and
//! against the exact-integer engine in this crate.

pub mod certify;
pub mod crt;
pub mod engine;
pub mod exact;
pub mod orchestrate;
pub mod primes;
pub mod series;

pub use certify::{certify, CertificationReport};
pub use crt::crt_combine;
pub use engine::{compute_series_mod_p, EngineLimits, ModularRun};
pub use exact::reference_compute_exact;
pub use orchestrate::{run_compute, ComputeConfig, RunManifest};
pub use primes::{generate_primes, plan_primes, PrimePlan};
pub use series::{CoefficientSeries, Provenance};

/// Errors across the series pipeline. Exit-code mapping: certification
/// failures are distinct from resource exhaustion and invariant violations.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("certification failed: N*w_n >= P at n={n} (add primes and re-run)")]
    CertificationFailed { n: usize },
    #[error("invariant violation: {0}")]
    Invariant(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error in {context}: {message}")]
    Parse { context: String, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
