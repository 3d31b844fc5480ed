//! Differential approximants.
//!
//! A differential approximant of order M for a series F is a holonomic ODE
//!   sum_{k=0}^M Q_k(t) (t d/dt)^k F~(t) = P(t)
//! whose power-series solution matches a prefix of F. Matching coefficients
//! gives a homogeneous linear system over the exact (rationalised) series
//! coefficients; it is solved exactly by a multi-modular elimination with CRT
//! reconstruction, so ill-conditioning cannot smear the satellite-singularity
//! structure. The zeros of Q_M estimate singularity locations and the
//! indicial equation supplies the local exponent; families of approximants
//! with varied degrees give error bars and extend the series beyond the
//! exactly known terms.

pub mod extend;
pub mod fit;
pub mod roots;
pub mod singularity;
pub mod solve;
pub mod spec;
pub mod testfn;

pub use extend::{extend_series, ExtensionResult};
pub use fit::{fit_approximant, HolonomicApproximant, SeriesData};
pub use roots::aberth_roots;
pub use singularity::{ensemble_scan, find_singularities, EnsembleStats, SingularityEstimate};
pub use spec::{default_family, ApproximantSpec};
pub use testfn::make_test_series;

#[derive(Debug, thiserror::Error)]
pub enum DaError {
    #[error("overdetermined system has no nullspace (order {order}, {unknowns} unknowns)")]
    Overdetermined { order: usize, unknowns: usize },
    #[error("defective degree spec: nullspace dimension {nullity} > 1")]
    Defective { nullity: usize },
    #[error("degree spec needs {needed} coefficients but only {available} are available")]
    TooFewTerms { needed: usize, available: usize },
    #[error("root finder did not converge: {0}")]
    RootFinding(String),
    #[error("no common dominant-singularity cluster: {0}")]
    NoCluster(String),
    #[error("ensemble collapse: {0}")]
    EnsembleCollapse(String),
    #[error("internal reconstruction failure: {0}")]
    Reconstruction(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, DaError>;
