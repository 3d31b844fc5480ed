//! Ratio-based asymptotic analysis of counting sequences whose dominant
//! singularity carries confluent logarithms:
//!   W(t) ~ C (1 - mu t)^alpha log^beta(1 - mu t)
//! so that coefficients behave like mu^n n^(-alpha-1) times a cascade of
//! 1/log n corrections. Every estimator here is a pure function of a
//! high-precision coefficient slice, returns its values together with the
//! abscissa the corresponding plot uses, and recovers its planted parameters
//! exactly when fed a synthetic series built from its own model.

pub mod estimators;
pub mod export;
pub mod fits;
pub mod model;

pub use estimators::{
    amplitude_fit, beta_from_intercepts, beta_from_ratios, estimator_g, linear_intercepts,
    normalized_ratio_estimator, ratios, EstimatorKind, EstimatorSeries,
};
pub use export::write_estimator_csv;
pub use fits::{windowed_fit_coeffs, windowed_fit_ratios, ParameterTrack};
pub use model::{fs_coefficients, model_predict, AsymptoticModel};

#[derive(Debug, thiserror::Error)]
pub enum AsymptoticsError {
    #[error("series too short: need at least {need} terms, have {have}")]
    TooShort { need: usize, have: usize },
    #[error("zero coefficient at n = {0} breaks the ratio sequence")]
    ZeroCoefficient(usize),
    #[error("{0}")]
    InvalidInput(String),
    #[error("singular fitting window at n = {0}")]
    SingularWindow(usize),
}

pub type Result<T> = std::result::Result<T, AsymptoticsError>;

use num_bigint::BigInt;
use stacksort_numeric::{bits_for_digits, BigFloat};

/// High-precision view of a coefficient sequence, 1-indexed: `values[0]`
/// is the n = 1 coefficient.
#[derive(Debug, Clone)]
pub struct PrecSeries {
    pub values: Vec<BigFloat>,
    pub prec: u32,
}

impl PrecSeries {
    pub fn from_bigints(coeffs: &[BigInt], digits: u32) -> Self {
        let prec = bits_for_digits(digits);
        PrecSeries {
            values: coeffs
                .iter()
                .map(|c| BigFloat::from_bigint(c, prec))
                .collect(),
            prec,
        }
    }

    pub fn from_floats(values: Vec<BigFloat>) -> Self {
        let prec = values.iter().map(|v| v.prec()).max().unwrap_or(64);
        PrecSeries { values, prec }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Coefficient w_n (1-indexed).
    pub fn at(&self, n: usize) -> &BigFloat {
        &self.values[n - 1]
    }
}
