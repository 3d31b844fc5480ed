//! Post-hoc proof that the CRT output is the true sequence: since
//! w_n <= n w_{n-1}, an output with N w~_n < P for every n is exact.

use crate::primes::PrimePlan;
use crate::series::{CoefficientSeries, Provenance};
use crate::{Error, Result};
use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;

#[derive(Debug, Clone, serde::Serialize)]
pub struct CertificationReport {
    pub n: usize,
    pub product_digits: usize,
    pub max_coefficient_digits: usize,
    pub passed: bool,
    /// P / (N * max w~_n), as log10; f64 mirror for quick reading.
    pub margin_log10: f64,
    /// Smallest n violating N w~_n < P, when failed.
    pub first_violation: Option<usize>,
}

/// Check N w~_n < P for every n; upgrade provenance on success.
pub fn certify(series: &mut CoefficientSeries, plan: &PrimePlan) -> Result<CertificationReport> {
    if series.len() != plan.target_n {
        return Err(Error::InvalidInput(format!(
            "series length {} does not match plan order {}",
            series.len(),
            plan.target_n
        )));
    }
    let n = plan.target_n;
    let p = BigInt::from(plan.product.clone());
    let n_big = BigInt::from(n as u64);
    let mut first_violation = None;
    let mut max_coeff = BigInt::from(0u32);
    for (i, w) in series.coeffs.iter().enumerate() {
        if w > &max_coeff {
            max_coeff = w.clone();
        }
        if first_violation.is_none() && &n_big * w >= p {
            first_violation = Some(i + 1);
        }
    }
    let passed = first_violation.is_none();
    if passed {
        series.provenance = Provenance::ExactCertified;
        series.validate_growth()?;
    }
    let margin_log10 = ratio_log10(&plan.product, &(&n_big * &max_coeff));
    Ok(CertificationReport {
        n,
        product_digits: plan.product_digits(),
        max_coefficient_digits: max_coeff.to_string().len(),
        passed,
        margin_log10,
        first_violation,
    })
}

fn ratio_log10(num: &BigUint, den: &BigInt) -> f64 {
    // log10 via bit lengths plus leading-word correction; plenty for a report
    let den = den.magnitude();
    if den.bits() == 0 {
        return f64::INFINITY;
    }
    let log2 = |v: &BigUint| -> f64 {
        let bits = v.bits();
        let top = if bits > 64 {
            (v >> (bits - 64)).to_u64().unwrap() as f64
        } else {
            v.to_u64().unwrap() as f64
        };
        let shift = bits.saturating_sub(64) as f64;
        top.log2() + shift
    };
    (log2(num) - log2(den)) * std::f64::consts::LOG10_2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primes::{generate_primes, PrimePlan, PRIME_BOUND};
    use num_bigint::BigInt;

    #[test]
    fn small_series_certifies_with_two_primes() {
        let plan = PrimePlan::from_primes(generate_primes(2, PRIME_BOUND), 5).unwrap();
        let mut s = CoefficientSeries {
            name: "w".into(),
            coeffs: [1u64, 2, 6, 24, 114].iter().map(|&v| BigInt::from(v)).collect(),
            provenance: Provenance::ExactUncertified,
        };
        let report = certify(&mut s, &plan).unwrap();
        assert!(report.passed);
        assert_eq!(s.provenance, Provenance::ExactCertified);
        // P ~ 1.8e19 against 5*114: margin above 1e16
        assert!(report.margin_log10 > 16.0);
    }

    #[test]
    fn fabricated_near_product_value_fails() {
        let plan = PrimePlan::from_primes(vec![11, 7], 2).unwrap();
        // w~_2 = P - 1 = 76: 2*76 >= 77
        let mut s = CoefficientSeries {
            name: "w".into(),
            coeffs: vec![BigInt::from(1), BigInt::from(76)],
            provenance: Provenance::ExactUncertified,
        };
        let report = certify(&mut s, &plan).unwrap();
        assert!(!report.passed);
        assert_eq!(report.first_violation, Some(2));
        assert_eq!(s.provenance, Provenance::ExactUncertified);
    }

    #[test]
    fn margin_matches_large_run_arithmetic() {
        // synthetic check of the reported margin at production scale:
        // P of 105 primes (~2.9e1011) against N=1000, max w~ ~ 2.4e975
        let plan = PrimePlan::from_primes(generate_primes(105, PRIME_BOUND), 1000).unwrap();
        let max_w = BigInt::from(24u64) * BigInt::from(10u64).pow(974);
        let margin = ratio_log10(&plan.product, &(BigInt::from(1000u64) * &max_w));
        assert!((32.0..34.5).contains(&margin), "margin_log10 = {margin}");
    }
}
