//! Series extension: each approximant, being a holonomic ODE, generates all
//! later coefficients from its recurrence; the ensemble mean (after outlier
//! rejection) predicts them and the spread prices their accuracy.

use crate::fit::HolonomicApproximant;
use crate::singularity::robust_mean_std;
use crate::{DaError, Result};
use num_bigint::BigInt;
use num_traits::Zero;
use stacksort_numeric::{bits_for_digits, BigFloat};

#[derive(Debug)]
pub struct ExtensionResult {
    /// Index of the first predicted coefficient (t^start_n).
    pub start_n: usize,
    pub values: Vec<BigFloat>,
    pub stddev: Vec<BigFloat>,
    /// floor(log10 |mean| / stddev): significant digits claimed per value.
    pub declared_digits: Vec<i32>,
    /// Members dropped and why (vanishing leading factor, short degrees ...).
    pub discarded: Vec<String>,
    pub members_used: usize,
}

/// Extend the exact prefix (dyadic coefficients of t^0..t^(L-1)) to
/// `target_n` inclusive using the ensemble's forward recurrences; stop early
/// when fewer than `digit_threshold` digits survive at some order.
pub fn extend_series(
    exact: &[(BigInt, i64)],
    ensemble: &[HolonomicApproximant],
    target_n: usize,
    digit_threshold: u32,
    work_digits: u32,
) -> Result<ExtensionResult> {
    let l = exact.len();
    if target_n < l {
        return Err(DaError::InvalidInput(format!(
            "target {target_n} is inside the exact prefix of length {l}"
        )));
    }
    let work_digits = work_digits.max(digit_threshold + 20);
    let prec = bits_for_digits(work_digits);

    let mut tracks: Vec<Vec<BigFloat>> = Vec::new();
    let mut discarded = Vec::new();
    'member: for appr in ensemble {
        // leading factor L(n) = sum_k q_{k,0} n^k must stay nonzero (exact check)
        for n in l..=target_n {
            let mut lead = BigInt::zero();
            let nn = BigInt::from(n);
            let mut pow = BigInt::from(1u32);
            for k in 0..=appr.order() {
                lead += appr.q_coeff(k, 0) * &pow;
                pow = &pow * &nn;
            }
            if lead.is_zero() {
                discarded.push(format!(
                    "order-{} member: leading recurrence factor vanishes at n = {n}",
                    appr.order()
                ));
                continue 'member;
            }
        }
        // forward recurrence in high precision
        let mut f: Vec<BigFloat> = exact
            .iter()
            .map(|(c, e)| BigFloat::from_parts(c.clone(), *e, prec))
            .collect();
        let norm = appr.normalizer();
        for n in l..=target_n {
            // sum_k sum_m q_{k,m} (n-m)^k f_{n-m} = p_n (zero past deg P)
            let mut acc = BigFloat::zero(prec);
            for (k, &dk) in appr.spec.q_degrees.iter().enumerate() {
                for m in 1..=dk.min(n) {
                    if n - m >= f.len() {
                        continue;
                    }
                    let factor = BigInt::from(n - m).pow(k as u32);
                    let q = BigFloat::from_ratio(&(appr.q_coeff(k, m) * factor), norm, prec);
                    acc = &acc + &(&q * &f[n - m]);
                }
            }
            if n <= appr.spec.p_degree {
                let p = BigFloat::from_ratio(appr.p_coeff(n), norm, prec);
                acc = &acc - &p;
            }
            let mut lead = BigInt::zero();
            let nn = BigInt::from(n);
            let mut pow = BigInt::from(1u32);
            for k in 0..=appr.order() {
                lead += appr.q_coeff(k, 0) * &pow;
                pow = &pow * &nn;
            }
            let lead_f = BigFloat::from_ratio(&lead, norm, prec);
            f.push(&(-&acc) / &lead_f);
        }
        tracks.push(f[l..].to_vec());
    }
    if tracks.is_empty() {
        return Err(DaError::EnsembleCollapse(format!(
            "all {} members discarded: {discarded:?}",
            ensemble.len()
        )));
    }

    let mut values = Vec::new();
    let mut stddev = Vec::new();
    let mut declared = Vec::new();
    for i in 0..=(target_n - l) {
        let column: Vec<BigFloat> = tracks.iter().map(|t| t[i].clone()).collect();
        let (mean, std) = robust_mean_std(&column, prec);
        let digits = declared_digits(&mean, &std, work_digits);
        if digits < digit_threshold as i32 {
            break;
        }
        values.push(mean);
        stddev.push(std);
        declared.push(digits);
    }
    if values.is_empty() {
        return Err(DaError::EnsembleCollapse(format!(
            "ensemble spread exceeds the {digit_threshold}-digit threshold at the first predicted term"
        )));
    }
    Ok(ExtensionResult {
        start_n: l,
        values,
        stddev,
        declared_digits: declared,
        discarded,
        members_used: tracks.len(),
    })
}

fn declared_digits(mean: &BigFloat, std: &BigFloat, work_digits: u32) -> i32 {
    if mean.is_zero() {
        return 0;
    }
    if std.is_zero() {
        return work_digits as i32;
    }
    let ratio_log2 = mean.abs().ilog2() - std.ilog2();
    ((ratio_log2 as f64) * std::f64::consts::LOG10_2).floor() as i32
}

impl ExtensionResult {
    /// Value at absolute order n (t^n).
    pub fn value_at(&self, n: usize) -> Option<&BigFloat> {
        n.checked_sub(self.start_n).and_then(|i| self.values.get(i))
    }

    pub fn last_n(&self) -> usize {
        self.start_n + self.values.len() - 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fit::{fit_approximant, SeriesData};
    use crate::spec::ApproximantSpec;
    use num_traits::One;

    #[test]
    fn rational_series_extends_exactly() {
        // 1/(1-3t): the recurrence is exact, stddev is zero
        let mut v = vec![BigInt::one()];
        for _ in 1..12 {
            let last = v.last().unwrap() * 3;
            v.push(last);
        }
        let series = SeriesData::from_integers(&v);
        let specs = [
            ApproximantSpec {
                order: 1,
                q_degrees: vec![1, 1],
                p_degree: 0,
            },
            ApproximantSpec {
                order: 1,
                q_degrees: vec![2, 1],
                p_degree: 0,
            },
        ];
        let ensemble: Vec<_> = specs
            .iter()
            .map(|s| fit_approximant(&series, s).unwrap())
            .collect();
        let ext = extend_series(&series.coeffs, &ensemble, 20, 10, 40).unwrap();
        assert_eq!(ext.start_n, 12);
        assert_eq!(ext.last_n(), 20);
        let mut expect = BigInt::from(3u32).pow(12);
        for (i, val) in ext.values.iter().enumerate() {
            let diff = (val - &BigFloat::from_bigint(&expect, 200)).abs();
            assert!(diff.magnitude_below(expect.bits() as i64 - 100), "n = {}", 12 + i);
            assert!(ext.stddev[i].is_zero() || ext.stddev[i].magnitude_below(-60));
            expect *= 3u32;
        }
    }

    #[test]
    fn target_inside_prefix_rejected() {
        let series = SeriesData::from_integers(&[BigInt::one(), BigInt::one()]);
        assert!(extend_series(&series.coeffs, &[], 1, 5, 30).is_err());
    }
}
