//! Estimator sequences. Conventions:
//!   r_n = w_n / w_{n-1}                                   (vs 1/n)
//!   l_n = n r_n - (n-1) r_{n-1}                           (vs 1/(n log^2 n))
//!   g_n = (r_n/mu - 1) n                                  (vs 1/n and 1/log n)
//!   beta_n - 1 = ((r_n/mu - 1) n + alpha + 1) log n       (vs 1/log n)
//!   beta_n - 1 = (1 - l_n/mu) n log^2 n                   (vs 1/log n)
//!   R_n = s_n/s_{n-1}, s_n = w_n n^(alpha+1)/mu^n;
//!   (R_n - 1) n log n                                     (vs 1/log n)
//! plus the amplitude fit of s_n ~ e1 n^(beta-1) + e2 n^(beta-2) + e3 n^(beta-3).

use crate::{AsymptoticsError, PrecSeries, Result};
use stacksort_numeric::BigFloat;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimatorKind {
    Ratio,
    LinearIntercept,
    G,
    BetaFromRatios,
    BetaFromIntercepts,
    NormalizedRatio,
    AmplitudeE1,
    AmplitudeE2,
    AmplitudeE3,
}

impl EstimatorKind {
    pub fn label(&self) -> &'static str {
        match self {
            EstimatorKind::Ratio => "ratios",
            EstimatorKind::LinearIntercept => "intercepts",
            EstimatorKind::G => "g",
            EstimatorKind::BetaFromRatios => "beta_ratio",
            EstimatorKind::BetaFromIntercepts => "beta_intercept",
            EstimatorKind::NormalizedRatio => "Rn",
            EstimatorKind::AmplitudeE1 => "e1",
            EstimatorKind::AmplitudeE2 => "e2",
            EstimatorKind::AmplitudeE3 => "e3",
        }
    }
}

/// The plotting abscissa each figure uses for this estimator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Abscissa {
    OneOverN,
    OneOverLogN,
    OneOverNLog2N,
    OneOverNLogN,
}

impl Abscissa {
    pub fn value(&self, n: usize, prec: u32) -> BigFloat {
        let nf = BigFloat::from_u64(n as u64, prec);
        let one = BigFloat::from_i64(1, prec);
        match self {
            Abscissa::OneOverN => &one / &nf,
            Abscissa::OneOverLogN => &one / &nf.ln(),
            Abscissa::OneOverNLog2N => {
                let l = nf.ln();
                &one / &(&nf * &(&l * &l))
            }
            Abscissa::OneOverNLogN => &one / &(&nf * &nf.ln()),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Abscissa::OneOverN => "1/n",
            Abscissa::OneOverLogN => "1/log(n)",
            Abscissa::OneOverNLog2N => "1/(n log^2 n)",
            Abscissa::OneOverNLogN => "1/(n log n)",
        }
    }
}

/// A named estimator sequence: values[i] corresponds to n = start_n + i.
#[derive(Debug, Clone)]
pub struct EstimatorSeries {
    pub kind: EstimatorKind,
    pub start_n: usize,
    pub values: Vec<BigFloat>,
    pub abscissa: Abscissa,
}

impl EstimatorSeries {
    /// Value at absolute index n.
    pub fn at(&self, n: usize) -> &BigFloat {
        &self.values[n - self.start_n]
    }

    pub fn last_n(&self) -> usize {
        self.start_n + self.values.len() - 1
    }
}

/// r_n = w_n / w_{n-1} for n = 2..=len.
pub fn ratios(series: &PrecSeries) -> Result<EstimatorSeries> {
    if series.len() < 2 {
        return Err(AsymptoticsError::TooShort {
            need: 2,
            have: series.len(),
        });
    }
    let mut values = Vec::with_capacity(series.len() - 1);
    for n in 2..=series.len() {
        if series.at(n - 1).is_zero() {
            return Err(AsymptoticsError::ZeroCoefficient(n - 1));
        }
        values.push(series.at(n) / series.at(n - 1));
    }
    Ok(EstimatorSeries {
        kind: EstimatorKind::Ratio,
        start_n: 2,
        values,
        abscissa: Abscissa::OneOverN,
    })
}

/// l_n = n r_n - (n-1) r_{n-1}, cancelling the O(1/n) ratio correction.
pub fn linear_intercepts(r: &EstimatorSeries) -> Result<EstimatorSeries> {
    if r.values.len() < 2 {
        return Err(AsymptoticsError::TooShort {
            need: 3,
            have: r.values.len() + 1,
        });
    }
    let prec = r.values[0].prec();
    let mut values = Vec::with_capacity(r.values.len() - 1);
    for n in r.start_n + 1..=r.last_n() {
        let nf = BigFloat::from_u64(n as u64, prec);
        let nm1 = BigFloat::from_u64(n as u64 - 1, prec);
        values.push(&(&nf * r.at(n)) - &(&nm1 * r.at(n - 1)));
    }
    Ok(EstimatorSeries {
        kind: EstimatorKind::LinearIntercept,
        start_n: r.start_n + 1,
        values,
        abscissa: Abscissa::OneOverNLog2N,
    })
}

/// g_n = (r_n/mu - 1) n.
pub fn estimator_g(r: &EstimatorSeries, mu: &BigFloat) -> EstimatorSeries {
    let prec = r.values[0].prec().max(mu.prec());
    let one = BigFloat::from_i64(1, prec);
    let values = r
        .values
        .iter()
        .enumerate()
        .map(|(i, rn)| {
            let n = BigFloat::from_u64((r.start_n + i) as u64, prec);
            &(&(rn / mu) - &one) * &n
        })
        .collect();
    EstimatorSeries {
        kind: EstimatorKind::G,
        start_n: r.start_n,
        values,
        abscissa: Abscissa::OneOverLogN,
    }
}

/// (beta_n - 1) from ratios: ((r_n/mu - 1) n + alpha + 1) log n.
pub fn beta_from_ratios(r: &EstimatorSeries, mu: &BigFloat, alpha: &BigFloat) -> EstimatorSeries {
    let g = estimator_g(r, mu);
    let prec = g.values[0].prec();
    let one = BigFloat::from_i64(1, prec);
    let values = g
        .values
        .iter()
        .enumerate()
        .map(|(i, gn)| {
            let n = BigFloat::from_u64((g.start_n + i) as u64, prec);
            &(&(gn + alpha) + &one) * &n.ln()
        })
        .collect();
    EstimatorSeries {
        kind: EstimatorKind::BetaFromRatios,
        start_n: g.start_n,
        values,
        abscissa: Abscissa::OneOverLogN,
    }
}

/// (beta_n - 1) from intercepts: (1 - l_n/mu) n log^2 n.
pub fn beta_from_intercepts(l: &EstimatorSeries, mu: &BigFloat) -> EstimatorSeries {
    let prec = l.values[0].prec().max(mu.prec());
    let one = BigFloat::from_i64(1, prec);
    let values = l
        .values
        .iter()
        .enumerate()
        .map(|(i, ln_val)| {
            let n = BigFloat::from_u64((l.start_n + i) as u64, prec);
            let log = n.ln();
            &(&(&one - &(ln_val / mu)) * &n) * &(&log * &log)
        })
        .collect();
    EstimatorSeries {
        kind: EstimatorKind::BetaFromIntercepts,
        start_n: l.start_n,
        values,
        abscissa: Abscissa::OneOverLogN,
    }
}

/// Normalised coefficients s_n = w_n n^(alpha+1)/mu^n, their ratios R_n, and
/// the estimator (R_n - 1) n log n -> beta - 1.
pub fn normalized_ratio_estimator(
    series: &PrecSeries,
    mu: &BigFloat,
    alpha: u32,
) -> Result<EstimatorSeries> {
    if series.len() < 3 {
        return Err(AsymptoticsError::TooShort {
            need: 3,
            have: series.len(),
        });
    }
    let prec = series.prec.max(mu.prec());
    let s = normalized_coefficients(series, mu, alpha);
    let one = BigFloat::from_i64(1, prec);
    let mut values = Vec::with_capacity(s.len() - 1);
    for n in 2..=s.len() {
        if s[n - 2].is_zero() {
            return Err(AsymptoticsError::ZeroCoefficient(n - 1));
        }
        let rn = &s[n - 1] / &s[n - 2];
        let nf = BigFloat::from_u64(n as u64, prec);
        values.push(&(&(&rn - &one) * &nf) * &nf.ln());
    }
    Ok(EstimatorSeries {
        kind: EstimatorKind::NormalizedRatio,
        start_n: 2,
        values,
        abscissa: Abscissa::OneOverLogN,
    })
}

/// s_n = w_n n^(alpha+1) / mu^n (indexed from n = 1).
pub fn normalized_coefficients(series: &PrecSeries, mu: &BigFloat, alpha: u32) -> Vec<BigFloat> {
    let prec = series.prec.max(mu.prec());
    let mut mu_pow = BigFloat::from_i64(1, prec);
    (1..=series.len())
        .map(|n| {
            mu_pow = &mu_pow * mu;
            let nf = BigFloat::from_u64(n as u64, prec);
            &(series.at(n) * &nf.powi(alpha as u64 + 1)) / &mu_pow
        })
        .collect()
}

/// Per-window amplitudes (e1, e2, e3) fitted through successive triples
/// {s_{k-1}, s_k, s_{k+1}} against s_n = e1 n^(beta-1) + e2 n^(beta-2)
/// + e3 n^(beta-3), for an assumed integer beta.
pub fn amplitude_fit(
    series: &PrecSeries,
    mu: &BigFloat,
    alpha: u32,
    beta: i32,
) -> Result<[EstimatorSeries; 3]> {
    if series.len() < 4 {
        return Err(AsymptoticsError::TooShort {
            need: 4,
            have: series.len(),
        });
    }
    let prec = series.prec.max(mu.prec());
    let s = normalized_coefficients(series, mu, alpha);
    let mut tracks: [Vec<BigFloat>; 3] = [Vec::new(), Vec::new(), Vec::new()];
    for k in 2..s.len() {
        // rows n = k-1, k, k+1 with columns n^(beta-1), n^(beta-2), n^(beta-3)
        let mut m = Vec::with_capacity(3);
        let mut rhs = Vec::with_capacity(3);
        for (row, n) in (k - 1..=k + 1).enumerate() {
            let nf = BigFloat::from_u64(n as u64, prec);
            let lead = power_int(&nf, beta - 1, prec);
            let cols = vec![
                lead.clone(),
                &lead / &nf,
                &(&lead / &nf) / &nf,
            ];
            m.push(cols);
            rhs.push(s[n - 1].clone());
            let _ = row;
        }
        let sol = crate::fits::solve_dense(m, rhs).map_err(|_| AsymptoticsError::SingularWindow(k))?;
        for (t, v) in tracks.iter_mut().zip(sol) {
            t.push(v);
        }
    }
    let [e1, e2, e3] = tracks;
    Ok([
        EstimatorSeries {
            kind: EstimatorKind::AmplitudeE1,
            start_n: 2,
            values: e1,
            abscissa: Abscissa::OneOverLogN,
        },
        EstimatorSeries {
            kind: EstimatorKind::AmplitudeE2,
            start_n: 2,
            values: e2,
            abscissa: Abscissa::OneOverLogN,
        },
        EstimatorSeries {
            kind: EstimatorKind::AmplitudeE3,
            start_n: 2,
            values: e3,
            abscissa: Abscissa::OneOverLogN,
        },
    ])
}

/// n^e for integer e of either sign.
fn power_int(n: &BigFloat, e: i32, prec: u32) -> BigFloat {
    if e >= 0 {
        n.powi(e as u64)
    } else {
        &BigFloat::from_i64(1, prec) / &n.powi((-e) as u64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn close(a: &BigFloat, b: f64, tol: f64) -> bool {
        (a.to_f64() - b).abs() <= tol
    }

    #[test]
    fn geometric_ratios_are_constant() {
        let coeffs: Vec<BigInt> = (0..10).map(|n| BigInt::from(3u64).pow(n)).collect();
        let s = PrecSeries::from_bigints(&coeffs, 40);
        let r = ratios(&s).unwrap();
        assert!(r.values.iter().all(|v| close(v, 3.0, 1e-30)));
        let l = linear_intercepts(&r).unwrap();
        assert!(l.values.iter().all(|v| close(v, 3.0, 1e-30)));
    }

    #[test]
    fn power_law_ratio_diagnostics() {
        // c_n = (n+1) mu^n: r_n = mu (n+1)/n, g_n = 1 = theta - 1, l_n = mu
        let mu = 5u64;
        let prec = 200;
        let values: Vec<BigFloat> = (1..=40u64)
            .map(|n| {
                BigFloat::from_bigint(
                    &(BigInt::from(n + 1) * BigInt::from(mu).pow(n as u32)),
                    prec,
                )
            })
            .collect();
        let s = PrecSeries::from_floats(values);
        let r = ratios(&s).unwrap();
        let muf = BigFloat::from_u64(mu, prec);
        let g = estimator_g(&r, &muf);
        for v in &g.values {
            assert!(close(v, 1.0, 1e-40));
        }
        let l = linear_intercepts(&r).unwrap();
        for v in &l.values {
            assert!(close(v, mu as f64, 1e-38));
        }
    }

    #[test]
    fn beta_estimators_recover_planted_value() {
        // plant r_n = mu (1 - (alpha+1)/n + (beta-1)/(n log n)): the ratio
        // estimator returns beta-1 exactly at every n
        let prec = 250;
        let mu = BigFloat::parse("9.7", prec).unwrap();
        let alpha = BigFloat::from_i64(2, prec);
        let beta_minus_1 = BigFloat::from_i64(-3, prec);
        let one = BigFloat::from_i64(1, prec);
        let mut values = Vec::new();
        for n in 2..=60u64 {
            let nf = BigFloat::from_u64(n, prec);
            let corr = &(&(&alpha + &one) / &nf);
            let logterm = &beta_minus_1 / &(&nf * &nf.ln());
            values.push(&mu * &(&(&one - corr) + &logterm));
        }
        let r = EstimatorSeries {
            kind: EstimatorKind::Ratio,
            start_n: 2,
            values,
            abscissa: Abscissa::OneOverN,
        };
        let est = beta_from_ratios(&r, &mu, &alpha);
        for v in &est.values {
            assert!(close(v, -3.0, 1e-55), "got {}", v.to_decimal(20));
        }
    }

    #[test]
    fn intercept_beta_estimator_on_planted_intercepts() {
        // plant l_n = mu (1 + (1-beta)/(n log^2 n)): estimator gives beta-1
        let prec = 250;
        let mu = BigFloat::parse("9.7", prec).unwrap();
        let one = BigFloat::from_i64(1, prec);
        let beta = BigFloat::from_i64(-2, prec);
        let mut values = Vec::new();
        for n in 3..=60u64 {
            let nf = BigFloat::from_u64(n, prec);
            let log = nf.ln();
            let corr = &(&one - &beta) / &(&nf * &(&log * &log));
            values.push(&mu * &(&one + &corr));
        }
        let l = EstimatorSeries {
            kind: EstimatorKind::LinearIntercept,
            start_n: 3,
            values,
            abscissa: Abscissa::OneOverNLog2N,
        };
        let est = beta_from_intercepts(&l, &mu);
        for v in &est.values {
            assert!(close(v, -3.0, 1e-55));
        }
    }

    #[test]
    fn normalized_ratio_estimator_recovers_planted_beta() {
        // build s_n with R_n = 1 + (beta-1)/(n log n) exactly, then embed
        // w_n = s_n mu^n / n^3
        let prec = 300;
        let mu = BigFloat::from_i64(2, prec);
        let one = BigFloat::from_i64(1, prec);
        let beta_minus_1 = BigFloat::from_i64(-2, prec);
        let mut s = vec![one.clone()];
        for n in 2..=50u64 {
            let nf = BigFloat::from_u64(n, prec);
            let rn = &one + &(&beta_minus_1 / &(&nf * &nf.ln()));
            let prev = s.last().unwrap();
            s.push(prev * &rn);
        }
        let mut mu_pow = one.clone();
        let w: Vec<BigFloat> = s
            .iter()
            .enumerate()
            .map(|(i, sv)| {
                let n = i as u64 + 1;
                mu_pow = &mu_pow * &mu;
                let nf = BigFloat::from_u64(n, prec);
                &(sv * &mu_pow) / &nf.powi(3)
            })
            .collect();
        let series = PrecSeries::from_floats(w);
        let est = normalized_ratio_estimator(&series, &mu, 2).unwrap();
        for v in &est.values {
            assert!(close(v, -2.0, 1e-60), "got {}", v.to_decimal(25));
        }
    }

    #[test]
    fn amplitude_fit_exact_in_span() {
        // s_n = 5/n^3 with beta = -2: e1 = 5, e2 = e3 = 0
        let prec = 250;
        let mu = BigFloat::from_i64(3, prec);
        let mut mu_pow = BigFloat::from_i64(1, prec);
        let values: Vec<BigFloat> = (1..=30u64)
            .map(|n| {
                mu_pow = &mu_pow * &mu;
                let nf = BigFloat::from_u64(n, prec);
                // w_n = s_n mu^n / n^3 with s_n = 5/n^3
                &(&(&BigFloat::from_i64(5, prec) / &nf.powi(3)) * &mu_pow) / &nf.powi(3)
            })
            .collect();
        let series = PrecSeries::from_floats(values);
        let [e1, e2, e3] = amplitude_fit(&series, &mu, 2, -2).unwrap();
        for v in &e1.values {
            assert!(close(v, 5.0, 1e-45));
        }
        for v in e2.values.iter().chain(&e3.values) {
            assert!(close(v, 0.0, 1e-42));
        }
    }
}
