//! Calibration series with known singularity structure. The log-singularity
//! test function
//!   F(x) = -x^3 (1-x)^2 / log^3(1-x) * (1 + e^x)
//! is a power series with F(0) = 2 after the x^3/log^3 cancellation:
//!   F = (1-x)^2 (1 + e^x) / g(x)^3 with g(x) = sum_k x^k/(k+1).

use crate::fit::SeriesData;
use crate::{DaError, Result};
use num_bigint::BigInt;
use num_traits::One;
use stacksort_numeric::{bits_for_digits, BigFloat};

pub fn make_test_series(name: &str, n_terms: usize, precision_digits: u32) -> Result<SeriesData> {
    match name {
        "catalan" => Ok(SeriesData::from_integers(&catalan(n_terms))),
        "geometric" => Ok(SeriesData::from_integers(&geometric(2, n_terms))),
        "log-test" => Ok(SeriesData::from_floats(&log_test(n_terms, precision_digits))),
        other => Err(DaError::InvalidInput(format!("unknown test series {other}"))),
    }
}

pub fn catalan(n_terms: usize) -> Vec<BigInt> {
    let mut v = vec![BigInt::one()];
    for n in 1..n_terms {
        let next = &v[n - 1] * BigInt::from(2 * (2 * n as u64 - 1)) / BigInt::from(n as u64 + 1);
        v.push(next);
    }
    v.truncate(n_terms);
    v
}

pub fn geometric(mu: u64, n_terms: usize) -> Vec<BigInt> {
    let mut v = Vec::with_capacity(n_terms);
    let mut x = BigInt::one();
    for _ in 0..n_terms {
        v.push(x.clone());
        x *= mu;
    }
    v
}

/// Coefficients of the pure power law (1 - mu t)^(-theta) for rational theta,
/// by the binomial recurrence c_n = c_{n-1} * mu * (theta + n - 1)/n.
/// Exact in high-precision arithmetic for dyadic theta.
pub fn power_law(mu: u64, theta_num: i64, theta_den: u64, n_terms: usize, digits: u32) -> Vec<BigFloat> {
    let prec = bits_for_digits(digits);
    let theta = BigFloat::from_ratio(&BigInt::from(theta_num), &BigInt::from(theta_den), prec);
    let mut v = vec![BigFloat::from_i64(1, prec)];
    for n in 1..n_terms {
        let nf = BigFloat::from_u64(n as u64, prec);
        let factor = &(&theta + &nf) - &BigFloat::from_i64(1, prec);
        let next = &(&v[n - 1] * &BigFloat::from_u64(mu, prec)) * &(&factor / &nf);
        v.push(next);
    }
    v
}

fn log_test(n_terms: usize, digits: u32) -> Vec<BigFloat> {
    let prec = bits_for_digits(digits + 10);
    let one = BigFloat::from_i64(1, prec);
    // g = sum_k x^k/(k+1)
    let g: Vec<BigFloat> = (0..n_terms)
        .map(|k| &one / &BigFloat::from_u64(k as u64 + 1, prec))
        .collect();
    let g3 = mul_trunc(&mul_trunc(&g, &g, n_terms), &g, n_terms);
    // numerator (1-x)^2 (1 + e^x)
    let mut num = vec![BigFloat::zero(prec); n_terms];
    let mut inv_fact = one.clone();
    for (k, slot) in num.iter_mut().enumerate() {
        if k > 0 {
            inv_fact = &inv_fact / &BigFloat::from_u64(k as u64, prec);
        }
        *slot = inv_fact.clone(); // e^x
    }
    num[0] = &num[0] + &one; // 1 + e^x
    let sq = {
        let mut p = vec![BigFloat::zero(prec); n_terms];
        p[0] = one.clone();
        if n_terms > 1 {
            p[1] = BigFloat::from_i64(-2, prec);
        }
        if n_terms > 2 {
            p[2] = one.clone();
        }
        p
    };
    let num = mul_trunc(&num, &sq, n_terms);
    // divide by g3 (unit constant term)
    let mut f = vec![BigFloat::zero(prec); n_terms];
    for n in 0..n_terms {
        let mut acc = num[n].clone();
        for j in 1..=n {
            acc = &acc - &(&g3[j] * &f[n - j]);
        }
        f[n] = acc;
    }
    f
}

fn mul_trunc(a: &[BigFloat], b: &[BigFloat], n: usize) -> Vec<BigFloat> {
    let prec = a[0].prec();
    let mut out = vec![BigFloat::zero(prec); n];
    for (i, ai) in a.iter().enumerate().take(n) {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(n - i) {
            if !bj.is_zero() {
                out[i + j] = &out[i + j] + &(ai * bj);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalan_prefix() {
        let c = catalan(5);
        let expect: Vec<BigInt> = [1u64, 1, 2, 5, 14].iter().map(|&v| BigInt::from(v)).collect();
        assert_eq!(c, expect);
    }

    #[test]
    fn geometric_prefix() {
        let g = geometric(2, 4);
        let expect: Vec<BigInt> = [1u64, 2, 4, 8].iter().map(|&v| BigInt::from(v)).collect();
        assert_eq!(g, expect);
    }

    #[test]
    fn log_test_matches_reference_values() {
        // reference coefficients computed independently at 80 digits
        let refs = [
            "2.0",
            "-6.0",
            "6.0",
            "-2.0833333333333333333333333333333333333333333333333",
            "0.21666666666666666666666666666666666666666666666667",
            "-0.14583333333333333333333333333333333333333333333333",
            "-0.008994708994708994708994708994708994708994708994709",
            "0.011656746031746031746031746031746031746031746031746",
            "0.0062318121693121693121693121693121693121693121693122",
            "0.0021880511463844797178130511463844797178130511463845",
            "0.00075053611511944845278178611511944845278178611511945",
            "0.00030655638728555395222061888728555395222061888728555",
            "0.00015171886813338532915252491972068691645411222130799",
            "0.000084513475758515441055123594806134488674171213853754",
            "0.000050156544782867534190285513036835788158539481290804",
        ];
        let series = make_test_series("log-test", 15, 60).unwrap();
        let floats = series.to_floats(400);
        for (n, r) in refs.iter().enumerate() {
            let expect = BigFloat::parse(r, 400).unwrap();
            let diff = (&floats[n] - &expect).abs();
            assert!(diff.magnitude_below(-150), "coefficient {n}: {}", floats[n].to_decimal(30));
        }
    }

    #[test]
    fn power_law_exact_family() {
        // (1-2t)^(-1): plain geometric
        let v = power_law(2, 1, 1, 6, 40);
        for (n, val) in v.iter().enumerate() {
            assert_eq!(val.to_f64(), (2f64).powi(n as i32));
        }
        // (1-t)^(-1/2): central binomials / 4^n
        let h = power_law(1, 1, 2, 4, 40);
        assert_eq!(h[1].to_f64(), 0.5);
        assert_eq!(h[2].to_f64(), 0.375);
    }

    #[test]
    fn unknown_name_rejected() {
        assert!(make_test_series("nope", 5, 30).is_err());
    }
}
