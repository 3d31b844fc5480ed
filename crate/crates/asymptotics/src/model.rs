//! The conjectured coefficient asymptotics and its logarithmic-correction
//! cascade. For f(x) = (1 - mu x)^alpha ((1/(mu x)) log(1/(1-mu x)))^beta,
//!   f_n ~ mu^n n^(-alpha-1)/Gamma(-alpha) (log n)^beta (1 + sum_k c_k/log^k n),
//!   c_k = binom(beta, k) Gamma(-alpha) (d^k/ds^k)(1/Gamma)(s) at s = -alpha.
//! When alpha is a positive integer the k = 0 term dies with 1/Gamma(-alpha)
//! and the surviving series starts at c_1/log n with a free overall constant.

use crate::{AsymptoticsError, Result};
use num_bigint::BigInt;
use stacksort_numeric::{bits_for_digits, gamma, recip_gamma_derivatives, BigFloat};

/// (mu, alpha, beta, lambda, amplitudes): the shape
///   W(t) ~ C (1-mu t)^alpha log^beta(1-mu t),
///   w_n ~ c0 mu^n / (n^(alpha+1) log^lambda n).
/// lambda is determined by whether alpha is a positive integer.
#[derive(Debug, Clone)]
pub struct AsymptoticModel {
    pub mu: BigFloat,
    pub alpha: BigFloat,
    pub beta: BigFloat,
    /// Overall constant for the integer-alpha form (the general form carries
    /// 1/Gamma(-alpha) instead).
    pub amplitude: BigFloat,
    pub k_max: u32,
    pub digits: u32,
}

impl AsymptoticModel {
    pub fn alpha_as_positive_integer(&self) -> Option<u32> {
        let rounded = self.alpha.to_f64().round();
        if rounded >= 1.0 {
            let diff = (&self.alpha - &BigFloat::from_i64(rounded as i64, self.alpha.prec())).abs();
            if diff.magnitude_below(-20) {
                return Some(rounded as u32);
            }
        }
        None
    }

    /// lambda in the coefficient law: -beta for non-integer alpha,
    /// 1 - beta when alpha is a positive integer.
    pub fn lambda(&self) -> BigFloat {
        let prec = self.beta.prec();
        match self.alpha_as_positive_integer() {
            Some(_) => &BigFloat::from_i64(1, prec) - &self.beta,
            None => -&self.beta,
        }
    }
}

/// The correction coefficients c_1..c_k_max. Errors out within 1e-6 of a
/// non-negative integer alpha, where Gamma(-alpha) blows up and the
/// integer-alpha form of `model_predict` applies instead.
pub fn fs_coefficients(
    alpha: &BigFloat,
    beta: &BigFloat,
    k_max: u32,
    digits: u32,
) -> Result<Vec<BigFloat>> {
    let a = alpha.to_f64();
    if a >= -1e-6 && (a - a.round()).abs() < 1e-6 {
        return Err(AsymptoticsError::InvalidInput(format!(
            "alpha = {a} is within 1e-6 of a non-negative integer: use the integer-alpha form"
        )));
    }
    let prec = bits_for_digits(digits + 10);
    let minus_alpha = -&alpha.with_prec(prec);
    let g = gamma(&minus_alpha, digits + 10);
    let derivs = recip_gamma_derivatives(&minus_alpha, k_max, digits + 5);
    let out_prec = bits_for_digits(digits);
    Ok((1..=k_max)
        .map(|k| {
            let b = generalized_binomial(beta, k, prec);
            (&(&b * &g) * &derivs[k as usize]).with_prec(out_prec)
        })
        .collect())
}

/// binom(beta, k) = beta (beta-1) ... (beta-k+1) / k!.
pub fn generalized_binomial(beta: &BigFloat, k: u32, prec: u32) -> BigFloat {
    let mut num = BigFloat::from_i64(1, prec);
    for i in 0..k {
        num = &num * &(&beta.with_prec(prec) - &BigFloat::from_u64(i as u64, prec));
    }
    let mut fact = BigInt::from(1u32);
    for i in 2..=k as u64 {
        fact *= i;
    }
    &num / &BigFloat::from_bigint(&fact, prec)
}

/// Predicted coefficient at order n under the model, including the available
/// correction terms.
pub fn model_predict(model: &AsymptoticModel, n: u64) -> Result<BigFloat> {
    if n < 2 {
        return Err(AsymptoticsError::InvalidInput(
            "prediction needs n >= 2 (log n must be positive)".into(),
        ));
    }
    let prec = bits_for_digits(model.digits + 10);
    let nf = BigFloat::from_u64(n, prec);
    let log = nf.ln();
    let one = BigFloat::from_i64(1, prec);
    let mu_n = model.mu.with_prec(prec).pow(&nf);
    let n_pow = nf.pow(&(&(-&model.alpha.with_prec(prec)) - &one));
    let log_beta = log.pow(&model.beta.with_prec(prec));

    match model.alpha_as_positive_integer() {
        Some(alpha_int) => {
            // C mu^n n^(-alpha-1) (log n)^beta sum_{k>=1} binom(beta,k)
            //   (1/Gamma)^(k)(-alpha) / log^k n
            let derivs =
                recip_gamma_derivatives(&-&model.alpha.with_prec(prec), model.k_max, model.digits + 5);
            let mut sum = BigFloat::zero(prec);
            let mut log_pow = one.clone();
            for k in 1..=model.k_max {
                log_pow = &log_pow * &log;
                let b = generalized_binomial(&model.beta, k, prec);
                sum = &sum + &(&(&b * &derivs[k as usize]) / &log_pow);
            }
            let _ = alpha_int;
            Ok(&(&(&model.amplitude.with_prec(prec) * &mu_n) * &n_pow) * &(&log_beta * &sum))
        }
        None => {
            let g = gamma(&-&model.alpha.with_prec(prec), model.digits + 10);
            let cks = fs_coefficients(&model.alpha, &model.beta, model.k_max, model.digits)?;
            let mut sum = one.clone();
            let mut log_pow = one.clone();
            for ck in &cks {
                log_pow = &log_pow * &log;
                sum = &sum + &(ck / &log_pow);
            }
            Ok(&(&(&mu_n * &n_pow) / &g) * &(&log_beta * &sum))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn c1_at_half_matches_reference() {
        // c_1 for alpha = 1/2, beta = 1 is Gamma(-1/2) (1/Gamma)'(-1/2);
        // reference product computed independently at high precision
        let prec = 400;
        let alpha = BigFloat::parse("0.5", prec).unwrap();
        let beta = BigFloat::from_i64(1, prec);
        let cks = fs_coefficients(&alpha, &beta, 2, 40).unwrap();
        let expect = BigFloat::parse(
            "-0.03648997397857652055902366700124443280684039533956589295287274612834503",
            prec,
        )
        .unwrap();
        let diff = (&cks[0] - &expect).abs();
        assert!(diff.magnitude_below(-100), "c1 = {}", cks[0].to_decimal(30));
        // beta = 1 kills binom(1, 2): c_2 = 0
        assert!(cks[1].is_zero() || cks[1].magnitude_below(-100));
    }

    #[test]
    fn beta_zero_has_no_corrections() {
        let prec = 300;
        let alpha = BigFloat::parse("0.5", prec).unwrap();
        let beta = BigFloat::zero(prec);
        let cks = fs_coefficients(&alpha, &beta, 3, 40).unwrap();
        for c in &cks {
            assert!(c.is_zero() || c.magnitude_below(-100));
        }
    }

    #[test]
    fn integer_alpha_is_rejected_by_fs() {
        let prec = 200;
        let alpha = BigFloat::from_i64(2, prec);
        let beta = BigFloat::from_i64(-2, prec);
        assert!(fs_coefficients(&alpha, &beta, 2, 30).is_err());
    }

    #[test]
    fn pure_power_law_prediction() {
        // beta = 0, alpha = 1/2: f_n = mu^n n^(-3/2)/Gamma(-1/2) (1 + 0 + ...)
        let prec = 300;
        let model = AsymptoticModel {
            mu: BigFloat::from_i64(4, prec),
            alpha: BigFloat::parse("0.5", prec).unwrap(),
            beta: BigFloat::zero(prec),
            amplitude: BigFloat::from_i64(1, prec),
            k_max: 3,
            digits: 40,
        };
        let p = model_predict(&model, 100).unwrap();
        // Gamma(-1/2) = -2 sqrt(pi) < 0: prediction is negative
        let expected = 4f64.powi(100) * 100f64.powf(-1.5) / (-3.5449077018110322);
        let rel = (p.to_f64() - expected).abs() / expected.abs();
        assert!(rel < 1e-12, "predicted {} expected {expected}", p.to_f64());
    }

    #[test]
    fn ratio_expansion_matches_displayed_form() {
        // For non-integer alpha the ratio of successive predictions follows
        //   mu (1 - (alpha+1)/n + beta/(n log n) + c_1/(n log^2 n) + ...)
        // to O(1/(n log^3 n)). Check numerically at large n.
        let prec = 500;
        let digits = 60;
        let alpha = BigFloat::parse("0.5", prec).unwrap();
        let beta = BigFloat::from_i64(-3, prec);
        let model = AsymptoticModel {
            mu: BigFloat::from_i64(2, prec),
            alpha: alpha.clone(),
            beta: beta.clone(),
            amplitude: BigFloat::from_i64(1, prec),
            k_max: 4,
            digits,
        };
        let one = BigFloat::from_i64(1, prec);
        let cks = fs_coefficients(&alpha, &beta, 4, digits).unwrap();
        for &n in &[1_000u64, 10_000, 100_000] {
            let r = &model_predict(&model, n).unwrap() / &model_predict(&model, n - 1).unwrap();
            let nf = BigFloat::from_u64(n, prec);
            let log = nf.ln();
            let predicted = {
                let t1 = &(&alpha + &one) / &nf;
                let t2 = &beta / &(&nf * &log);
                let t3 = &cks[0] / &(&nf * &(&log * &log));
                &model.mu * &(&(&(&one - &t1) + &t2) + &t3)
            };
            let err = (&r - &predicted).abs().to_f64();
            let bound = 2.0 * model.mu.to_f64() * (cks[1].to_f64().abs() + 2.0)
                / (n as f64 * (n as f64).ln().powi(3));
            assert!(err < bound, "n = {n}: err {err:.3e} bound {bound:.3e}");
        }
    }
}
