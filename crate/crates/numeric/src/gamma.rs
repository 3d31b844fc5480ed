//! Gamma function by Spouge's approximation, plus derivatives of 1/Gamma by
//! central differences. Working precision absorbs both the alternating-sum
//! cancellation in the Spouge series (about 0.56a digits for parameter a) and
//! the step-size cancellation of the difference stencils.

use crate::float::BigFloat;
use crate::functions::pi;
use crate::bits_for_digits;
use num_bigint::BigInt;
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

fn spouge_cache() -> &'static Mutex<HashMap<(u32, u32), Vec<BigFloat>>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, u32), Vec<BigFloat>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Spouge coefficients c_0 = sqrt(2 pi), c_k = (-1)^(k-1)/(k-1)! (a-k)^(k-1/2) e^(a-k).
fn spouge_coeffs(a: u32, work_bits: u32) -> Vec<BigFloat> {
    let key = (a, work_bits);
    if let Some(v) = spouge_cache().lock().unwrap().get(&key) {
        return v.clone();
    }
    let two_pi = &BigFloat::from_i64(2, work_bits) * &pi(work_bits);
    let mut coeffs = vec![two_pi.sqrt()];
    let mut fact = BigInt::from(1);
    let half = BigFloat::from_ratio(&BigInt::from(1), &BigInt::from(2), work_bits);
    for k in 1..a {
        if k > 1 {
            fact *= BigInt::from(k - 1);
        }
        let amk = BigFloat::from_u64((a - k) as u64, work_bits);
        let expo = &BigFloat::from_u64(k as u64, work_bits) - &half;
        let mut c = &amk.pow(&expo) * &amk.exp();
        c = &c / &BigFloat::from_bigint(&fact, work_bits);
        if k % 2 == 0 {
            c = -&c;
        }
        coeffs.push(c);
    }
    spouge_cache().lock().unwrap().insert(key, coeffs.clone());
    coeffs
}

/// Gamma(z) for real z, any non-pole argument. Panics at poles
/// (z a non-positive integer to within working precision).
pub fn gamma(z: &BigFloat, digits: u32) -> BigFloat {
    let a = (digits * 95 / 100 + 6).max(12);
    let work_digits = digits + a * 56 / 100 + 12;
    let work = bits_for_digits(work_digits);
    let out_bits = bits_for_digits(digits);
    let z = z.with_prec(work);
    let half = BigFloat::from_ratio(&BigInt::from(1), &BigInt::from(2), work);
    if z.cmp_val(&half) == std::cmp::Ordering::Less {
        // reflection: Gamma(z) = pi / (sin(pi z) Gamma(1-z))
        let s = z.sinpi();
        assert!(!s.is_zero(), "gamma: pole at non-positive integer");
        let one_minus = &BigFloat::from_i64(1, work) - &z;
        let g = gamma(&one_minus, work_digits);
        return (&pi(work) / &(&s * &g)).with_prec(out_bits);
    }
    let coeffs = spouge_coeffs(a, work);
    let zm1 = &z - &BigFloat::from_i64(1, work);
    let mut s = coeffs[0].clone();
    for (k, c) in coeffs.iter().enumerate().skip(1) {
        s = &s + &(c / &(&zm1 + &BigFloat::from_u64(k as u64, work)));
    }
    let base = &zm1 + &BigFloat::from_u64(a as u64, work);
    let expo = &zm1 + &half;
    let pref = &base.pow(&expo) * &(-&base).exp();
    (&pref * &s).with_prec(out_bits)
}

/// Derivatives d^k/ds^k (1/Gamma)(s) for k = 0..=k_max, by symmetric
/// central differences of order h^2 with the step tied to the target digits.
pub fn recip_gamma_derivatives(s: &BigFloat, k_max: u32, digits: u32) -> Vec<BigFloat> {
    // step h = 10^-m; truncation error O(h^2), cancellation costs k*m digits
    let m = digits / 2 + 4;
    let work_digits = digits + k_max * m + 16;
    let work = bits_for_digits(work_digits);
    let out_bits = bits_for_digits(digits);
    let s = s.with_prec(work);
    let ten = BigFloat::from_i64(10, work);
    let h = &BigFloat::from_i64(1, work) / &ten.powi(m as u64);
    let half_h = {
        let (mant, exp) = h.to_parts();
        BigFloat::from_parts(mant, exp - 1, work)
    };
    // evaluate 1/Gamma on the grid s + j*h/2 for j = -k_max..=k_max
    let mut grid = HashMap::new();
    let rg_at = |j: i64, grid: &mut HashMap<i64, BigFloat>| -> BigFloat {
        if let Some(v) = grid.get(&j) {
            return v.clone();
        }
        let x = &s + &(&BigFloat::from_i64(j, work) * &half_h);
        let g = gamma(&x, work_digits);
        let v = &BigFloat::from_i64(1, work) / &g;
        grid.insert(j, v.clone());
        v
    };
    let mut out = Vec::with_capacity(k_max as usize + 1);
    for k in 0..=k_max {
        // sum_j (-1)^j C(k,j) f(s + (k - 2j) h/2) / h^k
        let mut acc = BigFloat::zero(work);
        let mut binom = BigInt::from(1);
        for j in 0..=k {
            if j > 0 {
                binom = &binom * BigInt::from((k - j + 1) as u64) / BigInt::from(j as u64);
            }
            let f = rg_at((k as i64) - 2 * (j as i64), &mut grid);
            let term = &BigFloat::from_bigint(&binom, work) * &f;
            if j % 2 == 0 {
                acc = &acc + &term;
            } else {
                acc = &acc - &term;
            }
        }
        let hk = h.powi(k as u64);
        out.push((&acc / &hk).with_prec(out_bits));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(actual: &BigFloat, expected: &str, digits_ok: i64) {
        let e = BigFloat::parse(expected, 400).unwrap();
        let rel = &(actual - &e).abs() / &e.abs();
        assert!(
            rel.magnitude_below(-(digits_ok * 10 / 3)),
            "got {} expected {}",
            actual.to_decimal(40),
            expected
        );
    }

    #[test]
    fn gamma_positive_arguments() {
        let d = 70;
        check(
            &gamma(&BigFloat::parse("0.3", 400).unwrap(), d),
            "2.9915689876875906283125165159049177911128060249217151127441196509563887678763202",
            65,
        );
        check(
            &gamma(&BigFloat::parse("5.75", 400).unwrap(), d),
            "78.784481061323213151439635548726462729737632714057449892905156545225087753494404",
            65,
        );
        // Gamma(6) = 120 exactly
        check(&gamma(&BigFloat::from_i64(6, 400), d), "120", 65);
    }

    #[test]
    fn gamma_by_reflection() {
        let d = 70;
        check(
            &gamma(&BigFloat::parse("-2.5", 400).unwrap(), d),
            "-0.94530872048294188122568932444861076415869304326527313504736415458821935178188383",
            65,
        );
        check(
            &gamma(&BigFloat::parse("-0.5", 400).unwrap(), d),
            "-3.5449077018110320545963349666822903655950989122447742564276155797058225691820644",
            65,
        );
    }

    #[test]
    fn recip_gamma_derivative_values() {
        // reference values computed with mpmath at 120 digits
        let s = BigFloat::parse("-0.5", 600).unwrap();
        let d = recip_gamma_derivatives(&s, 4, 40);
        check(&d[0], "-0.282094791773878143474039725780386292922025314664499428422043", 38);
        check(&d[1], "0.0102936316113207753625618012789260475437515284740942821562782", 36);
        check(&d[2], "2.52008555195379738742392179266363678617783493609440692184012", 36);
        check(&d[3], "-0.509700197737600450944167158482581866277710282536671342254615", 34);
        check(&d[4], "-12.9455076140993039629651814446447869653011133606157489508118", 33);

        let s2 = BigFloat::from_i64(-2, 600);
        let d2 = recip_gamma_derivatives(&s2, 4, 40);
        assert!(d2[0].magnitude_below(-110)); // 1/Gamma vanishes at -2
        check(&d2[1], "2.0", 37);
        check(&d2[2], "-3.69113734039386855757395163967039027583136265624030560477693", 36);
        check(&d2[3], "-12.2604188264706380638414518032279295341160646126616369460122", 34);
        check(&d2[4], "59.0602706254584967867095063784251416990080674377631468873294", 33);
    }
}
