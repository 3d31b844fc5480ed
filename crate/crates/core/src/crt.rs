//! Chinese Remainder reconstruction of the coefficient integers from the
//! per-prime residue vectors.

use crate::primes::PrimePlan;
use crate::series::{CoefficientSeries, Provenance};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Unique w in [0, P) congruent to every residue. `residue_vectors[i]`
/// corresponds to `plan.primes[i]`.
pub fn crt_combine(residue_vectors: &[Vec<u32>], plan: &PrimePlan) -> Result<CoefficientSeries> {
    let coeffs = crt_combine_raw(residue_vectors, &plan.primes, plan.target_n)?;
    Ok(CoefficientSeries {
        name: "w".into(),
        coeffs,
        provenance: Provenance::ExactUncertified,
    })
}

/// The CRT arithmetic itself, free of any plan-level grid constraints.
pub fn crt_combine_raw(
    residue_vectors: &[Vec<u32>],
    primes: &[u32],
    n: usize,
) -> Result<Vec<BigInt>> {
    if residue_vectors.len() != primes.len() {
        return Err(Error::InvalidInput(format!(
            "{} residue vectors for {} primes",
            residue_vectors.len(),
            primes.len()
        )));
    }
    let mut distinct = primes.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() != primes.len() {
        return Err(Error::InvalidInput("duplicate primes".into()));
    }
    for (v, &p) in residue_vectors.iter().zip(primes) {
        if v.len() != n {
            return Err(Error::InvalidInput(format!(
                "residue vector for prime {p} has length {} (want {n})",
                v.len()
            )));
        }
        if v.iter().any(|&r| r >= p) {
            return Err(Error::InvalidInput(format!("residue out of range for prime {p}")));
        }
    }

    // incremental CRT: maintain x mod M, fold in one prime at a time
    let mut coeffs = vec![BigInt::zero(); n];
    let mut modulus = BigInt::one();
    for (v, &p) in residue_vectors.iter().zip(primes) {
        let p_big = BigInt::from(p);
        let m_mod_p = u32::try_from(&modulus % &p_big).expect("residue fits u32");
        let inv = mod_inverse_u32(m_mod_p % p, p);
        for (x, &r) in coeffs.iter_mut().zip(v) {
            // t = (r - x) * inv(M) mod p ; x += M * t
            let x_mod_p = u32::try_from(&*x % &p_big).expect("residue fits u32");
            let diff = if r >= x_mod_p { r - x_mod_p } else { p - (x_mod_p - r) };
            let t = (diff as u64 * inv as u64 % p as u64) as u32;
            if t != 0 {
                *x += &modulus * BigInt::from(t);
            }
        }
        modulus *= p_big;
    }
    Ok(coeffs)
}

fn mod_inverse_u32(a: u32, p: u32) -> u32 {
    // extended Euclid on i64
    let (mut t, mut new_t) = (0i64, 1i64);
    let (mut r, mut new_r) = (p as i64, a as i64);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    assert_eq!(r, 1, "inverse requires gcd 1");
    ((t % p as i64 + p as i64) % p as i64) as u32
}
