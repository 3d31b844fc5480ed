//! Prime selection: the j-th largest primes below 2^32, and a sizing heuristic
//! for how many are needed before certification.

use crate::{Error, Result};
use num_bigint::BigUint;
use stacksort_numeric::modular::{is_prime_u64, DescendingPrimes};

pub const PRIME_BOUND: u64 = 1 << 32;

/// The k largest primes strictly below `bound`, descending, each one
/// re-checked with the deterministic Miller-Rabin witness set.
pub fn generate_primes(k: usize, bound: u64) -> Vec<u32> {
    assert!(bound <= PRIME_BOUND, "primes must stay below 2^32");
    DescendingPrimes::below(bound)
        .take(k)
        .map(|p| {
            debug_assert!(is_prime_u64(p));
            p as u32
        })
        .collect()
}

/// A set of moduli together with the order they certify and their product.
#[derive(Debug, Clone)]
pub struct PrimePlan {
    pub primes: Vec<u32>,
    pub product: BigUint,
    pub target_n: usize,
}

impl PrimePlan {
    pub fn from_primes(primes: Vec<u32>, target_n: usize) -> Result<Self> {
        if primes.is_empty() {
            return Err(Error::InvalidInput("prime plan needs at least one prime".into()));
        }
        let mut seen = primes.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != primes.len() {
            return Err(Error::InvalidInput("duplicate primes in plan".into()));
        }
        if !primes.windows(2).all(|w| w[0] > w[1]) {
            return Err(Error::InvalidInput("plan primes must be strictly decreasing".into()));
        }
        for &p in &primes {
            if (p as usize) <= target_n + 2 {
                return Err(Error::InvalidInput(format!(
                    "prime {p} too small for grid of order {target_n}"
                )));
            }
        }
        let product = primes.iter().fold(BigUint::from(1u32), |acc, &p| acc * p);
        Ok(PrimePlan {
            primes,
            product,
            target_n,
        })
    }

    /// Extend the plan with `extra` further primes (for a certification
    /// top-up); existing primes are untouched so finished residue vectors
    /// stay valid.
    pub fn extended(&self, extra: usize) -> Result<Self> {
        let primes = generate_primes(self.primes.len() + extra, PRIME_BOUND);
        PrimePlan::from_primes(primes, self.target_n)
    }

    pub fn product_digits(&self) -> usize {
        self.product.to_string().len()
    }
}

/// Choose the number of primes so that the product exceeds
/// 10^(N log10(10.5) + safety_digits). The growth-rate guess 10.5 per term is
/// a heuristic only; certification after the run is the correctness
/// authority, and a failed certificate appends primes rather than redoing
/// finished ones.
pub fn plan_primes(n: usize, safety_digits: u32) -> Result<PrimePlan> {
    assert!(n >= 1);
    let needed_log10 = n as f64 * 10.5f64.log10() + safety_digits as f64;
    let mut primes = Vec::new();
    let mut acc_log10 = 0.0f64;
    for p in DescendingPrimes::below(PRIME_BOUND) {
        primes.push(p as u32);
        acc_log10 += (p as f64).log10();
        if acc_log10 > needed_log10 {
            break;
        }
    }
    PrimePlan::from_primes(primes, n)
}
