//! Exhaustive |W_k(n)| counts.

use crate::perm::Permutation;
use crate::{OracleError, Result};
use rayon::prelude::*;

pub const ENUMERATION_CAP: usize = 10;

/// |W_k(n)| by iterating over all of S_n. Fanned out across first entries;
/// the reduction is an integer sum, so scheduling cannot affect the result.
pub fn count_sortable(n: usize, k: u32) -> Result<u64> {
    if n > ENUMERATION_CAP {
        return Err(OracleError::Cap(format!(
            "count_sortable enumerates S_n; capped at n = {ENUMERATION_CAP}"
        )));
    }
    if n == 0 {
        return Ok(1);
    }
    let total = (1..=n as u8)
        .into_par_iter()
        .map(|first| {
            let rest: Vec<u8> = (1..=n as u8).filter(|&x| x != first).collect();
            let mut count = 0u64;
            permute_suffix(&mut [&[first], rest.as_slice()].concat(), 1, k, &mut count);
            count
        })
        .sum();
    Ok(total)
}

fn permute_suffix(arr: &mut Vec<u8>, from: usize, k: u32, count: &mut u64) {
    if from == arr.len() {
        if Permutation::new(arr.clone()).unwrap().is_k_stack_sortable(k) {
            *count += 1;
        }
        return;
    }
    for i in from..arr.len() {
        arr.swap(from, i);
        permute_suffix(arr, from + 1, k, count);
        arr.swap(from, i);
    }
}

/// 2/((n+1)(2n+1)) C(3n, n), the closed form for |W_2(n)|.
pub fn west_zeilberger_formula(n: u64) -> u64 {
    let mut binom: u128 = 1;
    for i in 0..n {
        binom = binom * (3 * n - i) as u128 / (i + 1) as u128;
    }
    (2 * binom / ((n + 1) as u128 * (2 * n + 1) as u128)) as u64
}
