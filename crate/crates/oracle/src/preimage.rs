//! Preimage counts under the stack-sorting map: exhaustively, and by the
//! hook decomposition over tail-bound descents.

use crate::perm::{for_each_permutation, Permutation};
use crate::stats::{is_tail_bound, tail_length};
use crate::{OracleError, Result};
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

pub const BRUTE_CAP: usize = 9;

/// Catalan numbers C_0..C_n.
pub fn catalan_numbers(n: usize) -> Vec<u64> {
    let mut c = vec![1u64; n + 1];
    for i in 1..=n {
        c[i] = c[i - 1] * 2 * (2 * i as u64 - 1) / (i as u64 + 1);
    }
    c
}

fn census_cache() -> &'static Mutex<HashMap<usize, std::sync::Arc<HashMap<Vec<u8>, u64>>>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, std::sync::Arc<HashMap<Vec<u8>, u64>>>>> =
        OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// |s^-1(pi)| for every pi in S_n, in one sweep over S_n.
pub fn preimage_census(n: usize) -> Result<std::sync::Arc<HashMap<Vec<u8>, u64>>> {
    if n > BRUTE_CAP {
        return Err(OracleError::Cap(format!(
            "preimage census enumerates S_n; capped at n = {BRUTE_CAP}"
        )));
    }
    if let Some(m) = census_cache().lock().unwrap().get(&n) {
        return Ok(m.clone());
    }
    let mut map: HashMap<Vec<u8>, u64> = HashMap::new();
    for_each_permutation(n, |p| {
        let image = Permutation::new(p.to_vec()).unwrap().stack_sort();
        *map.entry(image.entries().to_vec()).or_insert(0) += 1;
    });
    let arc = std::sync::Arc::new(map);
    census_cache().lock().unwrap().insert(n, arc.clone());
    Ok(arc)
}

/// Exhaustive |s^-1(pi)|.
pub fn preimage_count_brute(p: &Permutation) -> Result<u64> {
    let std = p.standardise();
    let census = preimage_census(std.len())?;
    Ok(census.get(std.entries()).copied().unwrap_or(0))
}

fn decomposition_cache() -> &'static Mutex<HashMap<Vec<u8>, u64>> {
    static CACHE: OnceLock<Mutex<HashMap<Vec<u8>, u64>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// |s^-1(pi)| by the hook decomposition: for a tail-bound descent d,
/// |s^-1(pi)| = sum over hooks H from (d, pi_d) of
/// |s^-1(pi_U^H)| |s^-1(pi_S^H)|. Identities contribute Catalan numbers.
/// Memoised on standardisations, which preimage counts only depend on.
pub fn preimage_count_decomposition(p: &Permutation) -> u64 {
    let std = p.standardise();
    let n = std.len();
    if std.is_identity() {
        return catalan_numbers(n)[n];
    }
    if let Some(&v) = decomposition_cache().lock().unwrap().get(std.entries()) {
        return v;
    }
    let d = {
        // c(pi): position of the value n - tl(pi); always tail-bound
        let target = (n - tail_length(&std)) as u8;
        std.entries().iter().position(|&v| v == target).unwrap() + 1
    };
    debug_assert!(is_tail_bound(&std, d));
    let (u_part, s_part) = hook_endpoints(&std, d);
    let mut total = 0u64;
    for (pu, ps) in u_part.iter().zip(&s_part) {
        total += preimage_count_decomposition(pu) * preimage_count_decomposition(ps);
    }
    decomposition_cache().lock().unwrap().insert(std.entries().to_vec(), total);
    total
}

/// For each hook with southwest endpoint (d, pi_d), the unsheltered and
/// sheltered sub-permutations (1-indexed d).
pub fn hook_endpoints(p: &Permutation, d: usize) -> (Vec<Permutation>, Vec<Permutation>) {
    let n = p.len();
    let pd = p.at(d);
    let mut unsheltered = Vec::new();
    let mut sheltered = Vec::new();
    for j in d + 1..=n {
        if p.at(j) > pd {
            unsheltered.push(p.select((0..d).chain(j..n)));
            sheltered.push(p.select(d..j - 1));
        }
    }
    (unsheltered, sheltered)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::for_each_permutation;

    #[test]
    fn identity_preimages_are_catalan() {
        let id4 = Permutation::identity(4);
        assert_eq!(preimage_count_brute(&id4).unwrap(), 14);
        assert_eq!(preimage_count_decomposition(&id4), 14);
        // any increasing sequence standardises to the identity
        let incr = Permutation::new(vec![2, 5, 9]).unwrap();
        assert_eq!(preimage_count_brute(&incr).unwrap(), 5);
    }

    #[test]
    fn decreasing_pair_has_no_preimage() {
        // s maps both elements of S_2 to 12, so 21 is never hit
        let p = Permutation::from_digits("21").unwrap();
        assert_eq!(preimage_count_brute(&p).unwrap(), 0);
        assert_eq!(preimage_count_decomposition(&p), 0);
    }

    #[test]
    fn hook_decomposition_worked_example() {
        // pi = 426315789 with the hook to (8,8): unsheltered 4269, sheltered 3157
        let p = Permutation::from_digits("426315789").unwrap();
        let (u, s) = hook_endpoints(&p, 3);
        let us: Vec<String> = u.iter().map(|q| q.to_string()).collect();
        let ss: Vec<String> = s.iter().map(|q| q.to_string()).collect();
        assert_eq!(us, vec!["42689", "4269", "426"]);
        assert_eq!(ss, vec!["315", "3157", "31578"]);
    }

    #[test]
    fn decomposition_matches_brute_force_up_to_s6() {
        for n in 1..=6 {
            for_each_permutation(n, |e| {
                let p = Permutation::new(e.to_vec()).unwrap();
                assert_eq!(
                    preimage_count_decomposition(&p),
                    preimage_count_brute(&p).unwrap(),
                    "pi = {p}"
                );
            });
        }
    }

    #[test]
    fn census_sums_to_factorial() {
        for n in 1..=7 {
            let census = preimage_census(n).unwrap();
            let total: u64 = census.values().sum();
            let fact: u64 = (1..=n as u64).product();
            assert_eq!(total, fact);
        }
    }

    #[test]
    fn spot_values_with_max_first() {
        // pi_1 = n forces the first stack pass to keep n on the stack bottom
        let census = preimage_census(5).unwrap();
        let p = Permutation::from_digits("51234").unwrap();
        assert_eq!(
            census.get(p.entries()).copied().unwrap_or(0),
            preimage_count_decomposition(&p)
        );
    }

    #[test]
    fn brute_cap() {
        let p = Permutation::new((1..=10).collect()).unwrap();
        assert!(preimage_count_brute(&p).is_err());
    }
}
