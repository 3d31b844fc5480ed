//! Permutations of small sets of positive integers and the stack-sorting map.

use crate::{OracleError, Result};
use std::fmt;

/// A sequence of distinct positive integers. Most operations work on the
/// standardisation (the order-isomorphic permutation of 1..=n).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<u8>);

impl Permutation {
    pub fn new(entries: Vec<u8>) -> Result<Self> {
        let mut seen = [false; 256];
        for &e in &entries {
            if e == 0 {
                return Err(OracleError::InvalidPermutation("entries must be positive".into()));
            }
            if seen[e as usize] {
                return Err(OracleError::InvalidPermutation(format!("duplicate entry {e}")));
            }
            seen[e as usize] = true;
        }
        Ok(Permutation(entries))
    }

    /// Parse a compact digit string like "326451" (entries 1..=9).
    pub fn from_digits(s: &str) -> Result<Self> {
        let entries = s
            .chars()
            .map(|c| {
                c.to_digit(10)
                    .filter(|&d| d >= 1)
                    .map(|d| d as u8)
                    .ok_or_else(|| OracleError::InvalidPermutation(format!("bad digit {c}")))
            })
            .collect::<Result<Vec<u8>>>()?;
        Permutation::new(entries)
    }

    pub fn identity(n: usize) -> Self {
        Permutation((1..=n as u8).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[u8] {
        &self.0
    }

    /// Entry at 1-indexed position.
    pub fn at(&self, i: usize) -> u8 {
        self.0[i - 1]
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &e)| e as usize == i + 1)
    }

    pub fn is_increasing(&self) -> bool {
        self.0.windows(2).all(|w| w[0] < w[1])
    }

    /// Replace the i-th smallest entry by i.
    pub fn standardise(&self) -> Permutation {
        let mut order: Vec<usize> = (0..self.0.len()).collect();
        order.sort_by_key(|&i| self.0[i]);
        let mut out = vec![0u8; self.0.len()];
        for (rank, &i) in order.iter().enumerate() {
            out[i] = (rank + 1) as u8;
        }
        Permutation(out)
    }

    /// One pass through the stack: while the top is smaller than the next
    /// input, it pops. Equivalent to the recursion s(LmR) = s(L) s(R) m.
    pub fn stack_sort(&self) -> Permutation {
        let mut out = Vec::with_capacity(self.0.len());
        let mut stack: Vec<u8> = Vec::with_capacity(self.0.len());
        for &x in &self.0 {
            while let Some(&t) = stack.last() {
                if t < x {
                    out.push(t);
                    stack.pop();
                } else {
                    break;
                }
            }
            stack.push(x);
        }
        while let Some(t) = stack.pop() {
            out.push(t);
        }
        Permutation(out)
    }

    /// The defining recursion, for cross-checking the simulation.
    pub fn stack_sort_recursive(&self) -> Permutation {
        fn rec(p: &[u8], out: &mut Vec<u8>) {
            if p.is_empty() {
                return;
            }
            let (mi, &m) = p.iter().enumerate().max_by_key(|(_, &v)| v).unwrap();
            debug_assert_eq!(m, *p.iter().max().unwrap());
            rec(&p[..mi], out);
            rec(&p[mi + 1..], out);
            out.push(m);
        }
        let mut out = Vec::with_capacity(self.0.len());
        rec(&self.0, &mut out);
        Permutation(out)
    }

    pub fn is_k_stack_sortable(&self, k: u32) -> bool {
        let mut p = self.clone();
        for _ in 0..k {
            if p.is_increasing() {
                return true;
            }
            p = p.stack_sort();
        }
        p.is_increasing()
    }

    /// Sub-permutation picked out by 0-indexed positions.
    pub(crate) fn select(&self, positions: impl Iterator<Item = usize>) -> Permutation {
        Permutation(positions.map(|i| self.0[i]).collect())
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.iter().all(|&e| e <= 9) {
            for e in &self.0 {
                write!(f, "{e}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.0.iter().map(|e| e.to_string()).collect();
            write!(f, "{}", parts.join(" "))
        }
    }
}

/// Visit every permutation of 1..=n (Heap's algorithm).
pub fn for_each_permutation(n: usize, mut f: impl FnMut(&[u8])) {
    assert!(n <= 13, "exhaustive enumeration capped well below overflow");
    let mut arr: Vec<u8> = (1..=n as u8).collect();
    if n == 0 {
        f(&arr);
        return;
    }
    let mut c = vec![0usize; n];
    f(&arr);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                arr.swap(0, i);
            } else {
                arr.swap(c[i], i);
            }
            f(&arr);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn worked_example() {
        let p = Permutation::from_digits("326451").unwrap();
        assert_eq!(p.stack_sort().to_string(), "234156");
    }

    #[test]
    fn sortability_examples() {
        let p = Permutation::from_digits("231").unwrap();
        assert!(!p.is_k_stack_sortable(1));
        assert!(p.is_k_stack_sortable(2));
        assert!(Permutation::from_digits("416352").unwrap().is_k_stack_sortable(2));
        // 2341 needs three passes
        let q = Permutation::from_digits("2341").unwrap();
        assert_eq!(q.stack_sort().to_string(), "2314");
        assert!(!q.is_k_stack_sortable(2));
        assert!(q.is_k_stack_sortable(3));
        // identities are fixed points
        for n in 0..6 {
            let id = Permutation::identity(n);
            assert_eq!(id.stack_sort(), id);
            assert!(id.is_k_stack_sortable(0));
        }
    }

    #[test]
    fn standardisation() {
        let p = Permutation::new(vec![5, 9, 7, 1]).unwrap();
        assert_eq!(p.standardise().to_string(), "2431");
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Permutation::new(vec![1, 1]).is_err());
        assert!(Permutation::new(vec![0]).is_err());
    }

    #[test]
    fn enumeration_count() {
        let mut count = 0u64;
        for_each_permutation(6, |_| count += 1);
        assert_eq!(count, 720);
    }

    #[test]
    fn simulation_matches_recursion_exhaustively() {
        for n in 0..=7 {
            for_each_permutation(n, |p| {
                let perm = Permutation::new(p.to_vec()).unwrap();
                assert_eq!(perm.stack_sort(), perm.stack_sort_recursive());
            });
        }
    }

    #[test]
    fn iterating_s_sorts_everything() {
        // s^(n-1) sorts every permutation in S_n
        for n in 1..=8usize {
            for_each_permutation(n, |p| {
                let perm = Permutation::new(p.to_vec()).unwrap();
                assert!(perm.is_k_stack_sortable(n as u32 - 1));
            });
        }
    }

    proptest! {
        #[test]
        fn sort_preserves_entries(mut entries in proptest::collection::vec(1u8..=60, 0..12)) {
            entries.sort_unstable();
            entries.dedup();
            let p = Permutation::new(entries.clone()).unwrap();
            let mut sorted = p.stack_sort().entries().to_vec();
            sorted.sort_unstable();
            prop_assert_eq!(sorted, entries);
        }

        #[test]
        fn preimage_invariance_under_relabeling(seed in 0u64..10_000) {
            // s commutes with standardisation on the level of the map itself
            let mut vals: Vec<u8> = vec![3, 7, 11, 20, 25, 31, 40];
            let mut state = seed;
            for i in (1..vals.len()).rev() {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let j = (state >> 33) as usize % (i + 1);
                vals.swap(i, j);
            }
            let p = Permutation::new(vals).unwrap();
            prop_assert_eq!(
                p.stack_sort().standardise(),
                p.standardise().stack_sort()
            );
        }
    }
}
