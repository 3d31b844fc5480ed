//! The two statistics behind the catalytic variables: legal spaces and tail
//! length, plus tail-bound descents and the canonical descent c.

use crate::perm::Permutation;

/// Positions are 1-indexed as in the combinatorics convention.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermStats {
    pub n: usize,
    /// Number of legal spaces: gaps (a, a+1), a in 0..=n, where a new
    /// leftmost point can be inserted without creating a 2341.
    pub leg: usize,
    /// Longest suffix of fixed points.
    pub tl: usize,
    /// Descents d such that every hook from (d, pi_d) ends in the tail.
    pub tail_bound_descents: Vec<usize>,
    /// Position of the value n - tl (None for the identity).
    pub c_index: Option<usize>,
}

/// The gap (a, a+1) is legal when there are no i1 < i2 < i3 with
/// pi_{i3} <= a < pi_{i1} < pi_{i2}.
fn is_legal_space(p: &[u8], a: u8) -> bool {
    let n = p.len();
    // smallest candidate pi_{i1} > a seen so far; any later larger pi_{i2}
    // followed by something <= a kills the gap
    let mut min_above: Option<u8> = None;
    // has_small_after[i]: some position > i holds a value <= a
    let mut has_small_after = vec![false; n + 1];
    for i in (0..n).rev() {
        has_small_after[i] = has_small_after[i + 1] || p[i] <= a;
    }
    for (i2, &v2) in p.iter().enumerate() {
        if let Some(m) = min_above {
            if v2 > m && i2 + 1 <= n && has_small_after[i2 + 1] {
                return false;
            }
        }
        if v2 > a {
            min_above = Some(min_above.map_or(v2, |m| m.min(v2)));
        }
    }
    true
}

pub fn legal_spaces(p: &Permutation) -> usize {
    let n = p.len() as u8;
    (0..=n).filter(|&a| is_legal_space(p.entries(), a)).count()
}

pub fn tail_length(p: &Permutation) -> usize {
    let n = p.len();
    let e = p.entries();
    let mut tl = 0;
    while tl < n && e[n - 1 - tl] as usize == n - tl {
        tl += 1;
    }
    tl
}

/// Descent positions (1-indexed i with pi_i > pi_{i+1}).
pub fn descents(p: &Permutation) -> Vec<usize> {
    p.entries()
        .windows(2)
        .enumerate()
        .filter(|(_, w)| w[0] > w[1])
        .map(|(i, _)| i + 1)
        .collect()
}

/// d is tail-bound when every hook with southwest endpoint (d, pi_d) has its
/// northeast endpoint among the tail fixed points.
pub fn is_tail_bound(p: &Permutation, d: usize) -> bool {
    let n = p.len();
    let tl = tail_length(p);
    let tail_start = n - tl + 1; // 1-indexed position of the first tail point
    let pd = p.at(d);
    for j in d + 1..=n {
        if p.at(j) > pd && j < tail_start {
            return false;
        }
    }
    true
}

pub fn stats(p: &Permutation) -> PermStats {
    let n = p.len();
    let tl = tail_length(p);
    let tail_bound: Vec<usize> = descents(p)
        .into_iter()
        .filter(|&d| is_tail_bound(p, d))
        .collect();
    let c_index = if p.is_identity() {
        None
    } else {
        let target = (n - tl) as u8;
        let pos = p.entries().iter().position(|&v| v == target).unwrap() + 1;
        debug_assert!(is_tail_bound(p, pos), "c(pi) must be tail-bound");
        Some(pos)
    };
    PermStats {
        n,
        leg: legal_spaces(p),
        tl,
        tail_bound_descents: tail_bound,
        c_index,
    }
}
