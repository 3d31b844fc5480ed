//! The refined generating function
//!   J(t,u,v) = sum_n sum_{pi in W_2(n)} |s^-1(pi)| t^n u^(leg(pi)-1) v^tl(pi)
//! computed by enumeration, and the two-catalytic-variable identity it
//! satisfies, verified as an exact truncated-series identity. The apparent
//! divisions by 1-v, 1-uv, v and 1-u all cancel; they are implemented as
//! per-monomial quotient forms, never as series division.

use crate::perm::{for_each_permutation, Permutation};
use crate::poly::{Poly2, TruncSeries};
use crate::preimage::catalan_numbers;
use crate::stats::{legal_spaces, tail_length};
use crate::{OracleError, Result};
use std::collections::HashMap;

pub const J_ORDER_CAP: usize = 8;

/// J as a truncated series; terms[n] is a polynomial in (u, v).
pub fn compute_j_truncated(max_n: usize) -> Result<TruncSeries> {
    if max_n > J_ORDER_CAP {
        return Err(OracleError::Cap(format!(
            "J is enumerated over S_n; capped at order {J_ORDER_CAP}"
        )));
    }
    let mut series = TruncSeries::zero(max_n);
    for n in 1..=max_n {
        // preimage counts in one sweep, then weight the 2-stack-sortable targets
        let mut census: HashMap<Vec<u8>, u64> = HashMap::new();
        for_each_permutation(n, |p| {
            let image = Permutation::new(p.to_vec()).unwrap().stack_sort();
            *census.entry(image.entries().to_vec()).or_insert(0) += 1;
        });
        let mut poly = Poly2::zero();
        for (target, count) in &census {
            let pi = Permutation::new(target.clone()).unwrap();
            if !pi.is_k_stack_sortable(2) {
                continue;
            }
            let leg = legal_spaces(&pi);
            let tl = tail_length(&pi);
            debug_assert!(leg > tl, "leg > tl must hold for the J1 substitution");
            poly.add_to(leg - 1, tl, *count as i128);
        }
        series.terms[n] = poly;
    }
    Ok(series)
}

/// C(tuv) - 1 as a truncated series: t^n carries C_n u^n v^n.
pub fn catalan_term(max_n: usize) -> TruncSeries {
    let cats = catalan_numbers(max_n);
    let mut s = TruncSeries::zero(max_n);
    for n in 1..=max_n {
        s.terms[n] = Poly2::monomial(cats[n] as i128, n, n);
    }
    s
}

/// (C(tuv) - 1)/v: every monomial has v-degree >= 1.
fn catalan_term_div_v(max_n: usize) -> TruncSeries {
    catalan_term(max_n).map_terms(|p| p.div_var2_power(1).expect("C - 1 is divisible by v"))
}

/// J(t, u, 1).
pub fn j_at_v1(j: &TruncSeries) -> TruncSeries {
    j.map_terms(|p| {
        let mut out = Poly2::zero();
        for (k, _, c) in p.terms() {
            out.add_to(k, 0, c);
        }
        out
    })
}

/// (J(t,u,1) - J(t,u,v)) / (1 - v): monomial u^k v^l becomes
/// u^k (1 + v + ... + v^(l-1)).
fn quotient_j1_minus_jv(j: &TruncSeries) -> TruncSeries {
    j.map_terms(|p| {
        let mut out = Poly2::zero();
        for (k, l, c) in p.terms() {
            for i in 0..l {
                out.add_to(k, i, c);
            }
        }
        out
    })
}

/// (J(t,u,1) - v J(t,u,v)) / (1 - v): monomial u^k v^l becomes
/// u^k (1 + v + ... + v^l).
fn quotient_j1_minus_v_jv(j: &TruncSeries) -> TruncSeries {
    j.map_terms(|p| {
        let mut out = Poly2::zero();
        for (k, l, c) in p.terms() {
            for i in 0..=l {
                out.add_to(k, i, c);
            }
        }
        out
    })
}

/// (J(t,1,1) - uv J(t,1,uv)) / (1 - uv): the u-collapsed monomial v^l becomes
/// 1 + (uv) + ... + (uv)^l.
fn quotient_diagonal(j: &TruncSeries) -> TruncSeries {
    j.map_terms(|p| {
        let mut out = Poly2::zero();
        for (_, l, c) in p.terms() {
            for i in 0..=l {
                out.add_to(i, i, c);
            }
        }
        out
    })
}

#[derive(Debug)]
pub struct IdentityReport {
    pub order: usize,
    pub matched: bool,
    /// First (n, u-degree, v-degree, lhs, rhs) mismatch, when any.
    pub mismatch: Option<(usize, usize, usize, i128, i128)>,
}

/// Verify the two-catalytic-variable identity for J to the given order:
///   J = (C(tuv)-1)(1 + tu J(u,1))
///     + (tuv/(1-u)) [ (J(u,1)-J(u,v))/(1-v) - (C(tuv)-1)/v ]
///                   [ (J(1,1)-uvJ(1,uv))/(1-uv) - u (J(u,1)-vJ(u,v))/(1-v) ]
/// The second bracket vanishes at u = 1, so the division by 1-u is an exact
/// polynomial division and any nonzero remainder is reported as a failure.
pub fn verify_identity(j: &TruncSeries) -> Result<IdentityReport> {
    let max_n = j.max_n;
    let c1 = catalan_term(max_n);
    let ju1 = j_at_v1(j);

    // (C-1)(1 + t u J(u,1))
    let mut one = TruncSeries::zero(max_n);
    one.terms[0] = Poly2::constant(1);
    let tu_ju1 = ju1
        .shift_t(1)
        .map_terms(|p| p * &Poly2::monomial(1, 1, 0));
    let part1 = c1.mul(&one.add(&tu_ju1));

    // first bracket
    let bracket1 = quotient_j1_minus_jv(j).sub(&catalan_term_div_v(max_n));

    // second bracket, then the exact division by (1 - u)
    let u_quot = quotient_j1_minus_v_jv(j).map_terms(|p| p * &Poly2::monomial(1, 1, 0));
    let bracket2 = quotient_diagonal(j).sub(&u_quot);
    let mut bracket2_div = TruncSeries::zero(max_n);
    for n in 0..=max_n {
        match bracket2.terms[n].div_one_minus_var1() {
            Some(q) => bracket2_div.terms[n] = q,
            None => {
                return Err(OracleError::Verification(format!(
                    "second bracket not divisible by 1-u at order {n}"
                )))
            }
        }
    }

    // t u v * bracket1 * (bracket2 / (1-u))
    let part2 = bracket1
        .mul(&bracket2_div)
        .shift_t(1)
        .map_terms(|p| p * &Poly2::monomial(1, 1, 1));

    let rhs = part1.add(&part2);
    for n in 0..=max_n {
        let diff = &rhs.terms[n] - j.term(n);
        if !diff.is_zero() {
            let (d1, d2, _) = diff.terms().next().unwrap();
            return Ok(IdentityReport {
                order: max_n,
                matched: false,
                mismatch: Some((n, d1, d2, j.term(n).get(d1, d2), rhs.terms[n].get(d1, d2))),
            });
        }
    }
    Ok(IdentityReport {
        order: max_n,
        matched: true,
        mismatch: None,
    })
}
