//! The transformation chain J -> J1 -> J2 -> Q and the grid functional
//! equation, verified at small order.
//!
//!   J1(t,u,w) = J(t, u, w/(tu))           (monomial reshuffle; needs tl <= min(n, leg-1))
//!   J2(t,u,w) = u (w J1(w) - tu J1(tu))/(w - tu) - u (C(w) - 1)
//!   Q(t,x,a)  = J2(t, x+1, a/(1+a)^2)
//!
//! J itself is enumerated, which caps its order; a coefficient of t^m w^j in
//! J2 draws only on J-terms of order exactly m + j, so entries with
//! m + j <= j_order are exact and everything else is marked untrusted. The
//! same bookkeeping propagates to Q: the t^n coefficient is trusted up to
//! a-degree j_order - n.
//!
//! Independently of the chain, Q is also built symbolically from its
//! recurrence, where every coefficient is exact; the chain is checked against
//! it on the trusted region and the functional equation is checked on it
//! exactly.

use crate::jseries::{compute_j_truncated, J_ORDER_CAP};
use crate::poly::{Poly2, TruncSeries};
use crate::preimage::catalan_numbers;
use crate::{OracleError, Result};

pub const Q_CHAIN_CAP: usize = 6;

/// Q via the substitution chain. `terms[n]` is the t^n coefficient in (x, a);
/// `trusted_a_degree[n]` bounds the exact region.
#[derive(Debug)]
pub struct QChain {
    pub max_n: usize,
    pub j_order: usize,
    pub terms: Vec<Poly2>,
    pub trusted_a_degree: Vec<usize>,
}

pub fn transform_to_q(max_n: usize) -> Result<QChain> {
    if max_n > Q_CHAIN_CAP {
        return Err(OracleError::Cap(format!(
            "Q chain capped at order {Q_CHAIN_CAP}"
        )));
    }
    let j_order = (2 * max_n + 1).min(J_ORDER_CAP).max(max_n);
    let j = compute_j_truncated(j_order)?;

    // J1: t^n u^k v^l -> t^(n-l) u^(k-l) w^l
    let mut j1 = TruncSeries::zero(j_order);
    for n in 0..=j_order {
        for (k, l, c) in j.term(n).terms() {
            if l > n || l > k {
                return Err(OracleError::Verification(format!(
                    "monomial t^{n} u^{k} v^{l} violates tl <= min(n, leg-1)"
                )));
            }
            j1.terms[n - l].add_to(k - l, l, c);
        }
    }

    // J2 = u (w J1(w) - tu J1(tu))/(w - tu) - u (C(w) - 1)
    // each J1 term t^m' u^kappa w^l spreads to t^(m'+l-i) u^(kappa+l-i+1) w^i
    let w_max = max_n + 1;
    let mut j2 = TruncSeries::zero(max_n);
    for mprime in 0..=j_order {
        for (kappa, l, c) in j1.term(mprime).terms() {
            for i in 0..=l {
                let m = mprime + l - i;
                if m > max_n || i > w_max {
                    continue;
                }
                j2.terms[m].add_to(kappa + l - i + 1, i, c);
            }
        }
    }
    let cats = catalan_numbers(w_max);
    for (jdeg, &cj) in cats.iter().enumerate().skip(1) {
        j2.terms[0].add_to(1, jdeg, -(cj as i128));
    }

    // Q: u -> x+1, w -> a/(1+a)^2 truncated at a^(max_n+1)
    let a_max = max_n + 1;
    let w_powers = catalytic_substitution_powers(w_max, a_max);
    let mut terms = Vec::with_capacity(max_n + 1);
    for m in 0..=max_n {
        let mut q = Poly2::zero();
        for (kappa, i, c) in j2.term(m).terms() {
            // (x+1)^kappa x-row times W(a)^i a-row
            let mut binom = 1i128;
            for b in 0..=kappa {
                if b > 0 {
                    binom = binom * (kappa - b + 1) as i128 / b as i128;
                }
                for (d, &wc) in w_powers[i].iter().enumerate() {
                    if wc != 0 {
                        q.add_to(b, d, c * binom * wc);
                    }
                }
            }
        }
        terms.push(q);
    }
    let trusted_a_degree: Vec<usize> = (0..=max_n).map(|m| j_order.saturating_sub(m)).collect();
    Ok(QChain {
        max_n,
        j_order,
        terms,
        trusted_a_degree,
    })
}

/// Powers of a/(1+a)^2 = sum_{m>=1} (-1)^(m-1) m a^m, truncated at a^a_max.
fn catalytic_substitution_powers(max_power: usize, a_max: usize) -> Vec<Vec<i128>> {
    let mut base = vec![0i128; a_max + 1];
    for (m, slot) in base.iter_mut().enumerate().skip(1) {
        *slot = if m % 2 == 1 { m as i128 } else { -(m as i128) };
    }
    let mut powers = Vec::with_capacity(max_power + 1);
    let mut cur = vec![0i128; a_max + 1];
    cur[0] = 1;
    powers.push(cur.clone());
    for _ in 1..=max_power {
        let mut next = vec![0i128; a_max + 1];
        for (i, &ci) in cur.iter().enumerate() {
            if ci == 0 {
                continue;
            }
            for (j, &bj) in base.iter().enumerate() {
                if bj != 0 && i + j <= a_max {
                    next[i + j] += ci * bj;
                }
            }
        }
        powers.push(next.clone());
        cur = next;
    }
    powers
}

/// Q_n(x,a) built from the recurrence, exact at every coefficient.
pub fn recurrence_q(max_n: usize) -> Vec<Poly2> {
    let mut q: Vec<Poly2> = Vec::with_capacity(max_n + 1);
    q.push(Poly2::zero()); // Q_0 = 0
    if max_n == 0 {
        return q;
    }
    // Q_1 = (x+1)^2 (a+1)^2
    let xp1 = Poly2 {
        coeffs: vec![vec![1], vec![1]],
    };
    let ap1 = Poly2 {
        coeffs: vec![vec![1, 1]],
    };
    let xp1_sq = &xp1 * &xp1;
    let ap1_sq = &ap1 * &ap1;
    q.push(&xp1_sq * &ap1_sq);
    for n in 2..=max_n {
        let a_prev = sub_a0(&q[n - 1]);
        let t1 = &(&xp1 * &ap1_sq)
            * &a_prev
                .div_var2_power(1)
                .expect("A_(n-1) is divisible by a");
        let a_var = Poly2::monomial(1, 0, 1);
        let t2 = &(&xp1 * &a_var) * &q[n - 1];
        let mut conv = Poly2::zero();
        for j in 1..=n.saturating_sub(2) {
            let aj = sub_a0(&q[j]);
            let bj = sub_x0(&q[n - 1 - j]);
            conv = &conv + &(&aj * &bj);
        }
        let t3 = &xp1
            * &conv
                .div_var1_power(1)
                .expect("the B-convolution is divisible by x");
        q.push(&(&t1 + &t2) + &t3);
    }
    q
}

/// Q - Q(x, 0) (remove the a^0 layer).
fn sub_a0(q: &Poly2) -> Poly2 {
    let mut out = q.clone();
    for (i, j, c) in q.terms() {
        if j == 0 {
            out.add_to(i, 0, -c);
        }
    }
    out
}

/// Q - Q(0, a).
fn sub_x0(q: &Poly2) -> Poly2 {
    let mut out = q.clone();
    for (i, j, c) in q.terms() {
        if i == 0 {
            out.add_to(0, j, -c);
        }
    }
    out
}

/// Check the grid functional equation on exact Q-terms:
///   Q = t (x+1)^2 (1+a)^2
///     + t (1+x) (Q - Q(x,0))/a ((1+a)^2 + a (Q - Q(0,a))/x)
///     + t (1+x) a Q.
pub fn verify_functional_equation(q: &[Poly2]) -> Result<()> {
    let max_n = q.len() - 1;
    let xp1 = Poly2 {
        coeffs: vec![vec![1], vec![1]],
    };
    let ap1_sq = {
        let ap1 = Poly2 {
            coeffs: vec![vec![1, 1]],
        };
        &ap1 * &ap1
    };
    for n in 1..=max_n {
        // coefficient of t^n on the right-hand side
        let mut rhs = if n == 1 {
            &(&xp1 * &xp1) * &ap1_sq
        } else {
            Poly2::zero()
        };
        // t (1+x) a Q: draws on Q_{n-1}
        let a_var = Poly2::monomial(1, 0, 1);
        rhs = &rhs + &(&(&xp1 * &a_var) * &q[n - 1]);
        // t (1+x) (A/a) (1+a)^2: also Q_{n-1}
        let a_div = sub_a0(&q[n - 1])
            .div_var2_power(1)
            .ok_or_else(|| OracleError::Verification(format!("A_{} not divisible by a", n - 1)))?;
        rhs = &rhs + &(&(&xp1 * &a_div) * &ap1_sq);
        // t (1+x) (A/a) a (B/x) expands to the level convolution
        let mut conv = Poly2::zero();
        for m in 1..n.saturating_sub(1) {
            let am = sub_a0(&q[m]);
            let bm = sub_x0(&q[n - 1 - m]);
            conv = &conv + &(&am * &bm);
        }
        if !conv.is_zero() {
            let conv_div = conv.div_var1_power(1).ok_or_else(|| {
                OracleError::Verification(format!("convolution at order {n} not divisible by x"))
            })?;
            rhs = &rhs + &(&xp1 * &conv_div);
        }
        if !(&rhs - &q[n]).is_zero() {
            return Err(OracleError::Verification(format!(
                "functional equation fails at order {n}"
            )));
        }
    }
    Ok(())
}
