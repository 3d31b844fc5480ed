//! Dense bivariate polynomials with i128 coefficients, and truncated power
//! series in t whose coefficients are such polynomials. Small orders only;
//! every division here is an exact polynomial division with the remainder
//! checked.

use std::ops::{Add, Mul, Neg, Sub};

/// coeffs[i][j] multiplies v1^i v2^j (variable names depend on context:
/// (u,v), (u,w), or (x,a)).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly2 {
    pub coeffs: Vec<Vec<i128>>,
}

impl Poly2 {
    pub fn zero() -> Self {
        Poly2 { coeffs: vec![] }
    }

    pub fn constant(c: i128) -> Self {
        if c == 0 {
            Self::zero()
        } else {
            Poly2 {
                coeffs: vec![vec![c]],
            }
        }
    }

    pub fn monomial(c: i128, d1: usize, d2: usize) -> Self {
        let mut p = Poly2::zero();
        p.set(d1, d2, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs
            .iter()
            .all(|row| row.iter().all(|&c| c == 0))
    }

    pub fn get(&self, d1: usize, d2: usize) -> i128 {
        self.coeffs
            .get(d1)
            .and_then(|row| row.get(d2))
            .copied()
            .unwrap_or(0)
    }

    pub fn set(&mut self, d1: usize, d2: usize, c: i128) {
        if self.coeffs.len() <= d1 {
            self.coeffs.resize(d1 + 1, vec![]);
        }
        if self.coeffs[d1].len() <= d2 {
            self.coeffs[d1].resize(d2 + 1, 0);
        }
        self.coeffs[d1][d2] = c;
    }

    pub fn add_to(&mut self, d1: usize, d2: usize, c: i128) {
        let cur = self.get(d1, d2);
        self.set(d1, d2, cur + c);
    }

    pub fn deg1(&self) -> usize {
        self.coeffs
            .iter()
            .rposition(|row| row.iter().any(|&c| c != 0))
            .unwrap_or(0)
    }

    pub fn deg2(&self) -> usize {
        self.coeffs
            .iter()
            .filter_map(|row| row.iter().rposition(|&c| c != 0))
            .max()
            .unwrap_or(0)
    }

    /// Iterate nonzero (d1, d2, coeff).
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, i128)> + '_ {
        self.coeffs.iter().enumerate().flat_map(|(i, row)| {
            row.iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .map(move |(j, &c)| (i, j, c))
        })
    }

    /// Substitute v1 = v2 = 1.
    pub fn eval_ones(&self) -> i128 {
        self.terms().map(|(_, _, c)| c).sum()
    }

    /// Substitute (v1, v2) = (s1, s2).
    pub fn eval(&self, s1: i128, s2: i128) -> i128 {
        let mut total = 0i128;
        for (i, j, c) in self.terms() {
            total += c * s1.pow(i as u32) * s2.pow(j as u32);
        }
        total
    }

    /// Exact division by v1^k (fails if any low-order term survives).
    pub fn div_var1_power(&self, k: usize) -> Option<Poly2> {
        let mut out = Poly2::zero();
        for (i, j, c) in self.terms() {
            if i < k {
                return None;
            }
            out.set(i - k, j, c);
        }
        Some(out)
    }

    pub fn div_var2_power(&self, k: usize) -> Option<Poly2> {
        let mut out = Poly2::zero();
        for (i, j, c) in self.terms() {
            if j < k {
                return None;
            }
            out.set(i, j - k, c);
        }
        Some(out)
    }

    /// Exact division by (1 - v1): returns None when (1 - v1) is not a factor.
    pub fn div_one_minus_var1(&self) -> Option<Poly2> {
        // f = (1 - u) g  =>  g_i = f_i + g_{i-1} row-wise, remainder g_top = 0
        let d1 = self.deg1();
        let d2 = self.deg2();
        if self.is_zero() {
            return Some(Poly2::zero());
        }
        let mut out = Poly2::zero();
        let mut carry = vec![0i128; d2 + 1];
        for i in 0..=d1 {
            for j in 0..=d2 {
                carry[j] += self.get(i, j);
                if carry[j] != 0 {
                    out.set(i, j, carry[j]);
                }
            }
        }
        // remainder check: f(1, v2) must vanish
        for j in 0..=d2 {
            if carry[j] != 0 {
                return None;
            }
        }
        Some(out)
    }

    /// Substitute v1 -> (x + 1): binomially redistribute the first variable.
    pub fn shift_var1(&self) -> Poly2 {
        let mut out = Poly2::zero();
        for (k, j, c) in self.terms() {
            // (x+1)^k = sum_i C(k,i) x^i
            let mut binom = 1i128;
            for i in 0..=k {
                if i > 0 {
                    binom = binom * (k - i + 1) as i128 / i as i128;
                }
                out.add_to(i, j, c * binom);
            }
        }
        out
    }
}

impl Add for &Poly2 {
    type Output = Poly2;
    fn add(self, rhs: Self) -> Poly2 {
        let mut out = self.clone();
        for (i, j, c) in rhs.terms() {
            out.add_to(i, j, c);
        }
        out
    }
}

impl Sub for &Poly2 {
    type Output = Poly2;
    fn sub(self, rhs: Self) -> Poly2 {
        let mut out = self.clone();
        for (i, j, c) in rhs.terms() {
            out.add_to(i, j, -c);
        }
        out
    }
}

impl Mul for &Poly2 {
    type Output = Poly2;
    fn mul(self, rhs: Self) -> Poly2 {
        let mut out = Poly2::zero();
        for (i1, j1, c1) in self.terms() {
            for (i2, j2, c2) in rhs.terms() {
                out.add_to(i1 + i2, j1 + j2, c1.checked_mul(c2).expect("poly overflow"));
            }
        }
        out
    }
}

impl Neg for &Poly2 {
    type Output = Poly2;
    fn neg(self) -> Poly2 {
        let mut out = self.clone();
        for row in &mut out.coeffs {
            for c in row {
                *c = -*c;
            }
        }
        out
    }
}

/// Power series in t, truncated at t^max_n inclusive; terms[n] is the t^n
/// coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncSeries {
    pub max_n: usize,
    pub terms: Vec<Poly2>,
}

impl TruncSeries {
    pub fn zero(max_n: usize) -> Self {
        TruncSeries {
            max_n,
            terms: vec![Poly2::zero(); max_n + 1],
        }
    }

    pub fn term(&self, n: usize) -> &Poly2 {
        &self.terms[n]
    }

    pub fn add(&self, rhs: &TruncSeries) -> TruncSeries {
        let max_n = self.max_n.min(rhs.max_n);
        let mut out = TruncSeries::zero(max_n);
        for n in 0..=max_n {
            out.terms[n] = &self.terms[n] + &rhs.terms[n];
        }
        out
    }

    pub fn sub(&self, rhs: &TruncSeries) -> TruncSeries {
        let max_n = self.max_n.min(rhs.max_n);
        let mut out = TruncSeries::zero(max_n);
        for n in 0..=max_n {
            out.terms[n] = &self.terms[n] - &rhs.terms[n];
        }
        out
    }

    pub fn mul(&self, rhs: &TruncSeries) -> TruncSeries {
        let max_n = self.max_n.min(rhs.max_n);
        let mut out = TruncSeries::zero(max_n);
        for n1 in 0..=max_n {
            if self.terms[n1].is_zero() {
                continue;
            }
            for n2 in 0..=max_n - n1 {
                if rhs.terms[n2].is_zero() {
                    continue;
                }
                let prod = &self.terms[n1] * &rhs.terms[n2];
                out.terms[n1 + n2] = &out.terms[n1 + n2] + &prod;
            }
        }
        out
    }

    /// Multiply by t^k (shifting away the top k terms).
    pub fn shift_t(&self, k: usize) -> TruncSeries {
        let mut out = TruncSeries::zero(self.max_n);
        for n in 0..=self.max_n.saturating_sub(k) {
            out.terms[n + k] = self.terms[n].clone();
        }
        out
    }

    pub fn map_terms(&self, f: impl Fn(&Poly2) -> Poly2) -> TruncSeries {
        TruncSeries {
            max_n: self.max_n,
            terms: self.terms.iter().map(f).collect(),
        }
    }
}
