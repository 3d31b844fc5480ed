//! The same grid recurrence in exact integer arithmetic. Q_n has integer
//! coefficients, so every division by a grid coordinate is exact over the
//! integers; this engine is the in-process oracle for the modular kernel at
//! small order (it shares no arithmetic with it).

use crate::series::{CoefficientSeries, Provenance};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Zero};

pub const EXACT_ORDER_CAP: usize = 64;

/// One fully assembled level: interior grid values plus both boundary lines.
#[derive(Debug, Clone)]
pub struct ExactLevel {
    pub n: usize,
    pub grid: usize,
    /// Q_n(x,a) for x,a in 1..=grid, x-major.
    pub interior: Vec<BigInt>,
    /// Q_n(x,0) for x in 0..=grid.
    pub bound_a0: Vec<BigInt>,
    /// Q_n(0,a) for a in 0..=grid.
    pub bound_x0: Vec<BigInt>,
}

impl ExactLevel {
    pub fn at(&self, x: usize, a: usize) -> &BigInt {
        match (x, a) {
            (0, a) => &self.bound_x0[a],
            (x, 0) => &self.bound_a0[x],
            (x, a) => &self.interior[(x - 1) * self.grid + (a - 1)],
        }
    }
}

fn exact_div(v: BigInt, d: u64) -> BigInt {
    let d = BigInt::from(d);
    debug_assert!((&v % &d).is_zero(), "inexact division in integer engine");
    v / d
}

fn binomials(m: usize) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for j in 1..=m {
        let next = &row[j - 1] * BigInt::from((m - j + 1) as u64) / BigInt::from(j as u64);
        row.push(next);
    }
    row
}

fn interpolate(values: impl Fn(usize) -> BigInt, n: usize, binoms: &[BigInt]) -> BigInt {
    let mut acc = BigInt::zero();
    for j in 1..=n + 2 {
        let term = &binoms[j] * values(j);
        if j % 2 == 1 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// Run the exact engine to order `n_max` on a grid of side `grid` >= n_max+2,
/// returning every level (intended for verification at small order).
pub fn exact_levels(n_max: usize, grid: usize) -> Result<Vec<ExactLevel>> {
    if n_max > EXACT_ORDER_CAP {
        return Err(Error::Resource(format!(
            "exact engine capped at order {EXACT_ORDER_CAP} (asked for {n_max})"
        )));
    }
    if grid < n_max + 2 {
        return Err(Error::InvalidInput(format!(
            "grid {grid} too small for order {n_max}"
        )));
    }
    let mut levels: Vec<ExactLevel> = Vec::with_capacity(n_max);

    // level 1: (x+1)^2 (a+1)^2
    let sq = |v: usize| BigInt::from((v * v) as u64);
    let mut interior = Vec::with_capacity(grid * grid);
    for x in 1..=grid {
        for a in 1..=grid {
            interior.push(sq(x + 1) * sq(a + 1));
        }
    }
    levels.push(ExactLevel {
        n: 1,
        grid,
        interior,
        bound_a0: (0..=grid).map(|x| sq(x + 1)).collect(),
        bound_x0: (0..=grid).map(|a| sq(a + 1)).collect(),
    });

    for n in 2..=n_max {
        let mut interior = vec![BigInt::zero(); grid * grid];
        for x in 1..=grid {
            let fx = BigInt::from((x + 1) as u64);
            for a in 1..=grid {
                let idx = (x - 1) * grid + (a - 1);
                let prev = &levels[n - 2];
                // A_{n-1}/a is exact
                let a_prev = prev.interior[idx].clone() - &prev.bound_a0[x];
                let t1 = &fx * sq(a + 1) * exact_div(a_prev, a as u64);
                let t2 = &fx * BigInt::from(a as u64) * &prev.interior[idx];
                let mut conv = BigInt::zero();
                for j in 1..=n.saturating_sub(2) {
                    let aj = levels[j - 1].interior[idx].clone() - &levels[j - 1].bound_a0[x];
                    let bj = levels[n - 1 - j - 1].interior[idx].clone()
                        - &levels[n - 1 - j - 1].bound_x0[a];
                    conv += aj * bj;
                }
                let t3 = &fx * exact_div(conv, x as u64);
                interior[idx] = t1 + t2 + t3;
            }
        }
        let binoms = binomials(n + 2);
        let mut bound_a0 = vec![BigInt::zero(); grid + 1];
        let mut bound_x0 = vec![BigInt::zero(); grid + 1];
        for x in 1..=grid {
            bound_a0[x] = interpolate(|j| interior[(x - 1) * grid + (j - 1)].clone(), n, &binoms);
        }
        for a in 1..=grid {
            bound_x0[a] = interpolate(|j| interior[(j - 1) * grid + (a - 1)].clone(), n, &binoms);
        }
        let q00 = interpolate(|j| bound_a0[j].clone(), n, &binoms);
        bound_a0[0] = q00.clone();
        bound_x0[0] = q00;
        levels.push(ExactLevel {
            n,
            grid,
            interior,
            bound_a0,
            bound_x0,
        });
    }
    Ok(levels)
}

/// w_n for n <= n_max by the exact-integer grid engine.
pub fn reference_compute_exact(n_max: usize) -> Result<CoefficientSeries> {
    let levels = exact_levels(n_max, n_max + 2)?;
    let coeffs: Vec<BigInt> = levels.iter().map(|l| l.bound_a0[0].clone()).collect();
    Ok(CoefficientSeries {
        name: "w".into(),
        coeffs,
        provenance: Provenance::ExactUncertified,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_brute_force_counts() {
        let s = reference_compute_exact(10).unwrap();
        let expected: Vec<u64> = vec![1, 2, 6, 24, 114, 606, 3494, 21426, 137901, 922862];
        for (i, e) in expected.iter().enumerate() {
            assert_eq!(s.coeffs[i], BigInt::from(*e), "w_{}", i + 1);
        }
    }

    #[test]
    fn q2_closed_form() {
        let levels = exact_levels(2, 4).unwrap();
        let l2 = &levels[1];
        // Q_2(x,a) = 2 (1+x)^3 (1+a)^3
        for x in 0..=4usize {
            for a in 0..=4usize {
                let expected =
                    BigInt::from(2) * BigInt::from(((1 + x).pow(3) * (1 + a).pow(3)) as u64);
                assert_eq!(*l2.at(x, a), expected, "Q_2({x},{a})");
            }
        }
    }

    #[test]
    fn q3_at_origin_counts_s3() {
        let levels = exact_levels(3, 5).unwrap();
        assert_eq!(*levels[2].at(0, 0), BigInt::from(6));
    }

    #[test]
    fn degree_bound_predicts_extra_point() {
        // interpolating from a = 1..=n+2 must predict the value at a = n+3,
        // because Q_n has degree n+1 < n+2 in a
        let n_max = 12;
        let grid = n_max + 3; // one extra point beyond what the engine needs
        let levels = exact_levels(n_max, grid).unwrap();
        for level in &levels {
            let n = level.n;
            let binoms = binomials(n + 3);
            for x in [1usize, 2, grid / 2, grid] {
                // sum_{j=0}^{n+3} (-1)^j C(n+3,j) Q_n(x,j) = 0, solved for j = n+3
                let mut acc = BigInt::zero();
                for j in 0..=n + 2 {
                    let term = &binoms[j] * level.at(x, j);
                    if j % 2 == 0 {
                        acc += term;
                    } else {
                        acc -= term;
                    }
                }
                // acc + (-1)^(n+3) Q(x, n+3) = 0, so Q(x, n+3) = (-1)^n acc
                let sign = if n % 2 == 0 { 1 } else { -1 };
                let predicted = acc * BigInt::from(sign);
                assert_eq!(predicted, *level.at(x, n + 3), "level {n}, x={x}");
            }
        }
    }

    #[test]
    fn alternating_binomial_identity_consistency() {
        // Q_n(0,0) recovered from the a=0 line must equal the value recovered
        // from the x=0 line
        let levels = exact_levels(10, 12).unwrap();
        for level in &levels[1..] {
            let n = level.n;
            let binoms = binomials(n + 2);
            let from_rows = interpolate(|j| level.bound_a0[j].clone(), n, &binoms);
            let from_cols = interpolate(|j| level.bound_x0[j].clone(), n, &binoms);
            assert_eq!(from_rows, from_cols, "level {n}");
            assert_eq!(from_rows, *level.at(0, 0));
        }
    }

    #[test]
    fn order_cap_is_enforced()  {
        assert!(reference_compute_exact(65).is_err());
    }
}
