//! The modular grid engine: Q_n(x,a) mod p on the grid (x,a) in [1, N+2]^2.
//!
//! Per level n >= 2, with A_j(x,a) = Q_j(x,a) - Q_j(x,0) and
//! B_j(x,a) = Q_j(x,a) - Q_j(0,a):
//!
//!   Q_n = (1+x)(1+a)^2 A_{n-1} / a  +  (1+x) a Q_{n-1}
//!       + (1+x)/x * sum_{j=1}^{n-2} A_j B_{n-1-j}
//!
//! Divisions by the grid coordinates are modular inverses. The x=0 and a=0
//! lines are recovered from the degree bound (Q_n has degree n+1 in each
//! variable) by the alternating binomial identity
//!   sum_{j=0}^{n+2} (-1)^j C(n+2, j) Q_n(., j) = 0.
//!
//! Histories of A and B are stored per grid point, level-contiguous, so the
//! convolution is a straight dot product over each point's own block.

use crate::{Error, Result};
use rayon::prelude::*;
use stacksort_numeric::modular::Barrett32;

/// Resource limits honoured before any large allocation.
#[derive(Debug, Clone, Copy)]
pub struct EngineLimits {
    pub memory_budget_bytes: u64,
}

impl Default for EngineLimits {
    fn default() -> Self {
        EngineLimits {
            memory_budget_bytes: 4 << 30,
        }
    }
}

/// Bytes of history the engine keeps for one prime at order `n`
/// (the dominant allocation: two u32 histories over the grid).
pub fn memory_estimate_bytes(n: usize) -> u64 {
    let g = (n + 2) as u64;
    // two histories of (N-1) levels per grid point, plus the level grids
    8 * (n as u64) * g * g + 4 * g * g * 4
}

/// Per-prime state of the grid recurrence.
pub struct ModularRun {
    br: Barrett32,
    n_target: usize,
    grid: usize, // N+2
    level: usize,
    q_prev: Vec<u32>,       // Q_level at interior points, x-major
    bound_a0: Vec<u32>,     // Q_level(x, 0) for x in 0..=grid
    bound_x0: Vec<u32>,     // Q_level(0, a) for a in 0..=grid
    a_hist: Vec<u32>,       // A_j at [idx * hist_stride + (j-1)]
    b_hist: Vec<u32>,       // B_j likewise
    hist_stride: usize,     // N-1 slots per point
    inv: Vec<u32>,          // inverses of 0..=grid (slot 0 unused)
    fact: Vec<u32>,
    inv_fact: Vec<u32>,
    output: Vec<u32>, // w_n mod p for n = 1..=N
}

impl ModularRun {
    pub fn new(n: usize, p: u32, limits: &EngineLimits) -> Result<Self> {
        assert!(n >= 1);
        if (p as usize) <= n + 2 {
            return Err(Error::InvalidInput(format!(
                "prime {p} must exceed the grid bound {}",
                n + 2
            )));
        }
        let need = memory_estimate_bytes(n);
        if need > limits.memory_budget_bytes {
            return Err(Error::Resource(format!(
                "order {n} needs ~{need} bytes per prime, over the {} byte budget",
                limits.memory_budget_bytes
            )));
        }
        let grid = n + 2;
        let br = Barrett32::new(p);
        let g2 = grid * grid;
        let hist_stride = n.saturating_sub(1);

        // coordinate inverses and factorial tables for the binomial rows
        let mut inv = vec![0u32; grid + 1];
        for i in 1..=grid {
            inv[i] = br.inv(i as u32);
        }
        let mut fact = vec![1u32; grid + 1];
        for i in 1..=grid {
            fact[i] = br.mul(fact[i - 1], i as u32);
        }
        let mut inv_fact = vec![1u32; grid + 1];
        inv_fact[grid] = br.inv(fact[grid]);
        for i in (0..grid).rev() {
            inv_fact[i] = br.mul(inv_fact[i + 1], (i + 1) as u32);
        }

        // level 1: Q_1(x,a) = (x+1)^2 (a+1)^2
        let sq = |v: usize| -> u32 { br.reduce((v as u64) * (v as u64)) };
        let mut q_prev = vec![0u32; g2];
        for x in 1..=grid {
            let sx = sq(x + 1);
            for a in 1..=grid {
                q_prev[(x - 1) * grid + (a - 1)] = br.mul(sx, sq(a + 1));
            }
        }
        let mut bound_a0 = vec![0u32; grid + 1];
        let mut bound_x0 = vec![0u32; grid + 1];
        for x in 0..=grid {
            bound_a0[x] = sq(x + 1);
        }
        for a in 0..=grid {
            bound_x0[a] = sq(a + 1);
        }

        let mut a_hist = vec![0u32; g2 * hist_stride];
        let mut b_hist = vec![0u32; g2 * hist_stride];
        if hist_stride > 0 {
            for x in 1..=grid {
                for a in 1..=grid {
                    let idx = (x - 1) * grid + (a - 1);
                    let q = q_prev[idx];
                    a_hist[idx * hist_stride] = br.sub(q, bound_a0[x]);
                    b_hist[idx * hist_stride] = br.sub(q, bound_x0[a]);
                }
            }
        }

        Ok(ModularRun {
            br,
            n_target: n,
            grid,
            level: 1,
            q_prev,
            bound_a0,
            bound_x0,
            a_hist,
            b_hist,
            hist_stride,
            inv,
            fact,
            inv_fact,
            output: vec![1 % p], // w_1 = Q_1(0,0) = 1
        })
    }

    pub fn prime(&self) -> u32 {
        self.br.p
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn output(&self) -> &[u32] {
        &self.output
    }

    fn binom_row(&self, m: usize) -> Vec<u32> {
        // C(m, j) for j = 0..=m
        let br = &self.br;
        (0..=m)
            .map(|j| br.mul(self.fact[m], br.mul(self.inv_fact[j], self.inv_fact[m - j])))
            .collect()
    }

    /// Advance from level n-1 to level n (n >= 2). Levels must be stepped in
    /// order; stepping past the target order is a contract violation.
    pub fn recurrence_step(&mut self, n: usize) -> Result<()> {
        if n != self.level + 1 || n > self.n_target {
            return Err(Error::Invariant(format!(
                "recurrence_step({n}) out of order at level {}",
                self.level
            )));
        }
        let br = self.br;
        let grid = self.grid;
        let hs = self.hist_stride;
        let conv_len = n - 2; // j = 1..=n-2
        let q_prev = &self.q_prev;
        let bound_a0 = &self.bound_a0;
        let a_hist = &self.a_hist;
        let b_hist = &self.b_hist;
        let inv = &self.inv;

        // squares (1+a)^2, reused across rows; coordinates are < p by the plan
        let sq1: Vec<u32> = (0..=grid)
            .map(|a| br.reduce(((a + 1) as u64) * ((a + 1) as u64)))
            .collect();

        let mut q_new = vec![0u32; grid * grid];
        q_new
            .par_chunks_mut(grid)
            .enumerate()
            .for_each(|(xm1, row)| {
                let x = xm1 + 1;
                let fx = ((x + 1) as u64 % br.p as u64) as u32;
                let fx_invx = br.mul(fx, inv[x]);
                for a in 1..=grid {
                    let idx = xm1 * grid + (a - 1);
                    // convolution over this point's history block
                    let mut acc: u128 = 0;
                    if conv_len > 0 {
                        let ha = &a_hist[idx * hs..idx * hs + conv_len];
                        let hb = &b_hist[idx * hs..idx * hs + conv_len];
                        // sum_j A_j * B_{n-1-j}: forward over ha, backward over hb
                        for (av, bv) in ha.iter().zip(hb.iter().rev()) {
                            acc += (*av as u64 * *bv as u64) as u128;
                        }
                    }
                    let conv = br.reduce_u128(acc);
                    let t3 = br.mul(fx_invx, conv);
                    let a_prev = br.sub(q_prev[idx], bound_a0[x]);
                    let t1 = br.mul(br.mul(fx, sq1[a]), br.mul(a_prev, inv[a]));
                    let t2 = br.mul(br.mul(fx, a as u32), q_prev[idx]);
                    row[a - 1] = br.add(t1, br.add(t2, t3));
                }
            });

        // boundary recovery from the degree bound
        let binoms = self.binom_row(n + 2);
        let mut new_a0 = vec![0u32; grid + 1];
        let mut new_x0 = vec![0u32; grid + 1];
        // Q_n(x, 0) from the row Q_n(x, 1..=n+2)
        new_a0[1..grid + 1]
            .par_iter_mut()
            .enumerate()
            .for_each(|(xm1, slot)| {
                *slot = interpolate_boundary(&q_new[xm1 * grid..xm1 * grid + grid], n, &br, &binoms);
            });
        // Q_n(0, a) from the column Q_n(1..=n+2, a)
        new_x0[1..grid + 1]
            .par_iter_mut()
            .enumerate()
            .for_each(|(am1, slot)| {
                let mut acc: u32 = 0;
                for j in 1..=n + 2 {
                    let term = br.mul(binoms[j], q_new[(j - 1) * grid + am1]);
                    acc = if j % 2 == 1 {
                        br.add(acc, term)
                    } else {
                        br.sub(acc, term)
                    };
                }
                *slot = acc;
            });
        // Q_n(0,0) from the fresh a=0 line
        {
            let mut acc: u32 = 0;
            for j in 1..=n + 2 {
                let term = br.mul(binoms[j], new_a0[j]);
                acc = if j % 2 == 1 {
                    br.add(acc, term)
                } else {
                    br.sub(acc, term)
                };
            }
            new_a0[0] = acc;
            new_x0[0] = acc;
        }

        // append A_n, B_n histories (only needed while further levels remain)
        if n < self.n_target && hs > 0 {
            let na0 = &new_a0;
            let nx0 = &new_x0;
            let qn = &q_new;
            self.a_hist
                .par_chunks_mut(grid * hs)
                .zip(self.b_hist.par_chunks_mut(grid * hs))
                .enumerate()
                .for_each(|(xm1, (ab, bb))| {
                    for a in 1..=grid {
                        let local = (a - 1) * hs + (n - 1);
                        let q = qn[xm1 * grid + (a - 1)];
                        ab[local] = br.sub(q, na0[xm1 + 1]);
                        bb[local] = br.sub(q, nx0[a]);
                    }
                });
        }

        self.output.push(new_a0[0]);
        self.q_prev = q_new;
        self.bound_a0 = new_a0;
        self.bound_x0 = new_x0;
        self.level = n;
        Ok(())
    }
}

/// Recover Q_n(., 0) from the n+2 consecutive values Q_n(., 1..=n+2) using
/// the alternating binomial identity for a polynomial of degree <= n+1.
/// `values` holds Q_n(., a) at a = 1..=len.
pub fn interpolate_boundary(values: &[u32], n: usize, br: &Barrett32, binoms: &[u32]) -> u32 {
    debug_assert!(values.len() >= n + 2);
    debug_assert_eq!(binoms.len(), n + 3);
    // Q(0) = -sum_{j=1}^{n+2} (-1)^j C(n+2,j) Q(j)
    let mut acc: u32 = 0;
    for j in 1..=n + 2 {
        let term = br.mul(binoms[j], values[j - 1]);
        acc = if j % 2 == 1 {
            br.add(acc, term)
        } else {
            br.sub(acc, term)
        };
    }
    acc
}

/// Residues of w_n mod p for 1 <= n <= N.
pub fn compute_series_mod_p(n: usize, p: u32, limits: &EngineLimits) -> Result<Vec<u32>> {
    let mut run = ModularRun::new(n, p, limits)?;
    for level in 2..=n {
        run.recurrence_step(level)?;
    }
    Ok(run.output().to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 4294967291;

    #[test]
    fn first_levels_match_hand_expansion() {
        // Q_2(x,a) = 2 (1+x)^3 (1+a)^3, so Q_2(1,1) = 128
        let mut run = ModularRun::new(4, P, &EngineLimits::default()).unwrap();
        run.recurrence_step(2).unwrap();
        assert_eq!(run.q_prev[0], 128);
        // and Q_2(2,3) = 2*27*64 = 3456
        assert_eq!(run.q_prev[(2 - 1) * run.grid + (3 - 1)], 3456);
        assert_eq!(run.output()[1], 2); // w_2
        run.recurrence_step(3).unwrap();
        assert_eq!(run.output()[2], 6); // w_3 by brute force
    }

    #[test]
    fn small_series_matches_brute_force() {
        let out = compute_series_mod_p(10, P, &EngineLimits::default()).unwrap();
        assert_eq!(
            out,
            vec![1, 2, 6, 24, 114, 606, 3494, 21426, 137901, 922862]
        );
    }

    #[test]
    fn out_of_order_step_is_rejected() {
        let mut run = ModularRun::new(5, P, &EngineLimits::default()).unwrap();
        assert!(run.recurrence_step(3).is_err());
        run.recurrence_step(2).unwrap();
        assert!(run.recurrence_step(2).is_err());
    }

    #[test]
    fn memory_budget_is_enforced_before_allocation() {
        let limits = EngineLimits {
            memory_budget_bytes: 1 << 20,
        };
        match ModularRun::new(400, P, &limits) {
            Err(Error::Resource(_)) => {}
            Err(other) => panic!("expected resource error, got {other:?}"),
            Ok(_) => panic!("expected resource error, got success"),
        }
    }

    #[test]
    fn small_prime_rejected() {
        assert!(ModularRun::new(100, 101, &EngineLimits::default()).is_err());
    }

    #[test]
    fn interpolation_recovers_q1_closed_form() {
        // Q_1(x, a) = (x+1)^2 (a+1)^2: row at fixed x, a = 1..=3 gives (x+1)^2 at a=0
        let br = Barrett32::new(P);
        let x = 7u64;
        let values: Vec<u32> = (1..=3u64)
            .map(|a| (((x + 1) * (x + 1) % P as u64) * ((a + 1) * (a + 1)) % P as u64) as u32)
            .collect();
        let binoms: Vec<u32> = vec![1, 3, 3, 1];
        let q0 = interpolate_boundary(&values, 1, &br, &binoms);
        assert_eq!(q0 as u64, (x + 1) * (x + 1));
    }

    #[test]
    fn all_zero_row_interpolates_to_zero() {
        let br = Barrett32::new(P);
        let binoms = vec![1, 4, 6, 4, 1];
        assert_eq!(interpolate_boundary(&[0, 0, 0, 0], 2, &br, &binoms), 0);
    }

    #[test]
    fn n_equals_one() {
        assert_eq!(
            compute_series_mod_p(1, P, &EngineLimits::default()).unwrap(),
            vec![1]
        );
    }
}
