//! Exact integer nullspace by multi-modular elimination.
//!
//! The matching systems have R rows, R+1 columns, and entries spanning
//! hundreds of digits, so fraction-free elimination over the integers is
//! hopeless. Instead: eliminate mod many 62-bit primes (R^3 word ops each),
//! pin the single free variable, and rescale by the determinant of the pivot
//! block so each prime yields the same integer Cramer vector mod p; CRT then
//! reconstructs it without rational recovery. Reconstruction stops early
//! when two consecutive prime batches agree, and any accepted vector must
//! dot to zero against every row modulo fresh primes never used in the
//! solve. The Hadamard bound caps the prime count unconditionally.

use crate::{DaError, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use stacksort_numeric::modular::{DescendingPrimes, Montgomery64};

const PRIME_CEILING: u64 = 1 << 62;
const BATCH: usize = 32;

#[derive(Debug)]
pub enum NullspaceOutcome {
    /// One-dimensional nullspace: an integer basis vector.
    Unique(Vec<BigInt>),
    /// Full column rank: only the zero solution.
    None,
    Higher(usize),
}

/// Sign-magnitude limb form for fast repeated reduction mod many primes.
struct PackedMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<(bool, Vec<u64>)>,
}

impl PackedMatrix {
    fn new(rows: &[Vec<BigInt>]) -> Self {
        let r = rows.len();
        let c = rows[0].len();
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged matrix");
            for v in row {
                entries.push((v.is_negative(), v.magnitude().to_u64_digits()));
            }
        }
        PackedMatrix {
            rows: r,
            cols: c,
            entries,
        }
    }

    /// Reduce every entry mod p (Horner over limbs), flat row-major.
    fn reduce(&self, p: u64) -> Vec<u64> {
        let base = ((1u128 << 64) % p as u128) as u64;
        self.entries
            .iter()
            .map(|(neg, limbs)| {
                let mut acc: u64 = 0;
                for &limb in limbs.iter().rev() {
                    acc = ((acc as u128 * base as u128 + limb as u128) % p as u128) as u64;
                }
                if *neg && acc != 0 {
                    p - acc
                } else {
                    acc
                }
            })
            .collect()
    }

    /// log2 of the Hadamard bound on any minor (product of row 2-norms).
    fn hadamard_log2(&self) -> f64 {
        let mut total = 0.0;
        for i in 0..self.rows {
            let mut max_bits: u64 = 0;
            for j in 0..self.cols {
                let (_, limbs) = &self.entries[i * self.cols + j];
                let bits = limbs
                    .last()
                    .map(|&top| 64 * (limbs.len() as u64 - 1) + (64 - top.leading_zeros() as u64))
                    .unwrap_or(0);
                max_bits = max_bits.max(bits);
            }
            total += max_bits as f64 + 0.5 * (self.cols as f64).log2() + 1.0;
        }
        total
    }
}

/// Pivot structure captured from a pilot prime: (row, column) in elimination
/// order. All later primes must realise the same structure or be discarded.
type Schedule = Vec<(usize, usize)>;

enum Pass {
    /// Cramer vector mod p (free variable scaled by the pivot-block det).
    Vector(Vec<u64>),
    /// A scheduled pivot vanished mod p: the prime is unlucky.
    Unlucky,
    /// A row outside the schedule failed to reduce to zero: the pilot saw
    /// too small a rank and the whole solve must restart.
    RankExceedsSchedule,
}

/// Forward elimination and pivot discovery (pilot mode).
fn eliminate_discover(m: &mut [u64], rows: usize, cols: usize, mont: &Montgomery64) -> Schedule {
    for v in m.iter_mut() {
        *v = mont.to_mont(*v);
    }
    let mut schedule = Vec::new();
    let mut used_cols = vec![false; cols];
    for r in 0..rows {
        let col = match (0..cols).find(|&c| !used_cols[c] && m[r * cols + c] != 0) {
            Some(c) => c,
            None => continue, // zero row (after elimination)
        };
        normalize_and_eliminate(m, rows, cols, r, col, mont);
        used_cols[col] = true;
        schedule.push((r, col));
    }
    schedule
}

/// Scheduled elimination; returns the Cramer vector mod p.
fn eliminate_scheduled(
    m: &mut [u64],
    rows: usize,
    cols: usize,
    mont: &Montgomery64,
    schedule: &Schedule,
) -> Pass {
    for v in m.iter_mut() {
        *v = mont.to_mont(*v);
    }
    let mut det = mont.to_mont(1);
    for &(r, col) in schedule {
        let pivot = m[r * cols + col];
        if pivot == 0 {
            return Pass::Unlucky;
        }
        det = mont.mul(det, pivot);
        normalize_and_eliminate(m, rows, cols, r, col, mont);
    }
    // every non-pivot row must now be identically zero
    let pivot_rows: Vec<usize> = schedule.iter().map(|&(r, _)| r).collect();
    for r in 0..rows {
        if !pivot_rows.contains(&r) && m[r * cols..(r + 1) * cols].iter().any(|&v| v != 0) {
            return Pass::RankExceedsSchedule;
        }
    }
    let mut is_pivot_col = vec![false; cols];
    for &(_, c) in schedule {
        is_pivot_col[c] = true;
    }
    let free = match (0..cols).find(|&c| !is_pivot_col[c]) {
        Some(c) => c,
        None => return Pass::Vector(vec![0; cols]), // full column rank: zero vector
    };
    // back-substitute with x[free] = det
    let mut x = vec![0u64; cols];
    x[free] = det;
    for &(r, col) in schedule.iter().rev() {
        let row = &m[r * cols..(r + 1) * cols];
        let mut acc = 0u64;
        for c in 0..cols {
            if c != col && row[c] != 0 && x[c] != 0 {
                acc = mont.add(acc, mont.mul(row[c], x[c]));
            }
        }
        x[col] = mont.sub(0, acc);
    }
    Pass::Vector(x.into_iter().map(|v| mont.from_mont(v)).collect())
}

#[inline]
fn normalize_and_eliminate(
    m: &mut [u64],
    rows: usize,
    cols: usize,
    r: usize,
    col: usize,
    mont: &Montgomery64,
) {
    let inv = mont.inv(m[r * cols + col]);
    for c in 0..cols {
        m[r * cols + c] = mont.mul(m[r * cols + c], inv);
    }
    let (head, tail) = m.split_at_mut((r + 1) * cols);
    let pivot_row = &head[r * cols..];
    for rr in 0..rows - r - 1 {
        let row = &mut tail[rr * cols..(rr + 1) * cols];
        let f = row[col];
        if f != 0 {
            for (dst, src) in row.iter_mut().zip(pivot_row.iter()) {
                let sub = mont.mul(f, *src);
                *dst = mont.sub(*dst, sub);
            }
        }
    }
}

/// Incremental CRT over a growing modulus.
struct CrtState {
    modulus: BigInt,
    residues: Vec<BigInt>,
}

impl CrtState {
    fn new(len: usize) -> Self {
        CrtState {
            modulus: BigInt::one(),
            residues: vec![BigInt::zero(); len],
        }
    }

    fn fold(&mut self, m_b: &BigInt, r_b: &[BigInt]) {
        let inv = mod_inverse(&self.modulus.mod_floor(m_b), m_b).expect("coprime moduli");
        for (x, rb) in self.residues.iter_mut().zip(r_b) {
            let t = ((rb - x.mod_floor(m_b)) * &inv).mod_floor(m_b);
            *x += &self.modulus * t;
        }
        self.modulus *= m_b;
    }

    /// Symmetric lift into (-M/2, M/2].
    fn lifted(&self) -> Vec<BigInt> {
        let half = &self.modulus >> 1;
        self.residues
            .iter()
            .map(|x| if x > &half { x - &self.modulus } else { x.clone() })
            .collect()
    }
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let g = a.extended_gcd(m);
    if !g.gcd.is_one() {
        return None;
    }
    Some(g.x.mod_floor(m))
}

/// A v = 0 mod each fresh prime.
fn verify_mod(packed: &PackedMatrix, v: &[BigInt], primes: &[u64]) -> bool {
    primes.par_iter().all(|&p| {
        let m = packed.reduce(p);
        let p_big = BigInt::from(p);
        let v_red: Vec<u64> = v
            .iter()
            .map(|x| u64::try_from(x.mod_floor(&p_big)).expect("residue fits"))
            .collect();
        (0..packed.rows).all(|r| {
            let mut acc: u128 = 0;
            for (a, b) in m[r * packed.cols..(r + 1) * packed.cols].iter().zip(&v_red) {
                acc = (acc + *a as u128 * *b as u128) % p as u128;
            }
            acc == 0
        })
    })
}

pub fn nullspace_int(rows: &[Vec<BigInt>]) -> Result<NullspaceOutcome> {
    if rows.is_empty() || rows[0].is_empty() {
        return Err(DaError::InvalidInput("empty system".into()));
    }
    let packed = PackedMatrix::new(rows);
    let mut restarts = 0;
    let mut primes = DescendingPrimes::below(PRIME_CEILING);
    'restart: loop {
        // pilot: rank and pivot schedule, confirmed by a second prime
        let p1 = primes.next().expect("prime supply");
        let mont1 = Montgomery64::new(p1);
        let mut m1 = packed.reduce(p1);
        let schedule = eliminate_discover(&mut m1, packed.rows, packed.cols, &mont1);
        {
            let p2 = primes.next().expect("prime supply");
            let mont2 = Montgomery64::new(p2);
            let mut m2 = packed.reduce(p2);
            let s2 = eliminate_discover(&mut m2, packed.rows, packed.cols, &mont2);
            if s2.len() > schedule.len() {
                // p1 was unlucky; adopt nothing and restart pilot discovery
                restarts += 1;
                if restarts > 4 {
                    return Err(DaError::Reconstruction("pivot schedule unstable".into()));
                }
                continue 'restart;
            }
        }
        let rank = schedule.len();
        if rank == packed.cols {
            return Ok(NullspaceOutcome::None);
        }
        if packed.cols - rank > 1 {
            return Ok(NullspaceOutcome::Higher(packed.cols - rank));
        }

        let hadamard_bits = packed.hadamard_log2();
        let max_primes = ((hadamard_bits + 64.0) / 61.0).ceil() as usize + 2;
        let mut crt = CrtState::new(packed.cols);
        let mut prev_lift: Option<Vec<BigInt>> = None;
        let mut used = 0usize;
        while used < max_primes {
            let batch: Vec<u64> = (&mut primes).take(BATCH).collect();
            let passes: Vec<(u64, Pass)> = batch
                .par_iter()
                .map(|&p| {
                    let mont = Montgomery64::new(p);
                    let mut m = packed.reduce(p);
                    (
                        p,
                        eliminate_scheduled(&mut m, packed.rows, packed.cols, &mont, &schedule),
                    )
                })
                .collect();
            let mut m_b = BigInt::one();
            let mut r_b = vec![BigInt::zero(); packed.cols];
            for (p, pass) in passes {
                match pass {
                    Pass::RankExceedsSchedule => {
                        restarts += 1;
                        if restarts > 4 {
                            return Err(DaError::Reconstruction("pivot schedule unstable".into()));
                        }
                        continue 'restart;
                    }
                    Pass::Unlucky => continue,
                    Pass::Vector(v) => {
                        let p_big = BigInt::from(p);
                        let inv = mod_inverse(&m_b.mod_floor(&p_big), &p_big).expect("distinct");
                        for (acc, &vi) in r_b.iter_mut().zip(&v) {
                            let t = ((BigInt::from(vi) - acc.mod_floor(&p_big)) * &inv)
                                .mod_floor(&p_big);
                            *acc += &m_b * t;
                        }
                        m_b *= p_big;
                        used += 1;
                    }
                }
            }
            if m_b.is_one() {
                continue;
            }
            crt.fold(&m_b, &r_b);
            let lift = crt.lifted();
            if prev_lift.as_ref() == Some(&lift) {
                let fresh: Vec<u64> = (&mut primes).take(3).collect();
                if verify_mod(&packed, &lift, &fresh) {
                    return Ok(finish(lift));
                }
            }
            prev_lift = Some(lift);
        }
        let lift = crt.lifted();
        let fresh: Vec<u64> = (&mut primes).take(3).collect();
        if !verify_mod(&packed, &lift, &fresh) {
            return Err(DaError::Reconstruction(
                "reconstructed vector fails fresh-prime residual checks".into(),
            ));
        }
        return Ok(finish(lift));
    }
}

fn finish(v: Vec<BigInt>) -> NullspaceOutcome {
    if v.iter().all(|x| x.is_zero()) {
        NullspaceOutcome::None
    } else {
        NullspaceOutcome::Unique(v)
    }
}
