//! Word-size modular arithmetic: Barrett reduction for 32-bit moduli (products
//! stay in u64), Montgomery multiplication for up-to-62-bit moduli (products in
//! u128), deterministic Miller-Rabin, and descending prime enumeration.

/// Barrett reducer for a modulus p < 2^32. A product of two residues fits in
/// u64 and reduces with one widening multiply.
#[derive(Clone, Copy, Debug)]
pub struct Barrett32 {
    pub p: u32,
    // floor(2^64 / p)
    m: u64,
}

impl Barrett32 {
    pub fn new(p: u32) -> Self {
        assert!(p > 1);
        Barrett32 {
            p,
            m: ((1u128 << 64) / p as u128) as u64,
        }
    }

    /// Reduce x < p^2 <= 2^64.
    #[inline]
    pub fn reduce(&self, x: u64) -> u32 {
        // q = floor(x*m / 2^64) underestimates floor(x/p) by at most one
        let q = ((x as u128 * self.m as u128) >> 64) as u64;
        let mut r = x - q * self.p as u64;
        while r >= self.p as u64 {
            r -= self.p as u64;
        }
        r as u32
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.reduce(a as u64 * b as u64)
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let s = a as u64 + b as u64;
        if s >= self.p as u64 {
            (s - self.p as u64) as u32
        } else {
            s as u32
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            (a as u64 + self.p as u64 - b as u64) as u32
        }
    }

    /// Reduce a full u128 (e.g. an accumulated convolution) modulo p.
    #[inline]
    pub fn reduce_u128(&self, x: u128) -> u32 {
        (x % self.p as u128) as u32
    }

    pub fn pow(&self, mut base: u32, mut e: u64) -> u32 {
        let mut acc: u32 = 1 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Inverse of a (a not divisible by p) via Fermat.
    pub fn inv(&self, a: u32) -> u32 {
        debug_assert!(a % self.p != 0);
        self.pow(a % self.p, self.p as u64 - 2)
    }
}

/// Montgomery arithmetic for odd moduli below 2^62.
#[derive(Clone, Copy, Debug)]
pub struct Montgomery64 {
    pub p: u64,
    p_inv_neg: u64, // -p^-1 mod 2^64
    r2: u64,        // 2^128 mod p
}

impl Montgomery64 {
    pub fn new(p: u64) -> Self {
        assert!(p % 2 == 1 && p > 1 && p < (1 << 62));
        // Newton iteration for p^-1 mod 2^64
        let mut inv: u64 = p;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(inv)));
        }
        debug_assert_eq!(p.wrapping_mul(inv), 1);
        let r = (u128::MAX % p as u128 + 1) % p as u128; // 2^64 mod p
        let r2 = (r * r % p as u128) as u64;
        Montgomery64 {
            p,
            p_inv_neg: inv.wrapping_neg(),
            r2,
        }
    }

    #[inline]
    fn redc(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.p_inv_neg);
        let t2 = ((t + m as u128 * self.p as u128) >> 64) as u64;
        if t2 >= self.p {
            t2 - self.p
        } else {
            t2
        }
    }

    #[inline]
    pub fn to_mont(&self, a: u64) -> u64 {
        self.redc(a as u128 * self.r2 as u128)
    }

    #[inline]
    pub fn from_mont(&self, a: u64) -> u64 {
        self.redc(a as u128)
    }

    /// Product of two Montgomery-form residues, in Montgomery form.
    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        self.redc(a as u128 * b as u128)
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b; // p < 2^62 so no overflow
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    pub fn pow(&self, base_mont: u64, mut e: u64) -> u64 {
        let mut base = base_mont;
        let mut acc = self.to_mont(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Inverse of a Montgomery-form residue, in Montgomery form.
    pub fn inv(&self, a_mont: u64) -> u64 {
        self.pow(a_mont, self.p - 2)
    }
}

#[inline]
fn mulmod_u64(a: u64, b: u64, m: u64) -> u64 {
    (a as u128 * b as u128 % m as u128) as u64
}

fn powmod_u64(mut base: u64, mut e: u64, m: u64) -> u64 {
    let mut acc: u64 = 1 % m;
    base %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod_u64(acc, base, m);
        }
        base = mulmod_u64(base, base, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for u64 (the 12 smallest primes as witnesses
/// decide primality for all n < 3.3 * 10^24).
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// The k largest primes strictly below `bound`, in descending order.
pub fn largest_primes_below(bound: u64, k: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(k);
    let mut n = bound;
    while out.len() < k {
        assert!(n > 2, "ran out of primes below {bound}");
        n -= 1;
        if is_prime_u64(n) {
            out.push(n);
        }
    }
    out
}

/// Iterator over primes descending from just below `bound`.
pub struct DescendingPrimes {
    next_candidate: u64,
}

impl DescendingPrimes {
    pub fn below(bound: u64) -> Self {
        DescendingPrimes {
            next_candidate: bound,
        }
    }
}

impl Iterator for DescendingPrimes {
    type Item = u64;
    fn next(&mut self) -> Option<u64> {
        while self.next_candidate > 2 {
            self.next_candidate -= 1;
            if is_prime_u64(self.next_candidate) {
                return Some(self.next_candidate);
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_primes_near_2_32() {
        let ps = largest_primes_below(1 << 32, 3);
        assert_eq!(ps, vec![4294967291, 4294967279, 4294967231]);
    }

    #[test]
    fn miller_rabin_small() {
        let primes: Vec<u64> = (2..60).filter(|&n| is_prime_u64(n)).collect();
        assert_eq!(
            primes,
            vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]
        );
        assert!(!is_prime_u64(3215031751)); // strong pseudoprime to bases 2,3,5,7
        assert!(is_prime_u64((1 << 61) - 1)); // Mersenne prime
    }

    #[test]
    fn barrett_agrees_with_u128() {
        let b = Barrett32::new(4294967291);
        let mut x: u64 = 0x1234_5678_9abc_def0;
        for _ in 0..1000 {
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let a = (x >> 32) as u32;
            let c = x as u32;
            assert_eq!(
                b.mul(a % b.p, c % b.p) as u128,
                (a % b.p) as u128 * (c % b.p) as u128 % b.p as u128
            );
        }
    }

    #[test]
    fn montgomery_round_trip_and_mul() {
        let p = largest_primes_below(1 << 62, 1)[0];
        let m = Montgomery64::new(p);
        let a = 0x0123_4567_89ab_cdefu64 % p;
        let c = 0xfedc_ba98_7654_3210u64 % p;
        assert_eq!(m.from_mont(m.to_mont(a)), a);
        let prod = m.from_mont(m.mul(m.to_mont(a), m.to_mont(c)));
        assert_eq!(prod as u128, a as u128 * c as u128 % p as u128);
        let inv = m.from_mont(m.inv(m.to_mont(a)));
        assert_eq!(mulmod_u64(inv, a, p), 1);
    }
}
