//! Elementary transcendental functions on [`BigFloat`]: pi, ln, exp, pow,
//! sin/cos of pi-multiples. Series are evaluated with guard bits over the
//! target precision; constants are cached per precision bucket.

use crate::float::BigFloat;
use num_bigint::BigInt;
use num_traits::Zero;
use std::collections::HashMap;
use std::sync::Mutex;
use std::sync::OnceLock;

const GUARD: u32 = 32;

fn cache() -> &'static Mutex<HashMap<(&'static str, u32), BigFloat>> {
    static CACHE: OnceLock<Mutex<HashMap<(&'static str, u32), BigFloat>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn cached(name: &'static str, prec: u32, compute: impl FnOnce(u32) -> BigFloat) -> BigFloat {
    // bucket precisions so nearby requests share one computation
    let bucket = prec.next_multiple_of(64);
    let mut map = cache().lock().unwrap();
    if let Some(v) = map.get(&(name, bucket)) {
        return v.with_prec(prec);
    }
    let v = compute(bucket + GUARD);
    map.insert((name, bucket), v.with_prec(bucket));
    v.with_prec(prec)
}

/// atan(1/k) via the Taylor series, in fixed point with `prec` fractional bits.
fn atan_inv_u32(k: u32, prec: u32) -> BigFloat {
    let one = BigInt::from(1) << prec as usize;
    let k2 = BigInt::from(k) * BigInt::from(k);
    let mut term = &one / BigInt::from(k); // (1/k) * 2^prec
    let mut acc = term.clone();
    let mut i: u32 = 1;
    while !term.is_zero() {
        term = term / &k2;
        let contrib = &term / BigInt::from(2 * i + 1);
        if contrib.is_zero() {
            break;
        }
        if i % 2 == 1 {
            acc -= contrib;
        } else {
            acc += contrib;
        }
        i += 1;
    }
    BigFloat::from_parts(acc, -(prec as i64), prec)
}

pub fn pi(prec: u32) -> BigFloat {
    cached("pi", prec, |p| {
        // Machin: pi = 16 atan(1/5) - 4 atan(1/239)
        let a = atan_inv_u32(5, p + 8);
        let b = atan_inv_u32(239, p + 8);
        let sixteen = BigFloat::from_i64(16, p);
        let four = BigFloat::from_i64(4, p);
        &(&sixteen * &a) - &(&four * &b)
    })
}

/// ln 2 = 2 atanh(1/3) = 2 sum 1/((2i+1) 3^(2i+1))
pub fn ln2(prec: u32) -> BigFloat {
    cached("ln2", prec, |p| {
        let one = BigInt::from(1) << (p + 8) as usize;
        let mut term = &one / BigInt::from(3);
        let mut acc = term.clone();
        let mut i: u32 = 1;
        while !term.is_zero() {
            term = term / BigInt::from(9);
            let contrib = &term / BigInt::from(2 * i + 1);
            if contrib.is_zero() {
                break;
            }
            acc += contrib;
            i += 1;
        }
        acc <<= 1;
        BigFloat::from_parts(acc, -((p + 8) as i64), p)
    })
}

pub fn ln10(prec: u32) -> BigFloat {
    cached("ln10", prec, |p| BigFloat::from_i64(10, p).ln())
}

impl BigFloat {
    /// Natural logarithm. Panics on non-positive input.
    pub fn ln(&self) -> BigFloat {
        assert!(self.is_positive(), "ln of non-positive BigFloat");
        let prec = self.prec();
        let work = prec + GUARD;
        // write self = m * 2^k with m in [1, 2)
        let k = self.ilog2();
        let m = BigFloat::from_parts(self.to_parts().0, -(self.to_parts().0.bits() as i64 - 1), work);
        // ln m = 2 atanh(z), z = (m-1)/(m+1) in [0, 1/3)
        let one = BigFloat::from_i64(1, work);
        let z = &(&m - &one) / &(&m + &one);
        let z2 = &z * &z;
        let mut term = z.clone();
        let mut acc = z.clone();
        let mut i = 1u64;
        let cut = -((work as i64) + 4) + self_log2_or_zero(&z);
        loop {
            term = &term * &z2;
            let contrib = &term / &BigFloat::from_u64(2 * i + 1, work);
            acc = &acc + &contrib;
            i += 1;
            if contrib.magnitude_below(cut) {
                break;
            }
        }
        let lnm = &BigFloat::from_i64(2, work) * &acc;
        let r = &lnm + &(&BigFloat::from_i64(k, work) * &ln2(work));
        r.with_prec(prec)
    }

    pub fn log10(&self) -> BigFloat {
        let prec = self.prec();
        (&self.ln() / &ln10(prec + GUARD)).with_prec(prec)
    }

    /// e^self. Panics if the result would overflow the exponent range.
    pub fn exp(&self) -> BigFloat {
        let prec = self.prec();
        let work = prec + GUARD + 16;
        if self.is_zero() {
            return BigFloat::from_i64(1, prec);
        }
        let approx = self.to_f64();
        assert!(
            approx.abs() < 1e15,
            "BigFloat::exp argument out of supported range: {approx}"
        );
        let x = self.with_prec(work);
        // x = k ln2 + r, |r| <= ln2/2
        let k = (approx / std::f64::consts::LN_2).round() as i64;
        let r = &x - &(&BigFloat::from_i64(k, work) * &ln2(work));
        // scale down so the Taylor series converges fast
        const S: u32 = 8;
        let (rm, re) = r.to_parts();
        let rs = BigFloat::from_parts(rm, re - S as i64, work);
        let one = BigFloat::from_i64(1, work);
        let mut term = one.clone();
        let mut acc = one.clone();
        let mut i = 1u64;
        loop {
            term = &(&term * &rs) / &BigFloat::from_u64(i, work);
            acc = &acc + &term;
            i += 1;
            if term.magnitude_below(-((work as i64) + 4)) {
                break;
            }
        }
        // square back up S times, then apply 2^k
        for _ in 0..S {
            acc = &acc * &acc;
        }
        let (am, ae) = acc.to_parts();
        BigFloat::from_parts(am, ae + k, prec)
    }

    /// self^y for positive self.
    pub fn pow(&self, y: &BigFloat) -> BigFloat {
        assert!(self.is_positive(), "pow of non-positive base");
        let prec = self.prec().max(y.prec());
        let work = prec + GUARD;
        (&self.with_prec(work).ln() * &y.with_prec(work))
            .exp()
            .with_prec(prec)
    }

    /// sin(pi * self), exact reduction by the integer part.
    pub fn sinpi(&self) -> BigFloat {
        let prec = self.prec();
        let work = prec + GUARD;
        let x = self.with_prec(work);
        // reduce to u in [0, 2)
        let fl = x.floor_bigint();
        let frac = &x - &BigFloat::from_bigint(&fl, work);
        let odd = fl.magnitude().bit(0);
        // sin(pi(n+f)) = (-1)^n sin(pi f); now fold f in [0,1) to [0, 1/2]
        let half = BigFloat::from_ratio(&BigInt::from(1), &BigInt::from(2), work);
        let one = BigFloat::from_i64(1, work);
        let t = if frac.cmp_val(&half) == std::cmp::Ordering::Greater {
            &one - &frac
        } else {
            frac.clone()
        };
        let arg = &t * &pi(work);
        let mut term = arg.clone();
        let mut acc = arg.clone();
        let arg2 = &arg * &arg;
        let mut i = 1u64;
        loop {
            term = &(&term * &arg2) / &BigFloat::from_u64((2 * i) * (2 * i + 1), work);
            if i % 2 == 1 {
                acc = &acc - &term;
            } else {
                acc = &acc + &term;
            }
            i += 1;
            if term.magnitude_below(-((work as i64) + 4)) {
                break;
            }
        }
        let r = if odd { -&acc } else { acc };
        r.with_prec(prec)
    }

    /// cos(pi * self) = sin(pi * (self + 1/2)).
    pub fn cospi(&self) -> BigFloat {
        let prec = self.prec();
        let work = prec + GUARD;
        let half = BigFloat::from_ratio(&BigInt::from(1), &BigInt::from(2), work);
        (&self.with_prec(work) + &half).sinpi().with_prec(prec)
    }
}

fn self_log2_or_zero(x: &BigFloat) -> i64 {
    if x.is_zero() {
        0
    } else {
        x.ilog2()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(actual: &BigFloat, expected_str: &str, prec: u32, tol_log2: i64) {
        let expected = BigFloat::parse(expected_str, prec).unwrap();
        let err = &(actual - &expected).abs();
        assert!(
            err.magnitude_below(tol_log2),
            "got {} expected {} (err {:?})",
            actual.to_decimal(40),
            expected_str,
            err
        );
    }

    #[test]
    fn pi_to_100_digits() {
        let p = pi(370);
        assert_close(
            &p,
            "3.1415926535897932384626433832795028841971693993751058209749445923078164062862089986280348253421170679",
            370,
            -360,
        );
    }

    #[test]
    fn ln2_to_100_digits() {
        let l = ln2(370);
        assert_close(
            &l,
            "0.69314718055994530941723212145817656807550013436025525412068000949339362196969471560586332699641868754",
            370,
            -362,
        );
    }

    #[test]
    fn ln_and_exp() {
        let x = BigFloat::parse("3.5", 300).unwrap();
        assert_close(
            &x.ln(),
            "1.2527629684953679956881206219850031615615845952216059343387101404441862407823746",
            300,
            -290,
        );
        let y = BigFloat::parse("1.25", 300).unwrap();
        assert_close(
            &y.exp(),
            "3.4903429574618413761305460296722654826517343987623516224996967383352718026055024",
            300,
            -290,
        );
        // round trip ln(exp(x)) = x
        let z = BigFloat::parse("-7.25", 300).unwrap();
        let rt = z.exp().ln();
        assert_close(&rt, "-7.25", 300, -288);
    }

    #[test]
    fn exp_of_large_argument() {
        // e^1000 has binary exponent about 1442
        let x = BigFloat::from_i64(1000, 200);
        let e = x.exp();
        assert_eq!(e.ilog2(), 1442);
    }

    #[test]
    fn sinpi_values() {
        let x = BigFloat::parse("0.3", 300).unwrap();
        assert_close(
            &x.sinpi(),
            "0.80901699437494742410229341718281905886015458990288143106772431135263023140945122",
            300,
            -290,
        );
        // sin(pi * 7.3) = -sin(0.3 pi)
        let y = BigFloat::parse("7.3", 300).unwrap();
        assert_close(
            &y.sinpi(),
            "-0.80901699437494742410229341718281905886015458990288143106772431135263023140945122",
            300,
            -290,
        );
        // integers give ~0
        let z = BigFloat::from_i64(4, 300);
        assert!(z.sinpi().magnitude_below(-280));
    }

    #[test]
    fn pow_matches_sqrt() {
        let two = BigFloat::from_i64(2, 300);
        let half = BigFloat::parse("0.5", 300).unwrap();
        let a = two.pow(&half);
        let b = two.sqrt();
        let err = (&a - &b).abs();
        assert!(err.magnitude_below(-290));
    }

    #[test]
    fn log10_of_power_of_ten() {
        let x = BigFloat::parse("1e30", 300).unwrap();
        let l = x.log10();
        let err = (&l - &BigFloat::from_i64(30, 300)).abs();
        assert!(err.magnitude_below(-285));
    }
}
