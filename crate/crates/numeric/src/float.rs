//! Arbitrary-precision binary floating point.
//!
//! A value is `mant * 2^exp` with the mantissa kept to at most `prec` bits
//! (round-to-nearest on normalisation). Precision propagates as the maximum of
//! the operand precisions, so a computation carried out at 200 bits stays at
//! 200 bits without every call site having to thread a context through.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Clone, PartialEq, Eq)]
pub struct BigFloat {
    mant: BigInt,
    exp: i64,
    prec: u32,
}

pub(crate) const MIN_PREC: u32 = 32;

impl BigFloat {
    pub fn zero(prec: u32) -> Self {
        BigFloat {
            mant: BigInt::zero(),
            exp: 0,
            prec: prec.max(MIN_PREC),
        }
    }

    pub fn from_i64(v: i64, prec: u32) -> Self {
        Self::from_bigint(&BigInt::from(v), prec)
    }

    pub fn from_u64(v: u64, prec: u32) -> Self {
        Self::from_bigint(&BigInt::from(v), prec)
    }

    pub fn from_bigint(v: &BigInt, prec: u32) -> Self {
        let mut r = BigFloat {
            mant: v.clone(),
            exp: 0,
            prec: prec.max(MIN_PREC),
        };
        r.normalize();
        r
    }

    /// num / den at the given precision. `den` must be nonzero.
    pub fn from_ratio(num: &BigInt, den: &BigInt, prec: u32) -> Self {
        assert!(!den.is_zero(), "BigFloat::from_ratio: zero denominator");
        let a = Self::from_bigint(num, prec.max(MIN_PREC) + 8);
        let b = Self::from_bigint(den, prec.max(MIN_PREC) + 8);
        (&a / &b).with_prec(prec)
    }

    pub fn from_f64(v: f64, prec: u32) -> Self {
        assert!(v.is_finite(), "BigFloat::from_f64: non-finite input");
        if v == 0.0 {
            return Self::zero(prec);
        }
        // decompose into mantissa * 2^exp exactly
        let bits = v.to_bits();
        let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
        let biased = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if biased == 0 {
            (frac, -1074)
        } else {
            (frac | (1 << 52), biased - 1075)
        };
        let mut r = BigFloat {
            mant: BigInt::from(sign * m as i64),
            exp: e,
            prec: prec.max(MIN_PREC),
        };
        r.normalize();
        r
    }

    /// Raw constructor for callers that already hold a mantissa/exponent pair.
    pub fn from_parts(mant: BigInt, exp: i64, prec: u32) -> Self {
        let mut r = BigFloat {
            mant,
            exp,
            prec: prec.max(MIN_PREC),
        };
        r.normalize();
        r
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    /// (mantissa, exponent) with value = mantissa * 2^exponent, exactly.
    pub fn to_parts(&self) -> (BigInt, i64) {
        (self.mant.clone(), self.exp)
    }

    /// Round (toward nearest) to a new working precision.
    pub fn with_prec(&self, prec: u32) -> Self {
        let mut r = self.clone();
        r.prec = prec.max(MIN_PREC);
        r.normalize();
        r
    }

    fn normalize(&mut self) {
        if self.mant.is_zero() {
            self.exp = 0;
            return;
        }
        let bits = self.mant.bits();
        let prec = self.prec as u64;
        if bits > prec {
            let shift = bits - prec;
            let neg = self.mant.is_negative();
            let mag = self.mant.magnitude();
            let round_up = mag.bit(shift - 1);
            let mut m: BigUint = mag >> shift;
            if round_up {
                m += 1u32;
            }
            self.mant = BigInt::from_biguint(if neg { Sign::Minus } else { Sign::Plus }, m);
            self.exp += shift as i64;
            // the rounding carry can add a bit; renormalise once more
            if self.mant.bits() > prec {
                self.mant >>= 1;
                self.exp += 1;
            }
        }
    }

    /// Exponent of the leading bit: value in [2^k, 2^(k+1)) returns k.
    /// Zero input is an error on the caller's side.
    pub fn ilog2(&self) -> i64 {
        debug_assert!(!self.is_zero());
        self.exp + self.mant.bits() as i64 - 1
    }

    pub fn abs(&self) -> Self {
        BigFloat {
            mant: self.mant.abs(),
            exp: self.exp,
            prec: self.prec,
        }
    }

    pub fn floor_bigint(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as usize
        } else {
            let shift = (-self.exp) as usize;
            // arithmetic shift rounds toward -inf for negatives, which is floor
            let mut q = &self.mant >> shift;
            // BigInt >> truncates toward -inf already? It truncates magnitude for
            // num-bigint (round toward negative infinity is NOT guaranteed); fix up.
            if self.mant.is_negative() {
                let back = &q << shift;
                if back != self.mant {
                    q -= 1;
                }
            }
            q
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mant.bits();
        let (m, e) = if bits > 64 {
            let shift = bits - 64;
            let m = (self.mant.magnitude() >> shift).to_u64().unwrap();
            (m, self.exp + shift as i64)
        } else {
            (self.mant.magnitude().to_u64().unwrap(), self.exp)
        };
        let mut v = m as f64;
        let mut e = e;
        // apply exponent in chunks to avoid powi overflow quirks
        while e > 512 {
            v *= f64::powi(2.0, 512);
            e -= 512;
            if v.is_infinite() {
                break;
            }
        }
        while e < -512 {
            v *= f64::powi(2.0, -512);
            e += 512;
            if v == 0.0 {
                break;
            }
        }
        v *= f64::powi(2.0, e as i32);
        if self.mant.is_negative() {
            -v
        } else {
            v
        }
    }

    pub fn square(&self) -> Self {
        self * self
    }

    /// Integer power by binary exponentiation.
    pub fn powi(&self, n: u64) -> Self {
        let mut result = BigFloat::from_i64(1, self.prec);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            base = &base * &base;
            n >>= 1;
        }
        result
    }

    /// Square root (Newton on integer mantissa). Negative input panics.
    pub fn sqrt(&self) -> Self {
        assert!(!self.is_negative(), "BigFloat::sqrt of negative value");
        if self.is_zero() {
            return self.clone();
        }
        let target = 2 * (self.prec as u64 + 4);
        let bits = self.mant.bits();
        let mut shift = target.saturating_sub(bits) as i64;
        // keep exponent parity even so exp/2 is exact
        if (self.exp - shift) % 2 != 0 {
            shift += 1;
        }
        let m = self.mant.magnitude() << shift as usize;
        let root = m.sqrt();
        BigFloat::from_parts(
            BigInt::from_biguint(Sign::Plus, root),
            (self.exp - shift) / 2,
            self.prec,
        )
    }

    fn add_impl(&self, rhs: &Self, negate_rhs: bool) -> Self {
        let prec = self.prec.max(rhs.prec);
        let rhs_mant;
        let rhs_mant_ref: &BigInt = if negate_rhs {
            rhs_mant = -&rhs.mant;
            &rhs_mant
        } else {
            &rhs.mant
        };
        if self.is_zero() {
            let mut r = BigFloat {
                mant: rhs_mant_ref.clone(),
                exp: rhs.exp,
                prec,
            };
            r.normalize();
            return r;
        }
        if rhs.is_zero() {
            let mut r = self.clone();
            r.prec = prec;
            r.normalize();
            return r;
        }
        // if the operands are too far apart to interact, return the bigger one
        let la = self.ilog2();
        let lb = rhs.ilog2();
        let gap_cut = prec as i64 + 4;
        if la - lb > gap_cut {
            let mut r = self.clone();
            r.prec = prec;
            r.normalize();
            return r;
        }
        if lb - la > gap_cut {
            let mut r = BigFloat {
                mant: rhs_mant_ref.clone(),
                exp: rhs.exp,
                prec,
            };
            r.normalize();
            return r;
        }
        let (mant, exp) = if self.exp >= rhs.exp {
            ((&self.mant << (self.exp - rhs.exp) as usize) + rhs_mant_ref, rhs.exp)
        } else {
            ((rhs_mant_ref << (rhs.exp - self.exp) as usize) + &self.mant, self.exp)
        };
        BigFloat::from_parts(mant, exp, prec)
    }

    /// Compare magnitudes against `2^log2_threshold` (cheap, no subtraction).
    pub fn magnitude_below(&self, log2_threshold: i64) -> bool {
        self.is_zero() || self.ilog2() < log2_threshold
    }

    /// Significant decimal representation, scientific form, round-to-nearest.
    pub fn to_decimal(&self, sig_digits: usize) -> String {
        assert!(sig_digits >= 1);
        if self.is_zero() {
            return "0".to_string();
        }
        // decimal exponent estimate: floor(log10 |v|)
        let l2 = self.ilog2() as f64;
        let mut d10 = (l2 * std::f64::consts::LOG10_2).floor() as i64;
        loop {
            // digits = round(|v| * 10^(sig-1-d10))
            let p = sig_digits as i64 - 1 - d10;
            let digits = self.scaled_digits(p);
            let s = digits.to_string();
            let n = s.len() as i64;
            if n == sig_digits as i64 {
                let neg = if self.mant.is_negative() { "-" } else { "" };
                let (head, tail) = s.split_at(1);
                return if tail.is_empty() {
                    format!("{neg}{head}e{d10}")
                } else {
                    format!("{neg}{head}.{tail}e{d10}")
                };
            }
            // estimate was off by one (or rounding carried); adjust
            d10 += n - sig_digits as i64;
        }
    }

    /// round(|v| * 10^p) as a nonnegative integer.
    fn scaled_digits(&self, p: i64) -> BigUint {
        let mag = self.mant.magnitude().clone();
        let (num, shift): (BigUint, i64) = if p >= 0 {
            (mag * BigUint::from(10u32).pow(p as u32), self.exp)
        } else {
            (mag, self.exp) // divide by 10^-p below
        };
        let den = if p < 0 {
            BigUint::from(10u32).pow((-p) as u32)
        } else {
            BigUint::from(1u32)
        };
        // value = num * 2^shift / den; round to nearest
        if shift >= 0 {
            let v = num << shift as usize;
            (&v + (&den >> 1)) / den
        } else {
            let d = den << (-shift) as usize;
            (&num + (&d >> 1)) / d
        }
    }

    /// Parse a decimal string like `-1.2345e-7` at the given precision.
    pub fn parse(s: &str, prec: u32) -> Option<Self> {
        let s = s.trim();
        let (mant_str, exp10) = match s.find(['e', 'E']) {
            Some(i) => (&s[..i], s[i + 1..].parse::<i64>().ok()?),
            None => (s, 0),
        };
        let (sign, body) = match mant_str.strip_prefix('-') {
            Some(b) => (-1i32, b),
            None => (1, mant_str.strip_prefix('+').unwrap_or(mant_str)),
        };
        let (int_part, frac_part) = match body.find('.') {
            Some(i) => (&body[..i], &body[i + 1..]),
            None => (body, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return None;
        }
        let digits: String = format!("{int_part}{frac_part}");
        if !digits.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let d: BigInt = digits.parse().ok()?;
        let d = if sign < 0 { -d } else { d };
        let e = exp10 - frac_part.len() as i64;
        let work = prec.max(MIN_PREC) + 16;
        let ten = BigInt::from(10u32);
        let r = if e >= 0 {
            BigFloat::from_bigint(&(&d * ten.pow(e as u32)), work)
        } else {
            BigFloat::from_ratio(&d, &ten.pow((-e) as u32), work)
        };
        Some(r.with_prec(prec))
    }
}

impl PartialOrd for BigFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp_val(other))
    }
}

impl BigFloat {
    pub fn cmp_val(&self, other: &Self) -> Ordering {
        let d = self.add_impl(other, true);
        if d.is_zero() {
            Ordering::Equal
        } else if d.is_negative() {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }
}

impl Add for &BigFloat {
    type Output = BigFloat;
    fn add(self, rhs: Self) -> BigFloat {
        self.add_impl(rhs, false)
    }
}

impl Sub for &BigFloat {
    type Output = BigFloat;
    fn sub(self, rhs: Self) -> BigFloat {
        self.add_impl(rhs, true)
    }
}

impl Mul for &BigFloat {
    type Output = BigFloat;
    fn mul(self, rhs: Self) -> BigFloat {
        let prec = self.prec.max(rhs.prec);
        if self.is_zero() || rhs.is_zero() {
            return BigFloat::zero(prec);
        }
        BigFloat::from_parts(&self.mant * &rhs.mant, self.exp + rhs.exp, prec)
    }
}

impl Div for &BigFloat {
    type Output = BigFloat;
    fn div(self, rhs: Self) -> BigFloat {
        assert!(!rhs.is_zero(), "BigFloat division by zero");
        let prec = self.prec.max(rhs.prec);
        if self.is_zero() {
            return BigFloat::zero(prec);
        }
        // scale the numerator so the quotient keeps prec+4 significant bits
        let shift = (prec as u64 + 4 + rhs.mant.bits()).saturating_sub(self.mant.bits());
        let num = &self.mant << shift as usize;
        let q = num / &rhs.mant;
        BigFloat::from_parts(q, self.exp - shift as i64 - rhs.exp, prec)
    }
}

impl Neg for &BigFloat {
    type Output = BigFloat;
    fn neg(self) -> BigFloat {
        BigFloat {
            mant: -&self.mant,
            exp: self.exp,
            prec: self.prec,
        }
    }
}

impl fmt::Debug for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BigFloat({}, prec={})", self.to_decimal(24), self.prec)
    }
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = (self.prec as f64 * std::f64::consts::LOG10_2) as usize;
        write!(f, "{}", self.to_decimal(digits.clamp(6, 50)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bf(v: f64) -> BigFloat {
        BigFloat::from_f64(v, 128)
    }

    #[test]
    fn arithmetic_matches_f64() {
        let a = bf(3.5);
        let b = bf(-1.25);
        assert_eq!((&a + &b).to_f64(), 2.25);
        assert_eq!((&a - &b).to_f64(), 4.75);
        assert_eq!((&a * &b).to_f64(), -4.375);
        assert_eq!((&a / &b).to_f64(), -2.8);
    }

    #[test]
    fn sqrt_two() {
        let two = BigFloat::from_i64(2, 400);
        let s = two.sqrt();
        let expected = BigFloat::parse(
            "1.4142135623730950488016887242096980785696718753769480731766797379907324784621070388503875343276415727",
            400,
        )
        .unwrap();
        let err = (&s - &expected).abs();
        assert!(err.magnitude_below(-380), "err = {:?}", err);
    }

    #[test]
    fn decimal_round_trip() {
        let x = BigFloat::parse("-2.718281828459045e3", 200).unwrap();
        assert_eq!(x.to_decimal(16), "-2.718281828459045e3");
        let y = BigFloat::parse("0.000123", 200).unwrap();
        assert_eq!(y.to_decimal(3), "1.23e-4");
    }

    #[test]
    fn floor_of_negatives() {
        assert_eq!(bf(-2.5).floor_bigint(), BigInt::from(-3));
        assert_eq!(bf(2.5).floor_bigint(), BigInt::from(2));
        assert_eq!(bf(-4.0).floor_bigint(), BigInt::from(-4));
    }

    #[test]
    fn far_apart_addition_keeps_large_operand() {
        let big = bf(1e30);
        let small = bf(1e-30);
        let s = &big + &small;
        assert_eq!(s.to_f64(), 1e30);
    }

    #[test]
    fn powi_matches_repeated_multiplication() {
        let x = bf(1.5);
        let mut acc = BigFloat::from_i64(1, 128);
        for _ in 0..13 {
            acc = &acc * &x;
        }
        assert_eq!(x.powi(13).cmp_val(&acc), Ordering::Equal);
    }
}
