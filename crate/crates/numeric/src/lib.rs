//! Numeric support: an arbitrary-precision binary float built on [`num_bigint::BigInt`],
//! complex arithmetic on top of it, the special functions the series analysis needs
//! (ln, exp, powers, sin, Gamma and derivatives of 1/Gamma), and word-size modular
//! arithmetic kernels (Barrett and Montgomery reductions, deterministic Miller-Rabin).
//!
//! No external multiprecision float library is used; the mantissa/exponent
//! representation here is deliberately small and predictable so that results are
//! bit-reproducible across runs and thread counts.

mod complex;
mod float;
mod functions;
mod gamma;
pub mod modular;

pub use complex::Complex;
pub use float::BigFloat;
pub use functions::{ln10, ln2, pi};
pub use gamma::{gamma, recip_gamma_derivatives};

/// Bits needed to carry `digits` significant decimal digits, with headroom.
pub fn bits_for_digits(digits: u32) -> u32 {
    // log2(10) = 3.3219...; +16 guard bits
    digits * 10 / 3 + digits / 14 + 16
}
