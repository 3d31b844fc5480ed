//! Complex arithmetic over [`BigFloat`], just enough for polynomial evaluation
//! and simultaneous root iteration.

use crate::float::BigFloat;
use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Clone, Debug, PartialEq)]
pub struct Complex {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl Complex {
    pub fn new(re: BigFloat, im: BigFloat) -> Self {
        Complex { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        Complex {
            re: BigFloat::zero(prec),
            im: BigFloat::zero(prec),
        }
    }

    pub fn from_real(re: BigFloat) -> Self {
        let prec = re.prec();
        Complex {
            re,
            im: BigFloat::zero(prec),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn norm_sqr(&self) -> BigFloat {
        &(&self.re * &self.re) + &(&self.im * &self.im)
    }

    pub fn abs(&self) -> BigFloat {
        self.norm_sqr().sqrt()
    }

    pub fn conj(&self) -> Self {
        Complex {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    pub fn scale(&self, s: &BigFloat) -> Self {
        Complex {
            re: &self.re * s,
            im: &self.im * s,
        }
    }

    /// r * (cos(pi t) + i sin(pi t)) — angles as fractions of pi keep the
    /// trigonometry exact under argument reduction.
    pub fn from_polar_pi(r: &BigFloat, t: &BigFloat) -> Self {
        Complex {
            re: r * &t.cospi(),
            im: r * &t.sinpi(),
        }
    }
}

impl Add for &Complex {
    type Output = Complex;
    fn add(self, rhs: Self) -> Complex {
        Complex {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl Sub for &Complex {
    type Output = Complex;
    fn sub(self, rhs: Self) -> Complex {
        Complex {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl Mul for &Complex {
    type Output = Complex;
    fn mul(self, rhs: Self) -> Complex {
        Complex {
            re: &(&self.re * &rhs.re) - &(&self.im * &rhs.im),
            im: &(&self.re * &rhs.im) + &(&self.im * &rhs.re),
        }
    }
}

impl Div for &Complex {
    type Output = Complex;
    fn div(self, rhs: Self) -> Complex {
        let d = rhs.norm_sqr();
        assert!(!d.is_zero(), "complex division by zero");
        let num = self * &rhs.conj();
        Complex {
            re: &num.re / &d,
            im: &num.im / &d,
        }
    }
}

impl Neg for &Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        Complex {
            re: -&self.re,
            im: -&self.im,
        }
    }
}
