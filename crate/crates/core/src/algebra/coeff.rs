use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{BigInt, BigRational, One, Signed, Zero};

/// Exact rational number used for every scalar in the engine.
pub type Rational = BigRational;

pub(crate) fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Formats a rational as `n` or `n/d`.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Gaussian rational `re + im*i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coefficient {
    re: Rational,
    im: Rational,
}

impl Coefficient {
    pub fn new(re: Rational, im: Rational) -> Self {
        Coefficient { re, im }
    }

    pub fn real(re: Rational) -> Self {
        Coefficient { re, im: Rational::zero() }
    }

    pub fn imag(im: Rational) -> Self {
        Coefficient { re: Rational::zero(), im }
    }

    pub fn from_int(n: i64) -> Self {
        Self::real(Rational::from_integer(n.into()))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Self::real(rat(n, d))
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Self::imag(Rational::one())
    }

    pub fn re(&self) -> &Rational {
        &self.re
    }

    pub fn im(&self) -> &Rational {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Coefficient { re: self.re.clone(), im: -&self.im }
    }

    pub fn scale_real(&self, r: &Rational) -> Self {
        Coefficient { re: &self.re * r, im: &self.im * r }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let norm = &self.re * &self.re + &self.im * &self.im;
        Some(Coefficient { re: &self.re / &norm, im: -&self.im / &norm })
    }

    /// True when the leading nonzero component is negative. Used by the
    /// printer to pull a minus sign out of a term.
    pub fn is_negative_leading(&self) -> bool {
        if !self.re.is_zero() {
            self.im.is_zero() && self.re.is_negative()
        } else {
            self.im.is_negative()
        }
    }
}

impl From<i64> for Coefficient {
    fn from(n: i64) -> Self {
        Coefficient::from_int(n)
    }
}

impl From<Rational> for Coefficient {
    fn from(r: Rational) -> Self {
        Coefficient::real(r)
    }
}

impl Add for &Coefficient {
    type Output = Coefficient;
    fn add(self, rhs: &Coefficient) -> Coefficient {
        Coefficient { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl Sub for &Coefficient {
    type Output = Coefficient;
    fn sub(self, rhs: &Coefficient) -> Coefficient {
        Coefficient { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl Mul for &Coefficient {
    type Output = Coefficient;
    fn mul(self, rhs: &Coefficient) -> Coefficient {
        Coefficient { re: &self.re * &rhs.re - &self.im * &rhs.im, im: &self.re * &rhs.im + &self.im * &rhs.re }
    }
}

impl Neg for &Coefficient {
    type Output = Coefficient;
    fn neg(self) -> Coefficient {
        Coefficient { re: -&self.re, im: -&self.im }
    }
}

impl Add for Coefficient {
    type Output = Coefficient;
    fn add(self, rhs: Coefficient) -> Coefficient {
        &self + &rhs
    }
}

impl Sub for Coefficient {
    type Output = Coefficient;
    fn sub(self, rhs: Coefficient) -> Coefficient {
        &self - &rhs
    }
}

impl Mul for Coefficient {
    type Output = Coefficient;
    fn mul(self, rhs: Coefficient) -> Coefficient {
        &self * &rhs
    }
}

impl Neg for Coefficient {
    type Output = Coefficient;
    fn neg(self) -> Coefficient {
        -&self
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", format_rational(&self.re)),
            (true, false) => write!(f, "{}*i", format_rational(&self.im)),
            (false, false) => {
                let sign = if self.im.is_negative() { '-' } else { '+' };
                write!(f, "({} {} {}*i)", format_rational(&self.re), sign, format_rational(&self.im.abs()))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn i_squared_is_minus_one() {
        let i = Coefficient::i();
        assert_eq!(&i * &i, Coefficient::from_int(-1));
    }

    #[test]
    fn fractions_reduced() {
        let c = Coefficient::ratio(2, 4);
        assert_eq!(c, Coefficient::ratio(1, 2));
        assert_eq!(format_rational(c.re()), "1/2");
    }

    #[test]
    fn inverse_roundtrip() {
        let c = Coefficient::new(rat(1, 2), rat(-3, 4));
        let inv = c.inverse().unwrap();
        assert!((&c * &inv).is_one());
        assert!(Coefficient::zero().inverse().is_none());
    }

    #[test]
    fn conj_and_sign() {
        let c = Coefficient::new(rat(0, 1), rat(-1, 1));
        assert!(c.is_negative_leading());
        assert!(!c.conj().is_negative_leading());
    }
}
