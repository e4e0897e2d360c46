//! Exact scalars: rationals and Gaussian rationals `a + b i`.

use alloc::format;
use alloc::string::{String, ToString};
use core::fmt;
use core::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use core::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Renders a rational as `p` or `p/q`.
pub fn q_str(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `p` or `p/q` (optional leading sign).
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).ok()?;
            let d = BigInt::from_str(d.trim()).ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Q::new(n, d))
            }
        }
        None => BigInt::from_str(s).ok().map(Q::from_integer),
    }
}

/// Gaussian rational `re + im*i`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Gq {
    pub re: Q,
    pub im: Q,
}

impl Gq {
    pub fn new(re: Q, im: Q) -> Self {
        Gq { re, im }
    }

    pub fn real(re: Q) -> Self {
        Gq { re, im: Q::zero() }
    }

    pub fn int(n: i64) -> Self {
        Gq::real(q(n))
    }

    pub fn i() -> Self {
        Gq { re: Q::zero(), im: Q::one() }
    }

    pub fn zero() -> Self {
        Gq::real(Q::zero())
    }

    pub fn one() -> Self {
        Gq::real(Q::one())
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
        Gq { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn inv(&self) -> Option<Self> {
        let n = &self.re * &self.re + &self.im * &self.im;
        if n.is_zero() {
            return None;
        }
        Some(Gq { re: &self.re / &n, im: -&self.im / &n })
    }

    /// True when the leading printed sign is negative.
    fn looks_negative(&self) -> bool {
        if self.re.is_zero() {
            self.im.is_negative()
        } else {
            self.re.is_negative()
        }
    }

    /// Splits into a sign flag and a magnitude string suitable as a product factor.
    /// The magnitude is empty when it equals one.
    pub fn factor_parts(&self) -> (bool, String) {
        let neg = self.looks_negative();
        let m = if neg { -self.clone() } else { self.clone() };
        let s = if m.im.is_zero() {
            if m.re.is_one() {
                String::new()
            } else {
                q_str(&m.re)
            }
        } else if m.re.is_zero() {
            if m.im.is_one() {
                "i".to_string()
            } else {
                format!("{}*i", q_str(&m.im))
            }
        } else {
            format!("({})", m)
        };
        (neg, s)
    }
}

impl fmt::Display for Gq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let im_part = |x: &Q| if x.is_one() { "i".to_string() } else { format!("{}*i", q_str(x)) };
        if self.im.is_zero() {
            write!(f, "{}", q_str(&self.re))
        } else if self.re.is_zero() {
            if self.im.is_negative() {
                write!(f, "-{}", im_part(&-self.im.clone()))
            } else {
                write!(f, "{}", im_part(&self.im))
            }
        } else if self.im.is_negative() {
            write!(f, "{} - {}", q_str(&self.re), im_part(&-self.im.clone()))
        } else {
            write!(f, "{} + {}", q_str(&self.re), im_part(&self.im))
        }
    }
}

impl From<Q> for Gq {
    fn from(x: Q) -> Self {
        Gq::real(x)
    }
}

impl From<i64> for Gq {
    fn from(n: i64) -> Self {
        Gq::int(n)
    }
}

impl Add for Gq {
    type Output = Gq;
    fn add(self, o: Gq) -> Gq {
        Gq { re: self.re + o.re, im: self.im + o.im }
    }
}

impl<'a> Add<&'a Gq> for &'a Gq {
    type Output = Gq;
    fn add(self, o: &Gq) -> Gq {
        Gq { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}

impl AddAssign<&Gq> for Gq {
    fn add_assign(&mut self, o: &Gq) {
        self.re += &o.re;
        self.im += &o.im;
    }
}

impl Sub for Gq {
    type Output = Gq;
    fn sub(self, o: Gq) -> Gq {
        Gq { re: self.re - o.re, im: self.im - o.im }
    }
}

impl<'a> Sub<&'a Gq> for &'a Gq {
    type Output = Gq;
    fn sub(self, o: &Gq) -> Gq {
        Gq { re: &self.re - &o.re, im: &self.im - &o.im }
    }
}

impl SubAssign<&Gq> for Gq {
    fn sub_assign(&mut self, o: &Gq) {
        self.re -= &o.re;
        self.im -= &o.im;
    }
}

impl Neg for Gq {
    type Output = Gq;
    fn neg(self) -> Gq {
        Gq { re: -self.re, im: -self.im }
    }
}

impl<'a> Mul<&'a Gq> for &'a Gq {
    type Output = Gq;
    fn mul(self, o: &Gq) -> Gq {
        Gq {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}

impl Mul for Gq {
    type Output = Gq;
    fn mul(self, o: Gq) -> Gq {
        &self * &o
    }
}

impl MulAssign<&Gq> for Gq {
    fn mul_assign(&mut self, o: &Gq) {
        *self = &*self * o;
    }
}

impl Div for Gq {
    type Output = Gq;
    fn div(self, o: Gq) -> Gq {
        &self * &o.inv().expect("division by zero")
    }
}

/// `(-1)^n` as a scalar.
pub fn sign(n: usize) -> Gq {
    if n % 2 == 0 {
        Gq::one()
    } else {
        -Gq::one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_field_ops() {
        let a = Gq::new(q(1), q(2));
        let b = Gq::new(qf(1, 2), q(-1));
        let p = &a * &b;
        assert_eq!(p, Gq::new(qf(5, 2), qf(0, 1)));
        assert_eq!(&(a.clone() / b.clone()) * &b, a);
        assert!(Gq::zero().inv().is_none());
        assert_eq!(&Gq::i() * &Gq::i(), Gq::int(-1));
    }

    #[test]
    fn rendering() {
        assert_eq!(Gq::new(qf(3, 2), q(0)).to_string(), "3/2");
        assert_eq!(Gq::new(q(0), q(-1)).to_string(), "-i");
        assert_eq!(Gq::new(q(1), qf(-1, 3)).to_string(), "1 - 1/3*i");
        assert_eq!(parse_q("-7/14"), Some(qf(-1, 2)));
        assert_eq!(parse_q("1/0"), None);
    }
}
