//! Finitely generated Grassmann algebra over the Gaussian rationals.
//!
//! An element is a map from generator subsets (bitmasks, bit `k-1` for `th_k`)
//! to coefficients. Generators anticommute and square to zero.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::Gq;

pub const DEFAULT_GENERATORS: usize = 6;
pub const MAX_GENERATORS: usize = 64;

/// Sign of the product `th^a th^b`, i.e. `(-1)^{#{(i,j): i in a, j in b, i > j}}`.
pub fn merge_sign(a: u64, b: u64) -> bool {
    let mut inv = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        rest &= rest - 1;
        let above = if j >= 63 { 0 } else { a >> (j + 1) };
        inv += above.count_ones();
    }
    inv % 2 == 1
}

/// Parity of a bitmask, i.e. the number of generators mod 2.
pub fn mask_parity(m: u64) -> u8 {
    (m.count_ones() % 2) as u8
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct GrassmannNumber {
    terms: BTreeMap<u64, Gq>,
}

impl GrassmannNumber {
    pub fn zero() -> Self {
        GrassmannNumber { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::scalar(Gq::one())
    }

    pub fn scalar(c: Gq) -> Self {
        let mut g = Self::zero();
        g.add_term(0, c);
        g
    }

    /// The generator `th_k`, `1 <= k <= n`.
    pub fn generator(k: usize, n: usize) -> Result<Self> {
        if k == 0 || k > n || k > MAX_GENERATORS {
            return Err(Error::GeneratorOutOfRange { index: k, available: n });
        }
        Ok(Self::monomial(1u64 << (k - 1), Gq::one()))
    }

    pub fn monomial(mask: u64, c: Gq) -> Self {
        let mut g = Self::zero();
        g.add_term(mask, c);
        g
    }

    pub fn add_term(&mut self, mask: u64, c: Gq) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(mask).or_insert_with(Gq::zero);
        *e += &c;
        if e.is_zero() {
            self.terms.remove(&mask);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&u64, &Gq)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_scalar(&self) -> bool {
        self.terms.keys().all(|&m| m == 0)
    }

    /// Highest generator index used, or zero.
    pub fn generators_used(&self) -> usize {
        self.terms.keys().fold(0u64, |a, &m| a | m).checked_ilog2().map_or(0, |b| b as usize + 1)
    }

    pub fn body(&self) -> Gq {
        self.terms.get(&0).cloned().unwrap_or_else(Gq::zero)
    }

    pub fn soul(&self) -> Self {
        let mut s = self.clone();
        s.terms.remove(&0);
        s
    }

    pub fn part(&self, parity: u8) -> Self {
        GrassmannNumber {
            terms: self.terms.iter().filter(|(m, _)| mask_parity(**m) == parity).map(|(m, c)| (*m, c.clone())).collect(),
        }
    }

    pub fn even_part(&self) -> Self {
        self.part(0)
    }

    pub fn odd_part(&self) -> Self {
        self.part(1)
    }

    /// `Some(p)` when homogeneous of parity `p`; zero counts as even.
    pub fn parity(&self) -> Option<u8> {
        let mut it = self.terms.keys().map(|m| mask_parity(*m));
        let first = match it.next() {
            None => return Some(0),
            Some(p) => p,
        };
        if it.all(|p| p == first) {
            Some(first)
        } else {
            None
        }
    }

    /// The involution `x0 + x1 -> x0 - x1`.
    pub fn involution(&self) -> Self {
        GrassmannNumber {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (*m, if mask_parity(*m) == 1 { -c.clone() } else { c.clone() }))
                .collect(),
        }
    }

    /// Applies the involution `n` times.
    pub fn involution_pow(&self, n: usize) -> Self {
        if n % 2 == 0 {
            self.clone()
        } else {
            self.involution()
        }
    }

    pub fn scale(&self, c: &Gq) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        GrassmannNumber { terms: self.terms.iter().map(|(m, x)| (*m, x * c)).collect() }
    }

    pub fn is_nilpotent(&self) -> bool {
        self.body().is_zero()
    }

    /// Inverse via the finite geometric series on the nilpotent part.
    pub fn inverse(&self) -> Result<Self> {
        let b = self.body();
        let binv = b.inv().ok_or(Error::NotInvertible)?;
        // self = b (1 + n), n nilpotent
        let n = self.soul().scale(&binv);
        let mut term = Self::one();
        let mut sum = Self::one();
        loop {
            term = &term * &(-n.clone());
            if term.is_zero() {
                break;
            }
            sum = &sum + &term;
        }
        Ok(sum.scale(&binv))
    }

    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return String::from("0");
        }
        let mut keys: Vec<&u64> = self.terms.keys().collect();
        keys.sort_by_key(|m| mask_indices(**m));
        let mut out = String::new();
        for (i, m) in keys.into_iter().enumerate() {
            let c = &self.terms[m];
            let (neg, mag) = c.factor_parts();
            let mut factors: Vec<String> = Vec::new();
            if !mag.is_empty() {
                factors.push(mag);
            }
            factors.extend(mask_names(*m));
            if factors.is_empty() {
                factors.push(String::from("1"));
            }
            let body = factors.join("*");
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        out
    }
}

fn mask_indices(m: u64) -> Vec<u32> {
    (0..64).filter(|k| m >> k & 1 == 1).collect()
}

fn mask_names(m: u64) -> Vec<String> {
    mask_indices(m).into_iter().map(|k| format!("th{}", k + 1)).collect()
}

impl fmt::Display for GrassmannNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl<'a> Add<&'a GrassmannNumber> for &'a GrassmannNumber {
    type Output = GrassmannNumber;
    fn add(self, o: &GrassmannNumber) -> GrassmannNumber {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(*m, c.clone());
        }
        r
    }
}

impl<'a> Sub<&'a GrassmannNumber> for &'a GrassmannNumber {
    type Output = GrassmannNumber;
    fn sub(self, o: &GrassmannNumber) -> GrassmannNumber {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(*m, -c.clone());
        }
        r
    }
}

impl Neg for GrassmannNumber {
    type Output = GrassmannNumber;
    fn neg(self) -> GrassmannNumber {
        GrassmannNumber { terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect() }
    }
}

impl<'a> Mul<&'a GrassmannNumber> for &'a GrassmannNumber {
    type Output = GrassmannNumber;
    fn mul(self, o: &GrassmannNumber) -> GrassmannNumber {
        let mut r = GrassmannNumber::zero();
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                if a & b != 0 {
                    continue;
                }
                let c = x * y;
                r.add_term(a | b, if merge_sign(*a, *b) { -c } else { c });
            }
        }
        r
    }
}

impl From<Gq> for GrassmannNumber {
    fn from(c: Gq) -> Self {
        GrassmannNumber::scalar(c)
    }
}
