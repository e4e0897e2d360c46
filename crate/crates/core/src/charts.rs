//! Polynomial superfunctions and vector fields on a `p|q` chart.
//!
//! Coordinates carry global indices: even ones `0..p`, odd ones `p..p+q`.
//! A superfunction is a sum of `c * x^e * xi^S` with the Grassmann coefficient
//! `c` on the left and `S` an increasing list of odd coordinates.
//! Derivatives act from the left.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::grassmann::{mask_parity, merge_sign, GrassmannNumber};
use crate::scalar::{Gq, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chart {
    pub even: Vec<String>,
    pub odd: Vec<String>,
}

impl Chart {
    pub fn new(even: &[&str], odd: &[&str]) -> Self {
        Chart { even: even.iter().map(|s| s.to_string()).collect(), odd: odd.iter().map(|s| s.to_string()).collect() }
    }

    /// Chart with default names `x1..xp`, `xi1..xiq`.
    pub fn standard(p: usize, q: usize) -> Self {
        Chart {
            even: (1..=p).map(|i| format!("x{}", i)).collect(),
            odd: (1..=q).map(|i| format!("xi{}", i)).collect(),
        }
    }

    pub fn p(&self) -> usize {
        self.even.len()
    }

    pub fn q(&self) -> usize {
        self.odd.len()
    }

    pub fn dim(&self) -> usize {
        self.p() + self.q()
    }

    pub fn parity(&self, idx: usize) -> u8 {
        (idx >= self.p()) as u8
    }

    pub fn name(&self, idx: usize) -> &str {
        if idx < self.p() {
            &self.even[idx]
        } else {
            &self.odd[idx - self.p()]
        }
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.even
            .iter()
            .position(|n| n == name)
            .or_else(|| self.odd.iter().position(|n| n == name).map(|j| j + self.p()))
    }
}

/// `x^exps * xi^odd`, with `odd` a bitmask over odd coordinates.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub exps: Vec<u32>,
    pub odd: u64,
}

impl Monomial {
    pub fn one(p: usize) -> Self {
        Monomial { exps: vec![0; p], odd: 0 }
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().sum::<u32>() + self.odd.count_ones()
    }

    pub fn odd_parity(&self) -> u8 {
        mask_parity(self.odd)
    }

    /// All monomials in `p|q` variables of total degree at most `d`.
    pub fn up_to_degree(p: usize, q: usize, d: u32) -> Vec<Monomial> {
        let mut evens: Vec<Vec<u32>> = vec![vec![]];
        for _ in 0..p {
            let mut next = Vec::new();
            for e in &evens {
                let used: u32 = e.iter().sum();
                for k in 0..=(d - used) {
                    let mut f = e.clone();
                    f.push(k);
                    next.push(f);
                }
            }
            evens = next;
        }
        let mut out = Vec::new();
        for e in evens {
            let used: u32 = e.iter().sum();
            for mask in 0u64..(1u64 << q) {
                if used + mask.count_ones() <= d {
                    out.push(Monomial { exps: e.clone(), odd: mask });
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SuperFunction {
    p: usize,
    q: usize,
    terms: BTreeMap<Monomial, GrassmannNumber>,
}

impl SuperFunction {
    pub fn zero(p: usize, q: usize) -> Self {
        SuperFunction { p, q, terms: BTreeMap::new() }
    }

    pub fn constant(p: usize, q: usize, c: GrassmannNumber) -> Self {
        let mut f = Self::zero(p, q);
        f.add_term(Monomial::one(p), c);
        f
    }

    pub fn scalar(p: usize, q: usize, c: Gq) -> Self {
        Self::constant(p, q, GrassmannNumber::scalar(c))
    }

    pub fn one(p: usize, q: usize) -> Self {
        Self::scalar(p, q, Gq::one())
    }

    /// The coordinate function with global index `idx`.
    pub fn coord(p: usize, q: usize, idx: usize) -> Self {
        let mut m = Monomial::one(p);
        if idx < p {
            m.exps[idx] = 1;
        } else {
            assert!(idx < p + q, "coordinate index out of range");
            m.odd = 1 << (idx - p);
        }
        let mut f = Self::zero(p, q);
        f.add_term(m, GrassmannNumber::one());
        f
    }

    pub fn monomial(p: usize, q: usize, m: Monomial, c: Gq) -> Self {
        let mut f = Self::zero(p, q);
        f.add_term(m, GrassmannNumber::scalar(c));
        f
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.p, self.q)
    }

    pub fn add_term(&mut self, m: Monomial, c: GrassmannNumber) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(e) => {
                let s = &*e + &c;
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *e = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &GrassmannNumber)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> GrassmannNumber {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn check_same_chart(&self, o: &SuperFunction) -> Result<()> {
        if self.p == o.p && self.q == o.q {
            Ok(())
        } else {
            Err(Error::ChartMismatch)
        }
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    pub fn constant_value(&self) -> Option<GrassmannNumber> {
        if self.is_constant() {
            Some(self.coefficient(&Monomial::one(self.p)))
        } else {
            None
        }
    }

    /// True when no coefficient involves a Grassmann generator.
    pub fn has_scalar_coefficients(&self) -> bool {
        self.terms.values().all(|c| c.is_scalar())
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &Gq) -> Self {
        if c.is_zero() {
            return Self::zero(self.p, self.q);
        }
        SuperFunction { p: self.p, q: self.q, terms: self.terms.iter().map(|(m, x)| (m.clone(), x.scale(c))).collect() }
    }

    /// Left multiplication by a Grassmann constant.
    pub fn lmul_grassmann(&self, g: &GrassmannNumber) -> Self {
        Self::constant(self.p, self.q, g.clone()).mul_checked(self).unwrap()
    }

    pub fn part(&self, parity: u8) -> Self {
        let mut r = Self::zero(self.p, self.q);
        for (m, c) in &self.terms {
            r.add_term(m.clone(), c.part((parity + m.odd_parity()) % 2));
        }
        r
    }

    /// `Some(p)` when homogeneous; zero counts as even.
    pub fn parity(&self) -> Option<u8> {
        if self.part(1).is_zero() {
            Some(0)
        } else if self.part(0).is_zero() {
            Some(1)
        } else {
            None
        }
    }

    /// `f0 - f1`; equivalently the sign picked up when moving past an odd object.
    pub fn involution(&self) -> Self {
        &self.part(0) - &self.part(1)
    }

    pub fn involution_if(&self, odd: bool) -> Self {
        if odd {
            self.involution()
        } else {
            self.clone()
        }
    }

    /// Splits `f = sum_T th^T f_T` with scalar-coefficient `f_T`.
    pub fn grassmann_split(&self) -> BTreeMap<u64, SuperFunction> {
        let mut out: BTreeMap<u64, SuperFunction> = BTreeMap::new();
        for (m, c) in &self.terms {
            for (mask, x) in c.terms() {
                out.entry(*mask)
                    .or_insert_with(|| SuperFunction::zero(self.p, self.q))
                    .add_term(m.clone(), GrassmannNumber::scalar(x.clone()));
            }
        }
        out
    }

    pub fn mul_checked(&self, o: &SuperFunction) -> Result<SuperFunction> {
        self.check_same_chart(o)?;
        let mut r = Self::zero(self.p, self.q);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                if m1.odd & m2.odd != 0 {
                    continue;
                }
                let c2m = c2.involution_pow(m1.odd.count_ones() as usize);
                let mut c = c1 * &c2m;
                if merge_sign(m1.odd, m2.odd) {
                    c = -c;
                }
                let exps = m1.exps.iter().zip(&m2.exps).map(|(a, b)| a + b).collect();
                r.add_term(Monomial { exps, odd: m1.odd | m2.odd }, c);
            }
        }
        Ok(r)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut r = Self::one(self.p, self.q);
        for _ in 0..n {
            r = &r * self;
        }
        r
    }

    /// Left derivative by the coordinate with global index `idx`.
    pub fn deriv(&self, idx: usize) -> Self {
        let mut r = Self::zero(self.p, self.q);
        if idx < self.p {
            for (m, c) in &self.terms {
                let e = m.exps[idx];
                if e == 0 {
                    continue;
                }
                let mut m2 = m.clone();
                m2.exps[idx] -= 1;
                r.add_term(m2, c.scale(&Gq::int(e as i64)));
            }
        } else {
            let j = idx - self.p;
            let bit = 1u64 << j;
            for (m, c) in &self.terms {
                if m.odd & bit == 0 {
                    continue;
                }
                let before = (m.odd & (bit - 1)).count_ones();
                let mut c2 = c.involution();
                if before % 2 == 1 {
                    c2 = -c2;
                }
                let mut m2 = m.clone();
                m2.odd &= !bit;
                r.add_term(m2, c2);
            }
        }
        r
    }

    /// Value at a real point: even coordinates take the given values, odd ones
    /// and all Grassmann generators vanish.
    pub fn eval_body(&self, point: &[Q]) -> Gq {
        let mut s = Gq::zero();
        for (m, c) in &self.terms {
            if m.odd != 0 {
                continue;
            }
            let mut v = c.body();
            for (k, e) in m.exps.iter().enumerate() {
                for _ in 0..*e {
                    v = &v * &Gq::real(point[k].clone());
                }
            }
            s += &v;
        }
        s
    }

    /// Substitutes each coordinate by a superfunction on another chart.
    /// `images[idx]` replaces the coordinate with global index `idx`.
    pub fn compose(&self, images: &[SuperFunction]) -> Result<SuperFunction> {
        if images.len() != self.p + self.q {
            return Err(Error::ChartMismatch);
        }
        let (p2, q2) = images.first().map(|f| f.dims()).unwrap_or((0, 0));
        let mut r = SuperFunction::zero(p2, q2);
        for (m, c) in &self.terms {
            let mut t = SuperFunction::constant(p2, q2, c.clone());
            for (k, e) in m.exps.iter().enumerate() {
                for _ in 0..*e {
                    t = t.mul_checked(&images[k])?;
                }
            }
            for j in 0..self.q {
                if m.odd >> j & 1 == 1 {
                    t = t.mul_checked(&images[self.p + j])?;
                }
            }
            r = &r + &t;
        }
        Ok(r)
    }

    /// Re-embeds into a chart with `p2 >= p` even and `q2 >= q` odd coordinates,
    /// the new coordinates appended after the old ones.
    pub fn extend(&self, p2: usize, q2: usize) -> SuperFunction {
        let mut r = SuperFunction::zero(p2, q2);
        for (m, c) in &self.terms {
            let mut exps = m.exps.clone();
            exps.resize(p2, 0);
            r.add_term(Monomial { exps, odd: m.odd }, c.clone());
        }
        r
    }

    /// Drops trailing coordinates; fails if the function depends on them.
    pub fn restrict(&self, p2: usize, q2: usize) -> Result<SuperFunction> {
        let mut r = SuperFunction::zero(p2, q2);
        for (m, c) in &self.terms {
            if m.exps[p2..].iter().any(|e| *e != 0) || m.odd >> q2 != 0 {
                return Err(Error::ChartMismatch);
            }
            r.add_term(Monomial { exps: m.exps[..p2].to_vec(), odd: m.odd }, c.clone());
        }
        Ok(r)
    }

    pub fn render(&self, chart: &Chart) -> String {
        if self.terms.is_empty() {
            return String::from("0");
        }
        let mut keys: Vec<&Monomial> = self.terms.keys().collect();
        keys.sort_by(|a, b| {
            a.degree().cmp(&b.degree()).then_with(|| b.exps.cmp(&a.exps)).then_with(|| a.odd.cmp(&b.odd))
        });
        let mut out = String::new();
        for (i, m) in keys.into_iter().enumerate() {
            let c = &self.terms[m];
            let (neg, mut factors) = coefficient_factors(c);
            factors.extend(monomial_names(m, chart));
            if factors.is_empty() {
                factors.push(String::from("1"));
            }
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}

/// Sign flag and product factors for a Grassmann coefficient.
pub(crate) fn coefficient_factors(c: &GrassmannNumber) -> (bool, Vec<String>) {
    let ts: Vec<(&u64, &Gq)> = c.terms().collect();
    if ts.len() == 1 {
        let (mask, x) = ts[0];
        let (neg, mag) = x.factor_parts();
        let mut f = Vec::new();
        if !mag.is_empty() {
            f.push(mag);
        }
        for k in 0..64 {
            if mask >> k & 1 == 1 {
                f.push(format!("th{}", k + 1));
            }
        }
        (neg, f)
    } else {
        (false, vec![format!("({})", c.render())])
    }
}

fn monomial_names(m: &Monomial, chart: &Chart) -> Vec<String> {
    let mut f = Vec::new();
    for (k, e) in m.exps.iter().enumerate() {
        match e {
            0 => {}
            1 => f.push(chart.even[k].clone()),
            _ => f.push(format!("{}^{}", chart.even[k], e)),
        }
    }
    for j in 0..chart.q() {
        if m.odd >> j & 1 == 1 {
            f.push(chart.odd[j].clone());
        }
    }
    f
}

impl<'a> Add<&'a SuperFunction> for &'a SuperFunction {
    type Output = SuperFunction;
    fn add(self, o: &SuperFunction) -> SuperFunction {
        assert_eq!((self.p, self.q), (o.p, o.q), "chart mismatch");
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), c.clone());
        }
        r
    }
}

impl<'a> Sub<&'a SuperFunction> for &'a SuperFunction {
    type Output = SuperFunction;
    fn sub(self, o: &SuperFunction) -> SuperFunction {
        assert_eq!((self.p, self.q), (o.p, o.q), "chart mismatch");
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), -c.clone());
        }
        r
    }
}

impl Neg for SuperFunction {
    type Output = SuperFunction;
    fn neg(self) -> SuperFunction {
        SuperFunction { p: self.p, q: self.q, terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect() }
    }
}

impl<'a> Mul<&'a SuperFunction> for &'a SuperFunction {
    type Output = SuperFunction;
    fn mul(self, o: &SuperFunction) -> SuperFunction {
        self.mul_checked(o).expect("chart mismatch")
    }
}

/// `X = sum_z X^z d/dz` with coefficients on the left.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VectorField {
    p: usize,
    q: usize,
    comps: Vec<SuperFunction>,
}

impl VectorField {
    pub fn zero(p: usize, q: usize) -> Self {
        VectorField { p, q, comps: vec![SuperFunction::zero(p, q); p + q] }
    }

    pub fn from_components(p: usize, q: usize, comps: Vec<SuperFunction>) -> Result<Self> {
        if comps.len() != p + q || comps.iter().any(|c| c.dims() != (p, q)) {
            return Err(Error::ChartMismatch);
        }
        Ok(VectorField { p, q, comps })
    }

    /// `d/dz` for the coordinate with global index `idx`.
    pub fn basis(p: usize, q: usize, idx: usize) -> Self {
        let mut v = Self::zero(p, q);
        v.comps[idx] = SuperFunction::one(p, q);
        v
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.p, self.q)
    }

    pub fn component(&self, idx: usize) -> &SuperFunction {
        &self.comps[idx]
    }

    pub fn components(&self) -> &[SuperFunction] {
        &self.comps
    }

    pub fn set_component(&mut self, idx: usize, f: SuperFunction) {
        self.comps[idx] = f;
    }

    fn coord_parity(&self, idx: usize) -> u8 {
        (idx >= self.p) as u8
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_zero())
    }

    pub fn part(&self, parity: u8) -> Self {
        let comps = self.comps.iter().enumerate().map(|(i, c)| c.part((parity + self.coord_parity(i)) % 2)).collect();
        VectorField { p: self.p, q: self.q, comps }
    }

    pub fn parity(&self) -> Option<u8> {
        if self.part(1).is_zero() {
            Some(0)
        } else if self.part(0).is_zero() {
            Some(1)
        } else {
            None
        }
    }

    /// Nonzero homogeneous parts with their parities.
    pub fn homogeneous_parts(&self) -> Vec<(u8, VectorField)> {
        (0..2u8).map(|a| (a, self.part(a))).filter(|(_, v)| !v.is_zero()).collect()
    }

    pub fn apply(&self, f: &SuperFunction) -> SuperFunction {
        let mut r = SuperFunction::zero(self.p, self.q);
        for (i, c) in self.comps.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            r = &r + &(c * &f.deriv(i));
        }
        r
    }

    /// Left multiplication of every component by `f`.
    pub fn lmul(&self, f: &SuperFunction) -> Self {
        VectorField { p: self.p, q: self.q, comps: self.comps.iter().map(|c| f * c).collect() }
    }

    pub fn scale(&self, c: &Gq) -> Self {
        VectorField { p: self.p, q: self.q, comps: self.comps.iter().map(|x| x.scale(c)).collect() }
    }

    /// Graded commutator, extended bilinearly over homogeneous parts.
    pub fn commutator(&self, o: &VectorField) -> VectorField {
        let mut r = VectorField::zero(self.p, self.q);
        for (a, x) in self.homogeneous_parts() {
            for (b, y) in o.homogeneous_parts() {
                for w in 0..self.p + self.q {
                    let t1 = x.apply(&y.comps[w]);
                    let t2 = y.apply(&x.comps[w]);
                    let c = if a * b == 1 { &t1 + &t2 } else { &t1 - &t2 };
                    r.comps[w] = &r.comps[w] + &c;
                }
            }
        }
        r
    }

    /// Re-embeds into a larger chart (new coordinates appended).
    pub fn extend(&self, p2: usize, q2: usize) -> VectorField {
        let mut r = VectorField::zero(p2, q2);
        for i in 0..self.p {
            r.comps[i] = self.comps[i].extend(p2, q2);
        }
        for j in 0..self.q {
            r.comps[p2 + j] = self.comps[self.p + j].extend(p2, q2);
        }
        r
    }

    pub fn render(&self, chart: &Chart) -> String {
        let mut out = String::new();
        for (i, c) in self.comps.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let d = format!("d/d{}", chart.name(i));
            let (neg, body) = match c.terms().count() {
                1 => {
                    let (m, x) = c.terms().next().unwrap();
                    let (neg, mut f) = coefficient_factors(x);
                    f.extend(monomial_names(m, chart));
                    f.push(d);
                    (neg, f.join("*"))
                }
                _ => (false, format!("({})*{}", c.render(chart), d)),
            };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

impl<'a> Add<&'a VectorField> for &'a VectorField {
    type Output = VectorField;
    fn add(self, o: &VectorField) -> VectorField {
        VectorField { p: self.p, q: self.q, comps: self.comps.iter().zip(&o.comps).map(|(a, b)| a + b).collect() }
    }
}

impl<'a> Sub<&'a VectorField> for &'a VectorField {
    type Output = VectorField;
    fn sub(self, o: &VectorField) -> VectorField {
        VectorField { p: self.p, q: self.q, comps: self.comps.iter().zip(&o.comps).map(|(a, b)| a - b).collect() }
    }
}

impl Neg for VectorField {
    type Output = VectorField;
    fn neg(self) -> VectorField {
        VectorField { p: self.p, q: self.q, comps: self.comps.into_iter().map(|c| -c).collect() }
    }
}

/// A function with values in `C = span(c0, c1)`, written `f0 c0 + f1 c1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CFunction {
    pub f0: SuperFunction,
    pub f1: SuperFunction,
}

impl CFunction {
    pub fn new(f0: SuperFunction, f1: SuperFunction) -> Self {
        CFunction { f0, f1 }
    }

    pub fn zero(p: usize, q: usize) -> Self {
        CFunction { f0: SuperFunction::zero(p, q), f1: SuperFunction::zero(p, q) }
    }

    pub fn component(&self, alpha: u8) -> &SuperFunction {
        if alpha == 0 {
            &self.f0
        } else {
            &self.f1
        }
    }

    pub fn dims(&self) -> (usize, usize) {
        self.f0.dims()
    }

    pub fn is_zero(&self) -> bool {
        self.f0.is_zero() && self.f1.is_zero()
    }

    /// Parity `b` part: `f0` of parity `b`, `f1` of parity `b + 1`.
    pub fn part(&self, parity: u8) -> Self {
        CFunction { f0: self.f0.part(parity), f1: self.f1.part((parity + 1) % 2) }
    }

    pub fn parity(&self) -> Option<u8> {
        if self.part(1).is_zero() {
            Some(0)
        } else if self.part(0).is_zero() {
            Some(1)
        } else {
            None
        }
    }

    pub fn scale(&self, c: &Gq) -> Self {
        CFunction { f0: self.f0.scale(c), f1: self.f1.scale(c) }
    }

    /// `f * (g0 c0 + g1 c1) = (f g0) c0 + (f g1) c1`.
    pub fn lmul(&self, f: &SuperFunction) -> Self {
        CFunction { f0: f * &self.f0, f1: f * &self.f1 }
    }

    /// Applies a vector field componentwise.
    pub fn apply(&self, x: &VectorField) -> Self {
        CFunction { f0: x.apply(&self.f0), f1: x.apply(&self.f1) }
    }

    pub fn extend(&self, p2: usize, q2: usize) -> Self {
        CFunction { f0: self.f0.extend(p2, q2), f1: self.f1.extend(p2, q2) }
    }

    pub fn render(&self, chart: &Chart) -> String {
        let part = |f: &SuperFunction, c: &str| -> Option<String> {
            if f.is_zero() {
                None
            } else {
                Some(format!("({})*{}", f.render(chart), c))
            }
        };
        let parts: Vec<String> = [part(&self.f0, "c0"), part(&self.f1, "c1")].into_iter().flatten().collect();
        if parts.is_empty() {
            String::from("0")
        } else {
            parts.join(" + ")
        }
    }
}

impl<'a> Add<&'a CFunction> for &'a CFunction {
    type Output = CFunction;
    fn add(self, o: &CFunction) -> CFunction {
        CFunction { f0: &self.f0 + &o.f0, f1: &self.f1 + &o.f1 }
    }
}

impl<'a> Sub<&'a CFunction> for &'a CFunction {
    type Output = CFunction;
    fn sub(self, o: &CFunction) -> CFunction {
        CFunction { f0: &self.f0 - &o.f0, f1: &self.f1 - &o.f1 }
    }
}

impl Neg for CFunction {
    type Output = CFunction;
    fn neg(self) -> CFunction {
        CFunction { f0: -self.f0, f1: -self.f1 }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;
    use proptest::prelude::*;

    // 2|2 chart: x, y | xi, eta
    const P: usize = 2;
    const QQ: usize = 2;

    fn c(i: usize) -> SuperFunction {
        SuperFunction::coord(P, QQ, i)
    }

    fn k(n: i64) -> SuperFunction {
        SuperFunction::scalar(P, QQ, Gq::int(n))
    }

    fn d(i: usize) -> VectorField {
        VectorField::basis(P, QQ, i)
    }

    #[test]
    fn odd_coordinates_anticommute() {
        let (xi, eta) = (c(2), c(3));
        assert_eq!(&xi * &eta, -(&eta * &xi));
        assert!((&xi * &xi).is_zero());
    }

    #[test]
    fn left_derivative_signs() {
        let (x, xi, eta) = (c(0), c(2), c(3));
        let f = &(&x * &xi) * &eta;
        assert_eq!(f.deriv(3), -(&x * &xi));
        assert_eq!(f.deriv(2), &x * &eta);
        let th = SuperFunction::constant(P, QQ, GrassmannNumber::generator(1, 6).unwrap());
        assert_eq!((&th * &xi).deriv(2), -th);
    }

    #[test]
    fn commutator_of_reference_fields() {
        let (y, xi, eta) = (c(1), c(2), c(3));
        let x_field = &d(0).lmul(&y.scale(&Gq::int(2))) - &d(3).lmul(&y.scale(&Gq::int(2)));
        let y_field = &(&d(3).lmul(&eta) - &d(2).lmul(&xi)) + &d(1).lmul(&xi);
        let br = x_field.commutator(&y_field);
        let expect = &(&d(0).lmul(&xi.scale(&Gq::int(-2))) - &d(3).lmul(&y.scale(&Gq::int(2))))
            - &d(3).lmul(&xi.scale(&Gq::int(2)));
        assert_eq!(br, expect);
    }

    #[test]
    fn render_functions() {
        let ch = Chart::new(&["x", "y"], &["xi", "eta"]);
        let f = &c(1).pow(2) + &(&c(2) * &c(3));
        assert_eq!(f.render(&ch), "y^2 + xi*eta");
        assert_eq!(k(0).render(&ch), "0");
        let v = &d(0).lmul(&c(1).scale(&Gq::int(2))) - &d(3);
        assert_eq!(v.render(&ch), "2*y*d/dx - d/deta");
    }

    #[test]
    fn monomial_enumeration_counts() {
        // p=2, q=1, d=2: even monomials of degree<=2 times odd subsets
        let ms = Monomial::up_to_degree(2, 1, 2);
        // deg 0: 1, deg 1: x,y,xi, deg 2: x2,xy,y2,x xi,y xi
        assert_eq!(ms.len(), 9);
    }

    #[test]
    fn compose_with_affine_map() {
        let f = &c(0) * &c(2);
        let imgs = vec![&c(1) + &k(1), c(0), c(3), c(2)];
        let g = f.compose(&imgs).unwrap();
        assert_eq!(g, &(&c(1) + &k(1)) * &c(3));
        assert_eq!(f.eval_body(&[q(1), q(2)]), Gq::zero());
        assert_eq!(c(1).pow(2).eval_body(&[q(1), q(3)]), Gq::int(9));
    }

    fn arb_fn() -> impl Strategy<Value = SuperFunction> {
        proptest::collection::vec((0u32..3, 0u32..3, 0u64..4, -3i64..4, 0u64..4), 0..5).prop_map(|ts| {
            let mut f = SuperFunction::zero(P, QQ);
            for (a, b, m, cf, th) in ts {
                f.add_term(Monomial { exps: vec![a, b], odd: m }, GrassmannNumber::monomial(th, Gq::int(cf)));
            }
            f
        })
    }

    fn arb_field() -> impl Strategy<Value = VectorField> {
        proptest::collection::vec(arb_fn(), 4).prop_map(|cs| VectorField::from_components(P, QQ, cs).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn product_is_associative(a in arb_fn(), b in arb_fn(), e in arb_fn()) {
            prop_assert_eq!(&(&a * &b) * &e, &a * &(&b * &e));
        }

        #[test]
        fn supercommutative(a in arb_fn(), b in arb_fn()) {
            for pa in 0..2u8 {
                for pb in 0..2u8 {
                    let (x, y) = (a.part(pa), b.part(pb));
                    let r = &y * &x;
                    prop_assert_eq!(&x * &y, if pa * pb == 1 { -r } else { r });
                }
            }
        }

        #[test]
        fn derivative_is_graded_leibniz(a in arb_fn(), b in arb_fn(), i in 0usize..4) {
            let ez = (i >= P) as u8;
            for pa in 0..2u8 {
                let f = a.part(pa);
                let lhs = (&f * &b).deriv(i);
                let t2 = &f * &b.deriv(i);
                let rhs = &(&f.deriv(i) * &b) + &(if ez * pa == 1 { -t2 } else { t2 });
                prop_assert_eq!(lhs, rhs);
            }
        }

        #[test]
        fn partials_supercommute(a in arb_fn(), i in 0usize..4, j in 0usize..4) {
            let s = ((i >= P) as u8) * ((j >= P) as u8);
            let r = a.deriv(j).deriv(i);
            prop_assert_eq!(a.deriv(i).deriv(j), if s == 1 { -r } else { r });
        }

        #[test]
        fn commutator_antisymmetry_and_jacobi(x in arb_field(), y in arb_field(), z in arb_field()) {
            for (a, xa) in [(0u8, x.part(0)), (1, x.part(1))] {
                for (b, yb) in [(0u8, y.part(0)), (1, y.part(1))] {
                    let r = yb.commutator(&xa);
                    let r = if a * b == 1 { r } else { -r };
                    prop_assert_eq!(xa.commutator(&yb), r);
                    for (cc, zc) in [(0u8, z.part(0)), (1, z.part(1))] {
                        // [X,[Y,Z]] = [[X,Y],Z] + (-1)^{ab} [Y,[X,Z]]
                        let lhs = xa.commutator(&yb.commutator(&zc));
                        let t = yb.commutator(&xa.commutator(&zc));
                        let rhs = &xa.commutator(&yb).commutator(&zc) + &(if a * b == 1 { -t } else { t });
                        prop_assert_eq!(lhs, rhs);
                        let _ = cc;
                    }
                }
            }
        }

        #[test]
        fn commutator_acts_as_graded_commutator(x in arb_field(), y in arb_field(), f in arb_fn()) {
            for a in 0..2u8 {
                for b in 0..2u8 {
                    let (xa, yb) = (x.part(a), y.part(b));
                    let t = yb.apply(&xa.apply(&f));
                    let rhs = &xa.apply(&yb.apply(&f)) - &(if a * b == 1 { -t } else { t });
                    prop_assert_eq!(xa.commutator(&yb).apply(&f), rhs);
                }
            }
        }
    }
}
