//! Differential forms with polynomial superfunction coefficients.
//!
//! A term is `f * dz_1 ^ ... ^ dz_k` with the coefficient on the left. Words are
//! kept sorted by global coordinate index: even differentials strictly
//! increasing, odd ones forming a multiset. Moving an object of bidegree
//! `(k, a)` past one of bidegree `(l, b)` costs `(-1)^{kl + ab}`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::ops::{Add, Neg, Sub};

use crate::charts::{coefficient_factors, Chart, SuperFunction, VectorField};
use crate::error::{Error, Result};
use crate::scalar::{Gq, Q};

pub type Word = Vec<u16>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Form {
    p: usize,
    q: usize,
    terms: BTreeMap<Word, SuperFunction>,
}

impl Form {
    pub fn zero(p: usize, q: usize) -> Self {
        Form { p, q, terms: BTreeMap::new() }
    }

    pub fn function(f: SuperFunction) -> Self {
        let (p, q) = f.dims();
        let mut w = Self::zero(p, q);
        w.add_term(Word::new(), f);
        w
    }

    /// `dz` for the coordinate with global index `idx`.
    pub fn differential(p: usize, q: usize, idx: usize) -> Self {
        let mut w = Self::zero(p, q);
        w.add_term(vec_word(&[idx]), SuperFunction::one(p, q));
        w
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.p, self.q)
    }

    fn is_odd_index(&self, i: u16) -> bool {
        (i as usize) >= self.p
    }

    pub fn word_parity(&self, w: &[u16]) -> u8 {
        (w.iter().filter(|&&i| self.is_odd_index(i)).count() % 2) as u8
    }

    /// Sorts a word; returns the sign flag, or `None` if an even differential repeats.
    pub fn canonicalize(&self, w: &[u16]) -> Option<(bool, Word)> {
        let mut v: Word = w.to_vec();
        let mut neg = false;
        for i in 1..v.len() {
            let mut j = i;
            while j > 0 && v[j - 1] > v[j] {
                let both_odd = self.is_odd_index(v[j - 1]) && self.is_odd_index(v[j]);
                if !both_odd {
                    neg = !neg;
                }
                v.swap(j - 1, j);
                j -= 1;
            }
        }
        for k in 1..v.len() {
            if v[k] == v[k - 1] && !self.is_odd_index(v[k]) {
                return None;
            }
        }
        Some((neg, v))
    }

    /// Adds `f * dw` where `w` need not be sorted.
    pub fn add_term(&mut self, w: Word, f: SuperFunction) {
        if f.is_zero() {
            return;
        }
        let (neg, w) = match self.canonicalize(&w) {
            None => return,
            Some(x) => x,
        };
        let f = if neg { -f } else { f };
        match self.terms.get_mut(&w) {
            Some(e) => {
                let s = &*e + &f;
                if s.is_zero() {
                    self.terms.remove(&w);
                } else {
                    *e = s;
                }
            }
            None => {
                self.terms.insert(w, f);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &SuperFunction)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, w: &[u16]) -> SuperFunction {
        self.terms.get(w).cloned().unwrap_or_else(|| SuperFunction::zero(self.p, self.q))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Some(k)` when all terms have degree `k`; zero counts as degree `0`.
    pub fn degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|w| w.len());
        let first = match it.next() {
            None => return Some(0),
            Some(k) => k,
        };
        if it.all(|k| k == first) {
            Some(first)
        } else {
            None
        }
    }

    pub fn degree_part(&self, k: usize) -> Form {
        Form {
            p: self.p,
            q: self.q,
            terms: self.terms.iter().filter(|(w, _)| w.len() == k).map(|(w, f)| (w.clone(), f.clone())).collect(),
        }
    }

    /// Part of total parity `b` (coefficient parity plus odd differentials).
    pub fn part(&self, b: u8) -> Form {
        let mut r = Form::zero(self.p, self.q);
        for (w, f) in &self.terms {
            r.add_term(w.clone(), f.part((b + self.word_parity(w)) % 2));
        }
        r
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

    /// Zero-form value, if this is a function.
    pub fn as_function(&self) -> Option<SuperFunction> {
        if self.terms.keys().all(|w| w.is_empty()) {
            Some(self.coefficient(&[]))
        } else {
            None
        }
    }

    pub fn scale(&self, c: &Gq) -> Form {
        let mut r = Form::zero(self.p, self.q);
        for (w, f) in &self.terms {
            r.add_term(w.clone(), f.scale(c));
        }
        r
    }

    /// Left multiplication by a function: `g * (f dZ) = (g f) dZ`.
    pub fn lmul(&self, g: &SuperFunction) -> Form {
        let mut r = Form::zero(self.p, self.q);
        for (w, f) in &self.terms {
            r.add_term(w.clone(), g * f);
        }
        r
    }

    pub fn wedge(&self, o: &Form) -> Form {
        let mut r = Form::zero(self.p, self.q);
        for (w1, f) in &self.terms {
            let odd = self.word_parity(w1) == 1;
            for (w2, g) in &o.terms {
                let coef = f * &g.involution_if(odd);
                let mut w = w1.clone();
                w.extend_from_slice(w2);
                r.add_term(w, coef);
            }
        }
        r
    }

    /// Exterior derivative, `d(f dZ) = sum_z dz (d_z f) dZ`.
    pub fn d(&self) -> Form {
        let mut r = Form::zero(self.p, self.q);
        for (w, f) in &self.terms {
            for z in 0..self.p + self.q {
                let g = f.deriv(z);
                if g.is_zero() {
                    continue;
                }
                let mut w2 = vec_word(&[z]);
                w2.extend_from_slice(w);
                r.add_term(w2, g.involution_if(z >= self.p));
            }
        }
        r
    }

    /// Contraction `i_X`, a derivation of bidegree `(-1, parity(X))` with `i_X dz = X^z`.
    pub fn contract(&self, x: &VectorField) -> Form {
        let mut r = Form::zero(self.p, self.q);
        for (a, xa) in x.homogeneous_parts() {
            for (w, f) in &self.terms {
                let f1 = f.involution_if(a == 1);
                let mut prefix_parity = 0u8;
                for j in 0..w.len() {
                    let z = w[j] as usize;
                    let comp = xa.component(z);
                    if !comp.is_zero() {
                        // (-1)^{j + a * |prefix|}, then move X^z left past the prefix
                        let neg = (j + (a * prefix_parity) as usize) % 2 == 1;
                        let moved = comp.involution_if(prefix_parity == 1);
                        let mut coef = &f1 * &moved;
                        if neg {
                            coef = -coef;
                        }
                        let mut w2 = w.clone();
                        w2.remove(j);
                        r.add_term(w2, coef);
                    }
                    prefix_parity = (prefix_parity + (z >= self.p) as u8) % 2;
                }
            }
        }
        r
    }

    /// `i_{X_1} i_{X_2} ... i_{X_l}`.
    pub fn contract_many(&self, xs: &[&VectorField]) -> Form {
        let mut r = self.clone();
        for x in xs.iter().rev() {
            r = r.contract(x);
        }
        r
    }

    /// `L(X) = i_X d + d i_X`.
    pub fn lie_derivative(&self, x: &VectorField) -> Form {
        &self.d().contract(x) + &self.contract(x).d()
    }

    /// Re-embeds into a larger chart with the new coordinates appended.
    pub fn extend(&self, p2: usize, q2: usize) -> Form {
        let mut r = Form::zero(p2, q2);
        for (w, f) in &self.terms {
            let w2: Word = w.iter().map(|&i| if (i as usize) < self.p { i } else { i + (p2 - self.p) as u16 }).collect();
            r.add_term(w2, f.extend(p2, q2));
        }
        r
    }

    /// Coefficients evaluated at a real point.
    pub fn eval_body(&self, point: &[Q]) -> BTreeMap<Word, Gq> {
        self.terms.iter().map(|(w, f)| (w.clone(), f.eval_body(point))).filter(|(_, c)| !c.is_zero()).collect()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.values().all(|f| f.is_constant())
    }

    pub fn has_scalar_coefficients(&self) -> bool {
        self.terms.values().all(|f| f.has_scalar_coefficients())
    }

    pub fn render(&self, chart: &Chart) -> String {
        if self.terms.is_empty() {
            return String::from("0");
        }
        let mut keys: Vec<&Word> = self.terms.keys().collect();
        keys.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        let mut out = String::new();
        for (i, w) in keys.into_iter().enumerate() {
            let f = &self.terms[w];
            let dw: Vec<String> = w.iter().map(|&z| format!("d{}", chart.name(z as usize))).collect();
            let dw = dw.join("^");
            let (neg, body) = if f.terms().count() == 1 {
                let (m, c) = f.terms().next().unwrap();
                let single = SuperFunction::monomial(self.p, self.q, m.clone(), Gq::one());
                let (neg, mut factors) = coefficient_factors(c);
                if m.degree() > 0 {
                    factors.push(single.render(chart));
                }
                if !dw.is_empty() {
                    factors.push(dw);
                }
                if factors.is_empty() {
                    factors.push(String::from("1"));
                }
                (neg, factors.join("*"))
            } else if dw.is_empty() {
                (false, format!("({})", f.render(chart)))
            } else {
                (false, format!("({})*{}", f.render(chart), dw))
            };
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

fn vec_word(idx: &[usize]) -> Word {
    idx.iter().map(|&i| i as u16).collect()
}

impl<'a> Add<&'a Form> for &'a Form {
    type Output = Form;
    fn add(self, o: &Form) -> Form {
        assert_eq!(self.dims(), o.dims(), "chart mismatch");
        let mut r = self.clone();
        for (w, f) in &o.terms {
            r.add_term(w.clone(), f.clone());
        }
        r
    }
}

impl<'a> Sub<&'a Form> for &'a Form {
    type Output = Form;
    fn sub(self, o: &Form) -> Form {
        assert_eq!(self.dims(), o.dims(), "chart mismatch");
        let mut r = self.clone();
        for (w, f) in &o.terms {
            r.add_term(w.clone(), -f.clone());
        }
        r
    }
}

impl Neg for Form {
    type Output = Form;
    fn neg(self) -> Form {
        self.scale(&-Gq::one())
    }
}

/// `C`-valued form `w0 (x) c0 + w1 (x) c1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CForm {
    pub w0: Form,
    pub w1: Form,
}

impl CForm {
    pub fn new(w0: Form, w1: Form) -> Self {
        CForm { w0, w1 }
    }

    pub fn component(&self, alpha: u8) -> &Form {
        if alpha == 0 {
            &self.w0
        } else {
            &self.w1
        }
    }

    pub fn dims(&self) -> (usize, usize) {
        self.w0.dims()
    }

    pub fn is_zero(&self) -> bool {
        self.w0.is_zero() && self.w1.is_zero()
    }

    pub fn d(&self) -> CForm {
        CForm { w0: self.w0.d(), w1: self.w1.d() }
    }

    pub fn contract(&self, x: &VectorField) -> CForm {
        CForm { w0: self.w0.contract(x), w1: self.w1.contract(x) }
    }

    pub fn lie_derivative(&self, x: &VectorField) -> CForm {
        CForm { w0: self.w0.lie_derivative(x), w1: self.w1.lie_derivative(x) }
    }

    /// Recombines to the plain form `w0 + w1`.
    pub fn undouble(&self) -> Form {
        &self.w0 + &self.w1
    }

    pub fn render(&self, chart: &Chart) -> String {
        format!("({}) c0 + ({}) c1", self.w0.render(chart), self.w1.render(chart))
    }
}

impl<'a> Add<&'a CForm> for &'a CForm {
    type Output = CForm;
    fn add(self, o: &CForm) -> CForm {
        CForm { w0: &self.w0 + &o.w0, w1: &self.w1 + &o.w1 }
    }
}

impl<'a> Sub<&'a CForm> for &'a CForm {
    type Output = CForm;
    fn sub(self, o: &CForm) -> CForm {
        CForm { w0: &self.w0 - &o.w0, w1: &self.w1 - &o.w1 }
    }
}

/// Splits a form by parity into the doubled form `w_even c0 + w_odd c1`.
pub fn double(w: &Form) -> CForm {
    CForm { w0: w.part(0), w1: w.part(1) }
}

/// `d f` of a `C`-valued function.
pub fn d_cfunction(f: &crate::charts::CFunction) -> CForm {
    CForm { w0: Form::function(f.f0.clone()).d(), w1: Form::function(f.f1.clone()).d() }
}

/// Extracts the `C`-valued function of a degree-zero `C`-valued form.
pub fn cform_as_function(w: &CForm) -> Result<crate::charts::CFunction> {
    match (w.w0.as_function(), w.w1.as_function()) {
        (Some(f0), Some(f1)) => Ok(crate::charts::CFunction::new(f0, f1)),
        _ => Err(Error::DegreeMismatch { expected: 0, found: w.w0.degree().or(w.w1.degree()).unwrap_or(0) }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charts::Monomial;
    use crate::grassmann::GrassmannNumber;
    use alloc::vec;
    use proptest::prelude::*;

    // 2|2 chart x, y | xi, eta
    const P: usize = 2;
    const QQ: usize = 2;

    fn dz(i: usize) -> Form {
        Form::differential(P, QQ, i)
    }

    fn c(i: usize) -> SuperFunction {
        SuperFunction::coord(P, QQ, i)
    }

    fn d_(i: usize) -> VectorField {
        VectorField::basis(P, QQ, i)
    }

    fn omega() -> Form {
        &(&dz(0).wedge(&dz(1)) + &dz(2).wedge(&dz(3))) + &dz(0).wedge(&dz(2))
    }

    /// Koszul sign of a permutation of differentials, by counting inverted pairs.
    fn koszul_oracle(w: &[u16], p: usize) -> bool {
        let mut neg = false;
        for i in 0..w.len() {
            for j in i + 1..w.len() {
                if w[i] > w[j] {
                    let both_odd = w[i] as usize >= p && w[j] as usize >= p;
                    if !both_odd {
                        neg = !neg;
                    }
                }
            }
        }
        neg
    }

    #[test]
    fn contractions_of_reference_form() {
        let w = omega();
        assert_eq!(w.contract(&d_(0)), &dz(1) + &dz(2));
        assert_eq!(w.contract(&d_(1)), -dz(0));
        assert_eq!(w.contract(&d_(2)), &dz(3) - &dz(0));
        assert_eq!(w.contract(&d_(3)), dz(2));
        assert!(w.d().is_zero());
    }

    #[test]
    fn odd_differentials_commute() {
        assert_eq!(dz(2).wedge(&dz(3)), dz(3).wedge(&dz(2)));
        assert_eq!(dz(0).wedge(&dz(2)), -dz(2).wedge(&dz(0)));
        assert!(dz(0).wedge(&dz(0)).is_zero());
        assert!(!dz(2).wedge(&dz(2)).is_zero());
        // i_{d/dxi} (dxi ^ dxi) = 2 dxi
        assert_eq!(dz(2).wedge(&dz(2)).contract(&d_(2)), dz(2).scale(&Gq::int(2)));
    }

    #[test]
    fn exterior_derivative_of_exact_candidate() {
        let (y, xi) = (c(1), c(2));
        let cand = &Form::function(&y * &xi).d() + &dz(2).lmul(&xi.scale(&Gq::int(2)));
        assert_eq!(cand.d(), dz(2).wedge(&dz(2)).scale(&Gq::int(2)));
    }

    #[test]
    fn contraction_with_exact_one_form() {
        // i_Y w = d(eta xi) for Y = -xi d/dxi + eta d/deta + xi d/dy
        let (xi, eta) = (c(2), c(3));
        let y_field = &(&d_(3).lmul(&eta) - &d_(2).lmul(&xi)) + &d_(1).lmul(&xi);
        assert_eq!(omega().contract(&y_field), Form::function(&eta * &xi).d());
    }

    #[test]
    fn render_forms() {
        let ch = Chart::new(&["x", "y"], &["xi", "eta"]);
        assert_eq!(omega().render(&ch), "dx^dy + dx^dxi + dxi^deta");
        let w = dz(2).wedge(&dz(2)).lmul(&c(1).scale(&Gq::int(-3)));
        assert_eq!(w.render(&ch), "-3*y*dxi^dxi");
    }

    fn arb_fn() -> impl Strategy<Value = SuperFunction> {
        proptest::collection::vec((0u32..3, 0u32..3, 0u64..4, -3i64..4, 0u64..3), 0..4).prop_map(|ts| {
            let mut f = SuperFunction::zero(P, QQ);
            for (a, b, m, cf, th) in ts {
                f.add_term(Monomial { exps: vec![a, b], odd: m }, GrassmannNumber::monomial(th, Gq::int(cf)));
            }
            f
        })
    }

    fn arb_form() -> impl Strategy<Value = Form> {
        proptest::collection::vec((proptest::collection::vec(0u16..4, 0..4), arb_fn()), 0..4).prop_map(|ts| {
            let mut w = Form::zero(P, QQ);
            for (word, f) in ts {
                w.add_term(word, f);
            }
            w
        })
    }

    fn arb_field() -> impl Strategy<Value = VectorField> {
        proptest::collection::vec(arb_fn(), 4).prop_map(|cs| VectorField::from_components(P, QQ, cs).unwrap())
    }

    fn homog(w: &Form) -> Vec<(usize, u8, Form)> {
        let mut out = Vec::new();
        for k in 0..5 {
            for b in 0..2u8 {
                let part = w.degree_part(k).part(b);
                if !part.is_zero() {
                    out.push((k, b, part));
                }
            }
        }
        out
    }

    fn sgn(neg: bool, f: Form) -> Form {
        if neg {
            -f
        } else {
            f
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn canonical_sign_matches_oracle(word in proptest::collection::vec(0u16..4, 0..5)) {
            let probe = Form::zero(P, QQ);
            let has_even_repeat = (0..P as u16).any(|e| word.iter().filter(|&&z| z == e).count() > 1);
            match probe.canonicalize(&word) {
                None => prop_assert!(has_even_repeat),
                Some((neg, _)) => {
                    prop_assert!(!has_even_repeat);
                    prop_assert_eq!(neg, koszul_oracle(&word, P));
                }
            }
        }

        #[test]
        fn d_squared_vanishes(w in arb_form()) {
            prop_assert!(w.d().d().is_zero());
        }

        #[test]
        fn wedge_associative(a in arb_form(), b in arb_form(), e in arb_form()) {
            prop_assert_eq!(a.wedge(&b).wedge(&e), a.wedge(&b.wedge(&e)));
        }

        #[test]
        fn wedge_graded_commutative(a in arb_form(), b in arb_form()) {
            for (k, x, pa) in homog(&a) {
                for (l, y, pb) in homog(&b) {
                    let neg = (k * l + (x * y) as usize) % 2 == 1;
                    prop_assert_eq!(pa.wedge(&pb), sgn(neg, pb.wedge(&pa)));
                }
            }
        }

        #[test]
        fn d_is_graded_leibniz(a in arb_form(), b in arb_form()) {
            for (k, _, pa) in homog(&a) {
                let rhs = &pa.d().wedge(&b) + &sgn(k % 2 == 1, pa.wedge(&b.d()));
                prop_assert_eq!(pa.wedge(&b).d(), rhs);
            }
        }

        #[test]
        fn contraction_is_graded_derivation(x in arb_field(), a in arb_form(), b in arb_form()) {
            for (e, xe) in x.homogeneous_parts() {
                for (k, pa_par, pa) in homog(&a) {
                    let neg = (k + (e * pa_par) as usize) % 2 == 1;
                    let rhs = &pa.contract(&xe).wedge(&b) + &sgn(neg, pa.wedge(&b.contract(&xe)));
                    prop_assert_eq!(pa.wedge(&b).contract(&xe), rhs);
                }
            }
        }

        #[test]
        fn contraction_of_differential_is_application(x in arb_field(), f in arb_fn()) {
            let lhs = Form::function(f.clone()).d().contract(&x);
            prop_assert_eq!(lhs, Form::function(x.apply(&f)));
        }

        #[test]
        fn exterior_derivative_of_one_form_on_pairs(x in arb_field(), y in arb_field(), w in arb_form()) {
            let w1 = w.degree_part(1);
            for (a, xa) in x.homogeneous_parts() {
                for (b, yb) in y.homogeneous_parts() {
                    let f = |v: Form| v.as_function().unwrap();
                    let lhs = -f(w1.d().contract_many(&[&xa, &yb]));
                    let t = yb.apply(&f(w1.contract(&xa)));
                    let rhs = &(&xa.apply(&f(w1.contract(&yb))) - &(if a * b == 1 { -t } else { t }))
                        - &f(w1.contract(&xa.commutator(&yb)));
                    prop_assert_eq!(lhs, rhs);
                }
            }
        }

        #[test]
        fn exterior_derivative_of_two_form_on_triples(x in arb_field(), y in arb_field(), z in arb_field(), w in arb_form()) {
            let w2 = w.degree_part(2);
            let f = |v: Form| v.as_function().unwrap();
            let s = |neg: bool, g: SuperFunction| if neg { -g } else { g };
            for (a, xa) in x.homogeneous_parts() {
                for (b, yb) in y.homogeneous_parts() {
                    for (e, ze) in z.homogeneous_parts() {
                        let lhs = f(w2.d().contract_many(&[&xa, &yb, &ze]));
                        let mut rhs = xa.apply(&f(w2.contract_many(&[&yb, &ze])));
                        rhs = &rhs - &s(a * b == 1, yb.apply(&f(w2.contract_many(&[&xa, &ze]))));
                        rhs = &rhs + &s((e * (a + b)) % 2 == 1, ze.apply(&f(w2.contract_many(&[&xa, &yb]))));
                        rhs = &rhs - &f(w2.contract_many(&[&xa.commutator(&yb), &ze]));
                        rhs = &rhs + &s(b * e == 1, f(w2.contract_many(&[&xa.commutator(&ze), &yb])));
                        rhs = &rhs + &f(w2.contract_many(&[&xa, &yb.commutator(&ze)]));
                        prop_assert_eq!(lhs, rhs);
                    }
                }
            }
        }

        #[test]
        fn cartan_identities(x in arb_field(), y in arb_field(), w in arb_form()) {
            for (a, xa) in x.homogeneous_parts() {
                // [d, L(X)] = 0
                prop_assert_eq!(w.lie_derivative(&xa).d(), w.d().lie_derivative(&xa));
                for (b, yb) in y.homogeneous_parts() {
                    let ab = a * b == 1;
                    // i_X i_Y = -(-1)^{ab} i_Y i_X
                    prop_assert_eq!(w.contract(&yb).contract(&xa), sgn(!ab, w.contract(&xa).contract(&yb)));
                    // i_[X,Y] = L(X) i_Y - (-1)^{ab} i_Y L(X)
                    let br = xa.commutator(&yb);
                    let rhs = &w.contract(&yb).lie_derivative(&xa) - &sgn(ab, w.lie_derivative(&xa).contract(&yb));
                    prop_assert_eq!(w.contract(&br), rhs);
                    // L([X,Y]) = [L(X), L(Y)]
                    let rhs = &w.lie_derivative(&yb).lie_derivative(&xa) - &sgn(ab, w.lie_derivative(&xa).lie_derivative(&yb));
                    prop_assert_eq!(w.lie_derivative(&br), rhs);
                }
            }
        }
    }
}
