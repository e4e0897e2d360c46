//! Symplectic checks, hamiltonian fields, Poisson brackets and Darboux normal forms.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::charts::{CFunction, Monomial, SuperFunction, VectorField};
use crate::error::{Error, Result};
use crate::forms::{double, CForm, Form, Word};
use crate::linalg::{self, Matrix};
use crate::scalar::{Gq, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointReport {
    pub point: Vec<Q>,
    /// Rank of `X -> i_X w` on body values.
    pub rank: usize,
    pub nondegenerate: bool,
    /// `ker w0 ∩ ker w1` is trivial.
    pub homogeneously_nondegenerate: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymplecticReport {
    pub degree_two: bool,
    pub closed: bool,
    /// `dw` when it does not vanish.
    pub obstruction: Option<Form>,
    pub points: Vec<PointReport>,
}

impl SymplecticReport {
    pub fn is_symplectic(&self) -> bool {
        self.degree_two && self.closed && self.points.iter().all(|p| p.nondegenerate)
    }

    pub fn is_homogeneously_symplectic(&self) -> bool {
        self.degree_two && self.closed && self.points.iter().all(|p| p.homogeneously_nondegenerate)
    }
}

/// `K[a][z]`: coefficient of `dz` in `i_{d/da} w`, i.e. `i_{d/dz} i_{d/da} w`.
pub fn contraction_matrix(w: &Form) -> Vec<Vec<SuperFunction>> {
    let (p, q) = w.dims();
    let n = p + q;
    (0..n)
        .map(|a| {
            let c = w.contract(&VectorField::basis(p, q, a));
            (0..n).map(|z| c.coefficient(&[z as u16])).collect()
        })
        .collect()
}

fn body_matrix(k: &[Vec<SuperFunction>], point: &[Q]) -> Matrix {
    k.iter().map(|row| row.iter().map(|f| f.eval_body(point)).collect()).collect()
}

pub fn is_symplectic(w: &Form, points: &[Vec<Q>]) -> Result<SymplecticReport> {
    let (p, q) = w.dims();
    let n = p + q;
    for pt in points {
        if pt.len() != p {
            return Err(Error::Invalid(format!("point has {} values, chart has {} even coordinates", pt.len(), p)));
        }
    }
    let degree_two = w.degree() == Some(2) || w.is_zero();
    let dw = w.d();
    let closed = dw.is_zero();
    let dbl = double(w);
    let k0 = contraction_matrix(&dbl.w0);
    let k1 = contraction_matrix(&dbl.w1);
    let mut reports = Vec::new();
    for pt in points {
        let m0 = body_matrix(&k0, pt);
        let m1 = body_matrix(&k1, pt);
        let sum: Matrix = m0.iter().zip(&m1).map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect()).collect();
        let stacked: Matrix = m0.iter().zip(&m1).map(|(a, b)| a.iter().chain(b).cloned().collect()).collect();
        let rank = linalg::rank(&sum);
        reports.push(PointReport {
            point: pt.clone(),
            rank,
            nondegenerate: rank == n,
            homogeneously_nondegenerate: linalg::rank(&stacked) == n,
        });
    }
    Ok(SymplecticReport { degree_two, closed, obstruction: if closed { None } else { Some(dw) }, points: reports })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    /// A hamiltonian vector field `X` with `i_X w = df`.
    Member(VectorField),
    /// No field exists at any degree; `obstruction` is a nonzero combination of
    /// components of `df` that would have to vanish.
    NotMember { obstruction: SuperFunction },
    /// No field of total degree at most `degree` exists.
    Inconclusive { degree: u32 },
}

impl Membership {
    pub fn field(&self) -> Option<&VectorField> {
        match self {
            Membership::Member(x) => Some(x),
            _ => None,
        }
    }
}

fn check_two_form(w: &CForm) -> Result<()> {
    for c in [&w.w0, &w.w1] {
        if !(c.degree() == Some(2) || c.is_zero()) {
            return Err(Error::DegreeMismatch { expected: 2, found: c.degree().unwrap_or(0) });
        }
        if !c.has_scalar_coefficients() {
            return Err(Error::Unsupported(String::from("symplectic form with Grassmann-valued coefficients")));
        }
    }
    Ok(())
}

fn one_form_coefficients(w: &Form) -> Vec<SuperFunction> {
    let (p, q) = w.dims();
    (0..p + q).map(|z| w.coefficient(&[z as u16])).collect()
}

/// Decides whether `f` is in `P`, i.e. admits `X` with `i_X w_a = d f^a` for `a = 0, 1`.
///
/// Constant-coefficient forms are handled by exact pointwise elimination, which
/// also certifies non-membership. Otherwise a polynomial ansatz of total degree
/// at most `ansatz_degree` (default `deg f + 1`) is solved.
pub fn hamiltonian_field(w: &CForm, f: &CFunction, ansatz_degree: Option<u32>) -> Result<Membership> {
    check_two_form(w)?;
    if w.dims() != f.dims() {
        return Err(Error::ChartMismatch);
    }
    if w.w0.is_constant() && w.w1.is_constant() {
        Ok(hamiltonian_constant(w, f))
    } else {
        let d = ansatz_degree.unwrap_or_else(|| f.f0.degree().max(f.f1.degree()) + 1);
        hamiltonian_ansatz(w, f, d)
    }
}

fn hamiltonian_constant(w: &CForm, f: &CFunction) -> Membership {
    let (p, q) = w.dims();
    let n = p + q;
    let mut rows: Matrix = Vec::new();
    let mut rhs: Vec<SuperFunction> = Vec::new();
    for alpha in 0..2u8 {
        let k = contraction_matrix(w.component(alpha));
        let df = one_form_coefficients(&Form::function(f.component(alpha).clone()).d());
        for z in 0..n {
            rows.push((0..n).map(|a| k[a][z].constant_value().unwrap().body()).collect());
            rhs.push(df[z].clone());
        }
    }
    let red = linalg::reduce(rows, rhs, n);
    if let Some(&i) = red.inconsistent_rows().first() {
        return Membership::NotMember { obstruction: red.rhs[i].clone() };
    }
    let x = red.particular(SuperFunction::zero(p, q)).unwrap();
    Membership::Member(VectorField::from_components(p, q, x).unwrap())
}

type Key = (u8, Word, Monomial);

fn flatten(alpha: u8, w: &Form, out: &mut BTreeMap<Key, Gq>) {
    for (word, f) in w.terms() {
        for (m, c) in f.terms() {
            let e = out.entry((alpha, word.clone(), m.clone())).or_insert_with(Gq::zero);
            *e += &c.body();
        }
    }
}

/// Solves a linear system whose columns are given as sparse coefficient maps.
fn solve_sparse(cols: &[BTreeMap<Key, Gq>], rhs: &BTreeMap<Key, Gq>) -> Option<Vec<Gq>> {
    let mut keys: BTreeMap<Key, usize> = BTreeMap::new();
    for c in cols.iter().chain(core::iter::once(rhs)) {
        for k in c.keys() {
            let len = keys.len();
            keys.entry(k.clone()).or_insert(len);
        }
    }
    let mut a = linalg::zeros(keys.len(), cols.len());
    for (j, c) in cols.iter().enumerate() {
        for (k, v) in c {
            a[keys[k]][j] = v.clone();
        }
    }
    let mut b = vec![Gq::zero(); keys.len()];
    for (k, v) in rhs {
        b[keys[k]] = v.clone();
    }
    linalg::solve(&a, &b)
}

fn hamiltonian_ansatz(w: &CForm, f: &CFunction, degree: u32) -> Result<Membership> {
    let (p, q) = w.dims();
    let n = p + q;
    let monos = Monomial::up_to_degree(p, q, degree);
    let iw: Vec<[Form; 2]> = (0..n)
        .map(|a| {
            let b = VectorField::basis(p, q, a);
            [w.w0.contract(&b), w.w1.contract(&b)]
        })
        .collect();
    let mut cols: Vec<BTreeMap<Key, Gq>> = Vec::new();
    let mut unknowns: Vec<(usize, Monomial)> = Vec::new();
    for a in 0..n {
        for m in &monos {
            let mf = SuperFunction::monomial(p, q, m.clone(), Gq::one());
            let mut col = BTreeMap::new();
            for alpha in 0..2u8 {
                flatten(alpha, &iw[a][alpha as usize].lmul(&mf), &mut col);
            }
            col.retain(|_, v| !v.is_zero());
            cols.push(col);
            unknowns.push((a, m.clone()));
        }
    }
    let s0 = f.f0.grassmann_split();
    let s1 = f.f1.grassmann_split();
    let mut masks: Vec<u64> = s0.keys().chain(s1.keys()).cloned().collect();
    masks.sort();
    masks.dedup();
    let mut x = VectorField::zero(p, q);
    for mask in masks {
        let mut rhs = BTreeMap::new();
        for (alpha, s) in [(0u8, &s0), (1u8, &s1)] {
            if let Some(g) = s.get(&mask) {
                flatten(alpha, &Form::function(g.clone()).d(), &mut rhs);
            }
        }
        rhs.retain(|_, v| !v.is_zero());
        let Some(sol) = solve_sparse(&cols, &rhs) else {
            return Ok(Membership::Inconclusive { degree });
        };
        let th = crate::grassmann::GrassmannNumber::monomial(mask, Gq::one());
        for (c, (a, m)) in sol.iter().zip(&unknowns) {
            if c.is_zero() {
                continue;
            }
            let term = SuperFunction::monomial(p, q, m.clone(), c.clone()).lmul_grassmann(&th);
            let cur = x.component(*a).clone();
            x.set_component(*a, &cur + &term);
        }
    }
    Ok(Membership::Member(x))
}

/// `{f, g} = X_f g`, defined when both arguments are in `P`.
pub fn poisson_bracket(w: &CForm, f: &CFunction, g: &CFunction, ansatz_degree: Option<u32>) -> Result<CFunction> {
    let xf = match hamiltonian_field(w, f, ansatz_degree)? {
        Membership::Member(x) => x,
        _ => return Err(Error::NotHamiltonian(String::from("first argument"))),
    };
    if hamiltonian_field(w, g, ansatz_degree)?.field().is_none() {
        return Err(Error::NotHamiltonian(String::from("second argument")));
    }
    Ok(g.apply(&xf))
}

/// A basis of the parity-`b` elements of `P` with polynomial components of
/// total degree at most `degree`, each paired with a hamiltonian field.
pub fn poisson_subspace(w: &CForm, parity: u8, degree: u32) -> Result<Vec<(CFunction, VectorField)>> {
    check_two_form(w)?;
    let (p, q) = w.dims();
    let n = p + q;
    let monos = Monomial::up_to_degree(p, q, degree);
    let iw: Vec<[Form; 2]> = (0..n)
        .map(|a| {
            let b = VectorField::basis(p, q, a);
            [w.w0.contract(&b), w.w1.contract(&b)]
        })
        .collect();
    enum Unknown {
        F(u8, Monomial),
        X(usize, Monomial),
    }
    let mut cols: Vec<BTreeMap<Key, Gq>> = Vec::new();
    let mut unknowns = Vec::new();
    for alpha in 0..2u8 {
        for m in monos.iter().filter(|m| m.odd_parity() == (alpha + parity) % 2) {
            let mf = SuperFunction::monomial(p, q, m.clone(), -Gq::one());
            let mut col = BTreeMap::new();
            flatten(alpha, &Form::function(mf).d(), &mut col);
            col.retain(|_, v| !v.is_zero());
            cols.push(col);
            unknowns.push(Unknown::F(alpha, m.clone()));
        }
    }
    let nf = unknowns.len();
    for a in 0..n {
        let za = (a >= p) as u8;
        for m in monos.iter().filter(|m| m.odd_parity() == (parity + za) % 2) {
            let mf = SuperFunction::monomial(p, q, m.clone(), Gq::one());
            let mut col = BTreeMap::new();
            for alpha in 0..2u8 {
                flatten(alpha, &iw[a][alpha as usize].lmul(&mf), &mut col);
            }
            col.retain(|_, v| !v.is_zero());
            cols.push(col);
            unknowns.push(Unknown::X(a, m.clone()));
        }
    }
    let mut keys: BTreeMap<Key, usize> = BTreeMap::new();
    for c in &cols {
        for k in c.keys() {
            let len = keys.len();
            keys.entry(k.clone()).or_insert(len);
        }
    }
    let mut a = linalg::zeros(keys.len(), cols.len());
    for (j, c) in cols.iter().enumerate() {
        for (k, v) in c {
            a[keys[k]][j] = v.clone();
        }
    }
    let kernel = linalg::kernel(&a, cols.len());
    // keep kernel vectors whose f-parts are independent
    let mut chosen_f: Matrix = Vec::new();
    let mut out = Vec::new();
    for v in kernel {
        let fpart: Vec<Gq> = v[..nf].to_vec();
        if fpart.iter().all(|x| x.is_zero()) {
            continue;
        }
        let mut trial = chosen_f.clone();
        trial.push(fpart.clone());
        if linalg::rank(&trial) == trial.len() {
            chosen_f = trial;
            let mut f = CFunction::zero(p, q);
            let mut x = VectorField::zero(p, q);
            for (c, u) in v.iter().zip(&unknowns) {
                if c.is_zero() {
                    continue;
                }
                match u {
                    Unknown::F(alpha, m) => {
                        let t = SuperFunction::monomial(p, q, m.clone(), c.clone());
                        if *alpha == 0 {
                            f.f0 = &f.f0 + &t;
                        } else {
                            f.f1 = &f.f1 + &t;
                        }
                    }
                    Unknown::X(i, m) => {
                        let cur = x.component(*i).clone();
                        x.set_component(*i, &cur + &SuperFunction::monomial(p, q, m.clone(), c.clone()));
                    }
                }
            }
            out.push((f, x));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DarbouxKind {
    /// `sum dx^i ^ dy_i + sum_{i<=ell} dxi^i ^ dxi^i - sum_{i>ell} dxi^i ^ dxi^i`
    Even { pairs: usize, ell: usize, odd: usize },
    /// `sum dx^i ^ dxi^i`
    Odd { n: usize },
}

/// New basis vectors `basis[a] / sqrt(scales[a])`, expressed in old coordinates,
/// in which the form takes its canonical shape. New even coordinates come first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DarbouxResult {
    pub kind: DarbouxKind,
    pub basis: Matrix,
    pub scales: Vec<Q>,
    pub parities: Vec<u8>,
}

impl DarbouxResult {
    /// Canonical pairing `P(a, b) = i_{d/da} i_{d/db} w` in the new basis.
    pub fn canonical_pairing(&self) -> Matrix {
        let n = self.parities.len();
        let mut c = linalg::zeros(n, n);
        match self.kind {
            DarbouxKind::Even { pairs, ell, odd } => {
                for i in 0..pairs {
                    c[pairs + i][i] = Gq::one();
                    c[i][pairs + i] = -Gq::one();
                }
                for j in 0..odd {
                    let k = 2 * pairs + j;
                    c[k][k] = if j < ell { Gq::int(2) } else { Gq::int(-2) };
                }
            }
            DarbouxKind::Odd { n: m } => {
                for i in 0..m {
                    c[m + i][i] = Gq::one();
                    c[i][m + i] = -Gq::one();
                }
            }
        }
        c
    }

    /// The canonical form on a `p|q` chart with coordinates in the new order.
    pub fn canonical_form(&self) -> Form {
        let p = self.parities.iter().filter(|&&e| e == 0).count();
        let q = self.parities.len() - p;
        let mut w = Form::zero(p, q);
        let one = SuperFunction::one(p, q);
        match self.kind {
            DarbouxKind::Even { pairs, ell, odd } => {
                for i in 0..pairs {
                    w.add_term(vec![i as u16, (pairs + i) as u16], one.clone());
                }
                for j in 0..odd {
                    let k = (2 * pairs + j) as u16;
                    w.add_term(vec![k, k], if j < ell { one.clone() } else { -one.clone() });
                }
            }
            DarbouxKind::Odd { n } => {
                for i in 0..n {
                    w.add_term(vec![i as u16, (n + i) as u16], one.clone());
                }
            }
        }
        w
    }

    /// Exact check that the basis change carries `coeffs` to the canonical form.
    pub fn verify(&self, coeffs: &Matrix) -> bool {
        let pairing = pairing_from_coefficients(coeffs);
        let moved = linalg::matmul(&linalg::matmul(&self.basis, &pairing), &linalg::transpose(&self.basis));
        let canon = self.canonical_pairing();
        let n = self.parities.len();
        for a in 0..n {
            for b in 0..n {
                // moved = sqrt(s_a s_b) * canon; canon is diagonal on scaled entries
                let expect = if canon[a][b].is_zero() {
                    Gq::zero()
                } else if a == b {
                    &canon[a][b] * &Gq::real(self.scales[a].clone())
                } else if self.scales[a] == self.scales[b] && self.scales[a] == Q::from_integer(1.into()) {
                    canon[a][b].clone()
                } else {
                    return false;
                };
                if moved[a][b] != expect {
                    return false;
                }
            }
        }
        true
    }
}

/// `P(a, b) = 2 w_{ba}` for `w = sum_{i,j} w_ij dz^i ^ dz^j`.
pub fn pairing_from_coefficients(coeffs: &Matrix) -> Matrix {
    let n = coeffs.len();
    (0..n).map(|a| (0..n).map(|b| &Gq::int(2) * &coeffs[b][a]).collect()).collect()
}

/// Constant 2-form with `i_{d/da} i_{d/db} w = pairing[a][b]`.
pub fn form_from_pairing(p: usize, q: usize, pairing: &Matrix) -> Form {
    let n = p + q;
    let mut w = Form::zero(p, q);
    let half = Gq::real(Q::new(1.into(), 2.into()));
    for a in 0..n {
        for b in a..n {
            let c = if a == b {
                if a < p {
                    continue;
                }
                &pairing[a][a] * &half
            } else {
                pairing[b][a].clone()
            };
            if !c.is_zero() {
                w.add_term(vec![a as u16, b as u16], SuperFunction::scalar(p, q, c));
            }
        }
    }
    w
}

/// Graded skew-symmetric coefficient matrix of a constant 2-form at a point.
pub fn coefficients_at(w: &Form, point: &[Q]) -> Matrix {
    let (p, q) = w.dims();
    let n = p + q;
    let k = contraction_matrix(w);
    // K[a][z] = P(z, a) = 2 w_{az}
    let half = Gq::real(Q::new(1.into(), 2.into()));
    (0..n).map(|a| (0..n).map(|z| &k[a][z].eval_body(point) * &half).collect()).collect()
}

fn bil(m: &Matrix, u: &[Gq], v: &[Gq]) -> Gq {
    let mut s = Gq::zero();
    for (i, x) in u.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in v.iter().enumerate() {
            if !y.is_zero() && !m[i][j].is_zero() {
                s += &(&(x * y) * &m[i][j]);
            }
        }
    }
    s
}

fn axpy(u: &[Gq], c: &Gq, v: &[Gq]) -> Vec<Gq> {
    u.iter().zip(v).map(|(a, b)| a + &(c * b)).collect()
}

/// Darboux basis for a constant homogeneous 2-form `w = sum w_ij dz^i ^ dz^j`.
pub fn darboux_normal_form(coeffs: &Matrix, parities: &[u8]) -> Result<DarbouxResult> {
    let n = parities.len();
    if coeffs.len() != n || coeffs.iter().any(|r| r.len() != n) {
        return Err(Error::Invalid(String::from("coefficient matrix has wrong shape")));
    }
    for i in 0..n {
        for j in 0..n {
            let s = if parities[i] * parities[j] == 1 { coeffs[j][i].clone() } else { -coeffs[j][i].clone() };
            if coeffs[i][j] != s {
                return Err(Error::Invalid(format!("coefficient matrix is not graded skew-symmetric at ({}, {})", i + 1, j + 1)));
            }
        }
    }
    let pm = pairing_from_coefficients(coeffs);
    let nonzero = |same: bool| (0..n).any(|i| (0..n).any(|j| (parities[i] == parities[j]) == same && !pm[i][j].is_zero()));
    let (has_even, has_odd) = (nonzero(true), nonzero(false));
    if has_even && has_odd {
        return Err(Error::NotHomogeneous);
    }
    if linalg::rank(&pm) < n {
        return Err(Error::NotSymplectic(String::from("degenerate at the point")));
    }
    let evens: Vec<usize> = (0..n).filter(|&i| parities[i] == 0).collect();
    let odds: Vec<usize> = (0..n).filter(|&i| parities[i] == 1).collect();
    let unit = |i: usize| -> Vec<Gq> {
        let mut v = vec![Gq::zero(); n];
        v[i] = Gq::one();
        v
    };
    let one = Q::from_integer(1.into());
    if has_odd {
        if evens.len() != odds.len() {
            return Err(Error::NotSymplectic(String::from("odd form needs p = q")));
        }
        let m = evens.len();
        // B[a][b] = P(xi_b, x_a)
        let bt: Matrix = (0..m).map(|b| (0..m).map(|a| pm[odds[b]][evens[a]].clone()).collect()).collect();
        // new xi_i = sum_b Q[i][b] xi_b with Q B^T = I
        let qm = linalg::inverse(&linalg::transpose(&bt)).ok_or_else(|| Error::NotSymplectic(String::from("singular pairing")))?;
        let qm = linalg::transpose(&qm);
        let mut basis: Matrix = evens.iter().map(|&i| unit(i)).collect();
        for row in qm.iter() {
            let mut v = vec![Gq::zero(); n];
            for (b, c) in row.iter().enumerate() {
                v[odds[b]] = c.clone();
            }
            basis.push(v);
        }
        let parities = [vec![0u8; m], vec![1u8; m]].concat();
        return Ok(DarbouxResult { kind: DarbouxKind::Odd { n: m }, basis, scales: vec![one; 2 * m], parities });
    }
    // symplectic Gram-Schmidt on the even block
    let mut rest: Vec<Vec<Gq>> = evens.iter().map(|&i| unit(i)).collect();
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    while let Some(u) = rest.first().cloned() {
        rest.remove(0);
        let Some(k) = rest.iter().position(|v| !bil(&pm, v, &u).is_zero()) else {
            return Err(Error::NotSymplectic(String::from("even block is degenerate")));
        };
        let v0 = rest.remove(k);
        let s = bil(&pm, &v0, &u).inv().unwrap();
        let v: Vec<Gq> = v0.iter().map(|x| x * &s).collect();
        rest = rest
            .into_iter()
            .map(|w| {
                let a = bil(&pm, &w, &u);
                let b = bil(&pm, &w, &v);
                axpy(&axpy(&w, &-a, &v), &b, &u)
            })
            .collect();
        xs.push(u);
        ys.push(v);
    }
    // congruence diagonalization of the symmetric odd block
    let mut rest: Vec<Vec<Gq>> = odds.iter().map(|&i| unit(i)).collect();
    let mut diag: Vec<(Vec<Gq>, Gq)> = Vec::new();
    while !rest.is_empty() {
        let pick = loop {
            if let Some(k) = rest.iter().position(|v| !bil(&pm, v, v).is_zero()) {
                break rest.remove(k);
            }
            // all diagonal values vanish: S(u+v, u+v) = 2 S(u, v) for some pair
            let (i, j) = (0..rest.len())
                .flat_map(|i| (i + 1..rest.len()).map(move |j| (i, j)))
                .find(|&(i, j)| !bil(&pm, &rest[i], &rest[j]).is_zero())
                .ok_or_else(|| Error::NotSymplectic(String::from("odd block is degenerate")))?;
            rest[i] = axpy(&rest[i], &Gq::one(), &rest[j]);
        };
        let d = bil(&pm, &pick, &pick);
        let dinv = d.inv().unwrap();
        rest = rest
            .into_iter()
            .map(|w| {
                let c = &bil(&pm, &w, &pick) * &dinv;
                axpy(&w, &-c, &pick)
            })
            .collect();
        diag.push((pick, d));
    }
    diag.sort_by_key(|(_, d)| if d.re > Q::from_integer(0.into()) { 0 } else { 1 });
    let ell = diag.iter().filter(|(_, d)| d.re > Q::from_integer(0.into())).count();
    let pairs = xs.len();
    let mut basis: Matrix = xs;
    basis.extend(ys);
    let mut scales = vec![one; 2 * pairs];
    for (v, d) in &diag {
        basis.push(v.clone());
        let mag = if d.re < Q::from_integer(0.into()) { -d.re.clone() } else { d.re.clone() };
        scales.push(mag / Q::from_integer(2.into()));
    }
    let parities = [vec![0u8; 2 * pairs], vec![1u8; diag.len()]].concat();
    Ok(DarbouxResult { kind: DarbouxKind::Even { pairs, ell, odd: diag.len() }, basis, scales, parities })
}
