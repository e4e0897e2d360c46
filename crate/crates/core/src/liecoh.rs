//! Chevalley–Eilenberg cohomology of super Lie algebras with values in `C = span(c0, c1)`.
//!
//! A `k`-cochain is even and graded skew-symmetric, so on basis vectors
//! `e_{i1}, ..., e_{ik}` only the `c_a` component with `a = sum eps_i mod 2`
//! can be nonzero. It is stored as one rational per non-decreasing index list
//! (even indices may not repeat).

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::charts::CFunction;
use crate::error::{Error, Result};
use crate::forms::CForm;
use crate::linalg::{self, Matrix};
use crate::scalar::{Gq, Q};
use crate::symplectic::{hamiltonian_field, Membership};
use num_traits::{One, Zero};

/// Structure constants `[e_i, e_j] = sum_k c[i][j][k] e_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuperLieAlgebra {
    parities: Vec<u8>,
    c: Vec<Vec<Vec<Q>>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobiViolation {
    pub triple: (usize, usize, usize),
    pub value: Vec<Q>,
}

impl SuperLieAlgebra {
    pub fn new(parities: Vec<u8>, c: Vec<Vec<Vec<Q>>>) -> Result<Self> {
        let n = parities.len();
        if c.len() != n || c.iter().any(|r| r.len() != n || r.iter().any(|v| v.len() != n)) {
            return Err(Error::InvalidAlgebra(String::from("structure constants have wrong shape")));
        }
        for i in 0..n {
            for j in 0..n {
                let sym = parities[i] * parities[j] == 1;
                for k in 0..n {
                    let other = if sym { c[j][i][k].clone() } else { -c[j][i][k].clone() };
                    if c[i][j][k] != other {
                        return Err(Error::InvalidAlgebra(format!(
                            "bracket [e{},e{}] violates graded antisymmetry",
                            i + 1,
                            j + 1
                        )));
                    }
                    if !c[i][j][k].is_zero() && (parities[i] + parities[j]) % 2 != parities[k] {
                        return Err(Error::InvalidAlgebra(format!(
                            "bracket [e{},e{}] has a component on e{} of the wrong parity",
                            i + 1,
                            j + 1,
                            k + 1
                        )));
                    }
                }
            }
        }
        Ok(SuperLieAlgebra { parities, c })
    }

    pub fn abelian(parities: Vec<u8>) -> Self {
        let n = parities.len();
        SuperLieAlgebra { parities, c: vec![vec![vec![Q::zero(); n]; n]; n] }
    }

    /// Builds from a list of brackets `[e_i, e_j] = v`; the reversed ones follow
    /// by graded antisymmetry and must agree when also given.
    pub fn from_brackets(parities: Vec<u8>, brackets: &[(usize, usize, Vec<Q>)]) -> Result<Self> {
        let n = parities.len();
        let mut c = vec![vec![vec![Q::zero(); n]; n]; n];
        let mut set = vec![vec![false; n]; n];
        for (i, j, v) in brackets {
            let (i, j) = (*i, *j);
            if i >= n || j >= n || v.len() != n {
                return Err(Error::InvalidAlgebra(format!("bracket [e{},e{}] out of range", i + 1, j + 1)));
            }
            let sym = parities[i] * parities[j] == 1;
            let rev: Vec<Q> = v.iter().map(|x| if sym { x.clone() } else { -x.clone() }).collect();
            for (a, b, val) in [(i, j, v.clone()), (j, i, rev)] {
                if set[a][b] && c[a][b] != val {
                    return Err(Error::InvalidAlgebra(format!("conflicting values for [e{},e{}]", a + 1, b + 1)));
                }
                c[a][b] = val;
                set[a][b] = true;
            }
        }
        Self::new(parities, c)
    }

    pub fn dim(&self) -> usize {
        self.parities.len()
    }

    pub fn parities(&self) -> &[u8] {
        &self.parities
    }

    pub fn structure(&self, i: usize, j: usize) -> &[Q] {
        &self.c[i][j]
    }

    /// Bracket of vectors with real coefficients.
    pub fn bracket(&self, u: &[Q], v: &[Q]) -> Vec<Q> {
        let n = self.dim();
        let mut r = vec![Q::zero(); n];
        for i in 0..n {
            if u[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if v[j].is_zero() {
                    continue;
                }
                let s = &u[i] * &v[j];
                for k in 0..n {
                    if !self.c[i][j][k].is_zero() {
                        r[k] += &s * &self.c[i][j][k];
                    }
                }
            }
        }
        r
    }

    fn unit(&self, i: usize) -> Vec<Q> {
        let mut v = vec![Q::zero(); self.dim()];
        v[i] = Q::one();
        v
    }

    /// Graded Jacobi `(-1)^{ik}[e_i,[e_j,e_k]] + cyclic = 0` on all basis triples.
    pub fn jacobi_check(&self) -> core::result::Result<(), JacobiViolation> {
        let n = self.dim();
        let e = |i: usize| self.unit(i);
        let p = &self.parities;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let t1 = self.bracket(&e(i), &self.bracket(&e(j), &e(k)));
                    let t2 = self.bracket(&e(j), &self.bracket(&e(k), &e(i)));
                    let t3 = self.bracket(&e(k), &self.bracket(&e(i), &e(j)));
                    let s = |a: usize, b: usize| if p[a] * p[b] == 1 { -Q::one() } else { Q::one() };
                    let (s1, s2, s3) = (s(i, k), s(j, i), s(k, j));
                    let v: Vec<Q> = (0..n).map(|m| &s1 * &t1[m] + &s2 * &t2[m] + &s3 * &t3[m]).collect();
                    if v.iter().any(|x| !x.is_zero()) {
                        return Err(JacobiViolation { triple: (i, j, k), value: v });
                    }
                }
            }
        }
        Ok(())
    }
}

/// Non-decreasing index lists of length `k`, even indices not repeated.
pub fn cochain_basis(parities: &[u8], k: usize) -> Vec<Vec<usize>> {
    let n = parities.len();
    let mut out: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..k {
        let mut next = Vec::new();
        for v in &out {
            let start = v.last().copied().unwrap_or(0);
            for i in start..n {
                if let Some(&l) = v.last() {
                    if l == i && parities[i] == 0 {
                        continue;
                    }
                }
                let mut w = v.clone();
                w.push(i);
                next.push(w);
            }
        }
        out = next;
    }
    out
}

/// Sorts indices with the graded skew sign; `None` when an even index repeats.
fn sort_indices(parities: &[u8], idx: &[usize]) -> Option<(bool, Vec<usize>)> {
    let mut v = idx.to_vec();
    let mut neg = false;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            if parities[v[j - 1]] * parities[v[j]] == 0 {
                neg = !neg;
            }
            v.swap(j - 1, j);
            j -= 1;
        }
    }
    for k in 1..v.len() {
        if v[k] == v[k - 1] && parities[v[k]] == 0 {
            return None;
        }
    }
    Some((neg, v))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CeCochain {
    degree: usize,
    parities: Vec<u8>,
    values: BTreeMap<Vec<usize>, Q>,
}

impl CeCochain {
    pub fn zero(parities: &[u8], degree: usize) -> Self {
        CeCochain { degree, parities: parities.to_vec(), values: BTreeMap::new() }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn parities(&self) -> &[u8] {
        &self.parities
    }

    /// Sets `c(e_{i1}, ..., e_{ik}) = v` (indices in any order).
    pub fn set(&mut self, idx: &[usize], v: Q) -> Result<()> {
        if idx.len() != self.degree || idx.iter().any(|&i| i >= self.parities.len()) {
            return Err(Error::Invalid(String::from("cochain arguments out of range")));
        }
        match sort_indices(&self.parities, idx) {
            None => {
                if v.is_zero() {
                    Ok(())
                } else {
                    Err(Error::Invalid(String::from("repeated even argument must give zero")))
                }
            }
            Some((neg, key)) => {
                let v = if neg { -v } else { v };
                if v.is_zero() {
                    self.values.remove(&key);
                } else {
                    self.values.insert(key, v);
                }
                Ok(())
            }
        }
    }

    pub fn get(&self, idx: &[usize]) -> Q {
        match sort_indices(&self.parities, idx) {
            None => Q::zero(),
            Some((neg, key)) => {
                let v = self.values.get(&key).cloned().unwrap_or_else(Q::zero);
                if neg {
                    -v
                } else {
                    v
                }
            }
        }
    }

    /// Which `c_a` carries the value on these arguments.
    pub fn component(&self, idx: &[usize]) -> u8 {
        (idx.iter().map(|&i| self.parities[i] as usize).sum::<usize>() % 2) as u8
    }

    pub fn values(&self) -> impl Iterator<Item = (&Vec<usize>, &Q)> {
        self.values.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn to_vector(&self) -> Vec<Q> {
        cochain_basis(&self.parities, self.degree).iter().map(|k| self.values.get(k).cloned().unwrap_or_else(Q::zero)).collect()
    }

    pub fn from_vector(parities: &[u8], degree: usize, v: &[Q]) -> Self {
        let mut c = Self::zero(parities, degree);
        for (k, x) in cochain_basis(parities, degree).into_iter().zip(v) {
            if !x.is_zero() {
                c.values.insert(k, x.clone());
            }
        }
        c
    }

    pub fn add(&self, o: &CeCochain) -> CeCochain {
        let v: Vec<Q> = self.to_vector().iter().zip(o.to_vector()).map(|(a, b)| a + b).collect();
        Self::from_vector(&self.parities, self.degree, &v)
    }

    pub fn sub(&self, o: &CeCochain) -> CeCochain {
        let v: Vec<Q> = self.to_vector().iter().zip(o.to_vector()).map(|(a, b)| a - b).collect();
        Self::from_vector(&self.parities, self.degree, &v)
    }

    pub fn scale(&self, s: &Q) -> CeCochain {
        let v: Vec<Q> = self.to_vector().iter().map(|a| a * s).collect();
        Self::from_vector(&self.parities, self.degree, &v)
    }
}

/// `(dc)(v_0..v_k) = (-1)^k sum_{i<j} (-1)^{j + sum_{i<p<j} eps_p eps_j} c(.., [v_i, v_j], .., ^v_j, ..)`.
pub fn coboundary(g: &SuperLieAlgebra, c: &CeCochain) -> CeCochain {
    let k = c.degree;
    let p = g.parities();
    let mut out = CeCochain::zero(p, k + 1);
    for args in cochain_basis(p, k + 1) {
        let mut total = Q::zero();
        for i in 0..=k {
            for j in i + 1..=k {
                let between: usize = (i + 1..j).map(|q| (p[args[q]] * p[args[j]]) as usize).sum();
                let neg = (j + between) % 2 == 1;
                let br = g.structure(args[i], args[j]);
                for (m, coef) in br.iter().enumerate() {
                    if coef.is_zero() {
                        continue;
                    }
                    let mut a2: Vec<usize> = args.clone();
                    a2[i] = m;
                    a2.remove(j);
                    let v = coef * &c.get(&a2);
                    if neg {
                        total -= v;
                    } else {
                        total += v;
                    }
                }
            }
        }
        if k % 2 == 1 {
            total = -total;
        }
        if !total.is_zero() {
            out.values.insert(args, total);
        }
    }
    out
}

/// Matrix of `d: C^k -> C^{k+1}` in the cochain bases.
pub fn coboundary_matrix(g: &SuperLieAlgebra, k: usize) -> Matrix {
    let src = cochain_basis(g.parities(), k);
    let dst = cochain_basis(g.parities(), k + 1);
    let mut m = linalg::zeros(dst.len(), src.len());
    for (j, _) in src.iter().enumerate() {
        let mut e = vec![Q::zero(); src.len()];
        e[j] = Q::one();
        let dc = coboundary(g, &CeCochain::from_vector(g.parities(), k, &e));
        for (i, v) in dc.to_vector().into_iter().enumerate() {
            m[i][j] = Gq::real(v);
        }
    }
    m
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct H2 {
    pub dim: usize,
    pub cocycles: usize,
    pub coboundaries: usize,
    /// Cocycles whose classes form a basis of `H^2`.
    pub basis: Vec<CeCochain>,
}

/// `dim` counts cocycles independent modulo coboundaries, which stays meaningful
/// when a bracket table fails Jacobi and `B^2` is not inside `Z^2`.
pub fn h2(g: &SuperLieAlgebra) -> H2 {
    let p = g.parities();
    let d1 = coboundary_matrix(g, 1);
    let d2 = coboundary_matrix(g, 2);
    let n2 = cochain_basis(p, 2).len();
    let z2 = linalg::kernel(&d2, n2);
    let b2_rank = linalg::rank(&d1);
    // extend a basis of B^2 by cocycles
    let mut span: Matrix = linalg::transpose(&d1).into_iter().filter(|r| r.iter().any(|x| !x.is_zero())).collect();
    let mut rank = linalg::rank(&span);
    let mut basis = Vec::new();
    for z in &z2 {
        let mut trial = span.clone();
        trial.push(z.clone());
        let r = linalg::rank(&trial);
        if r > rank {
            span = trial;
            rank = r;
            let v: Vec<Q> = z.iter().map(|x| x.re.clone()).collect();
            basis.push(CeCochain::from_vector(p, 2, &v));
        }
    }
    H2 { dim: basis.len(), cocycles: z2.len(), coboundaries: b2_rank, basis }
}

/// Index of `c0` and `c1` in a central extension of an `n`-dimensional algebra.
pub fn central_indices(n: usize) -> (usize, usize) {
    (n, n + 1)
}

/// `[(v, e), (w, f)] = ([v, w], W(v, w))` on `g + C`, with `c0` even and `c1` odd
/// appended to the basis.
pub fn central_extension(g: &SuperLieAlgebra, w: &CeCochain) -> Result<SuperLieAlgebra> {
    if w.degree() != 2 || w.parities() != g.parities() {
        return Err(Error::DegreeMismatch { expected: 2, found: w.degree() });
    }
    let n = g.dim();
    let mut parities = g.parities().to_vec();
    parities.extend([0, 1]);
    let mut c = vec![vec![vec![Q::zero(); n + 2]; n + 2]; n + 2];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                c[i][j][k] = g.structure(i, j)[k].clone();
            }
            let alpha = w.component(&[i, j]) as usize;
            c[i][j][n + alpha] = w.get(&[i, j]);
        }
    }
    SuperLieAlgebra::new(parities, c)
}

/// Finds `F` with `w1 - w2 = dF`, if the extensions are equivalent.
pub fn extension_equivalent(g: &SuperLieAlgebra, w1: &CeCochain, w2: &CeCochain) -> Option<CeCochain> {
    let d1 = coboundary_matrix(g, 1);
    let diff: Vec<Gq> = w1.sub(w2).to_vector().into_iter().map(Gq::real).collect();
    let sol = linalg::solve(&d1, &diff)?;
    let v: Vec<Q> = sol.into_iter().map(|x| x.re).collect();
    Some(CeCochain::from_vector(g.parities(), 1, &v))
}

/// Matrix (columns are images of basis vectors) of `phi(v, e) = (v, e - F(v))`,
/// an isomorphism from the extension by `w1` onto the one by `w2` when
/// `w1 - w2 = dF`.
pub fn extension_isomorphism(g: &SuperLieAlgebra, f: &CeCochain) -> Vec<Vec<Q>> {
    let n = g.dim();
    let mut m = vec![vec![Q::zero(); n + 2]; n + 2];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Q::one();
    }
    for k in 0..n {
        let alpha = g.parities()[k] as usize;
        m[n + alpha][k] = -f.get(&[k]);
    }
    m
}

/// `(v, w) -> <[v, w], mu>` for a point `mu` given as a 1-cochain.
pub fn pullback_class(g: &SuperLieAlgebra, mu: &CeCochain) -> CeCochain {
    let n = g.dim();
    let mut out = CeCochain::zero(g.parities(), 2);
    for args in cochain_basis(g.parities(), 2) {
        let br = g.structure(args[0], args[1]);
        let mut s = Q::zero();
        for k in 0..n {
            if !br[k].is_zero() {
                s += &br[k] * &mu.get(&[k]);
            }
        }
        if !s.is_zero() {
            out.values.insert(args, s);
        }
    }
    out
}

/// `W_J(v, w) = {J_v, J_w} - J_[v,w]` for a comoment `J` (one `C`-valued
/// function per basis vector). Fails unless every value is a real constant.
pub fn momentum_cocycle(g: &SuperLieAlgebra, w: &CForm, comoment: &[CFunction]) -> Result<CeCochain> {
    let n = g.dim();
    if comoment.len() != n {
        return Err(Error::Invalid(format!("comoment has {} entries, algebra has dimension {}", comoment.len(), n)));
    }
    let mut fields = Vec::new();
    for (k, j) in comoment.iter().enumerate() {
        match hamiltonian_field(w, j, None)? {
            Membership::Member(x) => fields.push(x),
            _ => return Err(Error::NotHamiltonian(format!("comoment of e{}", k + 1))),
        }
    }
    let mut out = CeCochain::zero(g.parities(), 2);
    for args in cochain_basis(g.parities(), 2) {
        let (v, u) = (args[0], args[1]);
        let pb = comoment[u].apply(&fields[v]);
        let mut jb = CFunction::zero(pb.dims().0, pb.dims().1);
        for (k, coef) in g.structure(v, u).iter().enumerate() {
            if !coef.is_zero() {
                jb = &jb + &comoment[k].scale(&Gq::real(coef.clone()));
            }
        }
        let val = &pb - &jb;
        let alpha = out.component(&args);
        let (main, other) = if alpha == 0 { (&val.f0, &val.f1) } else { (&val.f1, &val.f0) };
        let not_const = || Error::NotConstant(format!("momentum cocycle at (e{}, e{})", v + 1, u + 1));
        if !other.is_zero() {
            return Err(not_const());
        }
        let c = main.constant_value().ok_or_else(not_const)?;
        if !c.is_scalar() || !c.body().is_real() {
            return Err(not_const());
        }
        out.set(&args, c.body().re)?;
    }
    Ok(out)
}
