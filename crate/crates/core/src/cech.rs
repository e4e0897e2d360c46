//! Čech data on the nerve of a finite cover: integer chain complexes, the
//! cocycle `a = delta f` of a family of local potentials, its period group and
//! the existence and classification of prequantum bundles with group `R/dZ`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::Q;

pub type IMatrix = Vec<Vec<BigInt>>;

/// Simplicial complex given by sorted vertex tuples, closed under faces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NerveComplex {
    /// `simplices[k]`: sorted `k`-simplices in lexicographic order.
    simplices: Vec<Vec<Vec<usize>>>,
    /// `boundaries[k]`: matrix of `d_k: C_k -> C_{k-1}` (rows `k-1`-simplices); `boundaries[0]` is empty.
    boundaries: Vec<IMatrix>,
}

fn faces(s: &[usize]) -> Vec<Vec<usize>> {
    (0..s.len())
        .map(|i| {
            let mut f = s.to_vec();
            f.remove(i);
            f
        })
        .collect()
}

/// Adds every face of the given simplices.
pub fn closure(simplices: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut all = BTreeSet::new();
    let mut stack: Vec<Vec<usize>> = simplices
        .iter()
        .map(|s| {
            let mut s = s.clone();
            s.sort_unstable();
            s.dedup();
            s
        })
        .collect();
    while let Some(s) = stack.pop() {
        if s.is_empty() || !all.insert(s.clone()) {
            continue;
        }
        if s.len() > 1 {
            stack.extend(faces(&s));
        }
    }
    all.into_iter().collect()
}

impl NerveComplex {
    pub fn dimension(&self) -> usize {
        self.simplices.len().saturating_sub(1)
    }

    pub fn simplices(&self, k: usize) -> &[Vec<usize>] {
        self.simplices.get(k).map_or(&[], |v| &v[..])
    }

    pub fn index_of(&self, s: &[usize]) -> Option<usize> {
        self.simplices.get(s.len().checked_sub(1)?)?.binary_search(&s.to_vec()).ok()
    }

    /// Matrix of `d_k`, with `|C_{k-1}|` rows and `|C_k|` columns.
    pub fn boundary(&self, k: usize) -> IMatrix {
        if k == 0 || k >= self.boundaries.len() {
            let rows = if k == 0 { 0 } else { self.simplices(k - 1).len() };
            return vec![vec![BigInt::zero(); self.simplices(k).len()]; rows];
        }
        self.boundaries[k].clone()
    }
}

pub fn build_nerve(simplices: &[Vec<usize>]) -> Result<NerveComplex> {
    let mut set = BTreeSet::new();
    for s in simplices {
        let mut t = s.clone();
        t.sort_unstable();
        t.dedup();
        if t.len() != s.len() || t.is_empty() {
            return Err(Error::InvalidComplex(format!("{:?} is not a simplex", s)));
        }
        set.insert(t);
    }
    for s in &set {
        if s.len() > 1 {
            for f in faces(s) {
                if !set.contains(&f) {
                    return Err(Error::InvalidComplex(format!("face {:?} of {:?} is missing", f, s)));
                }
            }
        }
    }
    let top = set.iter().map(|s| s.len()).max().unwrap_or(0);
    let mut by_dim: Vec<Vec<Vec<usize>>> = vec![Vec::new(); top];
    for s in set {
        by_dim[s.len() - 1].push(s);
    }
    let mut boundaries = vec![Vec::new()];
    for k in 1..top {
        let mut m = vec![vec![BigInt::zero(); by_dim[k].len()]; by_dim[k - 1].len()];
        for (j, s) in by_dim[k].iter().enumerate() {
            for (i, f) in faces(s).into_iter().enumerate() {
                let r = by_dim[k - 1].binary_search(&f).expect("faces checked above");
                m[r][j] = if i % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            }
        }
        boundaries.push(m);
    }
    Ok(NerveComplex { simplices: by_dim, boundaries })
}

/// Totally skew-symmetric rational cochain, stored on sorted simplices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CechCochain {
    degree: usize,
    values: BTreeMap<Vec<usize>, Q>,
}

/// Sorts and returns the permutation sign, or `None` when a vertex repeats.
fn sort_sign(s: &[usize]) -> Option<(bool, Vec<usize>)> {
    let mut v = s.to_vec();
    let mut neg = false;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            neg = !neg;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((neg, v))
}

impl CechCochain {
    pub fn zero(degree: usize) -> Self {
        CechCochain { degree, values: BTreeMap::new() }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Sets the value on an ordered simplex; other orderings follow by skew symmetry.
    pub fn set(&mut self, s: &[usize], v: Q) -> Result<()> {
        if s.len() != self.degree + 1 {
            return Err(Error::DegreeMismatch { expected: self.degree, found: s.len().saturating_sub(1) });
        }
        let (neg, key) = sort_sign(s).ok_or_else(|| Error::InvalidComplex(format!("{:?} repeats a vertex", s)))?;
        let v = if neg { -v } else { v };
        if v.is_zero() {
            self.values.remove(&key);
        } else {
            self.values.insert(key, v);
        }
        Ok(())
    }

    pub fn get(&self, s: &[usize]) -> Q {
        match sort_sign(s) {
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

    pub fn values(&self) -> impl Iterator<Item = (&Vec<usize>, &Q)> {
        self.values.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn check_on(&self, nerve: &NerveComplex) -> Result<()> {
        for s in self.values.keys() {
            if nerve.index_of(s).is_none() {
                return Err(Error::InvalidComplex(format!("cochain is defined on {:?}, which is not in the nerve", s)));
            }
        }
        Ok(())
    }

    pub fn to_vector(&self, nerve: &NerveComplex) -> Vec<Q> {
        nerve.simplices(self.degree).iter().map(|s| self.get(s)).collect()
    }

    pub fn from_vector(nerve: &NerveComplex, degree: usize, v: &[Q]) -> Self {
        let mut c = Self::zero(degree);
        for (s, x) in nerve.simplices(degree).iter().zip(v) {
            if !x.is_zero() {
                c.values.insert(s.clone(), x.clone());
            }
        }
        c
    }

    pub fn add(&self, o: &CechCochain) -> CechCochain {
        let mut out = self.clone();
        for (k, v) in &o.values {
            let s = out.get(k) + v;
            out.set(k, s).expect("same degree");
        }
        out
    }

    pub fn sub(&self, o: &CechCochain) -> CechCochain {
        let mut out = self.clone();
        for (k, v) in &o.values {
            let s = out.get(k) - v;
            out.set(k, s).expect("same degree");
        }
        out
    }
}

/// `(delta c)(s_0..s_{k+1}) = sum_i (-1)^i c(s_0..^s_i..s_{k+1})`.
pub fn delta(nerve: &NerveComplex, c: &CechCochain) -> CechCochain {
    let mut out = CechCochain::zero(c.degree + 1);
    for s in nerve.simplices(c.degree + 1) {
        let mut v = Q::zero();
        for (i, f) in faces(s).into_iter().enumerate() {
            let x = c.get(&f);
            if i % 2 == 0 {
                v += x;
            } else {
                v -= x;
            }
        }
        if !v.is_zero() {
            out.values.insert(s.clone(), v);
        }
    }
    out
}

/// `a_ijk = f_ij + f_jk + f_ki` on every 2-simplex.
pub fn cocycle_from_potentials(nerve: &NerveComplex, f: &CechCochain) -> Result<CechCochain> {
    if f.degree != 1 {
        return Err(Error::DegreeMismatch { expected: 1, found: f.degree });
    }
    f.check_on(nerve)?;
    Ok(delta(nerve, f))
}

/// `u * a * v = d` with `u`, `v` unimodular and `d` diagonal, each diagonal
/// entry dividing the next.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Smith {
    pub u: IMatrix,
    pub d: Vec<BigInt>,
    pub v: IMatrix,
    pub rows: usize,
    pub cols: usize,
}

impl Smith {
    pub fn rank(&self) -> usize {
        self.d.len()
    }
}

fn identity(n: usize) -> IMatrix {
    (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
}

fn row_axpy(m: &mut IMatrix, dst: usize, c: &BigInt, src: usize) {
    if c.is_zero() {
        return;
    }
    let s = m[src].clone();
    for (x, y) in m[dst].iter_mut().zip(s) {
        *x += c * y;
    }
}

fn col_axpy(m: &mut IMatrix, dst: usize, c: &BigInt, src: usize) {
    if c.is_zero() {
        return;
    }
    for row in m.iter_mut() {
        let y = row[src].clone();
        row[dst] += c * y;
    }
}

fn col_swap(m: &mut IMatrix, a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

pub fn smith_normal_form(a: &IMatrix, cols: usize) -> Smith {
    let rows = a.len();
    let mut m = a.clone();
    let mut u = identity(rows);
    let mut v = identity(cols);
    let mut d = Vec::new();
    for t in 0..rows.min(cols) {
        loop {
            // smallest nonzero entry of the remaining block goes to (t, t)
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !m[i][j].is_zero() && best.map_or(true, |(bi, bj)| m[i][j].abs() < m[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                return Smith { u, d, v, rows, cols };
            };
            m.swap(t, bi);
            u.swap(t, bi);
            col_swap(&mut m, t, bj);
            col_swap(&mut v, t, bj);
            let p = m[t][t].clone();
            let mut clean = true;
            for i in t + 1..rows {
                let qt = -m[i][t].div_floor(&p);
                row_axpy(&mut m, i, &qt, t);
                row_axpy(&mut u, i, &qt, t);
                clean &= m[i][t].is_zero();
            }
            for j in t + 1..cols {
                let qt = -m[t][j].div_floor(&p);
                col_axpy(&mut m, j, &qt, t);
                col_axpy(&mut v, j, &qt, t);
                clean &= m[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            // divisibility of the remaining block by the pivot
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !m[i][j].is_multiple_of(&p)));
            if let Some(i) = bad {
                row_axpy(&mut m, t, &BigInt::one(), i);
                row_axpy(&mut u, t, &BigInt::one(), i);
                continue;
            }
            if p.is_negative() {
                for x in m[t].iter_mut() {
                    *x = -x.clone();
                }
                for x in u[t].iter_mut() {
                    *x = -x.clone();
                }
            }
            d.push(m[t][t].clone());
            break;
        }
    }
    Smith { u, d, v, rows, cols }
}

/// A `Z`-basis of the integer kernel of `a`.
pub fn integer_kernel(a: &IMatrix, cols: usize) -> Vec<Vec<BigInt>> {
    let s = smith_normal_form(a, cols);
    (s.rank()..cols).map(|j| s.v.iter().map(|row| row[j].clone()).collect()).collect()
}

fn qgcd(a: &Q, b: &Q) -> Q {
    let a = a.abs();
    let b = b.abs();
    if a.is_zero() {
        return b;
    }
    if b.is_zero() {
        return a;
    }
    let num = (a.numer() * b.denom()).gcd(&(b.numer() * a.denom()));
    Q::new(num, a.denom() * b.denom())
}

/// The subgroup `generator * Z` of `Q`; zero encodes the trivial group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodGroup {
    pub generator: Q,
}

impl PeriodGroup {
    pub fn contains(&self, x: &Q) -> bool {
        if self.generator.is_zero() {
            x.is_zero()
        } else {
            (x / &self.generator).is_integer()
        }
    }

    /// `Per ⊆ dZ`.
    pub fn contained_in(&self, d: &Q) -> bool {
        if self.generator.is_zero() {
            true
        } else if d.is_zero() {
            false
        } else {
            (&self.generator / d).is_integer()
        }
    }
}

/// Values of `a` on integer 2-cycles, as a cyclic group.
pub fn period_group(nerve: &NerveComplex, a: &CechCochain) -> Result<PeriodGroup> {
    if a.degree != 2 {
        return Err(Error::DegreeMismatch { expected: 2, found: a.degree });
    }
    a.check_on(nerve)?;
    let tri = nerve.simplices(2);
    let vals = a.to_vector(nerve);
    let mut g = Q::zero();
    for z in integer_kernel(&nerve.boundary(2), tri.len()) {
        let mut s = Q::zero();
        for (zi, v) in z.iter().zip(&vals) {
            if !zi.is_zero() {
                s += Q::from_integer(zi.clone()) * v;
            }
        }
        g = qgcd(&g, &s);
    }
    Ok(PeriodGroup { generator: g })
}

pub fn prequantum_exists(per: &PeriodGroup, d: &Q) -> bool {
    per.contained_in(d)
}

/// Correction `b` with `a - delta b` valued in `Per`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Normalized {
    pub correction: CechCochain,
    pub cocycle: CechCochain,
}

/// With `delta_1 = d_2^T` and `u delta_1 v = diag(d_i)`, the coordinates
/// `(u a)_i` for `i >= rank` are values of `a` on cycles, hence periods; the
/// others are cleared by `b = v y`, `y_i = (u a)_i / d_i`.
pub fn normalize_to_periods(nerve: &NerveComplex, a: &CechCochain, per: &PeriodGroup) -> Result<Normalized> {
    if a.degree != 2 {
        return Err(Error::DegreeMismatch { expected: 2, found: a.degree });
    }
    a.check_on(nerve)?;
    let d2 = nerve.boundary(2);
    let n1 = nerve.simplices(1).len();
    let n2 = nerve.simplices(2).len();
    let delta1: IMatrix = (0..n2).map(|i| (0..n1).map(|j| d2[j][i].clone()).collect()).collect();
    let s = smith_normal_form(&delta1, n1);
    let av = a.to_vector(nerve);
    let ua: Vec<Q> = s
        .u
        .iter()
        .map(|row| row.iter().zip(&av).fold(Q::zero(), |acc, (x, y)| acc + Q::from_integer(x.clone()) * y))
        .collect();
    let mut y = vec![Q::zero(); n1];
    for (i, di) in s.d.iter().enumerate() {
        y[i] = &ua[i] / Q::from_integer(di.clone());
    }
    for x in ua.iter().skip(s.rank()) {
        if !per.contains(x) {
            return Err(Error::Invalid(format!("value {} on a 2-cycle is not a period", crate::scalar::q_str(x))));
        }
    }
    let b: Vec<Q> = s
        .v
        .iter()
        .map(|row| row.iter().zip(&y).fold(Q::zero(), |acc, (x, yy)| acc + Q::from_integer(x.clone()) * yy))
        .collect();
    let correction = CechCochain::from_vector(nerve, 1, &b);
    let cocycle = a.sub(&delta(nerve, &correction));
    Ok(Normalized { correction, cocycle })
}

/// Reduction of `x` into `[0, d)`; `d = 0` leaves `x` unchanged.
pub fn reduce_mod(x: &Q, d: &Q) -> Q {
    if d.is_zero() {
        return x.clone();
    }
    let d = d.abs();
    let k = (x / &d).floor();
    x - k * d
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionData {
    /// `g_ij = f_ij mod d`.
    pub g: CechCochain,
    /// 2-simplices where `g_ij + g_jk + g_ki` is not `0 mod d`, with the value of `a`.
    pub failures: Vec<(Vec<usize>, Q)>,
}

impl TransitionData {
    pub fn is_cocycle(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Transition data of potentials whose cocycle is `a0 + delta f`: `f` holds the
/// constant parts of the differences `theta_i - theta_j`, `a0` the part of the
/// cocycle carried by their non-constant parts.
pub fn transition_data(nerve: &NerveComplex, f: &CechCochain, a0: &CechCochain, d: &Q) -> Result<TransitionData> {
    let a = cocycle_from_potentials(nerve, f)?.add(a0);
    a.check_on(nerve)?;
    let mut g = CechCochain::zero(1);
    for (s, v) in f.values() {
        g.set(s, reduce_mod(v, d))?;
    }
    let per = PeriodGroup { generator: d.abs() };
    let failures = nerve
        .simplices(2)
        .iter()
        .filter_map(|s| {
            let v = a.get(s);
            if per.contains(&v) {
                None
            } else {
                Some((s.clone(), v))
            }
        })
        .collect();
    Ok(TransitionData { g, failures })
}

/// `H^1(nerve, Q/dZ) = (Q/dZ)^loops + sum Z/t` (for `d = 0`, `Q^loops`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct H1Classification {
    pub d: Q,
    pub loops: usize,
    pub torsion: Vec<BigInt>,
}

impl H1Classification {
    pub fn is_trivial(&self) -> bool {
        self.loops == 0 && self.torsion.is_empty()
    }

    pub fn render(&self) -> String {
        let mut parts = Vec::new();
        let free = if self.d.is_zero() { String::from("Q") } else { format!("Q/{}Z", crate::scalar::q_str(&self.d)) };
        match self.loops {
            0 => {}
            1 => parts.push(free),
            k => parts.push(format!("({})^{}", free, k)),
        }
        for t in &self.torsion {
            parts.push(format!("Z/{}", t));
        }
        if parts.is_empty() {
            String::from("0")
        } else {
            parts.join(" + ")
        }
    }
}

pub fn classify_prequantum(nerve: &NerveComplex, d: &Q) -> H1Classification {
    let n1 = nerve.simplices(1).len();
    let n2 = nerve.simplices(2).len();
    let s1 = smith_normal_form(&nerve.boundary(1), n1);
    let s2 = smith_normal_form(&nerve.boundary(2), n2);
    let loops = n1 - s1.rank() - s2.rank();
    let torsion = if d.is_zero() { Vec::new() } else { s2.d.iter().filter(|x| !x.is_one()).cloned().collect() };
    H1Classification { d: d.abs(), loops, torsion }
}
