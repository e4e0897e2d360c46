//! Super Heisenberg groups `E x C` built from an even graded skew form
//! `Omega = Omega0 c0 + Omega1 c1`, their coadjoint orbits and KKS forms.
//!
//! Orbits are taken through points with real coordinates, so `y1 = ybar0 = 0`.
//! Ambient coordinates on the dual are `x_1..x_n, xbar_1..xbar_n` with
//! `eps(x_i) = eps_i` and `eps(xbar_i) = 1 - eps_i`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::charts::{CFunction, Chart, SuperFunction, VectorField};
use crate::error::{Error, Result};
use crate::forms::{d_cfunction, double, Form};
use crate::grassmann::GrassmannNumber;
use crate::liecoh::{momentum_cocycle, CeCochain, SuperLieAlgebra};
use crate::linalg::{self, Matrix};
use crate::scalar::{Gq, Q};
use crate::symplectic::form_from_pairing;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeisenbergSpec {
    parities: Vec<u8>,
    /// `omega[a][i][j] = Omega^a(e_i, e_j)`
    omega: [Vec<Vec<Q>>; 2],
}

fn square(m: &[Vec<Q>], n: usize) -> bool {
    m.len() == n && m.iter().all(|r| r.len() == n)
}

impl HeisenbergSpec {
    pub fn new(parities: Vec<u8>, omega0: Vec<Vec<Q>>, omega1: Vec<Vec<Q>>) -> Result<Self> {
        let n = parities.len();
        if !square(&omega0, n) || !square(&omega1, n) {
            return Err(Error::Invalid(format!("Omega matrices must be {}x{}", n, n)));
        }
        for (alpha, m) in [&omega0, &omega1].into_iter().enumerate() {
            for i in 0..n {
                for j in 0..n {
                    let e = parities[i] * parities[j] == 1;
                    let other = if e { m[j][i].clone() } else { -m[j][i].clone() };
                    if m[i][j] != other {
                        return Err(Error::Invalid(format!(
                            "Omega{} is not graded skew-symmetric at ({}, {})",
                            alpha,
                            i + 1,
                            j + 1
                        )));
                    }
                    if !m[i][j].is_zero() && ((parities[i] + parities[j]) % 2) as usize != alpha {
                        return Err(Error::Invalid(format!(
                            "Omega{} has an entry at ({}, {}) of the wrong parity",
                            alpha,
                            i + 1,
                            j + 1
                        )));
                    }
                }
            }
        }
        Ok(HeisenbergSpec { parities, omega: [omega0, omega1] })
    }

    /// `Omega(e_i, e_j) = m[i][j]`, split into its even and odd parts.
    pub fn from_combined(parities: Vec<u8>, m: &[Vec<Q>]) -> Result<Self> {
        let n = parities.len();
        if !square(m, n) {
            return Err(Error::Invalid(format!("Omega matrix must be {}x{}", n, n)));
        }
        let mut o = [vec![vec![Q::zero(); n]; n], vec![vec![Q::zero(); n]; n]];
        for i in 0..n {
            for j in 0..n {
                o[((parities[i] + parities[j]) % 2) as usize][i][j] = m[i][j].clone();
            }
        }
        let [o0, o1] = o;
        Self::new(parities, o0, o1)
    }

    /// Matrix displayed with `j` as the row index: `Omega(e_i, e_j) = rows[j][i]`.
    pub fn from_transposed(parities: Vec<u8>, rows: &[Vec<Q>]) -> Result<Self> {
        let n = parities.len();
        if !square(rows, n) {
            return Err(Error::Invalid(format!("Omega matrix must be {}x{}", n, n)));
        }
        let m: Vec<Vec<Q>> = (0..n).map(|i| (0..n).map(|j| rows[j][i].clone()).collect()).collect();
        Self::from_combined(parities, &m)
    }

    pub fn n(&self) -> usize {
        self.parities.len()
    }

    pub fn parities(&self) -> &[u8] {
        &self.parities
    }

    pub fn omega(&self, alpha: u8, i: usize, j: usize) -> &Q {
        &self.omega[alpha as usize][i][j]
    }

    pub fn omega_matrix(&self, alpha: u8) -> &[Vec<Q>] {
        &self.omega[alpha as usize]
    }

    /// `Omega^a(v, e_i)` for `v = sum a^k e_k` with Grassmann coordinates.
    fn omega_left(&self, alpha: u8, a: &[GrassmannNumber], i: usize) -> GrassmannNumber {
        let mut s = GrassmannNumber::zero();
        for (k, ak) in a.iter().enumerate() {
            let w = self.omega(alpha, k, i);
            if !w.is_zero() {
                s = &s + &ak.scale(&Gq::real(w.clone()));
            }
        }
        s
    }

    /// `Omega^a(v, w) = sum (-1)^{eps_i eps_j} v^i w^j Omega^a_ij` for even vectors.
    pub fn omega_of(&self, alpha: u8, v: &[GrassmannNumber], w: &[GrassmannNumber]) -> GrassmannNumber {
        let n = self.n();
        let mut s = GrassmannNumber::zero();
        for i in 0..n {
            for j in 0..n {
                let c = self.omega(alpha, i, j);
                if c.is_zero() || v[i].is_zero() || w[j].is_zero() {
                    continue;
                }
                let c = if self.parities[i] * self.parities[j] == 1 { -c.clone() } else { c.clone() };
                s = &s + &(&v[i] * &w[j]).scale(&Gq::real(c));
            }
        }
        s
    }
}

/// Basis `e_1..e_n, c0, c1` with `[e_i, e_j] = Omega0(e_i, e_j) c0 + Omega1(e_i, e_j) c1`.
pub fn algebra_of(spec: &HeisenbergSpec) -> SuperLieAlgebra {
    let n = spec.n();
    let mut parities = spec.parities.clone();
    parities.extend([0, 1]);
    let mut c = vec![vec![vec![Q::zero(); n + 2]; n + 2]; n + 2];
    for i in 0..n {
        for j in 0..n {
            c[i][j][n] = spec.omega(0, i, j).clone();
            c[i][j][n + 1] = spec.omega(1, i, j).clone();
        }
    }
    SuperLieAlgebra::new(parities, c).expect("Heisenberg brackets are graded skew by construction")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupElement {
    pub a: Vec<GrassmannNumber>,
    pub b: [GrassmannNumber; 2],
}

impl GroupElement {
    pub fn identity(n: usize) -> Self {
        GroupElement { a: vec![GrassmannNumber::zero(); n], b: [GrassmannNumber::zero(), GrassmannNumber::zero()] }
    }

    pub fn new(spec: &HeisenbergSpec, a: Vec<GrassmannNumber>, b: [GrassmannNumber; 2]) -> Result<Self> {
        if a.len() != spec.n() {
            return Err(Error::Invalid(format!("group element needs {} coordinates", spec.n())));
        }
        for (i, x) in a.iter().enumerate() {
            if !x.is_zero() && x.parity() != Some(spec.parities[i]) {
                return Err(Error::Invalid(format!("coordinate a{} has the wrong parity", i + 1)));
            }
        }
        for (alpha, x) in b.iter().enumerate() {
            if !x.is_zero() && x.parity() != Some(alpha as u8) {
                return Err(Error::Invalid(format!("coordinate b{} has the wrong parity", alpha)));
            }
        }
        Ok(GroupElement { a, b })
    }

    pub fn inverse(&self) -> Self {
        GroupElement { a: self.a.iter().map(|x| -x.clone()).collect(), b: [-self.b[0].clone(), -self.b[1].clone()] }
    }
}

/// `(a, b)(a', b') = (a + a', b + b' + Omega(a, a') / 2)`.
pub fn group_mul(spec: &HeisenbergSpec, g: &GroupElement, h: &GroupElement) -> GroupElement {
    let half = Gq::real(Q::new(1.into(), 2.into()));
    let a = g.a.iter().zip(&h.a).map(|(x, y)| x + y).collect();
    let b = [0u8, 1].map(|alpha| {
        let s = &g.b[alpha as usize] + &h.b[alpha as usize];
        &s + &spec.omega_of(alpha, &g.a, &h.a).scale(&half)
    });
    GroupElement { a, b }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitPoint {
    pub x: Vec<GrassmannNumber>,
    pub xbar: Vec<GrassmannNumber>,
    pub y0: Q,
    pub ybar1: Q,
}

impl OrbitPoint {
    /// Real point: `values[i]` goes to `x_i` when `e_i` is even and to `xbar_i` when odd.
    pub fn real(spec: &HeisenbergSpec, values: &[Q], y0: Q, ybar1: Q) -> Result<Self> {
        let n = spec.n();
        if values.len() != n {
            return Err(Error::Invalid(format!("orbit point needs {} values", n)));
        }
        let mut x = vec![GrassmannNumber::zero(); n];
        let mut xbar = vec![GrassmannNumber::zero(); n];
        for i in 0..n {
            let g = GrassmannNumber::scalar(Gq::real(values[i].clone()));
            if spec.parities[i] == 0 {
                x[i] = g;
            } else {
                xbar[i] = g;
            }
        }
        Ok(OrbitPoint { x, xbar, y0, ybar1 })
    }

    /// Ambient coordinate values (bodies), `x` then `xbar`.
    pub fn ambient_body(&self) -> Vec<Q> {
        self.x.iter().chain(&self.xbar).map(|g| g.body().re).collect()
    }

    /// The point as a 1-cochain on `algebra_of(spec)`: `mu(e_i)` and `mu(c_a) = y_a`.
    pub fn as_cochain(&self, spec: &HeisenbergSpec) -> CeCochain {
        let n = spec.n();
        let mut p = spec.parities.to_vec();
        p.extend([0, 1]);
        let mut c = CeCochain::zero(&p, 1);
        for i in 0..n {
            let v = if spec.parities[i] == 0 { &self.x[i] } else { &self.xbar[i] };
            c.set(&[i], v.body().re).expect("index in range");
        }
        c.set(&[n], self.y0.clone()).expect("index in range");
        c.set(&[n + 1], self.ybar1.clone()).expect("index in range");
        c
    }
}

/// `x_i -> x_i - (-1)^{eps_i} y0 Omega0(a, e_i)`, `xbar_i -> xbar_i - ybar1 Omega1(a, e_i)`.
pub fn coad(spec: &HeisenbergSpec, g: &GroupElement, mu: &OrbitPoint) -> OrbitPoint {
    let n = spec.n();
    let y0 = Gq::real(mu.y0.clone());
    let y1 = Gq::real(mu.ybar1.clone());
    let mut out = mu.clone();
    for i in 0..n {
        let s0 = spec.omega_left(0, &g.a, i).scale(&y0);
        out.x[i] = if spec.parities[i] == 0 { &out.x[i] - &s0 } else { &out.x[i] + &s0 };
        out.xbar[i] = &out.xbar[i] - &spec.omega_left(1, &g.a, i).scale(&y1);
    }
    out
}

fn ambient_parity(spec: &HeisenbergSpec, c: usize) -> u8 {
    let n = spec.n();
    if c < n {
        spec.parities[c]
    } else {
        1 - spec.parities[c - n]
    }
}

fn ambient_name(spec: &HeisenbergSpec, c: usize) -> String {
    let n = spec.n();
    let (bar, i) = if c < n { ("", c + 1) } else { ("bar", c - n + 1) };
    if ambient_parity(spec, c) == 0 {
        format!("x{}{}", bar, i)
    } else {
        format!("xi{}{}", bar, i)
    }
}

/// Ambient chart on the dual: even coordinates then odd, each in `x, xbar` order.
pub fn ambient_chart(spec: &HeisenbergSpec) -> (Chart, Vec<usize>) {
    let order: Vec<usize> = (0..2 * spec.n())
        .filter(|&c| ambient_parity(spec, c) == 0)
        .chain((0..2 * spec.n()).filter(|&c| ambient_parity(spec, c) == 1))
        .collect();
    let names: Vec<String> = order.iter().map(|&c| ambient_name(spec, c)).collect();
    let p = order.iter().filter(|&&c| ambient_parity(spec, c) == 0).count();
    let chart = Chart { even: names[..p].to_vec(), odd: names[p..].to_vec() };
    (chart, order)
}

/// Coefficients of `v^*` along `d/dx_i` and `d/dxbar_i` for `v = sum v^k e_k`.
pub fn fundamental_coefficients(spec: &HeisenbergSpec, v: &[Q], y0: &Q, ybar1: &Q) -> Vec<Q> {
    let n = spec.n();
    let mut out = vec![Q::zero(); 2 * n];
    for i in 0..n {
        let mut s0 = Q::zero();
        let mut s1 = Q::zero();
        for (k, vk) in v.iter().enumerate().take(n) {
            s0 += vk * spec.omega(0, k, i);
            s1 += vk * spec.omega(1, k, i);
        }
        out[i] = if spec.parities[i] == 0 { y0 * &s0 } else { -(y0 * &s0) };
        out[n + i] = ybar1 * &s1;
    }
    out
}

/// `v^*` on the ambient chart for `v = sum v^k e_k` (central parts act trivially).
pub fn fundamental_field(spec: &HeisenbergSpec, v: &[Q], mu: &OrbitPoint) -> VectorField {
    let (chart, order) = ambient_chart(spec);
    let (p, q) = (chart.p(), chart.q());
    let coeffs = fundamental_coefficients(spec, v, &mu.y0, &mu.ybar1);
    let comps = order.iter().map(|&c| SuperFunction::scalar(p, q, Gq::real(coeffs[c].clone()))).collect();
    VectorField::from_components(p, q, comps).expect("component count matches chart")
}

/// `[y0 Omega0(v, .) = 0, ybar1 Omega1(v, .) = 0]`.
pub fn coad_vanishes(spec: &HeisenbergSpec, v: &[Q], mu: &OrbitPoint) -> [bool; 2] {
    let n = spec.n();
    [0u8, 1].map(|alpha| {
        let y = if alpha == 0 { &mu.y0 } else { &mu.ybar1 };
        (0..n).all(|i| {
            let s: Q = (0..n).map(|k| &v[k] * spec.omega(alpha, k, i)).fold(Q::zero(), |a, b| a + b);
            (y * &s).is_zero()
        })
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrbitKind {
    Trivial,
    /// `y0 != 0`, `ybar1 = 0`
    CaseI,
    /// `ybar1 != 0`, `y0 = 0`
    CaseII,
    /// `y0 ybar1 != 0`
    CaseIII,
}

impl OrbitKind {
    pub fn name(&self) -> &'static str {
        match self {
            OrbitKind::Trivial => "trivial",
            OrbitKind::CaseI => "case_i",
            OrbitKind::CaseII => "case_ii",
            OrbitKind::CaseIII => "case_iii",
        }
    }
}

/// An orbit with a chart made of ambient coordinates; the remaining ambient
/// coordinates are affine functions of the chart ones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit {
    pub kind: OrbitKind,
    pub chart: Chart,
    /// Ambient column of each chart coordinate.
    pub coords: Vec<usize>,
    /// `fields[k][j]`: coefficient of `e_k^*` along chart coordinate `j`.
    pub fields: Vec<Vec<Q>>,
    /// For each ambient column not in the chart, `x_c - sum t_j u_j` is invariant.
    pub dependent: Vec<(usize, Vec<Q>)>,
    pub base: Vec<Q>,
    pub y0: Q,
    pub ybar1: Q,
}

impl Orbit {
    pub fn dims(&self) -> (usize, usize) {
        (self.chart.p(), self.chart.q())
    }

    /// The ambient coordinate `c` restricted to the orbit.
    pub fn ambient_function(&self, c: usize) -> SuperFunction {
        let (p, q) = self.dims();
        if let Some(j) = self.coords.iter().position(|&x| x == c) {
            return SuperFunction::coord(p, q, j);
        }
        let mut f = SuperFunction::scalar(p, q, Gq::real(self.base[c].clone()));
        if let Some((_, t)) = self.dependent.iter().find(|(x, _)| *x == c) {
            for (j, tj) in t.iter().enumerate() {
                if tj.is_zero() {
                    continue;
                }
                let shifted = &SuperFunction::coord(p, q, j)
                    - &SuperFunction::scalar(p, q, Gq::real(self.base[self.coords[j]].clone()));
                f = &f + &shifted.scale(&Gq::real(tj.clone()));
            }
        }
        f
    }

    /// Fundamental field of basis vector `k` (`k >= n` are central and give zero).
    pub fn field(&self, k: usize) -> VectorField {
        let (p, q) = self.dims();
        match self.fields.get(k) {
            None => VectorField::zero(p, q),
            Some(row) => VectorField::from_components(
                p,
                q,
                row.iter().map(|c| SuperFunction::scalar(p, q, Gq::real(c.clone()))).collect(),
            )
            .expect("component count matches chart"),
        }
    }

    /// Invariant linear combinations `x_c - sum t_j u_j`, rendered.
    pub fn invariants(&self, spec: &HeisenbergSpec) -> Vec<String> {
        let mut out = Vec::new();
        for (c, t) in &self.dependent {
            if t.iter().all(|x| x.is_zero()) {
                continue;
            }
            let mut s = ambient_name(spec, *c);
            for (j, tj) in t.iter().enumerate() {
                if tj.is_zero() {
                    continue;
                }
                let neg = -tj.clone();
                let (sign, mag) = if neg < Q::zero() { ("-", -neg) } else { ("+", neg) };
                let name = self.chart.name(j);
                if mag.is_one() {
                    s = format!("{} {} {}", s, sign, name);
                } else {
                    s = format!("{} {} {}*{}", s, sign, crate::scalar::q_str(&mag), name);
                }
            }
            out.push(s);
        }
        out
    }
}

fn column(m: &Matrix, c: usize) -> Vec<Gq> {
    m.iter().map(|r| r[c].clone()).collect()
}

pub fn orbit_classify(spec: &HeisenbergSpec, mu: &OrbitPoint) -> Result<Orbit> {
    let n = spec.n();
    if mu.x.len() != n || mu.xbar.len() != n {
        return Err(Error::Invalid(format!("orbit point needs {} coordinates of each kind", n)));
    }
    let base = mu.ambient_body();
    let kind = match (mu.y0.is_zero(), mu.ybar1.is_zero()) {
        (true, true) => OrbitKind::Trivial,
        (false, true) => OrbitKind::CaseI,
        (true, false) => OrbitKind::CaseII,
        (false, false) => OrbitKind::CaseIII,
    };
    let f: Matrix = (0..n)
        .map(|k| {
            let mut v = vec![Q::zero(); n];
            v[k] = Q::one();
            fundamental_coefficients(spec, &v, &mu.y0, &mu.ybar1).into_iter().map(Gq::real).collect()
        })
        .collect();
    let pivots = linalg::pivot_columns(&f);
    let coords: Vec<usize> = pivots
        .iter()
        .copied()
        .filter(|&c| ambient_parity(spec, c) == 0)
        .chain(pivots.iter().copied().filter(|&c| ambient_parity(spec, c) == 1))
        .collect();
    let names: Vec<String> = coords.iter().map(|&c| ambient_name(spec, c)).collect();
    let p = coords.iter().filter(|&&c| ambient_parity(spec, c) == 0).count();
    let chart = Chart { even: names[..p].to_vec(), odd: names[p..].to_vec() };
    let fp: Matrix = f.iter().map(|r| coords.iter().map(|&c| r[c].clone()).collect()).collect();
    let mut dependent = Vec::new();
    for c in 0..2 * n {
        if coords.contains(&c) {
            continue;
        }
        let t = if coords.is_empty() {
            Vec::new()
        } else {
            linalg::solve(&fp, &column(&f, c)).ok_or_else(|| Error::Invalid(String::from("orbit chart is inconsistent")))?
        };
        dependent.push((c, t.into_iter().map(|x| x.re).collect()));
    }
    let fields = fp.iter().map(|r| r.iter().map(|x| x.re.clone()).collect()).collect();
    Ok(Orbit { kind, chart, coords, fields, dependent, base, y0: mu.y0.clone(), ybar1: mu.ybar1.clone() })
}

/// KKS form: `w(v^*, w^*) = y0 Omega0(v, w) + ybar1 Omega1(v, w)` on the orbit chart.
pub fn kks_form(spec: &HeisenbergSpec, mu: &OrbitPoint) -> Result<(Orbit, Form)> {
    let orbit = orbit_classify(spec, mu)?;
    if orbit.kind == OrbitKind::Trivial {
        return Err(Error::Invalid(String::from("the trivial orbit carries no symplectic form")));
    }
    let n = spec.n();
    let r = orbit.coords.len();
    let y0 = Gq::real(mu.y0.clone());
    let y1 = Gq::real(mu.ybar1.clone());
    let w: Matrix = (0..n)
        .map(|k| {
            (0..n)
                .map(|l| {
                    &(&y0 * &Gq::real(spec.omega(0, k, l).clone())) + &(&y1 * &Gq::real(spec.omega(1, k, l).clone()))
                })
                .collect()
        })
        .collect();
    let fp: Matrix = orbit.fields.iter().map(|row| row.iter().cloned().map(Gq::real).collect()).collect();
    let rows = linalg::pivot_columns(&linalg::transpose(&fp));
    let fs: Matrix = rows.iter().map(|&k| fp[k].clone()).collect();
    let ws: Matrix = rows.iter().map(|&k| rows.iter().map(|&l| w[k][l].clone()).collect()).collect();
    let inv = linalg::inverse(&fs).ok_or(Error::NotInvertible)?;
    let pairing = linalg::matmul(&linalg::matmul(&inv, &ws), &linalg::transpose(&inv));
    let back = linalg::matmul(&linalg::matmul(&fp, &pairing), &linalg::transpose(&fp));
    if back != w {
        return Err(Error::Invalid(String::from("KKS pairing is not well defined on the orbit")));
    }
    debug_assert_eq!(pairing.len(), r);
    let (p, q) = orbit.dims();
    let form = form_from_pairing(p, q, &pairing);
    Ok((orbit, form))
}

/// `<e_k, J> = (-1)^{eps_k} x_k c0 + xbar_k c1`, `<c0, J> = y0 c0`, `<c1, J> = ybar1 c1`.
pub fn momentum_functions(spec: &HeisenbergSpec, orbit: &Orbit) -> Vec<CFunction> {
    let n = spec.n();
    let (p, q) = orbit.dims();
    let mut out = Vec::new();
    for k in 0..n {
        let x = orbit.ambient_function(k);
        let f0 = if spec.parities[k] == 0 { x } else { -x };
        out.push(CFunction::new(f0, orbit.ambient_function(n + k)));
    }
    out.push(CFunction::new(SuperFunction::scalar(p, q, Gq::real(orbit.y0.clone())), SuperFunction::zero(p, q)));
    out.push(CFunction::new(SuperFunction::zero(p, q), SuperFunction::scalar(p, q, Gq::real(orbit.ybar1.clone()))));
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentumReport {
    pub kind: OrbitKind,
    /// Basis vectors `v` where `i_{v^*} w != d<v, J>`.
    pub field_failures: Vec<usize>,
    /// `{J_v, J_w} - J_[v,w]`.
    pub cocycle: Option<CeCochain>,
}

impl MomentumReport {
    pub fn is_strongly_hamiltonian(&self) -> bool {
        self.field_failures.is_empty() && self.cocycle.as_ref().map_or(true, |c| c.is_zero())
    }
}

pub fn momentum_check(spec: &HeisenbergSpec, mu: &OrbitPoint) -> Result<MomentumReport> {
    let orbit = orbit_classify(spec, mu)?;
    if orbit.kind == OrbitKind::Trivial {
        return Ok(MomentumReport { kind: orbit.kind, field_failures: Vec::new(), cocycle: None });
    }
    let (orbit, w) = kks_form(spec, mu)?;
    let wbar = double(&w);
    let j = momentum_functions(spec, &orbit);
    let mut field_failures = Vec::new();
    for (k, jk) in j.iter().enumerate() {
        if wbar.contract(&orbit.field(k)) != d_cfunction(jk) {
            field_failures.push(k);
        }
    }
    let cocycle = momentum_cocycle(&algebra_of(spec), &wbar, &j)?;
    Ok(MomentumReport { kind: orbit.kind, field_failures, cocycle: Some(cocycle) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grassmann::GrassmannNumber as G;
    use crate::scalar::{q, qf};
    use crate::symplectic::is_symplectic;
    use proptest::prelude::*;

    fn example() -> HeisenbergSpec {
        let rows: Vec<Vec<Q>> = [
            [0, 1, 0, 1, 0, 0],
            [-1, 0, 0, 0, 0, 0],
            [0, 0, 0, 0, 1, 0],
            [-1, 0, 0, 0, 0, 0],
            [0, 0, -1, 0, 1, 0],
            [0, 0, 0, 0, 0, -1],
        ]
        .iter()
        .map(|r| r.iter().map(|&x| q(x)).collect())
        .collect();
        HeisenbergSpec::from_transposed(vec![0, 0, 0, 1, 1, 1], &rows).unwrap()
    }

    fn point(y0: i64, y1: i64) -> OrbitPoint {
        OrbitPoint::real(&example(), &vec![q(0); 6], q(y0), q(y1)).unwrap()
    }

    fn gen(k: usize) -> G {
        G::generator(k, 6).unwrap()
    }

    fn expected(orbit: &Orbit, terms: &[(&str, &str, Q)]) -> Form {
        let (p, qd) = orbit.dims();
        let mut w = Form::zero(p, qd);
        for (a, b, c) in terms {
            let da = Form::differential(p, qd, orbit.chart.index_of(a).unwrap());
            let db = Form::differential(p, qd, orbit.chart.index_of(b).unwrap());
            w = &w + &da.wedge(&db).scale(&Gq::real(c.clone()));
        }
        w
    }

    #[test]
    fn algebra_brackets_read_off_matrix() {
        let g = algebra_of(&example());
        let c0 = |v: i64| {
            let mut r = vec![q(0); 8];
            r[6] = q(v);
            r
        };
        let c1 = |v: i64| {
            let mut r = vec![q(0); 8];
            r[7] = q(v);
            r
        };
        assert_eq!(g.structure(1, 0), &c0(1)[..]);
        assert_eq!(g.structure(0, 1), &c0(-1)[..]);
        assert_eq!(g.structure(3, 0), &c1(1)[..]);
        assert_eq!(g.structure(4, 2), &c1(1)[..]);
        assert_eq!(g.structure(4, 4), &c0(1)[..]);
        assert_eq!(g.structure(5, 5), &c0(-1)[..]);
        assert!(g.jacobi_check().is_ok());
    }

    #[test]
    fn inverse_and_identity() {
        let s = example();
        let g = GroupElement::new(
            &s,
            vec![G::scalar(Gq::int(2)), &gen(1) * &gen(2), G::zero(), gen(3), gen(4), G::zero()],
            [G::scalar(Gq::int(1)), gen(5)],
        )
        .unwrap();
        assert_eq!(group_mul(&s, &GroupElement::identity(6), &g), g);
        assert_eq!(group_mul(&s, &g, &g.inverse()), GroupElement::identity(6));
    }

    #[test]
    fn coadjoint_formulas() {
        let s = example();
        let a: Vec<G> = (0..6).map(|i| if i < 3 { &gen(2 * i + 1) * &gen(2 * i + 2) } else { gen(i - 2) }).collect();
        let g = GroupElement::new(&s, a.clone(), [G::zero(), G::zero()]).unwrap();
        let mu = point(1, 1);
        let out = coad(&s, &g, &mu);
        let z = G::zero();
        assert_eq!(out.x[0], &z - &a[1]);
        assert_eq!(out.x[1], a[0].clone());
        assert_eq!(out.x[4], a[4].clone());
        assert_eq!(out.x[5], &z - &a[5]);
        assert_eq!(out.xbar[0], &z - &a[3]);
        assert_eq!(out.xbar[2], &z - &a[4]);
        assert_eq!(out.xbar[3], a[0].clone());
        assert_eq!(out.xbar[4], a[2].clone());
        for i in [2, 3] {
            assert!(out.x[i].is_zero());
        }
        for i in [1, 5] {
            assert!(out.xbar[i].is_zero());
        }
    }

    #[test]
    fn fundamental_field_of_e2() {
        let s = example();
        let mut v = vec![q(0); 6];
        v[1] = q(1);
        let f = fundamental_coefficients(&s, &v, &q(1), &q(0));
        let mut expect = vec![q(0); 12];
        expect[0] = q(1);
        assert_eq!(f, expect);
        assert!(fundamental_field(&s, &v, &point(0, 0)).is_zero());
    }

    #[test]
    fn case_i_form() {
        let s = example();
        let (orbit, w) = kks_form(&s, &point(1, 0)).unwrap();
        assert_eq!(orbit.kind, OrbitKind::CaseI);
        assert_eq!(orbit.chart, Chart::new(&["x1", "x2"], &["xi5", "xi6"]));
        let e = expected(&orbit, &[("x1", "x2", q(1)), ("xi5", "xi5", qf(1, 2)), ("xi6", "xi6", qf(-1, 2))]);
        assert_eq!(w, e);
        let rep = is_symplectic(&w, &[vec![q(0); 2]]).unwrap();
        assert!(rep.is_symplectic() && rep.is_homogeneously_symplectic());
    }

    #[test]
    fn case_ii_form() {
        let s = example();
        let (orbit, w) = kks_form(&s, &point(0, 1)).unwrap();
        assert_eq!(orbit.kind, OrbitKind::CaseII);
        assert_eq!(orbit.chart, Chart::new(&["xbar4", "xbar5"], &["xibar1", "xibar3"]));
        let e = expected(&orbit, &[("xibar1", "xbar4", q(1)), ("xibar3", "xbar5", q(1))]);
        assert_eq!(w, e);
    }

    #[test]
    fn case_iii_form_and_invariants() {
        let s = example();
        let (orbit, w) = kks_form(&s, &point(1, 1)).unwrap();
        assert_eq!(orbit.kind, OrbitKind::CaseIII);
        assert_eq!(orbit.chart, Chart::new(&["x1", "x2", "xbar5"], &["xi5", "xi6", "xibar1"]));
        let e = expected(
            &orbit,
            &[
                ("x1", "x2", q(1)),
                ("xibar1", "x2", q(1)),
                ("xbar5", "xi5", q(1)),
                ("xi5", "xi5", qf(1, 2)),
                ("xi6", "xi6", qf(-1, 2)),
            ],
        );
        assert_eq!(w, e);
        let rep = is_symplectic(&w, &[vec![q(0); 3]]).unwrap();
        assert!(!rep.is_symplectic());
        assert!(rep.is_homogeneously_symplectic());
        assert_eq!(orbit.invariants(&s), vec![String::from("xibar3 + xi5"), String::from("xbar4 - x2")]);
    }

    #[test]
    fn trivial_orbit() {
        let s = example();
        let o = orbit_classify(&s, &point(0, 0)).unwrap();
        assert_eq!(o.kind, OrbitKind::Trivial);
        assert_eq!(o.dims(), (0, 0));
        assert!(kks_form(&s, &point(0, 0)).is_err());
        assert!(momentum_check(&s, &point(0, 0)).unwrap().is_strongly_hamiltonian());
    }

    #[test]
    fn momentum_map_is_strongly_hamiltonian() {
        let s = example();
        for (y0, y1) in [(1, 0), (0, 1), (1, 1), (2, -3)] {
            let mu = OrbitPoint::real(&s, &[q(1), q(-2), q(3), q(1), q(5), q(0)], q(y0), q(y1)).unwrap();
            let rep = momentum_check(&s, &mu).unwrap();
            assert!(rep.is_strongly_hamiltonian(), "y0={} ybar1={}: {:?}", y0, y1, rep.field_failures);
        }
    }

    #[test]
    fn vanishing_field_iff_coadjoint_vanishes() {
        let s = example();
        for (y0, y1) in [(1, 0), (0, 1), (1, 1)] {
            let mu = point(y0, y1);
            for k in 0..6 {
                let mut v = vec![q(0); 6];
                v[k] = q(1);
                let zero = fundamental_field(&s, &v, &mu).is_zero();
                let c = coad_vanishes(&s, &v, &mu);
                assert_eq!(zero, c[0] && c[1]);
            }
        }
    }

    fn arb_element() -> impl Strategy<Value = Vec<G>> {
        proptest::collection::vec((-3i64..4, 0usize..6, 0usize..6, -2i64..3), 6).prop_map(|v| {
            v.into_iter()
                .enumerate()
                .map(|(i, (r, a, b, c))| {
                    if i < 3 {
                        let mut g = G::scalar(Gq::int(r));
                        if a != b {
                            g = &g + &(&gen(a + 1) * &gen(b + 1)).scale(&Gq::int(c));
                        }
                        g
                    } else {
                        &gen(a + 1).scale(&Gq::int(r)) + &gen(b + 1).scale(&Gq::int(c))
                    }
                })
                .collect()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn group_is_associative(a in arb_element(), b in arb_element(), c in arb_element()) {
            let s = example();
            let z = [G::zero(), G::zero()];
            let g = GroupElement::new(&s, a, z.clone()).unwrap();
            let h = GroupElement::new(&s, b, z.clone()).unwrap();
            let k = GroupElement::new(&s, c, z).unwrap();
            prop_assert_eq!(
                group_mul(&s, &group_mul(&s, &g, &h), &k),
                group_mul(&s, &g, &group_mul(&s, &h, &k))
            );
        }

        #[test]
        fn coad_is_an_action(a in arb_element(), b in arb_element(), y0 in -2i64..3, y1 in -2i64..3) {
            let s = example();
            let z = [G::zero(), G::zero()];
            let g = GroupElement::new(&s, a, z.clone()).unwrap();
            let h = GroupElement::new(&s, b, z).unwrap();
            let mu = OrbitPoint::real(&s, &[q(1), q(2), q(0), q(-1), q(3), q(1)], q(y0), q(y1)).unwrap();
            prop_assert_eq!(coad(&s, &g, &coad(&s, &h, &mu)), coad(&s, &group_mul(&s, &g, &h), &mu));
        }
    }
}
