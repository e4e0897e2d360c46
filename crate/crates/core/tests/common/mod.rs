//! Seeded generators shared by the integration tests.
#![allow(dead_code)]

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use supersymp_core::charts::{Monomial, SuperFunction, VectorField};
use supersymp_core::forms::Form;
use supersymp_core::grassmann::GrassmannNumber;
use supersymp_core::liecoh::SuperLieAlgebra;
use supersymp_core::linalg::{self, Matrix};
use supersymp_core::scalar::{q, Gq, Q};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small(rng: &mut ChaCha8Rng) -> i64 {
    let v = rng.gen_range(-3..=3);
    if v == 0 {
        1
    } else {
        v
    }
}

/// Random polynomial with up to `terms` monomials of degree `<= deg`, with
/// coefficients in the Grassmann algebra on 4 generators when `grassmann`.
pub fn rand_fn(rng: &mut ChaCha8Rng, p: usize, qd: usize, deg: u32, terms: usize, grassmann: bool) -> SuperFunction {
    let mons = Monomial::up_to_degree(p, qd, deg);
    let mut f = SuperFunction::zero(p, qd);
    for _ in 0..rng.gen_range(0..=terms) {
        let m = mons.choose(rng).unwrap().clone();
        let mask = if grassmann && rng.gen_bool(0.3) { rng.gen_range(1u64..16) } else { 0 };
        f.add_term(m, GrassmannNumber::monomial(mask, Gq::int(small(rng))));
    }
    f
}

pub fn rand_homog_fn(rng: &mut ChaCha8Rng, p: usize, qd: usize, parity: u8, deg: u32, grassmann: bool) -> SuperFunction {
    rand_fn(rng, p, qd, deg, 4, grassmann).part(parity)
}

/// Homogeneous vector field of the given parity.
pub fn rand_field(rng: &mut ChaCha8Rng, p: usize, qd: usize, parity: u8, deg: u32, grassmann: bool) -> VectorField {
    let comps = (0..p + qd)
        .map(|z| {
            let ez = (z >= p) as u8;
            rand_fn(rng, p, qd, deg, 2, grassmann).part((parity + ez) % 2)
        })
        .collect();
    VectorField::from_components(p, qd, comps).unwrap()
}

/// Random `k`-form with polynomial coefficients.
pub fn rand_form(rng: &mut ChaCha8Rng, p: usize, qd: usize, k: usize, deg: u32, grassmann: bool) -> Form {
    let mut w = Form::zero(p, qd);
    let n = p + qd;
    if n == 0 {
        return w;
    }
    for _ in 0..rng.gen_range(1..=3) {
        let word: Vec<u16> = (0..k).map(|_| rng.gen_range(0..n) as u16).collect();
        w.add_term(word, rand_fn(rng, p, qd, deg, 2, grassmann));
    }
    w
}

pub fn qv(v: &[i64]) -> Vec<Q> {
    v.iter().map(|&x| q(x)).collect()
}

/// Matrix superalgebra spanned by the elementary matrices `E_ij` with `(i, j)`
/// in `pattern`, for the grading `grading` of the underlying space.
pub fn matrix_algebra(grading: &[u8], pattern: &[(usize, usize)]) -> SuperLieAlgebra {
    let n = pattern.len();
    let par = |(i, j): (usize, usize)| (grading[i] + grading[j]) % 2;
    let parities: Vec<u8> = pattern.iter().map(|&e| par(e)).collect();
    let idx = |e: (usize, usize)| pattern.iter().position(|&x| x == e).expect("pattern is closed");
    let mut c = vec![vec![vec![Q::zero(); n]; n]; n];
    for (a, &(i, j)) in pattern.iter().enumerate() {
        for (b, &(k, l)) in pattern.iter().enumerate() {
            // [E_ij, E_kl] = d_jk E_il - (-1)^{|ij||kl|} d_li E_kj
            if j == k {
                c[a][b][idx((i, l))] += q(1);
            }
            if l == i {
                let s = if parities[a] * parities[b] == 1 { q(-1) } else { q(1) };
                c[a][b][idx((k, j))] -= s;
            }
        }
    }
    SuperLieAlgebra::new(parities, c).unwrap()
}

pub fn gl11() -> SuperLieAlgebra {
    matrix_algebra(&[0, 1], &[(0, 0), (1, 1), (0, 1), (1, 0)])
}

/// Upper triangular supermatrices for the given grading.
pub fn borel(grading: &[u8]) -> SuperLieAlgebra {
    let n = grading.len();
    let pattern: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    matrix_algebra(grading, &pattern)
}

/// Central extension of an abelian `e|o` algebra by a random even graded skew form.
pub fn random_two_step(rng: &mut ChaCha8Rng, e: usize, o: usize) -> SuperLieAlgebra {
    let mut parities = vec![0u8; e];
    parities.extend(vec![1u8; o]);
    let n = e + o;
    parities.extend([0, 1]);
    let mut c = vec![vec![vec![Q::zero(); n + 2]; n + 2]; n + 2];
    for i in 0..n {
        for j in i..n {
            if i == j && parities[i] == 0 {
                continue;
            }
            if rng.gen_bool(0.5) {
                continue;
            }
            let v = q(small(rng));
            let alpha = ((parities[i] + parities[j]) % 2) as usize;
            let sym = parities[i] * parities[j] == 1;
            c[i][j][n + alpha] = v.clone();
            c[j][i][n + alpha] = if sym { v } else { -v };
        }
    }
    SuperLieAlgebra::new(parities, c).unwrap()
}

pub fn direct_sum(a: &SuperLieAlgebra, b: &SuperLieAlgebra) -> SuperLieAlgebra {
    let (n, m) = (a.dim(), b.dim());
    let mut parities = a.parities().to_vec();
    parities.extend_from_slice(b.parities());
    let mut c = vec![vec![vec![Q::zero(); n + m]; n + m]; n + m];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                c[i][j][k] = a.structure(i, j)[k].clone();
            }
        }
    }
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                c[n + i][n + j][n + k] = b.structure(i, j)[k].clone();
            }
        }
    }
    SuperLieAlgebra::new(parities, c).unwrap()
}

/// Parity-preserving random change of basis `f_a = sum_i P_ia e_i`.
pub fn change_basis(rng: &mut ChaCha8Rng, g: &SuperLieAlgebra) -> SuperLieAlgebra {
    let n = g.dim();
    let par = g.parities().to_vec();
    let (p, pinv) = loop {
        let mut m: Matrix = linalg::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                if par[i] == par[j] {
                    m[i][j] = Gq::int(rng.gen_range(-2..=2));
                }
            }
        }
        if let Some(inv) = linalg::inverse(&m) {
            break (m, inv);
        }
    };
    let mut c = vec![vec![vec![Q::zero(); n]; n]; n];
    for a in 0..n {
        for b in 0..n {
            let mut v = vec![Q::zero(); n];
            for i in 0..n {
                for j in 0..n {
                    let s = &p[i][a].re * &p[j][b].re;
                    if s.is_zero() {
                        continue;
                    }
                    for k in 0..n {
                        v[k] += &s * &g.structure(i, j)[k];
                    }
                }
            }
            for m in 0..n {
                c[a][b][m] = (0..n).fold(Q::zero(), |acc, k| acc + &pinv[m][k].re * &v[k]);
            }
        }
    }
    SuperLieAlgebra::new(par, c).unwrap()
}

/// Random algebra of dimension at most `4|4`: a direct sum of known pieces in a
/// random basis.
pub fn random_algebra(rng: &mut ChaCha8Rng) -> SuperLieAlgebra {
    let pieces: Vec<SuperLieAlgebra> = vec![
        gl11(),
        borel(&[0, 0, 1]),
        borel(&[0, 1, 1]),
        matrix_algebra(&[0, 0, 1], &[(0, 1), (0, 2), (1, 2)]),
        random_two_step(rng, 1, 1),
        random_two_step(rng, 2, 2),
        random_two_step(rng, 0, 2),
        SuperLieAlgebra::abelian(vec![0, 1]),
    ];
    let fits = |g: &SuperLieAlgebra, h: &SuperLieAlgebra| {
        let count = |x: &SuperLieAlgebra, e: u8| x.parities().iter().filter(|&&p| p == e).count();
        count(g, 0) + count(h, 0) <= 4 && count(g, 1) + count(h, 1) <= 4
    };
    let mut g = pieces.choose(rng).unwrap().clone();
    if rng.gen_bool(0.5) {
        let h = pieces.choose(rng).unwrap();
        if fits(&g, h) {
            g = direct_sum(&g, h);
        }
    }
    change_basis(rng, &g)
}
