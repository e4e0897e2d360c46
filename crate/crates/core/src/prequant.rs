//! Prequantization on a trivializing chart, with `hbar = 1`.
//!
//! The bundle chart is the base chart with one even fiber coordinate `x`
//! (appended after the even base coordinates) and one odd fiber coordinate `xi`
//! (appended after the odd ones). The connection is
//! `alpha = (theta0 + dx) c0 + (theta1 + dxi) c1`. Sections are stored as
//! functions `s` on the base; the fiber phase `exp(-i x)` is kept implicit.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::charts::{CFunction, Chart, SuperFunction, VectorField};
use crate::error::{Error, Result};
use crate::forms::{double, CForm, Form};
use crate::scalar::{Gq, Q};
use crate::symplectic::{hamiltonian_field, poisson_bracket, Membership};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrequantChart {
    pub base: Chart,
    omega: Form,
    theta: Form,
    pub d: Q,
}

impl PrequantChart {
    /// Chart with symplectic form `d theta`.
    pub fn new(base: Chart, theta: Form, d: Q) -> Result<Self> {
        if theta.dims() != (base.p(), base.q()) {
            return Err(Error::ChartMismatch);
        }
        if !theta.is_zero() && theta.degree() != Some(1) {
            return Err(Error::DegreeMismatch { expected: 1, found: theta.degree().unwrap_or(0) });
        }
        Ok(PrequantChart { omega: theta.d(), base, theta, d })
    }

    /// Like `new`, checking that `d theta` equals the given form.
    pub fn with_omega(base: Chart, omega: Form, theta: Form, d: Q) -> Result<Self> {
        let c = Self::new(base, theta, d)?;
        if c.omega != omega {
            return Err(Error::Invalid(String::from("d theta does not equal omega")));
        }
        Ok(c)
    }

    pub fn omega(&self) -> &Form {
        &self.omega
    }

    pub fn theta(&self) -> &Form {
        &self.theta
    }

    pub fn omega_bar(&self) -> CForm {
        double(&self.omega)
    }

    pub fn base_dims(&self) -> (usize, usize) {
        (self.base.p(), self.base.q())
    }

    pub fn total_dims(&self) -> (usize, usize) {
        (self.base.p() + 1, self.base.q() + 1)
    }

    /// Global index of the even fiber coordinate on the bundle chart.
    pub fn x_index(&self) -> usize {
        self.base.p()
    }

    /// Global index of the odd fiber coordinate on the bundle chart.
    pub fn xi_index(&self) -> usize {
        self.base.p() + 1 + self.base.q()
    }

    pub fn total_chart(&self) -> Chart {
        let mut even = self.base.even.clone();
        even.push(fresh_name(&self.base, "x"));
        let mut odd = self.base.odd.clone();
        odd.push(fresh_name(&self.base, "xi"));
        Chart { even, odd }
    }

    pub fn pullback(&self, f: &SuperFunction) -> SuperFunction {
        let (p, q) = self.total_dims();
        f.extend(p, q)
    }

    pub fn pullback_c(&self, f: &CFunction) -> CFunction {
        let (p, q) = self.total_dims();
        f.extend(p, q)
    }

    pub fn alpha(&self) -> CForm {
        let (p, q) = self.total_dims();
        let th = double(&self.theta);
        CForm::new(
            &th.w0.extend(p, q) + &Form::differential(p, q, self.x_index()),
            &th.w1.extend(p, q) + &Form::differential(p, q, self.xi_index()),
        )
    }
}

fn fresh_name(base: &Chart, stem: &str) -> String {
    let mut name = stem.to_string();
    while base.index_of(&name).is_some() {
        name.push('\'');
    }
    name
}

fn hamiltonian(chart: &PrequantChart, f: &CFunction) -> Result<VectorField> {
    match hamiltonian_field(&chart.omega_bar(), f, None)? {
        Membership::Member(x) => Ok(x),
        Membership::NotMember { obstruction } => {
            Err(Error::NotHamiltonian(obstruction.render(&chart.base)))
        }
        Membership::Inconclusive { degree } => {
            Err(Error::NotHamiltonian(alloc::format!("no hamiltonian field up to degree {}", degree)))
        }
    }
}

/// `eta = X - (f0 + i_X theta0) d/dx - (f1 + i_X theta1) d/dxi` for a given `X`.
pub fn eta_field_with(chart: &PrequantChart, f: &CFunction, x: &VectorField) -> VectorField {
    let (p, q) = chart.total_dims();
    let th = double(&chart.theta);
    let c0 = &f.f0 + &th.w0.contract(x).as_function().expect("contraction of a 1-form");
    let c1 = &f.f1 + &th.w1.contract(x).as_function().expect("contraction of a 1-form");
    let mut eta = x.extend(p, q);
    eta.set_component(chart.x_index(), -chart.pullback(&c0));
    eta.set_component(chart.xi_index(), -chart.pullback(&c1));
    eta
}

pub fn eta_field(chart: &PrequantChart, f: &CFunction) -> Result<VectorField> {
    let x = hamiltonian(chart, f)?;
    Ok(eta_field_with(chart, f, &x))
}

/// `L(Z) alpha = 0` in both components.
pub fn symmetry_check(chart: &PrequantChart, z: &VectorField) -> bool {
    chart.alpha().lie_derivative(z).is_zero()
}

/// `i_eta alpha + pi^* f`, which vanishes for the lift of a Poisson function.
pub fn lift_defect(chart: &PrequantChart, f: &CFunction, eta: &VectorField) -> CForm {
    let c = chart.alpha().contract(eta);
    let pf = chart.pullback_c(f);
    let (p, q) = chart.total_dims();
    &c + &CForm::new(Form::function(pf.f0).extend(p, q), Form::function(pf.f1).extend(p, q))
}

/// `Q(f) s = -i X_f s + (i_{X_f} theta0 + f0) s`.
pub fn quantum_op(chart: &PrequantChart, f: &CFunction, s: &SuperFunction) -> Result<SuperFunction> {
    let x = hamiltonian(chart, f)?;
    Ok(quantum_op_with(chart, f, &x, s))
}

pub fn quantum_op_with(chart: &PrequantChart, f: &CFunction, x: &VectorField, s: &SuperFunction) -> SuperFunction {
    let th0 = double(&chart.theta).w0.contract(x).as_function().expect("contraction of a 1-form");
    let mult = &th0 + &f.f0;
    &x.apply(s).scale(&-Gq::i()) + &(&mult * s)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepReport {
    pub bracket: CFunction,
    /// Indices of sample sections where `[Q(f), Q(g)] s != -i Q({f, g}) s`.
    pub failures: Vec<usize>,
}

impl RepReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks `[Q(f), Q(g)] = -i Q({f, g})` (graded commutator) on sample sections.
pub fn rep_check(chart: &PrequantChart, f: &CFunction, g: &CFunction, sections: &[SuperFunction]) -> Result<RepReport> {
    let w = chart.omega_bar();
    let pf = f.parity().ok_or(Error::NotHomogeneous)?;
    let pg = g.parity().ok_or(Error::NotHomogeneous)?;
    let bracket = poisson_bracket(&w, f, g, None)?;
    let xf = hamiltonian(chart, f)?;
    let xg = hamiltonian(chart, g)?;
    let xb = hamiltonian(chart, &bracket)?;
    let mut failures = Vec::new();
    for (k, s) in sections.iter().enumerate() {
        let qfqg = quantum_op_with(chart, f, &xf, &quantum_op_with(chart, g, &xg, s));
        let qgqf = quantum_op_with(chart, g, &xg, &quantum_op_with(chart, f, &xf, s));
        let lhs = if pf * pg == 1 { &qfqg + &qgqf } else { &qfqg - &qgqf };
        let rhs = quantum_op_with(chart, &bracket, &xb, s).scale(&-Gq::i());
        if lhs != rhs {
            failures.push(k);
        }
    }
    Ok(RepReport { bracket, failures })
}
