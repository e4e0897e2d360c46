//! Worked examples recomputed from their defining data and compared with the
//! published values.

use serde_json::Value;

use supersymp_core::charts::{CFunction, SuperFunction, VectorField};
use supersymp_core::forms::{double, Form};
use supersymp_core::grassmann::GrassmannNumber;
use supersymp_core::heisenberg::{
    algebra_of, coad, fundamental_coefficients, group_mul, kks_form, momentum_check, orbit_classify, GroupElement,
    HeisenbergSpec, OrbitKind, OrbitPoint,
};
use supersymp_core::liecoh::{cochain_basis, pullback_class, CeCochain};
use supersymp_core::prequant::{eta_field, quantum_op, symmetry_check, PrequantChart};
use supersymp_core::scalar::{q, q_str, qf, Gq, Q};
use supersymp_core::symplectic::{
    coefficients_at, darboux_normal_form, hamiltonian_field, is_symplectic, poisson_bracket, DarbouxKind,
    Membership,
};

use crate::dsl::{self, DeclKind, Document, Value as DslValue};
use crate::report::{CliError, CliResult, Check, Report, Verdict};

pub const COUNTEREXAMPLE: &str = include_str!("../fixtures/counterexample.ss");
pub const MIXED21: &str = include_str!("../fixtures/mixed21.ss");
pub const EVEN_PLANE: &str = include_str!("../fixtures/even_plane.ss");
pub const HEISENBERG33: &str = include_str!("../fixtures/heisenberg33.ss");
pub const ODD01: &str = include_str!("../fixtures/odd01.ss");

pub const SECTIONS: &[&str] = &["section3", "section6", "section7", "section9"];

pub fn verify(section: &str) -> CliResult<Report> {
    let checks = match section {
        "section3" => section3()?,
        "section6" => section6()?,
        "section7" => section7()?,
        "section9" => section9()?,
        "all" => {
            let mut v = section3()?;
            v.extend(section6()?);
            v.extend(section7()?);
            v.extend(section9()?);
            v
        }
        other => {
            return Err(CliError::Input(format!(
                "unknown section `{}`; available: {}, all",
                other,
                SECTIONS.join(", ")
            )))
        }
    };
    let failed: Vec<Value> = checks.iter().filter(|c| !c.pass).map(|c| Value::from(c.name.clone())).collect();
    let verdict = Verdict::from_bool(failed.is_empty());
    Ok(Report::new(format!("verify-paper {}", section), verdict)
        .with("passed", checks.len() - failed.len())
        .with("failed", failed)
        .with("checks", checks.iter().map(Check::to_json).collect::<Vec<_>>()))
}

fn doc(text: &str) -> CliResult<Document> {
    dsl::parse(text).map_err(|e| CliError::Dsl { path: String::from("<fixture>"), source: e })
}

fn get<'a>(d: &'a Document, name: &str) -> &'a DslValue {
    match &d.get(name).expect("fixture declaration").kind {
        DeclKind::Expr { value, .. } => value,
        other => panic!("{} is not an expression: {:?}", name, other),
    }
}

fn form(d: &Document, name: &str) -> Form {
    match get(d, name) {
        DslValue::Form(w) => w.clone(),
        v => panic!("{} is not a form: {:?}", name, v),
    }
}

fn field(d: &Document, name: &str) -> VectorField {
    match get(d, name) {
        DslValue::Field(x) => x.clone(),
        v => panic!("{} is not a vector field: {:?}", name, v),
    }
}

fn cfn(d: &Document, name: &str) -> CFunction {
    match get(d, name) {
        DslValue::CFunction(f) => f.clone(),
        v => panic!("{} is not a C-valued function: {:?}", name, v),
    }
}

/// Canonical rendering of an expression on the first chart of `d`.
fn expect(d: &Document, text: &str) -> CliResult<String> {
    let c = d.chart_at(0);
    Ok(dsl::render_value(&d.eval(text, 0)?, c))
}

fn section3() -> CliResult<Vec<Check>> {
    let s = "3";
    let mut out = Vec::new();
    let d = doc(COUNTEREXAMPLE)?;
    let chart = d.chart_at(0).clone();
    let w = form(&d, "w");
    let x = field(&d, "X");
    let y = field(&d, "Y");
    let r = |w: &Form| w.render(&chart);
    let (p, qd) = (chart.p(), chart.q());

    out.push(Check::eq(s, "example form parses to a 2-form with 3 terms", "2-form, 3 terms", {
        format!("{}-form, {} terms", w.degree().unwrap_or(0), w.terms().count())
    }));
    for (coord, want) in [("y", "-dx"), ("xi", "deta - dx"), ("eta", "dxi")] {
        let b = VectorField::basis(p, qd, chart.index_of(coord).expect("coordinate"));
        out.push(Check::eq(s, &format!("i_(d/d{}) w", coord), expect(&d, want)?, r(&w.contract(&b))));
    }
    let rep = is_symplectic(&w, &[vec![q(0), q(0)], vec![q(1), q(2)]])?;
    out.push(Check::holds(s, "2|2 form is closed and non-degenerate", rep.is_symplectic()));
    out.push(Check::eq(s, "i_X w = d(y^2)", expect(&d, "d(y^2)")?, r(&w.contract(&x))));
    out.push(Check::eq(s, "i_Y w = d(eta*xi)", expect(&d, "d(eta*xi)")?, r(&w.contract(&y))));
    out.push(Check::eq(s, "L(X) w = 0", "0", r(&w.lie_derivative(&x))));
    let br = x.commutator(&y);
    out.push(Check::eq(
        s,
        "[X,Y] = -2*xi*d/dx - 2*y*d/deta - 2*xi*d/deta",
        expect(&d, "-2*xi*d/dx - 2*y*d/deta - 2*xi*d/deta")?,
        br.render(&chart),
    ));
    let ib = w.contract(&br);
    out.push(Check::eq(s, "i_[X,Y] w = d(y*xi) + 2*xi*dxi", expect(&d, "d(y*xi) + 2*xi*dxi")?, r(&ib)));
    out.push(Check::eq(s, "d(i_[X,Y] w) = 2*dxi^dxi", expect(&d, "2*dxi^dxi")?, r(&ib.d())));
    out.push(Check::holds(s, "i_[X,Y] w is not closed", !ib.d().is_zero()));

    let m = doc(MIXED21)?;
    let mc = m.chart_at(0).clone();
    let w21 = form(&m, "w");
    let parts = double(&w21);
    out.push(Check::eq(s, "2|1 form: part0 = dx^dy", expect(&m, "dx^dy")?, parts.w0.render(&mc)));
    out.push(Check::eq(s, "2|1 form: part1 = dx^dxi", expect(&m, "dx^dxi")?, parts.w1.render(&mc)));
    let rep = is_symplectic(&w21, &[vec![q(0), q(0)], vec![q(1), q(-1)]])?;
    out.push(Check::holds(
        s,
        "2|1 form is degenerate but homogeneously non-degenerate",
        !rep.is_symplectic() && rep.is_homogeneously_symplectic(),
    ));
    let y2 = CFunction::new(SuperFunction::coord(2, 1, 1).pow(2), SuperFunction::zero(2, 1));
    let nm = matches!(hamiltonian_field(&parts, &y2, None)?, Membership::NotMember { .. });
    out.push(Check::holds(s, "y^2*c0 is not in the Poisson algebra", nm));

    let (f, g, h) = (cfn(&m, "f"), cfn(&m, "g"), cfn(&m, "h"));
    let members = [&f, &g, &h].iter().all(|k| {
        matches!(hamiltonian_field(&parts, k, None), Ok(Membership::Member(_)))
    });
    out.push(Check::holds(s, "f, g, h are in the Poisson algebra", members));
    let pb = |a: &CFunction, b: &CFunction| poisson_bracket(&parts, a, b, None);
    let (ef, eg) = (f.parity().unwrap_or(0), g.parity().unwrap_or(0));
    let lhs = pb(&f, &pb(&g, &h)?)?;
    let mut rhs = pb(&pb(&f, &g)?, &h)?;
    let t = pb(&g, &pb(&f, &h)?)?;
    rhs = if ef * eg == 1 { &rhs - &t } else { &rhs + &t };
    out.push(Check::eq(s, "graded Jacobi identity on f, g, h", lhs.render(&mc), rhs.render(&mc)));

    let o = doc(ODD01)?;
    let w01 = form(&o, "w");
    let res = darboux_normal_form(&coefficients_at(&w01, &[]), &[1])?;
    let got = match res.kind {
        DarbouxKind::Even { pairs, ell, odd } => format!("pairs={} ell={} odd={}", pairs, ell, odd),
        DarbouxKind::Odd { n } => format!("odd form n={}", n),
    };
    out.push(Check::eq(s, "0|1 form -dxi^dxi has signature ell = 0", "pairs=0 ell=0 odd=1", got));
    Ok(out)
}

fn heisenberg_spec() -> CliResult<HeisenbergSpec> {
    let d = doc(HEISENBERG33)?;
    let spec = d.heisenbergs().next().map(|(_, h)| h.clone());
    spec.ok_or_else(|| CliError::Input(String::from("fixture has no heisenberg declaration")))
}

fn section6() -> CliResult<Vec<Check>> {
    let spec = heisenberg_spec()?;
    let mut out = Vec::new();
    for (y0, y1) in [(1, 0), (0, 1), (1, 1)] {
        let mu = OrbitPoint::real(&spec, &[q(1), q(-2), q(0), q(3), q(1), q(2)], q(y0), q(y1))?;
        let rep = momentum_check(&spec, &mu)?;
        out.push(Check::holds(
            "6",
            &format!("J(mu) = mu is strongly hamiltonian (y0 = {}, ybar1 = {})", y0, y1),
            rep.is_strongly_hamiltonian(),
        ));
    }
    Ok(out)
}

fn bracket_table(n: usize, value: impl Fn(usize, usize) -> (Q, Q)) -> String {
    let mut rows = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let (a, b) = value(i, j);
            for (v, c) in [(a, "c0"), (b, "c1")] {
                if v != q(0) {
                    rows.push(format!("[e{},e{}] = {}*{}", i + 1, j + 1, q_str(&v), c));
                }
            }
        }
    }
    rows.join(", ")
}

fn g(x: &Q) -> GrassmannNumber {
    GrassmannNumber::scalar(Gq::real(x.clone()))
}

fn gen(k: usize) -> GrassmannNumber {
    GrassmannNumber::generator(k + 1, 6).expect("generator index below 6")
}

fn section7() -> CliResult<Vec<Check>> {
    let s = "7";
    let spec = heisenberg_spec()?;
    let n = spec.n();
    let mut out = Vec::new();

    // <e_i, e_j> Omega is the entry in row j, column i of the displayed matrix
    let rows: Vec<Vec<i64>> = vec![
        vec![0, 1, 0, 1, 0, 0],
        vec![-1, 0, 0, 0, 0, 0],
        vec![0, 0, 0, 0, 1, 0],
        vec![-1, 0, 0, 0, 0, 0],
        vec![0, 0, -1, 0, 1, 0],
        vec![0, 0, 0, 0, 0, -1],
    ];
    let alg = algebra_of(&spec);
    let par = spec.parities();
    let want = bracket_table(n, |i, j| {
        let v = q(rows[j][i]);
        if (par[i] + par[j]) % 2 == 0 {
            (v, q(0))
        } else {
            (q(0), v)
        }
    });
    let got = bracket_table(n, |i, j| (alg.structure(i, j)[n].clone(), alg.structure(i, j)[n + 1].clone()));
    out.push(Check::eq(s, "brackets [e_i,e_j] = <e_i,e_j>Omega^a c_a read off the matrix", want, got));

    let a: Vec<GrassmannNumber> = vec![g(&q(2)), g(&q(-1)), g(&qf(1, 2)), gen(0), gen(1), gen(2)];
    let b = [&g(&q(3)) + &(&gen(3) * &gen(4)), gen(5)];
    let el = GroupElement::new(&spec, a.clone(), b.clone())?;
    let neg: Vec<GrassmannNumber> = a.iter().map(|x| -x.clone()).collect();
    let inv = GroupElement::new(&spec, neg, [-b[0].clone(), -b[1].clone()])?;
    out.push(Check::holds(s, "(a,b)(-a,-b) = (0,0)", group_mul(&spec, &el, &inv) == GroupElement::identity(n)));

    let (y0, y1) = (q(2), q(3));
    let vals = [q(1), q(-2), q(5), q(3), q(-1), q(4)];
    let mu = OrbitPoint::real(&spec, &vals, y0.clone(), y1.clone())?;
    let ga = GroupElement::new(&spec, a.clone(), [GrassmannNumber::zero(), GrassmannNumber::zero()])?;
    let moved = coad(&spec, &ga, &mu);
    // (coordinate, is bar, sign, y, index of a)
    let rules: [(usize, bool, i64, &Q, usize); 8] = [
        (1, false, -1, &y0, 2),
        (2, false, 1, &y0, 1),
        (5, false, 1, &y0, 5),
        (6, false, -1, &y0, 6),
        (1, true, -1, &y1, 4),
        (3, true, -1, &y1, 5),
        (4, true, 1, &y1, 1),
        (5, true, 1, &y1, 3),
    ];
    let mut want = Vec::new();
    let mut got = Vec::new();
    for bar in [false, true] {
        for i in 1..=n {
            let before = if bar { &mu.xbar[i - 1] } else { &mu.x[i - 1] };
            let mut w = before.clone();
            if let Some(&(_, _, sg, y, k)) = rules.iter().find(|r| r.0 == i && r.1 == bar) {
                w = &w + &a[k - 1].scale(&Gq::real(y * q(sg)));
            }
            let name = format!("{}{}", if bar { "xbar" } else { "x" }, i);
            want.push(format!("{} -> {}", name, w.render()));
            let after = if bar { &moved.xbar[i - 1] } else { &moved.x[i - 1] };
            got.push(format!("{} -> {}", name, after.render()));
        }
    }
    out.push(Check::eq(s, "coadjoint action on the coordinates", want.join(", "), got.join(", ")));

    // y0 (v2 d/dx1 - v1 d/dx2 - v5 d/dx5 + v6 d/dx6) + ybar1 (v4 d/dxbar1 + v5 d/dxbar3 - v1 d/dxbar4 - v3 d/dxbar5)
    let mut ok = true;
    for k in 0..n {
        let mut v = vec![q(0); n];
        v[k] = q(1);
        let mut expect = vec![q(0); 2 * n];
        let e = |i: usize| v[i - 1].clone();
        expect[0] = &y0 * e(2);
        expect[1] = -(&y0 * e(1));
        expect[4] = -(&y0 * e(5));
        expect[5] = &y0 * e(6);
        expect[n] = &y1 * e(4);
        expect[n + 2] = &y1 * e(5);
        expect[n + 3] = -(&y1 * e(1));
        expect[n + 4] = -(&y1 * e(3));
        ok &= fundamental_coefficients(&spec, &v, &y0, &y1) == expect;
    }
    out.push(Check::holds(s, "fundamental vector fields of e_1..e_6", ok));
    let mut e2 = vec![q(0); n];
    e2[1] = q(1);
    let f2 = fundamental_coefficients(&spec, &e2, &q(1), &q(0));
    let nz: Vec<String> = f2.iter().enumerate().filter(|(_, c)| **c != q(0)).map(|(i, c)| format!("{}:{}", i, q_str(c))).collect();
    out.push(Check::eq(s, "fundamental field of e_2 at y0 = 1 is d/dx1", "0:1", nz.join(",")));

    let zero = vec![q(0); n];
    let cases: [(i64, i64, OrbitKind, &str, &str); 4] = [
        (1, 0, OrbitKind::CaseI, "x1,x2|xi5,xi6", "dx1^dx2 + 1/2*dxi5^dxi5 - 1/2*dxi6^dxi6"),
        (0, 1, OrbitKind::CaseII, "xbar4,xbar5|xibar1,xibar3", "dxibar1^dxbar4 + dxibar3^dxbar5"),
        (
            1,
            1,
            OrbitKind::CaseIII,
            "x1,x2,xbar5|xi5,xi6,xibar1",
            "dx1^dx2 + dxibar1^dx2 + dxbar5^dxi5 + 1/2*dxi5^dxi5 - 1/2*dxi6^dxi6",
        ),
        (0, 0, OrbitKind::Trivial, "|", ""),
    ];
    for (a0, a1, kind, chart_text, form_text) in cases {
        let mu = OrbitPoint::real(&spec, &zero, q(a0), q(a1))?;
        let orbit = orbit_classify(&spec, &mu)?;
        let (p, qd) = orbit.dims();
        let tag = format!("y0 = {}, ybar1 = {}", a0, a1);
        out.push(Check::eq(
            s,
            &format!("orbit type and chart ({})", tag),
            format!("{} {}", kind.name(), chart_text),
            format!("{} {}|{}", orbit.kind.name(), orbit.chart.even.join(","), orbit.chart.odd.join(",")),
        ));
        if kind == OrbitKind::Trivial {
            out.push(Check::eq(s, "trivial orbit has dimension 0|0", "0|0", format!("{}|{}", p, qd)));
            continue;
        }
        let (orbit, w) = kks_form(&spec, &mu)?;
        let text = format!(
            "chart O even {} odd {}; form w = {};",
            orbit.chart.even.join(","),
            orbit.chart.odd.join(","),
            form_text
        );
        let od = doc(&text)?;
        out.push(Check::eq(s, &format!("orbit symplectic form ({})", tag), form(&od, "w").render(&orbit.chart), w.render(&orbit.chart)));
        let rep = is_symplectic(&w, &[vec![q(0); p]])?;
        let expect_combined = kind != OrbitKind::CaseIII;
        out.push(Check::holds(
            s,
            &format!("orbit form is homogeneously non-degenerate, combined pairing non-degenerate = {} ({})", expect_combined, tag),
            rep.is_homogeneously_symplectic() && rep.is_symplectic() == expect_combined,
        ));
        if kind == OrbitKind::CaseIII {
            out.push(Check::eq(
                s,
                "case iii invariants y0*xbar4 - ybar1*x2 and y0*xibar3 + ybar1*xi5",
                "xibar3 + xi5; xbar4 - x2",
                orbit.invariants(&spec).join("; "),
            ));
        }
    }

    let mu = OrbitPoint::real(&spec, &vals, y0.clone(), y1.clone())?;
    let pc = pullback_class(&alg, &mu.as_cochain(&spec));
    let mut want = CeCochain::zero(alg.parities(), 2);
    for idx in cochain_basis(alg.parities(), 2) {
        if idx.iter().all(|&i| i < n) {
            let v = &y0 * spec.omega(0, idx[0], idx[1]) + &y1 * spec.omega(1, idx[0], idx[1]);
            want.set(&idx, v)?;
        }
    }
    out.push(Check::holds(s, "pullback class of mu is y0*Omega0 + ybar1*Omega1", pc == want));
    Ok(out)
}

fn section9() -> CliResult<Vec<Check>> {
    let s = "9";
    let mut out = Vec::new();
    for text in [EVEN_PLANE, MIXED21] {
        let d = doc(text)?;
        let base = d.chart_at(0).clone();
        let (p, qd) = (base.p(), base.q());
        let chart = PrequantChart::with_omega(base.clone(), form(&d, "w"), form(&d, "theta"), q(1))?;
        let tag = format!("{}|{} chart", p, qd);
        let one_c0 = CFunction::new(SuperFunction::one(p, qd), SuperFunction::zero(p, qd));
        let eta = eta_field(&chart, &one_c0)?;
        let (tp, tq) = chart.total_dims();
        let total = chart.total_chart();
        out.push(Check::eq(
            s,
            &format!("eta(1*c0) = -d/dx on the fiber ({})", tag),
            (-VectorField::basis(tp, tq, chart.x_index())).render(&total),
            eta.render(&total),
        ));
        let mut members = vec![CFunction::new(SuperFunction::coord(p, qd, 0), SuperFunction::zero(p, qd))];
        if qd > 0 {
            members.extend([cfn(&d, "f"), cfn(&d, "g"), cfn(&d, "h")]);
        }
        let mut ok = true;
        for f in &members {
            ok &= symmetry_check(&chart, &eta_field(&chart, f)?);
        }
        out.push(Check::holds(s, &format!("eta_f preserves the connection ({})", tag), ok));
        let sections = [
            SuperFunction::one(p, qd),
            &SuperFunction::coord(p, qd, 0).pow(2) + &SuperFunction::coord(p, qd, 1).scale(&Gq::i()),
        ];
        let r = Gq::new(qf(-5, 2), q(1));
        let rc0 = CFunction::new(SuperFunction::scalar(p, qd, r.clone()), SuperFunction::zero(p, qd));
        let rc1 = CFunction::new(SuperFunction::zero(p, qd), SuperFunction::scalar(p, qd, r.clone()));
        let mut id_ok = true;
        let mut zero_ok = true;
        for sec in &sections {
            id_ok &= quantum_op(&chart, &rc0, sec)? == sec.scale(&r);
            zero_ok &= quantum_op(&chart, &rc1, sec)?.is_zero();
        }
        out.push(Check::holds(s, &format!("Q(r*c0) = r*id ({})", tag), id_ok));
        out.push(Check::holds(s, &format!("Q(r*c1) = 0 on xi-independent sections ({})", tag), zero_ok));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_parse() {
        for t in [COUNTEREXAMPLE, MIXED21, EVEN_PLANE, HEISENBERG33, ODD01] {
            doc(t).unwrap();
        }
    }

    #[test]
    fn unknown_section_is_an_error() {
        assert!(verify("section42").is_err());
    }

    #[test]
    fn sections_other_than_three_verify() {
        for s in ["section6", "section7", "section9"] {
            let r = verify(s).unwrap();
            assert_eq!(r.verdict, Verdict::Verified, "{}", serde_json::to_string_pretty(&r.to_json()).unwrap());
        }
    }
}
