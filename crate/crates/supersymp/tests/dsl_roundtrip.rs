use proptest::prelude::*;

use supersymp::dsl::{parse, parse_with, DeclKind, DslError, Kind, Pos, Value};
use supersymp_core::charts::{CFunction, Chart, Monomial, SuperFunction, VectorField};
use supersymp_core::forms::Form;
use supersymp_core::grassmann::GrassmannNumber;
use supersymp_core::scalar::{qf, Gq};

const P: usize = 2;
const Q: usize = 2;

fn chart() -> Chart {
    Chart::new(&["x", "y"], &["xi", "eta"])
}

fn coeff() -> impl Strategy<Value = Gq> {
    (-4i64..=4, 1i64..=3, -2i64..=2).prop_map(|(n, d, im)| Gq::new(qf(if n == 0 { 1 } else { n }, d), qf(im, 1)))
}

fn function() -> impl Strategy<Value = SuperFunction> {
    proptest::collection::vec((0u32..3, 0u32..3, 0u64..4, prop_oneof![3 => Just(0u64), 1 => 1u64..16], coeff()), 0..4)
        .prop_map(|terms| {
            let mut f = SuperFunction::zero(P, Q);
            for (a, b, odd, mask, c) in terms {
                f.add_term(Monomial { exps: vec![a, b], odd }, GrassmannNumber::monomial(mask, c));
            }
            f
        })
}

fn field() -> impl Strategy<Value = VectorField> {
    proptest::collection::vec(function(), P + Q)
        .prop_map(|comps| VectorField::from_components(P, Q, comps).expect("component count"))
}

fn form() -> impl Strategy<Value = Form> {
    proptest::collection::vec((proptest::collection::vec(0u16..4, 0..3), function()), 0..3).prop_map(|terms| {
        let mut w = Form::zero(P, Q);
        for (word, f) in terms {
            w.add_term(word, f);
        }
        w
    })
}

fn value_of(doc: &supersymp::dsl::Document, name: &str) -> Value {
    match &doc.get(name).unwrap().kind {
        DeclKind::Expr { value, .. } => value.clone(),
        other => panic!("{:?}", other),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rendered_values_parse_back(f in function(), x in field(), w in form(), a in function(), b in function()) {
        let c = chart();
        let cf = CFunction::new(a, b);
        let text = format!(
            "chart M even x,y odd xi,eta;\nfn f = {};\nvf X = {};\nform w = {};\ncfn h = {};\n",
            f.render(&c), x.render(&c), w.render(&c), cf.render(&c)
        );
        let doc = parse(&text).map_err(|e| TestCaseError::fail(format!("{}\n{}", e, text)))?;
        prop_assert_eq!(value_of(&doc, "f"), Value::Function(f));
        prop_assert_eq!(value_of(&doc, "X"), Value::Field(x));
        prop_assert_eq!(value_of(&doc, "w"), if w.is_zero() { Value::Form(Form::zero(P, Q)) } else { Value::Form(w) });
        prop_assert_eq!(value_of(&doc, "h"), Value::CFunction(cf));
        let again = parse(&doc.render()).unwrap();
        prop_assert_eq!(&again, &doc);
        prop_assert_eq!(again.render(), doc.render());
    }

    #[test]
    fn grassmann_constants_round_trip(f in function()) {
        let mut g = GrassmannNumber::zero();
        for (m, c) in f.terms() {
            for (mask, v) in c.terms() {
                g = &g + &GrassmannNumber::monomial(*mask | (m.odd << 4), v.clone());
            }
        }
        let text = format!("chart M even x; fn k = {};", g.render());
        let doc = parse_with(&text, 8).map_err(|e| TestCaseError::fail(format!("{}\n{}", e, text)))?;
        prop_assert_eq!(value_of(&doc, "k"), Value::Function(SuperFunction::constant(1, 0, g)));
    }
}

#[test]
fn example_form_has_three_terms() {
    let doc = parse("chart M even x,y odd xi,eta;\nform w = dx^dy + dxi^deta + dx^dxi;").unwrap();
    match value_of(&doc, "w") {
        Value::Form(w) => {
            assert_eq!(w.degree(), Some(2));
            assert_eq!(w.terms().count(), 3);
        }
        v => panic!("{:?}", v),
    }
    assert_eq!(doc.exprs(Kind::Form).count(), 1);
}

#[test]
fn empty_text_is_an_empty_document() {
    assert!(parse("").unwrap().decls.is_empty());
}

#[test]
fn error_positions() {
    let e = parse("chart M even x,y odd xi,eta;\nform w = dx^^dy;").unwrap_err();
    assert!(matches!(e, DslError::Syntax { .. }), "{:?}", e);
    assert_eq!(e.pos(), Pos { line: 2, col: 13 });
    assert!(e.to_string().starts_with("2:13: syntax error"), "{}", e);

    let e = parse("chart M even x;\n\n  fn f = x*q;").unwrap_err();
    assert_eq!(e, DslError::Undefined { pos: Pos { line: 3, col: 12 }, name: String::from("q") });

    let e = parse("chart M even x odd xi;\nvf X : even = xi*d/dx;").unwrap_err();
    assert!(matches!(e, DslError::Parity { pos: Pos { line: 2, col: 8 }, .. }), "{:?}", e);

    let e = parse("heisenberg parities 0,1 omega0 [[0,1],[-1,0]] omega1 [[0,0],[0,0]];").unwrap_err();
    assert!(matches!(e, DslError::Parity { .. }), "{:?}", e);

    let e = parse("chart M even x; fn f = 1/0;").unwrap_err();
    assert!(matches!(e, DslError::Semantic { .. }), "{:?}", e);

    let e = parse("chart M even x; fn f = x;\nfn f = x;").unwrap_err();
    assert_eq!(e.pos().line, 2);
}

#[test]
fn generator_count_is_configurable() {
    assert!(parse_with("chart M even x; fn f = th8;", 8).is_ok());
    assert!(parse_with("chart M even x; fn f = th8;", 6).is_err());
}

#[test]
fn charts_are_scoped() {
    let doc = parse("chart A even x; fn f = x; chart B even u; fn g = u^2;").unwrap();
    assert!(parse("chart A even x; fn f = x; chart B even u; fn g = f;").is_err());
    assert_eq!(doc.last_chart(), Some(2));
}
