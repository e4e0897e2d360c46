//! Declaration language for charts, functions, fields, forms, algebras,
//! Heisenberg data and covers.
//!
//! ```text
//! chart M even x,y odd xi,eta;
//! fn f = y^2 + xi*eta;
//! cfn h : even = (x^2 + y*x)*c0 + xi*x*c1;
//! vf X = 2*y*d/dx - 2*y*d/deta;
//! form w = dx^dy + dxi^deta + dx^dxi;
//! algebra g parities 0,0,1 bracket [1,2] = e3;
//! heisenberg H parities 0,1 omega0 [[0,0],[0,0]] omega1 [[0,1],[-1,0]];
//! cover K { simplex 0 1 2; f 0 1 = 3/2; d = 3; }
//! ```

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use supersymp_core::charts::{CFunction, Chart, SuperFunction, VectorField};
use supersymp_core::forms::Form;
use supersymp_core::grassmann::GrassmannNumber;
use supersymp_core::heisenberg::HeisenbergSpec;
use supersymp_core::liecoh::SuperLieAlgebra;
use supersymp_core::scalar::{q_str, Gq, Q};

use crate::cover::{CoverData, CoverLine};

pub const DEFAULT_GENERATORS: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DslError {
    #[error("{pos}: syntax error: {msg}")]
    Syntax { pos: Pos, msg: String },
    #[error("{pos}: undefined identifier `{name}`")]
    Undefined { pos: Pos, name: String },
    #[error("{pos}: parity mismatch: {msg}")]
    Parity { pos: Pos, msg: String },
    #[error("{pos}: {msg}")]
    Semantic { pos: Pos, msg: String },
}

impl DslError {
    pub fn pos(&self) -> Pos {
        match self {
            DslError::Syntax { pos, .. }
            | DslError::Undefined { pos, .. }
            | DslError::Parity { pos, .. }
            | DslError::Semantic { pos, .. } => *pos,
        }
    }
}

type PResult<T> = Result<T, DslError>;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Sym(char),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{}`", s),
            Tok::Int(n) => write!(f, "`{}`", n),
            Tok::Sym(c) => write!(f, "`{}`", c),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

fn lex(text: &str) -> PResult<Vec<(Tok, Pos)>> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            out.push((Tok::Int(s.parse().expect("digits")), pos));
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                i += 1;
            }
            col += i - start;
            out.push((Tok::Ident(chars[start..i].iter().collect()), pos));
            continue;
        }
        if "+-*/^=;,:()[]{}".contains(c) {
            out.push((Tok::Sym(c), pos));
            i += 1;
            col += 1;
            continue;
        }
        return Err(DslError::Syntax { pos, msg: format!("unexpected character `{}`", c) });
    }
    out.push((Tok::Eof, Pos { line, col }));
    Ok(out)
}

/// Value of an expression.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Function(SuperFunction),
    CFunction(CFunction),
    Field(VectorField),
    Form(Form),
    /// The bare symbol `c0` or `c1`.
    Unit(u8),
}

impl Value {
    fn kind(&self) -> &'static str {
        match self {
            Value::Function(_) => "function",
            Value::CFunction(_) => "C-valued function",
            Value::Field(_) => "vector field",
            Value::Form(_) => "form",
            Value::Unit(_) => "c0/c1 symbol",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Fn,
    CFn,
    Vf,
    Form,
}

impl Kind {
    fn keyword(self) -> &'static str {
        match self {
            Kind::Fn => "fn",
            Kind::CFn => "cfn",
            Kind::Vf => "vf",
            Kind::Form => "form",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DeclKind {
    Chart(Chart),
    /// Expression declaration on the chart declared at index `chart`.
    Expr { kind: Kind, chart: usize, value: Value },
    Algebra(SuperLieAlgebra),
    Heisenberg(HeisenbergSpec),
    Cover(CoverData),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decl {
    pub name: String,
    pub kind: DeclKind,
}

#[derive(Clone, Debug)]
pub struct Document {
    pub decls: Vec<Decl>,
    /// Start of each declaration.
    pub spans: Vec<Pos>,
    pub generators: usize,
}

impl PartialEq for Document {
    fn eq(&self, o: &Self) -> bool {
        self.decls == o.decls
    }
}

impl Document {
    pub fn get(&self, name: &str) -> Option<&Decl> {
        self.decls.iter().find(|d| d.name == name)
    }

    fn index(&self, name: &str) -> Option<usize> {
        self.decls.iter().position(|d| d.name == name)
    }

    pub fn chart_at(&self, idx: usize) -> &Chart {
        match &self.decls[idx].kind {
            DeclKind::Chart(c) => c,
            _ => panic!("declaration {} is not a chart", idx),
        }
    }

    /// Index of the last chart declaration.
    pub fn last_chart(&self) -> Option<usize> {
        self.decls.iter().rposition(|d| matches!(d.kind, DeclKind::Chart(_)))
    }

    /// Expression declarations of the given kind, in order.
    pub fn exprs(&self, kind: Kind) -> impl Iterator<Item = (&str, usize, &Value)> {
        self.decls.iter().filter_map(move |d| match &d.kind {
            DeclKind::Expr { kind: k, chart, value } if *k == kind => Some((d.name.as_str(), *chart, value)),
            _ => None,
        })
    }

    pub fn algebras(&self) -> impl Iterator<Item = (&str, &SuperLieAlgebra)> {
        self.decls.iter().filter_map(|d| match &d.kind {
            DeclKind::Algebra(a) => Some((d.name.as_str(), a)),
            _ => None,
        })
    }

    pub fn heisenbergs(&self) -> impl Iterator<Item = (&str, &HeisenbergSpec)> {
        self.decls.iter().filter_map(|d| match &d.kind {
            DeclKind::Heisenberg(h) => Some((d.name.as_str(), h)),
            _ => None,
        })
    }

    pub fn covers(&self) -> impl Iterator<Item = (&str, &CoverData)> {
        self.decls.iter().filter_map(|d| match &d.kind {
            DeclKind::Cover(c) => Some((d.name.as_str(), c)),
            _ => None,
        })
    }

    /// Evaluates an expression on the chart at index `chart`, with the
    /// declarations of this document in scope.
    pub fn eval(&self, text: &str, chart: usize) -> PResult<Value> {
        let toks = lex(text)?;
        let mut p = Parser { toks, at: 0, doc: self.clone_scope(), chart: Some(chart) };
        let v = p.expr()?;
        p.expect_eof()?;
        Ok(v)
    }

    fn clone_scope(&self) -> Document {
        Document { decls: self.decls.clone(), spans: self.spans.clone(), generators: self.generators }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for d in &self.decls {
            out.push_str(&render_decl(self, d));
            out.push('\n');
        }
        out
    }
}

fn render_decl(doc: &Document, d: &Decl) -> String {
    match &d.kind {
        DeclKind::Chart(c) => {
            let mut s = format!("chart {}", d.name);
            if !c.even.is_empty() {
                s.push_str(&format!(" even {}", c.even.join(",")));
            }
            if !c.odd.is_empty() {
                s.push_str(&format!(" odd {}", c.odd.join(",")));
            }
            s.push(';');
            s
        }
        DeclKind::Expr { kind, chart, value } => {
            let c = doc.chart_at(*chart);
            format!("{} {} = {};", kind.keyword(), d.name, render_value(value, c))
        }
        DeclKind::Algebra(g) => {
            let n = g.dim();
            let pars: Vec<String> = g.parities().iter().map(|p| p.to_string()).collect();
            let mut br = Vec::new();
            for i in 0..n {
                for j in i..n {
                    let v = g.structure(i, j);
                    if v.iter().any(|x| !x.is_zero()) {
                        br.push(format!("[{},{}] = {}", i + 1, j + 1, render_lin(v)));
                    }
                }
            }
            let mut s = format!("algebra {} parities {}", d.name, pars.join(","));
            if !br.is_empty() {
                s.push_str(" bracket ");
                s.push_str(&br.join(", "));
            }
            s.push(';');
            s
        }
        DeclKind::Heisenberg(h) => {
            let pars: Vec<String> = h.parities().iter().map(|p| p.to_string()).collect();
            format!(
                "heisenberg {} parities {} omega0 {} omega1 {};",
                d.name,
                pars.join(","),
                render_matrix(h.omega_matrix(0)),
                render_matrix(h.omega_matrix(1))
            )
        }
        DeclKind::Cover(c) => {
            let body: Vec<String> = c.lines().iter().map(|l| format!("{};", l)).collect();
            format!("cover {} {{ {} }}", d.name, body.join(" "))
        }
    }
}

pub fn render_value(v: &Value, c: &Chart) -> String {
    match v {
        Value::Function(f) => f.render(c),
        Value::CFunction(f) => f.render(c),
        Value::Field(x) => x.render(c),
        Value::Form(w) => w.render(c),
        Value::Unit(a) => format!("c{}", a),
    }
}

fn render_lin(v: &[Q]) -> String {
    let mut s = String::new();
    for (k, x) in v.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        let neg = x < &Q::zero();
        let m = if neg { -x.clone() } else { x.clone() };
        let term = if m.is_one() { format!("e{}", k + 1) } else { format!("{}*e{}", q_str(&m), k + 1) };
        if s.is_empty() {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        s.push_str(&term);
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

pub fn render_matrix(m: &[Vec<Q>]) -> String {
    let rows: Vec<String> =
        m.iter().map(|r| format!("[{}]", r.iter().map(q_str).collect::<Vec<_>>().join(","))).collect();
    format!("[{}]", rows.join(","))
}

const RESERVED: &[&str] = &["i", "d", "c0", "c1"];

fn is_generator_name(s: &str) -> Option<usize> {
    s.strip_prefix("th").and_then(|r| if r.is_empty() { None } else { r.parse().ok() })
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    doc: Document,
    chart: Option<usize>,
}

pub fn parse(text: &str) -> PResult<Document> {
    parse_with(text, DEFAULT_GENERATORS)
}

/// Parses with `generators` Grassmann generators `th1..thN` available.
pub fn parse_with(text: &str, generators: usize) -> PResult<Document> {
    let toks = lex(text)?;
    let mut p = Parser { toks, at: 0, doc: Document { decls: Vec::new(), spans: Vec::new(), generators }, chart: None };
    while p.peek() != &Tok::Eof {
        p.statement()?;
    }
    Ok(p.doc)
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn syntax<T>(&self, msg: impl Into<String>) -> PResult<T> {
        Err(DslError::Syntax { pos: self.pos(), msg: msg.into() })
    }

    fn unexpected<T>(&self, wanted: &str) -> PResult<T> {
        self.syntax(format!("expected {}, found {}", wanted, self.peek()))
    }

    fn eat_sym(&mut self, c: char) -> bool {
        if self.peek() == &Tok::Sym(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, c: char) -> PResult<()> {
        if self.eat_sym(c) {
            Ok(())
        } else {
            self.unexpected(&format!("`{}`", c))
        }
    }

    fn eat_kw(&mut self, kw: &str) -> bool {
        if matches!(self.peek(), Tok::Ident(s) if s == kw) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect_eof(&self) -> PResult<()> {
        if self.peek() == &Tok::Eof {
            Ok(())
        } else {
            self.unexpected("end of input")
        }
    }

    fn ident(&mut self) -> PResult<(String, Pos)> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                let p = self.pos();
                self.bump();
                Ok((s, p))
            }
            _ => self.unexpected("identifier"),
        }
    }

    fn usize_lit(&mut self) -> PResult<usize> {
        match self.peek().clone() {
            Tok::Int(n) => {
                let p = self.pos();
                self.bump();
                usize::try_from(n).map_err(|_| DslError::Syntax { pos: p, msg: String::from("integer too large") })
            }
            _ => self.unexpected("integer"),
        }
    }

    /// `[-] int [/ int]`
    fn rational(&mut self) -> PResult<Q> {
        let neg = self.eat_sym('-');
        let num = match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                n
            }
            _ => return self.unexpected("number"),
        };
        let mut v = Q::from_integer(num);
        if self.eat_sym('/') {
            let p = self.pos();
            match self.peek().clone() {
                Tok::Int(d) if !d.is_zero() => {
                    self.bump();
                    v /= Q::from_integer(d);
                }
                Tok::Int(_) => return Err(DslError::Semantic { pos: p, msg: String::from("division by zero") }),
                _ => return self.unexpected("denominator"),
            }
        }
        Ok(if neg { -v } else { v })
    }

    fn declare(&mut self, name: String, pos: Pos, kind: DeclKind) -> PResult<()> {
        if self.doc.index(&name).is_some() {
            return Err(DslError::Semantic { pos, msg: format!("`{}` is already declared", name) });
        }
        self.doc.decls.push(Decl { name, kind });
        self.doc.spans.push(pos);
        Ok(())
    }

    fn statement(&mut self) -> PResult<()> {
        let start = self.pos();
        let (kw, _) = self.ident().or_else(|_| self.unexpected("declaration keyword"))?;
        match kw.as_str() {
            "chart" => self.chart_decl(start),
            "fn" => self.expr_decl(Kind::Fn, start),
            "cfn" => self.expr_decl(Kind::CFn, start),
            "vf" => self.expr_decl(Kind::Vf, start),
            "form" => self.expr_decl(Kind::Form, start),
            "algebra" => self.algebra_decl(start),
            "heisenberg" => self.heisenberg_decl(start),
            "cover" => self.cover_decl(start),
            _ => Err(DslError::Syntax { pos: start, msg: format!("unknown declaration `{}`", kw) }),
        }
    }

    fn name_list(&mut self) -> PResult<Vec<(String, Pos)>> {
        let mut v = vec![self.ident()?];
        while self.eat_sym(',') {
            v.push(self.ident()?);
        }
        Ok(v)
    }

    fn chart_decl(&mut self, start: Pos) -> PResult<()> {
        let (name, _) = self.ident()?;
        let mut even = Vec::new();
        let mut odd = Vec::new();
        if self.eat_kw("even") {
            even = self.name_list()?;
        }
        if self.eat_kw("odd") {
            odd = self.name_list()?;
        }
        self.expect_sym(';')?;
        let mut seen = HashMap::new();
        for (n, p) in even.iter().chain(&odd) {
            if RESERVED.contains(&n.as_str()) || is_generator_name(n).is_some() || n.starts_with('d') {
                return Err(DslError::Semantic { pos: *p, msg: format!("`{}` cannot be used as a coordinate name", n) });
            }
            if seen.insert(n.clone(), ()).is_some() {
                return Err(DslError::Semantic { pos: *p, msg: format!("coordinate `{}` repeated", n) });
            }
        }
        let chart = Chart {
            even: even.into_iter().map(|(n, _)| n).collect(),
            odd: odd.into_iter().map(|(n, _)| n).collect(),
        };
        self.declare(name, start, DeclKind::Chart(chart))?;
        self.chart = Some(self.doc.decls.len() - 1);
        Ok(())
    }

    fn expr_decl(&mut self, kind: Kind, start: Pos) -> PResult<()> {
        let (name, npos) = self.ident()?;
        let parity = if self.eat_sym(':') {
            let (p, ppos) = self.ident()?;
            match p.as_str() {
                "even" => Some((0u8, ppos)),
                "odd" => Some((1u8, ppos)),
                _ => return Err(DslError::Syntax { pos: ppos, msg: String::from("expected `even` or `odd`") }),
            }
        } else {
            None
        };
        self.expect_sym('=')?;
        let epos = self.pos();
        let chart = self.chart.ok_or(DslError::Semantic { pos: npos, msg: String::from("no chart declared") })?;
        let v = self.expr()?;
        self.expect_sym(';')?;
        let (p, q) = {
            let c = self.doc.chart_at(chart);
            (c.p(), c.q())
        };
        let mismatch = |found: &Value| DslError::Semantic {
            pos: epos,
            msg: format!("`{}` declares a {} but the expression is a {}", kind.keyword(), kind_name(kind), found.kind()),
        };
        let value = match (kind, v) {
            (Kind::Fn, v @ Value::Function(_)) => v,
            (Kind::CFn, v @ Value::CFunction(_)) => v,
            (Kind::CFn, Value::Function(f)) if f.is_zero() => Value::CFunction(CFunction::zero(p, q)),
            (Kind::CFn, Value::Unit(a)) => Value::CFunction(unit_cfn(a, SuperFunction::one(p, q))),
            (Kind::Vf, v @ Value::Field(_)) => v,
            (Kind::Vf, Value::Function(f)) if f.is_zero() => Value::Field(VectorField::zero(p, q)),
            (Kind::Form, v @ Value::Form(_)) => v,
            (Kind::Form, Value::Function(f)) => Value::Form(Form::function(f)),
            (_, v) => return Err(mismatch(&v)),
        };
        if let Some((want, ppos)) = parity {
            let got = match &value {
                Value::Function(f) => f.parity(),
                Value::CFunction(f) => f.parity(),
                Value::Field(x) => x.parity(),
                Value::Form(w) => w.parity(),
                Value::Unit(_) => None,
            };
            if got != Some(want) && !is_zero_value(&value) {
                let found = match got {
                    Some(0) => "even",
                    Some(_) => "odd",
                    None => "inhomogeneous",
                };
                let want = if want == 0 { "even" } else { "odd" };
                return Err(DslError::Parity {
                    pos: ppos,
                    msg: format!("`{}` is declared {} but its value is {}", name, want, found),
                });
            }
        }
        self.declare(name, start, DeclKind::Expr { kind, chart, value })
    }

    fn parities(&mut self) -> PResult<Vec<u8>> {
        if !self.eat_kw("parities") {
            return self.unexpected("`parities`");
        }
        let mut v = Vec::new();
        loop {
            let p = self.pos();
            match self.usize_lit()? {
                0 => v.push(0),
                1 => v.push(1),
                _ => return Err(DslError::Syntax { pos: p, msg: String::from("parity must be 0 or 1") }),
            }
            if !self.eat_sym(',') {
                break;
            }
        }
        Ok(v)
    }

    fn algebra_decl(&mut self, start: Pos) -> PResult<()> {
        let (name, _) = self.ident()?;
        let parities = self.parities()?;
        let n = parities.len();
        let mut brackets = Vec::new();
        if self.eat_kw("bracket") {
            loop {
                let bpos = self.pos();
                self.expect_sym('[')?;
                let i = self.usize_lit()?;
                self.expect_sym(',')?;
                let j = self.usize_lit()?;
                self.expect_sym(']')?;
                if i == 0 || j == 0 || i > n || j > n {
                    return Err(DslError::Semantic { pos: bpos, msg: format!("bracket [{},{}] out of range 1..{}", i, j, n) });
                }
                self.expect_sym('=')?;
                let v = self.lin(n)?;
                brackets.push((i - 1, j - 1, v, bpos));
                if !self.eat_sym(',') {
                    break;
                }
            }
        }
        self.expect_sym(';')?;
        let plain: Vec<(usize, usize, Vec<Q>)> = brackets.iter().map(|(i, j, v, _)| (*i, *j, v.clone())).collect();
        let g = SuperLieAlgebra::from_brackets(parities.clone(), &plain).map_err(|e| {
            // point at the offending bracket when parity is the problem
            let at = brackets
                .iter()
                .find(|(i, j, v, _)| {
                    v.iter().enumerate().any(|(k, x)| !x.is_zero() && (parities[*i] + parities[*j]) % 2 != parities[k])
                })
                .map(|b| b.3);
            match at {
                Some(pos) => DslError::Parity { pos, msg: e.to_string() },
                None => DslError::Semantic { pos: start, msg: e.to_string() },
            }
        })?;
        self.declare(name, start, DeclKind::Algebra(g))
    }

    /// `[-] [rational [*]] eK (+|- ...)*` or `0`.
    fn lin(&mut self, n: usize) -> PResult<Vec<Q>> {
        let mut v = vec![Q::zero(); n];
        let mut first = true;
        loop {
            let neg = if first {
                self.eat_sym('-')
            } else if self.eat_sym('+') {
                false
            } else if self.eat_sym('-') {
                true
            } else {
                break;
            };
            first = false;
            let mut c = Q::one();
            if let Tok::Int(_) = self.peek() {
                c = self.rational()?;
                if !self.eat_sym('*') {
                    if c.is_zero() {
                        continue;
                    }
                    return self.unexpected("`*` and a basis vector");
                }
            }
            let (e, p) = self.ident()?;
            let k = e
                .strip_prefix('e')
                .and_then(|r| r.parse::<usize>().ok())
                .filter(|&k| k >= 1 && k <= n)
                .ok_or(DslError::Undefined { pos: p, name: e.clone() })?;
            v[k - 1] += if neg { -c } else { c };
        }
        Ok(v)
    }

    fn matrix(&mut self) -> PResult<Vec<Vec<Q>>> {
        self.expect_sym('[')?;
        let mut rows = Vec::new();
        loop {
            self.expect_sym('[')?;
            let mut r = vec![self.rational()?];
            while self.eat_sym(',') {
                r.push(self.rational()?);
            }
            self.expect_sym(']')?;
            rows.push(r);
            if !self.eat_sym(',') {
                break;
            }
        }
        self.expect_sym(']')?;
        Ok(rows)
    }

    fn heisenberg_decl(&mut self, start: Pos) -> PResult<()> {
        let name = match self.peek() {
            Tok::Ident(s) if s != "parities" => self.ident()?.0,
            _ => String::from("H"),
        };
        let parities = self.parities()?;
        let mpos = self.pos();
        let spec = if self.eat_kw("omega0") {
            let o0 = self.matrix()?;
            if !self.eat_kw("omega1") {
                return self.unexpected("`omega1`");
            }
            let o1 = self.matrix()?;
            HeisenbergSpec::new(parities, o0, o1)
        } else if self.eat_kw("matrix") {
            let m = self.matrix()?;
            HeisenbergSpec::from_transposed(parities, &m)
        } else {
            return self.unexpected("`omega0` or `matrix`");
        };
        self.expect_sym(';')?;
        let spec = spec.map_err(|e| {
            let msg = e.to_string();
            if msg.contains("parity") {
                DslError::Parity { pos: mpos, msg }
            } else {
                DslError::Semantic { pos: mpos, msg }
            }
        })?;
        self.declare(name, start, DeclKind::Heisenberg(spec))
    }

    fn cover_decl(&mut self, start: Pos) -> PResult<()> {
        let (name, _) = self.ident()?;
        self.expect_sym('{')?;
        let mut lines = Vec::new();
        while !self.eat_sym('}') {
            let lpos = self.pos();
            let (kw, _) = self.ident()?;
            let line = match kw.as_str() {
                "simplex" | "facet" => {
                    let mut s = Vec::new();
                    while let Tok::Int(_) = self.peek() {
                        s.push(self.usize_lit()?);
                    }
                    CoverLine::Simplex(s)
                }
                "f" | "a" => {
                    let mut s = Vec::new();
                    while let Tok::Int(_) = self.peek() {
                        s.push(self.usize_lit()?);
                    }
                    self.expect_sym('=')?;
                    let v = self.rational()?;
                    if kw == "f" {
                        CoverLine::F(s, v)
                    } else {
                        CoverLine::A(s, v)
                    }
                }
                "d" => {
                    self.expect_sym('=')?;
                    CoverLine::D(self.rational()?)
                }
                "unit" => {
                    self.expect_sym('=')?;
                    CoverLine::Unit(self.ident()?.0)
                }
                _ => return Err(DslError::Syntax { pos: lpos, msg: format!("unknown cover line `{}`", kw) }),
            };
            lines.push((line, lpos));
            self.expect_sym(';')?;
        }
        self.eat_sym(';');
        let data = CoverData::from_lines(lines.iter().map(|(l, _)| l.clone()).collect())
            .map_err(|msg| DslError::Semantic { pos: start, msg })?;
        self.declare(name, start, DeclKind::Cover(data))
    }

    fn dims(&self) -> (usize, usize) {
        let c = self.doc.chart_at(self.chart.expect("chart checked"));
        (c.p(), c.q())
    }

    fn expr(&mut self) -> PResult<Value> {
        let neg = self.eat_sym('-');
        let mut v = self.term()?;
        if neg {
            v = negate(v);
        }
        loop {
            let pos = self.pos();
            if self.eat_sym('+') {
                let r = self.term()?;
                v = add(v, r, false, pos)?;
            } else if self.eat_sym('-') {
                let r = self.term()?;
                v = add(v, r, true, pos)?;
            } else {
                return Ok(v);
            }
        }
    }

    fn term(&mut self) -> PResult<Value> {
        let mut v = self.unary()?;
        loop {
            let pos = self.pos();
            if self.eat_sym('*') {
                let r = self.unary()?;
                v = mul(v, r, pos)?;
            } else if self.eat_sym('/') {
                let r = self.unary()?;
                v = div(v, r, pos)?;
            } else {
                return Ok(v);
            }
        }
    }

    fn unary(&mut self) -> PResult<Value> {
        if self.eat_sym('-') {
            return Ok(negate(self.unary()?));
        }
        self.power()
    }

    fn power(&mut self) -> PResult<Value> {
        let base = self.primary()?;
        let pos = self.pos();
        if !self.eat_sym('^') {
            return Ok(base);
        }
        if let Tok::Int(_) = self.peek() {
            let epos = self.pos();
            let e = self.usize_lit()?;
            return match base {
                Value::Function(f) => {
                    let e = u32::try_from(e).map_err(|_| DslError::Semantic { pos: epos, msg: String::from("exponent too large") })?;
                    Ok(Value::Function(f.pow(e)))
                }
                other => Err(DslError::Semantic { pos, msg: format!("cannot raise a {} to a power", other.kind()) }),
            };
        }
        let rhs = self.power()?;
        match (base, rhs) {
            (Value::Form(a), Value::Form(b)) => Ok(Value::Form(a.wedge(&b))),
            (a, b) => Err(DslError::Semantic { pos, msg: format!("cannot wedge a {} with a {}", a.kind(), b.kind()) }),
        }
    }

    fn primary(&mut self) -> PResult<Value> {
        let (p, q) = match self.chart {
            Some(_) => self.dims(),
            None => return self.syntax("expression outside a chart"),
        };
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(Value::Function(SuperFunction::scalar(p, q, Gq::real(Q::from_integer(n)))))
            }
            Tok::Sym('(') => {
                self.bump();
                let v = self.expr()?;
                self.expect_sym(')')?;
                Ok(v)
            }
            Tok::Ident(s) => {
                self.bump();
                if s == "d" {
                    if self.eat_sym('/') {
                        let (dz, zpos) = self.ident()?;
                        let chart = self.doc.chart_at(self.chart.unwrap());
                        let idx = dz
                            .strip_prefix('d')
                            .and_then(|z| chart.index_of(z))
                            .ok_or(DslError::Undefined { pos: zpos, name: dz.clone() })?;
                        return Ok(Value::Field(VectorField::basis(p, q, idx)));
                    }
                    if self.peek() == &Tok::Sym('(') {
                        self.bump();
                        let v = self.expr()?;
                        self.expect_sym(')')?;
                        return match v {
                            Value::Function(f) => Ok(Value::Form(Form::function(f).d())),
                            Value::Form(w) => Ok(Value::Form(w.d())),
                            other => Err(DslError::Semantic { pos, msg: format!("cannot differentiate a {}", other.kind()) }),
                        };
                    }
                    return Err(DslError::Undefined { pos, name: s });
                }
                self.resolve(&s, pos, p, q)
            }
            _ => self.unexpected("expression"),
        }
    }

    fn resolve(&self, s: &str, pos: Pos, p: usize, q: usize) -> PResult<Value> {
        let chart_idx = self.chart.unwrap();
        let chart = self.doc.chart_at(chart_idx);
        if let Some(k) = chart.index_of(s) {
            return Ok(Value::Function(SuperFunction::coord(p, q, k)));
        }
        match s {
            "i" => return Ok(Value::Function(SuperFunction::scalar(p, q, Gq::i()))),
            "c0" => return Ok(Value::Unit(0)),
            "c1" => return Ok(Value::Unit(1)),
            _ => {}
        }
        if let Some(k) = is_generator_name(s) {
            if k == 0 || k > self.doc.generators {
                return Err(DslError::Semantic {
                    pos,
                    msg: format!("generator {} out of range th1..th{}", s, self.doc.generators),
                });
            }
            let g = GrassmannNumber::generator(k, self.doc.generators)
                .map_err(|e| DslError::Semantic { pos, msg: e.to_string() })?;
            return Ok(Value::Function(SuperFunction::constant(p, q, g)));
        }
        if let Some(d) = self.doc.get(s) {
            return match &d.kind {
                DeclKind::Expr { chart, value, .. } if *chart == chart_idx => Ok(value.clone()),
                DeclKind::Expr { .. } => {
                    Err(DslError::Semantic { pos, msg: format!("`{}` lives on a different chart", s) })
                }
                _ => Err(DslError::Semantic { pos, msg: format!("`{}` is not an expression", s) }),
            };
        }
        if let Some(k) = s.strip_prefix('d').and_then(|z| chart.index_of(z)) {
            return Ok(Value::Form(Form::differential(p, q, k)));
        }
        Err(DslError::Undefined { pos, name: s.to_string() })
    }
}

fn kind_name(k: Kind) -> &'static str {
    match k {
        Kind::Fn => "function",
        Kind::CFn => "C-valued function",
        Kind::Vf => "vector field",
        Kind::Form => "form",
    }
}

fn is_zero_value(v: &Value) -> bool {
    match v {
        Value::Function(f) => f.is_zero(),
        Value::CFunction(f) => f.is_zero(),
        Value::Field(x) => x.is_zero(),
        Value::Form(w) => w.is_zero(),
        Value::Unit(_) => false,
    }
}

fn unit_cfn(a: u8, f: SuperFunction) -> CFunction {
    let (p, q) = f.dims();
    if a == 0 {
        CFunction::new(f, SuperFunction::zero(p, q))
    } else {
        CFunction::new(SuperFunction::zero(p, q), f)
    }
}

fn negate(v: Value) -> Value {
    match v {
        Value::Function(f) => Value::Function(-f),
        Value::CFunction(f) => Value::CFunction(-f),
        Value::Field(x) => Value::Field(-x),
        Value::Form(w) => Value::Form(-w),
        Value::Unit(a) => Value::Unit(a),
    }
}

fn add(a: Value, b: Value, sub: bool, pos: Pos) -> PResult<Value> {
    let b = if sub {
        match b {
            Value::Unit(_) => return Err(DslError::Semantic { pos, msg: String::from("cannot subtract a bare c0/c1") }),
            b => negate(b),
        }
    } else {
        b
    };
    match (a, b) {
        (Value::Function(x), Value::Function(y)) => Ok(Value::Function(&x + &y)),
        (Value::Field(x), Value::Field(y)) => Ok(Value::Field(&x + &y)),
        (Value::Form(x), Value::Form(y)) => Ok(Value::Form(&x + &y)),
        (Value::Form(x), Value::Function(y)) => Ok(Value::Form(&x + &Form::function(y))),
        (Value::Function(x), Value::Form(y)) => Ok(Value::Form(&Form::function(x) + &y)),
        (Value::CFunction(x), Value::CFunction(y)) => Ok(Value::CFunction(&x + &y)),
        (Value::CFunction(x), Value::Function(y)) | (Value::Function(y), Value::CFunction(x)) if y.is_zero() => {
            Ok(Value::CFunction(x))
        }
        (a, b) => Err(DslError::Semantic { pos, msg: format!("cannot add a {} and a {}", a.kind(), b.kind()) }),
    }
}

fn mul(a: Value, b: Value, pos: Pos) -> PResult<Value> {
    match (a, b) {
        (Value::Function(x), Value::Function(y)) => Ok(Value::Function(&x * &y)),
        (Value::Function(x), Value::Form(w)) => Ok(Value::Form(w.lmul(&x))),
        (Value::Function(x), Value::Field(v)) => Ok(Value::Field(v.lmul(&x))),
        (Value::Function(x), Value::Unit(a)) => Ok(Value::CFunction(unit_cfn(a, x))),
        (Value::Function(x), Value::CFunction(f)) => Ok(Value::CFunction(f.lmul(&x))),
        (Value::Unit(a), Value::Function(x)) => {
            // c1 f = (-1)^{|f|} f c1
            let sign_neg = match (a, x.parity()) {
                (0, _) => false,
                (_, Some(e)) => e == 1,
                (_, None) => {
                    return Err(DslError::Parity {
                        pos,
                        msg: String::from("c1 can only be moved past a homogeneous function"),
                    })
                }
            };
            Ok(Value::CFunction(unit_cfn(a, if sign_neg { -x } else { x })))
        }
        (Value::Form(w), Value::Function(x)) if x.is_constant() && x.has_scalar_coefficients() => {
            Ok(Value::Form(w.lmul(&x)))
        }
        (Value::Field(v), Value::Function(x)) if x.is_constant() && x.has_scalar_coefficients() => {
            Ok(Value::Field(v.lmul(&x)))
        }
        (a, b) => Err(DslError::Semantic { pos, msg: format!("cannot multiply a {} by a {}", a.kind(), b.kind()) }),
    }
}

fn div(a: Value, b: Value, pos: Pos) -> PResult<Value> {
    let inv = match &b {
        Value::Function(f) if f.is_constant() && f.has_scalar_coefficients() => {
            let c = f.constant_value().map(|g| g.body()).unwrap_or_else(Gq::zero);
            c.inv().ok_or(DslError::Semantic { pos, msg: String::from("division by zero") })?
        }
        _ => return Err(DslError::Semantic { pos, msg: format!("cannot divide by a {}", b.kind()) }),
    };
    Ok(match a {
        Value::Function(f) => Value::Function(f.scale(&inv)),
        Value::CFunction(f) => Value::CFunction(f.scale(&inv)),
        Value::Field(x) => Value::Field(x.scale(&inv)),
        Value::Form(w) => Value::Form(w.scale(&inv)),
        Value::Unit(a) => {
            return Err(DslError::Semantic { pos, msg: format!("cannot divide c{}", a) });
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_document() {
        let d = parse("").unwrap();
        assert!(d.decls.is_empty());
        let d = parse("  # only a comment\n").unwrap();
        assert!(d.decls.is_empty());
    }

    #[test]
    fn form_with_three_terms() {
        let d = parse("chart M even x,y odd xi,eta; form w = dx^dy + dxi^deta + dx^dxi;").unwrap();
        match &d.get("w").unwrap().kind {
            DeclKind::Expr { value: Value::Form(w), .. } => {
                assert_eq!(w.terms().count(), 3);
                assert_eq!(w.degree(), Some(2));
            }
            other => panic!("{:?}", other),
        }
    }

    #[test]
    fn double_wedge_is_a_syntax_error() {
        let e = parse("chart M even x,y odd xi,eta;\nform w = dx^^dy;").unwrap_err();
        assert!(matches!(e, DslError::Syntax { .. }));
        assert_eq!(e.pos(), Pos { line: 2, col: 13 });
    }

    #[test]
    fn undefined_identifier_has_position() {
        let e = parse("chart M even x,y;\nfn f = x + zz;").unwrap_err();
        assert_eq!(e, DslError::Undefined { pos: Pos { line: 2, col: 12 }, name: String::from("zz") });
    }

    #[test]
    fn parity_annotation_is_checked() {
        let e = parse("chart M even x odd xi; fn f : even = x*xi;").unwrap_err();
        assert!(matches!(e, DslError::Parity { .. }));
        assert!(parse("chart M even x odd xi; fn f : odd = x*xi;").is_ok());
        let e = parse("algebra g parities 0,1 bracket [1,2] = e1;").unwrap_err();
        assert!(matches!(e, DslError::Parity { .. }));
    }

    #[test]
    fn vector_fields_and_c_valued_functions() {
        let d = parse(
            "chart M even x,y odd xi,eta; vf X = 2*y*d/dx - 2*y*d/deta; cfn f = (x^2 + y*x)*c0 + xi*x*c1; cfn g = c1*xi;",
        )
        .unwrap();
        let (p, q) = (2, 2);
        match &d.get("X").unwrap().kind {
            DeclKind::Expr { value: Value::Field(x), .. } => {
                assert_eq!(x.component(0), &SuperFunction::coord(p, q, 1).scale(&Gq::int(2)));
                assert_eq!(x.component(3), &SuperFunction::coord(p, q, 1).scale(&Gq::int(-2)));
            }
            other => panic!("{:?}", other),
        }
        match &d.get("g").unwrap().kind {
            DeclKind::Expr { value: Value::CFunction(f), .. } => {
                assert_eq!(f.f1, -SuperFunction::coord(p, q, 2));
            }
            other => panic!("{:?}", other),
        }
    }

    #[test]
    fn grassmann_generators_and_rationals() {
        let d = parse_with("chart M even x; fn f = 3/2 + 2*th1*th3 - i*th2;", 3).unwrap();
        match &d.get("f").unwrap().kind {
            DeclKind::Expr { value: Value::Function(f), .. } => {
                assert_eq!(f.constant_value().unwrap().render(), "3/2 + 2*th1*th3 - i*th2");
            }
            other => panic!("{:?}", other),
        }
        assert!(parse_with("chart M even x; fn f = th4;", 3).is_err());
    }

    #[test]
    fn exterior_derivative_operator() {
        let d = parse("chart M even x,y odd xi; form a = d(y*xi); form b = xi*dy + y*dxi;").unwrap();
        assert_eq!(d.get("a").unwrap().kind.clone(), match &d.get("b").unwrap().kind {
            DeclKind::Expr { value, .. } => DeclKind::Expr { kind: Kind::Form, chart: 0, value: value.clone() },
            _ => unreachable!(),
        });
    }

    #[test]
    fn algebra_and_heisenberg() {
        let d = parse(
            "algebra g parities 0,0,1,1 bracket [1,3] = e3, [1,4] = -e4, [2,3] = -e3, [2,4] = e4, [3,4] = e1 + e2;\n\
             heisenberg H parities 0,0,1 omega0 [[0,1,0],[-1,0,0],[0,0,2]] omega1 [[0,0,0],[0,0,0],[0,0,0]];",
        )
        .unwrap();
        assert_eq!(d.algebras().count(), 1);
        let (_, g) = d.algebras().next().unwrap();
        assert!(g.jacobi_check().is_ok());
        assert_eq!(d.heisenbergs().next().unwrap().1.omega(0, 2, 2), &Q::from_integer(2.into()));
    }

    #[test]
    fn round_trip_canonical_document() {
        let text = "chart M even x,y odd xi,eta;\n\
                    fn f = y^2 + xi*eta - 3/2*th1*x;\n\
                    vf X = 2*y*d/dx - 2*y*d/deta + (x + i)*d/dxi;\n\
                    form w = dx^dy + dxi^deta + dx^dxi + (x + th2)*dxi^dxi;\n\
                    cfn h = (x^2 + y*x)*c0 + xi*x*c1;\n\
                    algebra g parities 0,0,1 bracket [1,3] = e3, [3,3] = 2*e2;\n\
                    heisenberg H parities 0,1 omega0 [[0,0],[0,1]] omega1 [[0,0],[0,0]];\n\
                    cover K { simplex 0 1 2; f 0 1 = 3/2; a 0 1 2 = 3; d = 3; }\n";
        let d = parse(text).unwrap();
        let again = parse(&d.render()).unwrap();
        assert_eq!(d, again);
        assert_eq!(again.render(), d.render());
    }
}
