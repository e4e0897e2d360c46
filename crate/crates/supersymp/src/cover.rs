//! Cover files: facets of the nerve, potential differences and cocycle values.
//!
//! ```text
//! # boundary of a tetrahedron
//! simplex 0 1 2
//! simplex 0 1 3
//! simplex 0 2 3
//! simplex 1 2 3
//! a 0 1 2 = 3
//! f 0 1 = 3/2
//! d = 3
//! ```

use std::fmt;

use supersymp_core::cech::{build_nerve, closure, cocycle_from_potentials, CechCochain, NerveComplex};
use supersymp_core::scalar::{parse_q, q_str, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoverLine {
    Simplex(Vec<usize>),
    /// Constant potential difference on an edge.
    F(Vec<usize>, Q),
    /// Cocycle value carried by the non-constant parts of the potentials.
    A(Vec<usize>, Q),
    D(Q),
    Unit(String),
}

fn ints(v: &[usize]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

impl fmt::Display for CoverLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoverLine::Simplex(s) => write!(f, "simplex {}", ints(s)),
            CoverLine::F(s, v) => write!(f, "f {} = {}", ints(s), q_str(v)),
            CoverLine::A(s, v) => write!(f, "a {} = {}", ints(s), q_str(v)),
            CoverLine::D(v) => write!(f, "d = {}", q_str(v)),
            CoverLine::Unit(u) => write!(f, "unit = {}", u),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverData {
    pub facets: Vec<Vec<usize>>,
    pub f: CechCochain,
    pub a0: CechCochain,
    pub d: Option<Q>,
    pub unit: Option<String>,
    nerve: NerveComplex,
}

impl CoverData {
    pub fn from_lines(lines: Vec<CoverLine>) -> Result<Self, String> {
        let mut facets = Vec::new();
        let mut f = CechCochain::zero(1);
        let mut a0 = CechCochain::zero(2);
        let mut d = None;
        let mut unit = None;
        for l in &lines {
            match l {
                CoverLine::Simplex(s) => {
                    if s.is_empty() {
                        return Err(String::from("empty simplex"));
                    }
                    facets.push(s.clone());
                }
                CoverLine::F(s, v) => {
                    if s.len() != 2 {
                        return Err(format!("`f` takes an edge, got {} vertices", s.len()));
                    }
                    let acc = f.get(s) + v;
                    f.set(s, acc).map_err(|e| e.to_string())?;
                }
                CoverLine::A(s, v) => {
                    if s.len() != 3 {
                        return Err(format!("`a` takes a triangle, got {} vertices", s.len()));
                    }
                    let acc = a0.get(s) + v;
                    a0.set(s, acc).map_err(|e| e.to_string())?;
                }
                CoverLine::D(v) => {
                    if d.replace(v.clone()).is_some() {
                        return Err(String::from("`d` given twice"));
                    }
                }
                CoverLine::Unit(u) => unit = Some(u.clone()),
            }
        }
        let nerve = build_nerve(&closure(&facets)).map_err(|e| e.to_string())?;
        f.check_on(&nerve).map_err(|e| format!("`f` line: {}", e))?;
        a0.check_on(&nerve).map_err(|e| format!("`a` line: {}", e))?;
        Ok(CoverData { facets, f, a0, d, unit, nerve })
    }

    pub fn nerve(&self) -> &NerveComplex {
        &self.nerve
    }

    /// `a = a0 + delta f`.
    pub fn cocycle(&self) -> CechCochain {
        cocycle_from_potentials(&self.nerve, &self.f).expect("checked on the nerve").add(&self.a0)
    }

    /// Canonical lines; parsing them back gives an equal value.
    pub fn lines(&self) -> Vec<CoverLine> {
        let mut out: Vec<CoverLine> = self.facets.iter().cloned().map(CoverLine::Simplex).collect();
        out.extend(self.f.values().map(|(s, v)| CoverLine::F(s.clone(), v.clone())));
        out.extend(self.a0.values().map(|(s, v)| CoverLine::A(s.clone(), v.clone())));
        if let Some(d) = &self.d {
            out.push(CoverLine::D(d.clone()));
        }
        if let Some(u) = &self.unit {
            out.push(CoverLine::Unit(u.clone()));
        }
        out
    }

    pub fn render(&self) -> String {
        self.lines().iter().map(|l| format!("{}\n", l)).collect()
    }
}

fn parse_vertices(words: &[&str], lineno: usize) -> Result<Vec<usize>, String> {
    words.iter().map(|w| w.parse().map_err(|_| format!("line {}: `{}` is not a vertex", lineno, w))).collect()
}

/// Parses the line-oriented cover format. `facet` is accepted for `simplex`.
pub fn parse_cover(text: &str) -> Result<CoverData, String> {
    let mut lines = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let lineno = k + 1;
        let line = raw.split('#').next().unwrap_or("").trim().trim_end_matches(';').trim();
        if line.is_empty() {
            continue;
        }
        let (lhs, rhs) = match line.split_once('=') {
            Some((l, r)) => (l.trim(), Some(r.trim())),
            None => (line, None),
        };
        let words: Vec<&str> = lhs.split_whitespace().collect();
        let value = |r: Option<&str>| -> Result<Q, String> {
            let r = r.ok_or(format!("line {}: missing `= value`", lineno))?;
            parse_q(r).ok_or(format!("line {}: `{}` is not a rational number", lineno, r))
        };
        let parsed = match words[0] {
            "simplex" | "facet" if rhs.is_none() => CoverLine::Simplex(parse_vertices(&words[1..], lineno)?),
            "f" => CoverLine::F(parse_vertices(&words[1..], lineno)?, value(rhs)?),
            "a" => CoverLine::A(parse_vertices(&words[1..], lineno)?, value(rhs)?),
            "d" if words.len() == 1 => CoverLine::D(value(rhs)?),
            "unit" if words.len() == 1 => {
                CoverLine::Unit(rhs.ok_or(format!("line {}: missing `= label`", lineno))?.to_string())
            }
            w => return Err(format!("line {}: unknown entry `{}`", lineno, w)),
        };
        lines.push(parsed);
    }
    CoverData::from_lines(lines)
}

/// Parses a Chevalley-Eilenberg cochain file: lines `i j = value` with
/// 1-based basis indices.
pub fn parse_cochain_lines(text: &str) -> Result<Vec<(Vec<usize>, Q)>, String> {
    let mut out = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let lineno = k + 1;
        let line = raw.split('#').next().unwrap_or("").trim().trim_end_matches(';').trim();
        if line.is_empty() {
            continue;
        }
        let (lhs, rhs) = line.split_once('=').ok_or(format!("line {}: expected `i j = value`", lineno))?;
        let idx = lhs
            .split_whitespace()
            .map(|w| match w.parse::<usize>() {
                Ok(i) if i >= 1 => Ok(i - 1),
                _ => Err(format!("line {}: `{}` is not a 1-based index", lineno, w)),
            })
            .collect::<Result<Vec<_>, _>>()?;
        let v = parse_q(rhs.trim()).ok_or(format!("line {}: `{}` is not a rational number", lineno, rhs.trim()))?;
        out.push((idx, v));
    }
    Ok(out)
}
