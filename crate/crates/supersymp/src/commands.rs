//! Command-line commands. Each returns a [`Report`] whose verdict fixes the
//! exit code.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use supersymp_core::cech::{
    classify_prequantum, normalize_to_periods, period_group, prequantum_exists, transition_data, CechCochain,
};
use supersymp_core::charts::{CFunction, Chart, SuperFunction};
use supersymp_core::forms::{double, Form};
use supersymp_core::heisenberg::{kks_form, momentum_check, orbit_classify, HeisenbergSpec, OrbitPoint};
use supersymp_core::liecoh::{
    central_extension, coboundary, extension_equivalent, extension_isomorphism, h2, CeCochain, SuperLieAlgebra,
};
use supersymp_core::linalg::Matrix;
use supersymp_core::prequant::{
    eta_field, lift_defect, quantum_op, rep_check, symmetry_check, PrequantChart,
};
use supersymp_core::scalar::{parse_q, q, Gq, Q};
use supersymp_core::symplectic::{
    coefficients_at, darboux_normal_form, hamiltonian_field, is_symplectic, poisson_bracket, DarbouxKind,
    Membership,
};

use crate::cover::{parse_cochain_lines, parse_cover, CoverData};
use crate::dsl::{self, DeclKind, Document, Kind, Value as DslValue, DEFAULT_GENERATORS};
use crate::paper;
use crate::report::{
    matrix_json, q_json, qmatrix_json, qs_json, CliError, CliResult, Report, Verdict,
};

#[derive(Debug, Parser)]
#[command(name = "supersymp", version, about = "Exact computations on symplectic supermanifolds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Symplectic forms, hamiltonian fields, Poisson brackets, Darboux bases
    #[command(subcommand)]
    Symplectic(SymplecticCmd),
    #[command(hide = true)]
    Hamiltonian(HamiltonianArgs),
    #[command(hide = true)]
    Poisson(PoissonArgs),
    #[command(hide = true)]
    Darboux(DarbouxArgs),
    /// Chevalley-Eilenberg cohomology and central extensions
    #[command(subcommand)]
    Liecoh(LiecohCmd),
    /// Super Heisenberg groups and their coadjoint orbits
    #[command(subcommand)]
    Heisenberg(HeisenbergCmd),
    /// Periods and prequantum bundles on a finite cover
    #[command(subcommand)]
    Cech(CechCmd),
    /// Infinitesimal symmetries and quantum operators on a trivializing chart
    #[command(subcommand)]
    Prequant(PrequantCmd),
    /// Recompute the worked examples (section3, section6, section7, section9 or all)
    VerifyPaper { section: String },
}

#[derive(Debug, Subcommand)]
pub enum SymplecticCmd {
    /// Closedness and (homogeneous) non-degeneracy of a 2-form
    Check(CheckArgs),
    /// Hamiltonian vector field of a C-valued function
    Hamiltonian(HamiltonianArgs),
    /// Poisson bracket of two C-valued functions
    Poisson(PoissonArgs),
    /// Darboux basis of a constant homogeneous 2-form
    Darboux(DarbouxArgs),
}

#[derive(Debug, Args)]
pub struct FormSel {
    pub file: PathBuf,
    /// Name of the form declaration (default: the last one)
    #[arg(long)]
    pub form: Option<String>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub sel: FormSel,
    /// Body point "v1,v2,..." of the even coordinates; repeatable
    #[arg(long = "point")]
    pub points: Vec<String>,
}

#[derive(Debug, Args)]
pub struct HamiltonianArgs {
    #[command(flatten)]
    pub sel: FormSel,
    /// C-valued function, e.g. "(x + y*xi)*c0 + xi*c1"
    #[arg(long)]
    pub f: String,
    /// Degree bound of the polynomial ansatz for non-constant forms
    #[arg(long)]
    pub degree: Option<u32>,
}

#[derive(Debug, Args)]
pub struct PoissonArgs {
    #[command(flatten)]
    pub sel: FormSel,
    #[arg(long)]
    pub f: String,
    #[arg(long)]
    pub g: String,
    #[arg(long)]
    pub degree: Option<u32>,
}

#[derive(Debug, Args)]
pub struct DarbouxArgs {
    /// DSL file holding the form
    pub file: Option<PathBuf>,
    #[arg(long)]
    pub form: Option<String>,
    /// Body point at which the form is frozen (default: origin)
    #[arg(long)]
    pub point: Option<String>,
    /// Coefficient matrix "[[..],..]" of w = sum w_ij dz^i ^ dz^j
    #[arg(long, conflicts_with = "file")]
    pub matrix: Option<String>,
    /// Parities "0,0,1" of the coordinates, with --matrix
    #[arg(long, requires = "matrix")]
    pub parities: Option<String>,
    /// Require an even form
    #[arg(long, conflicts_with = "odd")]
    pub even: bool,
    /// Require an odd form
    #[arg(long)]
    pub odd: bool,
}

#[derive(Debug, Subcommand)]
pub enum LiecohCmd {
    /// Second cohomology with trivial coefficients
    H2(AlgebraSel),
    /// Central extension by a 2-cochain
    Extend {
        #[command(flatten)]
        sel: AlgebraSel,
        /// File of lines "i j = value" (1-based)
        #[arg(long)]
        cocycle: PathBuf,
    },
    /// Equivalence of the extensions by two cocycles
    Equiv {
        #[command(flatten)]
        sel: AlgebraSel,
        #[arg(long)]
        cocycle: PathBuf,
        #[arg(long)]
        other: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct AlgebraSel {
    pub file: PathBuf,
    #[arg(long)]
    pub algebra: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum HeisenbergCmd {
    /// Orbit type, chart and invariants through a point
    Orbit(OrbitArgs),
    /// Symplectic form on the orbit
    Kks(OrbitArgs),
    /// Strong hamiltonicity of the identity momentum map
    Momentum(OrbitArgs),
}

#[derive(Debug, Args)]
pub struct OrbitArgs {
    pub file: PathBuf,
    #[arg(long)]
    pub name: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub y0: String,
    #[arg(long, allow_hyphen_values = true)]
    pub ybar1: String,
    /// Values "v1,..,vn" of the coordinates x_i (even e_i) and xbar_i (odd e_i)
    #[arg(long, allow_hyphen_values = true)]
    pub point: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum CechCmd {
    /// Period group of the cocycle
    Periods(CoverArgs),
    /// Existence, normalization and transition data for R/dZ
    Prequantize(CoverArgs),
    /// H^1 of the nerve with coefficients in Q/dZ
    Classify(CoverArgs),
}

#[derive(Debug, Args)]
pub struct CoverArgs {
    pub file: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    pub d: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum PrequantCmd {
    /// Infinitesimal symmetry lifting a C-valued function
    Eta(PrequantArgs),
    /// Quantum operator applied to sections
    Qop(PrequantArgs),
    /// Representation condition on sample sections
    Repcheck(PrequantArgs),
}

#[derive(Debug, Args)]
pub struct PrequantArgs {
    pub file: PathBuf,
    /// Name of the potential 1-form declaration
    #[arg(long)]
    pub theta: String,
    #[arg(long)]
    pub f: String,
    #[arg(long)]
    pub g: Option<String>,
    /// Sections separated by ';'
    #[arg(long)]
    pub sections: Option<String>,
    #[arg(long)]
    pub d: Option<String>,
}

pub fn generators_from_env() -> CliResult<usize> {
    match std::env::var("SUPERSYMP_GENERATORS") {
        Ok(s) => s
            .trim()
            .parse()
            .ok()
            .filter(|&n: &usize| n <= 62)
            .ok_or_else(|| CliError::Input(format!("SUPERSYMP_GENERATORS={} is not a count in 0..=62", s))),
        Err(_) => Ok(DEFAULT_GENERATORS),
    }
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io { path: path.display().to_string(), source: e })
}

pub fn load_document(path: &Path) -> CliResult<Document> {
    let text = read(path)?;
    dsl::parse_with(&text, generators_from_env()?)
        .map_err(|e| CliError::Dsl { path: path.display().to_string(), source: e })
}

fn parse_rational(s: &str, what: &str) -> CliResult<Q> {
    parse_q(s).ok_or_else(|| CliError::Input(format!("{}: `{}` is not a rational number", what, s)))
}

fn parse_list(s: &str, what: &str) -> CliResult<Vec<Q>> {
    s.split(',').filter(|x| !x.trim().is_empty()).map(|x| parse_rational(x, what)).collect()
}

fn parse_parities(s: &str) -> CliResult<Vec<u8>> {
    s.split(',')
        .map(|x| match x.trim() {
            "0" => Ok(0),
            "1" => Ok(1),
            o => Err(CliError::Input(format!("parity `{}` is not 0 or 1", o))),
        })
        .collect()
}

fn parse_matrix(s: &str) -> CliResult<Vec<Vec<Q>>> {
    let t = s.trim();
    let inner = t
        .strip_prefix('[')
        .and_then(|x| x.strip_suffix(']'))
        .ok_or_else(|| CliError::Input(String::from("matrix must look like [[a,b],[c,d]]")))?;
    let mut rows = Vec::new();
    for part in inner.split(']') {
        let r = part.trim().trim_start_matches(',').trim();
        if r.is_empty() {
            continue;
        }
        let r = r
            .strip_prefix('[')
            .ok_or_else(|| CliError::Input(format!("malformed matrix row `{}`", r)))?;
        rows.push(parse_list(r, "matrix")?);
    }
    if rows.is_empty() || rows.iter().any(|r| r.len() != rows.len()) {
        return Err(CliError::Input(String::from("matrix must be square")));
    }
    Ok(rows)
}

fn chart_json(c: &Chart) -> Value {
    json!({ "even": c.even, "odd": c.odd })
}

/// The named form declaration, or the last one.
fn select_form<'a>(doc: &'a Document, name: Option<&str>) -> CliResult<(usize, &'a Form, String)> {
    let mut found = None;
    for (n, chart, v) in doc.exprs(Kind::Form) {
        if name.map_or(true, |want| want == n) {
            if let DslValue::Form(w) = v {
                found = Some((chart, w, n.to_string()));
            }
        }
    }
    found.ok_or_else(|| {
        CliError::Input(match name {
            Some(n) => format!("no form named `{}`", n),
            None => String::from("the file declares no form"),
        })
    })
}

/// Evaluates a C-valued function; a bare function is not accepted.
pub fn eval_cfunction(doc: &Document, chart: usize, text: &str) -> CliResult<CFunction> {
    let c = doc.chart_at(chart);
    let (p, qd) = (c.p(), c.q());
    match doc.eval(text, chart)? {
        DslValue::CFunction(f) => Ok(f),
        DslValue::Unit(0) => Ok(CFunction::new(SuperFunction::one(p, qd), SuperFunction::zero(p, qd))),
        DslValue::Unit(_) => Ok(CFunction::new(SuperFunction::zero(p, qd), SuperFunction::one(p, qd))),
        DslValue::Function(f) if f.is_zero() => Ok(CFunction::zero(p, qd)),
        other => Err(CliError::Input(format!(
            "`{}` is not a C-valued function; write it as `(..)*c0 + (..)*c1` ({:?} given)",
            text,
            kind_of(&other)
        ))),
    }
}

fn kind_of(v: &DslValue) -> &'static str {
    match v {
        DslValue::Function(_) => "function",
        DslValue::CFunction(_) => "C-valued function",
        DslValue::Field(_) => "vector field",
        DslValue::Form(_) => "form",
        DslValue::Unit(_) => "unit",
    }
}

fn eval_function(doc: &Document, chart: usize, text: &str) -> CliResult<SuperFunction> {
    match doc.eval(text, chart)? {
        DslValue::Function(f) => Ok(f),
        other => Err(CliError::Input(format!("`{}` is a {}, not a function", text, kind_of(&other)))),
    }
}

fn default_points(p: usize) -> Vec<Vec<Q>> {
    vec![vec![q(0); p], vec![q(1); p], (0..p as i64).map(|i| q(i + 1)).collect()]
}

pub fn run(cli: Cli) -> CliResult<Report> {
    match cli.command {
        Command::Symplectic(SymplecticCmd::Check(a)) => symplectic_check(&a),
        Command::Symplectic(SymplecticCmd::Hamiltonian(a)) | Command::Hamiltonian(a) => hamiltonian(&a),
        Command::Symplectic(SymplecticCmd::Poisson(a)) | Command::Poisson(a) => poisson(&a),
        Command::Symplectic(SymplecticCmd::Darboux(a)) | Command::Darboux(a) => darboux(&a),
        Command::Liecoh(c) => liecoh(c),
        Command::Heisenberg(c) => heisenberg(c),
        Command::Cech(c) => cech(c),
        Command::Prequant(c) => prequant(c),
        Command::VerifyPaper { section } => paper::verify(&section),
    }
}

fn symplectic_check(a: &CheckArgs) -> CliResult<Report> {
    let doc = load_document(&a.sel.file)?;
    let (ci, w, name) = select_form(&doc, a.sel.form.as_deref())?;
    let chart = doc.chart_at(ci);
    let points = if a.points.is_empty() {
        default_points(chart.p())
    } else {
        a.points.iter().map(|s| parse_list(s, "point")).collect::<CliResult<_>>()?
    };
    let rep = is_symplectic(w, &points)?;
    let wbar = double(w);
    let pts: Vec<Value> = rep
        .points
        .iter()
        .map(|pr| {
            json!({
                "point": qs_json(&pr.point),
                "rank": pr.rank,
                "nondegenerate": pr.nondegenerate,
                "homogeneously_nondegenerate": pr.homogeneously_nondegenerate,
            })
        })
        .collect();
    Ok(Report::new("symplectic check", Verdict::from_bool(rep.is_homogeneously_symplectic()))
        .with("form", name)
        .with("value", w.render(chart))
        .with("part0", wbar.w0.render(chart))
        .with("part1", wbar.w1.render(chart))
        .with("degree_two", rep.degree_two)
        .with("closed", rep.closed)
        .with("d_form", rep.obstruction.as_ref().map_or(String::from("0"), |o| o.render(chart)))
        .with("symplectic", rep.is_symplectic())
        .with("homogeneously_symplectic", rep.is_homogeneously_symplectic())
        .with("points", pts))
}

fn hamiltonian(a: &HamiltonianArgs) -> CliResult<Report> {
    let doc = load_document(&a.sel.file)?;
    let (ci, w, _) = select_form(&doc, a.sel.form.as_deref())?;
    let chart = doc.chart_at(ci);
    let f = eval_cfunction(&doc, ci, &a.f)?;
    let m = hamiltonian_field(&double(w), &f, a.degree)?;
    let r = Report::new("symplectic hamiltonian", Verdict::Verified).with("f", f.render(chart));
    Ok(match m {
        Membership::Member(x) => r.with("member", true).with("field", x.render(chart)),
        Membership::NotMember { obstruction } => Report { verdict: Verdict::Refuted, ..r }
            .with("member", false)
            .with("obstruction", obstruction.render(chart)),
        Membership::Inconclusive { degree } => {
            Report { verdict: Verdict::Inconclusive, ..r }.with("member", Value::Null).with("ansatz_degree", degree)
        }
    })
}

fn poisson(a: &PoissonArgs) -> CliResult<Report> {
    let doc = load_document(&a.sel.file)?;
    let (ci, w, _) = select_form(&doc, a.sel.form.as_deref())?;
    let chart = doc.chart_at(ci);
    let f = eval_cfunction(&doc, ci, &a.f)?;
    let g = eval_cfunction(&doc, ci, &a.g)?;
    let b = poisson_bracket(&double(w), &f, &g, a.degree)?;
    Ok(Report::new("symplectic poisson", Verdict::Verified)
        .with("f", f.render(chart))
        .with("g", g.render(chart))
        .with("bracket", b.render(chart)))
}

fn darboux(a: &DarbouxArgs) -> CliResult<Report> {
    let (coeffs, parities, names): (Matrix, Vec<u8>, Vec<String>) = match (&a.matrix, &a.file) {
        (Some(m), _) => {
            let m = parse_matrix(m)?;
            let parities = match &a.parities {
                Some(p) => parse_parities(p)?,
                None => vec![0; m.len()],
            };
            if parities.len() != m.len() {
                return Err(CliError::Input(String::from("--parities must list one parity per row")));
            }
            let names = (1..=m.len()).map(|i| format!("z{}", i)).collect();
            (m.into_iter().map(|r| r.into_iter().map(Gq::real).collect()).collect(), parities, names)
        }
        (None, Some(file)) => {
            let doc = load_document(file)?;
            let (ci, w, _) = select_form(&doc, a.form.as_deref())?;
            let chart = doc.chart_at(ci);
            let point = match &a.point {
                Some(s) => parse_list(s, "point")?,
                None => vec![q(0); chart.p()],
            };
            if point.len() != chart.p() {
                return Err(CliError::Input(format!("point needs {} values", chart.p())));
            }
            let parities = (0..chart.dim()).map(|i| chart.parity(i)).collect();
            let names = (0..chart.dim()).map(|i| chart.name(i).to_string()).collect();
            (coefficients_at(w, &point), parities, names)
        }
        (None, None) => return Err(CliError::Input(String::from("give a file or --matrix"))),
    };
    let res = darboux_normal_form(&coeffs, &parities)?;
    let (kind, extra) = match res.kind {
        DarbouxKind::Even { pairs, ell, odd } => ("even", json!({ "pairs": pairs, "ell": ell, "odd": odd })),
        DarbouxKind::Odd { n } => ("odd", json!({ "n": n })),
    };
    let wanted_ok = !(a.even && kind != "even" || a.odd && kind != "odd");
    let verified = res.verify(&coeffs);
    let canonical_chart = Chart::standard(
        res.parities.iter().filter(|&&e| e == 0).count(),
        res.parities.iter().filter(|&&e| e == 1).count(),
    );
    Ok(Report::new("symplectic darboux", Verdict::from_bool(verified && wanted_ok))
        .with("coordinates", names)
        .with("kind", kind)
        .with("signature", extra)
        .with("basis", matrix_json(&res.basis))
        .with("scales", qs_json(&res.scales))
        .with("new_parities", res.parities.clone())
        .with("canonical_form", res.canonical_form().render(&canonical_chart))
        .with("transform_verified", verified))
}

fn select_algebra<'a>(doc: &'a Document, name: Option<&str>) -> CliResult<&'a SuperLieAlgebra> {
    doc.algebras()
        .filter(|(n, _)| name.map_or(true, |w| w == *n))
        .map(|(_, g)| g)
        .last()
        .ok_or_else(|| CliError::Input(String::from("no matching algebra declaration")))
}

fn load_cochain(g: &SuperLieAlgebra, path: &Path) -> CliResult<CeCochain> {
    let lines = parse_cochain_lines(&read(path)?).map_err(|e| CliError::Input(format!("{}: {}", path.display(), e)))?;
    let mut c = CeCochain::zero(g.parities(), 2);
    for (idx, v) in lines {
        if idx.len() != 2 || idx.iter().any(|&i| i >= g.dim()) {
            return Err(CliError::Input(format!(
                "{}: {:?} is not a pair of basis indices in 1..{}",
                path.display(),
                idx.iter().map(|i| i + 1).collect::<Vec<_>>(),
                g.dim()
            )));
        }
        let acc = &c.get(&idx) + &v;
        c.set(&idx, acc)?;
    }
    Ok(c)
}

pub fn cochain_json(c: &CeCochain) -> Value {
    let m: serde_json::Map<String, Value> = c
        .values()
        .map(|(k, v)| (k.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(" "), q_json(v)))
        .collect();
    Value::Object(m)
}

fn algebra_text(g: &SuperLieAlgebra) -> String {
    let doc = Document {
        decls: vec![dsl::Decl { name: String::from("g"), kind: DeclKind::Algebra(g.clone()) }],
        spans: vec![dsl::Pos { line: 1, col: 1 }],
        generators: DEFAULT_GENERATORS,
    };
    doc.render().trim_end().to_string()
}

fn liecoh(c: LiecohCmd) -> CliResult<Report> {
    match c {
        LiecohCmd::H2(sel) => {
            let doc = load_document(&sel.file)?;
            let g = select_algebra(&doc, sel.algebra.as_deref())?;
            let h = h2(g);
            let jacobi = g.jacobi_check().is_ok();
            Ok(Report::new("liecoh h2", Verdict::from_bool(jacobi))
                .with("jacobi", jacobi)
                .with("dim", h.dim)
                .with("cocycles", h.cocycles)
                .with("coboundaries", h.coboundaries)
                .with("basis", h.basis.iter().map(cochain_json).collect::<Vec<_>>()))
        }
        LiecohCmd::Extend { sel, cocycle } => {
            let doc = load_document(&sel.file)?;
            let g = select_algebra(&doc, sel.algebra.as_deref())?;
            let w = load_cochain(g, &cocycle)?;
            let closed = coboundary(g, &w).is_zero();
            let ext = central_extension(g, &w)?;
            let jacobi = ext.jacobi_check().is_ok();
            Ok(Report::new("liecoh extend", Verdict::from_bool(jacobi))
                .with("closed", closed)
                .with("jacobi", jacobi)
                .with("extension", algebra_text(&ext)))
        }
        LiecohCmd::Equiv { sel, cocycle, other } => {
            let doc = load_document(&sel.file)?;
            let g = select_algebra(&doc, sel.algebra.as_deref())?;
            let w1 = load_cochain(g, &cocycle)?;
            let w2 = load_cochain(g, &other)?;
            let r = Report::new("liecoh equiv", Verdict::Verified);
            Ok(match extension_equivalent(g, &w1, &w2) {
                Some(f) => r
                    .with("equivalent", true)
                    .with("f", qs_json(&f.to_vector()))
                    .with("isomorphism", qmatrix_json(&extension_isomorphism(g, &f))),
                None => Report { verdict: Verdict::Refuted, ..r }.with("equivalent", false),
            })
        }
    }
}

fn select_heisenberg<'a>(doc: &'a Document, name: Option<&str>) -> CliResult<&'a HeisenbergSpec> {
    doc.heisenbergs()
        .filter(|(n, _)| name.map_or(true, |w| w == *n))
        .map(|(_, h)| h)
        .last()
        .ok_or_else(|| CliError::Input(String::from("no matching heisenberg declaration")))
}

fn orbit_point(spec: &HeisenbergSpec, a: &OrbitArgs) -> CliResult<OrbitPoint> {
    let values = match &a.point {
        Some(s) => parse_list(s, "point")?,
        None => vec![q(0); spec.n()],
    };
    let y0 = parse_rational(&a.y0, "--y0")?;
    let y1 = parse_rational(&a.ybar1, "--ybar1")?;
    Ok(OrbitPoint::real(spec, &values, y0, y1)?)
}

fn heisenberg(c: HeisenbergCmd) -> CliResult<Report> {
    let (a, what) = match c {
        HeisenbergCmd::Orbit(a) => (a, "orbit"),
        HeisenbergCmd::Kks(a) => (a, "kks"),
        HeisenbergCmd::Momentum(a) => (a, "momentum"),
    };
    let doc = load_document(&a.file)?;
    let spec = select_heisenberg(&doc, a.name.as_deref())?;
    let mu = orbit_point(spec, &a)?;
    let orbit = orbit_classify(spec, &mu)?;
    let (p, qd) = orbit.dims();
    let r = Report::new(format!("heisenberg {}", what), Verdict::Verified)
        .with("kind", orbit.kind.name())
        .with("dimension", format!("{}|{}", p, qd))
        .with("chart", chart_json(&orbit.chart))
        .with("invariants", orbit.invariants(spec));
    match what {
        "orbit" => Ok(r),
        "kks" => {
            let (orbit, w) = kks_form(spec, &mu)?;
            let rep = is_symplectic(&w, &default_points(orbit.chart.p()))?;
            Ok(Report { verdict: Verdict::from_bool(rep.is_homogeneously_symplectic()), ..r }
                .with("form", w.render(&orbit.chart))
                .with("closed", rep.closed)
                .with("symplectic", rep.is_symplectic())
                .with("homogeneously_symplectic", rep.is_homogeneously_symplectic()))
        }
        _ => {
            let m = momentum_check(spec, &mu)?;
            Ok(Report { verdict: Verdict::from_bool(m.is_strongly_hamiltonian()), ..r }
                .with("strongly_hamiltonian", m.is_strongly_hamiltonian())
                .with("field_failures", m.field_failures.iter().map(|k| k + 1).collect::<Vec<_>>())
                .with("cocycle", m.cocycle.as_ref().map_or(Value::Null, cochain_json)))
        }
    }
}

/// Reads a cover from its own format or from the first `cover` declaration
/// of a DSL file.
pub fn load_cover(path: &Path) -> CliResult<CoverData> {
    let text = read(path)?;
    if text.contains('{') {
        let doc = dsl::parse_with(&text, generators_from_env()?)
            .map_err(|e| CliError::Dsl { path: path.display().to_string(), source: e })?;
        return doc
            .covers()
            .next()
            .map(|(_, c)| c.clone())
            .ok_or_else(|| CliError::Input(format!("{}: no cover declaration", path.display())));
    }
    parse_cover(&text).map_err(|e| CliError::Input(format!("{}: {}", path.display(), e)))
}

fn cechcochain_json(c: &CechCochain) -> Value {
    let m: serde_json::Map<String, Value> = c
        .values()
        .map(|(k, v)| (k.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" "), q_json(v)))
        .collect();
    Value::Object(m)
}

fn cech(c: CechCmd) -> CliResult<Report> {
    let (a, what) = match c {
        CechCmd::Periods(a) => (a, "periods"),
        CechCmd::Prequantize(a) => (a, "prequantize"),
        CechCmd::Classify(a) => (a, "classify"),
    };
    let cover = load_cover(&a.file)?;
    let d = match &a.d {
        Some(s) => Some(parse_rational(s, "--d")?),
        None => cover.d.clone(),
    };
    let nerve = cover.nerve();
    let a_co = cover.cocycle();
    let per = period_group(nerve, &a_co)?;
    let mut r = Report::new(format!("cech {}", what), Verdict::Verified)
        .with("per", q_json(&per.generator))
        .with("cocycle", cechcochain_json(&a_co));
    if let Some(u) = &cover.unit {
        r.set("unit", u.clone());
    }
    match what {
        "periods" => Ok(r),
        "prequantize" => {
            let d = d.ok_or_else(|| CliError::Input(String::from("no `d` in the file and no --d")))?;
            let exists = prequantum_exists(&per, &d);
            r.set("d", q_json(&d));
            r.set("exists", exists);
            if !exists {
                r.verdict = Verdict::Refuted;
                return Ok(r);
            }
            let norm = normalize_to_periods(nerve, &a_co, &per)?;
            let f = cover.f.sub(&norm.correction);
            let tr = transition_data(nerve, &f, &cover.a0, &d)?;
            r.set("correction", cechcochain_json(&norm.correction));
            r.set("normalized", cechcochain_json(&norm.cocycle));
            r.set("transitions", cechcochain_json(&tr.g));
            r.set("transition_cocycle", tr.is_cocycle());
            r.verdict = Verdict::from_bool(tr.is_cocycle());
            Ok(r)
        }
        _ => {
            let d = d.unwrap_or_else(|| per.generator.clone());
            let h = classify_prequantum(nerve, &d);
            Ok(r.with("d", q_json(&d)).with("h1", h.render()).with("trivial", h.is_trivial()))
        }
    }
}

fn prequant(c: PrequantCmd) -> CliResult<Report> {
    let (a, what) = match c {
        PrequantCmd::Eta(a) => (a, "eta"),
        PrequantCmd::Qop(a) => (a, "qop"),
        PrequantCmd::Repcheck(a) => (a, "repcheck"),
    };
    let doc = load_document(&a.file)?;
    let (ci, theta, _) = select_form(&doc, Some(&a.theta))?;
    let base = doc.chart_at(ci).clone();
    let d = match &a.d {
        Some(s) => parse_rational(s, "--d")?,
        None => q(1),
    };
    let chart = PrequantChart::new(base.clone(), theta.clone(), d)?;
    let total = chart.total_chart();
    let f = eval_cfunction(&doc, ci, &a.f)?;
    let sections: Vec<SuperFunction> = match &a.sections {
        Some(s) => s
            .split(';')
            .filter(|x| !x.trim().is_empty())
            .map(|x| eval_function(&doc, ci, x))
            .collect::<CliResult<_>>()?,
        None => {
            let (p, qd) = (base.p(), base.q());
            let mut v = vec![SuperFunction::one(p, qd)];
            v.extend((0..p).map(|i| SuperFunction::coord(p, qd, i)));
            v
        }
    };
    let r = Report::new(format!("prequant {}", what), Verdict::Verified)
        .with("omega", chart.omega().render(&base))
        .with("f", f.render(&base));
    match what {
        "eta" => {
            let eta = eta_field(&chart, &f)?;
            let defect = lift_defect(&chart, &f, &eta);
            let sym = symmetry_check(&chart, &eta);
            Ok(Report { verdict: Verdict::from_bool(defect.is_zero() && sym), ..r }
                .with("bundle_chart", chart_json(&total))
                .with("eta", eta.render(&total))
                .with("lift_defect", defect.render(&total))
                .with("preserves_connection", sym))
        }
        "qop" => {
            let outs: Vec<Value> = sections
                .iter()
                .map(|s| quantum_op(&chart, &f, s).map(|o| json!({ "section": s.render(&base), "image": o.render(&base) })))
                .collect::<Result<_, _>>()?;
            Ok(r.with("images", outs))
        }
        _ => {
            let g_text = a.g.as_deref().ok_or_else(|| CliError::Input(String::from("repcheck needs --g")))?;
            let g = eval_cfunction(&doc, ci, g_text)?;
            let rep = rep_check(&chart, &f, &g, &sections)?;
            Ok(Report { verdict: Verdict::from_bool(rep.passed()), ..r }
                .with("g", g.render(&base))
                .with("bracket", rep.bracket.render(&base))
                .with("sections", sections.iter().map(|s| s.render(&base)).collect::<Vec<_>>())
                .with("failures", rep.failures.clone())
                .with("passed", rep.passed()))
        }
    }
}
