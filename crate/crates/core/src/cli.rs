//! Command-line front end: argument parsing, rendering, and the verification suites.

use std::ffi::OsString;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::{BigRational, Rational64};
use rand::SeedableRng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cherednik_pairing::{vanishes_through, Pairing};
use crate::daha_ops::{check_relations, random_poly};
use crate::error::{Error, Result};
use crate::group_ring::{LaurentPoly, Poly, QTScalar, TMode};
use crate::macdonald_engine::Engine;
use crate::module_characters::{check_module, Family, LieData};
use crate::root_system::{RootSystem, Weight};
use crate::weyl_group::{all_elements, cherednik_leq, cherednik_leq_bruhat, length_lemmas_check, ParabolicJ};

#[derive(Debug, Parser)]
#[command(name = "paramac", version, about = "Nonsymmetric and parasymmetric Macdonald polynomials")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Nonsymmetric E_λ.
    Nonsym(PolyArgs),
    /// Parasymmetric E^J_λ.
    Parasym(PolyArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Plain,
    Json,
    Latex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Orders,
    Daha,
    Orthogonality,
    Specialization,
    Characters,
    Lemmas,
}

#[derive(Debug, Args)]
pub struct PolyArgs {
    /// Cartan type, e.g. A2.
    #[arg(long = "type")]
    pub ty: String,
    /// Parabolic subset as comma-separated 1-based indices.
    #[arg(long = "J", default_value = "")]
    pub j: String,
    /// Weight in fundamental-weight coordinates, comma-separated.
    #[arg(long, allow_hyphen_values = true)]
    pub weight: String,
    #[arg(long, value_enum, default_value = "plain")]
    pub format: Format,
    /// Specialize at t = 0.
    #[arg(long, conflicts_with = "tinf")]
    pub t0: bool,
    /// Specialize at t = ∞.
    #[arg(long)]
    pub tinf: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub suite: Suite,
    #[arg(long = "type")]
    pub ty: String,
    /// Restrict to one parabolic subset (default: every subset).
    #[arg(long = "J")]
    pub j: Option<String>,
    /// q-order of pairing checks.
    #[arg(long = "N", default_value_t = 8)]
    pub n: usize,
    /// q-degree bound for characters.
    #[arg(long, default_value_t = 5)]
    pub qmax: u32,
    /// Radius of the weight box (default 2 in rank 1, else 1).
    #[arg(long)]
    pub depth: Option<i64>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

pub fn parse_weight(rs: &RootSystem, s: &str) -> Result<Weight> {
    let w: Weight = s
        .split(',')
        .map(|x| x.trim().parse::<i64>().map_err(|_| Error::Parse(format!("bad weight entry {x:?}"))))
        .collect::<Result<_>>()?;
    if w.len() != rs.rank() {
        return Err(Error::Parse(format!("weight {s:?} has {} entries, rank is {}", w.len(), rs.rank())));
    }
    Ok(w)
}

pub fn parse_j(rs: &RootSystem, s: &str) -> Result<ParabolicJ> {
    if s.trim().is_empty() {
        return Ok(ParabolicJ::empty());
    }
    let idx: Vec<usize> = s
        .split(',')
        .map(|x| match x.trim().parse::<usize>() {
            Ok(i) if i >= 1 => Ok(i - 1),
            _ => Err(Error::Parse(format!("bad J entry {x:?}"))),
        })
        .collect::<Result<_>>()?;
    ParabolicJ::new(rs, idx).map_err(|e| Error::Parse(e.to_string()))
}

// ---------------------------------------------------------------- rendering

fn is_compound(c: &QTScalar) -> bool {
    !(c.is_polynomial() && c.numerator().len() == 1)
}

fn weight_plain(w: &Weight) -> String {
    let parts: Vec<String> = w.iter().map(|x| x.to_string()).collect();
    format!("X[{}]", parts.join(","))
}

fn weight_latex(w: &Weight) -> String {
    let parts: Vec<String> = w.iter().map(|x| x.to_string()).collect();
    if w.len() == 1 {
        format!("X^{{{}}}", parts[0])
    } else {
        format!("X^{{({})}}", parts.join(","))
    }
}

fn rational_latex(c: &BigRational) -> String {
    if c.is_integer() {
        c.to_string()
    } else {
        format!("\\frac{{{}}}{{{}}}", c.numer(), c.denom())
    }
}

fn poly_latex(p: &Poly) -> String {
    use num_traits::{One, Signed, Zero};
    if p.is_zero() {
        return "0".into();
    }
    let mut s = String::new();
    for (idx, ((qe, te), c)) in p.terms().enumerate() {
        let neg = c.is_negative();
        if idx == 0 {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        let a = c.abs();
        let mut mono = String::new();
        if !qe.is_zero() {
            mono.push('q');
            if !qe.is_one() {
                mono.push_str(&format!("^{{{qe}}}"));
            }
        }
        if *te != 0 {
            mono.push('t');
            if *te != 1 {
                mono.push_str(&format!("^{{{te}}}"));
            }
        }
        if mono.is_empty() {
            s.push_str(&rational_latex(&a));
        } else {
            if !a.is_one() {
                s.push_str(&rational_latex(&a));
            }
            s.push_str(&mono);
        }
    }
    s
}

fn scalar_latex(c: &QTScalar) -> String {
    if c.is_polynomial() {
        return poly_latex(c.numerator());
    }
    let den: String = c
        .denominator_factors()
        .iter()
        .map(|(p, k)| if *k == 1 { format!("({})", poly_latex(p)) } else { format!("({})^{{{k}}}", poly_latex(p)) })
        .collect();
    format!("\\frac{{{}}}{{{}}}", poly_latex(c.numerator()), den)
}

/// Text form of a polynomial under the canonical order (weights descending).
pub fn render(p: &LaurentPoly, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string(&terms_json(p)).expect("terms serialize"),
        Format::Plain | Format::Latex => {
            let latex = format == Format::Latex;
            let terms: Vec<(&Weight, &QTScalar)> = p.terms().rev().collect();
            if terms.is_empty() {
                return "0".into();
            }
            let mut s = String::new();
            for (idx, (w, c)) in terms.iter().enumerate() {
                let neg = c.is_negative_monomial();
                let c = if neg { c.neg() } else { (*c).clone() };
                let body = if w.iter().all(|&x| x == 0) {
                    if latex {
                        scalar_latex(&c)
                    } else if is_compound(&c) && terms.len() > 1 {
                        format!("({c})")
                    } else {
                        c.to_string()
                    }
                } else {
                    let x = if latex { weight_latex(w) } else { weight_plain(w) };
                    if c.is_one() {
                        x
                    } else if latex {
                        let cs = scalar_latex(&c);
                        if c.is_polynomial() && c.numerator().len() > 1 {
                            format!("({cs}){x}")
                        } else {
                            format!("{cs}{x}")
                        }
                    } else if is_compound(&c) {
                        format!("({c})*{x}")
                    } else {
                        format!("{c}*{x}")
                    }
                };
                if idx == 0 {
                    if neg {
                        s.push('-');
                    }
                } else {
                    s.push_str(if neg { " - " } else { " + " });
                }
                s.push_str(&body);
            }
            s
        }
    }
}

/// [q numerator, q denominator, t degree, rational coefficient].
pub type MonoJson = (i64, i64, i64, String);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoeffJson {
    pub num: Vec<MonoJson>,
    pub den: Vec<MonoJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub weight: Weight,
    pub coeff: CoeffJson,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    #[serde(rename = "type")]
    pub ty: String,
    #[serde(rename = "J")]
    pub j: Vec<usize>,
    pub weight: Weight,
    pub terms: Vec<TermJson>,
}

fn poly_json(p: &Poly) -> Vec<MonoJson> {
    p.terms().map(|((qe, te), c)| (*qe.numer(), *qe.denom(), *te, c.to_string())).collect()
}

fn poly_from_json(m: &[MonoJson]) -> Result<Poly> {
    let mut p = Poly::zero();
    for (qn, qd, te, c) in m {
        if *qd <= 0 {
            return Err(Error::Parse(format!("bad q exponent {qn}/{qd}")));
        }
        let c: BigRational = c.parse().map_err(|_| Error::Parse(format!("bad coefficient {c:?}")))?;
        p.add_term((Rational64::new(*qn, *qd), *te), c);
    }
    Ok(p)
}

fn terms_json(p: &LaurentPoly) -> Vec<TermJson> {
    p.terms()
        .rev()
        .map(|(w, c)| TermJson {
            weight: w.clone(),
            coeff: CoeffJson { num: poly_json(c.numerator()), den: poly_json(&c.denominator()) },
        })
        .collect()
}

pub fn to_json(rs: &RootSystem, j: &ParabolicJ, lambda: &Weight, p: &LaurentPoly) -> PolyJson {
    PolyJson {
        ty: format!("{}{}", rs.ctype.series, rs.ctype.rank),
        j: j.one_based(),
        weight: lambda.clone(),
        terms: terms_json(p),
    }
}

pub fn from_json(doc: &PolyJson) -> Result<LaurentPoly> {
    let mut out = LaurentPoly::zero();
    for t in &doc.terms {
        let num = poly_from_json(&t.coeff.num)?;
        let den = poly_from_json(&t.coeff.den)?;
        if den.is_zero() {
            return Err(Error::Parse("zero denominator".into()));
        }
        out.add_term(t.weight.clone(), QTScalar::from_fraction(num, &den));
    }
    Ok(out)
}

// ---------------------------------------------------------------- suites

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl CheckResult {
    fn new(name: impl Into<String>, passed: bool, witness: Option<String>) -> Self {
        CheckResult { name: name.into(), passed, witness: if passed { None } else { witness } }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    #[serde(rename = "type")]
    pub ty: String,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

/// All weights with coordinates in [−r, r].
pub fn weight_box(rank: usize, r: i64) -> Vec<Weight> {
    let mut out: Vec<Weight> = vec![Vec::new()];
    for _ in 0..rank {
        out = out
            .into_iter()
            .flat_map(|p| {
                (-r..=r).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out
}

fn subsets_or(rs: &RootSystem, j: &Option<ParabolicJ>) -> Vec<ParabolicJ> {
    match j {
        Some(j) => vec![j.clone()],
        None => ParabolicJ::full(rs).subsets(),
    }
}

fn fmt_j(j: &ParabolicJ) -> String {
    format!("{:?}", j.one_based())
}

pub struct SuiteConfig {
    pub j: Option<ParabolicJ>,
    pub n: usize,
    pub qmax: u32,
    pub radius: i64,
    pub seed: u64,
}

pub fn suite_orders(rs: &RootSystem, cfg: &SuiteConfig) -> Vec<CheckResult> {
    let w = all_elements(rs);
    let mut bad = None;
    for a in &w {
        for b in &w {
            if a.bruhat_geq(rs, b) != a.bruhat_geq_subword(rs, b) {
                bad.get_or_insert(format!("{:?} vs {:?}", a.word(), b.word()));
            }
        }
    }
    let bruhat = CheckResult::new("bruhat-subword", bad.is_none(), bad);
    let weights = weight_box(rs.rank(), cfg.radius);
    let mut bad = None;
    for l in &weights {
        for m in &weights {
            if cherednik_leq(rs, l, m) != cherednik_leq_bruhat(rs, l, m) {
                bad.get_or_insert(format!("{l:?} vs {m:?}"));
            }
        }
    }
    vec![bruhat, CheckResult::new("cherednik-order-bruhat", bad.is_none(), bad)]
}

pub fn suite_daha(engine: &Engine, cfg: &SuiteConfig) -> Result<Vec<CheckResult>> {
    Ok(check_relations(&engine.daha, 50, cfg.seed)?
        .into_iter()
        .map(|c| {
            let w = format!("{} of {} trials failed", c.failures, c.trials);
            CheckResult::new(c.relation, c.passed(), Some(w))
        })
        .collect())
}

pub fn suite_orthogonality(engine: &Engine, cfg: &SuiteConfig) -> Result<Vec<CheckResult>> {
    let rs = engine.rs();
    let p = Pairing::new(rs, cfg.n);
    let mut out = Vec::new();
    for j in subsets_or(rs, &cfg.j) {
        let ws: Vec<Weight> = weight_box(rs.rank(), cfg.radius).into_iter().filter(|w| j.is_antidominant(w)).collect();
        let es: Vec<LaurentPoly> = ws.iter().map(|w| engine.parasym_e(&j, w).map(|r| r.poly)).collect::<Result<_>>()?;
        let mut bad = None;
        for a in 0..ws.len() {
            for b in 0..ws.len() {
                if a != b {
                    let s = p.pair_j(&engine.daha, &j, &es[a], &es[b])?;
                    if !vanishes_through(&s, cfg.n as i64) {
                        bad.get_or_insert(format!("<E^J_{:?}, E^J_{:?}> = {s}", ws[a], ws[b]));
                    }
                }
            }
        }
        out.push(CheckResult::new(format!("orthogonality J={}", fmt_j(&j)), bad.is_none(), bad));
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut bad = None;
    for trial in 0..4 {
        let f = random_poly(&mut rng, rs.rank(), 2, 1);
        let g = random_poly(&mut rng, rs.rank(), 2, 1);
        for i in 0..=rs.rank() {
            let lhs = p.pair(&engine.daha.apply_t_inv(i, &f)?, &g)?;
            let rhs = p.pair(&f, &engine.daha.apply_t(i, &g)?)?;
            if !vanishes_through(&lhs.sub(&rhs), cfg.n as i64) {
                bad.get_or_insert(format!("trial {trial}, i = {i}"));
            }
        }
    }
    out.push(CheckResult::new("adjunction", bad.is_none(), bad));
    Ok(out)
}

pub fn suite_specialization(engine: &Engine, cfg: &SuiteConfig) -> Result<Vec<CheckResult>> {
    let rs = engine.rs();
    let mut out = Vec::new();
    for j in subsets_or(rs, &cfg.j) {
        let mut bad_spec = None;
        let mut bad_id = None;
        let mut bad_dec = None;
        for w in weight_box(rs.rank(), cfg.radius).into_iter().filter(|w| j.is_antidominant(w)) {
            let e = engine.parasym_e(&j, &w)?;
            let zero = e.poly.specialize_t(TMode::Zero);
            let inf = e.poly.specialize_t(TMode::Infinity);
            match (&zero, &inf) {
                (Ok(z), Ok(_)) => {
                    let e0 = engine.nonsym_e(&w)?.poly.specialize_t(TMode::Zero)?;
                    if *z != e0 {
                        bad_id.get_or_insert(format!("λ = {w:?}"));
                    }
                }
                _ => {
                    bad_spec.get_or_insert(format!("λ = {w:?}"));
                }
            }
            match engine.decompose_tinf(&j, &w) {
                Ok(c) => {
                    if c.iter().find(|(v, _)| *v == w).is_none_or(|(_, a)| !a.is_one()) {
                        bad_dec.get_or_insert(format!("λ = {w:?}: leading coefficient is not 1"));
                    }
                }
                Err(e) => {
                    bad_dec.get_or_insert(format!("λ = {w:?}: {e}"));
                }
            }
        }
        let tag = fmt_j(&j);
        out.push(CheckResult::new(format!("specializations defined J={tag}"), bad_spec.is_none(), bad_spec));
        out.push(CheckResult::new(format!("t=0 agrees with nonsymmetric J={tag}"), bad_id.is_none(), bad_id));
        out.push(CheckResult::new(format!("t=inf decomposition J={tag}"), bad_dec.is_none(), bad_dec));
    }
    Ok(out)
}

pub fn suite_characters(engine: &Engine, cfg: &SuiteConfig) -> Result<Vec<CheckResult>> {
    let rs = engine.rs();
    let mut out = Vec::new();
    for j in subsets_or(rs, &cfg.j) {
        let ld = LieData::new(rs, j.clone(), cfg.qmax)?;
        for fam in [Family::D, Family::U] {
            let ws: Vec<Weight> = weight_box(rs.rank(), cfg.radius).into_iter().filter(|w| j.is_antidominant(w)).collect();
            let reps = ws
                .par_iter()
                .map(|w| check_module(engine, &ld, fam, w, cfg.qmax))
                .collect::<Result<Vec<_>>>()?;
            let bad = ws.iter().zip(&reps).find(|(_, r)| !r.passed).map(|(w, r)| {
                format!("λ = {w:?}: {}", serde_json::to_string(r).unwrap_or_default())
            });
            out.push(CheckResult::new(format!("{fam:?} characters J={}", fmt_j(&j)), bad.is_none(), bad));
        }
    }
    Ok(out)
}

pub fn suite_lemmas(rs: &RootSystem) -> Vec<CheckResult> {
    let mut out = Vec::new();
    for j in ParabolicJ::full(rs).subsets() {
        for k in j.subsets() {
            let rep = length_lemmas_check(rs, &j, &k);
            out.push(CheckResult::new(
                format!("length lemmas J={} K={}", fmt_j(&j), fmt_j(&k)),
                rep.passed(),
                rep.failures.first().cloned(),
            ));
        }
    }
    out
}

pub fn run_suite(suite: Suite, rs: &RootSystem, cfg: &SuiteConfig) -> Result<SuiteReport> {
    let engine = Engine::new(rs.clone());
    let checks = match suite {
        Suite::Orders => suite_orders(rs, cfg),
        Suite::Daha => suite_daha(&engine, cfg)?,
        Suite::Orthogonality => suite_orthogonality(&engine, cfg)?,
        Suite::Specialization => suite_specialization(&engine, cfg)?,
        Suite::Characters => suite_characters(&engine, cfg)?,
        Suite::Lemmas => suite_lemmas(rs),
    };
    Ok(SuiteReport {
        suite,
        ty: format!("{}{}", rs.ctype.series, rs.ctype.rank),
        passed: checks.iter().all(|c| c.passed),
        checks,
    })
}

// ---------------------------------------------------------------- dispatch

fn cmd_poly(args: &PolyArgs, parabolic: bool) -> Result<String> {
    let rs = RootSystem::from_name(&args.ty)?;
    let lambda = parse_weight(&rs, &args.weight)?;
    let j = if parabolic { parse_j(&rs, &args.j)? } else { ParabolicJ::empty() };
    let engine = Engine::new(rs.clone());
    let result = if parabolic { engine.parasym_e(&j, &lambda)? } else { engine.nonsym_e(&lambda)? };
    let poly = if args.t0 {
        engine.specialize_e(&result, TMode::Zero)?
    } else if args.tinf {
        engine.specialize_e(&result, TMode::Infinity)?
    } else {
        result.poly
    };
    Ok(match args.format {
        Format::Json => serde_json::to_string(&to_json(&rs, &j, &lambda, &poly)).expect("poly serializes"),
        f => render(&poly, f),
    })
}

fn cmd_verify(args: &VerifyArgs) -> Result<(String, bool)> {
    let rs = RootSystem::from_name(&args.ty)?;
    let j = args.j.as_deref().map(|s| parse_j(&rs, s)).transpose()?;
    let cfg = SuiteConfig {
        j,
        n: args.n,
        qmax: args.qmax,
        radius: args.depth.unwrap_or(if rs.rank() == 1 { 2 } else { 1 }),
        seed: args.seed,
    };
    let rep = run_suite(args.suite, &rs, &cfg)?;
    let text = match args.format {
        Format::Plain => {
            let mut lines: Vec<String> = rep
                .checks
                .iter()
                .map(|c| match &c.witness {
                    Some(w) => format!("FAIL {}: {w}", c.name),
                    None => format!("{} {}", if c.passed { "PASS" } else { "FAIL" }, c.name),
                })
                .collect();
            lines.push(if rep.passed { "pass".into() } else { "fail".into() });
            lines.join("\n")
        }
        _ => serde_json::to_string_pretty(&rep).expect("report serializes"),
    };
    Ok((text, rep.passed))
}

#[derive(Serialize)]
struct ErrorWitness {
    error: String,
    message: String,
    bug_signal: bool,
}

fn report_error(e: &Error) -> i32 {
    let debug = format!("{e:?}");
    let kind = debug.split(|c: char| !c.is_alphanumeric()).next().unwrap_or("Error").to_string();
    let w = ErrorWitness { error: kind, message: e.to_string(), bug_signal: e.is_bug_signal() };
    eprintln!("{}", serde_json::to_string(&w).expect("witness serializes"));
    e.exit_code()
}

/// Parse arguments, run, print, and return the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let outcome = match &cli.command {
        Command::Nonsym(a) => cmd_poly(a, false).map(|s| (s, true)),
        Command::Parasym(a) => cmd_poly(a, true).map(|s| (s, true)),
        Command::Verify(a) => cmd_verify(a),
    };
    match outcome {
        Ok((text, ok)) => {
            println!("{text}");
            if ok {
                0
            } else {
                1
            }
        }
        Err(e) => report_error(&e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rs(s: &str) -> RootSystem {
        RootSystem::from_name(s).unwrap()
    }

    #[test]
    fn parsing() {
        let r = rs("A2");
        assert_eq!(parse_weight(&r, "-1, 2").unwrap(), vec![-1, 2]);
        assert!(matches!(parse_weight(&r, "1"), Err(Error::Parse(_))));
        assert!(matches!(parse_weight(&r, "a,b"), Err(Error::Parse(_))));
        assert_eq!(parse_j(&r, "").unwrap(), ParabolicJ::empty());
        assert_eq!(parse_j(&r, "2").unwrap().one_based(), vec![2]);
        assert!(parse_j(&r, "0").is_err());
        assert!(parse_j(&r, "4").is_err());
    }

    #[test]
    fn rendering() {
        let one = LaurentPoly::one(1);
        assert_eq!(render(&one, Format::Latex), "1");
        assert_eq!(render(&one, Format::Plain), "1");
        let p = LaurentPoly::x(vec![1]).add(&LaurentPoly::x(vec![-1]));
        assert_eq!(render(&p, Format::Plain), "X[1] + X[-1]");
        assert_eq!(render(&p, Format::Latex), "X^{1} + X^{-1}");
        let c = QTScalar::one().sub(&QTScalar::t()).div(&QTScalar::one().sub(&QTScalar::q().mul(&QTScalar::t())));
        let p = LaurentPoly::x(vec![-1]).add(&LaurentPoly::monomial(vec![1], c));
        let s = render(&p, Format::Plain);
        assert!(s.starts_with('(') && s.ends_with("*X[1] + X[-1]"), "{s}");
        assert!(render(&p, Format::Latex).contains("\\frac{"));
        let m = LaurentPoly::monomial(vec![2], QTScalar::from_int(-3));
        assert_eq!(render(&m.add(&one), Format::Plain), "-3*X[2] + 1");
        assert_eq!(render(&LaurentPoly::zero(), Format::Plain), "0");
    }

    #[test]
    fn json_round_trip() {
        let r = rs("A2");
        let engine = Engine::new(r.clone());
        let j = ParabolicJ::new(&r, [0]).unwrap();
        for w in [vec![-1, 1], vec![0, -1], vec![-1, -1]] {
            let p = engine.parasym_e(&j, &w).unwrap().poly;
            let doc = to_json(&r, &j, &w, &p);
            let text = serde_json::to_string(&doc).unwrap();
            let back: PolyJson = serde_json::from_str(&text).unwrap();
            assert_eq!(back, doc);
            assert_eq!(from_json(&back).unwrap(), p);
        }
        let doc = to_json(&r, &j, &vec![0, 0], &LaurentPoly::one(2));
        assert_eq!(
            serde_json::to_string(&doc).unwrap(),
            r#"{"type":"A2","J":[1],"weight":[0,0],"terms":[{"weight":[0,0],"coeff":{"num":[[0,1,0,"1"]],"den":[[0,1,0,"1"]]}}]}"#
        );
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run(["paramac", "nonsym", "--type", "A1", "--weight", "1"]), 0);
        assert_eq!(run(["paramac", "nonsym", "--type", "Q1", "--weight", "1"]), 2);
        assert_eq!(run(["paramac", "nonsym", "--type", "A1", "--weight", "1,2"]), 2);
        assert_eq!(run(["paramac", "parasym", "--type", "A1", "--J", "1", "--weight", "1"]), 3);
        assert_eq!(run(["paramac", "frobnicate"]), 2);
        assert_eq!(run(["paramac", "verify", "lemmas", "--type", "A2"]), 0);
        assert_eq!(run(["paramac", "verify", "characters", "--type", "B2"]), 3);
    }

    #[test]
    fn poly_commands() {
        let args = |w: &str, t0: bool| PolyArgs {
            ty: "A1".into(),
            j: "1".into(),
            weight: w.into(),
            format: Format::Plain,
            t0,
            tinf: false,
        };
        assert_eq!(cmd_poly(&args("1", false), false).unwrap(), "X[1]");
        assert_eq!(cmd_poly(&args("0", false), true).unwrap(), "1");
        assert_eq!(cmd_poly(&args("-1", true), true).unwrap(), "X[1] + X[-1]");
    }
}
