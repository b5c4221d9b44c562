//! `genmoon`: command-line front end to the genmoon kernel.
//!
//! Exit codes: 0 success, 1 a verification found a violation, 2 bad usage or data.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::{BigRational, Rational64};
use serde_json::{json, Value};

use genmoon::abgrp::FiniteAbelianGroup;
use genmoon::bkm;
use genmoon::chars::{self, ClassRecord, Momentum, Moonshine};
use genmoon::emcoh;
use genmoon::exact::{fmt_rational, parse_rational, UnityExponent};
use genmoon::fps::{self, fmt_exponent, Coeff, PuiseuxSeries};
use genmoon::lattice::{self, NHType};
use genmoon::Error;

const DEFAULT_DATA: &str = "moonshine.json";
const MAX_CHAR_ORDER: i64 = 200;
const MAX_FHAT_ORDER: i64 = 40;
const MAX_A: i64 = 8;
const MAX_EMBED_ORDER: i64 = 12;
const MAX_GROUP_ORDER: usize = 32;
const MAX_LATTICE_N: u64 = 48;

#[derive(Parser)]
#[command(name = "genmoon", version, about = "Exact checks for generalized moonshine data")]
struct Cli {
    /// Class data file [default: ./moonshine.json if present, else the built-in records].
    #[arg(long, global = true)]
    data: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Tsv)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Tsv,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Eilenberg–Mac Lane cochains on a finite abelian group.
    Coh {
        #[command(subcommand)]
        op: CohOp,
    },
    /// Commutativity of the embedding diagrams for one exponent tuple.
    EmbedCheck {
        /// Exponents a,b,c,d,f,g of z, w, t, z−w, z−t, w−t.
        #[arg(long)]
        exps: String,
        #[arg(long, default_value = "star")]
        diagram: String,
        #[arg(long, default_value_t = 6)]
        order: i64,
        /// Use the mutated sign for (w−t) expanded in the (z−w)-first space.
        #[arg(long)]
        flip: bool,
    },
    /// Discriminant form of L_{n|h±}.
    Lattice {
        /// Type such as 4|2+.
        #[arg(long = "type")]
        ty: String,
    },
    /// McKay–Thompson series of a class, optionally S-transformed and shifted.
    Char {
        #[arg(long)]
        class: String,
        #[arg(long, default_value_t = 10)]
        order: i64,
        /// Print T_g(−1/τ) instead of T_g(τ).
        #[arg(long)]
        s: bool,
        /// Apply τ ↦ τ + shift.
        #[arg(long, default_value_t = 0)]
        shift: i64,
    },
    /// A component F̂_{i,j}.
    Fhat {
        #[arg(long)]
        class: String,
        #[arg(long)]
        i: i64,
        #[arg(long)]
        j: i64,
        #[arg(long, default_value_t = 2)]
        order: i64,
        /// Also compare with the case-analysis construction where it applies.
        #[arg(long)]
        check: bool,
    },
    /// Virasoro Verma decomposition of T_g(−1/τ) (or of T_g with --untwisted).
    VermaDecompose {
        #[arg(long)]
        class: String,
        #[arg(long, default_value_t = 10)]
        order: u32,
        #[arg(long)]
        untwisted: bool,
    },
    /// No-ghost count for the twisted module, compared with the BRST Euler characteristic.
    Quant {
        #[arg(long)]
        class: String,
        /// Momentum norm (p, p).
        #[arg(long, conflicts_with = "zero", allow_hyphen_values = true)]
        norm: Option<String>,
        /// Zero momentum.
        #[arg(long)]
        zero: bool,
        #[arg(long)]
        untwisted: bool,
    },
    /// Root multiplicity table of 𝔪_g.
    Multtable {
        #[arg(long)]
        class: String,
        #[arg(long, default_value_t = 4)]
        amax: i64,
        #[arg(long, default_value_t = 4)]
        bmax: i64,
    },
    /// Denominator identity for J.
    Denom {
        #[arg(long, default_value_t = 6)]
        order: u32,
        /// Add this to c(1) before checking.
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        perturb_c1: i64,
    },
    /// Leading-term checks of the twisted characters.
    Hyp {
        #[arg(long)]
        class: String,
    },
    /// Checksums and consistency of a class data file.
    ValidateData {
        #[arg(long)]
        file: Option<PathBuf>,
    },
}

#[derive(Args)]
struct CohIn {
    /// Group such as 2 or 4,2; must match the file header when given.
    #[arg(long)]
    group: Option<String>,
    #[arg(long = "in")]
    input: PathBuf,
}

#[derive(Subcommand)]
enum CohOp {
    /// d¹ of a 1-cochain.
    D1(CohIn),
    /// d² of a 2-cochain, as (F, Ω).
    D2(CohIn),
    /// Pentagon and hexagon identities.
    Check(CohIn),
    /// Q(i) = Ω(i, i).
    Trace(CohIn),
    /// A normalized λ with d²(λ)·c trivial.
    Trivialize(CohIn),
    /// d²(η)·c.
    Act {
        #[command(flatten)]
        io: CohIn,
        #[arg(long)]
        eta: PathBuf,
    },
}

struct Outcome {
    text: String,
    json: Value,
    code: u8,
}

impl Outcome {
    fn ok(text: String, json: Value) -> Self {
        Outcome { text, json, code: 0 }
    }
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Range(msg.into())
}

fn guard(name: &str, v: i64, lo: i64, hi: i64) -> Result<(), Error> {
    if v < lo || v > hi {
        return Err(usage(format!("--{name} must lie in [{lo}, {hi}], got {v}")));
    }
    Ok(())
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::Data(format!("{}: {e}", path.display())))
}

fn load_db(path: &Option<PathBuf>) -> Result<Moonshine, Error> {
    match path {
        Some(p) => Moonshine::load(p),
        None if Path::new(DEFAULT_DATA).exists() => Moonshine::load(Path::new(DEFAULT_DATA)),
        None => Ok(chars::ShippedData::load()),
    }
}

fn group_guard(g: &FiniteAbelianGroup, want: &Option<String>) -> Result<(), Error> {
    if let Some(w) = want {
        let w = FiniteAbelianGroup::parse(w)?;
        if w != *g {
            return Err(Error::Invalid(format!("--group {w} does not match the file's group {g}")));
        }
    }
    if g.order() > MAX_GROUP_ORDER {
        return Err(usage(format!("group order {} exceeds the cap {MAX_GROUP_ORDER}", g.order())));
    }
    Ok(())
}

fn e_str(u: UnityExponent) -> String {
    format!("e({u})")
}

fn series_rows<C: Coeff>(s: &PuiseuxSeries<C>) -> (String, Value) {
    let mut text = String::new();
    let mut terms = Vec::new();
    for (r, c) in s.iter() {
        let _ = writeln!(text, "{}\t{}", fmt_exponent(r), c);
        terms.push(json!([fmt_exponent(r), c.to_string()]));
    }
    let prec = s.precision().map(fmt_exponent);
    if let Some(p) = &prec {
        let _ = writeln!(text, "O\t{p}");
    }
    (text, json!({ "terms": terms, "precision": prec }))
}

fn coh(op: CohOp) -> Result<Outcome, Error> {
    match op {
        CohOp::D1(io) => {
            let phi = emcoh::read_cochain1(&read(&io.input)?)?;
            group_guard(&phi.group, &io.group)?;
            let out = emcoh::write_cochain2(&emcoh::d1(&phi));
            Ok(Outcome::ok(out.clone(), json!({ "d1": out })))
        }
        CohOp::D2(io) => {
            let f = emcoh::read_cochain2(&read(&io.input)?)?;
            group_guard(&f.group, &io.group)?;
            let out = emcoh::write_cocycle(&emcoh::d2(&f));
            Ok(Outcome::ok(out.clone(), json!({ "d2": out })))
        }
        CohOp::Check(io) => {
            let c = emcoh::read_cocycle(&read(&io.input)?)?;
            group_guard(&c.group, &io.group)?;
            Ok(match emcoh::cocycle_violation(&c) {
                None => Outcome::ok("abelian 3-cocycle: ok\n".into(), json!({ "cocycle": true })),
                Some(v) => Outcome {
                    text: format!("not an abelian 3-cocycle: {v:?}\n"),
                    json: json!({ "cocycle": false, "violation": format!("{v:?}") }),
                    code: 1,
                },
            })
        }
        CohOp::Trace(io) => {
            let c = emcoh::read_cocycle(&read(&io.input)?)?;
            group_guard(&c.group, &io.group)?;
            let q = emcoh::trace(&c)?;
            let out = emcoh::write_quadratic(&q);
            Ok(Outcome::ok(out.clone(), json!({ "trace": out })))
        }
        CohOp::Trivialize(io) => {
            let c = emcoh::read_cocycle(&read(&io.input)?)?;
            group_guard(&c.group, &io.group)?;
            match emcoh::trivialize(&c)? {
                Some(l) => {
                    let out = emcoh::write_cochain2(&l);
                    Ok(Outcome::ok(out.clone(), json!({ "trivialization": out })))
                }
                None => {
                    let q = emcoh::trace(&c)?;
                    let r = (0..q.values().len()).find(|&r| !q.at(r).is_zero()).expect("nontrivial trace");
                    let x = c.group.fmt_element(&c.group.unrank(r));
                    let v = e_str(q.at(r));
                    Ok(Outcome {
                        text: format!("no trivialization: trace Q({x}) = {v}\n"),
                        json: json!({ "trivialization": null, "element": x, "trace": v }),
                        code: 1,
                    })
                }
            }
        }
        CohOp::Act { io, eta } => {
            let c = emcoh::read_cocycle(&read(&io.input)?)?;
            group_guard(&c.group, &io.group)?;
            let e = emcoh::read_cochain2(&read(&eta)?)?;
            let out = emcoh::write_cocycle(&emcoh::act_cochain(&e, &c)?);
            Ok(Outcome::ok(out.clone(), json!({ "act": out })))
        }
    }
}

fn embed_check(exps: &str, diagram: &str, order: i64, flip: bool) -> Result<Outcome, Error> {
    guard("order", order, 0, MAX_EMBED_ORDER)?;
    let e = fps::parse_exponents(exps)?;
    let d: fps::Diagram = diagram.parse()?;
    let rows = fps::check_diagram(&e, d, order, fps::Conventions { flip_wt_over_zw: flip })?;
    let mut text = String::new();
    let mut js = Vec::new();
    let mut code = 0;
    for r in &rows {
        let verdict = match &r.discrepancy {
            None => "commutes".to_string(),
            Some(x) => {
                code = 1;
                format!("differs {x}")
            }
        };
        let _ = writeln!(text, "{}\t{}\t{}\t{}", r.target, r.via.0, r.via.1, verdict);
        js.push(json!({ "target": r.target, "via": [r.via.0, r.via.1], "result": verdict }));
    }
    Ok(Outcome { text, json: json!({ "diagram": d.name(), "paths": js }), code })
}

fn lattice_cmd(ty: &str) -> Result<Outcome, Error> {
    let t: NHType = ty.parse()?;
    if t.n > MAX_LATTICE_N {
        return Err(usage(format!("n = {} exceeds the cap {MAX_LATTICE_N}", t.n)));
    }
    let d = lattice::build_discriminant(t)?;
    let mut text = format!("group\t{}\n", d.group);
    let mut elems = Vec::new();
    for r in 0..d.order() {
        let x = d.group.fmt_element(&d.group.unrank(r));
        let (a, b) = d.pairs[r];
        let _ = writeln!(text, "{x}\t({a},{b})\t{}\t{}", e_str(d.rho.at(r)), d.weight(r));
        elems.push(json!({ "element": x, "pair": [a, b], "rho": e_str(d.rho.at(r)), "weight": d.weight(r).to_string() }));
    }
    let mut checks = vec![
        ("order n^2", d.order() as u64 == t.n * t.n),
        ("rho quadratic", d.rho_is_quadratic()),
        ("rho * rho_bar trivial", d.rho_times_bar_trivial()),
        ("weights match rho_bar", d.weights_match_rho_bar()),
        ("bilinear form", d.bilinear_matches_ambient()),
    ];
    if t.h <= 2 {
        checks.push(("shear", lattice::shear_check(t)?));
    }
    let mut code = 0;
    for (name, ok) in &checks {
        let _ = writeln!(text, "# {name}\t{}", if *ok { "pass" } else { "FAIL" });
        if !ok {
            code = 1;
        }
    }
    let cj: Vec<Value> = checks.iter().map(|(n, ok)| json!({ "check": n, "pass": ok })).collect();
    Ok(Outcome { text, json: json!({ "type": t.to_string(), "group": d.group.to_string(), "elements": elems, "checks": cj }), code })
}

fn char_cmd(db: &Moonshine, class: &str, order: i64, s: bool, shift: i64) -> Result<Outcome, Error> {
    guard("order", order, 0, MAX_CHAR_ORDER)?;
    let rec = db.get(class)?;
    let base = if s { chars::s_transform(&rec.series, order)? } else { chars::expand_eta_combination(&rec.series, order)? };
    let (text, js) = if shift != 0 { series_rows(&base.to_cyclotomic().tau_shift(shift)) } else { series_rows(&base) };
    Ok(Outcome::ok(text, json!({ "class": rec.name, "s": s, "shift": shift, "series": js })))
}

fn fhat_cmd(db: &Moonshine, class: &str, i: i64, j: i64, order: i64, check: bool) -> Result<Outcome, Error> {
    guard("order", order, 0, MAX_FHAT_ORDER)?;
    let rec = db.get(class)?;
    let f = chars::fhat(db, rec, i, j, order)?.series;
    let (mut text, js) = series_rows(&f);
    let mut code = 0;
    let mut cj = Value::Null;
    if check {
        match chars::fhat_by_cases(db, rec, i, j, order) {
            Ok(g) => {
                let ok = f.agrees_with(&g);
                let _ = writeln!(text, "# case analysis\t{}", if ok { "agrees" } else { "DIFFERS" });
                cj = json!(ok);
                if !ok {
                    code = 1;
                }
            }
            Err(Error::Unsupported(m)) => {
                let _ = writeln!(text, "# case analysis\tnot applicable: {m}");
            }
            Err(e) => return Err(e),
        }
    }
    Ok(Outcome { text, json: json!({ "class": rec.name, "i": i, "j": j, "series": js, "cases_agree": cj }), code })
}

fn character(rec: &ClassRecord, untwisted: bool, order: i64) -> Result<fps::QSeries, Error> {
    if untwisted {
        chars::expand_eta_combination(&rec.series, order)
    } else {
        chars::s_transform(&rec.series, order)
    }
}

fn verma_cmd(db: &Moonshine, class: &str, order: u32, untwisted: bool) -> Result<Outcome, Error> {
    guard("order", order as i64, 0, MAX_CHAR_ORDER)?;
    let rec = db.get(class)?;
    let ch = character(rec, untwisted, order as i64 + 1)?;
    let d = chars::verma_decompose(&ch, order);
    let mut text = String::new();
    let mut js = Vec::new();
    for (r, m) in &d {
        let h = r + 1;
        let _ = writeln!(text, "{}\t{}\t{}", fmt_exponent(*r), fmt_exponent(h), fmt_rational(m));
        js.push(json!({ "exponent": fmt_exponent(*r), "lowest_weight": fmt_exponent(h), "mult": fmt_rational(m) }));
    }
    Ok(Outcome::ok(text, json!({ "class": rec.name, "decomposition": js })))
}

fn parse_q(s: &str) -> Result<Rational64, Error> {
    let q: BigRational = parse_rational(s).map_err(|e| Error::Parse(e.to_string()))?;
    use num_traits::ToPrimitive;
    match (q.numer().to_i64(), q.denom().to_i64()) {
        (Some(n), Some(d)) => Ok(Rational64::new(n, d)),
        _ => Err(usage(format!("{s} is too large"))),
    }
}

fn quant_cmd(db: &Moonshine, class: &str, norm: Option<String>, zero: bool, untwisted: bool) -> Result<Outcome, Error> {
    let rec = db.get(class)?;
    match (norm, zero) {
        (None, true) => {
            let ch = character(rec, untwisted, 2)?.mul_q_power(Rational64::from_integer(1));
            let q = chars::quant_dim(&ch, Momentum::Zero)?;
            Ok(Outcome::ok(format!("quant\t{}\n", fmt_rational(&q)), json!({ "class": rec.name, "momentum": "zero", "quant": fmt_rational(&q) })))
        }
        (Some(n), false) => {
            let p = parse_q(&n)?;
            if p == Rational64::from_integer(0) {
                return Err(usage("use --zero for zero momentum"));
            }
            let top = (-p).floor().to_integer() + 1;
            guard("norm", -top, -MAX_CHAR_ORDER, MAX_CHAR_ORDER)?;
            let ch = character(rec, untwisted, top.max(1))?;
            let q = chars::quant_dim(&ch.mul_q_power(Rational64::from_integer(1)), Momentum::Norm(p))?;
            let b = chars::brst_euler(&ch, p)?;
            let agree = q == b;
            Ok(Outcome {
                text: format!("quant\t{}\nbrst\t{}\nagree\t{agree}\n", fmt_rational(&q), fmt_rational(&b)),
                json: json!({ "class": rec.name, "norm": fmt_exponent(p), "quant": fmt_rational(&q), "brst": fmt_rational(&b), "agree": agree }),
                code: if agree { 0 } else { 1 },
            })
        }
        _ => Err(usage("give exactly one of --norm or --zero")),
    }
}

fn multtable_cmd(db: &Moonshine, class: &str, amax: i64, bmax: i64) -> Result<Outcome, Error> {
    let rec = db.get(class)?;
    let n = rec.level as i64;
    guard("amax", amax, 0, MAX_A)?;
    guard("bmax", bmax, 0, 4 * n.max(2))?;
    let t = bkm::mult_table(db, rec, amax, bmax)?;
    let rep = bkm::check_bkm_truncation(&t);
    let mut text = t.to_string();
    let summary = json!({
        "class": rec.name,
        "passed": rep.passed(),
        "violations": rep.violations,
        "real_roots": rep.real_roots,
        "regular_counts": rep.regular_counts,
        "max_real_norm": rep.max_real_norm.map(fmt_exponent),
    });
    let _ = writeln!(text, "# {summary}");
    let rows: Vec<Value> = t.rows().map(|(a, b, m)| json!([a, b, m.to_string()])).collect();
    Ok(Outcome { text, json: json!({ "table": rows, "checks": summary }), code: if rep.passed() { 0 } else { 1 } })
}

fn denom_cmd(db: &Moonshine, order: u32, perturb: i64) -> Result<Outcome, Error> {
    guard("order", order as i64, 0, bkm::MAX_DENOM_ORDER as i64)?;
    let d = order as usize;
    let mut c = bkm::j_coefficients(db, (d + 1) * (d + 1) / 4 + 2)?;
    c[2] += perturb;
    let r = bkm::denominator_check_with(&c, order)?;
    let (text, js) = match &r.first_discrepancy {
        None => (format!("equal through total degree {order}\tc(0) = {}\n", r.c0), json!({ "equal": true, "c0": r.c0.to_string() })),
        Some(((a, b), l, rr)) => (
            format!("differs at p^{a} q^{b}: product side {l}, J(p) - J(q) side {rr}\n"),
            json!({ "equal": false, "at": [a, b], "product": l.to_string(), "sum": rr.to_string() }),
        ),
    };
    Ok(Outcome { text, json: js, code: if r.equal() { 0 } else { 1 } })
}

fn hyp_cmd(db: &Moonshine, class: &str) -> Result<Outcome, Error> {
    let rec = db.get(class)?;
    let checks = bkm::hypothesis_checks(db, rec)?;
    let mut text = String::new();
    let mut code = 0;
    for c in &checks {
        let _ = writeln!(text, "{}\t{}\t{}", c.name, if c.passed { "pass" } else { "FAIL" }, c.detail);
        if !c.passed {
            code = 1;
        }
    }
    let js: Vec<Value> = checks.iter().map(|c| json!({ "check": c.name, "pass": c.passed, "detail": c.detail })).collect();
    Ok(Outcome { text, json: json!({ "class": rec.name, "checks": js }), code })
}

fn validate_cmd(path: Option<PathBuf>) -> Result<Outcome, Error> {
    let db = load_db(&path)?;
    let path = path.map_or_else(|| DEFAULT_DATA.to_string(), |p| p.display().to_string());
    let reports = chars::validate_data(&db);
    let mut text = String::new();
    let mut js = Vec::new();
    let mut code = 0;
    for r in &reports {
        text.push_str(&r.to_string());
        if !r.passed() {
            code = 1;
        }
        let checks: Vec<Value> = r
            .checks
            .iter()
            .map(|(n, o)| match o {
                chars::CheckOutcome::Pass => json!({ "check": n, "pass": true }),
                chars::CheckOutcome::Fail(m) => json!({ "check": n, "pass": false, "detail": m }),
            })
            .collect();
        js.push(json!({ "class": r.class, "checks": checks }));
    }
    Ok(Outcome { text, json: json!({ "file": path, "records": js }), code })
}

fn run(cli: Cli) -> Result<Outcome, Error> {
    match cli.cmd {
        Cmd::Coh { op } => coh(op),
        Cmd::EmbedCheck { exps, diagram, order, flip } => embed_check(&exps, &diagram, order, flip),
        Cmd::Lattice { ty } => lattice_cmd(&ty),
        Cmd::Char { class, order, s, shift } => char_cmd(&load_db(&cli.data)?, &class, order, s, shift),
        Cmd::Fhat { class, i, j, order, check } => fhat_cmd(&load_db(&cli.data)?, &class, i, j, order, check),
        Cmd::VermaDecompose { class, order, untwisted } => verma_cmd(&load_db(&cli.data)?, &class, order, untwisted),
        Cmd::Quant { class, norm, zero, untwisted } => quant_cmd(&load_db(&cli.data)?, &class, norm, zero, untwisted),
        Cmd::Multtable { class, amax, bmax } => multtable_cmd(&load_db(&cli.data)?, &class, amax, bmax),
        Cmd::Denom { order, perturb_c1 } => denom_cmd(&load_db(&cli.data)?, order, perturb_c1),
        Cmd::Hyp { class } => hyp_cmd(&load_db(&cli.data)?, &class),
        Cmd::ValidateData { file } => validate_cmd(file.or(cli.data)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format;
    match run(cli) {
        Ok(o) => {
            let mut out = std::io::stdout().lock();
            // A closed pipe is not an error for a filter-style tool.
            let _ = match format {
                Format::Tsv => write!(out, "{}", o.text),
                Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&o.json).expect("json")),
            };
            ExitCode::from(o.code)
        }
        Err(e) => {
            eprintln!("genmoon: {e}");
            ExitCode::from(match e {
                Error::Check(_) => 1,
                _ => 2,
            })
        }
    }
}
