//! The `kmdecomp` command line: parse flags, read JSON inputs, dispatch,
//! and emit a run report. Every `verified` flag is the outcome of a second,
//! independent computation on the result.

use std::fs;
use std::io::{Read, Write};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::coxeter::{
    classify, find_straight_candidate, is_finite_type, is_finite_type_by_minors, is_straight, Gcm, WeylElement,
    STRAIGHT_N_MAX,
};
use crate::decomp::{
    birkhoff, birkhoff_by_reversal, cartan, diag_test, hole_closed_form, hole_witness_in, iwasawa, kak_word,
    nucleus_member, polar, sl2_sqrt, DiagVerdict, NucleusVerdict, Side, SqrtObstruction,
};
use crate::dynkin::{exhaustive_cover, kuk_bound};
use crate::error::{Error, Result};
use crate::involution::{is_member_with, tau, theta, ARule, SubsetTag, ThetaSpec};
use crate::matgrp::{GroupElement, Matrix, Model};
use crate::ring::{LaurentPoly, Ring, RingSpec, Scalar};
use crate::suite::{acceptance_suite, lemma_suite};

/// Largest diagram for which `cover` re-checks against full enumeration.
const COVER_RECHECK_MAX_N: usize = 9;

#[derive(Parser, Debug)]
#[command(
    name = "kmdecomp",
    version,
    about = "Exact decompositions in SL_n models of split Kac-Moody groups"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalFlags,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalFlags {
    /// spherical or affine; picks the default ring for inputs without one
    #[arg(long, global = true)]
    pub model: Option<String>,
    /// q, qi, laurent_q or laurent_qi
    #[arg(long, global = true)]
    pub ring: Option<String>,
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tol: f64,
    /// Input JSON file, or - for stdin
    #[arg(long = "in", global = true, value_name = "PATH")]
    pub input: Option<String>,
    /// Output file for the report, or - for stdout
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<String>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// The twist map g -> g theta(g)^-1
    Tau,
    /// Membership in K, Q, T, M, A, U+, U-, B+ or B-
    Member {
        #[arg(long)]
        set: String,
        /// positivity or norm_form
        #[arg(long, default_value = "positivity")]
        a_rule: String,
    },
    /// g = k a u with a^2 and u exact, k numeric
    Iwasawa {
        #[arg(long, default_value = "+", allow_hyphen_values = true)]
        side: String,
    },
    /// g = u+ t u- on the big cell
    Birkhoff {
        #[arg(long)]
        allow_laurent: bool,
    },
    /// g = k1 a k2 over q, with the KAK word
    Cartan,
    /// g = p k over q, p symmetric positive definite
    Polar,
    /// Necessary test for conjugacy into T
    DiagTest,
    /// Exact square root in Q of a 2x2 theta-symmetric element
    Sl2Sqrt,
    /// Input is g (then v = tau(g)) or {"preimage": g, "v": v}
    Nucleus {
        #[arg(long, default_value_t = crate::decomp::DEFAULT_CHAIN_DEPTH)]
        depth: usize,
    },
    /// The non-diagonalizable twist in SL_{n+1}(F[t, t^-1])
    Hole {
        #[arg(long, default_value_t = 1)]
        n: usize,
    },
    /// Weyl group computations on a GCM file
    Coxeter {
        #[command(subcommand)]
        op: CoxeterOp,
    },
    /// Minimal spherical covering and the resulting KUK bound
    Cover {
        #[arg(long, value_name = "PATH")]
        gcm: String,
    },
    /// Built-in self-checks
    Suite {
        #[arg(long)]
        lemmas: bool,
        #[arg(long)]
        acceptance: bool,
    },
}

#[derive(Args, Debug, Clone)]
pub struct WordArgs {
    #[arg(long, value_name = "PATH")]
    pub gcm: String,
    /// Comma-separated generator indices
    #[arg(long, allow_hyphen_values = true)]
    pub word: String,
    /// 0 or 1; defaults to the GCM file's index_base, else 0 if the word
    /// contains 0, else 1
    #[arg(long)]
    pub index_base: Option<usize>,
}

#[derive(Subcommand, Debug, Clone)]
pub enum CoxeterOp {
    Length {
        #[command(flatten)]
        w: WordArgs,
    },
    Straight {
        #[command(flatten)]
        w: WordArgs,
        #[arg(long, default_value_t = STRAIGHT_N_MAX)]
        nmax: usize,
    },
    Finite {
        #[arg(long, value_name = "PATH")]
        gcm: String,
    },
    FindStraight {
        #[arg(long, value_name = "PATH")]
        gcm: String,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        /// Index base of the reported word; defaults to the GCM file's
        #[arg(long)]
        index_base: Option<usize>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Tau => "tau",
            Command::Member { .. } => "member",
            Command::Iwasawa { .. } => "iwasawa",
            Command::Birkhoff { .. } => "birkhoff",
            Command::Cartan => "cartan",
            Command::Polar => "polar",
            Command::DiagTest => "diag-test",
            Command::Sl2Sqrt => "sl2-sqrt",
            Command::Nucleus { .. } => "nucleus",
            Command::Hole { .. } => "hole",
            Command::Coxeter { op } => match op {
                CoxeterOp::Length { .. } => "coxeter length",
                CoxeterOp::Straight { .. } => "coxeter straight",
                CoxeterOp::Finite { .. } => "coxeter finite",
                CoxeterOp::FindStraight { .. } => "coxeter find-straight",
            },
            Command::Cover { .. } => "cover",
            Command::Suite { .. } => "suite",
        }
    }
}

/// What one invocation produced.
#[derive(Clone, Debug)]
pub struct RunReport {
    pub subcommand: String,
    pub inputs: Value,
    pub result: Value,
    pub verified: bool,
    pub elapsed_ms: f64,
    pub seed: u64,
}

impl RunReport {
    pub fn to_json(&self) -> Value {
        json!({
            "subcommand": self.subcommand,
            "inputs": self.inputs,
            "result": self.result,
            "verified": self.verified,
            "timing": {"elapsed_ms": self.elapsed_ms},
            "seed": self.seed,
        })
    }
}

/// Errors that describe the mathematics of a valid input rather than a
/// malformed request; they produce a report and exit code 2.
fn is_mathematical(e: &Error) -> bool {
    matches!(
        e,
        Error::OutsideBigCell(_) | Error::ConvergenceFailure(_) | Error::NotInTauG | Error::Internal(_)
    )
}

/// Parses `args` (program name first), runs the command and writes the
/// report. Returns the process exit code: 0 verified, 2 not verified or a
/// mathematical failure, 1 usage or parse error.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return 0;
            }
            let text = e.to_string();
            let first = text.lines().find(|l| !l.trim().is_empty()).unwrap_or("usage error");
            let _ = writeln!(stderr, "{first}");
            return 1;
        }
    };
    let start = Instant::now();
    let (result, verified, inputs) = match execute(&cli, stdin) {
        Ok(x) => x,
        Err((e, inputs)) if is_mathematical(&e) => (json!({"error": e.to_string()}), false, inputs),
        Err((e, _)) => {
            let _ = writeln!(stderr, "error: {e}");
            return 1;
        }
    };
    let report = RunReport {
        subcommand: cli.command.name().into(),
        inputs,
        result,
        verified,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
        seed: cli.global.seed,
    };
    let text = serde_json::to_string_pretty(&report.to_json()).expect("report serializes");
    match cli.global.out.as_deref() {
        None | Some("-") => {
            let _ = writeln!(stdout, "{text}");
        }
        Some(path) => {
            if let Err(e) = fs::write(path, text + "\n") {
                let _ = writeln!(stderr, "error: cannot write {path}: {e}");
                return 1;
            }
        }
    }
    if verified {
        0
    } else {
        2
    }
}

type Executed = (Value, bool, Value);

/// Runs the parsed command. Errors carry the echoed inputs so that
/// mathematical failures can still be reported.
pub fn execute(cli: &Cli, stdin: &mut dyn Read) -> std::result::Result<Executed, (Error, Value)> {
    let g = &cli.global;
    if !g.tol.is_finite() || g.tol <= 0.0 {
        return Err((
            Error::Parse(format!("--tol must be positive, got {}", g.tol)),
            Value::Null,
        ));
    }
    let mut inputs = json!({
        "model": g.model, "ring": g.ring, "tol": g.tol, "in": g.input, "seed": g.seed,
    });
    let out = dispatch(cli, stdin, &mut inputs);
    out.map(|(r, v)| (r, v, inputs.clone())).map_err(|e| (e, inputs))
}

fn dispatch(cli: &Cli, stdin: &mut dyn Read, inputs: &mut Value) -> Result<(Value, bool)> {
    let g = &cli.global;
    let tol = g.tol;
    let mut element = |inputs: &mut Value| -> Result<GroupElement> {
        let v = read_input(g, stdin)?;
        inputs["element"] = v.clone();
        parse_element(g, v)
    };
    match &cli.command {
        Command::Tau => {
            let x = element(inputs)?;
            let spec = ThetaSpec::for_element(&x);
            let v = tau(spec, &x)?;
            // second route: θ(v) = v^{-1} with an explicit inverse, and v θ(g) = g
            let symmetric = theta(spec, &v)? == v.inverse();
            let recovers = v.mul(&theta(spec, &x)?)? == x;
            Ok((json!({"tau": v.to_json(), "in_q": symmetric}), symmetric && recovers))
        }
        Command::Member { set, a_rule } => {
            let tag = SubsetTag::parse(set)?;
            let rule = parse_a_rule(a_rule)?;
            let x = element(inputs)?;
            let spec = ThetaSpec::for_element(&x);
            let answer = is_member_with(spec, tag, &x, rule)?;
            let second = membership_second_route(spec, tag, &x, rule)?;
            Ok((
                json!({"set": tag.name(), "member": answer, "a_rule": a_rule}),
                answer == second,
            ))
        }
        Command::Iwasawa { side } => {
            let side = Side::parse(side)?;
            let x = element(inputs)?;
            let f = iwasawa(&x, side, tol)?;
            let exact = iwasawa_exact_identity(&x, &f.a_squared, &f.u)?;
            let spec = ThetaSpec::for_element(&x);
            let u_tag = if side == Side::Plus {
                SubsetTag::UPlus
            } else {
                SubsetTag::UMinus
            };
            let shapes = crate::involution::is_member(spec, SubsetTag::A, &f.a_squared)?
                && crate::involution::is_member(spec, u_tag, &f.u)?;
            let mut r = f.to_json();
            r["exact_identity"] = json!(exact);
            Ok((r, f.verified() && exact && shapes))
        }
        Command::Birkhoff { allow_laurent } => {
            let x = element(inputs)?;
            let f = birkhoff(&x, *allow_laurent)?;
            let other = birkhoff_by_reversal(&x)?;
            let mut r = f.to_json();
            r["recomposes"] = json!(f.recompose() == x);
            r["routes_agree"] = json!(f == other);
            Ok((r, f.recompose() == x && f == other))
        }
        Command::Cartan => {
            let x = element(inputs)?;
            let c = cartan(&x, tol)?;
            let w = kak_word(&x, tol)?;
            let mut r = c.to_json();
            r["kak_word"] = w.to_json();
            let product: f64 = c.a.iter().product();
            let det_ok = (product - 1.0).abs() <= tol.max(1e-8);
            Ok((r, c.verified() && w.verified() && det_ok))
        }
        Command::Polar => {
            let x = element(inputs)?;
            let p = polar(&x, tol)?;
            Ok((p.to_json(), p.verified()))
        }
        Command::DiagTest => {
            let x = element(inputs)?;
            let d = diag_test(&x);
            let routes = d.charpoly == x.matrix().charpoly_cofactor();
            let consistent = match d.verdict {
                DiagVerdict::NotDiagonalizable => d
                    .obstruction
                    .as_ref()
                    .map_or(d.charpoly.constant_coefficients().is_some(), |(k, c)| {
                        !c.is_constant() && d.charpoly.coeff(*k) == *c
                    }),
                DiagVerdict::DiagonalizableNecessaryPass => d.roots.len() == x.n(),
            };
            let mut r = d.to_json();
            r["charpoly_routes_agree"] = json!(routes);
            Ok((r, routes && consistent))
        }
        Command::Sl2Sqrt => {
            let x = element(inputs)?;
            let c = sl2_sqrt(&x)?;
            let check = match (&c.root, c.reason) {
                (Some(h), _) => h.mul(h)? == x,
                (None, reason) => {
                    let recomputed = x.matrix().trace().plus(&LaurentPoly::int(2));
                    let same = c.obstruction.as_ref() == Some(&recomputed);
                    same && match reason {
                        Some(SqrtObstruction::TraceNotSquare) => recomputed.sqrt(x.ring().is_gaussian()).is_none(),
                        Some(SqrtObstruction::ZeroTrace) => recomputed.is_zero(),
                        _ => true,
                    }
                }
            };
            Ok((c.to_json(), check))
        }
        Command::Nucleus { depth } => {
            let raw = read_input(g, stdin)?;
            inputs["element"] = raw.clone();
            let (preimage, v) = match raw.get("preimage") {
                Some(p) => {
                    let p = parse_element(g, p.clone())?;
                    let v = match raw.get("v") {
                        Some(v) => parse_element(g, v.clone())?,
                        None => tau(ThetaSpec::for_element(&p), &p)?,
                    };
                    (p, v)
                }
                None => {
                    let p = parse_element(g, raw)?;
                    let v = tau(ThetaSpec::for_element(&p), &p)?;
                    (p, v)
                }
            };
            let c = nucleus_member(&v, &preimage, *depth)?;
            let ok = match c.verdict {
                NucleusVerdict::InNucleus => c.chain.len() == *depth && c.chain_passes(),
                NucleusVerdict::NotInNucleus => c.routes_agree != Some(false),
                NucleusVerdict::Inconclusive => c.routes_agree != Some(false),
            };
            let mut r = c.to_json();
            r["v"] = v.to_json();
            Ok((r, ok))
        }
        Command::Hole { n } => {
            let ring = match &g.ring {
                Some(r) => RingSpec::parse(r)?,
                None => RingSpec::LAURENT_Q,
            };
            inputs["n"] = json!(n);
            let w = hole_witness_in(*n, ring)?;
            let closed = w.charpoly == hole_closed_form(*n);
            let cofactor = w.charpoly == w.v.matrix().charpoly_cofactor();
            let d = diag_test(&w.v);
            let mut r = w.to_json();
            r["closed_form_agrees"] = json!(closed);
            r["cofactor_agrees"] = json!(cofactor);
            r["diag_test"] = d.to_json();
            if *n == 1 {
                r["sl2_sqrt"] = sl2_sqrt(&w.v)?.to_json();
            }
            Ok((r, closed && cofactor && d.verdict == DiagVerdict::NotDiagonalizable))
        }
        Command::Coxeter { op } => coxeter(op, inputs),
        Command::Cover { gcm } => {
            let (gcm, _) = read_gcm(gcm, inputs)?;
            let k = kuk_bound(&gcm);
            let parts_ok = k.covering.partition.iter().all(|p| {
                let sub = gcm.induced(p);
                is_finite_type_by_minors(&sub).unwrap_or_else(|_| is_finite_type(&sub))
            });
            let mut r = k.to_json();
            let optimal = if gcm.n() <= COVER_RECHECK_MAX_N {
                let e = exhaustive_cover(&gcm);
                r["exhaustive_r"] = json!(e.r());
                e.r() == k.covering.r()
            } else {
                true
            };
            Ok((r, parts_ok && optimal))
        }
        Command::Suite { lemmas, acceptance } => {
            let mut reports = Vec::new();
            if *lemmas || !*acceptance {
                reports.push(lemma_suite(g.seed));
            }
            if *acceptance {
                reports.push(acceptance_suite(g.seed));
            }
            let ok = reports.iter().all(|r| r.all_passed());
            Ok((json!(reports.iter().map(|r| r.to_json()).collect::<Vec<_>>()), ok))
        }
    }
}

fn coxeter(op: &CoxeterOp, inputs: &mut Value) -> Result<(Value, bool)> {
    match op {
        CoxeterOp::Length { w } => {
            let (x, base) = read_word(w, inputs)?;
            let l = x.length();
            let reduced = x.reduced_word();
            let back = WeylElement::from_word(x.gcm(), &reduced)?;
            let ok = back == x && reduced.len() == l && x.inverse().length() == l;
            Ok((
                json!({
                    "length": l,
                    "reduced_word": reduced.iter().map(|i| i + base).collect::<Vec<_>>(),
                    "index_base": base,
                    "reduced": x.is_reduced(),
                    "matrix": int_rows(&x),
                }),
                ok,
            ))
        }
        CoxeterOp::Straight { w, nmax } => {
            if *nmax < 2 {
                return Err(Error::PreconditionFailed(format!(
                    "--nmax must be at least 2, got {nmax}"
                )));
            }
            let (x, base) = read_word(w, inputs)?;
            let p = is_straight(&x, *nmax);
            // spot-check the matrix route against words for the first powers
            let mut ok = true;
            for j in 1..=(*nmax).min(4) {
                let word: Vec<usize> = x.word().iter().copied().cycle().take(j * x.word().len()).collect();
                ok &= WeylElement::from_word(x.gcm(), &word)?.length() == p.lengths[j - 1];
            }
            Ok((
                json!({"straight": p.straight, "degenerate": p.degenerate, "profile": p.lengths, "index_base": base}),
                ok,
            ))
        }
        CoxeterOp::Finite { gcm } => {
            let (gcm, _) = read_gcm(gcm, inputs)?;
            let catalog = is_finite_type(&gcm);
            let minors = match is_finite_type_by_minors(&gcm) {
                Ok(b) => Some(b),
                Err(Error::NotSymmetrizable) => None,
                Err(e) => return Err(e),
            };
            let components: Vec<Value> = classify(&gcm)
                .into_iter()
                .map(|(vs, label)| json!({"vertices": vs.iter().map(|v| v + 1).collect::<Vec<_>>(), "type": label}))
                .collect();
            Ok((
                json!({"finite": catalog, "minors_route": minors, "components": components}),
                minors.is_none_or(|m| m == catalog),
            ))
        }
        CoxeterOp::FindStraight { gcm, depth, index_base } => {
            let (gcm, file_base) = read_gcm(gcm, inputs)?;
            let base = index_base.unwrap_or(file_base);
            if base > 1 {
                return Err(Error::Parse(format!("--index-base must be 0 or 1, got {base}")));
            }
            match find_straight_candidate(&gcm, *depth)? {
                Some(x) => {
                    let p = is_straight(&x, STRAIGHT_N_MAX);
                    Ok((
                        json!({
                            "found": true,
                            "word": x.word().iter().map(|i| i + base).collect::<Vec<_>>(),
                            "index_base": base,
                            "profile": p.lengths,
                        }),
                        p.straight && !p.degenerate,
                    ))
                }
                None => Ok((
                    json!({"found": false, "note": "search exhausted; not a proof of absence"}),
                    true,
                )),
            }
        }
    }
}

fn int_rows(x: &WeylElement) -> Value {
    json!(x
        .matrix()
        .rows()
        .iter()
        .map(|r| r.iter().map(|v| v.to_string()).collect::<Vec<_>>())
        .collect::<Vec<_>>())
}

fn read_json_file(path: &str) -> Result<Value> {
    let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read {path}: {e}")))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{path}: {e}")))
}

fn read_gcm(path: &str, inputs: &mut Value) -> Result<(Gcm, usize)> {
    let v = read_json_file(path)?;
    inputs["gcm"] = v.clone();
    Gcm::from_json(&v)
}

fn read_word(w: &WordArgs, inputs: &mut Value) -> Result<(WeylElement, usize)> {
    let v = read_json_file(&w.gcm)?;
    inputs["gcm"] = v.clone();
    let (gcm, file_base) = Gcm::from_json(&v)?;
    let raw: Vec<usize> = if w.word.trim().is_empty() {
        Vec::new()
    } else {
        w.word
            .split(',')
            .map(|s| {
                s.trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad generator index '{s}'")))
            })
            .collect::<Result<_>>()?
    };
    let base = match (w.index_base, v.get("index_base")) {
        (Some(b), _) => b,
        (None, Some(_)) => file_base,
        (None, None) => usize::from(!raw.contains(&0)),
    };
    if base > 1 {
        return Err(Error::Parse(format!("--index-base must be 0 or 1, got {base}")));
    }
    inputs["word"] = json!(raw);
    inputs["index_base"] = json!(base);
    let word = raw
        .iter()
        .map(|&i| i.checked_sub(base).ok_or(Error::BadIndex(i)))
        .collect::<Result<Vec<_>>>()?;
    Ok((WeylElement::from_word(&gcm, &word)?, base))
}

fn read_input(g: &GlobalFlags, stdin: &mut dyn Read) -> Result<Value> {
    let text = match g.input.as_deref() {
        None | Some("-") => {
            let mut s = String::new();
            stdin
                .read_to_string(&mut s)
                .map_err(|e| Error::Parse(format!("cannot read stdin: {e}")))?;
            s
        }
        Some(path) => fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read {path}: {e}")))?,
    };
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("input JSON: {e}")))
}

/// The ring named by the flags: `--ring`, else the default ring of
/// `--model`.
fn flag_ring(g: &GlobalFlags) -> Result<Option<RingSpec>> {
    let ring = g.ring.as_deref().map(RingSpec::parse).transpose()?;
    let model = g.model.as_deref().map(Model::parse).transpose()?;
    if let (Some(r), Some(m)) = (ring, model) {
        if Model::of_ring(r) != m {
            return Err(Error::ModelMismatch {
                expected: m.name().into(),
                found: Model::of_ring(r).name().into(),
            });
        }
    }
    Ok(ring.or(model.map(|m| m.ring(false))))
}

fn parse_element(g: &GlobalFlags, mut v: Value) -> Result<GroupElement> {
    let flag = flag_ring(g)?;
    let Some(obj) = v.as_object_mut() else {
        return Err(Error::Parse("a group element must be a JSON object".into()));
    };
    if !obj.contains_key("ring") {
        obj.insert("ring".into(), json!(flag.unwrap_or(RingSpec::Q).name()));
    }
    let x = GroupElement::from_json(&v)?;
    if let Some(r) = flag {
        if g.ring.is_some() && r != x.ring() {
            return Err(Error::RingMismatch(r.name().into(), x.ring().name().into()));
        }
        if Model::of_ring(r) != x.model() {
            return Err(Error::ModelMismatch {
                expected: Model::of_ring(r).name().into(),
                found: x.model().name().into(),
            });
        }
    }
    Ok(x)
}

fn parse_a_rule(s: &str) -> Result<ARule> {
    match s {
        "positivity" => Ok(ARule::Positivity),
        "norm_form" | "norm-form" => Ok(ARule::NormForm),
        _ => Err(Error::Parse(format!("unknown A rule '{s}'"))),
    }
}

/// Membership decided a different way from [`is_member_with`].
fn membership_second_route(spec: ThetaSpec, tag: SubsetTag, g: &GroupElement, rule: ARule) -> Result<bool> {
    let m = g.matrix();
    let n = g.n();
    // the centralizer of a regular constant diagonal element is the diagonal
    let regular = Matrix::diagonal((1..=n as i64).map(LaurentPoly::int).collect());
    let in_t = || m.mul(&regular) == regular.mul(m) && m.entries().all(LaurentPoly::is_constant);
    let transposed = m.transpose();
    Ok(match tag {
        SubsetTag::K => theta(spec, g)? == *g,
        SubsetTag::Q => theta(spec, g)? == g.inverse(),
        SubsetTag::T => in_t(),
        SubsetTag::M => in_t() && theta(spec, g)? == *g,
        SubsetTag::A => {
            in_t()
                && m.diagonal_entries().iter().all(|p| {
                    let c = p.coeff(0);
                    let z = c.to_complex();
                    let positive = z.im == 0.0 && z.re > 0.0;
                    match rule {
                        ARule::Positivity => positive,
                        ARule::NormForm => positive && norm_form(&c, spec.sigma_is_conjugation()),
                    }
                })
        }
        SubsetTag::UPlus => transposed.is_lower_triangular() && transposed.has_unit_diagonal(),
        SubsetTag::UMinus => transposed.is_upper_triangular() && transposed.has_unit_diagonal(),
        SubsetTag::BPlus => transposed.is_lower_triangular(),
        SubsetTag::BMinus => transposed.is_upper_triangular(),
    })
}

/// `c = s σ(s)` for some `s`, by search over the factorization
/// `c = a / b = (a b) / b^2`: over `Q` a square, over `Q(i)` a sum of two
/// squares, decided for the integer `a b` by trial.
fn norm_form(c: &Scalar, conjugation: bool) -> bool {
    use num_bigint::BigInt;
    use num_integer::Roots;
    use num_traits::{ToPrimitive, Zero};
    let q = c.re();
    let ab: BigInt = q.numer() * q.denom();
    let Some(ab) = ab.to_u64() else {
        // out of range for trial search; fall back to the primary route
        return if conjugation {
            crate::ring::sum_of_two_squares(q)
        } else {
            c.sqrt(false).is_some()
        };
    };
    if !conjugation {
        let r = ab.sqrt();
        return r * r == ab;
    }
    let mut x: u64 = 0;
    while x * x <= ab {
        let rest = ab - x * x;
        let y = rest.sqrt();
        if y * y == rest {
            return true;
        }
        x += 1;
    }
    ab.is_zero()
}

/// Checks `g* g = u* a^2 u` exactly (for the minus side the same identity
/// with `u` lower triangular).
fn iwasawa_exact_identity(g: &GroupElement, a_squared: &GroupElement, u: &GroupElement) -> Result<bool> {
    let (Some(gs), Some(us), Some(ds)) = (
        g.matrix().to_scalar(),
        u.matrix().to_scalar(),
        a_squared.matrix().to_scalar(),
    ) else {
        return Ok(false);
    };
    Ok(gs.adjoint().mul(&gs) == us.adjoint().mul(&ds).mul(&us))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str], stdin: &str) -> (i32, Value, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut argv = vec!["kmdecomp"];
        argv.extend_from_slice(args);
        let code = run(argv, &mut stdin.as_bytes(), &mut out, &mut err);
        let text = String::from_utf8(out).unwrap();
        let report = serde_json::from_str(&text).unwrap_or(Value::Null);
        (code, report, String::from_utf8(err).unwrap())
    }

    #[test]
    fn hole_n2() {
        let (code, r, _) = call(&["hole", "--n", "2"], "");
        assert_eq!(code, 0);
        assert_eq!(r["verified"], true);
        assert_eq!(r["result"]["dimension"], 3);
        assert_eq!(
            r["result"]["charpoly_text"].as_str().unwrap(),
            hole_closed_form(2).to_string()
        );
    }

    #[test]
    fn member_identity_in_k() {
        let id = r#"{"n":3,"entries":[["1","0","0"],["0","1","0"],["0","0","1"]]}"#;
        let (code, r, _) = call(&["member", "--set", "K"], id);
        assert_eq!((code, r["result"]["member"].clone()), (0, json!(true)));
        let (code, r, _) = call(&["member", "--set", "A"], id);
        assert_eq!((code, r["result"]["member"].clone()), (0, json!(true)));
    }

    #[test]
    fn usage_errors_exit_1() {
        let (code, _, err) = call(&["frobnicate"], "");
        assert_eq!(code, 1);
        assert_eq!(err.lines().count(), 1);
        let (code, _, err) = call(&["member", "--set", "Z"], "{}");
        assert_eq!(code, 1);
        assert!(err.starts_with("error:"));
        let (code, _, _) = call(&["tau"], "not json");
        assert_eq!(code, 1);
        let (code, _, _) = call(&["tau", "--tol", "0"], "{}");
        assert_eq!(code, 1);
    }

    #[test]
    fn outside_big_cell_exits_2() {
        let w = r#"{"ring":"q","n":2,"entries":[["0","1"],["-1","0"]]}"#;
        let (code, r, _) = call(&["birkhoff"], w);
        assert_eq!(code, 2);
        assert_eq!(r["verified"], false);
        assert!(r["result"]["error"].as_str().unwrap().contains("big cell"));
    }

    #[test]
    fn ring_filled_from_flags() {
        let g = r#"{"n":2,"entries":[["1",{"1":"1"}],["0","1"]]}"#;
        let (code, r, _) = call(&["tau", "--model", "affine"], g);
        assert_eq!(code, 0, "{r}");
        assert_eq!(r["result"]["tau"]["ring"], "laurent_q");
        let (code, _, _) = call(&["tau", "--ring", "q"], g);
        assert_eq!(code, 1);
    }

    #[test]
    fn iwasawa_and_cartan_verify() {
        let g = r#"{"ring":"q","n":2,"entries":[["1","0"],["1","1"]]}"#;
        for side in ["+", "-"] {
            let (code, r, _) = call(&["iwasawa", "--side", side], g);
            assert_eq!(code, 0, "{r}");
            assert_eq!(r["result"]["exact_identity"], true);
        }
        for cmd in ["cartan", "polar", "birkhoff", "diag-test"] {
            let (code, r, _) = call(&[cmd], g);
            assert_eq!(code, 0, "{cmd}: {r}");
        }
    }

    #[test]
    fn nucleus_inputs() {
        let hole_u = r#"{"ring":"laurent_q","n":2,"entries":[["1",{"0":"1","1":"1"}],["0","1"]]}"#;
        let (code, r, _) = call(&["nucleus"], hole_u);
        assert_eq!(code, 0, "{r}");
        assert_eq!(r["result"]["verdict"], "NOT_IN_NUCLEUS");
        let pair =
            format!(r#"{{"preimage": {hole_u}, "v": {{"ring":"laurent_q","n":2,"entries":[["1","0"],["0","1"]]}}}}"#);
        let (code, r, _) = call(&["nucleus"], &pair);
        assert_eq!(code, 2);
        assert!(r["result"]["error"].as_str().is_some());
    }

    #[test]
    fn coxeter_words() {
        let dir = std::env::temp_dir().join(format!("kmdecomp-cli-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let a1 = dir.join("a1.json");
        fs::write(&a1, r#"{"n":2,"entries":[[2,-2],[-2,2]]}"#).unwrap();
        let a2 = dir.join("a2.json");
        fs::write(&a2, r#"{"n":3,"entries":[[2,-1,0],[-1,2,-1],[0,-1,2]]}"#).unwrap();
        let (a1, a2) = (a1.to_str().unwrap(), a2.to_str().unwrap());
        let (code, r, _) = call(&["coxeter", "length", "--gcm", a2, "--word", "1,2,1"], "");
        assert_eq!((code, r["result"]["length"].clone()), (0, json!(3)));
        let (code, r, _) = call(
            &["coxeter", "straight", "--gcm", a1, "--word", "0,1", "--nmax", "20"],
            "",
        );
        assert_eq!(code, 0);
        assert_eq!(r["result"]["straight"], true);
        assert_eq!(r["result"]["profile"][19], 40);
        let (code, r, _) = call(&["coxeter", "finite", "--gcm", a1], "");
        assert_eq!((code, r["result"]["finite"].clone()), (0, json!(false)));
        let (code, r, _) = call(&["coxeter", "find-straight", "--gcm", a1], "");
        assert_eq!((code, r["result"]["word"].clone()), (0, json!([1, 2])));
        let (_, r, _) = call(&["coxeter", "find-straight", "--gcm", a1, "--index-base", "0"], "");
        assert_eq!(r["result"]["word"], json!([0, 1]));
        let (code, _, _) = call(&["coxeter", "find-straight", "--gcm", a2], "");
        assert_eq!(code, 1);
        let (code, r, _) = call(&["cover", "--gcm", a2], "");
        assert_eq!(code, 0);
        assert_eq!(
            r["result"],
            json!({"r": 1, "partition": [[1, 2, 3]], "kuk_bound": 2, "naive_bound": 4, "exhaustive_r": 1})
        );
        fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn report_round_trips() {
        let (_, r, _) = call(&["hole", "--n", "3"], "");
        let text = r.to_string();
        assert_eq!(serde_json::from_str::<Value>(&text).unwrap(), r);
        let v = GroupElement::from_json(&r["result"]["v"]).unwrap();
        assert_eq!(v.to_json(), r["result"]["v"]);
    }
}
