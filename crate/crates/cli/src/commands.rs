use std::fmt::Write as _;
use std::sync::Arc;

use quiverkit::degeneration::{self, codim, hom_order_check};
use quiverkit::field::{Field, Rational};
use quiverkit::homological::{delta, delta_prime, is_split, make_ses, ExtSpace};
use quiverkit::quiver::hom_dim;
use quiverkit::rnc_chain::{check_hypotheses, singularity_type, verify_rank_one, verify_span, ChainReport};
use quiverkit::workspace::{default_star_points, emit, Workspace};
use quiverkit::{Error, Rep, RepMorphism};
use serde_json::{json, Value};

use crate::{Command, Options};

/// What a command produced: text for the terminal and the pieces of the
/// JSON report.
#[derive(Debug, Default)]
pub struct Outcome {
    pub text: String,
    pub results: Value,
    pub delta_log: Value,
    pub degree: Option<usize>,
    pub exit_code: u8,
}

impl Outcome {
    fn new(text: String, results: Value) -> Self {
        Outcome { text, results, delta_log: json!([]), degree: None, exit_code: 0 }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Failure {
    /// Bad file, unknown name, malformed arguments.
    #[error("{0}")]
    Input(String),
    /// A mathematical computation failed or refuted the claim.
    #[error("{0}")]
    Negative(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Negative(_) => 1,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::CyclicQuiver
            | Error::DuplicateName { .. }
            | Error::UnknownVertex(_)
            | Error::QuiverMismatch
            | Error::DimVectorLength { .. }
            | Error::ShapeMismatch { .. }
            | Error::NotIntertwining(_)
            | Error::NotComposable(_)
            | Error::NotInjective(_)
            | Error::NotSurjective(_)
            | Error::NotExact(_)
            | Error::DimensionMismatch(_) => Failure::Input(e.to_string()),
            _ => Failure::Negative(e.to_string()),
        }
    }
}

pub struct Run {
    pub command: Command,
    pub names: Vec<String>,
    pub opts: Options,
}

fn rep<'a, F: Field>(ws: &'a Workspace<F>, name: &str) -> Result<&'a Arc<Rep<F>>, Failure> {
    ws.rep(name).map_err(|_| Failure::Input(format!("unknown representation {name:?}")))
}

fn morphism<'a, F: Field>(ws: &'a Workspace<F>, name: &str) -> Result<&'a RepMorphism<F>, Failure> {
    ws.morphisms.get(name).ok_or_else(|| Failure::Input(format!("unknown morphism {name:?}")))
}

/// The name under which `r` appears in the workspace, if any.
fn name_of<F: Field>(ws: &Workspace<F>, r: &Rep<F>) -> Option<String> {
    ws.reps.iter().find(|(_, x)| ***x == *r).map(|(n, _)| n.clone())
}

type Probes<F> = Vec<(String, Arc<Rep<F>>)>;

fn named_probes<F: Field>(ws: &Workspace<F>, names: &[String]) -> Result<Probes<F>, Failure> {
    names.iter().map(|n| Ok((n.clone(), rep(ws, n)?.clone()))).collect()
}

pub fn run<F: Field>(ws: &Workspace<F>, run: &Run) -> Result<Outcome, Failure> {
    let n = &run.names;
    match &run.command {
        Command::Hom(_) => {
            let d = hom_dim(rep(ws, &n[0])?, rep(ws, &n[1])?)?;
            Ok(Outcome::new(format!("{d}\n"), json!({ "hom_dim": d })))
        }
        Command::Ext(_) => {
            let e = ExtSpace::new(rep(ws, &n[0])?, rep(ws, &n[1])?)?;
            let results = json!({
                "ext1_dim": e.dim(),
                "cocycle_dim": e.cocycle_dim(),
                "coboundary_rank": e.coboundary_rank(),
            });
            Ok(Outcome::new(format!("{}\n", e.dim()), results))
        }
        Command::Delta(_) => delta_command(ws, run),
        Command::Codim(_) => {
            let c = codim(rep(ws, &n[0])?, rep(ws, &n[1])?)?;
            Ok(Outcome::new(format!("{c}\n"), json!({ "codim": c })))
        }
        Command::Homorder(_) => homorder(ws, run),
        Command::CheckHyp(_) => {
            let report = check_hypotheses(rep(ws, &n[0])?, rep(ws, &n[1])?, rep(ws, &n[2])?)?;
            let mut text = String::new();
            let mut clauses = Vec::new();
            for c in &report.clauses {
                let verdict = if c.holds() { "ok" } else { "FAILS" };
                writeln!(text, "{}: {} vs {} {verdict}", c.name, c.lhs, c.rhs).unwrap();
                clauses.push(json!({ "clause": c.name, "lhs": c.lhs, "rhs": c.rhs, "holds": c.holds() }));
            }
            writeln!(text, "{}", if report.holds() { "hypotheses hold" } else { "hypotheses fail" }).unwrap();
            let mut out = Outcome::new(text, json!({ "holds": report.holds(), "clauses": clauses }));
            out.exit_code = u8::from(!report.holds());
            Ok(out)
        }
        Command::SingType(_) => {
            let (out, _) = sing_type(ws, run)?;
            Ok(out)
        }
        Command::VerifyChain { samples, .. } => verify_chain(ws, run, *samples),
        Command::Gen(_) => unreachable!("generators do not read a workspace"),
    }
}

fn delta_command<F: Field>(ws: &Workspace<F>, run: &Run) -> Result<Outcome, Failure> {
    let (f, g) = (morphism(ws, &run.names[0])?, morphism(ws, &run.names[1])?);
    let sigma = make_ses(f.clone(), g.clone())?;
    let probes = match &run.opts.probes {
        Some(names) => named_probes(ws, names)?,
        None => {
            let q = ws.quiver.clone();
            let terms = [("U", sigma.left()), ("M", sigma.middle()), ("V", sigma.right())];
            let mut p: Probes<F> =
                terms.iter().map(|(d, r)| (name_of(ws, r).unwrap_or_else(|| d.to_string()), (*r).clone())).collect();
            p.extend(
                Rep::simples(&q)
                    .into_iter()
                    .enumerate()
                    .map(|(v, s)| (format!("S({})", q.vertex_name(v)), Arc::new(s))),
            );
            p
        }
    };
    let split = is_split(&sigma)?;
    let mut text = format!("{}\n", if split { "split" } else { "nonsplit" });
    let mut log = Vec::new();
    for (name, y) in &probes {
        let (d, dp) = (delta(&sigma, y)?, delta_prime(&sigma, y)?);
        writeln!(text, "{name}: delta = {d}, delta' = {dp}").unwrap();
        log.push(json!({ "probe": name, "delta": d, "delta_prime": dp }));
    }
    let mut out = Outcome::new(text, json!({ "split": split }));
    out.delta_log = Value::Array(log);
    Ok(out)
}

fn homorder<F: Field>(ws: &Workspace<F>, run: &Run) -> Result<Outcome, Failure> {
    let (m, n) = (rep(ws, &run.names[0])?, rep(ws, &run.names[1])?);
    let probes = match &run.opts.probes {
        Some(names) => named_probes(ws, names)?,
        None => {
            let named: Vec<_> = ws.reps.iter().map(|(k, r)| (k.clone(), r.clone())).collect();
            let mut p = degeneration::default_probes(m, n, &named);
            for (label, rep) in p.iter_mut() {
                if let Some(ws_name) = name_of(ws, rep) {
                    *label = ws_name;
                }
            }
            p
        }
    };
    let report = hom_order_check(m, n, &probes)?;
    let mut text = format!("{}\n", if report.holds() { "hom order holds" } else { "hom order violated" });
    let mut rows = Vec::new();
    for p in &report.probes {
        if !p.holds() {
            writeln!(
                text,
                "probe {}: [M,Y] = {}, [N,Y] = {}, [Y,M] = {}, [Y,N] = {}",
                p.probe, p.m_to, p.n_to, p.to_m, p.to_n
            )
            .unwrap();
        }
        rows.push(json!({
            "probe": p.probe, "m_to": p.m_to, "n_to": p.n_to, "to_m": p.to_m, "to_n": p.to_n, "holds": p.holds(),
        }));
    }
    let violations: Vec<_> = report.violations().map(|p| p.probe.clone()).collect();
    let mut out = Outcome::new(text, json!({ "holds": report.holds(), "probes": rows, "violations": violations }));
    out.exit_code = u8::from(!report.holds());
    Ok(out)
}

fn sing_type<F: Field>(ws: &Workspace<F>, run: &Run) -> Result<(Outcome, Option<ChainReport<F>>), Failure> {
    let (m, u, v) = (rep(ws, &run.names[0])?, rep(ws, &run.names[1])?, rep(ws, &run.names[2])?);
    let hyp = check_hypotheses(m, u, v)?;
    if let Some(c) = hyp.clauses.iter().find(|c| !c.holds()) {
        let text = format!("hypothesis {} fails: {} vs {}\n", c.name, c.lhs, c.rhs);
        let mut out = Outcome::new(text, json!({ "hypotheses_hold": false, "failed_clause": c.name }));
        out.exit_code = 1;
        return Ok((out, None));
    }
    let (kind, chain) = singularity_type(m, u, v, run.opts.seed, run.opts.cap)?;
    let mut results = json!({ "hypotheses_hold": true, "type": kind.to_string() });
    let mut out = Outcome::new(format!("{kind}\n"), Value::Null);
    if let Some(c) = &chain {
        results["split_index"] = c.split_index.into();
        results["u0_dims"] = json!(c.u0().dims());
        results["v_dims"] = json!(c.v().dims());
        out.delta_log = json!(c.delta_log);
    }
    out.results = results;
    out.degree = Some(kind.degree());
    Ok((out, chain))
}

fn verify_chain<F: Field>(ws: &Workspace<F>, run: &Run, samples: usize) -> Result<Outcome, Failure> {
    let (mut out, chain) = sing_type(ws, run)?;
    let Some(chain) = chain else {
        if out.exit_code == 0 {
            out.text.push_str("no chain to verify\n");
        }
        return Ok(out);
    };
    let seed = run.opts.seed;
    let checks = chain.validate().and_then(|()| {
        let r1 = verify_rank_one(&chain, samples, seed)?;
        let sp = verify_span(&chain, samples, seed)?;
        Ok((r1, sp))
    });
    match checks {
        Ok((r1, sp)) => {
            writeln!(out.text, "chain invariants hold").unwrap();
            writeln!(
                out.text,
                "rank one: {} samples, pushforward rank {} of {}",
                r1.ranks.len(),
                r1.injectivity_rank,
                r1.ext1_dim
            )
            .unwrap();
            writeln!(out.text, "span: {} of expected {}", sp.span_dim, sp.expected).unwrap();
            out.results["chain_valid"] = true.into();
            out.results["ranks"] = json!(r1.ranks);
            out.results["injectivity_rank"] = r1.injectivity_rank.into();
            out.results["ext1_dim"] = r1.ext1_dim.into();
            out.results["span_dim"] = sp.span_dim.into();
            out.results["span_expected"] = sp.expected.into();
            out.results["samples"] = samples.into();
            Ok(out)
        }
        Err(e) => {
            let failure = Failure::from(e);
            writeln!(out.text, "verification failed: {failure}").unwrap();
            out.results["chain_valid"] = false.into();
            out.results["error"] = failure.to_string().into();
            out.exit_code = failure.exit_code();
            Ok(out)
        }
    }
}

fn parse_point(s: &str) -> Result<(Rational, Rational), Failure> {
    let bad = || Failure::Input(format!("point {s:?} is not of the form a:b"));
    let (a, b) = s.split_once(':').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

pub fn gen_star(n: usize, points: Option<&[String]>) -> Result<Outcome, Failure> {
    let points = match points {
        Some(p) => p.iter().map(|s| parse_point(s)).collect::<Result<Vec<_>, _>>()?,
        None => default_star_points(n),
    };
    let ws = quiverkit::workspace::gen_star(n, &points).map_err(|e| Failure::Input(e.to_string()))?;
    let text = emit(&ws).map_err(|e| Failure::Input(e.to_string()))?;
    Ok(Outcome::new(text.clone(), json!({ "workspace": text })))
}
