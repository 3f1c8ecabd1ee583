//! Walks through the eight acceptance criteria and prints a PASS/FAIL line
//! for each; exits nonzero if any fails.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, Stdio};
use std::sync::Arc;
use std::time::{Duration, Instant};

use quiverkit::homological::{
    cancel_summand, default_probes, delta, delta_prime, delta_profile, ext1_dim, ext_from_ses, ext_pushforward,
    is_split, pushout, ses_from_ext, ShortExactSeq,
};
use quiverkit::quiver::{direct_sum_all, euler_form, hom_dim};
use quiverkit::rnc_chain::{check_hypotheses, singularity_type, verify_rank_one, verify_span};
use quiverkit::workspace::{default_star_points, emit, gen_star, Workspace};
use quiverkit::{Rational, Rep};
use serde_json::Value;

const INSTANCES: u64 = 128;

fn bin(args: &[&str], stdin: &str) -> (i32, String) {
    let mut child = Command::new(env!("CARGO_BIN_EXE_quiverkit"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap())
}

fn star(n: usize, points: &[(i64, i64)]) -> Workspace {
    let pts: Vec<_> = points.iter().map(|&(a, b)| (Rational::integer(a), Rational::integer(b))).collect();
    gen_star(n, &pts).unwrap()
}

fn reps(ws: &Workspace) -> [Arc<Rep>; 4] {
    ["U", "V", "M", "N"].map(|k| ws.rep(k).unwrap().clone())
}

/// Two point sets per arm count: the default one and one with negative and
/// larger coordinates.
fn instances() -> Vec<(usize, Workspace)> {
    let other = [(2, 1), (-1, 3), (3, -2), (1, 5), (4, 1), (-3, -1), (5, 2), (1, -4)];
    let mut out = Vec::new();
    for n in 3..=8 {
        out.push((n, gen_star(n, &default_star_points(n)).unwrap()));
        out.push((n, star(n, &other[..n])));
    }
    out
}

fn criterion_1() {
    let start = Instant::now();
    let ws = gen_star(3, &default_star_points(3)).unwrap();
    let [u, v, m, n] = reps(&ws);
    let h = |x: &Rep, y: &Rep| hom_dim(x, y).unwrap();
    assert_eq!(h(&u, &m), 2, "[U,M]");
    assert_eq!(h(&m, &v), 2, "[M,V]");
    assert_eq!(h(&u, &u), 1, "[U,U]");
    assert_eq!(h(&u, &v), 1, "[U,V]");
    assert_eq!(h(&v, &v), 1, "[V,V]");
    assert_eq!(h(&v, &u), 0, "[V,U]");
    assert_eq!(h(&m, &m), 1, "[M,M]");
    assert_eq!(h(&n, &n) as i64 - h(&m, &m) as i64, 2, "[N,N] - [M,M]");
    assert!(start.elapsed() < Duration::from_secs(1), "took {:?}", start.elapsed());

    let text = emit(&ws).unwrap();
    assert_eq!(bin(&["hom", "-", "U", "M"], &text), (0, "2\n".into()));
    assert_eq!(bin(&["codim", "M", "N"], &text), (0, "2\n".into()));
}

/// Runs `sing-type` through the binary; returns the JSON reports for
/// criterion 4.
fn criterion_2() -> Vec<(usize, Value)> {
    let start = Instant::now();
    let mut reports = Vec::new();
    for (k, (n, ws)) in instances().into_iter().enumerate() {
        let text = emit(&ws).unwrap();
        for seed in [k as u64, 7 + 3 * k as u64] {
            let seed_arg = seed.to_string();
            let (code, plain) = bin(&["sing-type", "M", "U", "V", "--seed", &seed_arg], &text);
            assert_eq!(code, 0);
            assert_eq!(plain.trim(), format!("ConeOverRNC(degree={})", n - 2), "n = {n}, seed = {seed}");
            let (code, json) =
                bin(&["sing-type", "M", "U", "V", "--seed", &seed_arg, "--json", "--no-timestamp"], &text);
            assert_eq!(code, 0);
            let report: Value = serde_json::from_str(&json).unwrap();
            assert_eq!(report["degree"], n - 2);
            assert_eq!(report["seed"], seed);
            reports.push((n, report));
        }
    }
    assert!(start.elapsed() < Duration::from_secs(30), "took {:?}", start.elapsed());
    reports
}

fn criterion_3() {
    for (n, ws) in instances() {
        let [u, v, m, _] = reps(&ws);
        let report = check_hypotheses(&m, &u, &v).unwrap();
        assert!(report.holds(), "n = {n}: {report:?}");
        assert_eq!(bin(&["check-hyp", "M", "U", "V"], &emit(&ws).unwrap()).0, 0);
    }
}

fn criterion_4(reports: &[(usize, Value)]) {
    assert!(!reports.is_empty(), "no chains from criterion 2");
    for (n, report) in reports {
        let r = n - 2;
        let log = report["delta_log"].as_array().unwrap();
        assert_eq!(log.len(), r + 2, "n = {n}");
        let dims = |v: &Value| -> Vec<u64> { v.as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect() };
        let (u0, v) = (dims(&report["results"]["u0_dims"]), dims(&report["results"]["v_dims"]));
        for step in log {
            let i = step["index"].as_u64().unwrap() as usize;
            assert_eq!(step["delta_v"], 0, "δ(V) at σ{i}");
            let expected_prime = if i <= r + 1 { 1 } else { 0 };
            assert_eq!(step["delta_prime_v"], expected_prime, "δ'(V) at σ{i}, n = {n}");
            let grown: Vec<u64> = u0.iter().zip(&v).map(|(a, b)| a + i as u64 * b).collect();
            assert_eq!(dims(&step["middle_dims"]), grown, "dim U{i}");
        }
    }
}

fn chain_for(n: usize) -> quiverkit::rnc_chain::ChainReport<Rational> {
    let ws = gen_star(n, &default_star_points(n)).unwrap();
    let [u, v, m, _] = reps(&ws);
    singularity_type(&m, &u, &v, 0, None).unwrap().1.unwrap()
}

fn criterion_5() {
    for n in 4..=6 {
        let report = verify_rank_one(&chain_for(n), 20, 11).unwrap();
        assert_eq!(report.ranks.len(), 20, "n = {n}");
        assert!(report.ranks.iter().all(|&r| r == 1), "n = {n}: {:?}", report.ranks);
    }
}

fn criterion_6() {
    for n in 4..=6 {
        let chain = chain_for(n);
        let report = verify_span(&chain, 20, 5).unwrap();
        assert_eq!(report.span_dim, chain.degree + 1);
        assert_eq!(report.span_dim, n - 1);
    }
}

fn check_sequence_laws(seed: u64) {
    let mut rng = common::rng(seed);
    let q = common::quiver(&mut rng);

    // (a)
    let (x, y) = (common::rep(&mut rng, &q, 2), common::rep(&mut rng, &q, 2));
    let euler = hom_dim(&x, &y).unwrap() as i64 - ext1_dim(&x, &y).unwrap() as i64;
    assert_eq!(euler, euler_form(&q, x.dims(), y.dims()), "(a) seed {seed}");

    // (b)
    let (u, v) = (common::nonzero_rep(&mut rng, &q, 2), common::rep(&mut rng, &q, 2));
    let sigma = if seed.is_multiple_of(5) {
        common::scramble(&mut rng, &ShortExactSeq::split(&u, &v).unwrap())
    } else {
        common::sequence(&mut rng, &v, &u)
    };
    let zero = common::is_zero_class(&sigma);
    assert_eq!(delta(&sigma, &u).unwrap() == 0, zero, "(b) seed {seed}");
    assert_eq!(delta_prime(&sigma, &v).unwrap() == 0, zero, "(b) seed {seed}");
    assert_eq!(is_split(&sigma).unwrap(), zero, "(b) seed {seed}");

    // (c)
    let target = common::rep(&mut rng, &q, 2);
    let h = common::morphism(&mut rng, &u, &target);
    let p = pushout(&sigma, &h).unwrap();
    for probe in default_probes(&sigma) {
        let d = [&sigma, &p.sigma, &p.tau].map(|s| delta(s, &probe).unwrap());
        let e = [&sigma, &p.sigma, &p.tau].map(|s| delta_prime(s, &probe).unwrap());
        assert!(d[1] <= d[0] && e[1] <= e[0], "(c) monotonicity, seed {seed}");
        assert_eq!((d[0], e[0]), (d[1] + d[2], e[1] + e[2]), "(c) additivity, seed {seed}");
    }
    assert_eq!(ext_from_ses(&p.sigma).unwrap(), ext_pushforward(&ext_from_ses(&sigma).unwrap(), &h).unwrap());

    // (d)
    let e = common::class(&mut rng, &v, &u);
    let canonical = ses_from_ext(&e).unwrap();
    assert_eq!(ext_from_ses(&canonical).unwrap(), e, "(d) seed {seed}");
    assert_eq!(ext_from_ses(&common::scramble(&mut rng, &canonical)).unwrap(), e, "(d) seed {seed}");
}

/// (e) on one seed; returns false when the precondition `δ(Y) < copies`
/// fails and the instance does not count.
fn check_cancellation(seed: u64) -> bool {
    let mut rng = common::rng(seed ^ 0x5eed);
    let q = common::quiver(&mut rng);
    let u = common::rep(&mut rng, &q, 1);
    let y = common::nonzero_rep(&mut rng, &q, 1);
    let v = common::rep(&mut rng, &q, 2);
    let copies = 1 + (seed % 2) as usize;
    let mut parts = vec![u];
    parts.extend(std::iter::repeat_n(y.clone(), copies));
    let sigma = common::sequence(&mut rng, &v, &direct_sum_all(&parts).unwrap());
    if delta(&sigma, &y).unwrap() >= copies {
        return false;
    }
    let cancelled = cancel_summand(&sigma, &y, copies).unwrap();
    let mut probes = default_probes(&sigma);
    probes.push(y.clone());
    assert_eq!(delta_profile(&cancelled, &probes).unwrap(), delta_profile(&sigma, &probes).unwrap(), "(e) seed {seed}");
    assert_eq!(&(cancelled.middle().dims() + y.dims()), sigma.middle().dims());
    true
}

fn criterion_7() {
    let start = Instant::now();
    for seed in 0..INSTANCES {
        check_sequence_laws(seed);
    }
    let mut cancelled = 0;
    let mut seed = 0;
    while cancelled < INSTANCES {
        cancelled += u64::from(check_cancellation(seed));
        seed += 1;
        assert!(seed < 20 * INSTANCES, "too few cancellable instances");
    }
    assert!(start.elapsed() < Duration::from_secs(120), "took {:?}", start.elapsed());
}

fn criterion_8() {
    let file = r#"
[quiver]
vertices = ["1", "2"]
arrows = [{ name = "a", source = "1", target = "2" }, { name = "b", source = "1", target = "2" }]

[reps.R10]
dims = [1, 1]
maps = { a = [["1"]], b = [["0"]] }

[reps.R01]
dims = [1, 1]
maps = { a = [["0"]], b = [["1"]] }
"#;
    let (code, json) = bin(&["homorder", "R10", "R01", "--json", "--no-timestamp"], file);
    assert_eq!(code, 1);
    let report: Value = serde_json::from_str(&json).unwrap();
    assert_eq!(report["exit_code"], 1);
    assert_eq!(report["results"]["holds"], false);
    let violations = report["results"]["violations"].as_array().unwrap();
    assert!(!violations.is_empty());
    let (code, text) = bin(&["homorder", "R10", "R01"], file);
    assert_eq!(code, 1);
    assert!(text.contains("violated") && text.contains("probe R10"), "{text}");
}

fn run(results: &mut Vec<(usize, bool)>, index: usize, title: &str, f: impl FnOnce()) {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(f));
    let pass = outcome.is_ok();
    println!("criterion {index}: {} ({title}, {:.2?})", if pass { "PASS" } else { "FAIL" }, start.elapsed());
    results.push((index, pass));
}

fn main() {
    let mut results = Vec::new();
    run(&mut results, 1, "star invariants for three arms", criterion_1);
    let mut chains = Vec::new();
    run(&mut results, 2, "sing-type degree n-2 for 3..8 arms", || chains = criterion_2());
    run(&mut results, 3, "hypothesis checker on every star instance", criterion_3);
    run(&mut results, 4, "chain defects and middle-term growth", || criterion_4(&chains));
    run(&mut results, 5, "rank-one property, 20 samples", criterion_5);
    run(&mut results, 6, "span dimension n-1", criterion_6);
    run(&mut results, 7, "randomized sequence laws", criterion_7);
    run(&mut results, 8, "Kronecker negative control", criterion_8);
    let failed: Vec<usize> = results.iter().filter(|(_, ok)| !ok).map(|(i, _)| *i).collect();
    if !failed.is_empty() {
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
