//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use num::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use common::{
    boundary_variants, failing_sample, holding_sample, lemma14_pairs, lemma5_fixtures, p_star, quadrature_fixtures,
    random_tuple, symmetrization_table,
};
use sobolev_core::decision::case_predicates;
use sobolev_core::rational::{q, qi, to_f64};
use sobolev_core::verify::{lambda_grid, scale_invariance_check_with_theta, DEFAULT_BUDGET};
use sobolev_core::{
    auto_family, decide_b_zero_cor18, decide_c_zero_th17, decide_embedding, derive, kelvin_dual,
    lemma14_identity_check, lemma5_check, necessity_failure, refute, scale_invariance_check, sobolev_conjugate,
    symmetrization_check, EmbeddingParams, ExtendedReal, FailureTag, FamilyKind, Mechanism, Q,
};
use sobolev_oracle::VerdictRecord;

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Option<u64>, Box<dyn Fn() -> Outcome + 'a>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// 10^5 random tuples, then every boundary variant of the first 2000 of them.
fn decision_set() -> Vec<EmbeddingParams> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let random: Vec<EmbeddingParams> = (0..100_000).map(|_| random_tuple(&mut rng)).collect();
    let boundary: Vec<EmbeddingParams> = random[..2_000].iter().flat_map(boundary_variants).collect();
    random.into_iter().chain(boundary).collect()
}

fn totality(set: &[EmbeddingParams]) -> Outcome {
    let bad: Vec<String> = set
        .par_iter()
        .filter_map(|p| {
            let v = match decide_embedding(p) {
                Ok(v) => v,
                Err(e) => return Some(format!("{p:?}: {e}")),
            };
            let d = derive(p);
            let matches = case_predicates(p, &d).iter().filter(|&&m| m).count();
            let ok = v.holds != v.failure.is_some()
                && v.holds == v.case_label.is_some()
                && matches <= 1
                && v.holds == necessity_failure(p).is_none();
            (!ok).then(|| format!("{p:?}"))
        })
        .collect();
    ensure(bad.is_empty(), || {
        format!("{} tuples violate, first {}", bad.len(), bad[0])
    })?;
    Ok(format!("{} tuples", set.len()))
}

fn kelvin(set: &[EmbeddingParams]) -> Outcome {
    let bad = set
        .par_iter()
        .filter(|p| {
            let dual = kelvin_dual(p);
            let (v, w) = (decide_embedding(p).unwrap(), decide_embedding(&dual).unwrap());
            kelvin_dual(&dual) != **p
                || v.holds != w.holds
                || v.case_label != w.case_label
                || v.inequality.map(|i| i.theta) != w.inequality.map(|i| i.theta)
        })
        .count();
    ensure(bad == 0, || format!("{bad} tuples not invariant"))?;
    Ok(format!("{} tuples", set.len()))
}

fn cross_oracle() -> Outcome {
    let mut grid = Vec::new();
    let a_values: Vec<Q> = (-10..=10).map(|i| q(i, 2)).chain([q(1, 3), q(3, 4), q(5, 3)]).collect();
    for dim in [1u32, 2, 3, 5] {
        for p in [qi(1), q(3, 2), qi(2), qi(3), qi(5)] {
            let mut rs = vec![qi(1), qi(2), q(7, 2), qi(10)];
            if let ExtendedReal::Finite(ps) = sobolev_conjugate(&p, dim) {
                rs.extend([ps.clone(), ps + qi(1)]);
            }
            rs.sort();
            rs.dedup();
            for r in rs {
                let n = qi(i64::from(dim));
                let slope = &p * (qi(1) / &n + qi(1) / &r - qi(1) / &p);
                for a in &a_values {
                    let mut bs: Vec<Q> = (-6..=6).map(|i| q(i, 2)).collect();
                    bs.extend([
                        &n * &slope,
                        a * &r * &slope,
                        &n * &slope + q(1, 7),
                        &n * &slope - q(1, 7),
                    ]);
                    for b in bs {
                        grid.push(EmbeddingParams::new(dim, a.clone(), b, Q::zero(), p.clone(), r.clone()));
                    }
                }
            }
        }
    }
    let c_zero = grid
        .par_iter()
        .filter(|p| decide_c_zero_th17(p).unwrap().holds != decide_embedding(p).unwrap().holds)
        .count();
    let sub: Vec<&EmbeddingParams> = grid.iter().filter(|p| p.b.is_zero()).collect();
    let b_c_zero = sub
        .iter()
        .filter(|p| {
            let v = decide_embedding(p).unwrap().holds;
            decide_b_zero_cor18(p).unwrap().holds != v || decide_c_zero_th17(p).unwrap().holds != v
        })
        .count();
    ensure(grid.len() >= 10_000, || format!("grid has only {} points", grid.len()))?;
    ensure(c_zero == 0 && b_c_zero == 0, || {
        format!("{c_zero} c=0 and {b_c_zero} b=c=0 disagreements")
    })?;
    Ok(format!(
        "{} c=0 points, {} b=c=0 points, 0 disagreements",
        grid.len(),
        sub.len()
    ))
}

fn identities(set: &[EmbeddingParams]) -> Outcome {
    let counts = set
        .par_iter()
        .map(|p| {
            let d = derive(p);
            let mut checked = (0usize, 0usize);
            let mut bad = 0usize;
            if let Some(theta) = &d.theta_c {
                checked.0 += 1;
                let eq6 = p.c == theta * &d.c1 + (qi(1) - theta) * &d.c0;
                let eq7 = (&p.c + p.n()) / &p.r == theta * (&p.b - &p.p + p.n()) / &p.p + (qi(1) - theta) * &p.a;
                bad += usize::from(!(eq6 && eq7));
            }
            if let (Some(star), Some(ps)) = (&d.star, p_star(p)) {
                checked.1 += 1;
                let w = &ps / &p.r;
                bad += usize::from(star.c_star1 != &w * &d.c1 + (qi(1) - &w) * &d.c0);
            }
            (checked.0, checked.1, bad)
        })
        .reduce(|| (0, 0, 0), |x, y| (x.0 + y.0, x.1 + y.1, x.2 + y.2));
    ensure(counts.2 == 0, || format!("{} identity violations", counts.2))?;
    Ok(format!("{} interpolation and {} star checks exact", counts.0, counts.1))
}

fn quadrature() -> Outcome {
    let fixtures = quadrature_fixtures();
    let mut worst = 0.0f64;
    for f in &fixtures {
        let got = (f.compute)();
        let rel = ((got - f.expected) / f.expected).abs();
        ensure(rel < 1e-10, || {
            format!("{}: got {got}, expected {}", f.name, f.expected)
        })?;
        worst = worst.max(rel);
    }
    ensure(fixtures.len() >= 20, || format!("only {} fixtures", fixtures.len()))?;
    Ok(format!("{} fixtures, worst relative error {worst:.1e}", fixtures.len()))
}

fn scale_invariance() -> Outcome {
    let sample = holding_sample(7, 31);
    let mut seen = BTreeSet::new();
    let mut worst = 1.0f64;
    let mut perturbed = 0;
    let mut exempt = 0;
    let lambdas = lambda_grid(3);
    for (case, params) in &sample {
        seen.insert(case.index());
        let family = auto_family(params, FamilyKind::Auto);
        let report =
            scale_invariance_check(params, &family, &lambdas, 1e-10).map_err(|e| format!("{params:?}: {e}"))?;
        ensure(report.spreads.len() >= 3, || {
            format!("{params:?}: fewer than 3 admissible profiles")
        })?;
        ensure(report.invariant_within(1e-6), || {
            format!("{params:?}: spread {}", report.scale_invariance_spread)
        })?;
        worst = worst.max(report.scale_invariance_spread);
        // perturbing θ shifts the ratio exponent by 0.1 k
        let k = (&params.b - &params.p + params.n()) / &params.p - &params.a;
        if to_f64(&k).abs() < 0.05 {
            exempt += 1;
            continue;
        }
        let theta = report.theta.clone() + q(1, 10);
        let off = scale_invariance_check_with_theta(params, &theta, &family, &lambdas, 1e-10)
            .map_err(|e| format!("{params:?}: {e}"))?;
        ensure(off.spreads.iter().all(|s| s.spread > 1.01), || {
            format!("{params:?}: perturbed spread only {}", off.scale_invariance_spread)
        })?;
        perturbed += 1;
    }
    ensure(sample.len() >= 25 && seen.len() == 4, || {
        format!("{} tuples over {} cases", sample.len(), seen.len())
    })?;
    Ok(format!(
        "{} tuples in all 4 cases, worst spread 1+{:.1e}; theta+0.1 breaks {perturbed}, {exempt} with |k| < 0.05 exempt",
        sample.len(),
        worst - 1.0
    ))
}

fn refutation() -> Outcome {
    let sample = failing_sample(5, 41);
    let mut tags = BTreeSet::new();
    let mut min_growth = f64::INFINITY;
    for params in &sample {
        let tag = decide_embedding(params).unwrap().failure_tag().unwrap();
        let ev = refute(params, DEFAULT_BUDGET).map_err(|e| format!("{params:?}: {e}"))?;
        ensure(ev.is_conclusive(), || {
            format!("{params:?}: growth {}", ev.growth_factor)
        })?;
        if matches!(tag, FailureTag::AZero | FailureTag::COutsideClosedInterval) {
            let m = ev
                .membership
                .as_ref()
                .ok_or_else(|| format!("{params:?}: no membership norms"))?;
            ensure(
                ev.mechanism == Mechanism::InfiniteTargetNorm && m.membership_converged(),
                || format!("{params:?}: membership norms not finite"),
            )?;
            let cert = m.target_norm.certificate.as_ref();
            ensure(cert.is_some(), || format!("{params:?}: target not certified divergent"))?;
        }
        if ev.mechanism != Mechanism::InfiniteTargetNorm {
            min_growth = min_growth.min(ev.growth_factor);
        }
        tags.insert(tag);
    }
    let reachable: BTreeSet<FailureTag> = FailureTag::ALL
        .into_iter()
        .filter(|t| *t != FailureTag::T1iiiRangeViolated)
        .collect();
    ensure(sample.len() >= 25 && tags == reachable, || {
        format!("{} tuples, tags {:?}", sample.len(), tags)
    })?;
    // the remaining tag is preempted by earlier reasons; confirm it never occurs
    let set = decision_set();
    let hits = set
        .par_iter()
        .filter(|p| decide_embedding(p).unwrap().failure_tag() == Some(FailureTag::T1iiiRangeViolated))
        .count();
    ensure(hits == 0, || {
        format!("{hits} tuples report T1iiiRangeViolated without refutation support")
    })?;
    Ok(format!(
        "{} tuples, {} tags, min unbounded growth {min_growth:.2e}; T1iiiRangeViolated unreachable in {} tuples",
        sample.len(),
        tags.len(),
        set.len()
    ))
}

fn lemmas() -> Outcome {
    let l5 = lemma5_fixtures();
    for (f, end, samples) in &l5 {
        ensure(lemma5_check(f, *end, samples, 1e-10) == Ok(true), || {
            format!("lemma5 fails on {f:?}")
        })?;
    }
    let pairs = lemma14_pairs();
    ensure(pairs.len() >= 10, || "fewer than 10 star pairs".to_string())?;
    for (u, params) in &pairs {
        let rep = lemma14_identity_check(u, params, 1e-10).map_err(|e| format!("{params:?}: {e}"))?;
        ensure(rep.sup_identity_holds(1e-6) && rep.grad_bound_holds(1e-6), || {
            format!("{params:?}: {rep:?}")
        })?;
    }
    let table = symmetrization_table();
    for (u, params) in &table {
        ensure(symmetrization_check(u, params, 1e-10).holds, || {
            format!("symmetrization fails on {u:?}")
        })?;
    }
    Ok(format!(
        "{} lemma5 fixtures, {} star pairs, {} separable functions",
        l5.len(),
        pairs.len(),
        table.len()
    ))
}

fn scan_bytes(dir: &std::path::Path, name: &str, threads: &str) -> Result<Vec<u8>, String> {
    let path = dir.join(name);
    let status = Command::new(env!("CARGO_BIN_EXE_sobolev-oracle"))
        .env("SOBOLEV_ORACLE_THREADS", threads)
        .args(["scan", "--dim", "3", "--a", "1/2", "--p", "2", "--r", "3"])
        .args(["--b-range", "-4:4:100", "--c-range", "-6:6:100", "--out"])
        .arg(&path)
        .status()
        .map_err(|e| e.to_string())?;
    ensure(status.success(), || format!("scan exited with {status}"))?;
    std::fs::read(&path).map_err(|e| e.to_string())
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let runs = [
        scan_bytes(dir.path(), "a.csv", "0")?,
        scan_bytes(dir.path(), "b.csv", "0")?,
        scan_bytes(dir.path(), "one.csv", "1")?,
        scan_bytes(dir.path(), "four.csv", "4")?,
    ];
    ensure(runs.iter().all(|r| r == &runs[0]), || {
        "scan output differs between runs".to_string()
    })?;
    let rows = runs[0].iter().filter(|&&b| b == b'\n').count();
    ensure(rows == 10_001, || format!("{rows} lines"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut round_trips = 0;
    for _ in 0..2_000 {
        let p = random_tuple(&mut rng);
        for t in boundary_variants(&p).into_iter().chain([p]) {
            let rec = VerdictRecord::decide(&t).map_err(|e| e.to_string())?;
            let back = VerdictRecord::from_json(&rec.to_json()).map_err(|e| e.to_string())?;
            ensure(back == rec, || format!("{t:?} does not round-trip"))?;
            round_trips += 1;
        }
    }
    Ok(format!(
        "100x100 scan identical over 4 runs (threads auto, 1, 4); {round_trips} JSON round trips"
    ))
}

fn main() {
    let set = decision_set();
    let criteria: Vec<Criterion> = vec![
        (
            "1 decision totality and exclusivity",
            Some(10),
            Box::new(|| totality(&set)),
        ),
        ("2 Kelvin duality", Some(5), Box::new(|| kelvin(&set))),
        ("3 cross-oracle agreement", Some(10), Box::new(cross_oracle)),
        ("4 algebraic identities", None, Box::new(|| identities(&set))),
        ("5 quadrature oracle", Some(5), Box::new(quadrature)),
        ("6 scale-invariance certification", Some(60), Box::new(scale_invariance)),
        ("7 refutation coverage", Some(60), Box::new(refutation)),
        ("8 lemma-level checks", Some(30), Box::new(lemmas)),
        ("9 CLI determinism", Some(10), Box::new(determinism)),
    ];
    let mut failed = 0;
    for (name, limit, run) in criteria {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let over = limit.is_some_and(|s| elapsed > Duration::from_secs(s));
        let limit_text = limit.map(|s| format!(" (limit {s} s)")).unwrap_or_default();
        match (&result, over) {
            (Ok(detail), false) => {
                println!(
                    "PASS criterion {name}: {detail} [{:.2} s{limit_text}]",
                    elapsed.as_secs_f64()
                )
            }
            (Ok(detail), true) => {
                failed += 1;
                println!(
                    "FAIL criterion {name}: too slow; {detail} [{:.2} s{limit_text}]",
                    elapsed.as_secs_f64()
                )
            }
            (Err(e), _) => {
                failed += 1;
                println!(
                    "FAIL criterion {name}: {e} [{:.2} s{limit_text}]",
                    elapsed.as_secs_f64()
                )
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all 9 criteria passed");
}
