//! End-to-end acceptance checks. Runs without the libtest harness so every
//! criterion prints one PASS/FAIL line, and exits nonzero if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use alignbound::fixtures::{builtin_fixture, shannon_witness_unicast11, TOY_NAMES};
use alignbound::generate::random_no_overlap_instance;
use alignbound::gf::{intersect_dim, intersection_basis, DEFAULT_PRIME};
use alignbound::graph::{
    build_alignment_graph, build_conflict_graph, conflict_bound, has_overlapping_cycles, internal_conflict_distance,
};
use alignbound::lp::{check_profile_feasible, solve_symmetric_bound, BoundResult, SolverOptions};
use alignbound::nonshannon::{
    augmented_bound, bound_with_tuples, builtin_certificate, check_certificate, dual_certificate, Family, FourTuple,
    DEFAULT_BUDGET,
};
use alignbound::oracle::brute_force_linear_rate;
use alignbound::scheme::{
    build_no_overlap, build_pattern_search, build_unicast11, verify_scheme, OverlapSpec, DEFAULT_TRIALS,
};
use alignbound::{ratio, Instance, MessageSet};

const P: u64 = DEFAULT_PRIME;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn opts() -> SolverOptions {
    SolverOptions::default()
}

fn fixture(name: &str) -> Instance {
    builtin_fixture(name).expect("built-in fixture")
}

fn ms(ids: &[u32]) -> MessageSet {
    MessageSet::from_ids(ids.iter().copied())
}

/// The bound must also be certified by its own dual multipliers, re-checked
/// without the LP.
fn certified(inst: &Instance, r: &BoundResult) -> Result<(), String> {
    let v = check_certificate(inst, &dual_certificate(r)).map_err(|e| e.to_string())?;
    ensure!(v.valid && v.implied_bound == Some(r.rate), "dual certificate does not reproduce {}: {}", r.rate, v.reason);
    Ok(())
}

fn bound(inst: &Instance, family: Family) -> Result<BoundResult, String> {
    let r = match family {
        Family::Shannon => solve_symmetric_bound(inst, &opts()),
        f => augmented_bound(inst, f, DEFAULT_BUDGET, &opts()),
    }
    .map_err(|e| e.to_string())?;
    certified(inst, &r)?;
    Ok(r)
}

fn c1_shannon_unicast11() -> Outcome {
    let inst = fixture("unicast11");
    let start = Instant::now();
    let r = bound(&inst, Family::Shannon)?;
    let took = start.elapsed();
    ensure!(r.rate == ratio(2, 5), "Shannon bound {} != 2/5", r.rate);
    ensure!(took <= Duration::from_secs(300), "took {took:?}, over five minutes");
    Ok(format!("R* = {} in {:.1?}", r.rate, took))
}

fn c2_witness() -> Outcome {
    let inst = fixture("unicast11");
    let rep = check_profile_feasible(&inst, &shannon_witness_unicast11(), ratio(2, 5));
    ensure!(rep.is_feasible(), "{} violated rows, first {:?}", rep.violations.len(), rep.violations.first());
    Ok(format!("{} rows checked at R = 2/5, 0 violated", rep.rows_checked))
}

fn diamond_tuple() -> FourTuple {
    FourTuple::new(ms(&[2, 4, 5]), ms(&[2, 3, 5]), ms(&[2, 3, 4]), ms(&[3, 4, 5]))
}

fn c3_zy_unicast11() -> Outcome {
    let inst = fixture("unicast11");
    let tuples = [diamond_tuple(), diamond_tuple().swap_ab()];
    let r = bound_with_tuples(&inst, Family::ZhangYeung, &tuples, &opts()).map_err(|e| e.to_string())?;
    certified(&inst, &r)?;
    ensure!(r.rate == ratio(11, 28), "ZY bound {} != 11/28", r.rate);
    let (cinst, cert) = builtin_certificate("cert-unicast11-zy-11-28").map_err(|e| e.to_string())?;
    let v = check_certificate(&cinst, &cert).map_err(|e| e.to_string())?;
    ensure!(v.valid && v.implied_bound == Some(ratio(11, 28)), "frozen certificate: {}", v.reason);
    Ok(format!("R* = {} with two tuples; frozen certificate valid", r.rate))
}

fn c4_ingleton_pinch() -> Outcome {
    let inst = fixture("unicast11");
    let r = bound(&inst, Family::Ingleton)?;
    ensure!(r.rate == ratio(5, 13), "Ingleton bound {} != 5/13", r.rate);
    let s = build_unicast11(7, P).map_err(|e| e.to_string())?;
    let rep = verify_scheme(&inst, &s).map_err(|e| e.to_string())?;
    ensure!(rep.pass && rep.rate == ratio(5, 13), "scheme {} pass={}", rep.rate, rep.pass);
    Ok(format!("upper {} = lower {}", r.rate, rep.rate))
}

fn c5_groupcast() -> Outcome {
    let inst = fixture("groupcast6");
    let mut got = Vec::new();
    for (family, want) in [(Family::Shannon, ratio(2, 5)), (Family::ZhangYeung, ratio(11, 28)), (Family::Ingleton, ratio(5, 13))] {
        let r = bound(&inst, family)?;
        ensure!(r.rate == want, "{family} bound {} != {want}", r.rate);
        got.push(r.rate.to_string());
    }
    let s = build_pattern_search(&inst, 5, 13, &OverlapSpec::uniform(8), 0, P, DEFAULT_TRIALS).map_err(|e| e.to_string())?;
    let rep = verify_scheme(&inst, &s).map_err(|e| e.to_string())?;
    ensure!(rep.pass && rep.rate == ratio(5, 13), "search scheme {} pass={}", rep.rate, rep.pass);
    Ok(format!("bounds {}; search scheme {} verified", got.join(", "), rep.rate))
}

fn c6_theorem7_suite() -> Outcome {
    let mut failures = Vec::new();
    for k in 0..50u64 {
        let delta = 2 + (k % 2) as usize;
        let n = 2 * delta + 2 + (k as usize / 2) % (10 - 2 * delta - 1);
        let inst = random_no_overlap_instance(n, delta, 1000 + k).map_err(|e| e.to_string())?;
        let target = conflict_bound(Some(delta)).unwrap();
        let scheme_ok = build_no_overlap(&inst, delta, k, P)
            .ok()
            .and_then(|s| verify_scheme(&inst, &s).ok())
            .is_some_and(|rep| rep.pass && rep.rate == target);
        let r = solve_symmetric_bound(&inst, &opts()).map_err(|e| e.to_string())?;
        if !scheme_ok || r.rate != target {
            failures.push(format!("#{k} (N={n}, Δ={delta}): scheme_ok={scheme_ok} bound={}", r.rate));
        }
    }
    ensure!(failures.is_empty(), "{} of 50 failed: {}", failures.len(), failures.join("; "));
    Ok("50 of 50 instances: scheme verified and Shannon bound = Δ/(2Δ+1)".into())
}

fn c7_fig7() -> Outcome {
    let inst = fixture("fig7");
    let a = build_alignment_graph(&inst);
    let delta = internal_conflict_distance(&a, &build_conflict_graph(&inst));
    ensure!(delta == Some(3), "fig7 has Δ = {delta:?}");
    let s = build_no_overlap(&inst, 3, 0, P).map_err(|e| e.to_string())?;
    let rep = verify_scheme(&inst, &s).map_err(|e| e.to_string())?;
    ensure!(rep.pass && rep.rate == ratio(3, 7), "scheme {} pass={}", rep.rate, rep.pass);
    let worst = rep.edge_unions.iter().map(|(_, d)| *d).max().unwrap_or(0);
    ensure!(worst <= 4, "an adjacent pair occupies {worst} of 7 dimensions");
    Ok(format!("verified {} with adjacent unions at most {worst}/7", rep.rate))
}

fn c8_oracle_equivalence() -> Outcome {
    let mut lines = Vec::new();
    for name in TOY_NAMES {
        let inst = fixture(name);
        let oracle = brute_force_linear_rate(&inst, 3, 2).map_err(|e| e.to_string())?;
        let oracle_rate = oracle.rate.ok_or(format!("{name}: oracle found nothing"))?;
        let shannon = solve_symmetric_bound(&inst, &opts()).map_err(|e| e.to_string())?.rate;
        ensure!(oracle_rate == shannon, "{name}: oracle {oracle_rate} vs Shannon {shannon}");
        let a = build_alignment_graph(&inst);
        let builder = match internal_conflict_distance(&a, &build_conflict_graph(&inst)) {
            Some(d) if has_overlapping_cycles(&a).iter().all(|(_, o)| !o) => {
                let s = build_no_overlap(&inst, d, 0, P).map_err(|e| format!("{name}: {e}"))?;
                ensure!(verify_scheme(&inst, &s).map(|r| r.pass).unwrap_or(false), "{name}: builder scheme fails");
                ensure!(s.rate() == oracle_rate, "{name}: builder {} vs oracle {oracle_rate}", s.rate());
                s.rate().to_string()
            }
            _ => "-".to_string(),
        };
        lines.push(format!("{name} {oracle_rate} | {shannon} | {builder}"));
    }
    Ok(format!("oracle | Shannon | builder: {}", lines.join("; ")))
}

fn c9_structure() -> Outcome {
    let inst = fixture("unicast11");
    let a = build_alignment_graph(&inst);
    let edges: Vec<(u32, u32)> = a.edges().collect();
    let want = vec![(1, 3), (2, 3), (2, 4), (3, 4), (3, 5), (4, 5), (4, 6)];
    ensure!(edges == want, "alignment edges {edges:?}");
    let delta = internal_conflict_distance(&a, &build_conflict_graph(&inst));
    ensure!(delta == Some(2), "Δ = {delta:?}");
    ensure!(has_overlapping_cycles(&a).iter().any(|(_, o)| *o), "no overlapping cycles found");
    let s = build_unicast11(7, P).map_err(|e| e.to_string())?;
    let rep = verify_scheme(&inst, &s).map_err(|e| e.to_string())?;
    ensure!(rep.edge_unions.iter().all(|(_, d)| *d == 8), "edge unions {:?}", rep.edge_unions);
    for [i, j, k] in [[2, 3, 4], [3, 4, 5]] {
        let ij = intersection_basis(s.matrix(i), s.matrix(j)).map_err(|e| e.to_string())?;
        let d = intersect_dim(&ij, s.matrix(k)).map_err(|e| e.to_string())?;
        ensure!(d == 1, "dim(V{i} ∩ V{j} ∩ V{k}) = {d}");
    }
    ensure!(s.intersect_dim(2, 5) == 0, "dim(V2 ∩ V5) = {}", s.intersect_dim(2, 5));
    Ok("7 edges, Δ=2, overlapping cycles; unions 8/13, triple intersections 1/13, V2∩V5 = 0".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("Shannon bound on unicast11 is 2/5", c1_shannon_unicast11),
        ("feasibility witness at 2/5", c2_witness),
        ("Zhang-Yeung bound on unicast11 is 11/28", c3_zy_unicast11),
        ("Ingleton bound 5/13 meets the 5/13 scheme", c4_ingleton_pinch),
        ("groupcast6 bounds and searched scheme", c5_groupcast),
        ("random instances without overlapping cycles", c6_theorem7_suite),
        ("fig7 scheme at 3/7", c7_fig7),
        ("oracle, LP and builder agree on toys", c8_oracle_equivalence),
        ("unicast11 structural facts", c9_structure),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("acceptance {}: PASS {name}: {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("acceptance {}: FAIL {name}: {why}", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
