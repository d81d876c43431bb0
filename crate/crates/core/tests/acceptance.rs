//! Acceptance sweeps. Each criterion prints one PASS or FAIL line; the
//! process exits nonzero if any of them fails.
//!
//! Everything is compared as exact rationals. Runtime limits are reported
//! next to the measured time and count against the criterion.

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use chorefair::bench::{
    case_count, case_instance, evaluate_case, run_suite, BenchConfig, Suite, SuiteReport,
};
use chorefair::bivalued::{
    build_agent_groups, completion_violations, detect_bivalued, group_violations,
    partial_allocation_small, partial_violations, rebalance_violations, solve_bi_general_traced,
    BiGeneralBranch,
};
use chorefair::generate::{generate_instance, GenParams, GeneratorKind};
use chorefair::io::emit_instance;
use chorefair::three_agents::{placement_within_bounds, solve_three_traced, ThreeCase};

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        ok,
        detail: detail.into(),
    }
}

fn first_failures(report: &SuiteReport) -> String {
    report
        .failures
        .iter()
        .take(3)
        .map(|(i, m)| format!("case {i}: {m}"))
        .collect::<Vec<_>>()
        .join("; ")
}

/// Violations, instance count and time limit of one suite run.
fn suite_outcome(report: &SuiteReport, expected: usize, limit: Duration) -> Outcome {
    let secs = report.elapsed.as_secs_f64();
    let mut problems = Vec::new();
    if report.instances() != expected {
        problems.push(format!(
            "{} instances, expected {expected}",
            report.instances()
        ));
    }
    if report.violations() > 0 {
        problems.push(format!(
            "{} violations ({})",
            report.violations(),
            first_failures(report)
        ));
    }
    if report.elapsed > limit {
        problems.push(format!("took {secs:.1}s, limit {}s", limit.as_secs()));
    }
    if problems.is_empty() {
        outcome(
            true,
            format!("{} instances, 0 violations, {secs:.1}s", report.instances()),
        )
    } else {
        outcome(false, problems.join(", "))
    }
}

fn cfg() -> BenchConfig {
    BenchConfig::default()
}

// ---------------------------------------------------------------------------
// Criteria
// ---------------------------------------------------------------------------

fn three_agents() -> Outcome {
    let report = run_suite(Suite::ThreeGeneral, &cfg());
    suite_outcome(&report, 1000, Duration::from_secs(10))
}

fn placement_bounds() -> Outcome {
    let cfg = cfg();
    let (mut runs, mut checks, mut bad) = (0, 0, Vec::new());
    for index in 0..case_count(Suite::ThreeGeneral, &cfg) {
        let inst = case_instance(Suite::ThreeGeneral, &cfg, index).0;
        let out = solve_three_traced(&inst).expect("three agents");
        if let (Some(ThreeCase::TwoSmall { small, .. }), Some(parts)) = (&out.case, &out.placement)
        {
            runs += 1;
            for &agent in small {
                // One call covers the agent's three parts.
                checks += 3;
                if !placement_within_bounds(&inst, agent, parts) {
                    bad.push(format!("case {index} agent {agent}"));
                }
            }
        }
    }
    let ok = runs > 0 && bad.is_empty();
    outcome(
        ok,
        format!(
            "{runs} two-small runs, {checks} bounds checked, {} outside [1/8, 5/8] {:?}",
            bad.len(),
            bad
        ),
    )
}

fn general_n() -> Outcome {
    let report = run_suite(Suite::GeneralN, &cfg());
    let main = report
        .summary
        .iter()
        .filter(|r| r.class.starts_with("main"))
        .map(|r| r.instances)
        .sum::<usize>();
    let o = suite_outcome(&report, 4000, Duration::from_secs(60));
    outcome(
        o.ok,
        format!("{}, {main} even partitions checked", o.detail),
    )
}

fn bivalued_three() -> Outcome {
    let started = Instant::now();
    let exhaustive = run_suite(Suite::Bi3Exhaustive, &cfg());
    let random = run_suite(Suite::Bi3Random, &cfg());
    let elapsed = started.elapsed();
    let exhaustive_count: usize = (0..=4).map(|m| 1usize << (3 * m)).sum::<usize>() * 4;
    let a = suite_outcome(&exhaustive, exhaustive_count, Duration::from_secs(300));
    let b = suite_outcome(&random, 5000, Duration::from_secs(300));
    let ok = a.ok && b.ok && elapsed <= Duration::from_secs(300);
    outcome(
        ok,
        format!(
            "exhaustive: {}; random: {}; {:.1}s total",
            a.detail,
            b.detail,
            elapsed.as_secs_f64()
        ),
    )
}

fn bivalued_general() -> Outcome {
    let report = run_suite(Suite::BiGeneral, &cfg());
    let mut o = suite_outcome(&report, 4000, Duration::from_secs(120));
    // Each agent count must reach all three sizes of the costly-item set.
    let mut seen: BTreeMap<usize, BTreeSet<&str>> = BTreeMap::new();
    for row in &report.summary {
        let branch = match row.class.as_str() {
            "many-large" => "at least n",
            "one-short" => "exactly n-1",
            c if c == "rebalanced" || c.starts_with("completed") => "fewer than n-1",
            _ => continue,
        };
        seen.entry(row.n).or_default().insert(branch);
    }
    let missing: Vec<usize> = (4..=7)
        .filter(|n| seen.get(n).map_or(0, BTreeSet::len) < 3)
        .collect();
    if !missing.is_empty() {
        o.ok = false;
        o.detail
            .push_str(&format!(", some branch never reached for n in {missing:?}"));
    }
    o
}

fn tail_bound() -> Outcome {
    suite_outcome(
        &run_suite(Suite::TailBound, &cfg()),
        500,
        Duration::from_secs(60),
    )
}

fn round_robin() -> Outcome {
    suite_outcome(
        &run_suite(Suite::RoundRobin, &cfg()),
        500,
        Duration::from_secs(60),
    )
}

/// Structural invariants of the partial allocation, the agent groups, the
/// rebalancing loop and the completion step, on every bi-valued case above.
fn structural_invariants() -> Outcome {
    let cfg = cfg();
    let (mut runs, mut bad) = (0usize, Vec::new());
    for suite in [Suite::Bi3Exhaustive, Suite::Bi3Random] {
        for index in 0..case_count(suite, &cfg) {
            let inst = case_instance(suite, &cfg, index).0;
            let profile = detect_bivalued(&inst).expect("bi-valued");
            let x0 = partial_allocation_small(&profile);
            let groups = build_agent_groups(&x0, &profile);
            runs += 1;
            for v in partial_violations(&profile, &x0)
                .into_iter()
                .chain(group_violations(&x0, &profile, &groups))
            {
                bad.push(format!("{suite} {index}: {v}"));
            }
        }
    }
    for index in 0..case_count(Suite::BiGeneral, &cfg) {
        let inst = case_instance(Suite::BiGeneral, &cfg, index).0;
        let out = solve_bi_general_traced(&inst).expect("bi-valued");
        runs += 1;
        if let (Some(x0), Some(groups)) = (&out.x0, &out.groups) {
            for v in partial_violations(&out.profile, x0)
                .into_iter()
                .chain(group_violations(x0, &out.profile, groups))
            {
                bad.push(format!("bi-general {index}: {v}"));
            }
        }
        if out.branch == BiGeneralBranch::Rebalanced {
            bad.extend(
                rebalance_violations(&out)
                    .into_iter()
                    .map(|v| format!("bi-general {index}: {v}")),
            );
        }
        bad.extend(
            completion_violations(&out)
                .into_iter()
                .map(|v| format!("bi-general {index}: {v}")),
        );
    }
    let shown: Vec<_> = bad.iter().take(3).collect();
    outcome(
        bad.is_empty(),
        format!("{runs} runs, {} violations {shown:?}", bad.len()),
    )
}

fn oracle_sandwich() -> Outcome {
    let report = run_suite(Suite::OracleCross, &cfg());
    let expected = case_count(Suite::OracleCross, &cfg());
    suite_outcome(&report, expected, Duration::MAX)
}

fn determinism() -> Outcome {
    let small = BenchConfig {
        seed: 7,
        count: Some(60),
        max_m: 3,
        budget: 200_000,
    };
    let mut differing = Vec::new();
    for suite in Suite::ALL {
        let a = run_suite(suite, &small).csv();
        let b = run_suite(suite, &small).csv();
        if a != b {
            differing.push(suite.name());
        }
    }
    // A full-size suite and single cases evaluated out of order.
    if run_suite(Suite::ThreeGeneral, &cfg()).csv() != run_suite(Suite::ThreeGeneral, &cfg()).csv()
    {
        differing.push("three-general (full)");
    }
    if evaluate_case(Suite::BiGeneral, &cfg(), 2911)
        != evaluate_case(Suite::BiGeneral, &cfg(), 2911)
    {
        differing.push("bi-general case 2911");
    }
    for kind in GeneratorKind::ALL {
        let a = generate_instance(kind, 4, 12, 99, &GenParams::default()).unwrap();
        let b = generate_instance(kind, 4, 12, 99, &GenParams::default()).unwrap();
        if emit_instance(&a) != emit_instance(&b) {
            differing.push(kind.name());
        }
    }
    outcome(
        differing.is_empty(),
        format!("reports differing between runs: {differing:?}"),
    )
}

// ---------------------------------------------------------------------------

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("three agents: alpha <= 5 on 1000 instances", three_agents),
        (
            "three agents: placement bundles within [1/8, 5/8]",
            placement_bounds,
        ),
        (
            "n = 4..7: alpha <= 3n^2 and even partition shares",
            general_n,
        ),
        (
            "bi-valued three agents: EFX, exhaustive and random",
            bivalued_three,
        ),
        (
            "bi-valued n = 4..7: alpha <= n-1, <= 2 with many costly items",
            bivalued_general,
        ),
        ("tail allocation: alpha <= m-n", tail_bound),
        ("round robin pair relations", round_robin),
        (
            "partial allocation and group invariants",
            structural_invariants,
        ),
        ("oracle <= solver alpha <= bound", oracle_sandwich),
        ("same seed, same report", determinism),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let o = check();
        let status = if o.ok { "PASS" } else { "FAIL" };
        if !o.ok {
            failed += 1;
        }
        println!(
            "{status} {:>2} {name}: {} [{:.1}s]",
            k + 1,
            o.detail,
            started.elapsed().as_secs_f64()
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
