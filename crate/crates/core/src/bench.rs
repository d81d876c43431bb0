//! Seeded benchmark suites with exact verification of every run.
//!
//! A suite is an indexed family of cases. Case `k` is built from its own
//! ChaCha8 stream, so cases can be evaluated in any order (and in parallel)
//! and the aggregated report is still byte-identical across runs. Wall time
//! only ever appears in the human-readable table.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::One;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::bivalued::{
    added_item_relation_holds, build_agent_groups, completion_violations, detect_bivalued,
    group_violations, partial_allocation_small, partial_violations, rebalance_violations,
    round_robin_chores, round_robin_envy_holds, solve_bi_general_traced, solve_bi_three_traced,
    BiGeneralBranch, BiProfile, BiThreeCase, Completion,
};
use crate::general_n::{self, even_partition_bound_holds, solve_general_n_traced};
use crate::generate::{bernoulli, generate_instance, GenParams, GeneratorKind};
use crate::model::{
    format_rational, int, min_efx_alpha, ratio, trivial_tail_allocation, Allocation, Alpha, Cost,
    Instance,
};
use crate::oracle::{allocation_count, efx_exists, oracle_min_alpha, DEFAULT_BUDGET};
use crate::three_agents::{placement_within_bounds, solve_three_traced, ThreeCase};

/// Environment variable capping the worker pool size.
pub const THREADS_ENV: &str = "CHOREFAIR_THREADS";

/// Small costs used by the three-agent bi-valued suites.
pub const BI3_EPSILONS: [(i64, i64); 4] = [(0, 1), (1, 3), (2, 3), (9, 10)];
/// Small costs used by the `n >= 4` bi-valued suite.
pub const BIN_EPSILONS: [(i64, i64); 4] = [(0, 1), (1, 4), (1, 2), (9, 10)];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BenchError {
    #[error("unknown suite {0:?} (expected one of: {list})", list = Suite::ALL.map(Suite::name).join(", "))]
    UnknownSuite(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    ThreeGeneral,
    GeneralN,
    Bi3Exhaustive,
    Bi3Random,
    BiGeneral,
    TailBound,
    RoundRobin,
    OracleCross,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::ThreeGeneral,
        Suite::GeneralN,
        Suite::Bi3Exhaustive,
        Suite::Bi3Random,
        Suite::BiGeneral,
        Suite::TailBound,
        Suite::RoundRobin,
        Suite::OracleCross,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::ThreeGeneral => "three-general",
            Suite::GeneralN => "general-n",
            Suite::Bi3Exhaustive => "bi3-exhaustive",
            Suite::Bi3Random => "bi3-random",
            Suite::BiGeneral => "bi-general",
            Suite::TailBound => "tail-bound",
            Suite::RoundRobin => "round-robin",
            Suite::OracleCross => "oracle-cross",
        }
    }

    fn tag(self) -> u64 {
        Suite::ALL.iter().position(|&s| s == self).unwrap() as u64 + 1
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| BenchError::UnknownSuite(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchConfig {
    pub seed: u64,
    /// Overrides the number of random cases (per agent count, where the
    /// suite sweeps several).
    pub count: Option<usize>,
    /// Largest `m` of the exhaustive bi-valued sweep.
    pub max_m: usize,
    /// Largest `n^m` handed to the exhaustive oracle.
    pub budget: u64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            seed: 0,
            count: None,
            max_m: 4,
            budget: DEFAULT_BUDGET,
        }
    }
}

impl BenchConfig {
    fn count_or(&self, default: usize) -> usize {
        self.count.unwrap_or(default)
    }
}

/// One evaluated case.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseResult {
    pub index: usize,
    pub algorithm: &'static str,
    pub n: usize,
    pub m: usize,
    /// The path or branch the solver took, or the stratum for suites
    /// without one.
    pub class: String,
    pub alpha: Alpha,
    /// The factor `alpha` was checked against, if any.
    pub bound: Option<Cost>,
    /// Exhaustive optimum, where the suite computes it.
    pub oracle: Option<Alpha>,
    pub violations: Vec<String>,
}

impl CaseResult {
    fn new(
        index: usize,
        algorithm: &'static str,
        inst: &Instance,
        class: impl Into<String>,
    ) -> Self {
        CaseResult {
            index,
            algorithm,
            n: inst.n(),
            m: inst.m(),
            class: class.into(),
            alpha: Alpha::zero(),
            bound: None,
            oracle: None,
            violations: Vec::new(),
        }
    }

    fn fail(&mut self, message: impl Into<String>) {
        self.violations.push(message.into());
    }

    /// Records α of `alloc` and checks it against `bound` and completeness.
    fn judge(&mut self, inst: &Instance, alloc: &Allocation, bound: Cost) {
        match min_efx_alpha(inst, alloc) {
            Ok(report) => self.alpha = report.alpha,
            Err(e) => self.fail(format!("invalid allocation: {e}")),
        }
        if !alloc.is_complete(inst.m()) {
            self.fail("allocation is not complete");
        }
        if !self.alpha.within(&bound) {
            self.fail(format!(
                "alpha {} exceeds {}",
                self.alpha,
                format_rational(&bound)
            ));
        }
        self.bound = Some(bound);
    }
}

/// Aggregate over the cases sharing an algorithm, agent count and class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SummaryRow {
    pub algorithm: &'static str,
    pub n: usize,
    pub class: String,
    pub instances: usize,
    pub max_alpha: Alpha,
    pub max_bound: Option<Cost>,
    pub max_oracle: Option<Alpha>,
    pub violations: usize,
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub suite: Suite,
    pub summary: Vec<SummaryRow>,
    /// `(case index, message)` for every failed check, in case order.
    pub failures: Vec<(usize, String)>,
    pub elapsed: Duration,
}

impl SuiteReport {
    pub fn instances(&self) -> usize {
        self.summary.iter().map(|r| r.instances).sum()
    }

    pub fn violations(&self) -> usize {
        self.summary.iter().map(|r| r.violations).sum()
    }

    /// Machine-readable summary; contains no timing, so it is reproducible.
    pub fn csv(&self) -> String {
        let mut out = String::from(
            "suite,algorithm,n,class,instances,max_alpha,bound,max_oracle_alpha,violations\n",
        );
        for r in &self.summary {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{}\n",
                self.suite,
                r.algorithm,
                r.n,
                r.class,
                r.instances,
                r.max_alpha,
                r.max_bound
                    .as_ref()
                    .map_or("-".to_string(), format_rational),
                r.max_oracle
                    .as_ref()
                    .map_or("-".to_string(), ToString::to_string),
                r.violations
            ));
        }
        out
    }

    pub fn table(&self) -> String {
        let header = [
            "algorithm",
            "n",
            "class",
            "instances",
            "max alpha",
            "bound",
            "oracle",
            "violations",
        ];
        let rows: Vec<[String; 8]> = self
            .summary
            .iter()
            .map(|r| {
                [
                    r.algorithm.to_string(),
                    r.n.to_string(),
                    r.class.clone(),
                    r.instances.to_string(),
                    r.max_alpha.to_string(),
                    r.max_bound
                        .as_ref()
                        .map_or("-".to_string(), format_rational),
                    r.max_oracle
                        .as_ref()
                        .map_or("-".to_string(), ToString::to_string),
                    r.violations.to_string(),
                ]
            })
            .collect();
        let mut width = header.map(str::len);
        for row in &rows {
            for (w, cell) in width.iter_mut().zip(row) {
                *w = (*w).max(cell.len());
            }
        }
        let render = |cells: &[String]| {
            let padded: Vec<String> = cells
                .iter()
                .zip(width)
                .map(|(c, w)| format!("{c:<w$}"))
                .collect();
            padded.join("  ").trim_end().to_string() + "\n"
        };
        let mut out = format!(
            "suite {}: {} instances, {} violations, {:.2?}\n",
            self.suite,
            self.instances(),
            self.violations(),
            self.elapsed
        );
        out.push_str(&render(&header.map(String::from)));
        for row in &rows {
            out.push_str(&render(row));
        }
        out
    }
}

fn case_rng(suite: Suite, seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(suite.tag() << 40 | index as u64);
    rng
}

fn from_ints(rows: Vec<Vec<i64>>) -> Instance {
    Instance::from_integers(&rows).expect("suite rows are rectangular and nonnegative")
}

fn from_flags(flags: &[Vec<bool>], eps: &Cost) -> Instance {
    let rows = flags
        .iter()
        .map(|r| {
            r.iter()
                .map(|&large| if large { Cost::one() } else { eps.clone() })
                .collect()
        })
        .collect();
    Instance::new(rows).expect("suite rows are rectangular and nonnegative")
}

fn eps_of((a, b): (i64, i64)) -> Cost {
    ratio(a, b)
}

/// Number of cases in a suite under `cfg`.
pub fn case_count(suite: Suite, cfg: &BenchConfig) -> usize {
    match suite {
        Suite::ThreeGeneral => cfg.count_or(1000),
        Suite::GeneralN => 4 * cfg.count_or(1000),
        Suite::Bi3Exhaustive => (0..=cfg.max_m)
            .map(|m| (1usize << (3 * m)) * BI3_EPSILONS.len())
            .sum(),
        Suite::Bi3Random => cfg.count_or(5000),
        Suite::BiGeneral => 4 * cfg.count_or(1000),
        Suite::TailBound => cfg.count_or(500),
        Suite::RoundRobin => cfg.count_or(500),
        Suite::OracleCross => oracle_sources(cfg).len(),
    }
}

/// The instance of case `index` and the stratum it was drawn from.
pub fn case_instance(suite: Suite, cfg: &BenchConfig, index: usize) -> (Instance, &'static str) {
    let mut rng = case_rng(suite, cfg.seed, index);
    match suite {
        Suite::ThreeGeneral => three_case(&mut rng, index),
        Suite::GeneralN => general_case(&mut rng, 4 + index / cfg.count_or(1000), index),
        Suite::Bi3Exhaustive => bi3_exhaustive_case(index),
        Suite::Bi3Random => bi3_random_case(&mut rng, index),
        Suite::BiGeneral => bin_case(&mut rng, 4 + index / cfg.count_or(1000), index),
        Suite::TailBound => tail_case(&mut rng, index),
        Suite::RoundRobin => round_robin_case(&mut rng, index),
        Suite::OracleCross => {
            let (source, i) = oracle_sources(cfg)[index];
            case_instance(source, cfg, i)
        }
    }
}

fn three_case(rng: &mut ChaCha8Rng, index: usize) -> (Instance, &'static str) {
    let m = rng.gen_range(3..=40);
    let seed = rng.gen();
    let generated = |kind| {
        generate_instance(kind, 3, m, seed, &GenParams::default())
            .unwrap()
            .instance
    };
    match index % 5 {
        0 => (generated(GeneratorKind::Uniform), "uniform"),
        1 => (generated(GeneratorKind::Ido), "ido"),
        2 => (generated(GeneratorKind::Identical), "identical"),
        3 => {
            // Some agents get one item worth a large share of their total.
            let mut rows: Vec<Vec<i64>> = (0..3)
                .map(|_| (0..m).map(|_| rng.gen_range(0..=100)).collect())
                .collect();
            let planted = 1 + (index / 5) % 3;
            let shared = rng.gen_range(0..m);
            for row in rows.iter_mut().take(planted) {
                let item = if (index / 15).is_multiple_of(2) {
                    shared
                } else {
                    rng.gen_range(0..m)
                };
                row[item] = rng.gen_range(25 * m as i64..=100 * m as i64);
            }
            (from_ints(rows), "planted")
        }
        _ => {
            let rows = (0..3)
                .map(|_| (0..m).map(|_| rng.gen_range(1..=30i64).pow(3)).collect())
                .collect();
            (from_ints(rows), "heavy-tail")
        }
    }
}

fn general_case(rng: &mut ChaCha8Rng, n: usize, index: usize) -> (Instance, &'static str) {
    let seed = rng.gen();
    match index % 4 {
        3 => {
            // Nearly equal costs with a few expensive items; with n = 4 and
            // m >= 56 the tail fallback cannot apply.
            let m = if n == 4 {
                rng.gen_range(56..=60)
            } else {
                rng.gen_range(n..=60)
            };
            let rows = (0..n)
                .map(|_| {
                    let mut row: Vec<i64> = (0..m).map(|_| rng.gen_range(950..=1000)).collect();
                    for _ in 0..rng.gen_range(0..=2) {
                        row[rng.gen_range(0..4.min(m))] = rng.gen_range(2000..=4000);
                    }
                    row
                })
                .collect();
            (from_ints(rows), "dense")
        }
        k => {
            let m = rng.gen_range(n..=60);
            let (kind, name) = [
                (GeneratorKind::Uniform, "uniform"),
                (GeneratorKind::Ido, "ido"),
                (GeneratorKind::Identical, "identical"),
            ][k];
            (
                generate_instance(kind, n, m, seed, &GenParams::default())
                    .unwrap()
                    .instance,
                name,
            )
        }
    }
}

fn bi3_exhaustive_case(mut index: usize) -> (Instance, &'static str) {
    let eps = eps_of(BI3_EPSILONS[index % BI3_EPSILONS.len()]);
    index /= BI3_EPSILONS.len();
    let mut m = 0;
    while index >= 1 << (3 * m) {
        index -= 1 << (3 * m);
        m += 1;
    }
    let flags: Vec<Vec<bool>> = (0..3)
        .map(|i| (0..m).map(|e| index >> (i * m + e) & 1 == 1).collect())
        .collect();
    (from_flags(&flags, &eps), "exhaustive")
}

const PROBABILITIES: [(i64, i64); 3] = [(1, 4), (1, 2), (3, 4)];

fn flags<R: Rng>(rng: &mut R, n: usize, m: usize, p: &Cost) -> Vec<Vec<bool>> {
    (0..n)
        .map(|_| (0..m).map(|_| bernoulli(rng, p)).collect())
        .collect()
}

fn bi3_random_case(rng: &mut ChaCha8Rng, index: usize) -> (Instance, &'static str) {
    let m = rng.gen_range(5..=12);
    let eps = eps_of(BI3_EPSILONS[index % 4]);
    let (a, b) = PROBABILITIES[(index / 4) % 3];
    (from_flags(&flags(rng, 3, m, &ratio(a, b)), &eps), "random")
}

fn bin_case(rng: &mut ChaCha8Rng, n: usize, index: usize) -> (Instance, &'static str) {
    let eps = eps_of(BIN_EPSILONS[index % 4]);
    let (a, b) = PROBABILITIES[(index / 16) % 3];
    let p = ratio(a, b);
    let (plus, stratum) = match (index / 4) % 4 {
        0 => (n + rng.gen_range(0..=3), "many-large"),
        1 => (n - 1, "one-short"),
        2 => (rng.gen_range(0..=n - 2), "few-large"),
        _ => (rng.gen_range(0..=n - 2), "single-owner"),
    };
    let m = rng.gen_range(n.max(plus)..=50);
    let mut rows = if stratum == "single-owner" {
        // Items small to one agent (mostly the first few) pile up in the
        // balanced partial allocation and force rebalancing.
        let owners = rng.gen_range(1..=2);
        (0..m).fold(vec![vec![true; m]; n], |mut rows, e| {
            if rng.gen_range(0..4) < 3 {
                rows[rng.gen_range(0..owners)][e] = false;
            } else {
                for row in rows.iter_mut() {
                    row[e] = !bernoulli(rng, &p);
                }
            }
            rows
        })
    } else {
        flags(rng, n, m, &p)
    };
    let mut items: Vec<usize> = (0..m).collect();
    items.shuffle(rng);
    for &e in items.iter().take(plus) {
        for row in rows.iter_mut() {
            row[e] = true;
        }
    }
    (from_flags(&rows, &eps), stratum)
}

fn tail_case(rng: &mut ChaCha8Rng, index: usize) -> (Instance, &'static str) {
    let n = 2 + index % 4;
    let m = rng.gen_range(n..=12);
    let seed = rng.gen();
    let (kind, name) = [
        (GeneratorKind::Uniform, "uniform"),
        (GeneratorKind::Ido, "ido"),
        (GeneratorKind::Identical, "identical"),
    ][(index / 4) % 3];
    (
        generate_instance(kind, n, m, seed, &GenParams::default())
            .unwrap()
            .instance,
        name,
    )
}

fn round_robin_case(rng: &mut ChaCha8Rng, index: usize) -> (Instance, &'static str) {
    let n = rng.gen_range(2..=6);
    let m = rng.gen_range(1..=20);
    let eps = eps_of(BI3_EPSILONS[index % 4]);
    let (a, b) = PROBABILITIES[(index / 4) % 3];
    (from_flags(&flags(rng, n, m, &ratio(a, b)), &eps), "random")
}

/// Cases of the three-agent, bi-valued three-agent and bi-valued general
/// suites whose allocation count is within the oracle budget.
pub fn oracle_sources(cfg: &BenchConfig) -> Vec<(Suite, usize)> {
    let mut out = Vec::new();
    for suite in [
        Suite::ThreeGeneral,
        Suite::Bi3Exhaustive,
        Suite::Bi3Random,
        Suite::BiGeneral,
    ] {
        for index in 0..case_count(suite, cfg) {
            let (n, m) = case_shape(suite, cfg, index);
            if allocation_count(n, m).is_some_and(|c| c <= cfg.budget) {
                out.push((suite, index));
            }
        }
    }
    out
}

/// `(n, m)` of a case without building it.
fn case_shape(suite: Suite, cfg: &BenchConfig, index: usize) -> (usize, usize) {
    let mut rng = case_rng(suite, cfg.seed, index);
    match suite {
        Suite::ThreeGeneral => (3, rng.gen_range(3..=40)),
        Suite::Bi3Random => (3, rng.gen_range(5..=12)),
        Suite::Bi3Exhaustive => {
            let mut rest = index / BI3_EPSILONS.len();
            let mut m = 0;
            while rest >= 1 << (3 * m) {
                rest -= 1 << (3 * m);
                m += 1;
            }
            (3, m)
        }
        _ => {
            let inst = case_instance(suite, cfg, index).0;
            (inst.n(), inst.m())
        }
    }
}

/// Builds and evaluates case `index`, running every check the suite makes.
pub fn evaluate_case(suite: Suite, cfg: &BenchConfig, index: usize) -> CaseResult {
    let (inst, stratum) = case_instance(suite, cfg, index);
    match suite {
        Suite::ThreeGeneral => eval_three(&inst, index),
        Suite::GeneralN => eval_general(&inst, index),
        Suite::Bi3Exhaustive | Suite::Bi3Random => eval_bi3(&inst, index),
        Suite::BiGeneral => eval_bin(&inst, index),
        Suite::TailBound => eval_tail(&inst, index),
        Suite::RoundRobin => {
            let mut rng = case_rng(suite, cfg.seed ^ 0x5eed, index);
            eval_round_robin(&inst, index, stratum, &mut rng)
        }
        Suite::OracleCross => {
            let (source, i) = oracle_sources(cfg)[index];
            cross_check(source, i, cfg, index)
        }
    }
}

/// Evaluates case `i` of `source` and compares it with the exhaustive optimum.
fn cross_check(source: Suite, i: usize, cfg: &BenchConfig, index: usize) -> CaseResult {
    let inst = case_instance(source, cfg, i).0;
    let mut r = evaluate_case(source, cfg, i);
    r.index = index;
    r.class = format!("{source}/{}", r.class);
    match oracle_min_alpha(&inst, cfg.budget) {
        Ok(o) => {
            if o.best_alpha > r.alpha {
                r.fail(format!(
                    "oracle optimum {} exceeds the solver's {}",
                    o.best_alpha, r.alpha
                ));
            }
            r.oracle = Some(o.best_alpha);
        }
        Err(e) => r.fail(e.to_string()),
    }
    r
}

fn three_class(case: &Option<ThreeCase>, fell_back: bool) -> &'static str {
    match case {
        None => "few-items",
        Some(ThreeCase::TailFallback { .. }) => "tail-fallback",
        Some(ThreeCase::TwoSmall { .. }) => "two-small",
        Some(ThreeCase::OneSmall { .. }) if fell_back => "one-small-fallback",
        Some(ThreeCase::OneSmall { .. }) => "one-small",
        Some(ThreeCase::AllLarge { .. }) => "all-large",
    }
}

fn eval_three(inst: &Instance, index: usize) -> CaseResult {
    let out = solve_three_traced(inst).expect("three-agent suite has three agents");
    let mut r = CaseResult::new(index, "three", inst, three_class(&out.case, out.fell_back));
    r.judge(inst, &out.allocation, int(5));
    if let (Some(ThreeCase::TwoSmall { small, .. }), Some(parts)) = (&out.case, &out.placement) {
        for &agent in small {
            if !placement_within_bounds(inst, agent, parts) {
                r.fail(format!(
                    "placement bundle outside [1/8, 5/8] for agent {agent}"
                ));
            }
        }
    }
    r
}

fn eval_general(inst: &Instance, index: usize) -> CaseResult {
    let out = match solve_general_n_traced(inst) {
        Ok(out) => out,
        Err(e) => {
            let mut r = CaseResult::new(index, "general", inst, "error");
            r.fail(e.to_string());
            return r;
        }
    };
    let class = if out.fallback_agent.is_some() {
        "tail-fallback"
    } else if out.sets.is_none() {
        "few-items"
    } else if out.corner_case {
        "main-corner"
    } else {
        "main"
    };
    let mut r = CaseResult::new(index, "general", inst, class);
    r.judge(inst, &out.allocation, general_n::bound(inst.n()));
    if let Some(parts) = &out.partition {
        let items: Vec<usize> = parts.concat();
        if !even_partition_bound_holds(inst, &out.sharing, &items, parts) {
            r.fail("even partition share below c_i(items)/(2n²+2n)");
        }
    }
    r
}

/// Balance and group checks on the partial allocation of `profile`.
fn partial_checks(profile: &BiProfile, r: &mut CaseResult) {
    let x0 = partial_allocation_small(profile);
    let groups = build_agent_groups(&x0, profile);
    for v in partial_violations(profile, &x0)
        .into_iter()
        .chain(group_violations(&x0, profile, &groups))
    {
        r.fail(v);
    }
}

fn bi3_class(case: &BiThreeCase) -> &'static str {
    match case {
        BiThreeCase::SharedRow { .. } => "shared-row",
        BiThreeCase::SmallOnly { .. } => "small-only",
        BiThreeCase::TwoLargeOnly { .. } => "two-large-only",
        BiThreeCase::OneLargeOnlyEach { .. } => "one-large-only-each",
    }
}

fn eval_bi3(inst: &Instance, index: usize) -> CaseResult {
    let out = solve_bi_three_traced(inst).expect("bi-valued suite instances are bi-valued");
    let mut r = CaseResult::new(index, "bi3", inst, bi3_class(&out.case));
    r.judge(inst, &out.allocation, int(1));
    if inst.m() <= 6 && !efx_exists(inst, DEFAULT_BUDGET).expect("3^6 is within budget") {
        r.fail("oracle finds no EFX allocation");
    }
    partial_checks(&detect_bivalued(inst).expect("bi-valued"), &mut r);
    r
}

fn bin_class(branch: BiGeneralBranch) -> &'static str {
    match branch {
        BiGeneralBranch::Uniform => "uniform",
        BiGeneralBranch::ManyLarge => "many-large",
        BiGeneralBranch::OneShort { .. } => "one-short",
        BiGeneralBranch::Rebalanced => "rebalanced",
        BiGeneralBranch::Completed(Completion::NothingToPlace) => "completed-nothing",
        BiGeneralBranch::Completed(Completion::RoundRobin) => "completed-round-robin",
        BiGeneralBranch::Completed(Completion::CostlyEnough) => "completed-costly-enough",
        BiGeneralBranch::Completed(Completion::Redistributed) => "completed-redistributed",
    }
}

fn count(v: usize) -> Cost {
    Cost::from_integer(BigInt::from(v))
}

fn eval_bin(inst: &Instance, index: usize) -> CaseResult {
    let out = solve_bi_general_traced(inst).expect("bi-valued suite instances are bi-valued");
    let mut r = CaseResult::new(index, "bin", inst, bin_class(out.branch));
    let bound = match out.branch {
        BiGeneralBranch::ManyLarge | BiGeneralBranch::OneShort { .. } => int(2),
        _ => count(inst.n() - 1),
    };
    r.judge(inst, &out.allocation, bound);
    if let (Some(x0), Some(groups)) = (&out.x0, &out.groups) {
        for v in partial_violations(&out.profile, x0)
            .into_iter()
            .chain(group_violations(x0, &out.profile, groups))
        {
            r.fail(v);
        }
    }
    if out.branch == BiGeneralBranch::Rebalanced {
        for v in rebalance_violations(&out) {
            r.fail(v);
        }
    }
    for v in completion_violations(&out) {
        r.fail(v);
    }
    r
}

fn eval_tail(inst: &Instance, index: usize) -> CaseResult {
    let pivot = (index / 12) % inst.n();
    let mut r = CaseResult::new(index, "trivial", inst, format!("m={}", inst.m()));
    let alloc = trivial_tail_allocation(inst, pivot).expect("tail suite has m >= n");
    r.judge(inst, &alloc, count(inst.m() - inst.n()));
    r
}

fn eval_round_robin(
    inst: &Instance,
    index: usize,
    stratum: &str,
    rng: &mut ChaCha8Rng,
) -> CaseResult {
    let profile = detect_bivalued(inst).expect("round-robin suite instances are bi-valued");
    let pool: Vec<usize> = inst.items().filter(|_| rng.gen_range(0..4) < 3).collect();
    let outside: Vec<usize> = inst.items().filter(|e| !pool.contains(e)).collect();
    let mut order: Vec<usize> = (0..inst.n()).collect();
    order.shuffle(rng);
    let rr = round_robin_chores(inst, &pool, &order);
    let mut r = CaseResult::new(index, "round-robin", inst, stratum);
    r.alpha = min_efx_alpha(inst, &Allocation::new(rr.bundles.clone()))
        .expect("valid bundles")
        .alpha;
    if !round_robin_envy_holds(inst, &rr) {
        r.fail("an earlier finisher envies a later one, or the later one is not EF1");
    }
    if !added_item_relation_holds(&profile, inst, &rr, &outside) {
        r.fail("adding an item small to i and large to j breaks the pair relation");
    }
    r
}

fn thread_pool() -> rayon::ThreadPool {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(k) = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
    {
        builder = builder.num_threads(k.max(1));
    }
    builder.build().expect("thread pool")
}

#[derive(Default)]
struct Acc {
    instances: usize,
    max_alpha: Option<Alpha>,
    max_bound: Option<Cost>,
    max_oracle: Option<Alpha>,
    violations: usize,
}

/// Runs every case of a suite across the worker pool and aggregates.
pub fn run_suite(suite: Suite, cfg: &BenchConfig) -> SuiteReport {
    let started = Instant::now();
    // Listing the cross-check sources builds every candidate, so do it once.
    let sources = if suite == Suite::OracleCross {
        oracle_sources(cfg)
    } else {
        Vec::new()
    };
    let total = if suite == Suite::OracleCross {
        sources.len()
    } else {
        case_count(suite, cfg)
    };
    let results: Vec<CaseResult> = thread_pool().install(|| {
        (0..total)
            .into_par_iter()
            .map(|i| {
                let mut r = match sources.get(i) {
                    Some(&(source, j)) => cross_check(source, j, cfg, i),
                    None => evaluate_case(suite, cfg, i),
                };
                // Only the aggregate needs to survive; keep memory flat.
                r.violations.truncate(4);
                r
            })
            .collect()
    });
    summarize(suite, &results, started.elapsed())
}

/// Aggregates already evaluated cases.
pub fn summarize(suite: Suite, results: &[CaseResult], elapsed: Duration) -> SuiteReport {
    let mut groups: BTreeMap<(&'static str, usize, String), Acc> = BTreeMap::new();
    let mut failures = Vec::new();
    for r in results {
        let acc = groups
            .entry((r.algorithm, r.n, r.class.clone()))
            .or_default();
        acc.instances += 1;
        acc.max_alpha = acc.max_alpha.take().max(Some(r.alpha.clone()));
        acc.max_bound = acc.max_bound.take().max(r.bound.clone());
        acc.max_oracle = acc.max_oracle.take().max(r.oracle.clone());
        if !r.violations.is_empty() {
            acc.violations += 1;
        }
        failures.extend(r.violations.iter().map(|v| (r.index, v.clone())));
    }
    let summary = groups
        .into_iter()
        .map(|((algorithm, n, class), a)| SummaryRow {
            algorithm,
            n,
            class,
            instances: a.instances,
            max_alpha: a.max_alpha.unwrap_or_else(Alpha::zero),
            max_bound: a.max_bound,
            max_oracle: a.max_oracle,
            violations: a.violations,
        })
        .collect();
    SuiteReport {
        suite,
        summary,
        failures,
        elapsed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> BenchConfig {
        BenchConfig {
            count: Some(8),
            max_m: 2,
            budget: 1000,
            ..BenchConfig::default()
        }
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn exhaustive_indexing_covers_every_matrix() {
        let cfg = small();
        // m = 0, 1, 2 give 1 + 8 + 64 matrices, times four epsilons. Under one
        // epsilon every matrix is distinct.
        assert_eq!(case_count(Suite::Bi3Exhaustive, &cfg), 73 * 4);
        let mut seen = std::collections::HashSet::new();
        for i in 0..case_count(Suite::Bi3Exhaustive, &cfg) {
            let (inst, _) = case_instance(Suite::Bi3Exhaustive, &cfg, i);
            assert_eq!(case_shape(Suite::Bi3Exhaustive, &cfg, i), (3, inst.m()));
            assert!(seen.insert((i % 4, inst.rows().to_vec())));
        }
    }

    #[test]
    fn small_suites_pass_and_repeat() {
        let cfg = small();
        for suite in Suite::ALL {
            let a = run_suite(suite, &cfg);
            assert_eq!(a.violations(), 0, "{suite}: {:?}", a.failures);
            assert_eq!(a.csv(), run_suite(suite, &cfg).csv());
        }
    }

    #[test]
    fn case_shapes_match_instances() {
        let cfg = small();
        for suite in [Suite::ThreeGeneral, Suite::Bi3Random] {
            for i in 0..8 {
                let (inst, _) = case_instance(suite, &cfg, i);
                assert_eq!(case_shape(suite, &cfg, i), (inst.n(), inst.m()));
            }
        }
    }
}
