//! 3n²-EFX allocations for `n >= 4` agents with arbitrary additive costs.
//!
//! After the tail fallback, every agent `i` marks as *large* the items worth
//! at least `b_i = c_i(M_i⁻) / (3n² - n + 2)`. Items large to everybody go
//! one per agent; items small to everybody are split by [`even_partition`]
//! into bundles that every remaining agent values at a `1 / (2n² + 2n)`
//! share or more; the rest go to an agent that finds them small.

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::model::{
    greedy_identical_partition, normalize, one_item_each, sort_desc, sorted_order, tail_items,
    Allocation, Cost, Instance,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeneralError {
    #[error("the general construction needs n >= 4 agents, got {0}")]
    WrongAgentCount(usize),
    #[error("agent {agent} has {count} large items (more than n - 2); the tail fallback should have applied")]
    FallbackRequired { agent: usize, count: usize },
    #[error("item {item} is too costly for agent {agent} to be split evenly")]
    PreconditionViolated { agent: usize, item: usize },
}

fn cost_of(value: usize) -> Cost {
    Cost::from_integer(BigInt::from(value))
}

/// `3n²`, the advertised approximation factor.
pub fn bound(n: usize) -> Cost {
    cost_of(3 * n * n)
}

/// `2n² + 2n`, the share denominator of the even partition.
pub fn share_denominator(n: usize) -> Cost {
    cost_of(2 * n * n + 2 * n)
}

/// Lowest-index agent with `c_i(M_i⁻) <= 3n² · c_i(σ_i(n-1))`.
pub fn fallback_agent(inst: &Instance) -> Option<usize> {
    let n = inst.n();
    (0..n).find(|&i| {
        let order = sorted_order(inst, i).order;
        let pivot = order
            .get(n - 2)
            .map(|&e| inst.cost(i, e).clone())
            .unwrap_or_else(Cost::zero);
        inst.bundle_cost(i, &tail_items(inst, i)) <= bound(n) * pivot
    })
}

/// The tail allocation for the first agent meeting the fallback condition:
/// the k-th other agent gets `σ_i(k)` and agent `i` keeps `M_i⁻`.
pub fn tail_fallback_general(inst: &Instance) -> Option<Allocation> {
    fallback_agent(inst).map(|i| crate::model::primitives::head_tail_allocation(inst, i))
}

/// Per-agent thresholds and the large/small item sets derived from them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LargeItemSets {
    /// `b_i`.
    pub threshold: Vec<Cost>,
    /// `L_i`, ascending.
    pub large: Vec<Vec<usize>>,
    /// Items large to every agent (`K`).
    pub common: Vec<usize>,
    /// Items large to some agent (`L`).
    pub union: Vec<usize>,
    /// Items small to every agent (`M⁻`).
    pub small: Vec<usize>,
}

impl LargeItemSets {
    pub fn is_large(&self, agent: usize, item: usize) -> bool {
        self.large[agent].binary_search(&item).is_ok()
    }
}

pub fn large_item_sets(inst: &Instance) -> Result<LargeItemSets, GeneralError> {
    let n = inst.n();
    let divisor = cost_of(3 * n * n - n + 2);
    let mut threshold = Vec::with_capacity(n);
    let mut large = Vec::with_capacity(n);
    for i in 0..n {
        let b = inst.bundle_cost(i, &tail_items(inst, i)) / &divisor;
        let li: Vec<usize> = inst.items().filter(|&e| inst.cost(i, e) >= &b).collect();
        if li.len() + 2 > n {
            return Err(GeneralError::FallbackRequired {
                agent: i,
                count: li.len(),
            });
        }
        threshold.push(b);
        large.push(li);
    }
    let mut in_count = vec![0usize; inst.m()];
    for li in &large {
        for &e in li {
            in_count[e] += 1;
        }
    }
    let common = inst.items().filter(|&e| in_count[e] == n).collect();
    let union = inst.items().filter(|&e| in_count[e] > 0).collect();
    let small = inst.items().filter(|&e| in_count[e] == 0).collect();
    Ok(LargeItemSets {
        threshold,
        large,
        common,
        union,
        small,
    })
}

/// Every item of `items` costs at most `c_i(items) / (2n² + 2n)` to each agent.
pub fn small_items_bounded(
    inst: &Instance,
    agents: &[usize],
    items: &[usize],
) -> Result<(), GeneralError> {
    let denom = share_denominator(inst.n());
    for &i in agents {
        let cap = inst.bundle_cost(i, items) / &denom;
        if let Some(&item) = items.iter().find(|&&e| inst.cost(i, e) > &cap) {
            return Err(GeneralError::PreconditionViolated { agent: i, item });
        }
    }
    Ok(())
}

/// Round-robin for goods: agents take turns in the given order, each taking
/// her most valuable remaining item (lowest index on ties).
/// Returns one bundle per listed agent, in list order.
pub fn round_robin_goods(inst: &Instance, agents: &[usize], items: &[usize]) -> Vec<Vec<usize>> {
    assert!(!agents.is_empty(), "round-robin needs at least one agent");
    let orders: Vec<Vec<usize>> = agents
        .iter()
        .map(|&a| sort_desc(inst.row(a), items.iter().copied()))
        .collect();
    let mut cursors = vec![0usize; agents.len()];
    let mut taken = vec![false; inst.m()];
    let mut bundles = vec![Vec::new(); agents.len()];
    for turn in 0..items.len() {
        let k = turn % agents.len();
        while taken[orders[k][cursors[k]]] {
            cursors[k] += 1;
        }
        let item = orders[k][cursors[k]];
        taken[item] = true;
        bundles[k].push(item);
    }
    for b in &mut bundles {
        b.sort_unstable();
    }
    bundles
}

/// PROP1 for goods: the bundle plus the best outside item reaches a `1/t`
/// share of `items`.
pub fn is_prop1(
    inst: &Instance,
    agent: usize,
    bundle: &[usize],
    items: &[usize],
    t: usize,
) -> bool {
    let best_outside = items
        .iter()
        .filter(|e| !bundle.contains(e))
        .map(|&e| inst.cost(agent, e).clone())
        .max()
        .unwrap_or_else(Cost::zero);
    (inst.bundle_cost(agent, bundle) + best_outside) * cost_of(t) >= inst.bundle_cost(agent, items)
}

/// Splits `items` into one bundle per listed agent such that every listed
/// agent values every bundle at `c_i(items) / (2n² + 2n)` or more.
///
/// Round-robin (as goods) first gives each agent a PROP1 share `Q_i`; each
/// agent then cuts her own share into `t` parts under her own costs, and
/// bundle `j` collects everybody's `j`-th part.
pub fn even_partition(
    inst: &Instance,
    agents: &[usize],
    items: &[usize],
) -> Result<Vec<Vec<usize>>, GeneralError> {
    small_items_bounded(inst, agents, items)?;
    let t = agents.len();
    let shares = round_robin_goods(inst, agents, items);
    let mut parts = vec![Vec::new(); t];
    for (&agent, share) in agents.iter().zip(&shares) {
        for (j, piece) in greedy_identical_partition(inst.row(agent), share, t)
            .into_iter()
            .enumerate()
        {
            parts[j].extend(piece);
        }
    }
    for p in &mut parts {
        p.sort_unstable();
    }
    Ok(parts)
}

/// Whether `c_i(S_j) >= c_i(items) / (2n² + 2n)` for every listed agent and part.
pub fn even_partition_bound_holds(
    inst: &Instance,
    agents: &[usize],
    items: &[usize],
    parts: &[Vec<usize>],
) -> bool {
    let denom = share_denominator(inst.n());
    agents.iter().all(|&i| {
        let floor = inst.bundle_cost(i, items) / &denom;
        parts.iter().all(|p| inst.bundle_cost(i, p) >= floor)
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneralOutcome {
    pub allocation: Allocation,
    pub fallback_agent: Option<usize>,
    pub sets: Option<LargeItemSets>,
    /// Agents holding one commonly large item each (`N*`).
    pub committed: Vec<usize>,
    /// Agents sharing the small items (`N⁻`).
    pub sharing: Vec<usize>,
    pub partition: Option<Vec<Vec<usize>>>,
    /// An item large to every sharing agent had to go to a committed agent.
    pub corner_case: bool,
}

pub fn solve_general_n_traced(inst: &Instance) -> Result<GeneralOutcome, GeneralError> {
    let n = inst.n();
    if n < 4 {
        return Err(GeneralError::WrongAgentCount(n));
    }
    let mut outcome = GeneralOutcome {
        allocation: Allocation::empty(n),
        fallback_agent: None,
        sets: None,
        committed: Vec::new(),
        sharing: Vec::new(),
        partition: None,
        corner_case: false,
    };
    if inst.m() < n {
        outcome.allocation = one_item_each(inst);
        return Ok(outcome);
    }
    let norm = normalize(inst);
    if let Some(i) = fallback_agent(&norm) {
        outcome.fallback_agent = Some(i);
        outcome.allocation = crate::model::primitives::head_tail_allocation(&norm, i);
        return Ok(outcome);
    }
    let sets = large_item_sets(&norm)?;
    let mut bundles = vec![Vec::new(); n];
    // |K| <= n - 2, so the first |K| agents each take one.
    for (agent, &item) in sets.common.iter().enumerate() {
        bundles[agent].push(item);
    }
    let committed: Vec<usize> = (0..sets.common.len()).collect();
    let sharing: Vec<usize> = (sets.common.len()..n).collect();
    let parts = even_partition(&norm, &sharing, &sets.small)?;
    for (&agent, part) in sharing.iter().zip(&parts) {
        bundles[agent].extend(part.iter().copied());
    }
    for &item in sets
        .union
        .iter()
        .filter(|e| sets.common.binary_search(e).is_err())
    {
        let taker = sharing.iter().find(|&&a| !sets.is_large(a, item)).copied();
        let taker = match taker {
            Some(a) => a,
            None => {
                outcome.corner_case = true;
                log::warn!(
                    "item {item} is large to every sharing agent; giving it to a committed agent"
                );
                *committed
                    .iter()
                    .find(|&&a| !sets.is_large(a, item))
                    .expect("item is small to someone")
            }
        };
        bundles[taker].push(item);
    }
    outcome.allocation = Allocation::new(bundles);
    outcome.sets = Some(sets);
    outcome.committed = committed;
    outcome.sharing = sharing;
    outcome.partition = Some(parts);
    Ok(outcome)
}

/// A 3n²-EFX allocation for `n >= 4` agents.
pub fn solve_general_n(inst: &Instance) -> Result<Allocation, GeneralError> {
    solve_general_n_traced(inst).map(|o| o.allocation)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{int, min_efx_alpha, ratio};

    /// Three heavy items per agent and a long flat tail.
    fn heavy_tail(n: usize, m: usize) -> Instance {
        let rows: Vec<Vec<i64>> = (0..n)
            .map(|i| {
                (0..m)
                    .map(|e| if e % n == i && e < 2 * n { 50 } else { 1 })
                    .collect()
            })
            .collect();
        Instance::from_integers(&rows).unwrap()
    }

    #[test]
    fn m_equal_n_is_singletons() {
        let inst =
            Instance::from_integers(&[[1, 2, 3, 4], [4, 3, 2, 1], [1, 1, 1, 1], [2, 2, 1, 1]])
                .unwrap();
        let out = solve_general_n_traced(&inst).unwrap();
        assert!(out.allocation.bundles().iter().all(|b| b.len() == 1));
        assert!(min_efx_alpha(&inst, &out.allocation)
            .unwrap()
            .alpha
            .is_zero());
    }

    #[test]
    fn uniform_two_n_items_fall_back() {
        // Tail: n + 1 items of 1/(2n) each, against 3n² · 1/(2n).
        for n in 4..8 {
            let inst = Instance::from_integers(&vec![vec![1i64; 2 * n]; n]).unwrap();
            assert_eq!(fallback_agent(&normalize(&inst)), Some(0));
            assert!(tail_fallback_general(&inst).is_some());
        }
    }

    #[test]
    fn heavy_tail_does_not_fall_back() {
        // n = 4: agent 0 has σ(3) = 1 and a tail of 57 unit items, 57 > 48.
        let mut rows = vec![vec![1i64; 60]; 4];
        rows[0][0] = 1000;
        let inst = Instance::from_integers(&rows).unwrap();
        assert_eq!(tail_fallback_general(&inst), None);
    }

    #[test]
    fn tiny_items_have_no_large_sets() {
        let inst = normalize(&Instance::from_integers(&vec![vec![1i64; 60]; 4]).unwrap());
        let sets = large_item_sets(&inst).unwrap();
        assert!(sets.large.iter().all(Vec::is_empty));
        assert!(sets.common.is_empty());
        assert_eq!(sets.small, (0..60).collect::<Vec<_>>());
    }

    #[test]
    fn item_heavy_for_everybody_is_common() {
        let mut rows = vec![vec![1i64; 60]; 4];
        for row in &mut rows {
            row[7] = 59;
        }
        let inst = normalize(&Instance::from_integers(&rows).unwrap());
        assert_eq!(fallback_agent(&inst), None);
        let sets = large_item_sets(&inst).unwrap();
        assert_eq!(sets.common, vec![7]);
        assert_eq!(sets.threshold[0], ratio(57, 118) / int(48 - 4 + 2));
    }

    #[test]
    fn round_robin_goods_example() {
        let inst = Instance::from_integers(&[[4, 3, 2, 1], [4, 3, 2, 1]]).unwrap();
        assert_eq!(
            round_robin_goods(&inst, &[0, 1], &[0, 1, 2, 3]),
            vec![vec![0, 2], vec![1, 3]]
        );
        assert_eq!(
            round_robin_goods(&inst, &[1], &[0, 1, 2, 3]),
            vec![vec![0, 1, 2, 3]]
        );
        assert!(is_prop1(&inst, 0, &[0, 2], &[0, 1, 2, 3], 2));
    }

    #[test]
    fn even_partition_shapes() {
        // n = 4: unit items are small once there are 40 of them.
        let inst = Instance::from_integers(&vec![vec![1i64; 40]; 4]).unwrap();
        let items: Vec<usize> = (0..40).collect();
        assert_eq!(
            even_partition(&inst, &[2], &items).unwrap(),
            vec![items.clone()]
        );
        let parts = even_partition(&inst, &[0, 1], &items).unwrap();
        assert!(even_partition_bound_holds(&inst, &[0, 1], &items, &parts));
        assert!(parts.iter().all(|p| p.len() == 20));
    }

    #[test]
    fn even_partition_rejects_heavy_items() {
        let inst = Instance::from_integers(&[[10, 1, 1], [1, 1, 1], [1, 1, 1], [1, 1, 1]]).unwrap();
        assert_eq!(
            even_partition(&inst, &[0, 1], &[0, 1, 2]),
            Err(GeneralError::PreconditionViolated { agent: 0, item: 0 })
        );
    }

    #[test]
    fn heavy_tail_solves_within_bound() {
        let inst = heavy_tail(4, 60);
        let out = solve_general_n_traced(&inst).unwrap();
        assert_eq!(out.fallback_agent, None);
        let sets = out.sets.as_ref().unwrap();
        assert!(sets.large.iter().all(|l| l.len() == 2));
        assert!(out.allocation.is_complete(60));
        assert!(min_efx_alpha(&inst, &out.allocation)
            .unwrap()
            .alpha
            .within(&bound(4)));
    }

    #[test]
    fn rejects_small_n() {
        let inst = Instance::from_integers(&[[1], [1], [1]]).unwrap();
        assert_eq!(
            solve_general_n(&inst),
            Err(GeneralError::WrongAgentCount(3))
        );
    }
}
