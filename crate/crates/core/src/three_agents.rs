//! 5-EFX allocations for three agents with arbitrary additive costs.
//!
//! Agents are first checked for the tail fallback (an agent whose tail is
//! cheap relative to her second item). Otherwise each agent is *large* when
//! her most costly item is worth at least 1/8 of her total and *small*
//! otherwise, and the number of small agents selects the construction:
//!
//! * two or more small agents: [`sequential_placement`] builds three bundles
//!   that both acting agents value within `[1/8, 5/8]`; the third agent picks;
//! * one small agent: the small agent's EFX split plus the two top items
//!   ([`solve_one_small`], 4-EFX);
//! * no small agent: agent 3 takes the tops of agents 1 and 2, the rest is
//!   cut by agent 1 and chosen by agents 3 and 2 ([`solve_all_large`], 4-EFX).

use num_traits::Zero;
use thiserror::Error;

use crate::model::{
    divide_and_choose, greedy_identical_partition, normalize, one_item_each, ratio, sort_desc,
    sorted_order, tail_items, Allocation, Cost, Instance,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ThreeAgentError {
    #[error("expected exactly 3 agents, got {0}")]
    WrongAgentCount(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AgentKind {
    Large,
    Small,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AgentClass {
    pub kind: AgentKind,
    pub top_item: usize,
    pub top_cost: Cost,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ThreeCase {
    /// `c_i(M_i⁻) <= 5 · c_i(σ_i(2))` for this agent.
    TailFallback {
        agent: usize,
    },
    TwoSmall {
        small: [usize; 2],
        third: usize,
    },
    OneSmall {
        small: usize,
        large: [usize; 2],
        tops_equal: bool,
    },
    AllLarge {
        tops: [usize; 3],
        coincide: Option<(usize, usize)>,
    },
}

/// A solved instance together with how it was solved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThreeOutcome {
    pub allocation: Allocation,
    /// `None` only when `m < 3` and every agent simply got at most one item.
    pub case: Option<ThreeCase>,
    /// The `(S_1, S_2, S_3)` built by sequential placement on the two-small path.
    pub placement: Option<[Vec<usize>; 3]>,
    /// Set when the one-small construction's premise failed and the tail
    /// allocation was used instead.
    pub fell_back: bool,
}

fn check_three(inst: &Instance) -> Result<(), ThreeAgentError> {
    match inst.n() {
        3 => Ok(()),
        n => Err(ThreeAgentError::WrongAgentCount(n)),
    }
}

/// Large iff the top item costs at least 1/8 of the agent's total.
pub fn classify_agent(inst: &Instance, agent: usize) -> AgentClass {
    let norm = normalize(inst);
    let top_item = sorted_order(&norm, agent).order[0];
    let top_cost = norm.cost(agent, top_item).clone();
    let kind = if top_cost >= ratio(1, 8) {
        AgentKind::Large
    } else {
        AgentKind::Small
    };
    AgentClass {
        kind,
        top_item,
        top_cost,
    }
}

/// Whether the tail fallback applies to `agent`: `c_i(M_i⁻) <= 5 · c_i(σ_i(2))`.
pub fn tail_condition(inst: &Instance, agent: usize) -> bool {
    let order = sorted_order(inst, agent).order;
    let second = order
        .get(1)
        .map(|&e| inst.cost(agent, e).clone())
        .unwrap_or_else(Cost::zero);
    inst.bundle_cost(agent, &tail_items(inst, agent)) <= second * Cost::from_integer(5.into())
}

pub fn dispatch_three(inst: &Instance) -> Result<ThreeCase, ThreeAgentError> {
    check_three(inst)?;
    if let Some(agent) = (0..3).find(|&a| tail_condition(inst, a)) {
        return Ok(ThreeCase::TailFallback { agent });
    }
    let classes: Vec<AgentClass> = (0..3).map(|a| classify_agent(inst, a)).collect();
    let small: Vec<usize> = (0..3)
        .filter(|&a| classes[a].kind == AgentKind::Small)
        .collect();
    let tops = [
        classes[0].top_item,
        classes[1].top_item,
        classes[2].top_item,
    ];
    Ok(match small[..] {
        [a, b, ..] => ThreeCase::TwoSmall {
            small: [a, b],
            third: (0..3).find(|&x| x != a && x != b).unwrap(),
        },
        [s] => {
            let large = others(s);
            ThreeCase::OneSmall {
                small: s,
                large,
                tops_equal: tops[large[0]] == tops[large[1]],
            }
        }
        [] => {
            let coincide = [(0, 1), (0, 2), (1, 2)]
                .into_iter()
                .find(|&(i, j)| tops[i] == tops[j]);
            ThreeCase::AllLarge { tops, coincide }
        }
    })
}

fn others(agent: usize) -> [usize; 2] {
    match agent {
        0 => [1, 2],
        1 => [0, 2],
        _ => [0, 1],
    }
}

/// The two acting agents alternate (starting with `first`); on her turn an
/// agent takes her most costly unplaced item (lowest index on ties) and puts
/// it into the bundle that is currently cheapest for her (lowest bundle index
/// on ties).
pub fn sequential_placement(inst: &Instance, first: usize, second: usize) -> [Vec<usize>; 3] {
    let actors = [first, second];
    // Each actor consumes her own descending order, skipping placed items.
    let orders: Vec<Vec<usize>> = actors
        .iter()
        .map(|&a| sort_desc(inst.row(a), inst.items()))
        .collect();
    let mut cursors = [0usize; 2];
    let mut placed = vec![false; inst.m()];
    let mut bundles: [Vec<usize>; 3] = Default::default();
    let mut loads: [[Cost; 3]; 2] = Default::default();
    for turn in 0..inst.m() {
        let who = turn % 2;
        let order = &orders[who];
        while placed[order[cursors[who]]] {
            cursors[who] += 1;
        }
        let item = order[cursors[who]];
        placed[item] = true;
        let target = (0..3)
            .min_by(|&a, &b| loads[who][a].cmp(&loads[who][b]).then(a.cmp(&b)))
            .unwrap();
        bundles[target].push(item);
        for (k, &actor) in actors.iter().enumerate() {
            loads[k][target] += inst.cost(actor, item);
        }
    }
    for b in &mut bundles {
        b.sort_unstable();
    }
    bundles
}

/// Cheapest bundle for `agent`, lowest index on ties.
fn cheapest_for(inst: &Instance, agent: usize, bundles: &[Vec<usize>]) -> usize {
    let costs: Vec<Cost> = bundles.iter().map(|b| inst.bundle_cost(agent, b)).collect();
    (0..bundles.len())
        .min_by(|&a, &b| costs[a].cmp(&costs[b]).then(a.cmp(&b)))
        .unwrap()
}

/// Both small agents place; the third takes her cheapest bundle and the
/// small agents take the other two in index order.
pub fn solve_two_small(
    inst: &Instance,
    small: [usize; 2],
    third: usize,
) -> (Allocation, [Vec<usize>; 3]) {
    let placement = sequential_placement(inst, small[0], small[1]);
    let pick = cheapest_for(inst, third, &placement);
    let mut rest = (0..3).filter(|&k| k != pick);
    let mut bundles = vec![Vec::new(); 3];
    bundles[third] = placement[pick].clone();
    bundles[small[0]] = placement[rest.next().unwrap()].clone();
    bundles[small[1]] = placement[rest.next().unwrap()].clone();
    (Allocation::new(bundles), placement)
}

/// Exactly one small agent `small`; `large` holds the two large agents.
///
/// Returns the allocation and whether the construction's premise (both large
/// tops cost at most 1/8 to the small agent) failed, in which case the tail
/// allocation pivoted on the small agent is returned instead.
pub fn solve_one_small(inst: &Instance, small: usize, large: [usize; 2]) -> (Allocation, bool) {
    let [l1, l2] = large;
    let e1 = sorted_order(inst, l1).at(1);
    let e2 = sorted_order(inst, l2).at(1);
    let rest_without = |skip: &[usize]| {
        inst.items()
            .filter(|e| !skip.contains(e))
            .collect::<Vec<_>>()
    };
    let mut bundles = vec![Vec::new(); 3];
    if e1 == e2 {
        bundles[small] = vec![e1];
        let (x1, x2) = divide_and_choose(inst, l1, l2, &rest_without(&[e1]));
        bundles[l1] = x1;
        bundles[l2] = x2;
        return (Allocation::new(bundles), false);
    }
    let norm = normalize(inst);
    let eighth = ratio(1, 8);
    if norm.cost(small, e1) > &eighth || norm.cost(small, e2) > &eighth {
        log::warn!("one-small premise failed (tops {e1}, {e2}); using the tail allocation");
        return (
            crate::model::primitives::head_tail_allocation(inst, small),
            true,
        );
    }
    let mut parts = greedy_identical_partition(inst.row(small), &rest_without(&[e1, e2]), 3);
    // Ascending under c_l1; stable, so equal costs keep bundle order.
    parts.sort_by_cached_key(|b| inst.bundle_cost(l1, b));
    let [s1, s2, s3]: [Vec<usize>; 3] = parts.try_into().unwrap();
    let mut s1e2 = s1;
    s1e2.push(e2);
    let mut s2e1 = s2;
    s2e1.push(e1);
    bundles[l1] = s1e2;
    if inst.bundle_cost(l2, &s3) < inst.bundle_cost(l2, &s2e1) {
        bundles[l2] = s3;
        bundles[small] = s2e1;
    } else {
        bundles[l2] = s2e1;
        bundles[small] = s3;
    }
    (Allocation::new(bundles), false)
}

/// All three agents large, with top items `tops`.
pub fn solve_all_large(
    inst: &Instance,
    tops: [usize; 3],
    coincide: Option<(usize, usize)>,
) -> Allocation {
    let mut bundles = vec![Vec::new(); 3];
    if let Some((i, j)) = coincide {
        let shared = tops[i];
        let k = (0..3).find(|&x| x != i && x != j).unwrap();
        bundles[k] = vec![shared];
        let rest: Vec<usize> = inst.items().filter(|&e| e != shared).collect();
        let (xi, xj) = divide_and_choose(inst, i, j, &rest);
        bundles[i] = xi;
        bundles[j] = xj;
        return Allocation::new(bundles);
    }
    let [e1, e2, e3] = tops;
    let rest: Vec<usize> = inst.items().filter(|e| !tops.contains(e)).collect();
    bundles[2] = vec![e1, e2];
    let mut halves = greedy_identical_partition(inst.row(0), &rest, 2);
    let pick = cheapest_for(inst, 2, &halves);
    let other = halves.remove(1 - pick);
    let mut with_top = halves.remove(0);
    with_top.push(e3);
    if inst.bundle_cost(1, &other) < inst.bundle_cost(1, &with_top) {
        bundles[1] = other;
        bundles[0] = with_top;
    } else {
        bundles[1] = with_top;
        bundles[0] = other;
    }
    Allocation::new(bundles)
}

/// Full pipeline with the route taken.
pub fn solve_three_traced(inst: &Instance) -> Result<ThreeOutcome, ThreeAgentError> {
    check_three(inst)?;
    if inst.m() < 3 {
        return Ok(ThreeOutcome {
            allocation: one_item_each(inst),
            case: None,
            placement: None,
            fell_back: false,
        });
    }
    let norm = normalize(inst);
    let case = dispatch_three(&norm)?;
    let mut placement = None;
    let mut fell_back = false;
    let allocation = match &case {
        ThreeCase::TailFallback { agent } => {
            crate::model::primitives::head_tail_allocation(inst, *agent)
        }
        ThreeCase::TwoSmall { small, third } => {
            let (alloc, parts) = solve_two_small(&norm, *small, *third);
            placement = Some(parts);
            alloc
        }
        ThreeCase::OneSmall { small, large, .. } => {
            let (alloc, failed) = solve_one_small(&norm, *small, *large);
            fell_back = failed;
            alloc
        }
        ThreeCase::AllLarge { tops, coincide } => solve_all_large(&norm, *tops, *coincide),
    };
    Ok(ThreeOutcome {
        allocation,
        case: Some(case),
        placement,
        fell_back,
    })
}

/// A 5-EFX allocation for three agents.
pub fn solve_three(inst: &Instance) -> Result<Allocation, ThreeAgentError> {
    solve_three_traced(inst).map(|o| o.allocation)
}

/// Whether every bundle of `parts` costs within `[1/8, 5/8]` of `agent`'s total.
pub fn placement_within_bounds(inst: &Instance, agent: usize, parts: &[Vec<usize>]) -> bool {
    let norm = normalize(inst);
    if norm.is_zero_agent(agent) {
        return false;
    }
    let (lo, hi) = (ratio(1, 8), ratio(5, 8));
    parts.iter().all(|b| {
        let c = norm.bundle_cost(agent, b);
        lo <= c && c <= hi
    })
}
