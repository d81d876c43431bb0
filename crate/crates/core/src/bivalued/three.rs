//! Exact EFX for three agents with bi-valued costs.

use super::profile::{classify_items_bi3, require_bivalued, BiProfile, ItemClass};
use super::round_robin::{forcing_order, round_robin_chores};
use super::BiValuedError;
use crate::model::{greedy_identical_partition, Allocation, Instance};

/// Which construction produced a three-agent bi-valued allocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BiThreeCase {
    /// Two agents share a cost row; the third picks first.
    SharedRow { pair: [usize; 2], picker: usize },
    /// `e1` is small only to `i`; `e2` is small to `j` and large to `l`.
    SmallOnly {
        agents: [usize; 3],
        e1: usize,
        e2: usize,
    },
    /// Agent `agents[0]` has two items large only to her; `agents[1]` has one.
    /// `spare` is the extra item small to `agents[0]`, if there is one.
    TwoLargeOnly {
        agents: [usize; 3],
        spare: Option<usize>,
    },
    /// Every agent has at most one item large only to her. `agents[2]` is the
    /// agent without one when that happens; `wide` records that all three
    /// have one and the cheapest and costliest shared bundles differ by more
    /// than `ε`.
    OneLargeOnlyEach {
        agents: [usize; 3],
        third_defined: bool,
        wide: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiThreeOutcome {
    pub allocation: Allocation,
    pub case: BiThreeCase,
}

/// An EFX allocation for three agents with bi-valued costs.
pub fn solve_bi_three(inst: &Instance) -> Result<Allocation, BiValuedError> {
    solve_bi_three_traced(inst).map(|o| o.allocation)
}

pub fn solve_bi_three_traced(inst: &Instance) -> Result<BiThreeOutcome, BiValuedError> {
    let profile = require_bivalued(inst)?;
    if inst.n() != 3 {
        return Err(BiValuedError::WrongAgentCount(inst.n()));
    }
    let scaled = profile.scaled_instance();
    if let Some(out) = shared_row(&profile, &scaled) {
        return Ok(out);
    }
    let classes = classify_items_bi3(&profile)?;
    if let Some((e1, ItemClass::SmallOnlyTo(i))) = classes
        .classes
        .iter()
        .enumerate()
        .find(|(_, c)| matches!(c, ItemClass::SmallOnlyTo(_)))
    {
        return Ok(small_only(&profile, &scaled, e1, *i));
    }
    if let Some(first) = (0..3).find(|&a| classes.large_only[a].len() >= 2) {
        return Ok(two_large_only(
            &profile,
            &scaled,
            &classes.large_only,
            first,
        ));
    }
    Ok(one_large_only_each(&scaled, &classes.large_only))
}

fn shared_row(profile: &BiProfile, scaled: &Instance) -> Option<BiThreeOutcome> {
    let (i, j) = [(0, 1), (0, 2), (1, 2)]
        .into_iter()
        .find(|&(a, b)| profile.large[a] == profile.large[b])?;
    let picker = 3 - i - j;
    let items: Vec<usize> = scaled.items().collect();
    let mut parts = greedy_identical_partition(scaled.row(i), &items, 3);
    let pick = (0..3)
        .min_by_key(|&k| (scaled.bundle_cost(picker, &parts[k]), k))
        .unwrap();
    let mut bundles = vec![Vec::new(); 3];
    bundles[picker] = parts.remove(pick);
    bundles[i] = parts.remove(0);
    bundles[j] = parts.remove(0);
    Some(BiThreeOutcome {
        allocation: Allocation::new(bundles),
        case: BiThreeCase::SharedRow {
            pair: [i, j],
            picker,
        },
    })
}

fn without(scaled: &Instance, excluded: &[usize]) -> Vec<usize> {
    scaled.items().filter(|e| !excluded.contains(e)).collect()
}

fn small_only(profile: &BiProfile, scaled: &Instance, e1: usize, i: usize) -> BiThreeOutcome {
    let (a, b) = match i {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    };
    // Rows a and b differ, and both are large on e1.
    let e2 = scaled
        .items()
        .find(|&e| e != e1 && profile.is_large(a, e) != profile.is_large(b, e))
        .expect("distinct rows differ somewhere besides e1");
    let (j, l) = if profile.is_small(a, e2) {
        (a, b)
    } else {
        (b, a)
    };
    let rest = without(scaled, &[e1, e2]);
    let rr = round_robin_chores(scaled, &rest, &forcing_order(rest.len(), i, j, l));
    let mut bundles = rr.bundles;
    bundles[i].push(e1);
    bundles[j].push(e2);
    BiThreeOutcome {
        allocation: Allocation::new(bundles),
        case: BiThreeCase::SmallOnly {
            agents: [i, j, l],
            e1,
            e2,
        },
    }
}

fn two_large_only(
    profile: &BiProfile,
    scaled: &Instance,
    large_only: &[Vec<usize>; 3],
    first: usize,
) -> BiThreeOutcome {
    let (e1, e2) = (large_only[first][0], large_only[first][1]);
    let second = (0..3)
        .find(|&a| a != first && !large_only[a].is_empty())
        .expect("the two other rows differ, so one of them has an item large only to it");
    let third = 3 - first - second;
    let e3 = large_only[second][0];
    let agents = [first, second, third];
    let spare = profile.per_agent_small[first]
        .iter()
        .copied()
        .find(|&e| e != e3);
    let mut bundles = vec![Vec::new(); 3];
    match spare {
        None => {
            // Agents `second` and `third` agree on everything but e3.
            let rest = without(scaled, &[e3]);
            let mut parts = greedy_identical_partition(scaled.row(second), &rest, 3);
            let pick = (0..3)
                .min_by_key(|&k| (scaled.bundle_cost(first, &parts[k]), k))
                .unwrap();
            bundles[first] = parts.remove(pick);
            bundles[first].push(e3);
            let (lo, hi) = (second.min(third), second.max(third));
            bundles[lo] = parts.remove(0);
            bundles[hi] = parts.remove(0);
        }
        Some(e4) => {
            let rest = without(scaled, &[e1, e2, e3, e4]);
            let rr = round_robin_chores(
                scaled,
                &rest,
                &forcing_order(rest.len(), third, second, first),
            );
            bundles = rr.bundles;
            bundles[first].push(e4);
            bundles[second].push(e1);
            bundles[third].extend([e2, e3]);
        }
    }
    BiThreeOutcome {
        allocation: Allocation::new(bundles),
        case: BiThreeCase::TwoLargeOnly { agents, spare },
    }
}

fn one_large_only_each(scaled: &Instance, large_only: &[Vec<usize>; 3]) -> BiThreeOutcome {
    let empty: Vec<usize> = (0..3).filter(|&a| large_only[a].is_empty()).collect();
    let agents = match empty.as_slice() {
        [] => [0, 1, 2],
        [missing] => {
            let others: Vec<usize> = (0..3).filter(|a| a != missing).collect();
            [others[0], others[1], *missing]
        }
        _ => unreachable!("at most one agent lacks an item large only to her when rows differ"),
    };
    let e: Vec<Option<usize>> = agents
        .iter()
        .map(|&a| large_only[a].first().copied())
        .collect();
    let (e1, e2) = (e[0].unwrap(), e[1].unwrap());
    let special: Vec<usize> = e.iter().flatten().copied().collect();
    let rest = without(scaled, &special);
    // Every remaining item is consistent, so any row will do.
    let row = scaled.row(0);
    let mut parts = greedy_identical_partition(row, &rest, 3);
    parts.sort_by_key(|p| scaled.bundle_cost(0, p));
    let [s1, s2, s3]: [Vec<usize>; 3] = parts.try_into().unwrap();
    let spread = scaled.bundle_cost(0, &s3) - scaled.bundle_cost(0, &s1);
    let epsilon = scaled.cost(agents[0], e2).clone();
    let wide = e[2].is_some() && spread > epsilon;
    let (x1, x2, x3) = match e[2] {
        Some(e3) if wide => ([s1, vec![e2, e3]].concat(), [s2, vec![e1]].concat(), s3),
        Some(e3) => (
            [s1, vec![e2]].concat(),
            [s2, vec![e3]].concat(),
            [s3, vec![e1]].concat(),
        ),
        None => ([s1, vec![e2]].concat(), [s2, vec![e1]].concat(), s3),
    };
    let mut bundles = vec![Vec::new(); 3];
    bundles[agents[0]] = x1;
    bundles[agents[1]] = x2;
    bundles[agents[2]] = x3;
    BiThreeOutcome {
        allocation: Allocation::new(bundles),
        case: BiThreeCase::OneLargeOnlyEach {
            agents,
            third_defined: e[2].is_some(),
            wide,
        },
    }
}
