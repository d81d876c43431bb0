use super::profile::BiProfile;
use crate::model::{sort_asc, Cost, Instance};

/// A round-robin run: one bundle per agent of the instance, and the last
/// round (1-based) in which each agent picked. Agents outside the order, or
/// who never got to pick, have no last round.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundRobin {
    pub bundles: Vec<Vec<usize>>,
    pub last_round: Vec<Option<usize>>,
}

/// Agents pick in cyclic `order`, each taking her cheapest remaining item
/// (lowest index on ties), until `items` is exhausted.
pub fn round_robin_chores(inst: &Instance, items: &[usize], order: &[usize]) -> RoundRobin {
    let n = inst.n();
    let mut bundles = vec![Vec::new(); n];
    let mut last_round = vec![None; n];
    if items.is_empty() {
        return RoundRobin {
            bundles,
            last_round,
        };
    }
    assert!(
        !order.is_empty(),
        "round-robin over a nonempty pool needs at least one agent"
    );
    let prefs: Vec<Vec<usize>> = order
        .iter()
        .map(|&a| sort_asc(inst.row(a), items.iter().copied()))
        .collect();
    let mut cursor = vec![0usize; order.len()];
    let mut taken = vec![false; inst.m()];
    for round in 1..=items.len() {
        let k = (round - 1) % order.len();
        while taken[prefs[k][cursor[k]]] {
            cursor[k] += 1;
        }
        let item = prefs[k][cursor[k]];
        taken[item] = true;
        bundles[order[k]].push(item);
        last_round[order[k]] = Some(round);
    }
    for b in &mut bundles {
        b.sort_unstable();
    }
    RoundRobin {
        bundles,
        last_round,
    }
}

/// Start order for three agents that makes the last rounds satisfy
/// `r_first < r_second < r_third` on a pool of `pool` items.
pub fn forcing_order(pool: usize, first: usize, second: usize, third: usize) -> [usize; 3] {
    match pool % 3 {
        0 => [first, second, third],
        1 => [third, first, second],
        _ => [second, third, first],
    }
}

fn cost(inst: &Instance, agent: usize, items: &[usize]) -> Cost {
    inst.bundle_cost(agent, items)
}

/// For every pair with `r_i < r_j`: `i` does not envy `j`, and `j` stops
/// envying `i` once some item is removed from `X_j`.
pub fn round_robin_envy_holds(inst: &Instance, rr: &RoundRobin) -> bool {
    ordered_pairs(rr).all(|(i, j)| {
        let (xi, xj) = (&rr.bundles[i], &rr.bundles[j]);
        let i_ok = cost(inst, i, xi) <= cost(inst, i, xj);
        let xj_cost = cost(inst, j, xj);
        let j_ok = xj
            .iter()
            .any(|&e| &xj_cost - inst.cost(j, e) <= cost(inst, j, xi));
        i_ok && j_ok
    })
}

/// For every pair with `r_i < r_j` and every unallocated `e` that is small
/// to `i` and large to `j`: after adding `e` to `X_i`, agent `i` is EFX
/// towards `j` and `j` does not envy `i`.
pub fn added_item_relation_holds(
    profile: &BiProfile,
    inst: &Instance,
    rr: &RoundRobin,
    outside: &[usize],
) -> bool {
    ordered_pairs(rr).all(|(i, j)| {
        outside
            .iter()
            .filter(|&&e| profile.is_small(i, e) && profile.is_large(j, e))
            .all(|&e| {
                let mut grown = rr.bundles[i].clone();
                grown.push(e);
                let total = cost(inst, i, &grown);
                let xj_for_i = cost(inst, i, &rr.bundles[j]);
                let i_efx = grown.iter().all(|&f| &total - inst.cost(i, f) <= xj_for_i);
                let j_content = cost(inst, j, &grown) >= cost(inst, j, &rr.bundles[j]);
                i_efx && j_content
            })
    })
}

fn ordered_pairs(rr: &RoundRobin) -> impl Iterator<Item = (usize, usize)> + '_ {
    let n = rr.bundles.len();
    (0..n)
        .flat_map(move |i| (0..n).map(move |j| (i, j)))
        .filter(
            |&(i, j)| matches!((rr.last_round[i], rr.last_round[j]), (Some(a), Some(b)) if a < b),
        )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bivalued::detect_bivalued;

    #[test]
    fn small_example() {
        // c_0 = (ε, 1, 1), c_1 = (1, ε, ε) with ε = 1/4.
        let inst = Instance::from_integers(&[[1, 4, 4], [4, 1, 1]]).unwrap();
        let rr = round_robin_chores(&inst, &[0, 1, 2], &[0, 1]);
        assert_eq!(rr.bundles, vec![vec![0, 2], vec![1]]);
        assert_eq!(rr.last_round, vec![Some(3), Some(2)]);
        assert!(round_robin_envy_holds(&inst, &rr));
    }

    #[test]
    fn empty_pool() {
        let inst = Instance::from_integers(&[[1, 4], [4, 1]]).unwrap();
        let rr = round_robin_chores(&inst, &[], &[0, 1]);
        assert!(rr.bundles.iter().all(Vec::is_empty));
        assert_eq!(rr.last_round, vec![None, None]);
    }

    #[test]
    fn forcing_orders() {
        for pool in 3..12 {
            let order = forcing_order(pool, 2, 0, 1);
            let inst =
                Instance::from_integers(&[vec![1i64; pool], vec![1; pool], vec![1; pool]]).unwrap();
            let items: Vec<usize> = (0..pool).collect();
            let r = round_robin_chores(&inst, &items, &order).last_round;
            assert!(r[2] < r[0] && r[0] < r[1], "pool {pool}: {r:?}");
        }
    }

    #[test]
    fn added_item_example() {
        let inst = Instance::from_integers(&[[1, 4, 4, 4], [4, 1, 1, 1]]).unwrap();
        let profile = detect_bivalued(&inst).unwrap();
        let scaled = profile.scaled_instance();
        let rr = round_robin_chores(&scaled, &[0, 1, 2], &[0, 1]);
        // r_1 = 2 < r_0 = 3 and item 3 is small to agent 1 only.
        assert!(added_item_relation_holds(&profile, &scaled, &rr, &[3]));
    }
}
