//! `(n - 1)`-EFX for `n >= 4` agents with bi-valued costs.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_traits::One;

use super::groups::{build_agent_groups, AgentGroups};
use super::partial::{partial_allocation_small, PartialX0};
use super::profile::{require_bivalued, BiProfile, ProfileKind};
use super::round_robin::round_robin_chores;
use super::BiValuedError;
use crate::model::{min_efx_alpha, sort_asc, Allocation, Cost, Instance};

/// How the consistently large items were placed once `X⁰` was already
/// `(n - 1)`-EFX.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Completion {
    /// No consistently large items.
    NothingToPlace,
    /// At least as many large items as bottom-group agents: round-robin.
    RoundRobin,
    /// The last `p` agents already cost enough to themselves to take one each.
    CostlyEnough,
    /// Bottom agents were finalized one by one from the smallest end.
    Redistributed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BiGeneralBranch {
    /// Every cost is the same positive value.
    Uniform,
    /// At least `n` consistently large items.
    ManyLarge,
    /// Exactly `n - 1` consistently large items; `anchor` is the agent who
    /// takes small items instead of one of them.
    OneShort { anchor: usize },
    /// `X⁰` was not `(n - 1)`-EFX and was rebalanced in batches.
    Rebalanced,
    /// `X⁰` was `(n - 1)`-EFX and was completed.
    Completed(Completion),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiGeneralOutcome {
    pub allocation: Allocation,
    pub branch: BiGeneralBranch,
    pub profile: BiProfile,
    pub x0: Option<PartialX0>,
    pub groups: Option<AgentGroups>,
    /// Agents by non-increasing `|X⁰|`; the bottom group fills the tail.
    pub positions: Vec<usize>,
    /// Largest minus smallest bundle size each time items were harvested
    /// for a batch.
    pub harvest_gaps: Vec<usize>,
    /// Bottom-group agents still unfinalized when redistribution stopped.
    pub unfinalized: Vec<usize>,
    /// Consistently large items left over after rebalancing and dealt to
    /// the bottom group round-robin, with their recipients.
    pub leftover: Vec<(usize, usize)>,
}

/// An `(n - 1)`-EFX allocation for `n >= 4` agents with bi-valued costs.
pub fn solve_bi_general(inst: &Instance) -> Result<Allocation, BiValuedError> {
    solve_bi_general_traced(inst).map(|o| o.allocation)
}

pub fn solve_bi_general_traced(inst: &Instance) -> Result<BiGeneralOutcome, BiValuedError> {
    let profile = require_bivalued(inst)?;
    let n = inst.n();
    if n < 4 {
        return Err(BiValuedError::WrongAgentCount(n));
    }
    let scaled = profile.scaled_instance();
    let everyone: Vec<usize> = (0..n).collect();
    let mut out = BiGeneralOutcome {
        allocation: Allocation::empty(n),
        branch: BiGeneralBranch::Uniform,
        profile: profile.clone(),
        x0: None,
        groups: None,
        positions: everyone.clone(),
        harvest_gaps: Vec::new(),
        unfinalized: Vec::new(),
        leftover: Vec::new(),
    };
    let plus = &profile.m_plus;
    if profile.kind == ProfileKind::SinglePositive {
        let items: Vec<usize> = scaled.items().collect();
        out.allocation = Allocation::new(round_robin_chores(&scaled, &items, &everyone).bundles);
        return Ok(out);
    }
    if plus.len() >= n {
        let mut rest: Vec<usize> = plus[n..].to_vec();
        rest.extend(&profile.m_minus);
        let mut bundles = round_robin_chores(&scaled, &rest, &everyone).bundles;
        for (agent, &e) in plus[..n].iter().enumerate() {
            bundles[agent].push(e);
        }
        out.allocation = Allocation::new(bundles);
        out.branch = BiGeneralBranch::ManyLarge;
        return Ok(out);
    }
    if plus.len() + 1 == n {
        let (allocation, anchor) = one_short(&profile, &scaled);
        out.allocation = allocation;
        out.branch = BiGeneralBranch::OneShort { anchor };
        return Ok(out);
    }
    let x0 = partial_allocation_small(&profile);
    let groups = build_agent_groups(&x0, &profile);
    let sizes = x0.sizes();
    let mut positions = everyone;
    positions.sort_by_key(|&i| (std::cmp::Reverse(sizes[i]), groups.group_of[i], i));
    let bound = Cost::from_integer(BigInt::from(n - 1));
    let x0_alloc = x0.allocation();
    let x0_ok = min_efx_alpha(&scaled, &x0_alloc)
        .expect("X⁰ is a valid partial allocation")
        .alpha
        .within(&bound);
    let mut state = State {
        profile: &profile,
        scaled: &scaled,
        x: x0.bundles.clone(),
        rank: inverse(&positions),
        positions: positions.clone(),
    };
    if x0_ok {
        let (completion, unfinalized) = state.complete(&groups);
        out.branch = BiGeneralBranch::Completed(completion);
        out.unfinalized = unfinalized;
    } else {
        (out.harvest_gaps, out.leftover) = state.rebalance(&groups);
        out.branch = BiGeneralBranch::Rebalanced;
    }
    out.allocation = Allocation::new(state.x);
    out.positions = positions;
    out.x0 = Some(x0);
    out.groups = Some(groups);
    Ok(out)
}

fn inverse(positions: &[usize]) -> Vec<usize> {
    let mut rank = vec![0; positions.len()];
    for (p, &a) in positions.iter().enumerate() {
        rank[a] = p;
    }
    rank
}

/// `n - 1` consistently large items: the agent with the most small items
/// takes her cheapest items of `M⁻` until they cost her 1, everybody else
/// gets one large item, and the rest is picked round-robin starting after
/// the anchor.
fn one_short(profile: &BiProfile, scaled: &Instance) -> (Allocation, usize) {
    let n = profile.n();
    let anchor = (0..n)
        .max_by_key(|&i| (profile.per_agent_small[i].len(), std::cmp::Reverse(i)))
        .unwrap();
    let mut bundles = vec![Vec::new(); n];
    let mut pool = sort_asc(scaled.row(anchor), profile.m_minus.iter().copied());
    pool.reverse();
    let mut spent = Cost::default();
    while spent < Cost::one() {
        let Some(e) = pool.pop() else { break };
        spent += scaled.cost(anchor, e);
        bundles[anchor].push(e);
    }
    for (agent, &e) in (0..n).filter(|&a| a != anchor).zip(&profile.m_plus) {
        bundles[agent].push(e);
    }
    pool.sort_unstable();
    let order: Vec<usize> = (1..=n).map(|k| (anchor + k) % n).collect();
    let rr = round_robin_chores(scaled, &pool, &order);
    for (b, extra) in bundles.iter_mut().zip(rr.bundles) {
        b.extend(extra);
    }
    (Allocation::new(bundles), anchor)
}

struct State<'a> {
    profile: &'a BiProfile,
    scaled: &'a Instance,
    x: Vec<Vec<usize>>,
    positions: Vec<usize>,
    rank: Vec<usize>,
}

impl State<'_> {
    fn n(&self) -> usize {
        self.x.len()
    }

    /// Maximum size, latest position on ties.
    fn largest(&self) -> usize {
        (0..self.n())
            .max_by_key(|&a| (self.x[a].len(), self.rank[a]))
            .unwrap()
    }

    /// Minimum size, earliest position on ties.
    fn smallest(&self) -> usize {
        (0..self.n())
            .min_by_key(|&a| (self.x[a].len(), self.rank[a]))
            .unwrap()
    }

    fn take_lowest(&mut self, agent: usize) -> usize {
        let b = &mut self.x[agent];
        let pos = (0..b.len())
            .min_by_key(|&k| b[k])
            .expect("bundle is nonempty");
        b.remove(pos)
    }

    fn by_position(&self, agents: &[usize]) -> Vec<usize> {
        let mut v = agents.to_vec();
        v.sort_by_key(|&a| self.rank[a]);
        v
    }

    /// Batched rebalancing when `X⁰` is not `(n - 1)`-EFX. Returns the size
    /// gap observed before each harvest and the leftover deal.
    fn rebalance(&mut self, groups: &AgentGroups) -> (Vec<usize>, Vec<(usize, usize)>) {
        let n = self.n();
        let mut pool: VecDeque<usize> = self.profile.m_plus.iter().copied().collect();
        let bottom = self.by_position(&groups.bottom().members);
        while let Some(&j) = bottom.iter().find(|&&a| self.x[a].is_empty()) {
            let e = match pool.pop_front() {
                Some(e) => e,
                None => {
                    // With fewer items than agents, moving a singleton only
                    // empties another bundle.
                    let l = self.largest();
                    if self.x[l].len() < 2 {
                        break;
                    }
                    self.take_lowest(l)
                }
            };
            self.x[j].push(e);
        }
        let mut gaps = Vec::new();
        let cap = (self.scaled.m() + n) * (self.scaled.m() + n) + 1;
        for _ in 0..cap {
            let (big, small) = (self.x[self.largest()].len(), self.x[self.smallest()].len());
            if big <= (n - 1) * small + 1 {
                break;
            }
            // Among equally small bundles, serve the lowest group first so a
            // higher group never receives more items than a lower one.
            let j = (0..n)
                .min_by_key(|&a| {
                    (
                        self.x[a].len(),
                        std::cmp::Reverse(groups.group_of[a]),
                        self.rank[a],
                    )
                })
                .unwrap();
            let members = self.by_position(&groups.groups[groups.group_of[j]].members);
            if pool.len() < members.len() {
                gaps.push(big - small);
            }
            while pool.len() < members.len() {
                let l = self.largest();
                let e = self.take_lowest(l);
                pool.push_back(e);
            }
            for a in members {
                let e = pool.pop_front().unwrap();
                self.x[a].push(e);
            }
        }
        let mut leftover = Vec::new();
        if !pool.is_empty() {
            let items: Vec<usize> = pool.into_iter().collect();
            let rr = round_robin_chores(self.scaled, &items, &bottom);
            for (agent, extra) in rr.bundles.into_iter().enumerate() {
                leftover.extend(extra.iter().map(|&e| (e, agent)));
                self.x[agent].extend(extra);
            }
        }
        leftover.sort_unstable();
        self.sort();
        (gaps, leftover)
    }

    /// Places the consistently large items when `X⁰` is already
    /// `(n - 1)`-EFX. Returns the path taken and the bottom agents left
    /// unfinalized.
    fn complete(&mut self, groups: &AgentGroups) -> (Completion, Vec<usize>) {
        let n = self.n();
        let plus = self.profile.m_plus.clone();
        let bottom = self.by_position(&groups.bottom().members);
        let (p, s) = (plus.len(), bottom.len());
        if p == 0 {
            return (Completion::NothingToPlace, Vec::new());
        }
        if s <= p {
            let rr = round_robin_chores(self.scaled, &plus, &bottom);
            for (b, extra) in self.x.iter_mut().zip(rr.bundles) {
                b.extend(extra);
            }
            self.sort();
            return (Completion::RoundRobin, Vec::new());
        }
        let pivot = self.positions[n - p - 1];
        let pivot_cost = self.scaled.bundle_cost(pivot, &self.x[pivot]);
        if pivot_cost * Cost::from_integer(BigInt::from(n - 2)) >= Cost::one() {
            for (k, &e) in plus.iter().enumerate() {
                let agent = self.positions[n - 1 - k];
                self.x[agent].push(e);
            }
            self.sort();
            return (Completion::CostlyEnough, Vec::new());
        }
        let mut pool: VecDeque<usize> = plus.into_iter().collect();
        let mut remaining = bottom.clone();
        for &i in bottom.iter().rev() {
            if pool.is_empty() {
                break;
            }
            let others: Vec<usize> = remaining.iter().copied().filter(|&a| a != i).collect();
            let movable = self.x[i]
                .iter()
                .all(|&e| others.iter().any(|&j| self.profile.is_small(j, e)));
            if movable {
                let items = std::mem::take(&mut self.x[i]);
                for e in items {
                    let target = others
                        .iter()
                        .copied()
                        .filter(|&j| self.profile.is_small(j, e))
                        .min_by_key(|&j| (self.x[j].len(), self.rank[j]))
                        .unwrap();
                    self.x[target].push(e);
                }
                self.x[i] = vec![pool.pop_front().unwrap()];
            }
            remaining.retain(|&a| a != i);
            if pool.len() == remaining.len() {
                for &a in &remaining {
                    self.x[a].push(pool.pop_front().unwrap());
                }
                break;
            }
        }
        assert!(
            pool.is_empty() || remaining.is_empty(),
            "redistribution left large items unplaced with agents still waiting"
        );
        self.sort();
        (Completion::Redistributed, remaining)
    }

    fn sort(&mut self) {
        for b in &mut self.x {
            b.sort_unstable();
        }
    }
}

fn received(x0: &PartialX0, alloc: &Allocation, agent: usize) -> Vec<usize> {
    alloc
        .bundle(agent)
        .iter()
        .copied()
        .filter(|e| !x0.bundles[agent].contains(e))
        .collect()
}

/// Checks the invariants of the batched rebalancing: bundles of a higher
/// group are entirely large to lower-group agents; every received item is
/// large to its receiver; agents of one non-bottom group received equally
/// many items; bottom-group counts differ by at most one; a higher-group
/// agent received no more than a lower-group one. Also checks that every
/// harvest saw a size gap of at least `n`.
pub fn rebalance_violations(out: &BiGeneralOutcome) -> Vec<String> {
    let (Some(x0), Some(groups)) = (&out.x0, &out.groups) else {
        return Vec::new();
    };
    let profile = &out.profile;
    let n = profile.n();
    let alloc = &out.allocation;
    let count: Vec<usize> = (0..n).map(|a| received(x0, alloc, a).len()).collect();
    let bottom = groups.groups.len() - 1;
    let mut v = Vec::new();
    for i in 0..n {
        if let Some(e) = received(x0, alloc, i)
            .into_iter()
            .find(|&e| profile.is_small(i, e))
        {
            v.push(format!(
                "agent {i} received item {e}, which is small to her"
            ));
        }
        for j in 0..n {
            if groups.is_higher(i, j) {
                if !profile.all_large(j, alloc.bundle(i)) {
                    v.push(format!(
                        "agent {j} finds an item of higher-group agent {i} small"
                    ));
                }
                if count[i] > count[j] {
                    v.push(format!(
                        "higher-group agent {i} received more than agent {j}"
                    ));
                }
            }
            if i != j && groups.group_of[i] == groups.group_of[j] {
                let g = groups.group_of[i];
                if g != bottom && count[i] != count[j] {
                    v.push(format!(
                        "agents {i} and {j} of one group received {} and {}",
                        count[i], count[j]
                    ));
                }
                if g == bottom && count[i] > count[j] + 1 {
                    v.push(format!(
                        "bottom agents {i} and {j} received {} and {}",
                        count[i], count[j]
                    ));
                }
            }
        }
    }
    for &gap in &out.harvest_gaps {
        if gap < n {
            v.push(format!("harvested with a size gap of only {gap}"));
        }
    }
    v
}

/// Checks the completion invariants: every bottom-group agent received at
/// most one consistently large item, and every finalized bottom agent holds
/// a single item or a bundle costing at least 1 to each agent left
/// unfinalized.
pub fn completion_violations(out: &BiGeneralOutcome) -> Vec<String> {
    let Some(groups) = &out.groups else {
        return Vec::new();
    };
    let profile = &out.profile;
    let alloc = &out.allocation;
    let mut v = Vec::new();
    if out.branch != BiGeneralBranch::Completed(Completion::Redistributed) {
        return v;
    }
    for &i in &groups.bottom().members {
        let large = alloc
            .bundle(i)
            .iter()
            .filter(|e| profile.m_plus.contains(e))
            .count();
        if large > 1 {
            v.push(format!(
                "bottom agent {i} received {large} consistently large items"
            ));
        }
        if out.unfinalized.contains(&i) || alloc.bundle(i).len() == 1 {
            continue;
        }
        for &j in &out.unfinalized {
            let cost: Cost = alloc.bundle(i).iter().map(|&e| profile.cost(j, e)).sum();
            if cost < Cost::one() {
                v.push(format!("finalized agent {i} costs agent {j} less than 1"));
            }
        }
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::int;

    fn check(inst: &Instance) -> BiGeneralOutcome {
        let out = solve_bi_general_traced(inst).unwrap();
        assert!(out.allocation.is_complete(inst.m()), "{:?}", out.allocation);
        let bound = int(inst.n() as i64 - 1);
        let alpha = min_efx_alpha(inst, &out.allocation).unwrap().alpha;
        assert!(alpha.within(&bound), "alpha {alpha} in {:?}", out.branch);
        if out.branch == BiGeneralBranch::Rebalanced {
            assert_eq!(rebalance_violations(&out), Vec::<String>::new());
        }
        assert!(completion_violations(&out).is_empty());
        out
    }

    #[test]
    fn fewer_items_than_agents() {
        // Agents 1 and 2 find every item large; there are not enough items
        // to give both of them one without emptying someone else.
        let inst = Instance::from_integers(&[[1, 1, 1], [5, 5, 5], [5, 5, 5], [1, 1, 1]]).unwrap();
        let out = check(&inst);
        assert_eq!(out.branch, BiGeneralBranch::Rebalanced);
        assert!(out.allocation.bundles().iter().all(|b| b.len() <= 1));
    }

    #[test]
    fn many_large_items() {
        let row: &[i64] = &[4, 4, 4, 4, 4, 1, 1];
        let inst = Instance::from_integers(&[row, row, row, &[4, 4, 4, 4, 4, 4, 1]]).unwrap();
        let out = check(&inst);
        assert_eq!(out.branch, BiGeneralBranch::ManyLarge);
        assert!(min_efx_alpha(&inst, &out.allocation)
            .unwrap()
            .alpha
            .within(&int(2)));
    }

    #[test]
    fn one_short_of_n_large_items() {
        let inst = Instance::from_integers(&[
            [4, 4, 4, 1, 1, 1, 1, 1, 1],
            [4, 4, 4, 1, 4, 1, 4, 1, 4],
            [4, 4, 4, 4, 1, 4, 1, 4, 1],
            [4, 4, 4, 1, 1, 4, 4, 1, 1],
        ])
        .unwrap();
        let out = check(&inst);
        assert_eq!(out.branch, BiGeneralBranch::OneShort { anchor: 0 });
        // The anchor takes four items of cost 1/4 each; items 7 and 8 go to
        // agents 1 and 2 in the round-robin that follows.
        assert_eq!(out.allocation.bundle(0), &[3, 4, 5, 6]);
        assert!(min_efx_alpha(&inst, &out.allocation)
            .unwrap()
            .alpha
            .within(&int(2)));
    }

    #[test]
    fn all_consistently_small() {
        let row: &[i64] = &[1, 1, 1, 1, 1, 1, 1, 1, 1, 1];
        let mut rows = vec![row.to_vec(); 4];
        rows[3][9] = 2;
        let inst = Instance::from_integers(&rows).unwrap();
        let out = check(&inst);
        assert_eq!(
            out.branch,
            BiGeneralBranch::Completed(Completion::NothingToPlace)
        );
    }

    #[test]
    fn single_owner_needs_rebalancing() {
        // Everything is small only to agent 0, so X⁰ gives her all 12 items.
        let mut rows = vec![vec![5i64; 12]; 5];
        rows[0] = vec![1; 12];
        let inst = Instance::from_integers(&rows).unwrap();
        let out = check(&inst);
        assert_eq!(out.branch, BiGeneralBranch::Rebalanced);
    }

    #[test]
    fn tiny_bundles_are_redistributed() {
        // ε = 0, one small item per agent, two consistently large items.
        let inst = Instance::from_integers(&[
            [0, 1, 1, 1, 1, 1],
            [1, 0, 1, 1, 1, 1],
            [1, 1, 0, 0, 1, 1],
            [1, 1, 0, 0, 1, 1],
            [1, 1, 1, 1, 1, 1],
        ])
        .unwrap();
        let out = check(&inst);
        assert!(
            matches!(out.branch, BiGeneralBranch::Completed(_)),
            "{:?}",
            out.branch
        );
    }

    #[test]
    fn uniform_costs() {
        let inst = Instance::from_integers(&vec![vec![3i64; 9]; 4]).unwrap();
        let out = check(&inst);
        assert_eq!(out.branch, BiGeneralBranch::Uniform);
    }

    #[test]
    fn errors() {
        let inst = Instance::from_integers(&[[1, 2], [1, 1], [1, 1]]).unwrap();
        assert_eq!(
            solve_bi_general(&inst),
            Err(BiValuedError::WrongAgentCount(3))
        );
    }
}
