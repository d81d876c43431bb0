//! Balanced allocation of the items that are small to somebody.

use std::collections::VecDeque;

use super::profile::BiProfile;
use crate::model::Allocation;

/// An allocation of `M⁻` in which every agent holds only items small to her.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialX0 {
    pub bundles: Vec<Vec<usize>>,
    /// Item transfers performed along paths.
    pub transfers: usize,
}

impl PartialX0 {
    pub fn sizes(&self) -> Vec<usize> {
        self.bundles.iter().map(Vec::len).collect()
    }

    pub fn allocation(&self) -> Allocation {
        Allocation::new(self.bundles.clone())
    }
}

/// Gives each item of `M⁻` to an agent who finds it small, then rebalances
/// along paths of the digraph with an edge `j → i` whenever `j` finds some
/// item of `X_i` small, until no path runs from an agent to one holding two
/// or more items more.
pub fn partial_allocation_small(profile: &BiProfile) -> PartialX0 {
    let n = profile.n();
    let mut bundles: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &e in &profile.m_minus {
        let taker = (0..n)
            .filter(|&i| profile.is_small(i, e))
            .min_by_key(|&i| (bundles[i].len(), i))
            .expect("items of M⁻ are small to somebody");
        bundles[taker].push(e);
    }
    let mut transfers = 0;
    while let Some(path) = find_path(profile, &bundles) {
        for w in path.windows(2) {
            let (taker, giver) = (w[0], w[1]);
            let pos = bundles[giver]
                .iter()
                .enumerate()
                .filter(|&(_, &e)| profile.is_small(taker, e))
                .min_by_key(|&(_, &e)| e)
                .map(|(p, _)| p)
                .expect("edges only exist towards bundles with an item small to the taker");
            let item = bundles[giver].remove(pos);
            bundles[taker].push(item);
        }
        transfers += 1;
    }
    for b in &mut bundles {
        b.sort_unstable();
    }
    PartialX0 { bundles, transfers }
}

fn has_edge(profile: &BiProfile, bundles: &[Vec<usize>], from: usize, to: usize) -> bool {
    from != to && bundles[to].iter().any(|&e| profile.is_small(from, e))
}

/// A path `j → … → i` with `|X_i| >= |X_j| + 2`, starting from agents in
/// ascending size order and searching breadth first.
fn find_path(profile: &BiProfile, bundles: &[Vec<usize>]) -> Option<Vec<usize>> {
    let n = bundles.len();
    let mut sources: Vec<usize> = (0..n).collect();
    sources.sort_by_key(|&i| (bundles[i].len(), i));
    for source in sources {
        let target = bundles[source].len() + 2;
        let mut parent = vec![None; n];
        let mut seen = vec![false; n];
        seen[source] = true;
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            if bundles[u].len() >= target {
                let mut path = vec![u];
                let mut cur = u;
                while let Some(p) = parent[cur] {
                    path.push(p);
                    cur = p;
                }
                path.reverse();
                return Some(path);
            }
            for v in 0..n {
                if !seen[v] && has_edge(profile, bundles, u, v) {
                    seen[v] = true;
                    parent[v] = Some(u);
                    queue.push_back(v);
                }
            }
        }
    }
    None
}

/// Checks the two balance properties: a bundle two or more items larger
/// than `X_j` is entirely large to `j`; and along a chain of size steps of
/// one, one of the two steps is entirely large. Also checks that every
/// agent holds only items small to her. Returns one message per violation.
pub fn partial_violations(profile: &BiProfile, x0: &PartialX0) -> Vec<String> {
    let n = profile.n();
    let size = x0.sizes();
    let mut out = Vec::new();
    for i in 0..n {
        if let Some(&e) = x0.bundles[i].iter().find(|&&e| profile.is_large(i, e)) {
            out.push(format!("agent {i} holds item {e}, which is large to her"));
        }
    }
    for i in 0..n {
        for j in 0..n {
            if size[i] >= size[j] + 2 && !profile.all_large(j, &x0.bundles[i]) {
                out.push(format!(
                    "agent {j} finds an item of the larger bundle of agent {i} small"
                ));
            }
            if size[i] != size[j] + 1 {
                continue;
            }
            for l in (0..n).filter(|&l| size[j] == size[l] + 1) {
                if !profile.all_large(j, &x0.bundles[i]) && !profile.all_large(l, &x0.bundles[j]) {
                    out.push(format!(
                        "chain {l} → {j} → {i} has small items on both steps"
                    ));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bivalued::detect_bivalued;
    use crate::model::Instance;

    fn profile(rows: &[&[i64]]) -> BiProfile {
        detect_bivalued(&Instance::from_integers(rows).unwrap()).unwrap()
    }

    #[test]
    fn items_small_to_one_agent_stay_put() {
        let p = profile(&[&[1, 1, 1, 1], &[3, 3, 3, 3], &[3, 3, 3, 3], &[3, 3, 3, 3]]);
        let x0 = partial_allocation_small(&p);
        assert_eq!(x0.bundles, vec![vec![0, 1, 2, 3], vec![], vec![], vec![]]);
        assert_eq!(x0.transfers, 0);
        assert!(partial_violations(&p, &x0).is_empty());
    }

    #[test]
    fn consistent_small_items_balance() {
        // Eight consistently small items and one consistently large one.
        let row: &[i64] = &[1, 1, 1, 1, 1, 1, 1, 1, 3];
        let p = profile(&[row, row, row, row]);
        assert_eq!(partial_allocation_small(&p).sizes(), vec![2, 2, 2, 2]);
    }

    #[test]
    fn transfer_along_a_path() {
        let p = profile(&[
            &[1, 1, 1, 1, 3],
            &[1, 3, 3, 3, 1],
            &[3, 3, 3, 3, 1],
            &[3, 3, 3, 3, 3],
        ]);
        let x0 = partial_allocation_small(&p);
        // Initial pass: items 0..=3 go to agent 0, item 4 to agent 1.
        // Path 2 → 1 → 0 moves item 4 to agent 2 and item 0 to agent 1.
        assert_eq!(x0.bundles, vec![vec![1, 2, 3], vec![0], vec![4], vec![]]);
        assert!(x0.transfers >= 1);
        assert!(partial_violations(&p, &x0).is_empty());
    }
}
