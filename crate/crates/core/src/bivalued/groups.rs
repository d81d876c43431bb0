//! Agent groups over a balanced partial allocation.

use super::partial::PartialX0;
use super::profile::BiProfile;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AgentGroup {
    /// The bundle size `r` the group is named after; members hold `r` or
    /// `r + 1` items.
    pub level: usize,
    /// Ascending agent indices.
    pub members: Vec<usize>,
}

/// Nonempty groups from the highest level down to the lowest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AgentGroups {
    pub groups: Vec<AgentGroup>,
    /// Position in `groups` of each agent's group.
    pub group_of: Vec<usize>,
}

impl AgentGroups {
    /// The lowest group, which holds every minimum-size agent.
    pub fn bottom(&self) -> &AgentGroup {
        self.groups.last().expect("at least one agent")
    }

    /// Whether `i`'s group lies strictly above `j`'s.
    pub fn is_higher(&self, i: usize, j: usize) -> bool {
        self.group_of[i] < self.group_of[j]
    }
}

/// Splits every size class `N_r` into the agents reachable from size `r - 1`
/// (`F_r`) and the rest, then forms `A_r = F_{r+1} ∪ (N_r ∖ F_r)`.
pub fn build_agent_groups(x0: &PartialX0, profile: &BiProfile) -> AgentGroups {
    let n = profile.n();
    let size = x0.sizes();
    let top = size.iter().copied().max().unwrap_or(0);
    // Agent j finds X_i cheaper than |X_i|: some item of X_i is small to j.
    let cheap = |j: usize, i: usize| !profile.all_large(j, &x0.bundles[i]);
    let mut in_f = vec![false; n];
    for r in 1..=top {
        let level: Vec<usize> = (0..n).filter(|&i| size[i] == r).collect();
        for &i in &level {
            in_f[i] = (0..n).any(|j| size[j] + 1 == r && cheap(j, i));
        }
        loop {
            let grow = level
                .iter()
                .copied()
                .find(|&i| !in_f[i] && level.iter().any(|&j| in_f[j] && cheap(j, i)));
            match grow {
                Some(i) => in_f[i] = true,
                None => break,
            }
        }
    }
    let mut groups = Vec::new();
    for r in (0..=top).rev() {
        let members: Vec<usize> = (0..n)
            .filter(|&i| (size[i] == r + 1 && in_f[i]) || (size[i] == r && !in_f[i]))
            .collect();
        if !members.is_empty() {
            groups.push(AgentGroup { level: r, members });
        }
    }
    let mut group_of = vec![0; n];
    for (g, group) in groups.iter().enumerate() {
        for &i in &group.members {
            group_of[i] = g;
        }
    }
    AgentGroups { groups, group_of }
}

/// Checks that sizes within a group differ by at most one, that every
/// bundle of a higher group is entirely large to every lower-group agent,
/// and that every minimum-size agent sits in the bottom group.
pub fn group_violations(x0: &PartialX0, profile: &BiProfile, groups: &AgentGroups) -> Vec<String> {
    let n = profile.n();
    let size = x0.sizes();
    let mut out = Vec::new();
    for g in &groups.groups {
        let lo = g.members.iter().map(|&i| size[i]).min().unwrap();
        let hi = g.members.iter().map(|&i| size[i]).max().unwrap();
        if hi > lo + 1 {
            out.push(format!(
                "group at level {} mixes sizes {lo} and {hi}",
                g.level
            ));
        }
    }
    for i in 0..n {
        for j in 0..n {
            if groups.is_higher(j, i) && !profile.all_large(i, &x0.bundles[j]) {
                out.push(format!(
                    "agent {i} finds an item of higher-group agent {j} small"
                ));
            }
        }
    }
    let min = size.iter().copied().min().unwrap_or(0);
    let bottom = groups.groups.len() - 1;
    for i in (0..n).filter(|&i| size[i] == min) {
        if groups.group_of[i] != bottom {
            out.push(format!("minimum-size agent {i} is not in the bottom group"));
        }
    }
    out
}
