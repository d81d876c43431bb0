use thiserror::Error;

use super::instance::Instance;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AllocationError {
    #[error("item {item} appears in bundles {first} and {second}")]
    BundleOverlap {
        item: usize,
        first: usize,
        second: usize,
    },
    #[error("item {item} does not exist (m = {m})")]
    UnknownItem { item: usize, m: usize },
    #[error("allocation has {found} bundles but the instance has {expected} agents")]
    BundleCount { expected: usize, found: usize },
}

/// One bundle per agent. Bundles are kept sorted; an allocation may be
/// partial (some items unassigned).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Allocation {
    bundles: Vec<Vec<usize>>,
}

impl Allocation {
    pub fn new(mut bundles: Vec<Vec<usize>>) -> Self {
        for b in &mut bundles {
            b.sort_unstable();
        }
        Allocation { bundles }
    }

    pub fn empty(n: usize) -> Self {
        Allocation {
            bundles: vec![Vec::new(); n],
        }
    }

    /// Builds an allocation from an item → owner map.
    pub fn from_owners(n: usize, owners: &[Option<usize>]) -> Self {
        let mut bundles = vec![Vec::new(); n];
        for (item, owner) in owners.iter().enumerate() {
            if let Some(agent) = owner {
                bundles[*agent].push(item);
            }
        }
        Allocation { bundles }
    }

    pub fn n(&self) -> usize {
        self.bundles.len()
    }

    pub fn bundle(&self, agent: usize) -> &[usize] {
        &self.bundles[agent]
    }

    pub fn bundles(&self) -> &[Vec<usize>] {
        &self.bundles
    }

    pub fn into_bundles(self) -> Vec<Vec<usize>> {
        self.bundles
    }

    /// Union of all bundles, ascending.
    pub fn allocated(&self) -> Vec<usize> {
        let mut all: Vec<usize> = self.bundles.iter().flatten().copied().collect();
        all.sort_unstable();
        all
    }

    pub fn item_count(&self) -> usize {
        self.bundles.iter().map(Vec::len).sum()
    }

    /// Every item of `0..m` is assigned exactly once.
    pub fn is_complete(&self, m: usize) -> bool {
        self.allocated() == (0..m).collect::<Vec<_>>()
    }

    /// Checks the allocation against an instance: one bundle per agent,
    /// known items only, pairwise disjoint bundles.
    pub fn check(&self, inst: &Instance) -> Result<(), AllocationError> {
        if self.bundles.len() != inst.n() {
            return Err(AllocationError::BundleCount {
                expected: inst.n(),
                found: self.bundles.len(),
            });
        }
        let m = inst.m();
        let mut owner: Vec<Option<usize>> = vec![None; m];
        for (agent, bundle) in self.bundles.iter().enumerate() {
            for &item in bundle {
                if item >= m {
                    return Err(AllocationError::UnknownItem { item, m });
                }
                if let Some(first) = owner[item] {
                    return Err(AllocationError::BundleOverlap {
                        item,
                        first,
                        second: agent,
                    });
                }
                owner[item] = Some(agent);
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn detects_overlap_and_unknown_items() {
        let inst = Instance::from_integers(&[[1, 1, 1], [1, 1, 1]]).unwrap();
        let overlap = Allocation::new(vec![vec![0, 1], vec![1]]);
        assert_eq!(
            overlap.check(&inst),
            Err(AllocationError::BundleOverlap {
                item: 1,
                first: 0,
                second: 1
            })
        );
        let unknown = Allocation::new(vec![vec![0], vec![3]]);
        assert_eq!(
            unknown.check(&inst),
            Err(AllocationError::UnknownItem { item: 3, m: 3 })
        );
        let short = Allocation::new(vec![vec![0]]);
        assert!(matches!(
            short.check(&inst),
            Err(AllocationError::BundleCount { .. })
        ));
    }

    #[test]
    fn completeness() {
        let alloc = Allocation::new(vec![vec![2, 0], vec![1]]);
        assert_eq!(alloc.bundle(0), &[0, 2]);
        assert!(alloc.is_complete(3));
        assert!(!alloc.is_complete(4));
        let owners = [Some(1), None, Some(0)];
        assert_eq!(
            Allocation::from_owners(2, &owners).bundles(),
            &[vec![2], vec![0]]
        );
    }
}
