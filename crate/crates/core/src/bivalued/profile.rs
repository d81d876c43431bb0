use std::collections::BTreeSet;

use num_traits::{One, Zero};

use super::BiValuedError;
use crate::model::{Cost, Instance};

/// How many distinct values the cost matrix uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileKind {
    TwoValued,
    /// Every cost is zero (or there are no items).
    AllZero,
    /// Every cost is the same positive value.
    SinglePositive,
}

/// A bi-valued instance rescaled so that every cost is `ε` or `1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiProfile {
    pub kind: ProfileKind,
    pub epsilon: Cost,
    /// Original costs times `scale` lie in `{ε, 1}`.
    pub scale: Cost,
    /// `large[i][e]` iff `c_i(e) = 1` after scaling.
    pub large: Vec<Vec<bool>>,
    /// Items large to every agent, ascending.
    pub m_plus: Vec<usize>,
    /// Items small to at least one agent, ascending.
    pub m_minus: Vec<usize>,
    /// `M_i⁻`: the items small to agent `i`, ascending.
    pub per_agent_small: Vec<Vec<usize>>,
}

impl BiProfile {
    pub fn n(&self) -> usize {
        self.large.len()
    }

    pub fn m(&self) -> usize {
        self.large.first().map_or(0, Vec::len)
    }

    pub fn is_large(&self, agent: usize, item: usize) -> bool {
        self.large[agent][item]
    }

    pub fn is_small(&self, agent: usize, item: usize) -> bool {
        !self.large[agent][item]
    }

    /// Every item of `items` is large to `agent`.
    pub fn all_large(&self, agent: usize, items: &[usize]) -> bool {
        items.iter().all(|&e| self.large[agent][e])
    }

    pub fn cost(&self, agent: usize, item: usize) -> Cost {
        if self.large[agent][item] {
            Cost::one()
        } else {
            self.epsilon.clone()
        }
    }

    /// The `{ε, 1}` cost matrix as an instance.
    pub fn scaled_instance(&self) -> Instance {
        let rows = (0..self.n())
            .map(|i| (0..self.m()).map(|e| self.cost(i, e)).collect())
            .collect();
        Instance::new(rows).expect("scaled costs are nonnegative and rectangular")
    }
}

/// Detects whether the whole matrix uses at most two distinct values and,
/// if so, rescales the larger one to 1.
pub fn detect_bivalued(inst: &Instance) -> Option<BiProfile> {
    let values: BTreeSet<&Cost> = inst.rows().iter().flatten().collect();
    if values.len() > 2 {
        return None;
    }
    let mut it = values.into_iter();
    let (low, high) = (it.next(), it.next());
    let (kind, epsilon, scale, top) = match (low, high) {
        (Some(a), Some(b)) => (ProfileKind::TwoValued, a / b, b.recip(), Some(b.clone())),
        (Some(v), None) if !v.is_zero() => (
            ProfileKind::SinglePositive,
            Cost::zero(),
            v.recip(),
            Some(v.clone()),
        ),
        _ => (ProfileKind::AllZero, Cost::zero(), Cost::one(), None),
    };
    let n = inst.n();
    let large: Vec<Vec<bool>> = (0..n)
        .map(|i| {
            inst.row(i)
                .iter()
                .map(|c| top.as_ref() == Some(c))
                .collect()
        })
        .collect();
    let m_plus = inst
        .items()
        .filter(|&e| (0..n).all(|i| large[i][e]))
        .collect();
    let m_minus = inst
        .items()
        .filter(|&e| (0..n).any(|i| !large[i][e]))
        .collect();
    let per_agent_small = (0..n)
        .map(|i| inst.items().filter(|&e| !large[i][e]).collect())
        .collect();
    Some(BiProfile {
        kind,
        epsilon,
        scale,
        large,
        m_plus,
        m_minus,
        per_agent_small,
    })
}

pub(crate) fn require_bivalued(inst: &Instance) -> Result<BiProfile, BiValuedError> {
    detect_bivalued(inst).ok_or(BiValuedError::NotBiValued)
}

/// The small/large pattern of one item across all agents.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ItemClass {
    ConsistentlyLarge,
    ConsistentlySmall,
    LargeOnlyTo(usize),
    SmallOnlyTo(usize),
    MixedInconsistent,
}

/// Tags every item. With two agents an inconsistent item is reported as
/// `LargeOnlyTo`.
pub fn classify_items(profile: &BiProfile) -> Vec<ItemClass> {
    let n = profile.n();
    (0..profile.m())
        .map(|e| {
            let larges: Vec<usize> = (0..n).filter(|&i| profile.is_large(i, e)).collect();
            match larges.len() {
                0 => ItemClass::ConsistentlySmall,
                k if k == n => ItemClass::ConsistentlyLarge,
                1 => ItemClass::LargeOnlyTo(larges[0]),
                k if k + 1 == n => {
                    ItemClass::SmallOnlyTo((0..n).find(|&i| profile.is_small(i, e)).unwrap())
                }
                _ => ItemClass::MixedInconsistent,
            }
        })
        .collect()
}

/// Item tags for three agents together with `L_i`, the items large only to `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThreeAgentClasses {
    pub classes: Vec<ItemClass>,
    pub large_only: [Vec<usize>; 3],
}

pub fn classify_items_bi3(profile: &BiProfile) -> Result<ThreeAgentClasses, BiValuedError> {
    if profile.n() != 3 {
        return Err(BiValuedError::WrongAgentCount(profile.n()));
    }
    let classes = classify_items(profile);
    let mut large_only: [Vec<usize>; 3] = Default::default();
    for (e, class) in classes.iter().enumerate() {
        if let ItemClass::LargeOnlyTo(i) = class {
            large_only[*i].push(e);
        }
    }
    Ok(ThreeAgentClasses {
        classes,
        large_only,
    })
}
