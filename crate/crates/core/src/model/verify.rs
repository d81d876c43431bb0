use std::collections::BTreeMap;

use num_traits::Zero;

use super::allocation::{Allocation, AllocationError};
use super::cost::{Alpha, Cost};
use super::instance::{sort_asc, Instance};

/// The constraint `(envier, envied, removed item)` attaining the reported α.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Witness {
    pub envier: usize,
    pub envied: usize,
    pub item: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    /// The least α for which the allocation is α-EFX.
    pub alpha: Alpha,
    /// `None` exactly when `alpha` is zero.
    pub witness: Option<Witness>,
    /// Least feasible α for each ordered pair `(i, j)`, `i != j`.
    pub per_pair: BTreeMap<(usize, usize), Alpha>,
}

/// Exact minimum α such that `c_i(X_i - e) <= α · c_i(X_j)` for every agent
/// pair and every `e ∈ X_i`.
///
/// For a fixed pair the binding removal is the cheapest item of `X_i` under
/// `c_i` (lowest index on ties), so each pair costs one sum and one minimum.
/// Partial allocations are evaluated over the bundles as given.
pub fn min_efx_alpha(inst: &Instance, alloc: &Allocation) -> Result<VerifyReport, AllocationError> {
    alloc.check(inst)?;
    let n = inst.n();
    let mut alpha = Alpha::zero();
    let mut witness = None;
    let mut per_pair = BTreeMap::new();
    for i in 0..n {
        let own = alloc.bundle(i);
        // Removal that leaves the most behind: the cheapest item.
        let remainder = sort_asc(inst.row(i), own.iter().copied())
            .first()
            .map(|&cheapest| (cheapest, inst.bundle_cost(i, own) - inst.cost(i, cheapest)));
        for j in (0..n).filter(|&j| j != i) {
            let pair = match &remainder {
                Some((item, rest)) if !rest.is_zero() => {
                    let other = inst.bundle_cost(i, alloc.bundle(j));
                    let value = if other.is_zero() {
                        Alpha::Infinite
                    } else {
                        Alpha::Finite(rest / other)
                    };
                    if value > alpha {
                        alpha = value.clone();
                        witness = Some(Witness {
                            envier: i,
                            envied: j,
                            item: *item,
                        });
                    }
                    value
                }
                _ => Alpha::zero(),
            };
            per_pair.insert((i, j), pair);
        }
    }
    Ok(VerifyReport {
        alpha,
        witness,
        per_pair,
    })
}

/// `min_efx_alpha(inst, alloc).alpha <= alpha`, decided exactly.
pub fn is_alpha_efx(
    inst: &Instance,
    alloc: &Allocation,
    alpha: &Cost,
) -> Result<bool, AllocationError> {
    Ok(min_efx_alpha(inst, alloc)?.alpha.within(alpha))
}
