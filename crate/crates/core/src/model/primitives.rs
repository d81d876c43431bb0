//! Constructions shared by several solvers.

use num_traits::Zero;
use thiserror::Error;

use super::allocation::Allocation;
use super::cost::Cost;
use super::instance::{sort_desc, sorted_order, Instance};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PrimitiveError {
    #[error("need at least n = {n} items, got m = {m}")]
    TooFewItems { n: usize, m: usize },
}

/// Gives each non-pivot agent one of the pivot's `n - 1` most costly items
/// (the k-th non-pivot agent gets `σ_pivot(k)`) and the pivot everything
/// else. The result is `(m - n)`-EFX.
pub fn trivial_tail_allocation(
    inst: &Instance,
    pivot: usize,
) -> Result<Allocation, PrimitiveError> {
    let (n, m) = (inst.n(), inst.m());
    if m < n {
        return Err(PrimitiveError::TooFewItems { n, m });
    }
    Ok(head_tail_allocation(inst, pivot))
}

pub(crate) fn head_tail_allocation(inst: &Instance, pivot: usize) -> Allocation {
    let order = sorted_order(inst, pivot).order;
    let mut bundles = vec![Vec::new(); inst.n()];
    let others = (0..inst.n()).filter(|&a| a != pivot);
    for (agent, &item) in others.zip(order.iter()) {
        bundles[agent].push(item);
    }
    bundles[pivot] = order[inst.n().saturating_sub(1).min(order.len())..].to_vec();
    Allocation::new(bundles)
}

/// For `m < n`: the first `m` agents get one item each, in index order.
pub fn one_item_each(inst: &Instance) -> Allocation {
    let mut bundles = vec![Vec::new(); inst.n()];
    for item in inst.items() {
        bundles[item].push(item);
    }
    Allocation::new(bundles)
}

/// Places items in descending cost order, each into the currently cheapest
/// bundle (lowest bundle index on ties). The result is EFX when every bundle
/// is judged under `row`.
pub fn greedy_identical_partition(row: &[Cost], items: &[usize], k: usize) -> Vec<Vec<usize>> {
    assert!(k >= 1, "need at least one bundle");
    let mut bundles = vec![Vec::new(); k];
    let mut loads = vec![Cost::zero(); k];
    for item in sort_desc(row, items.iter().copied()) {
        let target = (0..k)
            .min_by(|&a, &b| loads[a].cmp(&loads[b]).then(a.cmp(&b)))
            .unwrap();
        loads[target] += &row[item];
        bundles[target].push(item);
    }
    for b in &mut bundles {
        b.sort_unstable();
    }
    bundles
}

/// The cutter splits `items` into two bundles that are EFX under her own
/// costs; the chooser takes the cheaper one for her (the first on ties).
/// Returns `(cutter's bundle, chooser's bundle)`.
pub fn divide_and_choose(
    inst: &Instance,
    cutter: usize,
    chooser: usize,
    items: &[usize],
) -> (Vec<usize>, Vec<usize>) {
    assert_ne!(cutter, chooser, "cutter and chooser must differ");
    let mut halves = greedy_identical_partition(inst.row(cutter), items, 2);
    let second = halves.pop().unwrap();
    let first = halves.pop().unwrap();
    if inst.bundle_cost(chooser, &second) < inst.bundle_cost(chooser, &first) {
        (first, second)
    } else {
        (second, first)
    }
}

/// Whether `bundles` is EFX when every bundle is judged under `row`.
pub fn is_efx_under_row(row: &[Cost], bundles: &[Vec<usize>]) -> bool {
    let cost = |b: &[usize]| b.iter().fold(Cost::zero(), |acc, &e| acc + &row[e]);
    let costs: Vec<Cost> = bundles.iter().map(|b| cost(b)).collect();
    let cheapest_other = |skip: usize| {
        costs
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != skip)
            .map(|(_, c)| c)
            .min()
            .cloned()
    };
    bundles.iter().enumerate().all(|(k, b)| {
        let Some(least) = b.iter().map(|&e| &row[e]).min() else {
            return true;
        };
        match cheapest_other(k) {
            Some(other) => &costs[k] - least <= other,
            None => true,
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::cost::int;
    use crate::model::verify::min_efx_alpha;

    fn row(values: &[i64]) -> Vec<Cost> {
        values.iter().map(|&v| int(v)).collect()
    }

    #[test]
    fn tail_allocation_small_example() {
        let inst = Instance::from_integers(&[[1, 1, 1, 1], [4, 3, 2, 1]]).unwrap();
        let alloc = trivial_tail_allocation(&inst, 1).unwrap();
        assert_eq!(alloc.bundles(), &[vec![0], vec![1, 2, 3]]);
        assert!(min_efx_alpha(&inst, &alloc).unwrap().alpha.within(&int(2)));
    }

    #[test]
    fn tail_allocation_with_m_equal_n_is_singletons() {
        let inst = Instance::from_integers(&[[1, 2, 3], [3, 2, 1], [1, 1, 1]]).unwrap();
        let alloc = trivial_tail_allocation(&inst, 0).unwrap();
        assert!(alloc.bundles().iter().all(|b| b.len() == 1));
        assert!(min_efx_alpha(&inst, &alloc).unwrap().alpha.is_zero());
    }

    #[test]
    fn tail_allocation_with_zero_pivot() {
        let inst = Instance::from_integers(&[[1, 2, 3, 4], [0, 0, 0, 0]]).unwrap();
        let alloc = trivial_tail_allocation(&inst, 1).unwrap();
        assert!(alloc.is_complete(4));
        assert!(min_efx_alpha(&inst, &alloc).unwrap().alpha.is_zero());
    }

    #[test]
    fn tail_allocation_needs_enough_items() {
        let inst = Instance::from_integers(&[[1], [1]]).unwrap();
        assert_eq!(
            trivial_tail_allocation(&inst, 0),
            Err(PrimitiveError::TooFewItems { n: 2, m: 1 })
        );
    }

    #[test]
    fn greedy_partition_example() {
        // 5 -> B0, 4 -> B1, 3 -> B1 (4 < 5), 2 -> B0 (5 < 7), 1 -> B0 (7 = 7, lower index)
        let r = row(&[5, 4, 3, 2, 1]);
        let bundles = greedy_identical_partition(&r, &[0, 1, 2, 3, 4], 2);
        assert_eq!(bundles, vec![vec![0, 3, 4], vec![1, 2]]);
        assert!(is_efx_under_row(&r, &bundles));
    }

    #[test]
    fn greedy_partition_trivial_shapes() {
        let r = row(&[1; 9]);
        let items: Vec<usize> = (0..9).collect();
        assert_eq!(
            greedy_identical_partition(&r, &items, 1),
            vec![items.clone()]
        );
        let three = greedy_identical_partition(&r, &items, 3);
        assert!(three.iter().all(|b| b.len() == 3));
    }

    #[test]
    fn divide_and_choose_example() {
        let inst = Instance::from_integers(&[[5, 4, 3, 2, 1], [1, 1, 1, 1, 1]]).unwrap();
        let (cut, chose) = divide_and_choose(&inst, 0, 1, &[0, 1, 2, 3, 4]);
        assert_eq!(chose, vec![1, 2]);
        assert_eq!(cut, vec![0, 3, 4]);
        let (a, b) = divide_and_choose(&inst, 0, 1, &[]);
        assert!(a.is_empty() && b.is_empty());
    }

    #[test]
    fn divide_and_choose_identical_rows() {
        let inst = Instance::from_integers(&[[7, 3, 3, 2, 2, 1], [7, 3, 3, 2, 2, 1]]).unwrap();
        let (x, y) = divide_and_choose(&inst, 0, 1, &[0, 1, 2, 3, 4, 5]);
        let alloc = Allocation::new(vec![x, y]);
        assert!(min_efx_alpha(&inst, &alloc).unwrap().alpha.within(&int(1)));
    }

    #[test]
    fn efx_under_row_detects_violation() {
        let r = row(&[1, 1, 1]);
        assert!(!is_efx_under_row(&r, &[vec![0, 1, 2], vec![]]));
        assert!(is_efx_under_row(&r, &[vec![0, 1], vec![2]]));
    }
}
