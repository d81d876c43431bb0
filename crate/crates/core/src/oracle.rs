//! Exhaustive search over all `n^m` complete allocations of a small instance.

use std::cmp::Ordering;
use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::model::{Allocation, Alpha, Cost, Instance};

pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{n}^{m} allocations exceed the budget of {budget}")]
    BudgetExceeded { n: usize, m: usize, budget: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    /// The least α attained by any complete allocation.
    pub best_alpha: Alpha,
    /// The first allocation, in enumeration order, attaining `best_alpha`.
    pub best_allocation: Allocation,
    /// Complete allocations evaluated.
    pub states_examined: u64,
}

/// Number of complete allocations, if it fits in a `u64`.
pub fn allocation_count(n: usize, m: usize) -> Option<u64> {
    (n as u64).checked_pow(u32::try_from(m).ok()?)
}

fn check_budget(inst: &Instance, budget: u64) -> Result<(), OracleError> {
    let (n, m) = (inst.n(), inst.m());
    match allocation_count(n, m) {
        Some(c) if c <= budget => Ok(()),
        _ => Err(OracleError::BudgetExceeded { n, m, budget }),
    }
}

/// Minimum over all complete allocations of the least feasible α.
///
/// Items are assigned in mixed-radix order with item 0 most significant and
/// agent 0 first; the search stops early once an envy-free-up-to-any-item
/// allocation with α = 0 turns up.
pub fn oracle_min_alpha(inst: &Instance, budget: u64) -> Result<OracleResult, OracleError> {
    check_budget(inst, budget)?;
    Ok(search(inst, false))
}

/// Whether some complete allocation is EFX; stops at the first one found.
pub fn efx_exists(inst: &Instance, budget: u64) -> Result<bool, OracleError> {
    check_budget(inst, budget)?;
    Ok(search(inst, true).best_alpha.within(&Cost::one()))
}

fn search(inst: &Instance, stop_at_one: bool) -> OracleResult {
    let rows = integer_rows(inst);
    let bits = rows
        .iter()
        .map(|row| row.iter().sum::<BigInt>().bits())
        .max()
        .unwrap_or(0);
    // Ratios are compared by cross-multiplying two bundle costs.
    let (alpha, owners, states) = if bits < 32 {
        let small: Vec<Vec<u64>> = rows
            .iter()
            .map(|r| r.iter().map(|v| v.to_u64().unwrap()).collect())
            .collect();
        Search::new(small, stop_at_one).run()
    } else if bits < 63 {
        let small: Vec<Vec<u128>> = rows
            .iter()
            .map(|r| r.iter().map(|v| v.to_u128().unwrap()).collect())
            .collect();
        Search::new(small, stop_at_one).run()
    } else {
        Search::new(rows, stop_at_one).run()
    };
    OracleResult {
        best_alpha: alpha,
        best_allocation: Allocation::from_owners(
            inst.n(),
            &owners.into_iter().map(Some).collect::<Vec<_>>(),
        ),
        states_examined: states,
    }
}

/// Each row scaled by the lcm of its denominators. α compares costs of one
/// agent at a time, so per-row scaling leaves it unchanged.
fn integer_rows(inst: &Instance) -> Vec<Vec<BigInt>> {
    inst.rows()
        .iter()
        .map(|row| {
            let lcm = row.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
            row.iter()
                .map(|c| (c * Cost::from_integer(lcm.clone())).to_integer())
                .collect()
        })
        .collect()
}

trait Value:
    Clone
    + Ord
    + Zero
    + One
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
{
    fn times(&self, other: &Self) -> Self;
    fn into_big(self) -> BigInt;
}

impl Value for u64 {
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn into_big(self) -> BigInt {
        BigInt::from(self)
    }
}

impl Value for u128 {
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn into_big(self) -> BigInt {
        BigInt::from(self)
    }
}

impl Value for BigInt {
    fn times(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn into_big(self) -> BigInt {
        self
    }
}

/// `Some((num, den))` with `den > 0`, or `None` for an unbounded ratio.
type Ratio<T> = Option<(T, T)>;

fn cmp_ratio<T: Value>(a: &Ratio<T>, b: &Ratio<T>) -> Ordering {
    match (a, b) {
        (None, None) => Ordering::Equal,
        (None, Some(_)) => Ordering::Greater,
        (Some(_), None) => Ordering::Less,
        (Some((an, ad)), Some((bn, bd))) => an.times(bd).cmp(&bn.times(ad)),
    }
}

struct Search<T> {
    rows: Vec<Vec<T>>,
    n: usize,
    m: usize,
    stop_at_one: bool,
    /// `sums[i][k]`: agent i's cost of agent k's current bundle.
    sums: Vec<Vec<T>>,
    /// Cheapest item in each agent's own bundle, under her own costs.
    own_min: Vec<Option<T>>,
    owners: Vec<usize>,
    best: Option<(Ratio<T>, Vec<usize>)>,
    states: u64,
}

impl<T: Value> Search<T> {
    fn new(rows: Vec<Vec<T>>, stop_at_one: bool) -> Self {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        Search {
            rows,
            n,
            m,
            stop_at_one,
            sums: vec![vec![T::zero(); n]; n],
            own_min: vec![None; n],
            owners: vec![0; m],
            best: None,
            states: 0,
        }
    }

    fn run(mut self) -> (Alpha, Vec<usize>, u64) {
        self.descend(0);
        let (ratio, owners) = self.best.expect("at least one allocation");
        let alpha = match ratio {
            None => Alpha::Infinite,
            Some((num, den)) => Alpha::Finite(Cost::new(num.into_big(), den.into_big())),
        };
        (alpha, owners, self.states)
    }

    fn done(&self) -> bool {
        match &self.best {
            Some((Some((num, den)), _)) => num.is_zero() || (self.stop_at_one && num <= den),
            _ => false,
        }
    }

    /// Returns true once the search can stop.
    fn descend(&mut self, item: usize) -> bool {
        if item == self.m {
            self.evaluate();
            return self.done();
        }
        for agent in 0..self.n {
            for i in 0..self.n {
                self.sums[i][agent] = self.sums[i][agent].clone() + &self.rows[i][item];
            }
            let saved = self.own_min[agent].clone();
            let c = &self.rows[agent][item];
            if saved.as_ref().is_none_or(|s| c < s) {
                self.own_min[agent] = Some(c.clone());
            }
            self.owners[item] = agent;
            let stop = self.descend(item + 1);
            self.own_min[agent] = saved;
            for i in 0..self.n {
                self.sums[i][agent] = self.sums[i][agent].clone() - &self.rows[i][item];
            }
            if stop {
                return true;
            }
        }
        false
    }

    fn evaluate(&mut self) {
        self.states += 1;
        let mut worst: Ratio<T> = Some((T::zero(), T::one()));
        for i in 0..self.n {
            let Some(min) = &self.own_min[i] else {
                continue;
            };
            let rest = self.sums[i][i].clone() - min;
            if rest.is_zero() {
                continue;
            }
            // The cheapest other bundle gives agent i her largest ratio.
            let cheapest = (0..self.n)
                .filter(|&j| j != i)
                .map(|j| &self.sums[i][j])
                .min();
            let Some(other) = cheapest else { continue };
            if other.is_zero() {
                worst = None;
                break;
            }
            let ratio = Some((rest, other.clone()));
            if cmp_ratio(&ratio, &worst) == Ordering::Greater {
                worst = ratio;
            }
        }
        let better = match &self.best {
            None => true,
            Some((b, _)) => cmp_ratio(&worst, b) == Ordering::Less,
        };
        if better {
            self.best = Some((worst, self.owners.clone()));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{int, min_efx_alpha, ratio};

    #[test]
    fn single_item_is_free() {
        let inst = Instance::from_integers(&[[5], [7]]).unwrap();
        let r = oracle_min_alpha(&inst, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.best_alpha, Alpha::zero());
        assert_eq!(r.best_allocation.bundles(), &[vec![0], vec![]]);
    }

    #[test]
    fn identical_unit_rows() {
        // Splitting 2-2 leaves one unit against two.
        let inst = Instance::from_integers(&[[1, 1, 1, 1], [1, 1, 1, 1]]).unwrap();
        let r = oracle_min_alpha(&inst, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.best_alpha, Alpha::Finite(ratio(1, 2)));
        assert_eq!(r.states_examined, 16);
        assert_eq!(
            min_efx_alpha(&inst, &r.best_allocation).unwrap().alpha,
            r.best_alpha
        );
    }

    #[test]
    fn empty_instance() {
        let inst = Instance::new(vec![vec![], vec![]]).unwrap();
        assert!(efx_exists(&inst, 1).unwrap());
        assert_eq!(oracle_min_alpha(&inst, 1).unwrap().states_examined, 1);
    }

    #[test]
    fn budget_is_enforced() {
        let inst = Instance::from_integers(&[vec![1i64; 30], vec![1; 30]]).unwrap();
        assert_eq!(
            oracle_min_alpha(&inst, DEFAULT_BUDGET),
            Err(OracleError::BudgetExceeded {
                n: 2,
                m: 30,
                budget: DEFAULT_BUDGET
            })
        );
    }

    #[test]
    fn rational_and_huge_costs_agree() {
        let small = Instance::from_integers(&[[3, 1, 2], [1, 1, 1]]).unwrap();
        let huge = Instance::new(
            small
                .rows()
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|c| c * Cost::from_integer(BigInt::from(10u8).pow(30)) / int(7))
                        .collect()
                })
                .collect(),
        )
        .unwrap();
        let a = oracle_min_alpha(&small, DEFAULT_BUDGET).unwrap();
        let b = oracle_min_alpha(&huge, DEFAULT_BUDGET).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn odd_split() {
        // The best split is two against one.
        let inst = Instance::from_integers(&[[1, 1, 1], [1, 1, 1]]).unwrap();
        assert_eq!(
            oracle_min_alpha(&inst, DEFAULT_BUDGET).unwrap().best_alpha,
            Alpha::Finite(int(1))
        );
    }
}
