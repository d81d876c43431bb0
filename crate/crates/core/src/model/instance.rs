use std::collections::HashSet;
use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use super::cost::{is_negative, parse_rational, Cost, RationalError};

/// One problem-validation failure, naming the offending cell where there is one.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("negative cost at (agent {agent}, item {item})")]
    NegativeCost { agent: usize, item: usize },
    #[error("shape mismatch{}: expected {expected}, found {found}", row.map(|r| format!(" in row {r}")).unwrap_or_default())]
    ShapeMismatch {
        row: Option<usize>,
        expected: usize,
        found: usize,
    },
    #[error("bad rational at (agent {agent}, item {item}): {source}")]
    BadRational {
        agent: usize,
        item: usize,
        source: RationalError,
    },
    #[error("an instance needs at least one agent")]
    NoAgents,
    #[error("duplicate item label {0:?}")]
    DuplicateLabel(String),
    #[error("expected {expected} labels, found {found}")]
    LabelCount { expected: usize, found: usize },
}

/// Every problem found while validating a candidate instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationErrors(pub Vec<InstanceError>);

impl fmt::Display for ValidationErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join("; "))
    }
}

impl std::error::Error for ValidationErrors {}

/// `n` agents, `m` chores and an exact nonnegative cost matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    costs: Vec<Vec<Cost>>,
    m: usize,
    labels: Option<Vec<String>>,
}

impl Instance {
    pub fn new(costs: Vec<Vec<Cost>>) -> Result<Self, InstanceError> {
        let first = costs.first().ok_or(InstanceError::NoAgents)?;
        let m = first.len();
        for (agent, row) in costs.iter().enumerate() {
            if row.len() != m {
                return Err(InstanceError::ShapeMismatch {
                    row: Some(agent),
                    expected: m,
                    found: row.len(),
                });
            }
            if let Some(item) = row.iter().position(is_negative) {
                return Err(InstanceError::NegativeCost { agent, item });
            }
        }
        Ok(Instance {
            costs,
            m,
            labels: None,
        })
    }

    pub fn from_integers<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self, InstanceError> {
        Self::new(
            rows.iter()
                .map(|r| r.as_ref().iter().map(|&v| super::cost::int(v)).collect())
                .collect(),
        )
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, InstanceError> {
        if labels.len() != self.m {
            return Err(InstanceError::LabelCount {
                expected: self.m,
                found: labels.len(),
            });
        }
        let mut seen = HashSet::new();
        for label in &labels {
            if !seen.insert(label.as_str()) {
                return Err(InstanceError::DuplicateLabel(label.clone()));
            }
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.costs.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn cost(&self, agent: usize, item: usize) -> &Cost {
        &self.costs[agent][item]
    }

    pub fn row(&self, agent: usize) -> &[Cost] {
        &self.costs[agent]
    }

    pub fn rows(&self) -> &[Vec<Cost>] {
        &self.costs
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn items(&self) -> std::ops::Range<usize> {
        0..self.m
    }

    /// `c_agent(items)`.
    pub fn bundle_cost(&self, agent: usize, items: &[usize]) -> Cost {
        let row = &self.costs[agent];
        items.iter().fold(Cost::zero(), |acc, &e| acc + &row[e])
    }

    pub fn total_cost(&self, agent: usize) -> Cost {
        self.costs[agent]
            .iter()
            .fold(Cost::zero(), |acc, c| acc + c)
    }

    /// An agent with an all-zero row never envies anybody.
    pub fn is_zero_agent(&self, agent: usize) -> bool {
        self.costs[agent].iter().all(Zero::is_zero)
    }
}

/// A candidate instance as read from text, before any checking.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RawInstance {
    pub n: usize,
    pub m: usize,
    pub costs: Vec<Vec<String>>,
    pub labels: Option<Vec<String>>,
}

/// Checks a candidate instance, collecting every problem instead of stopping
/// at the first one.
pub fn validate_instance(raw: &RawInstance) -> Result<Instance, ValidationErrors> {
    let mut errors = Vec::new();
    if raw.n == 0 {
        errors.push(InstanceError::NoAgents);
    }
    if raw.costs.len() != raw.n {
        errors.push(InstanceError::ShapeMismatch {
            row: None,
            expected: raw.n,
            found: raw.costs.len(),
        });
    }
    let mut rows = Vec::with_capacity(raw.costs.len());
    for (agent, row) in raw.costs.iter().enumerate() {
        if row.len() != raw.m {
            errors.push(InstanceError::ShapeMismatch {
                row: Some(agent),
                expected: raw.m,
                found: row.len(),
            });
        }
        let mut parsed = Vec::with_capacity(row.len());
        for (item, text) in row.iter().enumerate() {
            match parse_rational(text) {
                Ok(v) if is_negative(&v) => {
                    errors.push(InstanceError::NegativeCost { agent, item })
                }
                Ok(v) => parsed.push(v),
                Err(source) => errors.push(InstanceError::BadRational {
                    agent,
                    item,
                    source,
                }),
            }
        }
        rows.push(parsed);
    }
    if !errors.is_empty() {
        return Err(ValidationErrors(errors));
    }
    let inst = Instance::new(rows).map_err(|e| ValidationErrors(vec![e]))?;
    match raw.labels.clone() {
        Some(labels) => inst
            .with_labels(labels)
            .map_err(|e| ValidationErrors(vec![e])),
        None => Ok(inst),
    }
}

/// Scales every row to sum 1. All-zero rows stay all-zero; see
/// [`Instance::is_zero_agent`].
pub fn normalize(inst: &Instance) -> Instance {
    let costs = inst
        .costs
        .iter()
        .map(|row| {
            let total = row.iter().fold(Cost::zero(), |acc, c| acc + c);
            if total.is_zero() || total.is_one() {
                row.clone()
            } else {
                row.iter().map(|c| c / &total).collect()
            }
        })
        .collect();
    Instance {
        costs,
        m: inst.m,
        labels: inst.labels.clone(),
    }
}

/// `σ_i`: items by descending cost under one agent, ties by ascending index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SortedOrder {
    pub agent: usize,
    pub order: Vec<usize>,
}

impl SortedOrder {
    /// The `rank`-th most costly item, 1-based like the usual `σ_i(rank)`.
    pub fn at(&self, rank: usize) -> usize {
        self.order[rank - 1]
    }
}

pub fn sorted_order(inst: &Instance, agent: usize) -> SortedOrder {
    SortedOrder {
        agent,
        order: sort_desc(inst.row(agent), inst.items()),
    }
}

/// Sorts `items` by descending `row` cost, ties by ascending index.
pub fn sort_desc(row: &[Cost], items: impl IntoIterator<Item = usize>) -> Vec<usize> {
    let mut order: Vec<usize> = items.into_iter().collect();
    order.sort_by(|&a, &b| row[b].cmp(&row[a]).then(a.cmp(&b)));
    order
}

/// Sorts `items` by ascending `row` cost, ties by ascending index.
pub fn sort_asc(row: &[Cost], items: impl IntoIterator<Item = usize>) -> Vec<usize> {
    let mut order: Vec<usize> = items.into_iter().collect();
    order.sort_by(|&a, &b| row[a].cmp(&row[b]).then(a.cmp(&b)));
    order
}

/// The tail items: everything but the agent's `n - 1` most costly items.
/// Returned in ascending item order.
pub fn tail_items(inst: &Instance, agent: usize) -> Vec<usize> {
    let order = sorted_order(inst, agent).order;
    let head = inst.n().saturating_sub(1).min(order.len());
    let mut tail = order[head..].to_vec();
    tail.sort_unstable();
    tail
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::cost::{int, ratio};

    fn raw(n: usize, m: usize, rows: &[&[&str]]) -> RawInstance {
        RawInstance {
            n,
            m,
            costs: rows
                .iter()
                .map(|r| r.iter().map(|s| s.to_string()).collect())
                .collect(),
            labels: None,
        }
    }

    #[test]
    fn validates_well_formed_input() {
        let inst = validate_instance(&raw(2, 3, &[&["1", "2", "3"], &["0", "4", "5"]])).unwrap();
        assert_eq!((inst.n(), inst.m()), (2, 3));
    }

    #[test]
    fn reports_negative_cell() {
        let err = validate_instance(&raw(2, 2, &[&["1", "-1"], &["0", "4"]])).unwrap_err();
        assert_eq!(
            err.0,
            vec![InstanceError::NegativeCost { agent: 0, item: 1 }]
        );
    }

    #[test]
    fn reports_row_count_mismatch() {
        let err = validate_instance(&raw(3, 1, &[&["1"], &["2"]])).unwrap_err();
        assert_eq!(
            err.0,
            vec![InstanceError::ShapeMismatch {
                row: None,
                expected: 3,
                found: 2
            }]
        );
    }

    #[test]
    fn reports_bad_rational_cell() {
        let err = validate_instance(&raw(1, 2, &[&["1", "3/0"]])).unwrap_err();
        assert!(matches!(
            err.0[..],
            [InstanceError::BadRational {
                agent: 0,
                item: 1,
                ..
            }]
        ));
    }

    #[test]
    fn rejects_duplicate_labels() {
        let mut r = raw(1, 2, &[&["1", "1"]]);
        r.labels = Some(vec!["a".into(), "a".into()]);
        let err = validate_instance(&r).unwrap_err();
        assert_eq!(err.0, vec![InstanceError::DuplicateLabel("a".into())]);
    }

    #[test]
    fn normalizes_rows() {
        let inst = Instance::from_integers(&[[1, 2, 5], [0, 0, 0]]).unwrap();
        let norm = normalize(&inst);
        assert_eq!(norm.row(0), &[ratio(1, 8), ratio(2, 8), ratio(5, 8)]);
        assert_eq!(norm.row(1), &[int(0), int(0), int(0)]);
        assert!(norm.is_zero_agent(1));
        let single = normalize(&Instance::from_integers(&[[3]]).unwrap());
        assert_eq!(single.row(0), &[int(1)]);
        assert_eq!(normalize(&norm), norm);
    }

    #[test]
    fn sorted_order_breaks_ties_by_index() {
        let inst = Instance::new(vec![vec![ratio(1, 8), ratio(1, 2), ratio(1, 8)]]).unwrap();
        assert_eq!(sorted_order(&inst, 0).order, vec![1, 0, 2]);
        let flat = Instance::from_integers(&[[2, 2, 2, 2]]).unwrap();
        assert_eq!(sorted_order(&flat, 0).order, vec![0, 1, 2, 3]);
        let empty = Instance::new(vec![vec![]]).unwrap();
        assert!(sorted_order(&empty, 0).order.is_empty());
    }

    #[test]
    fn tail_items_follow_definition() {
        let inst =
            Instance::from_integers(&[[5, 4, 3, 2, 1], [1, 1, 1, 1, 1], [0, 0, 0, 0, 0]]).unwrap();
        assert_eq!(tail_items(&inst, 0), vec![2, 3, 4]);
        let short = Instance::from_integers(&[[1, 2], [1, 2], [1, 2]]).unwrap();
        assert_eq!(tail_items(&short, 0), Vec::<usize>::new());
        let two = Instance::from_integers(&[[9, 1, 7, 3], [1, 1, 1, 1]]).unwrap();
        assert_eq!(tail_items(&two, 0), vec![1, 2, 3]);
    }
}
