//! Bi-valued instances: every cost is one of two values, rescaled to
//! `{ε, 1}`. Exact EFX for three agents and `(n - 1)`-EFX for `n >= 4`.

mod general;
mod groups;
pub(crate) mod partial;
mod profile;
mod round_robin;
mod three;

use thiserror::Error;

pub use general::{
    completion_violations, rebalance_violations, solve_bi_general, solve_bi_general_traced,
    BiGeneralBranch, BiGeneralOutcome, Completion,
};
pub use groups::{build_agent_groups, group_violations, AgentGroup, AgentGroups};
pub use partial::{partial_allocation_small, partial_violations, PartialX0};
pub use profile::{
    classify_items, classify_items_bi3, detect_bivalued, BiProfile, ItemClass, ProfileKind,
    ThreeAgentClasses,
};
pub use round_robin::{
    added_item_relation_holds, forcing_order, round_robin_chores, round_robin_envy_holds,
    RoundRobin,
};
pub use three::{solve_bi_three, solve_bi_three_traced, BiThreeCase, BiThreeOutcome};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BiValuedError {
    #[error("the cost matrix uses more than two distinct values")]
    NotBiValued,
    #[error("this construction does not apply to {0} agents")]
    WrongAgentCount(usize),
}
