//! Instances, allocations, the exact α-EFX verifier and the shared
//! partition primitives.

pub mod allocation;
pub mod cost;
pub mod instance;
pub mod primitives;
pub mod verify;

pub use allocation::{Allocation, AllocationError};
pub use cost::{format_rational, int, parse_rational, ratio, Alpha, Cost, RationalError};
pub use instance::{
    normalize, sort_asc, sort_desc, sorted_order, tail_items, validate_instance, Instance,
    InstanceError, RawInstance, SortedOrder, ValidationErrors,
};
pub use primitives::{
    divide_and_choose, greedy_identical_partition, is_efx_under_row, one_item_each,
    trivial_tail_allocation, PrimitiveError,
};
pub use verify::{is_alpha_efx, min_efx_alpha, VerifyReport, Witness};
