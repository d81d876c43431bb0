//! Approximately envy-free allocation of indivisible chores.
//!
//! Every cost is an exact rational, and every allocation can be checked
//! exactly with [`model::min_efx_alpha`], which returns the least α such
//! that no agent envies another by more than a factor α once any single
//! item leaves her own bundle.
//!
//! Solvers:
//!
//! * [`three_agents::solve_three`]: 5-EFX for three agents;
//! * [`general_n::solve_general_n`]: 3n²-EFX for `n >= 4`;
//! * [`bivalued::solve_bi_three`]: EFX for three agents with two cost values;
//! * [`bivalued::solve_bi_general`]: (n−1)-EFX for `n >= 4` with two cost
//!   values, and 2-EFX when there are at least `n - 1` items every agent
//!   finds costly.
//!
//! [`oracle`] searches all `n^m` allocations of small instances, and
//! [`io`], [`generate`], [`runner`] and [`bench`] back the `chorefair`
//! command-line tool.
//!
//! ```
//! use chorefair::model::{int, min_efx_alpha, Instance};
//! use chorefair::three_agents::solve_three;
//!
//! let inst = Instance::from_integers(&[[4, 1, 1, 2, 3], [1, 1, 1, 1, 1], [9, 2, 2, 1, 1]]).unwrap();
//! let alloc = solve_three(&inst).unwrap();
//! assert!(min_efx_alpha(&inst, &alloc).unwrap().alpha.within(&int(5)));
//! ```

pub mod bench;
pub mod bivalued;
pub mod general_n;
pub mod generate;
pub mod io;
pub mod model;
pub mod oracle;
pub mod runner;
pub mod three_agents;
