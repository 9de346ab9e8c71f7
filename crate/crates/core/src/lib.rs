//! Joint task assignment and TDMA time/power allocation for multi-helper
//! mobile-edge computing.
//!
//! A local user holds `L` indivisible computation tasks. Each task is either
//! executed locally or offloaded to one of `K` nearby helper nodes over a
//! TDMA frame: inputs are offloaded helper by helper, helpers compute in
//! parallel, and results are downloaded back in the same fixed order. The
//! library minimizes the end-to-end latency of the whole batch subject to a
//! per-node energy budget, by jointly choosing the assignment matrix and the
//! per-link transmission times (equivalently, powers).
//!
//! The crate is organized around five pieces:
//!
//! * [`model`] — problem data ([`Instance`]) and solution types.
//! * [`latency`] — closed-form compute/link times and energies, the TDMA
//!   waiting-time recursion, and schedule tightening.
//! * [`convex`] — the perspective-function link-energy model, a log-barrier
//!   interior-point solver, and the fixed-assignment / relaxed solves.
//! * [`algorithms`] — the relax–round–resolve scheme and the baseline
//!   schemes it is benchmarked against, plus an exhaustive oracle.
//! * [`scenario`] — randomized instance generation and parameter sweeps.
//!
//! ```
//! use mec_offload::prelude::*;
//!
//! let config = ScenarioConfig { num_helpers: 2, num_tasks: 3, seed: 7, ..Default::default() };
//! let generated = generate_instance(&config);
//! let solution = algorithm1(&generated.instance).unwrap();
//! assert!(solution.feasible);
//! assert!(solution.objective > 0.0);
//! ```

pub mod algorithms;
pub mod convex;
pub mod error;
mod guide;
pub mod latency;
pub mod model;
pub mod scenario;

pub use error::Error;

/// Commonly used items, re-exported for one-line imports.
pub mod prelude {
    pub use crate::algorithms::{
        algorithm1, exhaustive, heuristic_channel, heuristic_compute, local_execution,
        random_search, random_selection, relaxed_bound, run_scheme, SchemeLabel,
    };
    pub use crate::convex::{
        minimize_convex, perspective_eval, solve_fixed, solve_relaxed, sufficient_feasibility,
        ConvexSolveReport, SolveStatus,
    };
    pub use crate::latency::{
        energy_audit, link_energy, link_power, local_compute, remote_compute, simulate_schedule,
        tighten_schedule,
    };
    pub use crate::model::{
        validate_instance, Assignment, AssignmentKind, Channel, Instance, Node,
        ResourceAllocation, ScheduleReport, Solution, Task,
    };
    pub use crate::scenario::{
        db_to_linear, draw_instance, generate_instance, sweep, GeneratedInstance, ScenarioConfig,
        SweepAxis, SweepRow,
    };
    pub use crate::Error;
}
