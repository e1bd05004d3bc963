//! Global A* path planning and the multi-objective local planner.

mod global;
mod local;

pub use global::{path_length, plan_global, plan_global_footprint, GlobalPlanError};
pub use local::{plan_step, rollout, sample_velocities, Diagnostics, LocalPlanner, PlannerConfig, Trajectory};
