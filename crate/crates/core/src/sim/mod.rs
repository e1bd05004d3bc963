//! Scenario execution: configuration files, the simulation loop and metrics.

mod metrics;
mod runner;
mod scenario;

pub use metrics::{compute_metrics, distance_to_path, write_trajectory_csv, Metrics};
pub use runner::{
    run_batch, run_scenario, run_scenario_with_model, ContextRecord, Mode, RunLog, Status, StepRecord, STUCK_CYCLES, TIMEOUT_S,
};
pub use scenario::{
    apply_override, parse_override, rasterize, AxisConfig, ConfigError, HumanConfig, ObjectiveConfig, PoseConfig,
    ResourceConfig, RobotConfig, ScenarioConfig, WorldConfig,
};
