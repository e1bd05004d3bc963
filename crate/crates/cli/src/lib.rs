//! Runner, comparison harness and plots behind the `socnav` binary.

pub mod commands;
pub mod report;
pub mod svg;

pub use commands::{
    cmd_compare, cmd_gen_dataset, cmd_run, cmd_train_context, load_scenario, paccet_demo, CliError, CompareArgs,
    RunArgs, TrainArgs, BUNDLED_SCENARIOS, EXIT_INVALID, EXIT_IO, EXIT_OK, EXIT_STUCK,
};
pub use report::{ComparisonReport, Deltas, Verdict};
pub use svg::render_svg;
