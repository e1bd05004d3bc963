//! Context-aware multi-objective local planning for a mobile robot among
//! people.
//!
//! The crate is organised bottom-up: [`world`] holds geometry and the
//! occupancy grid, [`pareto`] the dominance archive and its fitness,
//! [`context`] the interaction classifier, [`objectives`] the cost terms and
//! their context-driven selection, [`socialgoal`] queue and group goals,
//! [`planner`] the global and local planners, and [`sim`] the scenario runner.

pub mod context;
pub mod objectives;
pub mod pareto;
pub mod planner;
pub mod sim;
pub mod socialgoal;
pub mod world;
