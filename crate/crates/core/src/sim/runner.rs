//! Discrete-time scenario loop.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::context::{bundled_model, extract_features, ContextLabel, ContextModel, Posterior};
use crate::objectives::{select_objectives, ActivationTable, ObjectiveId, SelectedObjectives};
use crate::pareto::ObjectivePoint;
use crate::planner::{plan_global_footprint, GlobalPlanError, LocalPlanner};
use crate::socialgoal::{o_formation_goal, queue_goal, SocialGoal};
use crate::world::{
    human_obstacle_cost, min_human_clearance, FootprintMap, Human, OccupancyGrid, Pose, StaticObstacle, Velocity,
    WorldState, HUMAN_BODY_RADIUS,
};

use super::scenario::{ConfigError, ScenarioConfig};

/// Runs end at this simulated time.
pub const TIMEOUT_S: f64 = 120.0;
/// Consecutive planning cycles without a feasible command before giving up.
pub const STUCK_CYCLES: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Traditional cost alone, no context classification.
    Traditional,
    /// Context-selected objectives combined by the Pareto selector.
    Paccet,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Traditional => "traditional",
            Mode::Paccet => "paccet",
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "traditional" => Ok(Mode::Traditional),
            "paccet" => Ok(Mode::Paccet),
            other => Err(format!("unknown mode `{other}` (expected traditional or paccet)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    GoalReached,
    Timeout,
    Stuck,
}

/// Classifier output for one cycle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContextRecord {
    pub label: ContextLabel,
    pub posterior: Posterior,
    pub low_confidence: bool,
}

/// State at the start of one cycle and what the planner did with it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub t: f64,
    pub pose: Pose,
    pub command: Velocity,
    pub context: Option<ContextRecord>,
    pub objectives: SelectedObjectives,
    pub candidates: usize,
    pub feasible: usize,
    pub chosen_fitness: Option<f64>,
    pub chosen_point: Option<ObjectivePoint>,
    pub stuck: bool,
    /// Center distance to the nearest human at `t`, `None` without humans.
    pub human_clearance: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunLog {
    pub scenario: String,
    pub mode: Mode,
    pub seed: u64,
    pub dt: f64,
    pub goal: Pose,
    pub global_path: Vec<Pose>,
    pub social_goal: Option<SocialGoal>,
    /// Step at which the social goal was adopted.
    pub social_goal_step: Option<usize>,
    /// Global replans forced by people blocking the path.
    pub replans: usize,
    pub status: Status,
    pub steps: Vec<StepRecord>,
}

impl RunLog {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("run log serializes");
        s.push('\n');
        s
    }

    pub fn poses(&self) -> impl Iterator<Item = &Pose> + '_ {
        self.steps.iter().map(|s| &s.pose)
    }

    pub fn final_pose(&self) -> Pose {
        self.steps.last().expect("run log has at least one step").pose
    }
}

/// Goal the robot is driving to: the task goal or an adopted social goal.
fn social_goal_for(label: ContextLabel, config: &ScenarioConfig, world: &WorldState) -> Option<SocialGoal> {
    match label {
        ContextLabel::QueueWaiting => {
            let res = config.resource?;
            let people: Vec<Human> = world.humans.iter().filter(|h| h.in_queue).cloned().collect();
            Some(queue_goal(&people, &Pose::new(res.x, res.y, res.theta), config.objectives.queue_spacing))
        }
        ContextLabel::GroupJoining => {
            let robot = world.robot.position();
            let mut ids: Vec<u32> = world.humans.iter().filter_map(|h| h.group_id).collect();
            ids.sort_unstable();
            ids.dedup();
            let group = ids
                .into_iter()
                .map(|id| world.humans.iter().filter(|h| h.group_id == Some(id)).cloned().collect::<Vec<_>>())
                .min_by(|a, b| {
                    let d = |g: &Vec<Human>| {
                        g.iter().map(|h| h.position().distance(&robot)).fold(f64::INFINITY, f64::min)
                    };
                    d(a).total_cmp(&d(b))
                })?;
            Some(o_formation_goal(&group, config.objectives.social_radius))
        }
        _ => None,
    }
}

/// Global path that routes around the people present right now. Their bodies
/// go into a plan-time grid only; the world's occupancy grid never sees them.
fn plan_path(config: &ScenarioConfig, humans: &[Human], start: &Pose, goal: &Pose) -> Result<Vec<Pose>, GlobalPlanError> {
    let mut obstacles = config.obstacles.clone();
    obstacles.extend(humans.iter().map(|h| StaticObstacle::circle(h.pose.x, h.pose.y, HUMAN_BODY_RADIUS)));
    let w = &config.world;
    let grid = OccupancyGrid::rasterize(w.width_m, w.height_m, w.resolution_m, &obstacles, config.robot.radius);
    plan_global_footprint(&FootprintMap::new(&grid, config.robot.radius), start, goal)
}

/// A person now stands where the remaining path would put the robot.
fn path_blocked(path: &[Pose], humans: &[Human], radius: f64) -> bool {
    path.iter().any(|p| human_obstacle_cost(p, humans, radius).is_err())
}

fn record(world: &WorldState) -> StepRecord {
    StepRecord {
        t: world.t,
        pose: world.robot,
        command: Velocity::ZERO,
        context: None,
        objectives: SelectedObjectives::traditional_only(),
        candidates: 0,
        feasible: 0,
        chosen_fitness: None,
        chosen_point: None,
        stuck: false,
        human_clearance: Some(min_human_clearance(&world.robot, &world.humans)).filter(|d| d.is_finite()),
    }
}

/// Runs `config` under the bundled context model.
pub fn run_scenario(config: &ScenarioConfig, mode: Mode, seed: u64) -> Result<RunLog, ConfigError> {
    run_scenario_with_model(config, mode, seed, &bundled_model())
}

/// Runs independent jobs on their own threads. Results come back in job
/// order and match what sequential calls would return.
pub fn run_batch(jobs: &[(&ScenarioConfig, Mode)], seed: u64) -> Vec<Result<RunLog, ConfigError>> {
    let model = bundled_model();
    std::thread::scope(|s| {
        let handles: Vec<_> = jobs
            .iter()
            .map(|(config, mode)| {
                let model = &model;
                s.spawn(move || run_scenario_with_model(config, *mode, seed, model))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("scenario thread panicked")).collect()
    })
}

/// Runs `config` to completion. The loop is fully deterministic; `seed` is
/// recorded so that runs can be identified, not consumed.
pub fn run_scenario_with_model(
    config: &ScenarioConfig,
    mode: Mode,
    seed: u64,
    model: &ContextModel,
) -> Result<RunLog, ConfigError> {
    config.validate()?;
    let grid = Arc::new(config.rasterize());
    let mut world = config.initial_world_on(grid.clone());
    let cfg = config.planner;
    let planner = LocalPlanner::new(&grid, world.spec.radius, cfg, config.objectives.weights, config.objectives.zones);
    let table = ActivationTable::default();

    let mut log = RunLog {
        scenario: config.name.clone(),
        mode,
        seed,
        dt: cfg.dt,
        goal: world.goal,
        global_path: Vec::new(),
        social_goal: None,
        social_goal_step: None,
        replans: 0,
        status: Status::Stuck,
        steps: Vec::new(),
    };

    let mut goal = world.goal;
    let reached = |w: &WorldState, g: &Pose| w.robot.distance(g) <= w.spec.goal_tolerance;
    // An already-satisfied goal needs no path.
    if !reached(&world, &goal) {
        match plan_path(config, &world.humans, &world.robot, &goal) {
            Ok(path) => log.global_path = path,
            Err(_) => {
                log.steps.push(record(&world));
                log.status = Status::Stuck;
                return Ok(log);
            }
        }
    }

    let social_allowed = mode == Mode::Paccet && !config.objectives.traditional_only;
    let mut social_tried = false;
    let mut previous: Option<WorldState> = None;
    let mut stuck_run = 0usize;
    let max_steps = (TIMEOUT_S / cfg.dt).round() as usize;

    for k in 0.. {
        world.t = k as f64 * cfg.dt;
        let mut rec = record(&world);
        if reached(&world, &goal) {
            log.steps.push(rec);
            log.status = Status::GoalReached;
            break;
        }
        if k >= max_steps {
            log.steps.push(rec);
            log.status = Status::Timeout;
            break;
        }

        let mut posterior = None;
        if mode == Mode::Paccet {
            if let Ok(features) = extract_features(&world, previous.as_ref()) {
                let c = model.classify(&features.to_array());
                posterior = Some(c.posterior);
                rec.context = Some(ContextRecord {
                    label: c.label,
                    posterior: c.posterior,
                    low_confidence: c.low_confidence,
                });
                if social_allowed && !social_tried {
                    if let Some(sg) = social_goal_for(c.label, config, &world) {
                        social_tried = true;
                        if let Ok(path) = plan_path(config, &world.humans, &world.robot, &sg.pose) {
                            goal = sg.pose;
                            log.global_path = path;
                            log.social_goal = Some(sg);
                            log.social_goal_step = Some(k);
                        }
                    }
                }
            }
        }

        let mut objectives = if mode == Mode::Traditional || config.objectives.traditional_only {
            SelectedObjectives::traditional_only()
        } else {
            select_objectives(posterior.as_ref(), world.corridor_axis.as_ref(), &table, config.objectives.drop_threshold)
        };
        if log.social_goal.is_none() {
            objectives = objectives.without(ObjectiveId::SocialGoalDistance);
        }
        let social_pose = log.social_goal.as_ref().map(|s| s.pose);
        if reached(&world, &goal) {
            log.steps.push(rec);
            log.status = Status::GoalReached;
            break;
        }

        if path_blocked(&log.global_path, &world.humans, world.spec.radius) {
            // Keep the old path when no detour exists; the local planner
            // still treats the person as an obstacle.
            if let Ok(path) = plan_path(config, &world.humans, &world.robot, &goal) {
                log.global_path = path;
                log.replans += 1;
            }
        }

        let (command, diag) = planner.plan_step(&world, &log.global_path, &goal, &objectives, social_pose.as_ref());
        rec.command = command;
        rec.candidates = diag.candidates.len();
        rec.feasible = diag.feasible_count();
        rec.chosen_fitness = diag.chosen_fitness();
        rec.chosen_point = diag.chosen_point().cloned();
        rec.stuck = diag.stuck;
        rec.objectives = objectives;
        log.steps.push(rec);

        stuck_run = if diag.stuck { stuck_run + 1 } else { 0 };
        if stuck_run >= STUCK_CYCLES {
            log.status = Status::Stuck;
            break;
        }

        previous = Some(world.clone());
        world.robot = crate::world::integrate(&world.robot, &command, cfg.dt);
        world.velocity = command;
        for h in &mut world.humans {
            h.advance(cfg.dt);
        }
    }
    Ok(log)
}
