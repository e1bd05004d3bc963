//! Sampling local planner: dynamic-window velocity sampling, closed-form
//! rollouts and multi-objective selection.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::context::Posterior;
use crate::objectives::{
    personal_space_cost, right_side_cost, select_objectives, social_goal_cost, traditional_terms, ActivationTable,
    ObjectiveId, ProxemicZones, SelectedObjectives, TraditionalWeights, DEFAULT_DROP_THRESHOLD,
};
use crate::pareto::{select_best, ObjectivePoint};
use crate::world::{human_obstacle_cost, integrate, Drive, FootprintMap, OccupancyGrid, Pose, RobotSpec, Velocity, WorldState};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PlannerConfig {
    pub dt: f64,
    pub horizon: f64,
    pub linear_samples: usize,
    pub angular_samples: usize,
    /// Only used by holonomic robots.
    pub lateral_samples: usize,
}

impl Default for PlannerConfig {
    fn default() -> Self {
        Self {
            dt: 0.1,
            horizon: 2.0,
            linear_samples: 11,
            angular_samples: 11,
            lateral_samples: 5,
        }
    }
}

impl PlannerConfig {
    pub fn is_valid(&self) -> bool {
        self.dt > 0.0
            && self.dt.is_finite()
            && self.horizon >= self.dt
            && self.horizon.is_finite()
            && self.linear_samples >= 1
            && self.angular_samples >= 1
            && self.lateral_samples >= 1
    }

    /// Number of integration steps over the horizon.
    pub fn steps(&self) -> usize {
        (self.horizon / self.dt).round() as usize
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub command: Velocity,
    pub poses: Vec<Pose>,
    pub objective_point: Option<ObjectivePoint>,
    pub feasible: bool,
}

/// Poses reached by holding `cmd` from `start`, one per `dt` up to the horizon.
pub fn rollout(start: &Pose, cmd: &Velocity, cfg: &PlannerConfig) -> Trajectory {
    let poses = (0..=cfg.steps())
        .map(|k| integrate(start, cmd, k as f64 * cfg.dt))
        .collect();
    Trajectory {
        command: *cmd,
        poses,
        objective_point: None,
        feasible: true,
    }
}

fn linspace(lo: f64, hi: f64, n: usize, current: f64) -> Vec<f64> {
    if n == 1 || hi - lo <= 0.0 {
        return vec![current.clamp(lo, hi.max(lo))];
    }
    // Grid points that should be zero come out as rounding noise; snap them.
    let snap = |v: f64| if v.abs() < 1e-12 { 0.0 } else { v };
    (0..n)
        .map(|k| if k + 1 == n { hi } else { snap(lo + (hi - lo) * k as f64 / (n - 1) as f64) })
        .collect()
}

fn window(current: f64, accel: f64, dt: f64, lo: f64, hi: f64) -> (f64, f64) {
    let a = (current - accel * dt).max(lo);
    let b = (current + accel * dt).min(hi);
    if a <= b {
        (a, b)
    } else {
        // Current velocity outside the limits: stay as close as allowed.
        let c = current.clamp(lo, hi);
        (c, c)
    }
}

/// Uniform grid over the velocities reachable within one cycle, clipped to
/// the robot's limits, plus the zero velocity.
pub fn sample_velocities(current: &Velocity, spec: &RobotSpec, cfg: &PlannerConfig) -> Vec<Velocity> {
    let dt = cfg.dt;
    let (x0, x1) = window(current.vx, spec.accel_linear, dt, spec.v_min, spec.v_max);
    let (w0, w1) = window(current.vtheta, spec.accel_angular, dt, -spec.vtheta_max, spec.vtheta_max);
    let vxs = linspace(x0, x1, cfg.linear_samples, current.vx);
    let vws = linspace(w0, w1, cfg.angular_samples, current.vtheta);
    let vys = match spec.drive {
        Drive::Holonomic => {
            let (y0, y1) = window(current.vy, spec.accel_linear, dt, -spec.v_max, spec.v_max);
            linspace(y0, y1, cfg.lateral_samples, current.vy)
        }
        Drive::Differential => vec![0.0],
    };
    let mut out = Vec::with_capacity(vxs.len() * vys.len() * vws.len() + 1);
    for &vx in &vxs {
        for &vy in &vys {
            for &vw in &vws {
                out.push(Velocity::new(vx, vy, vw));
            }
        }
    }
    if !out.iter().any(Velocity::is_zero) {
        out.push(Velocity::ZERO);
    }
    out
}

/// Per-cycle record of what the planner considered and chose.
#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostics {
    pub candidates: Vec<Trajectory>,
    pub traditional_cost: Vec<Option<f64>>,
    /// Fitness of each feasible candidate, in candidate order.
    pub fitness: Vec<Option<f64>>,
    pub objectives: SelectedObjectives,
    pub chosen: Option<usize>,
    pub stuck: bool,
}

impl Diagnostics {
    pub fn feasible_count(&self) -> usize {
        self.candidates.iter().filter(|c| c.feasible).count()
    }

    pub fn chosen_fitness(&self) -> Option<f64> {
        self.chosen.and_then(|i| self.fitness[i])
    }

    pub fn chosen_point(&self) -> Option<&ObjectivePoint> {
        self.chosen.and_then(|i| self.candidates[i].objective_point.as_ref())
    }
}

/// Local planner bound to one static grid and robot.
#[derive(Debug, Clone)]
pub struct LocalPlanner {
    pub cfg: PlannerConfig,
    pub weights: TraditionalWeights,
    pub zones: ProxemicZones,
    footprint: Arc<FootprintMap>,
}

impl LocalPlanner {
    pub fn new(grid: &OccupancyGrid, robot_radius: f64, cfg: PlannerConfig, weights: TraditionalWeights, zones: ProxemicZones) -> Self {
        Self {
            cfg,
            weights,
            zones,
            footprint: Arc::new(FootprintMap::new(grid, robot_radius)),
        }
    }

    pub fn footprint(&self) -> &FootprintMap {
        &self.footprint
    }

    /// Scores every sampled command against `objectives` and picks one.
    ///
    /// `goal` drives the traditional cost; `social_goal` feeds the social goal
    /// objective and must be present if that objective is active. Humans are
    /// obstacles to every mode; the social objectives come on top.
    pub fn plan_step(
        &self,
        world: &WorldState,
        global_path: &[Pose],
        goal: &Pose,
        objectives: &SelectedObjectives,
        social_goal: Option<&Pose>,
    ) -> (Velocity, Diagnostics) {
        assert!(!global_path.is_empty(), "plan_step needs a global path");
        let radius = world.spec.radius;
        let mut candidates: Vec<Trajectory> = sample_velocities(&world.velocity, &world.spec, &self.cfg)
            .iter()
            .map(|v| rollout(&world.robot, v, &self.cfg))
            .collect();
        let mut trad = vec![None; candidates.len()];

        for (k, c) in candidates.iter_mut().enumerate() {
            let terms = traditional_terms(&c.poses, global_path, goal, |p| {
                let grid = self.footprint.cost_at(p.x, p.y)?;
                let people = human_obstacle_cost(p, &world.humans, radius)?;
                Ok(grid.max(people))
            });
            let Ok(terms) = terms else {
                c.feasible = false;
                continue;
            };
            let cost = terms.weighted(&self.weights);
            let mut point = Vec::with_capacity(objectives.len());
            for (id, w) in &objectives.0 {
                let v = match id {
                    ObjectiveId::TraditionalCost => cost,
                    ObjectiveId::PersonalSpace => personal_space_cost(&c.poses, &world.humans, &self.zones),
                    ObjectiveId::RightSide => match &world.corridor_axis {
                        Some(axis) => right_side_cost(&c.poses, axis),
                        None => 0.0,
                    },
                    ObjectiveId::SocialGoalDistance => {
                        social_goal_cost(&c.poses, social_goal.expect("social goal objective without a social goal"))
                    }
                };
                point.push(w * v);
            }
            c.objective_point = Some(ObjectivePoint::new(point));
            trad[k] = Some(cost);
        }

        let feasible: Vec<usize> = (0..candidates.len()).filter(|&k| candidates[k].feasible).collect();
        let mut fitness = vec![None; candidates.len()];
        if feasible.is_empty() {
            let diag = Diagnostics {
                candidates,
                traditional_cost: trad,
                fitness,
                objectives: objectives.clone(),
                chosen: None,
                stuck: true,
            };
            return (Velocity::ZERO, diag);
        }
        let points: Vec<ObjectivePoint> = feasible
            .iter()
            .map(|&k| candidates[k].objective_point.clone().unwrap())
            .collect();
        let ties: Vec<f64> = feasible.iter().map(|&k| trad[k].unwrap()).collect();
        let sel = select_best(&points, &ties);
        for (n, &k) in feasible.iter().enumerate() {
            fitness[k] = Some(sel.fitness[n]);
        }
        let chosen = feasible[sel.index];
        let command = candidates[chosen].command;
        let diag = Diagnostics {
            candidates,
            traditional_cost: trad,
            fitness,
            objectives: objectives.clone(),
            chosen: Some(chosen),
            stuck: false,
        };
        (command, diag)
    }
}

/// One planning cycle straight from a context posterior: selects the
/// objectives (dropping the social goal objective when no social goal is
/// known) and plans toward the world's goal.
#[allow(clippy::too_many_arguments)]
pub fn plan_step(
    world: &WorldState,
    global_path: &[Pose],
    posterior: Option<&Posterior>,
    social_goal: Option<&Pose>,
    cfg: &PlannerConfig,
    weights: &TraditionalWeights,
    zones: &ProxemicZones,
) -> (Velocity, Diagnostics) {
    let planner = LocalPlanner::new(&world.grid, world.spec.radius, *cfg, *weights, *zones);
    let mut objectives = select_objectives(
        posterior,
        world.corridor_axis.as_ref(),
        &ActivationTable::default(),
        DEFAULT_DROP_THRESHOLD,
    );
    if social_goal.is_none() {
        objectives = objectives.without(ObjectiveId::SocialGoalDistance);
    }
    planner.plan_step(world, global_path, &world.goal, &objectives, social_goal)
}
