//! Run metrics and the per-step trajectory table.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::world::{min_obstacle_clearance, Point2, Pose};

use super::runner::{RunLog, Status};
use super::scenario::ScenarioConfig;

/// Summary of one run. Distances that have no referent (no humans, no
/// obstacles, no corridor) are `None`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub status: Status,
    pub success: bool,
    pub steps: usize,
    pub duration: f64,
    pub path_length: f64,
    pub time_to_goal: Option<f64>,
    pub min_human_clearance: Option<f64>,
    pub min_obstacle_clearance: Option<f64>,
    /// Steps closer than the personal zone radius to some human.
    pub proxemic_intrusions: usize,
    /// Steps closer than the intimate zone radius to some human.
    pub intimate_intrusions: usize,
    pub final_distance_to_goal: f64,
    pub final_distance_to_social_goal: Option<f64>,
    /// Mean signed offset from the corridor centerline, left positive.
    pub mean_lateral_offset: Option<f64>,
    /// Largest distance between a logged pose and the global path.
    pub max_path_deviation: f64,
}

fn segment_distance(p: &Point2, a: &Point2, b: &Point2) -> f64 {
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    let len2 = dx * dx + dy * dy;
    if len2 == 0.0 {
        return p.distance(a);
    }
    let t = (((p.x - a.x) * dx + (p.y - a.y) * dy) / len2).clamp(0.0, 1.0);
    p.distance(&Point2::new(a.x + t * dx, a.y + t * dy))
}

/// Distance from `p` to the polyline through `path`.
pub fn distance_to_path(p: &Point2, path: &[Pose]) -> f64 {
    match path {
        [] => 0.0,
        [only] => p.distance(&only.position()),
        _ => path
            .windows(2)
            .map(|w| segment_distance(p, &w[0].position(), &w[1].position()))
            .fold(f64::INFINITY, f64::min),
    }
}

fn min_opt(values: impl Iterator<Item = f64>) -> Option<f64> {
    values.filter(|v| v.is_finite()).reduce(f64::min)
}

pub fn compute_metrics(log: &RunLog, config: &ScenarioConfig) -> Metrics {
    assert!(!log.steps.is_empty(), "metrics need a non-empty run log");
    let zones = &config.objectives.zones;
    let poses: Vec<Pose> = log.poses().copied().collect();
    let last = *poses.last().unwrap();
    let path_length = poses.windows(2).map(|w| w[0].distance(&w[1])).sum();
    let success = log.status == Status::GoalReached;
    let duration = log.steps.last().unwrap().t;

    let human = log.steps.iter().filter_map(|s| s.human_clearance);
    let min_obstacle_clearance = min_opt(poses.iter().map(|p| min_obstacle_clearance(p, &config.obstacles)));
    let count_below = |r: f64| log.steps.iter().filter(|s| s.human_clearance.is_some_and(|d| d < r)).count();

    let axis = config.corridor_axis();
    let mean_lateral_offset =
        axis.map(|a| poses.iter().map(|p| a.lateral_offset(&p.position())).sum::<f64>() / poses.len() as f64);
    let max_path_deviation = poses
        .iter()
        .map(|p| distance_to_path(&p.position(), &log.global_path))
        .fold(0.0, f64::max);

    Metrics {
        status: log.status,
        success,
        steps: log.steps.len(),
        duration,
        path_length,
        time_to_goal: success.then_some(duration),
        min_human_clearance: min_opt(human),
        min_obstacle_clearance,
        proxemic_intrusions: count_below(zones.personal),
        intimate_intrusions: count_below(zones.intimate),
        final_distance_to_goal: last.distance(&config.goal.pose()),
        final_distance_to_social_goal: log.social_goal.as_ref().map(|g| last.distance(&g.pose)),
        mean_lateral_offset,
        max_path_deviation,
    }
}

/// Writes `t,x,y,theta,vx,vy,vtheta,min_human_clearance`; the clearance
/// column is empty for scenes without humans.
pub fn write_trajectory_csv<W: Write>(log: &RunLog, out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["t", "x", "y", "theta", "vx", "vy", "vtheta", "min_human_clearance"])?;
    for s in &log.steps {
        let c = s.human_clearance.map(|d| d.to_string()).unwrap_or_default();
        w.write_record([
            s.t.to_string(),
            s.pose.x.to_string(),
            s.pose.y.to_string(),
            s.pose.theta.to_string(),
            s.command.vx.to_string(),
            s.command.vy.to_string(),
            s.command.vtheta.to_string(),
            c,
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objectives::SelectedObjectives;
    use crate::sim::runner::{Mode, StepRecord};
    use crate::world::Velocity;

    const SCENE: &str = r#"{
        "world": { "width_m": 6.0, "height_m": 4.0, "resolution_m": 0.1 },
        "robot": { "x": 0.0, "y": 0.0 },
        "goal":  { "x": 1.0, "y": 0.0 }
    }"#;

    fn step(k: usize, x: f64, clearance: Option<f64>) -> StepRecord {
        StepRecord {
            t: k as f64 * 0.1,
            pose: Pose::new(x, 0.0, 0.0),
            command: Velocity::ZERO,
            context: None,
            objectives: SelectedObjectives::traditional_only(),
            candidates: 0,
            feasible: 0,
            chosen_fitness: None,
            chosen_point: None,
            stuck: false,
            human_clearance: clearance,
        }
    }

    fn log(steps: Vec<StepRecord>) -> RunLog {
        RunLog {
            scenario: "m".into(),
            mode: Mode::Traditional,
            seed: 0,
            dt: 0.1,
            goal: Pose::new(1.0, 0.0, 0.0),
            global_path: vec![Pose::new(0.0, 0.0, 0.0), Pose::new(1.0, 0.0, 0.0)],
            social_goal: None,
            social_goal_step: None,
            replans: 0,
            status: Status::GoalReached,
            steps,
        }
    }

    #[test]
    fn two_step_path_length() {
        let cfg = ScenarioConfig::from_json(SCENE).unwrap();
        let m = compute_metrics(&log(vec![step(0, 0.0, None), step(1, 1.0, None)]), &cfg);
        assert_eq!(m.path_length, 1.0);
        assert!(m.success);
        assert_eq!(m.time_to_goal, Some(0.1));
        assert_eq!(m.min_human_clearance, None);
        assert_eq!(m.max_path_deviation, 0.0);
    }

    #[test]
    fn intrusions_count_steps_inside_each_zone() {
        let cfg = ScenarioConfig::from_json(SCENE).unwrap();
        let far = compute_metrics(&log(vec![step(0, 0.0, Some(1.2)), step(1, 1.0, Some(3.0))]), &cfg);
        assert_eq!((far.proxemic_intrusions, far.intimate_intrusions), (0, 0));
        let near = compute_metrics(&log(vec![step(0, 0.0, Some(2.0)), step(1, 1.0, Some(0.4))]), &cfg);
        assert_eq!((near.proxemic_intrusions, near.intimate_intrusions), (1, 1));
        assert_eq!(near.min_human_clearance, Some(0.4));
    }

    #[test]
    fn path_distance_is_to_the_polyline() {
        let path = [Pose::new(0.0, 0.0, 0.0), Pose::new(2.0, 0.0, 0.0)];
        assert_eq!(distance_to_path(&Point2::new(1.0, 0.5), &path), 0.5);
        assert_eq!(distance_to_path(&Point2::new(3.0, 0.0), &path), 1.0);
    }
}
