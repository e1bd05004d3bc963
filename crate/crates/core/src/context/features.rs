use serde::{Deserialize, Serialize};

use crate::world::{angle_between, Point2, WorldState};

/// Number of features in a [`FeatureVector`].
pub const FEATURE_DIM: usize = 5;

/// Column names, in vector order, used by the dataset and model files.
pub const FEATURE_NAMES: [&str; FEATURE_DIM] = [
    "interpersonal_distance",
    "relative_heading",
    "approach_rate",
    "wall_distance",
    "goal_alignment",
];

/// Wall distances saturate at this range.
pub const WALL_RANGE: f64 = 5.0;

/// Distance-based interaction features relative to the nearest human.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    /// Robot center to nearest human center, meters.
    pub interpersonal_distance: f64,
    /// `|Δθ|` between robot and human headings, radians in `[0, π]`.
    pub relative_heading: f64,
    /// Signed rate of change of the interpersonal distance, m/s.
    pub approach_rate: f64,
    /// Distance to the nearest lethal cell or map edge, capped at [`WALL_RANGE`].
    pub wall_distance: f64,
    /// Angle between the robot→goal and robot→human bearings, `[0, π]`.
    pub goal_alignment: f64,
}

impl FeatureVector {
    pub fn to_array(&self) -> [f64; FEATURE_DIM] {
        [
            self.interpersonal_distance,
            self.relative_heading,
            self.approach_rate,
            self.wall_distance,
            self.goal_alignment,
        ]
    }

    pub fn from_slice(v: &[f64]) -> Self {
        assert_eq!(v.len(), FEATURE_DIM);
        Self {
            interpersonal_distance: v[0],
            relative_heading: v[1],
            approach_rate: v[2],
            wall_distance: v[3],
            goal_alignment: v[4],
        }
    }
}

/// The scene has nobody to interact with; classification is bypassed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("no humans in the scene")]
pub struct NoHumans;

pub fn extract_features(world: &WorldState, previous: Option<&WorldState>) -> Result<FeatureVector, NoHumans> {
    let robot = world.robot.position();
    let (idx, human) = world
        .humans
        .iter()
        .enumerate()
        .min_by(|a, b| robot.distance(&a.1.position()).total_cmp(&robot.distance(&b.1.position())))
        .ok_or(NoHumans)?;
    let distance = robot.distance(&human.position());

    let approach_rate = match previous {
        Some(prev) if prev.t < world.t && idx < prev.humans.len() => {
            let before = prev.robot.position().distance(&prev.humans[idx].position());
            (distance - before) / (world.t - prev.t)
        }
        _ => 0.0,
    };

    let goal_alignment = if distance > 0.0 && robot.distance(&world.goal.position()) > 0.0 {
        angle_between(robot.bearing_to(&world.goal.position()), robot.bearing_to(&human.position()))
    } else {
        0.0
    };

    Ok(FeatureVector {
        interpersonal_distance: distance,
        relative_heading: angle_between(world.robot.theta, human.pose.theta),
        approach_rate,
        wall_distance: wall_distance(world, &robot),
        goal_alignment,
    })
}

fn wall_distance(world: &WorldState, p: &Point2) -> f64 {
    let g = &world.grid;
    let edge = (p.x - g.origin.x)
        .min(p.y - g.origin.y)
        .min(g.origin.x + g.width_m() - p.x)
        .min(g.origin.y + g.height_m() - p.y)
        .max(0.0);
    let lethal = g.distance_to_lethal(p, WALL_RANGE).unwrap_or(f64::INFINITY);
    edge.min(lethal).min(WALL_RANGE)
}
