//! Geometric world representation shared by every other module: robot,
//! humans, static obstacles and the rasterized occupancy grid.

mod grid;
mod pose;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use grid::{occupancy_cost, FootprintMap, Infeasible, OccupancyGrid, LETHAL};
pub use pose::{angle_between, integrate, normalize_angle, Point2, Pose, Velocity};

/// Radius of the disc a human body occupies when treated as an obstacle.
pub const HUMAN_BODY_RADIUS: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Drive {
    Holonomic,
    Differential,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RobotSpec {
    pub radius: f64,
    pub drive: Drive,
    pub v_max: f64,
    pub v_min: f64,
    pub vtheta_max: f64,
    pub accel_linear: f64,
    pub accel_angular: f64,
    pub goal_tolerance: f64,
}

impl Default for RobotSpec {
    fn default() -> Self {
        Self {
            radius: 0.3,
            drive: Drive::Holonomic,
            v_max: 0.5,
            v_min: 0.0,
            vtheta_max: 1.0,
            accel_linear: 1.0,
            accel_angular: 2.0,
            goal_tolerance: 0.2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Human {
    pub pose: Pose,
    /// World-frame velocity, `None` for a standing person.
    pub velocity: Option<Point2>,
    pub group_id: Option<u32>,
    /// Marked as standing in the queue for the scenario's resource.
    pub in_queue: bool,
}

impl Human {
    pub fn standing(x: f64, y: f64, theta: f64) -> Self {
        Self {
            pose: Pose::new(x, y, theta),
            velocity: None,
            group_id: None,
            in_queue: false,
        }
    }

    pub fn position(&self) -> Point2 {
        self.pose.position()
    }

    pub fn advance(&mut self, dt: f64) {
        if let Some(v) = self.velocity {
            self.pose.x += v.x * dt;
            self.pose.y += v.y * dt;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", content = "geometry", rename_all = "snake_case", deny_unknown_fields)]
pub enum Shape {
    Circle { center: Point2, radius: f64 },
    Rect { min: Point2, max: Point2 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StaticObstacle {
    pub shape: Shape,
}

impl StaticObstacle {
    pub fn new(shape: Shape) -> Self {
        Self { shape }
    }

    pub fn circle(x: f64, y: f64, radius: f64) -> Self {
        Self::new(Shape::Circle {
            center: Point2::new(x, y),
            radius,
        })
    }

    pub fn rect(x0: f64, y0: f64, x1: f64, y1: f64) -> Self {
        Self::new(Shape::Rect {
            min: Point2::new(x0, y0),
            max: Point2::new(x1, y1),
        })
    }

    pub fn is_valid(&self) -> bool {
        match &self.shape {
            Shape::Circle { radius, .. } => *radius > 0.0,
            Shape::Rect { min, max } => min.x < max.x && min.y < max.y,
        }
    }

    pub fn contains(&self, p: &Point2) -> bool {
        match &self.shape {
            Shape::Circle { center, radius } => center.distance(p) <= *radius,
            Shape::Rect { min, max } => p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y,
        }
    }

    /// Distance from `p` to the obstacle surface, zero inside.
    pub fn surface_distance(&self, p: &Point2) -> f64 {
        match &self.shape {
            Shape::Circle { center, radius } => (center.distance(p) - radius).max(0.0),
            Shape::Rect { min, max } => {
                let dx = (min.x - p.x).max(p.x - max.x).max(0.0);
                let dy = (min.y - p.y).max(p.y - max.y).max(0.0);
                dx.hypot(dy)
            }
        }
    }
}

/// Hallway centerline: a point on it, its unit direction and half-width.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorridorAxis {
    pub point: Point2,
    pub direction: Point2,
    pub half_width: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum AxisError {
    #[error("corridor axis direction must be non-zero")]
    ZeroDirection,
    #[error("corridor half-width must be positive")]
    NonPositiveHalfWidth,
}

impl CorridorAxis {
    pub fn new(point: Point2, direction: Point2, half_width: f64) -> Result<Self, AxisError> {
        let n = direction.x.hypot(direction.y);
        if n.is_nan() || n <= 0.0 {
            return Err(AxisError::ZeroDirection);
        }
        if half_width.is_nan() || half_width <= 0.0 {
            return Err(AxisError::NonPositiveHalfWidth);
        }
        Ok(Self {
            point,
            direction: Point2::new(direction.x / n, direction.y / n),
            half_width,
        })
    }

    /// Offset of `p` to the left of the axis direction.
    pub fn lateral_offset(&self, p: &Point2) -> f64 {
        let (dx, dy) = (p.x - self.point.x, p.y - self.point.y);
        self.direction.x * dy - self.direction.y * dx
    }
}

/// Snapshot of everything the planner can observe at time `t`.
#[derive(Debug, Clone)]
pub struct WorldState {
    pub t: f64,
    pub robot: Pose,
    pub velocity: Velocity,
    pub spec: RobotSpec,
    pub humans: Vec<Human>,
    pub obstacles: Vec<StaticObstacle>,
    pub grid: Arc<OccupancyGrid>,
    pub goal: Pose,
    pub corridor_axis: Option<CorridorAxis>,
}

/// Minimum center-to-center distance to any human, `+∞` without humans.
pub fn min_human_clearance(pose: &Pose, humans: &[Human]) -> f64 {
    humans
        .iter()
        .map(|h| pose.distance(&h.pose))
        .fold(f64::INFINITY, f64::min)
}

/// Distance to the nearest static obstacle surface plus [`HUMAN_BODY_RADIUS`],
/// which puts it on the same scale as [`min_human_clearance`]: a human and a
/// circular obstacle of the same footprint at the same place report the same
/// clearance. `+∞` without obstacles.
pub fn min_obstacle_clearance(pose: &Pose, obstacles: &[StaticObstacle]) -> f64 {
    let p = pose.position();
    obstacles
        .iter()
        .map(|o| o.surface_distance(&p) + HUMAN_BODY_RADIUS)
        .fold(f64::INFINITY, f64::min)
}

/// Footprint cost of the robot against humans treated as ordinary obstacles:
/// each body is a lethal disc of [`HUMAN_BODY_RADIUS`] inflated over one
/// robot radius, mirroring what [`OccupancyGrid::rasterize`] does for static
/// obstacles.
pub fn human_obstacle_cost(pose: &Pose, humans: &[Human], robot_radius: f64) -> Result<f64, Infeasible> {
    let mut worst: f64 = 0.0;
    for h in humans {
        let gap = pose.distance(&h.pose) - HUMAN_BODY_RADIUS;
        if gap <= robot_radius {
            return Err(Infeasible);
        }
        worst = worst.max((2.0 - gap / robot_radius).clamp(0.0, 1.0));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clearance_examples() {
        let p = Pose::new(0.0, 0.0, 0.0);
        assert_eq!(min_human_clearance(&p, &[Human::standing(3.0, 4.0, 0.0)]), 5.0);
        assert_eq!(min_human_clearance(&p, &[]), f64::INFINITY);
        let hs = [Human::standing(2.0, 0.0, 0.0), Human::standing(0.0, -1.5, 0.0)];
        assert_eq!(min_human_clearance(&p, &hs), 1.5);
    }

    #[test]
    fn same_footprint_reports_same_clearance() {
        let p = Pose::new(0.0, 0.0, 0.0);
        let human = [Human::standing(2.0, 0.0, 0.0)];
        let object = [StaticObstacle::circle(2.0, 0.0, HUMAN_BODY_RADIUS)];
        assert!((min_human_clearance(&p, &human) - min_obstacle_clearance(&p, &object)).abs() < 1e-12);
    }

    #[test]
    fn rect_surface_distance() {
        let r = StaticObstacle::rect(0.0, 0.0, 1.0, 1.0);
        assert_eq!(r.surface_distance(&Point2::new(0.5, 0.5)), 0.0);
        assert_eq!(r.surface_distance(&Point2::new(2.0, 0.5)), 1.0);
        assert!((r.surface_distance(&Point2::new(4.0, 5.0)) - 5.0).abs() < 1e-12);
    }

    #[test]
    fn corridor_axis_validation() {
        assert_eq!(
            CorridorAxis::new(Point2::new(0.0, 0.0), Point2::new(0.0, 0.0), 1.0),
            Err(AxisError::ZeroDirection)
        );
        let a = CorridorAxis::new(Point2::new(0.0, 2.0), Point2::new(2.0, 0.0), 1.0).unwrap();
        assert_eq!(a.direction, Point2::new(1.0, 0.0));
        assert_eq!(a.lateral_offset(&Point2::new(5.0, 2.5)), 0.5);
        assert_eq!(a.lateral_offset(&Point2::new(5.0, 1.5)), -0.5);
    }

    #[test]
    fn human_obstacle_cost_band() {
        let h = [Human::standing(0.0, 0.0, 0.0)];
        assert!(human_obstacle_cost(&Pose::new(0.5, 0.0, 0.0), &h, 0.3).is_err());
        assert_eq!(human_obstacle_cost(&Pose::new(0.85, 0.0, 0.0), &h, 0.3), Ok(0.0));
        let mid = human_obstacle_cost(&Pose::new(0.7, 0.0, 0.0), &h, 0.3).unwrap();
        assert!((mid - 0.5).abs() < 1e-9);
    }
}
