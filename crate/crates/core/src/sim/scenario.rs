//! Scenario files: parsing with field-path errors, validation, dotted-path
//! overrides and construction of the initial world.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::context::ContextLabel;
use crate::objectives::{ProxemicZones, TraditionalWeights, DEFAULT_DROP_THRESHOLD};
use crate::planner::PlannerConfig;
use crate::socialgoal::{DEFAULT_QUEUE_SPACING, DEFAULT_SOCIAL_RADIUS};
use crate::world::{
    CorridorAxis, Drive, Human, OccupancyGrid, Point2, Pose, RobotSpec, StaticObstacle, Velocity, WorldState,
};

/// A scenario that failed to parse or validate. `path` names the offending
/// field in dotted form (`robot.radius`, `humans[2].x`).
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{path}: {message}")]
pub struct ConfigError {
    pub path: String,
    pub message: String,
}

impl ConfigError {
    pub fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            path: path.into(),
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorldConfig {
    pub width_m: f64,
    pub height_m: f64,
    pub resolution_m: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PoseConfig {
    pub x: f64,
    pub y: f64,
    #[serde(default)]
    pub theta: f64,
}

impl PoseConfig {
    pub fn pose(&self) -> Pose {
        Pose::new(self.x, self.y, self.theta)
    }
}

fn d_radius() -> f64 {
    RobotSpec::default().radius
}
fn d_drive() -> Drive {
    RobotSpec::default().drive
}
fn d_v_max() -> f64 {
    RobotSpec::default().v_max
}
fn d_v_min() -> f64 {
    RobotSpec::default().v_min
}
fn d_vtheta_max() -> f64 {
    RobotSpec::default().vtheta_max
}
fn d_accel_linear() -> f64 {
    RobotSpec::default().accel_linear
}
fn d_accel_angular() -> f64 {
    RobotSpec::default().accel_angular
}
fn d_goal_tolerance() -> f64 {
    RobotSpec::default().goal_tolerance
}

/// Start pose plus the robot's spec; omitted spec fields take the defaults.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RobotConfig {
    pub x: f64,
    pub y: f64,
    #[serde(default)]
    pub theta: f64,
    #[serde(default = "d_radius")]
    pub radius: f64,
    #[serde(default = "d_drive")]
    pub drive: Drive,
    #[serde(default = "d_v_max")]
    pub v_max: f64,
    #[serde(default = "d_v_min")]
    pub v_min: f64,
    #[serde(default = "d_vtheta_max")]
    pub vtheta_max: f64,
    #[serde(default = "d_accel_linear")]
    pub accel_linear: f64,
    #[serde(default = "d_accel_angular")]
    pub accel_angular: f64,
    #[serde(default = "d_goal_tolerance")]
    pub goal_tolerance: f64,
}

impl RobotConfig {
    pub fn pose(&self) -> Pose {
        Pose::new(self.x, self.y, self.theta)
    }

    pub fn spec(&self) -> RobotSpec {
        RobotSpec {
            radius: self.radius,
            drive: self.drive,
            v_max: self.v_max,
            v_min: self.v_min,
            vtheta_max: self.vtheta_max,
            accel_linear: self.accel_linear,
            accel_angular: self.accel_angular,
            goal_tolerance: self.goal_tolerance,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HumanConfig {
    pub x: f64,
    pub y: f64,
    #[serde(default)]
    pub theta: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vx: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vy: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group_id: Option<u32>,
    /// Stands in the queue that leads to the scenario's resource.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub in_queue: bool,
}

impl HumanConfig {
    pub fn human(&self) -> Human {
        let velocity = match (self.vx, self.vy) {
            (None, None) => None,
            (vx, vy) => Some(Point2::new(vx.unwrap_or(0.0), vy.unwrap_or(0.0))),
        };
        Human {
            pose: Pose::new(self.x, self.y, self.theta),
            velocity,
            group_id: self.group_id,
            in_queue: self.in_queue,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisConfig {
    pub x: f64,
    pub y: f64,
    pub dx: f64,
    pub dy: f64,
    pub half_width: f64,
}

/// Head of a queue; `theta` is the direction the queue extends in when
/// nobody is waiting yet.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResourceConfig {
    pub x: f64,
    pub y: f64,
    #[serde(default)]
    pub theta: f64,
}

fn d_spacing() -> f64 {
    DEFAULT_QUEUE_SPACING
}
fn d_social_radius() -> f64 {
    DEFAULT_SOCIAL_RADIUS
}
fn d_drop() -> f64 {
    DEFAULT_DROP_THRESHOLD
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObjectiveConfig {
    #[serde(default)]
    pub weights: TraditionalWeights,
    #[serde(default)]
    pub zones: ProxemicZones,
    #[serde(default = "d_spacing")]
    pub queue_spacing: f64,
    #[serde(default = "d_social_radius")]
    pub social_radius: f64,
    #[serde(default = "d_drop")]
    pub drop_threshold: f64,
    /// Restricts the objective set to the traditional cost in every mode.
    #[serde(default)]
    pub traditional_only: bool,
}

impl Default for ObjectiveConfig {
    fn default() -> Self {
        Self {
            weights: TraditionalWeights::default(),
            zones: ProxemicZones::default(),
            queue_spacing: DEFAULT_QUEUE_SPACING,
            social_radius: DEFAULT_SOCIAL_RADIUS,
            drop_threshold: DEFAULT_DROP_THRESHOLD,
            traditional_only: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default)]
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub world: WorldConfig,
    pub robot: RobotConfig,
    pub goal: PoseConfig,
    #[serde(default)]
    pub humans: Vec<HumanConfig>,
    #[serde(default)]
    pub obstacles: Vec<StaticObstacle>,
    /// Interaction the scenario is meant to show; informational only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub context_hint: Option<ContextLabel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub corridor_axis: Option<AxisConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resource: Option<ResourceConfig>,
    #[serde(default)]
    pub planner: PlannerConfig,
    #[serde(default)]
    pub objectives: ObjectiveConfig,
}

fn from_value(value: Value) -> Result<ScenarioConfig, ConfigError> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let path = e.path().to_string();
        ConfigError::new(if path == "." { String::new() } else { path }, e.into_inner().to_string())
    })
}

/// Sets `key` (dotted path, array elements by index) to `raw`, which is read
/// as JSON and falls back to a plain string.
pub fn apply_override(doc: &mut Value, key: &str, raw: &str) -> Result<(), ConfigError> {
    let value: Value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
    let mut cur = doc;
    for part in key.split('.') {
        if part.is_empty() {
            return Err(ConfigError::new(key, "empty path segment"));
        }
        if cur.is_null() {
            *cur = Value::Object(Default::default());
        }
        cur = match cur {
            Value::Object(map) => map.entry(part.to_string()).or_insert(Value::Null),
            Value::Array(items) => {
                let len = items.len();
                let idx: usize = part
                    .parse()
                    .map_err(|_| ConfigError::new(key, format!("`{part}` is not an array index")))?;
                items
                    .get_mut(idx)
                    .ok_or_else(|| ConfigError::new(key, format!("index {idx} out of range ({len} elements)")))?
            }
            _ => return Err(ConfigError::new(key, format!("`{part}` is inside a scalar"))),
        };
    }
    *cur = value;
    Ok(())
}

/// Splits `key=value`.
pub fn parse_override(arg: &str) -> Result<(String, String), ConfigError> {
    match arg.split_once('=') {
        Some((k, v)) if !k.trim().is_empty() => Ok((k.trim().to_string(), v.to_string())),
        _ => Err(ConfigError::new(arg, "override must look like key=value")),
    }
}

fn check(ok: bool, path: &str, message: &str) -> Result<(), ConfigError> {
    if ok {
        Ok(())
    } else {
        Err(ConfigError::new(path, message))
    }
}

fn finite(path: &str, values: &[f64]) -> Result<(), ConfigError> {
    check(values.iter().all(|v| v.is_finite()), path, "values must be finite")
}

impl ScenarioConfig {
    /// Parses and validates a scenario document.
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        Self::from_json_with_overrides(text, &[])
    }

    /// Parses, applies `key=value` overrides in order, then validates.
    pub fn from_json_with_overrides(text: &str, overrides: &[(String, String)]) -> Result<Self, ConfigError> {
        let mut doc: Value = serde_json::from_str(text).map_err(|e| ConfigError::new("", e.to_string()))?;
        for (k, v) in overrides {
            apply_override(&mut doc, k, v)?;
        }
        let cfg = from_value(doc)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path, overrides: &[(String, String)]) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::new("", format!("{}: {e}", path.display())))?;
        let mut cfg = Self::from_json_with_overrides(&text, overrides)?;
        if cfg.name.is_empty() {
            cfg.name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        }
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }

    fn inside(&self, x: f64, y: f64) -> bool {
        (0.0..=self.world.width_m).contains(&x) && (0.0..=self.world.height_m).contains(&y)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let w = &self.world;
        finite("world", &[w.width_m, w.height_m, w.resolution_m])?;
        check(w.width_m > 0.0, "world.width_m", "must be positive")?;
        check(w.height_m > 0.0, "world.height_m", "must be positive")?;
        check(w.resolution_m > 0.0, "world.resolution_m", "must be positive")?;
        check(
            w.resolution_m <= w.width_m.min(w.height_m),
            "world.resolution_m",
            "must not exceed the world size",
        )?;

        let r = &self.robot;
        finite(
            "robot",
            &[r.x, r.y, r.theta, r.radius, r.v_max, r.v_min, r.vtheta_max, r.accel_linear, r.accel_angular, r.goal_tolerance],
        )?;
        check(r.radius > 0.0, "robot.radius", "must be positive")?;
        check(r.v_max > 0.0, "robot.v_max", "must be positive")?;
        check(r.v_min <= r.v_max && r.v_min >= -r.v_max, "robot.v_min", "must lie in [-v_max, v_max]")?;
        check(r.vtheta_max > 0.0, "robot.vtheta_max", "must be positive")?;
        check(r.accel_linear > 0.0, "robot.accel_linear", "must be positive")?;
        check(r.accel_angular > 0.0, "robot.accel_angular", "must be positive")?;
        check(r.goal_tolerance > 0.0, "robot.goal_tolerance", "must be positive")?;
        check(self.inside(r.x, r.y), "robot", "start lies outside the world")?;

        finite("goal", &[self.goal.x, self.goal.y, self.goal.theta])?;
        check(self.inside(self.goal.x, self.goal.y), "goal", "lies outside the world")?;

        for (i, h) in self.humans.iter().enumerate() {
            let p = format!("humans[{i}]");
            finite(&p, &[h.x, h.y, h.theta, h.vx.unwrap_or(0.0), h.vy.unwrap_or(0.0)])?;
            check(self.inside(h.x, h.y), &p, "lies outside the world")?;
        }
        for (i, o) in self.obstacles.iter().enumerate() {
            check(o.is_valid(), &format!("obstacles[{i}]"), "degenerate shape")?;
        }
        if let Some(a) = &self.corridor_axis {
            finite("corridor_axis", &[a.x, a.y, a.dx, a.dy, a.half_width])?;
            CorridorAxis::new(Point2::new(a.x, a.y), Point2::new(a.dx, a.dy), a.half_width)
                .map_err(|e| ConfigError::new("corridor_axis", e.to_string()))?;
        }
        if let Some(res) = &self.resource {
            finite("resource", &[res.x, res.y, res.theta])?;
            check(self.inside(res.x, res.y), "resource", "lies outside the world")?;
        }
        check(self.planner.is_valid(), "planner", "needs dt > 0, horizon >= dt and at least one sample per axis")?;
        let o = &self.objectives;
        check(o.weights.is_valid(), "objectives.weights", "must be finite, non-negative and not all zero")?;
        check(o.zones.is_valid(), "objectives.zones", "radii must be increasing and positive")?;
        check(o.queue_spacing > 0.0 && o.queue_spacing.is_finite(), "objectives.queue_spacing", "must be positive")?;
        check(o.social_radius > 0.0 && o.social_radius.is_finite(), "objectives.social_radius", "must be positive")?;
        check((0.0..1.0).contains(&o.drop_threshold), "objectives.drop_threshold", "must lie in [0, 1)")?;
        Ok(())
    }

    pub fn corridor_axis(&self) -> Option<CorridorAxis> {
        self.corridor_axis
            .and_then(|a| CorridorAxis::new(Point2::new(a.x, a.y), Point2::new(a.dx, a.dy), a.half_width).ok())
    }

    pub fn humans(&self) -> Vec<Human> {
        self.humans.iter().map(HumanConfig::human).collect()
    }

    /// Static obstacles rasterized with inflation over one robot radius.
    pub fn rasterize(&self) -> OccupancyGrid {
        OccupancyGrid::rasterize(
            self.world.width_m,
            self.world.height_m,
            self.world.resolution_m,
            &self.obstacles,
            self.robot.radius,
        )
    }

    /// World at `t = 0` over a freshly rasterized grid.
    pub fn initial_world(&self) -> WorldState {
        self.initial_world_on(Arc::new(self.rasterize()))
    }

    pub fn initial_world_on(&self, grid: Arc<OccupancyGrid>) -> WorldState {
        WorldState {
            t: 0.0,
            robot: self.robot.pose(),
            velocity: Velocity::ZERO,
            spec: self.robot.spec(),
            humans: self.humans(),
            obstacles: self.obstacles.clone(),
            grid,
            goal: self.goal.pose(),
            corridor_axis: self.corridor_axis(),
        }
    }
}

/// Grid for a scenario, failing on a bad world block.
pub fn rasterize(scenario: &ScenarioConfig) -> Result<OccupancyGrid, ConfigError> {
    let w = &scenario.world;
    check(w.resolution_m > 0.0 && w.resolution_m.is_finite(), "world.resolution_m", "must be positive")?;
    check(w.width_m > 0.0 && w.height_m > 0.0, "world", "bounds must be positive")?;
    Ok(scenario.rasterize())
}
