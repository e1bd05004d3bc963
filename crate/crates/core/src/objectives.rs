//! Objective library: the weighted traditional cost, the social objectives,
//! and the selector that turns a context posterior into the active,
//! weighted objective set.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::context::{ContextLabel, Posterior};
use crate::world::{angle_between, occupancy_cost, CorridorAxis, Human, Infeasible, OccupancyGrid, Pose};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraditionalWeights {
    /// Distance to the global path.
    pub alpha: f64,
    /// Distance to the goal.
    pub beta: f64,
    /// Heading error toward the goal.
    pub gamma: f64,
    /// Occupancy cost.
    pub delta: f64,
}

impl Default for TraditionalWeights {
    fn default() -> Self {
        Self {
            alpha: 0.6,
            beta: 0.8,
            gamma: 0.1,
            delta: 0.3,
        }
    }
}

impl TraditionalWeights {
    pub fn is_valid(&self) -> bool {
        let w = [self.alpha, self.beta, self.gamma, self.delta];
        w.iter().all(|v| *v >= 0.0 && v.is_finite()) && w.iter().any(|v| *v > 0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObjectiveId {
    TraditionalCost,
    PersonalSpace,
    RightSide,
    SocialGoalDistance,
}

/// Active objectives with their weights, `TraditionalCost` first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SelectedObjectives(pub Vec<(ObjectiveId, f64)>);

impl SelectedObjectives {
    pub fn traditional_only() -> Self {
        Self(vec![(ObjectiveId::TraditionalCost, 1.0)])
    }

    pub fn weight(&self, id: ObjectiveId) -> Option<f64> {
        self.0.iter().find(|(o, _)| *o == id).map(|(_, w)| *w)
    }

    pub fn contains(&self, id: ObjectiveId) -> bool {
        self.weight(id).is_some()
    }

    pub fn ids(&self) -> impl Iterator<Item = ObjectiveId> + '_ {
        self.0.iter().map(|(o, _)| *o)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn without(mut self, id: ObjectiveId) -> Self {
        self.0.retain(|(o, _)| *o != id);
        self
    }
}

/// Hall's proxemic zone radii plus the width of the personal-space Gaussian.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProxemicZones {
    pub intimate: f64,
    pub personal: f64,
    pub social: f64,
    pub gaussian_sigma: f64,
}

impl Default for ProxemicZones {
    fn default() -> Self {
        Self {
            intimate: 0.45,
            personal: 1.2,
            social: 3.6,
            gaussian_sigma: 0.6,
        }
    }
}

impl ProxemicZones {
    pub fn is_valid(&self) -> bool {
        0.0 < self.intimate && self.intimate < self.personal && self.personal < self.social && self.gaussian_sigma > 0.0
    }
}

/// The four unweighted terms of the traditional cost.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TraditionalTerms {
    pub path: f64,
    pub goal: f64,
    pub heading: f64,
    pub occupancy: f64,
}

impl TraditionalTerms {
    pub fn weighted(&self, w: &TraditionalWeights) -> f64 {
        w.alpha * self.path + w.beta * self.goal + w.gamma * self.heading + w.delta * self.occupancy
    }
}

/// Computes the traditional terms of a rollout. `occupancy` scores a single
/// pose and decides feasibility; the worst pose sets the occupancy term.
pub fn traditional_terms(
    poses: &[Pose],
    global_path: &[Pose],
    goal: &Pose,
    mut occupancy: impl FnMut(&Pose) -> Result<f64, Infeasible>,
) -> Result<TraditionalTerms, Infeasible> {
    let end = poses.last().expect("trajectory must not be empty");
    let mut occ: f64 = 0.0;
    for p in poses {
        occ = occ.max(occupancy(p)?);
    }
    let path = global_path
        .iter()
        .map(|g| g.distance(end))
        .fold(f64::INFINITY, f64::min);
    let goal_dist = end.distance(goal);
    let heading = if goal_dist > 0.0 {
        angle_between(end.theta, end.position().bearing_to(&goal.position()))
    } else {
        0.0
    };
    Ok(TraditionalTerms {
        path: if path.is_finite() { path } else { 0.0 },
        goal: goal_dist,
        heading,
        occupancy: occ,
    })
}

/// Weighted traditional cost of a rollout against the static grid.
pub fn traditional_cost(
    poses: &[Pose],
    global_path: &[Pose],
    goal: &Pose,
    grid: &OccupancyGrid,
    footprint_radius: f64,
    weights: &TraditionalWeights,
) -> Result<f64, Infeasible> {
    traditional_terms(poses, global_path, goal, |p| occupancy_cost(grid, p, footprint_radius)).map(|t| t.weighted(weights))
}

/// Mean over poses of `Σ_h exp(-d² / 2σ²)`.
pub fn personal_space_cost(poses: &[Pose], humans: &[Human], zones: &ProxemicZones) -> f64 {
    if humans.is_empty() || poses.is_empty() {
        return 0.0;
    }
    let k = 1.0 / (2.0 * zones.gaussian_sigma * zones.gaussian_sigma);
    let total: f64 = poses
        .iter()
        .map(|p| {
            humans
                .iter()
                .map(|h| {
                    let (dx, dy) = (p.x - h.pose.x, p.y - h.pose.y);
                    (-(dx * dx + dy * dy) * k).exp()
                })
                .sum::<f64>()
        })
        .sum();
    total / poses.len() as f64
}

/// Mean over poses of the normalized leftward offset from the corridor
/// centerline, measured relative to each pose's direction of travel.
pub fn right_side_cost(poses: &[Pose], axis: &CorridorAxis) -> f64 {
    if poses.is_empty() {
        return 0.0;
    }
    let total: f64 = poses
        .iter()
        .map(|p| {
            let along = axis.direction.x * p.theta.cos() + axis.direction.y * p.theta.sin();
            let sign = if along >= 0.0 { 1.0 } else { -1.0 };
            let s = sign * axis.lateral_offset(&p.position());
            (s.max(0.0) / axis.half_width).clamp(0.0, 1.0)
        })
        .sum();
    total / poses.len() as f64
}

/// Endpoint distance to the social goal relative to the start distance, in `[0, 2]`.
pub fn social_goal_cost(poses: &[Pose], social_goal: &Pose) -> f64 {
    let (Some(start), Some(end)) = (poses.first(), poses.last()) else {
        return 0.0;
    };
    let d_start = start.distance(social_goal);
    let d_end = end.distance(social_goal);
    if d_start <= 0.0 {
        return if d_end <= 0.0 { 0.0 } else { 2.0 };
    }
    (d_end / d_start).clamp(0.0, 2.0)
}

/// Which social objectives each context switches on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ActivationTable(pub BTreeMap<ContextLabel, Vec<ObjectiveId>>);

impl Default for ActivationTable {
    fn default() -> Self {
        use ContextLabel::*;
        use ObjectiveId::*;
        let mut m = BTreeMap::new();
        m.insert(Passing, vec![TraditionalCost, PersonalSpace, RightSide]);
        m.insert(Meeting, vec![TraditionalCost, PersonalSpace]);
        m.insert(WalkingTogetherToward, vec![TraditionalCost, PersonalSpace]);
        m.insert(WalkingTogetherAway, vec![TraditionalCost, PersonalSpace]);
        m.insert(QueueWaiting, vec![TraditionalCost, PersonalSpace, SocialGoalDistance]);
        m.insert(GroupJoining, vec![TraditionalCost, PersonalSpace, SocialGoalDistance]);
        Self(m)
    }
}

impl ActivationTable {
    pub fn activates(&self, label: ContextLabel, id: ObjectiveId) -> bool {
        self.0.get(&label).is_some_and(|v| v.contains(&id))
    }
}

/// Objectives whose posterior-mass weight falls below this are dropped.
pub const DEFAULT_DROP_THRESHOLD: f64 = 0.05;

/// Maps a context posterior to weighted objectives. `None` stands for a scene
/// without humans and yields the traditional cost alone. `RightSide` also
/// requires the world to define a corridor axis.
pub fn select_objectives(
    posterior: Option<&Posterior>,
    corridor_axis: Option<&CorridorAxis>,
    table: &ActivationTable,
    drop_threshold: f64,
) -> SelectedObjectives {
    let Some(posterior) = posterior else {
        return SelectedObjectives::traditional_only();
    };
    let total = posterior.total();
    assert!((total - 1.0).abs() <= 1e-6, "posterior sums to {total}, expected 1");
    let mut out = SelectedObjectives::traditional_only();
    for id in [ObjectiveId::PersonalSpace, ObjectiveId::RightSide, ObjectiveId::SocialGoalDistance] {
        if id == ObjectiveId::RightSide && corridor_axis.is_none() {
            continue;
        }
        let w: f64 = ContextLabel::ALL
            .iter()
            .filter(|l| table.activates(**l, id))
            .map(|l| posterior.get(*l))
            .sum();
        if w >= drop_threshold && w > 0.0 {
            out.0.push((id, w.min(1.0)));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::world::{Point2, StaticObstacle};

    fn axis() -> CorridorAxis {
        CorridorAxis::new(Point2::new(0.0, 0.0), Point2::new(1.0, 0.0), 1.0).unwrap()
    }

    fn line(y: f64, theta: f64) -> Vec<Pose> {
        (0..5).map(|i| Pose::new(i as f64 * 0.2, y, theta)).collect()
    }

    #[test]
    fn traditional_zero_at_goal_on_path() {
        let grid = OccupancyGrid::empty(10.0, 10.0, 0.1);
        let goal = Pose::new(5.0, 5.0, 0.0);
        let traj = vec![Pose::new(4.0, 5.0, 0.0), Pose::new(5.0, 5.0, 0.0)];
        let path = vec![Pose::new(3.0, 5.0, 0.0), goal];
        let c = traditional_cost(&traj, &path, &goal, &grid, 0.3, &TraditionalWeights::default()).unwrap();
        assert_eq!(c, 0.0);
    }

    #[test]
    fn traditional_linear_combination() {
        let t = TraditionalTerms {
            path: 0.5,
            goal: 2.0,
            heading: 0.1,
            occupancy: 0.2,
        };
        let ones = TraditionalWeights {
            alpha: 1.0,
            beta: 1.0,
            gamma: 1.0,
            delta: 1.0,
        };
        assert!((t.weighted(&ones) - 2.8).abs() < 1e-12);
        let w = TraditionalWeights::default();
        let w2 = TraditionalWeights {
            alpha: 2.0 * w.alpha,
            beta: 2.0 * w.beta,
            gamma: 2.0 * w.gamma,
            delta: 2.0 * w.delta,
        };
        assert!((t.weighted(&w2) - 2.0 * t.weighted(&w)).abs() < 1e-12);
    }

    #[test]
    fn traditional_infeasible_propagates() {
        let grid = OccupancyGrid::rasterize(10.0, 10.0, 0.1, &[StaticObstacle::rect(4.0, 4.0, 6.0, 6.0)], 0.3);
        let traj = vec![Pose::new(3.0, 5.0, 0.0), Pose::new(5.0, 5.0, 0.0)];
        let r = traditional_cost(&traj, &[], &Pose::new(9.0, 5.0, 0.0), &grid, 0.3, &TraditionalWeights::default());
        assert_eq!(r, Err(Infeasible));
    }

    #[test]
    fn personal_space_examples() {
        let z = ProxemicZones::default();
        let h = [Human::standing(0.0, 0.0, 0.0)];
        assert_eq!(personal_space_cost(&[Pose::new(0.0, 0.0, 0.0)], &h, &z), 1.0);
        let c = personal_space_cost(&[Pose::new(0.6, 0.0, 0.0)], &h, &z);
        assert!((c - (-0.5f64).exp()).abs() < 1e-12);
        let far: Vec<_> = (0..5).map(|i| Pose::new(3.6 + i as f64, 0.0, 0.0)).collect();
        assert!(personal_space_cost(&far, &h, &z) < 0.01);
        assert_eq!(personal_space_cost(&far, &[], &z), 0.0);
    }

    #[test]
    fn right_side_examples() {
        assert_eq!(right_side_cost(&line(-0.5, 0.0), &axis()), 0.0);
        assert!((right_side_cost(&line(0.5, 0.0), &axis()) - 0.5).abs() < 1e-12);
        assert_eq!(right_side_cost(&line(0.0, 0.0), &axis()), 0.0);
        // travelling the other way, +y is the right-hand side
        assert_eq!(right_side_cost(&line(0.5, std::f64::consts::PI), &axis()), 0.0);
        assert!((right_side_cost(&line(-3.0, std::f64::consts::PI), &axis()) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn social_goal_examples() {
        let goal = Pose::new(4.0, 0.0, 0.0);
        let start = Pose::new(0.0, 0.0, 0.0);
        assert_eq!(social_goal_cost(&[start, goal], &goal), 0.0);
        assert_eq!(social_goal_cost(&[start, start], &goal), 1.0);
        assert_eq!(social_goal_cost(&[start, Pose::new(-9.0, 0.0, 0.0)], &goal), 2.0);
    }

    #[test]
    fn selection_table() {
        let t = ActivationTable::default();
        let a = axis();
        let s = select_objectives(Some(&Posterior::one_hot(ContextLabel::Passing)), Some(&a), &t, DEFAULT_DROP_THRESHOLD);
        assert_eq!(
            s.0,
            vec![
                (ObjectiveId::TraditionalCost, 1.0),
                (ObjectiveId::PersonalSpace, 1.0),
                (ObjectiveId::RightSide, 1.0)
            ]
        );
        let half = Posterior::from_pairs(&[(ContextLabel::Passing, 0.5), (ContextLabel::Meeting, 0.5)]);
        let s = select_objectives(Some(&half), Some(&a), &t, DEFAULT_DROP_THRESHOLD);
        assert_eq!(s.weight(ObjectiveId::PersonalSpace), Some(1.0));
        assert_eq!(s.weight(ObjectiveId::RightSide), Some(0.5));

        let q = select_objectives(Some(&Posterior::one_hot(ContextLabel::QueueWaiting)), Some(&a), &t, DEFAULT_DROP_THRESHOLD);
        assert_eq!(q.weight(ObjectiveId::SocialGoalDistance), Some(1.0));
        assert!(!q.contains(ObjectiveId::RightSide));

        assert_eq!(select_objectives(None, Some(&a), &t, DEFAULT_DROP_THRESHOLD), SelectedObjectives::traditional_only());
    }

    #[test]
    fn low_mass_objectives_are_dropped() {
        let t = ActivationTable::default();
        let p = Posterior::from_pairs(&[(ContextLabel::Meeting, 0.97), (ContextLabel::Passing, 0.03)]);
        let s = select_objectives(Some(&p), Some(&axis()), &t, DEFAULT_DROP_THRESHOLD);
        assert!(!s.contains(ObjectiveId::RightSide));
        // without a corridor the right-side objective never activates
        let s = select_objectives(Some(&Posterior::one_hot(ContextLabel::Passing)), None, &t, DEFAULT_DROP_THRESHOLD);
        assert!(!s.contains(ObjectiveId::RightSide));
    }

    #[test]
    #[should_panic]
    fn malformed_posterior_panics() {
        let p = Posterior::from_pairs(&[(ContextLabel::Meeting, 0.7)]);
        select_objectives(Some(&p), None, &ActivationTable::default(), DEFAULT_DROP_THRESHOLD);
    }
}
