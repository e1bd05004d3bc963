//! Context-dependent goal synthesis: the tail of a queue and an open slot in a
//! conversational group's circle.
//!
//! Both functions sort their inputs before fitting so the result depends only
//! on the geometry, never on list order.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::world::{Human, Point2, Pose};

pub const DEFAULT_QUEUE_SPACING: f64 = 1.0;
pub const DEFAULT_SOCIAL_RADIUS: f64 = 1.2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SocialGoalKind {
    QueueTail,
    OFormationSlot,
}

/// What a social goal was derived from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Queue {
        people: usize,
        /// Unit direction of the fitted line, pointing away from the resource.
        direction: Point2,
        last_projection: f64,
    },
    Formation {
        members: usize,
        center: Point2,
        radius: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SocialGoal {
    pub pose: Pose,
    pub kind: SocialGoalKind,
    pub provenance: Provenance,
}

fn sorted_positions(people: &[Human]) -> Vec<Point2> {
    let mut pts: Vec<Point2> = people.iter().map(Human::position).collect();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts
}

fn centroid(pts: &[Point2]) -> Point2 {
    let n = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(sx, sy), p| (sx + p.x, sy + p.y));
    Point2::new(sx / n, sy / n)
}

fn unit(dx: f64, dy: f64) -> Option<Point2> {
    let n = dx.hypot(dy);
    (n > 1e-12).then(|| Point2::new(dx / n, dy / n))
}

/// Goal one `spacing` behind the last person of a queue that leads to `resource`.
///
/// People are fitted with a total-least-squares line and ordered by their
/// projection, the resource at the head. An empty queue puts the goal
/// `spacing` in front of the resource along its facing direction.
pub fn queue_goal(people: &[Human], resource: &Pose, spacing: f64) -> SocialGoal {
    assert!(spacing > 0.0, "queue spacing must be positive");
    let head = resource.position();
    let facing = |p: Point2| Pose::new(p.x, p.y, p.bearing_to(&head));

    if people.is_empty() {
        let dir = Point2::new(resource.theta.cos(), resource.theta.sin());
        let p = Point2::new(head.x + spacing * dir.x, head.y + spacing * dir.y);
        return SocialGoal {
            pose: facing(p),
            kind: SocialGoalKind::QueueTail,
            provenance: Provenance::Queue {
                people: 0,
                direction: dir,
                last_projection: 0.0,
            },
        };
    }

    let pts = sorted_positions(people);
    let c = centroid(&pts);
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for p in &pts {
        let (dx, dy) = (p.x - c.x, p.y - c.y);
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    let spread = sxx + syy;
    let principal = if spread > 1e-12 {
        let phi = 0.5 * (2.0 * sxy).atan2(sxx - syy);
        Some(Point2::new(phi.cos(), phi.sin()))
    } else {
        None
    };
    let mut dir = principal
        .or_else(|| unit(c.x - head.x, c.y - head.y))
        .unwrap_or_else(|| Point2::new(resource.theta.cos(), resource.theta.sin()));
    if (c.x - head.x) * dir.x + (c.y - head.y) * dir.y < 0.0 {
        dir = Point2::new(-dir.x, -dir.y);
    }
    let last = pts
        .iter()
        .map(|p| (p.x - c.x) * dir.x + (p.y - c.y) * dir.y)
        .fold(f64::NEG_INFINITY, f64::max);
    let s = last + spacing;
    let goal = Point2::new(c.x + s * dir.x, c.y + s * dir.y);
    SocialGoal {
        pose: facing(goal),
        kind: SocialGoalKind::QueueTail,
        provenance: Provenance::Queue {
            people: pts.len(),
            direction: dir,
            last_projection: last,
        },
    }
}

/// Least-squares circle through three or more points (Kåsa fit); `None` when
/// the points are (nearly) collinear.
fn fit_circle(pts: &[Point2], c: Point2) -> Option<Point2> {
    let (mut suu, mut suv, mut svv, mut suuu, mut svvv, mut suvv, mut svuu) = (0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
    for p in pts {
        let (u, v) = (p.x - c.x, p.y - c.y);
        suu += u * u;
        suv += u * v;
        svv += v * v;
        suuu += u * u * u;
        svvv += v * v * v;
        suvv += u * v * v;
        svuu += v * u * u;
    }
    let det = suu * svv - suv * suv;
    if det.abs() <= 1e-9 * (suu + svv).powi(2).max(1e-300) {
        return None;
    }
    let b1 = 0.5 * (suuu + suvv);
    let b2 = 0.5 * (svvv + svuu);
    let uc = (b1 * svv - b2 * suv) / det;
    let vc = (suu * b2 - suv * b1) / det;
    Some(Point2::new(c.x + uc, c.y + vc))
}

/// Slot in a group's O-formation: the midpoint of the widest angular gap
/// between members on the fitted circle, facing the circle's center.
///
/// Equal gaps resolve to the lowest midpoint angle. A lone person gets a goal
/// `social_radius` in front of them, facing them.
pub fn o_formation_goal(group: &[Human], social_radius: f64) -> SocialGoal {
    assert!(!group.is_empty(), "o_formation_goal needs at least one member");
    if group.len() == 1 {
        let h = &group[0].pose;
        let p = Point2::new(h.x + social_radius * h.theta.cos(), h.y + social_radius * h.theta.sin());
        return SocialGoal {
            pose: Pose::new(p.x, p.y, h.theta + PI),
            kind: SocialGoalKind::OFormationSlot,
            provenance: Provenance::Formation {
                members: 1,
                center: h.position(),
                radius: social_radius,
            },
        };
    }

    let pts = sorted_positions(group);
    let c = centroid(&pts);
    let center = if pts.len() >= 3 { fit_circle(&pts, c).unwrap_or(c) } else { c };
    let mean_r = pts.iter().map(|p| p.distance(&center)).sum::<f64>() / pts.len() as f64;
    let radius = if mean_r > 1e-9 { mean_r } else { social_radius };

    let mut angles: Vec<f64> = pts
        .iter()
        .map(|p| {
            let a = center.bearing_to(p).rem_euclid(TAU);
            if TAU - a < 1e-12 {
                0.0
            } else {
                a
            }
        })
        .collect();
    angles.sort_by(f64::total_cmp);

    let mut best: Option<(f64, f64)> = None; // (gap, midpoint)
    for k in 0..angles.len() {
        let start = angles[k];
        let end = if k + 1 < angles.len() { angles[k + 1] } else { angles[0] + TAU };
        let gap = end - start;
        let mid = (start + gap / 2.0).rem_euclid(TAU);
        best = match best {
            None => Some((gap, mid)),
            Some((g, m)) if gap > g + 1e-9 || ((gap - g).abs() <= 1e-9 && mid < m) => Some((gap, mid)),
            keep => keep,
        };
    }
    let (_, mid) = best.unwrap();
    let p = Point2::new(center.x + radius * mid.cos(), center.y + radius * mid.sin());
    SocialGoal {
        pose: Pose::new(p.x, p.y, p.bearing_to(&center)),
        kind: SocialGoalKind::OFormationSlot,
        provenance: Provenance::Formation {
            members: pts.len(),
            center,
            radius,
        },
    }
}
