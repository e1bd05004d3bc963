use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

/// Wraps an angle into `(-π, π]`.
pub fn normalize_angle(theta: f64) -> f64 {
    let mut a = theta.rem_euclid(2.0 * PI);
    if a > PI {
        a -= 2.0 * PI;
    }
    a
}

/// Absolute angular difference in `[0, π]`.
pub fn angle_between(a: f64, b: f64) -> f64 {
    normalize_angle(a - b).abs()
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(&self, other: &Point2) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn bearing_to(&self, other: &Point2) -> f64 {
        (other.y - self.y).atan2(other.x - self.x)
    }
}

/// Planar pose. `theta` is kept in `(-π, π]` by every constructor in this crate.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Pose {
    pub x: f64,
    pub y: f64,
    pub theta: f64,
}

impl Pose {
    pub fn new(x: f64, y: f64, theta: f64) -> Self {
        Self {
            x,
            y,
            theta: normalize_angle(theta),
        }
    }

    pub fn position(&self) -> Point2 {
        Point2::new(self.x, self.y)
    }

    pub fn distance(&self, other: &Pose) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn distance_to_point(&self, p: &Point2) -> f64 {
        (self.x - p.x).hypot(self.y - p.y)
    }
}

/// Body-frame velocity command.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Velocity {
    pub vx: f64,
    pub vy: f64,
    pub vtheta: f64,
}

impl Velocity {
    pub const ZERO: Velocity = Velocity {
        vx: 0.0,
        vy: 0.0,
        vtheta: 0.0,
    };

    pub const fn new(vx: f64, vy: f64, vtheta: f64) -> Self {
        Self { vx, vy, vtheta }
    }

    pub fn is_zero(&self) -> bool {
        self.vx == 0.0 && self.vy == 0.0 && self.vtheta == 0.0
    }
}

/// `sin(x) / x`, accurate down to zero.
fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// Closed-form integration of a constant body-frame command for `t` seconds.
///
/// With `vtheta == 0` the motion is a straight segment, otherwise a circular
/// arc (the lateral component rotates with the body as well). The arc uses
/// the half-angle form so tiny turn rates stay well conditioned.
pub fn integrate(start: &Pose, cmd: &Velocity, t: f64) -> Pose {
    let th0 = start.theta;
    if cmd.vtheta == 0.0 {
        let (s, c) = th0.sin_cos();
        return Pose {
            x: start.x + (cmd.vx * c - cmd.vy * s) * t,
            y: start.y + (cmd.vx * s + cmd.vy * c) * t,
            theta: th0,
        };
    }
    let half = 0.5 * cmd.vtheta * t;
    let chord = t * sinc(half);
    let (sm, cm) = (th0 + half).sin_cos();
    let int_cos = chord * cm;
    let int_sin = chord * sm;
    Pose {
        x: start.x + cmd.vx * int_cos - cmd.vy * int_sin,
        y: start.y + cmd.vx * int_sin + cmd.vy * int_cos,
        theta: normalize_angle(th0 + cmd.vtheta * t),
    }
}
