//! Top-down scene plots.
//!
//! Every document is `WIDTH` x `HEIGHT` pixels. The world is scaled uniformly
//! by `s = min((WIDTH - 2M) / width_m, (HEIGHT - 2M) / height_m)` and drawn
//! with its origin at the bottom-left, so a world point `(x, y)` lands at
//! `px = M + x * s`, `py = M + (height_m - y) * s` with `M = MARGIN`.

use std::fmt::Write;

use socnav::sim::{Mode, RunLog, ScenarioConfig};
use socnav::world::{Pose, Shape};

pub const WIDTH: f64 = 800.0;
pub const HEIGHT: f64 = 600.0;
pub const MARGIN: f64 = 20.0;

const STYLE: &str = "\
.world{fill:#ffffff;stroke:#000000;stroke-width:2}
.obstacle{fill:#000000}
.human{fill:#f4a261;stroke:#6b3a10;stroke-width:1}
.heading{stroke:#6b3a10;stroke-width:2}
.proxemic{fill:none;stroke:#e76f51;stroke-width:1;stroke-dasharray:4 3}
.traditional{fill:none;stroke:#1d3557;stroke-width:2}
.paccet{fill:none;stroke:#2a9d8f;stroke-width:2}
.start{fill:#1d3557}
.goal{fill:#e9c46a;stroke:#000000;stroke-width:1}
.social-goal{fill:#2a9d8f;stroke:#000000;stroke-width:1}";

struct Frame {
    scale: f64,
    height_m: f64,
}

impl Frame {
    fn new(config: &ScenarioConfig) -> Self {
        let w = &config.world;
        let scale = ((WIDTH - 2.0 * MARGIN) / w.width_m).min((HEIGHT - 2.0 * MARGIN) / w.height_m);
        Self {
            scale,
            height_m: w.height_m,
        }
    }

    fn px(&self, x: f64, y: f64) -> (f64, f64) {
        (MARGIN + x * self.scale, MARGIN + (self.height_m - y) * self.scale)
    }

    fn len(&self, d: f64) -> f64 {
        d * self.scale
    }
}

fn star(f: &Frame, p: &Pose, r_px: f64) -> String {
    let (cx, cy) = f.px(p.x, p.y);
    let mut pts = Vec::with_capacity(10);
    for k in 0..10 {
        let r = if k % 2 == 0 { r_px } else { r_px * 0.45 };
        let a = -std::f64::consts::FRAC_PI_2 + k as f64 * std::f64::consts::PI / 5.0;
        pts.push(format!("{:.3},{:.3}", cx + r * a.cos(), cy + r * a.sin()));
    }
    pts.join(" ")
}

/// Renders one or two run logs of the same scenario over its scene. People
/// are drawn where they stood at the start of the run.
pub fn render_svg(logs: &[&RunLog], config: &ScenarioConfig) -> String {
    assert!(!logs.is_empty(), "render_svg needs at least one run log");
    let f = Frame::new(config);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(s, "<style>\n{STYLE}\n</style>");
    let (x0, y0) = f.px(0.0, config.world.height_m);
    let _ = writeln!(
        s,
        r#"<rect class="world" x="{x0:.3}" y="{y0:.3}" width="{:.3}" height="{:.3}"/>"#,
        f.len(config.world.width_m),
        f.len(config.world.height_m)
    );

    for o in &config.obstacles {
        match &o.shape {
            Shape::Circle { center, radius } => {
                let (cx, cy) = f.px(center.x, center.y);
                let _ = writeln!(
                    s,
                    r#"<circle class="obstacle" cx="{cx:.3}" cy="{cy:.3}" r="{:.3}"/>"#,
                    f.len(*radius)
                );
            }
            Shape::Rect { min, max } => {
                let (x, y) = f.px(min.x, max.y);
                let _ = writeln!(
                    s,
                    r#"<rect class="obstacle" x="{x:.3}" y="{y:.3}" width="{:.3}" height="{:.3}"/>"#,
                    f.len(max.x - min.x),
                    f.len(max.y - min.y)
                );
            }
        }
    }

    let ring = config.objectives.zones.personal;
    let body = socnav::world::HUMAN_BODY_RADIUS;
    for h in config.humans() {
        let (cx, cy) = f.px(h.pose.x, h.pose.y);
        let (hx, hy) = f.px(h.pose.x + body * h.pose.theta.cos(), h.pose.y + body * h.pose.theta.sin());
        let _ = writeln!(s, r#"<circle class="proxemic" cx="{cx:.3}" cy="{cy:.3}" r="{:.3}"/>"#, f.len(ring));
        let _ = writeln!(s, r#"<circle class="human" cx="{cx:.3}" cy="{cy:.3}" r="{:.3}"/>"#, f.len(body));
        let _ = writeln!(
            s,
            r#"<line class="heading" x1="{cx:.3}" y1="{cy:.3}" x2="{hx:.3}" y2="{hy:.3}"/>"#
        );
    }

    for log in logs {
        let class = match log.mode {
            Mode::Traditional => "traditional",
            Mode::Paccet => "paccet",
        };
        if log.steps.len() > 1 {
            let pts: Vec<String> = log
                .poses()
                .map(|p| {
                    let (x, y) = f.px(p.x, p.y);
                    format!("{x:.3},{y:.3}")
                })
                .collect();
            let _ = writeln!(s, r#"<polyline class="{class}" points="{}"/>"#, pts.join(" "));
        }
        if let Some(g) = &log.social_goal {
            let _ = writeln!(s, r#"<polygon class="social-goal" points="{}"/>"#, star(&f, &g.pose, 9.0));
        }
    }

    let start = config.robot.pose();
    let (sx, sy) = f.px(start.x, start.y);
    let _ = writeln!(s, r#"<circle class="start" cx="{sx:.3}" cy="{sy:.3}" r="4"/>"#);
    let _ = writeln!(s, r#"<polygon class="goal" points="{}"/>"#, star(&f, &config.goal.pose(), 10.0));
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use socnav::sim::run_scenario;

    fn open_field() -> ScenarioConfig {
        ScenarioConfig::from_json(include_str!("../../../scenarios/open_field.json")).unwrap()
    }

    #[test]
    fn transform_maps_corners() {
        let c = open_field();
        let f = Frame::new(&c);
        assert_eq!(f.px(0.0, c.world.height_m), (MARGIN, MARGIN));
        let (x, y) = f.px(c.world.width_m, 0.0);
        assert!(x <= WIDTH - MARGIN + 1e-9 && y <= HEIGHT - MARGIN + 1e-9);
    }

    #[test]
    fn start_at_goal_draws_markers_only() {
        let mut c = open_field();
        c.goal.x = c.robot.x;
        c.goal.y = c.robot.y;
        let log = run_scenario(&c, Mode::Traditional, 0).unwrap();
        let svg = render_svg(&[&log], &c);
        assert!(!svg.contains("<polyline"));
        assert!(svg.contains(r#"class="goal""#));
        assert!(svg.contains(r#"class="start""#));
    }

    #[test]
    fn one_log_one_polyline_two_logs_two_classes() {
        let c = open_field();
        let t = run_scenario(&c, Mode::Traditional, 0).unwrap();
        let p = run_scenario(&c, Mode::Paccet, 0).unwrap();
        let one = render_svg(&[&t], &c);
        assert_eq!(one.matches("<polyline").count(), 1);
        let two = render_svg(&[&t, &p], &c);
        assert_eq!(two.matches("<polyline").count(), 2);
        assert!(two.contains(r#"<polyline class="traditional""#));
        assert!(two.contains(r#"<polyline class="paccet""#));
        assert_eq!(two, render_svg(&[&t, &p], &c));
    }
}
