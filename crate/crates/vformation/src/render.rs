//! SVG drawings of flock snapshots.
//!
//! Flight direction is up: a bird at `(x, y)` is drawn at `(x, -y)`.

use std::fmt::Write;

use vformation_core::metrics::{classify, segments};
use vformation_core::{BirdPose, Params, WashGraph};

const BODY_RADIUS: f64 = 3.0;
const MARGIN: f64 = 0.05;

/// Renders one configuration. With `overlay`, the formation's straight-line
/// segments are drawn dashed on top.
pub fn render_svg(birds: &[BirdPose], p: &Params, overlay: bool) -> String {
    let half = p.wingspan / 2.0;
    let (mut x0, mut x1, mut y0, mut y1) = (
        f64::INFINITY,
        f64::NEG_INFINITY,
        f64::INFINITY,
        f64::NEG_INFINITY,
    );
    for b in birds {
        x0 = x0.min(b.x - half.max(BODY_RADIUS));
        x1 = x1.max(b.x + half.max(BODY_RADIUS));
        y0 = y0.min(-b.y - BODY_RADIUS);
        y1 = y1.max(-b.y + BODY_RADIUS);
    }
    if birds.is_empty() {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    let (mx, my) = ((x1 - x0) * MARGIN, (y1 - y0) * MARGIN);
    let (vx, vy, vw, vh) = (x0 - mx, y0 - my, x1 - x0 + 2.0 * mx, y1 - y0 + 2.0 * my);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{vx} {vy} {vw} {vh}" width="{vw}" height="{vh}">"#
    );
    let _ = writeln!(
        s,
        r#"<rect x="{vx}" y="{vy}" width="{vw}" height="{vh}" fill="white"/>"#
    );
    for b in birds {
        let y = -b.y;
        let _ = writeln!(
            s,
            r#"<line x1="{}" y1="{y}" x2="{}" y2="{y}" stroke="black" stroke-width="1"/>"#,
            b.x - half,
            b.x + half
        );
        let _ = writeln!(
            s,
            r#"<circle cx="{}" cy="{y}" r="{BODY_RADIUS}" fill="black"/>"#,
            b.x
        );
    }
    if overlay {
        let g = WashGraph::new(birds, p);
        for seg in segments(birds, &g, &classify(&g)) {
            let (a, b) = (birds[seg.trailing], birds[seg.end]);
            let _ = writeln!(
                s,
                r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="gray" stroke-width="1" stroke-dasharray="4 3"/>"#,
                a.x, -a.y, b.x, -b.y
            );
        }
    }
    s.push_str("</svg>\n");
    s
}
