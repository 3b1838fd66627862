//! Minimal SVG rendering of polygons and fans.

use std::fmt::Write;

use hamlat_core::{Point2, Q};

const PANEL: f64 = 320.0;
const MARGIN: f64 = 24.0;

fn f(x: &Q) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

struct Frame {
    min: (f64, f64),
    scale: f64,
    offset_x: f64,
}

impl Frame {
    fn fit(points: &[(f64, f64)], offset_x: f64) -> Self {
        let (mut lo, mut hi) = ((f64::MAX, f64::MAX), (f64::MIN, f64::MIN));
        for &(x, y) in points {
            lo = (lo.0.min(x), lo.1.min(y));
            hi = (hi.0.max(x), hi.1.max(y));
        }
        let span = (hi.0 - lo.0).max(hi.1 - lo.1).max(1e-9);
        Self { min: lo, scale: (PANEL - 2.0 * MARGIN) / span, offset_x }
    }

    fn map(&self, (x, y): (f64, f64)) -> (f64, f64) {
        (
            self.offset_x + MARGIN + (x - self.min.0) * self.scale,
            PANEL - MARGIN - (y - self.min.1) * self.scale,
        )
    }
}

/// The polygon, and when `rays` is given the fan next to it.
pub fn polygon_and_fan(vertices: &[Point2], rays: Option<&[[i128; 2]]>) -> String {
    let width = if rays.is_some() { 2.0 * PANEL } else { PANEL };
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{PANEL}" viewBox="0 0 {width} {PANEL}">"#
    );
    let pts: Vec<(f64, f64)> = vertices.iter().map(|p| (f(&p.x), f(&p.y))).collect();
    let frame = Frame::fit(&pts, 0.0);
    let path: Vec<String> = pts
        .iter()
        .map(|&p| {
            let (x, y) = frame.map(p);
            format!("{x:.2},{y:.2}")
        })
        .collect();
    let _ = writeln!(
        out,
        r##"  <polygon points="{}" fill="#dbe7f3" stroke="#1f4e79" stroke-width="2"/>"##,
        path.join(" ")
    );
    for (p, v) in pts.iter().zip(vertices) {
        let (x, y) = frame.map(*p);
        let _ = writeln!(out, r##"  <circle cx="{x:.2}" cy="{y:.2}" r="3" fill="#1f4e79"/>"##);
        let _ = writeln!(
            out,
            r#"  <text x="{:.2}" y="{:.2}" font-size="11" font-family="monospace">({}, {})</text>"#,
            x + 5.0,
            y - 5.0,
            v.x,
            v.y
        );
    }
    if let Some(rays) = rays {
        let ends: Vec<(f64, f64)> = rays.iter().map(|r| (r[0] as f64, r[1] as f64)).collect();
        let mut box_pts = ends.clone();
        box_pts.push((0.0, 0.0));
        let fan = Frame::fit(&box_pts, PANEL);
        let (ox, oy) = fan.map((0.0, 0.0));
        for (r, end) in rays.iter().zip(&ends) {
            let (x, y) = fan.map(*end);
            let _ = writeln!(
                out,
                r##"  <line x1="{ox:.2}" y1="{oy:.2}" x2="{x:.2}" y2="{y:.2}" stroke="#8b1e3f" stroke-width="1.5"/>"##
            );
            let _ = writeln!(
                out,
                r#"  <text x="{:.2}" y="{:.2}" font-size="11" font-family="monospace">({}, {})</text>"#,
                x + 4.0,
                y - 4.0,
                r[0],
                r[1]
            );
        }
    }
    out.push_str("</svg>\n");
    out
}
