//! Static configuration snapshots: one 600×300 panel per time, side by side.

use std::fmt::Write as _;

use lemnis_core::{Choreography, PairSet, PlaneVec, Result};

pub const PANEL_WIDTH: f64 = 600.0;
pub const PANEL_HEIGHT: f64 = 300.0;
/// Samples along the curve outline.
pub const CURVE_SAMPLES: usize = 512;

/// Pixels per length unit; the vertices at `±c` sit 50 px from the edges.
fn scale(c: f64) -> f64 {
    (PANEL_WIDTH / 2.0 - 50.0) / c
}

/// One panel: the configuration at `t` with a caption.
#[derive(Debug, Clone, PartialEq)]
pub struct Panel {
    pub t: f64,
    pub caption: String,
}

/// SVG document with one panel per entry of `panels`.
///
/// Each panel draws the curve, chords between the pairs of `chords`, the
/// bodies numbered from 1, and the center of mass as a filled bullet.
pub fn render(ch: &Choreography, chords: &PairSet, panels: &[Panel]) -> Result<String> {
    let width = PANEL_WIDTH * panels.len().max(1) as f64;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{PANEL_HEIGHT}" viewBox="0 0 {width} {PANEL_HEIGHT}">"#
    );
    let _ = writeln!(out, r#"<rect width="{width}" height="{PANEL_HEIGHT}" fill="white"/>"#);
    let c = ch.curve().c();
    let k = scale(c);
    for (idx, panel) in panels.iter().enumerate() {
        let x0 = PANEL_WIDTH * idx as f64 + PANEL_WIDTH / 2.0;
        let y0 = PANEL_HEIGHT / 2.0;
        let px = |p: PlaneVec| (x0 + k * p.x, y0 - k * p.y);

        let _ = writeln!(out, r#"<g id="panel-{}">"#, idx + 1);
        let mut path = String::new();
        for j in 0..CURVE_SAMPLES {
            let (x, y) = px(ch.curve().position(j as f64 * ch.period() / CURVE_SAMPLES as f64)?);
            let _ = write!(path, "{}{x:.2},{y:.2} ", if j == 0 { "M" } else { "L" });
        }
        let _ = writeln!(out, r#"<path d="{}Z" fill="none" stroke="gray" stroke-width="1.5"/>"#, path);

        let pos = ch.positions(panel.t)?;
        for &(i, j) in chords.pairs() {
            let ((xa, ya), (xb, yb)) = (px(pos[i]), px(pos[j]));
            let _ = writeln!(
                out,
                r#"<line x1="{xa:.2}" y1="{ya:.2}" x2="{xb:.2}" y2="{yb:.2}" stroke="steelblue" stroke-width="1"/>"#
            );
        }
        for (i, p) in pos.iter().enumerate() {
            let (x, y) = px(*p);
            let _ = writeln!(out, r#"<circle cx="{x:.2}" cy="{y:.2}" r="6" fill="white" stroke="black"/>"#);
            let _ = writeln!(
                out,
                r#"<text x="{:.2}" y="{:.2}" font-size="13" font-family="sans-serif">{}</text>"#,
                x + 8.0,
                y - 8.0,
                i + 1
            );
        }
        let cm = ch.center_of_mass(panel.t)?;
        let (x, y) = px(cm);
        let _ = writeln!(out, r#"<circle cx="{x:.2}" cy="{y:.2}" r="3" fill="black"/>"#);
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="20" font-size="14" font-family="sans-serif" text-anchor="middle">{}</text>"#,
            x0,
            escape(&panel.caption)
        );
        let _ = writeln!(out, "</g>");
    }
    let _ = writeln!(out, "</svg>");
    Ok(out)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
