//! Boundary overlays as standalone SVG.

use std::fmt::Write;

use gptinv::C64;

const SIZE: f64 = 480.0;
const MARGIN: f64 = 24.0;

pub struct Curve<'a> {
    pub label: &'a str,
    pub points: &'a [C64],
    pub stroke: &'a str,
    pub dashed: bool,
}

/// Closed polylines in a shared frame; `y` points up. Every polyline holds exactly the given points.
pub fn overlay(title: &str, curves: &[Curve]) -> String {
    let all = curves.iter().flat_map(|c| c.points.iter());
    let (mut lo, mut hi) = (C64::new(f64::INFINITY, f64::INFINITY), C64::new(f64::NEG_INFINITY, f64::NEG_INFINITY));
    for p in all {
        lo = C64::new(lo.re.min(p.re), lo.im.min(p.im));
        hi = C64::new(hi.re.max(p.re), hi.im.max(p.im));
    }
    let span = (hi.re - lo.re).max(hi.im - lo.im).max(f64::MIN_POSITIVE);
    let scale = (SIZE - 2.0 * MARGIN) / span;
    let map = |p: &C64| (MARGIN + (p.re - lo.re) * scale, SIZE - MARGIN - (p.im - lo.im) * scale);

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(s, "  <title>{}</title>", escape(title));
    let _ = writeln!(s, r#"  <rect width="100%" height="100%" fill="white"/>"#);
    for c in curves {
        let pts: Vec<String> = c.points.iter().map(|p| {
            let (x, y) = map(p);
            format!("{x:.4},{y:.4}")
        }).collect();
        let dash = if c.dashed { r#" stroke-dasharray="4 3""# } else { "" };
        let _ = writeln!(
            s,
            r#"  <polyline data-label="{}" fill="none" stroke="{}" stroke-width="1.5"{dash} points="{}"/>"#,
            escape(c.label),
            c.stroke,
            pts.join(" ")
        );
    }
    let _ = writeln!(s, "</svg>");
    s
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}
