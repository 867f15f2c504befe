use std::fmt::Write;

use num_complex::Complex;

use super::curve::CurvePolyline;
use super::sphere::{Chart, Point};
use crate::scalar::Real;

/// One row per node: `index,x,y,z,re,im` (sphere coordinates, then the
/// plane coordinate; `inf` at infinity).
pub fn curve_to_csv<T: Real>(curve: &CurvePolyline<T>) -> String {
    let mut out = String::from("index,x,y,z,re,im\n");
    for (i, p) in curve.points.iter().enumerate() {
        let [x, y, z] = p.to_xyz();
        let (re, im) = match p.finite() {
            Some(c) => (num(c.re), num(c.im)),
            None => ("inf".to_string(), "inf".to_string()),
        };
        writeln!(out, "{i},{},{},{},{re},{im}", num(x), num(y), num(z)).unwrap();
    }
    out
}

fn num<T: Real>(x: T) -> String {
    format!("{:.8e}", x.to_f64().unwrap_or(f64::NAN))
}

/// What to draw in [`render_svg`].
#[derive(Debug, Clone)]
pub struct Scene<'a, T> {
    pub marked: &'a [Point<T>],
    /// Drawn thick.
    pub slits: &'a [CurvePolyline<T>],
    /// Drawn thin, later curves darker.
    pub curves: &'a [CurvePolyline<T>],
}

const SIZE: f64 = 800.0;
const MARGIN: f64 = 40.0;

/// Projects the scene through `chart` and writes a square SVG.
pub fn render_svg<T: Real>(chart: &Chart<T>, scene: &Scene<'_, T>) -> String {
    let plane = |p: &Point<T>| -> Option<(f64, f64)> {
        chart
            .to_plane(p)
            .map(|z: Complex<T>| (z.re.to_f64().unwrap(), z.im.to_f64().unwrap()))
    };
    let all = scene
        .marked
        .iter()
        .chain(scene.slits.iter().flat_map(|c| &c.points))
        .chain(scene.curves.iter().flat_map(|c| &c.points))
        .filter_map(plane);
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for (x, y) in all {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if x0 > x1 {
        (x0, x1, y0, y1) = (-1.0, 1.0, -1.0, 1.0);
    }
    let span = (x1 - x0).max(y1 - y0).max(1e-12);
    let scale = (SIZE - 2.0 * MARGIN) / span;
    let screen = |(x, y): (f64, f64)| (MARGIN + (x - x0) * scale, SIZE - MARGIN - (y - y0) * scale);

    let path = |c: &CurvePolyline<T>| {
        let mut d = String::new();
        let mut pen_down = false;
        for p in &c.points {
            match plane(p) {
                Some(q) => {
                    let (sx, sy) = screen(q);
                    let cmd = if pen_down { 'L' } else { 'M' };
                    write!(d, "{cmd}{sx:.8e} {sy:.8e} ").unwrap();
                    pen_down = true;
                }
                None => pen_down = false,
            }
        }
        if c.closed && c.points.iter().all(|p| plane(p).is_some()) {
            d.push('Z');
        }
        d.trim_end().to_string()
    };

    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    )
    .unwrap();
    writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    for s in scene.slits {
        writeln!(
            out,
            r#"<path d="{}" fill="none" stroke="black" stroke-width="4" stroke-linecap="round"/>"#,
            path(s)
        )
        .unwrap();
    }
    let n = scene.curves.len();
    for (k, c) in scene.curves.iter().enumerate() {
        let opacity = 0.15 + 0.85 * (k + 1) as f64 / n as f64;
        writeln!(
            out,
            r#"<path d="{}" fill="none" stroke="steelblue" stroke-width="1" stroke-opacity="{opacity:.8e}"/>"#,
            path(c)
        )
        .unwrap();
    }
    for p in scene.marked {
        if let Some(q) = plane(p) {
            let (sx, sy) = screen(q);
            writeln!(
                out,
                r#"<circle cx="{sx:.8e}" cy="{sy:.8e}" r="5" fill="crimson"/>"#
            )
            .unwrap();
        }
    }
    out.push_str("</svg>\n");
    out
}
