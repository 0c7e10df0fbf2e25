//! Static SVG output: pairs as geodesics of the Poincaré disk, and a level
//! layout of the approximation graph.

use std::fmt::Write;

use crate::circle::PointPair;
use crate::hyperapprox::{ApproxGraph, EdgeKind};
use crate::quasilines::Involution;
use crate::scalar::Scalar;

const SIZE: f64 = 600.0;
const R: f64 = 280.0;

/// Items drawn in the disk.
#[derive(Clone, Debug, Default)]
pub struct DiskScene {
    /// `(pair, color)`.
    pub pairs: Vec<(PointPair<f64>, String)>,
}

impl DiskScene {
    pub fn add_pair(&mut self, p: PointPair<f64>, color: &str) {
        self.pairs.push((p, color.to_string()));
    }

    /// Draws `n` pairs `(x, ρ(x))` of an elliptic quasi-line.
    pub fn add_quasiline<S: Scalar>(&mut self, rho: &Involution<S>, n: usize, color: &str) {
        for i in 0..n {
            let x = crate::circle::CirclePoint::from_angle(S::lit(std::f64::consts::PI * i as f64 / n as f64));
            if let Ok(y) = rho.eval(x) {
                if let Ok(p) = PointPair::from_angles(x.theta().f64(), y.theta().f64()) {
                    self.add_pair(p, color);
                }
            }
        }
    }

    pub fn render(&self) -> String {
        let c = SIZE / 2.0;
        let mut s = header(SIZE, SIZE);
        let _ = writeln!(s, r#"<circle cx="{c}" cy="{c}" r="{R}" fill="none" stroke="black"/>"#);
        for (p, color) in &self.pairs {
            let _ = writeln!(s, r#"<path d="{}" fill="none" stroke="{color}"/>"#, geodesic(p.p().theta().f64(), p.q().theta().f64()));
        }
        s.push_str("</svg>\n");
        s
    }
}

fn header(w: f64, h: f64) -> String {
    format!(r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#) + "\n"
}

fn disk_xy(t: f64) -> (f64, f64) {
    (SIZE / 2.0 + R * t.cos(), SIZE / 2.0 - R * t.sin())
}

/// Path of the geodesic with ideal endpoints at angles `t0`, `t1`.
fn geodesic(t0: f64, t1: f64) -> String {
    let (x0, y0) = disk_xy(t0);
    let (x1, y1) = disk_xy(t1);
    let mut d = (t1 - t0).rem_euclid(std::f64::consts::TAU);
    let sweep = if d < std::f64::consts::PI { 0 } else { 1 };
    if d > std::f64::consts::PI {
        d = std::f64::consts::TAU - d;
    }
    if (d - std::f64::consts::PI).abs() < 1e-9 {
        return format!("M {x0:.3} {y0:.3} L {x1:.3} {y1:.3}");
    }
    // The orthogonal circle has radius R·tan(d/2).
    let rr = R * (d / 2.0).tan();
    format!("M {x0:.3} {y0:.3} A {rr:.3} {rr:.3} 0 0 {sweep} {x1:.3} {y1:.3}")
}

/// Level layout: one row per level, horizontal position `asinh(center / r_min)`.
pub fn render_graph(g: &ApproxGraph) -> String {
    let (w, h) = (1200.0, 120.0 * (g.levels.1 - g.levels.0 + 1) as f64 + 40.0);
    let rmin = g.vertices.iter().map(|v| v.radius).fold(f64::INFINITY, f64::min);
    let xs: Vec<f64> = g.vertices.iter().map(|v| (v.center / rmin).asinh()).collect();
    let span = xs.iter().fold(0.0f64, |a, x| a.max(x.abs())).max(1e-12);
    let pos = |i: usize| {
        let v = &g.vertices[i];
        (w / 2.0 + (w / 2.0 - 20.0) * xs[i] / span, 20.0 + 120.0 * (v.level - g.levels.0) as f64)
    };
    let mut s = header(w, h);
    for e in &g.edges {
        let ((x0, y0), (x1, y1)) = (pos(e.u), pos(e.v));
        let color = if e.kind == EdgeKind::Horizontal { "#1f77b4" } else { "#bbbbbb" };
        let _ = writeln!(s, r#"<line x1="{x0:.2}" y1="{y0:.2}" x2="{x1:.2}" y2="{y1:.2}" stroke="{color}" stroke-width="0.5"/>"#);
    }
    for i in 0..g.len() {
        let (x, y) = pos(i);
        let fill = if g.is_interior(i) { "black" } else { "#999999" };
        let _ = writeln!(s, r#"<circle cx="{x:.2}" cy="{y:.2}" r="1.5" fill="{fill}"/>"#);
    }
    s.push_str("</svg>\n");
    s
}
