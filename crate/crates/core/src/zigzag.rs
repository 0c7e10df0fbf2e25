//! Zigzag paths, the δ upper-bound oracle and projection of paths to a line.

use serde::{Deserialize, Serialize};

use crate::chart::{as_ball, Ball};
use crate::circle::{CirclePoint, PointPair};
use crate::error::{Error, Result};
use crate::harmonic::{common_perpendicular, harmonic_residual, HarmonicPair, Segment};
use crate::quasilines::{on_lifted_quasiline, quasiline_path, quasiline_project, virtual_projection, Involution};
use crate::scalar::Scalar;
use crate::structure::MoebiusStructure;

/// Angular tolerance used when matching path vertices.
fn vertex_tol<S: Scalar>() -> S {
    S::lit(1e-9).max(S::sep_min())
}

/// A chain of segments; consecutive sides meet at a harmonic pair whose axes
/// are the axes of the two sides.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "S: Scalar", deserialize = "S: Scalar"))]
pub struct ZZPath<S = f64> {
    pub sides: Vec<Segment<S>>,
    pub flags: Vec<String>,
}

fn same_vertex<S: Scalar>(u: (PointPair<S>, PointPair<S>), v: (PointPair<S>, PointPair<S>)) -> bool {
    let t = vertex_tol();
    (u.0.approx_eq(&v.0, t) && u.1.approx_eq(&v.1, t)) || (u.0.approx_eq(&v.1, t) && u.1.approx_eq(&v.0, t))
}

impl<S: Scalar> ZZPath<S> {
    pub fn empty() -> Self {
        Self { sides: Vec::new(), flags: Vec::new() }
    }

    pub fn new(sides: Vec<Segment<S>>) -> Result<Self> {
        let p = Self { sides, flags: Vec::new() };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for (i, w) in self.sides.windows(2).enumerate() {
            if !same_vertex(w[0].end(), w[1].start()) {
                return Err(Error::Path(format!("sides {i} and {} do not share an endpoint", i + 1)));
            }
        }
        Ok(())
    }

    pub fn length(&self) -> S {
        self.sides.iter().map(|s| s.length).fold(S::zero(), |a, b| a + b)
    }

    pub fn start(&self) -> Option<(PointPair<S>, PointPair<S>)> {
        self.sides.first().map(|s| s.start())
    }

    pub fn end(&self) -> Option<(PointPair<S>, PointPair<S>)> {
        self.sides.last().map(|s| s.end())
    }

    /// Vertex sequence: start of the first side, then every side end.
    pub fn vertices(&self) -> Vec<(PointPair<S>, PointPair<S>)> {
        let mut v: Vec<_> = self.sides.first().map(|s| s.start()).into_iter().collect();
        v.extend(self.sides.iter().map(|s| s.end()));
        v
    }

    /// Concatenation; the end of `self` must be the start of `other`.
    pub fn concat(mut self, other: Self) -> Result<Self> {
        if let (Some(e), Some(s)) = (self.end(), other.start()) {
            if !same_vertex(e, s) {
                return Err(Error::Path("concatenated paths do not meet".into()));
            }
        }
        self.sides.extend(other.sides);
        for f in other.flags {
            if !self.flags.contains(&f) {
                self.flags.push(f);
            }
        }
        Ok(self)
    }

    pub fn reversed(&self) -> Self {
        let sides = self
            .sides
            .iter()
            .rev()
            .map(|s| Segment { axis: s.axis, b_start: s.b_end, b_end: s.b_start, length: s.length })
            .collect();
        Self { sides, flags: self.flags.clone() }
    }

    pub fn flag(&mut self, f: &str) {
        if !self.flags.iter().any(|g| g == f) {
            self.flags.push(f.to_string());
        }
    }
}

/// Sum of side lengths of a valid path.
pub fn path_length<S: Scalar>(p: &ZZPath<S>) -> Result<S> {
    p.validate()?;
    Ok(p.length())
}

/// Paths between `q` and `q1` that use only their axes: a common axis, a
/// harmonic pair of axes, or a common perpendicular of strongly causal axes.
pub fn axis_routes<S: Scalar>(m: &MoebiusStructure<S>, q: &HarmonicPair<S>, q1: &HarmonicPair<S>) -> Vec<ZZPath<S>> {
    let mut out = Vec::new();
    let tol = vertex_tol();
    for (ax, other) in [(q.a, q.b), (q.b, q.a)] {
        for (bx, other1) in [(q1.a, q1.b), (q1.b, q1.a)] {
            let path = if ax.approx_eq(&bx, tol) {
                Segment::new(m, ax, other, other1).and_then(|s| ZZPath::new(vec![s]))
            } else if ax.separates(&bx) {
                match harmonic_residual(m, &ax, &bx) {
                    Ok(r) if r <= S::harm_tol() => (|| {
                        ZZPath::new(vec![Segment::new(m, ax, other, bx)?, Segment::new(m, bx, ax, other1)?])
                    })(),
                    _ => continue,
                }
            } else if ax.strongly_causal(&bx) {
                (|| {
                    let c = common_perpendicular(m, &ax, &bx)?;
                    ZZPath::new(vec![
                        Segment::new(m, ax, other, c)?,
                        Segment::new(m, c, ax, bx)?,
                        Segment::new(m, bx, c, other1)?,
                    ])
                })()
            } else {
                continue;
            };
            if let Ok(p) = path {
                out.push(p);
            }
        }
    }
    out
}

fn best<S: Scalar>(paths: impl IntoIterator<Item = ZZPath<S>>) -> Option<ZZPath<S>> {
    paths.into_iter().fold(None, |acc: Option<ZZPath<S>>, p| match acc {
        Some(a) if a.length() <= p.length() => Some(a),
        _ => Some(p),
    })
}

/// Routes inside `Harm_ω`: slide along the axis `(o, ω)` of one endpoint to a
/// sphere of another radius, then take an axis route to the other endpoint.
/// Radii run over a factor-2 grid.
pub fn ball_routes<S: Scalar>(
    m: &MoebiusStructure<S>,
    omega: CirclePoint<S>,
    q: &HarmonicPair<S>,
    q1: &HarmonicPair<S>,
) -> Vec<ZZPath<S>> {
    let (Some(b0), Some(b1)) = (as_ball(m, omega, q), as_ball(m, omega, q1)) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    let reach = (b0.center - b1.center).abs() + b0.radius + b1.radius;
    for (from, to, qa, qb, flip) in [(b0, b1, q, q1, false), (b1, b0, q1, q, true)] {
        let lo = from.radius.min(to.radius) / S::lit(8.0);
        let hi = reach * S::lit(8.0);
        let mut k = (lo / from.radius).log2().floor();
        let kmax = (hi / from.radius).log2().ceil();
        while k <= kmax {
            let r = from.radius * S::lit(2.0).powf(k);
            k = k + S::one();
            if (r / from.radius - S::one()).abs() < S::lit(1e-12) {
                continue;
            }
            let Ok(ball) = Ball::new(m, omega, from.center, r) else { continue };
            let route = (|| -> Result<Vec<ZZPath<S>>> {
                let axis = ball.axis(omega)?;
                let (sphere0, sphere_r) = (from.pair(omega)?, ball.pair(omega)?);
                let slide = ZZPath::new(vec![Segment::new(m, axis, sphere0, sphere_r)?])?;
                let mid = HarmonicPair::new(m, sphere_r, axis)?;
                let mut v = Vec::new();
                for tail in axis_routes(m, &mid, qb) {
                    if tail.sides.iter().any(|s| s.axis.approx_eq(&axis, vertex_tol())) {
                        continue;
                    }
                    v.push(slide.clone().concat(tail)?);
                }
                Ok(v)
            })();
            if let Ok(v) = route {
                for p in v {
                    let _ = qa;
                    out.push(if flip { p.reversed() } else { p });
                }
            }
        }
        let _ = to;
    }
    out
}

/// Candidate-family upper bound for `δ(q, q1)` with the realizing path.
///
/// Family: identical pairs; axis routes (common axis, harmonic axes,
/// perpendicular of strongly causal axes); quasi-line paths when one pair lies
/// on the lifted quasi-line of the other's involution; sphere-resizing routes
/// inside a shared `Harm_ω`. When none applies, both pairs are first moved into
/// a common `Harm_ω` by virtual projection.
pub fn delta_upper<S: Scalar>(m: &MoebiusStructure<S>, q: &HarmonicPair<S>, q1: &HarmonicPair<S>) -> Result<(S, ZZPath<S>)> {
    if let Some(p) = delta_core(m, q, q1) {
        return Ok((p.length(), p));
    }
    let mut cands = Vec::new();
    for (src, dst, flip) in [(q, q1, false), (q1, q, true)] {
        for w in dst.a.points().into_iter().chain(dst.b.points()) {
            let route = (|| -> Result<ZZPath<S>> {
                let vp = virtual_projection(m, src, w)?;
                let first = quasiline_path(m, &Involution::from_harmonic(m, src)?, src, &vp)?;
                let rest = delta_core(m, &vp, dst).ok_or_else(|| Error::Structure("no route".into()))?;
                let mut p = first.concat(rest)?;
                p.flag("virtual_projection");
                Ok(p)
            })();
            if let Ok(p) = route {
                cands.push(if flip { p.reversed() } else { p });
            }
        }
    }
    let p = best(cands).ok_or_else(|| Error::Structure("no zigzag candidate connects the pairs".into()))?;
    Ok((p.length(), p))
}

fn delta_core<S: Scalar>(m: &MoebiusStructure<S>, q: &HarmonicPair<S>, q1: &HarmonicPair<S>) -> Option<ZZPath<S>> {
    if q.same_hm(q1, S::lit(1e-12)) {
        return Some(ZZPath::empty());
    }
    let mut cands = axis_routes(m, q, q1);
    for (src, dst, flip) in [(q, q1, false), (q1, q, true)] {
        if let Ok(rho) = Involution::from_harmonic(m, src) {
            if on_lifted_quasiline(m, &rho, dst) {
                if let Ok(p) = quasiline_path(m, &rho, src, dst) {
                    cands.push(if flip { p.reversed() } else { p });
                }
            }
        }
    }
    for w in q.a.points().into_iter().chain(q.b.points()) {
        if q1.touches(w) {
            cands.extend(ball_routes(m, w, q, q1));
        }
    }
    best(cands)
}

/// Nearest-point projection of a vertex onto the line `h_t`: the element of
/// the vertex's elliptic quasi-line that is harmonic to `t`.
pub fn project_vertex<S: Scalar>(m: &MoebiusStructure<S>, v: (PointPair<S>, PointPair<S>), t: &PointPair<S>) -> Result<PointPair<S>> {
    let tol = vertex_tol();
    if v.0.approx_eq(t, tol) {
        return Ok(v.1);
    }
    if v.1.approx_eq(t, tol) {
        return Ok(v.0);
    }
    let q = HarmonicPair::new(m, v.0, v.1)?;
    let rho = Involution::from_harmonic(m, &q)?;
    quasiline_project(m, &rho, t)
}

/// Maps every vertex of `path` to `h_t` and joins the images along `h_t`.
/// The result is flagged `"projection_increased"` if it came out longer than
/// the original by more than 1e-9.
pub fn project_path_to_line<S: Scalar>(m: &MoebiusStructure<S>, path: &ZZPath<S>, t: &PointPair<S>) -> Result<ZZPath<S>> {
    path.validate()?;
    let imgs = path.vertices().into_iter().map(|v| project_vertex(m, v, t)).collect::<Result<Vec<_>>>()?;
    let sides = imgs.windows(2).map(|w| Segment::new(m, *t, w[0], w[1])).collect::<Result<Vec<_>>>()?;
    let mut out = ZZPath::new(sides)?;
    if out.length() > path.length() + S::margin_tol() {
        out.flag("projection_increased");
    }
    Ok(out)
}
