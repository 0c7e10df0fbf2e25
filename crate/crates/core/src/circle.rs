//! Points, pairs, arcs and 4-tuples on the circle.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A point of the circle, stored as an angle in `[0, 2π)`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CirclePoint<S = f64> {
    theta: S,
}

fn normalize<S: Scalar>(theta: S) -> S {
    let tau = S::two_pi();
    let mut t = theta % tau;
    if t < S::zero() {
        t = t + tau;
    }
    if t >= tau {
        t = S::zero();
    }
    t
}

impl<S: Scalar> CirclePoint<S> {
    pub fn new(theta: S) -> Result<Self> {
        if !theta.is_finite() {
            return Err(Error::Domain(format!("non-finite angle {theta}")));
        }
        Ok(Self::from_angle(theta))
    }

    /// Builds a point from a finite angle, reducing it mod 2π.
    #[inline]
    pub fn from_angle(theta: S) -> Self {
        debug_assert!(theta.is_finite());
        Self { theta: normalize(theta) }
    }

    #[inline]
    pub fn theta(self) -> S {
        self.theta
    }

    /// Counterclockwise angle travelled from `from` to `self`, in `[0, 2π)`.
    #[inline]
    pub fn ccw_offset(self, from: Self) -> S {
        normalize(self.theta - from.theta)
    }

    /// Length of the shorter arc between the two points, in `[0, π]`.
    #[inline]
    pub fn angular_distance(self, other: Self) -> S {
        let d = self.ccw_offset(other);
        d.min(S::two_pi() - d)
    }

    /// Point with stereographic coordinate `s` in the chart based at `omega`.
    ///
    /// The coordinate grows counterclockwise from `-∞` just after `omega` to
    /// `+∞` just before it.
    #[inline]
    pub fn from_chart(omega: Self, s: S) -> Self {
        let phi = S::lit(2.0) * S::one().atan2(-s);
        Self::from_angle(omega.theta + phi)
    }

    /// Stereographic coordinate in the chart based at `omega`; `None` at `omega`.
    #[inline]
    pub fn chart_coord(self, omega: Self) -> Option<S> {
        let phi = self.ccw_offset(omega);
        if phi == S::zero() {
            return None;
        }
        let h = phi / S::lit(2.0);
        Some(-h.cos() / h.sin())
    }

    /// The chart base used by the default "north pole" chart.
    pub fn north() -> Self {
        Self::from_angle(S::FRAC_PI_2())
    }
}

impl<S: Scalar> fmt::Display for CirclePoint<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.theta)
    }
}

/// An open arc, swept counterclockwise from `start` through `len` radians.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CircleArc<S = f64> {
    pub start: CirclePoint<S>,
    pub len: S,
}

impl<S: Scalar> CircleArc<S> {
    /// Counterclockwise arc from `a` to `b`.
    pub fn ccw(a: CirclePoint<S>, b: CirclePoint<S>) -> Self {
        Self { start: a, len: b.ccw_offset(a) }
    }

    pub fn end(&self) -> CirclePoint<S> {
        self.at(self.len)
    }

    #[inline]
    pub fn at(&self, t: S) -> CirclePoint<S> {
        CirclePoint::from_angle(self.start.theta + t)
    }

    /// Offset of `x` from the start, in `[0, 2π)`.
    #[inline]
    pub fn offset(&self, x: CirclePoint<S>) -> S {
        x.ccw_offset(self.start)
    }

    /// Strict containment in the open arc.
    #[inline]
    pub fn contains(&self, x: CirclePoint<S>) -> bool {
        let o = self.offset(x);
        o > S::zero() && o < self.len
    }

    /// Containment in the closed arc.
    #[inline]
    pub fn contains_closed(&self, x: CirclePoint<S>) -> bool {
        self.offset(x) <= self.len
    }
}

/// An arc traversed from `from` to `to` in a chosen direction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DirArc<S = f64> {
    pub from: CirclePoint<S>,
    pub to: CirclePoint<S>,
    pub ccw: bool,
    pub len: S,
}

impl<S: Scalar> DirArc<S> {
    pub fn new(from: CirclePoint<S>, to: CirclePoint<S>, ccw: bool) -> Self {
        let len = if ccw { to.ccw_offset(from) } else { from.ccw_offset(to) };
        Self { from, to, ccw, len }
    }

    /// The arc from `from` to `to` that avoids `avoid`.
    pub fn avoiding(from: CirclePoint<S>, to: CirclePoint<S>, avoid: CirclePoint<S>) -> Self {
        let fwd = Self::new(from, to, true);
        if fwd.contains(avoid) {
            Self::new(from, to, false)
        } else {
            fwd
        }
    }

    #[inline]
    pub fn at(&self, t: S) -> CirclePoint<S> {
        if t <= S::zero() {
            return self.from;
        }
        if t >= self.len {
            return self.to;
        }
        let th = if self.ccw { self.from.theta + t } else { self.from.theta - t };
        CirclePoint::from_angle(th)
    }

    /// Parameter of `x` measured from `from` along the arc's direction.
    #[inline]
    pub fn param(&self, x: CirclePoint<S>) -> S {
        if self.ccw {
            x.ccw_offset(self.from)
        } else {
            self.from.ccw_offset(x)
        }
    }

    #[inline]
    pub fn contains(&self, x: CirclePoint<S>) -> bool {
        let t = self.param(x);
        t > S::zero() && t < self.len
    }

    #[inline]
    pub fn contains_closed(&self, x: CirclePoint<S>) -> bool {
        self.param(x) <= self.len
    }
}

/// An unordered pair of distinct points, stored with `p.theta < q.theta`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[S; 2]", into = "[S; 2]")]
#[serde(bound(serialize = "S: Scalar", deserialize = "S: Scalar"))]
pub struct PointPair<S = f64> {
    p: CirclePoint<S>,
    q: CirclePoint<S>,
}

impl<S: Scalar> TryFrom<[S; 2]> for PointPair<S> {
    type Error = Error;
    fn try_from(v: [S; 2]) -> Result<Self> {
        PointPair::new(CirclePoint::new(v[0])?, CirclePoint::new(v[1])?)
    }
}

impl<S: Scalar> From<PointPair<S>> for [S; 2] {
    fn from(p: PointPair<S>) -> Self {
        [p.p.theta, p.q.theta]
    }
}

impl<S: Scalar> PointPair<S> {
    pub fn new(x: CirclePoint<S>, y: CirclePoint<S>) -> Result<Self> {
        if x == y {
            return Err(Error::Domain("pair with coincident points".into()));
        }
        if x.angular_distance(y) < S::sep_min() {
            return Err(Error::Precision(format!("pair points closer than SEP_MIN: {x}, {y}")));
        }
        Ok(Self::new_unchecked(x, y))
    }

    /// Skips the separation check; the points must still be distinct.
    #[inline]
    pub fn new_unchecked(x: CirclePoint<S>, y: CirclePoint<S>) -> Self {
        if x.theta <= y.theta {
            Self { p: x, q: y }
        } else {
            Self { p: y, q: x }
        }
    }

    pub fn from_angles(a: S, b: S) -> Result<Self> {
        Self::new(CirclePoint::new(a)?, CirclePoint::new(b)?)
    }

    /// Pair given by two chart coordinates of the chart based at `omega`.
    /// `None` stands for the chart base itself.
    pub fn from_chart(omega: CirclePoint<S>, a: Option<S>, b: Option<S>) -> Result<Self> {
        let pt = |c: Option<S>| c.map_or(omega, |s| CirclePoint::from_chart(omega, s));
        Self::new(pt(a), pt(b))
    }

    #[inline]
    pub fn p(&self) -> CirclePoint<S> {
        self.p
    }
    #[inline]
    pub fn q(&self) -> CirclePoint<S> {
        self.q
    }
    #[inline]
    pub fn points(&self) -> [CirclePoint<S>; 2] {
        [self.p, self.q]
    }

    /// The endpoint different from `x` (assuming `x` is an endpoint).
    #[inline]
    pub fn other(&self, x: CirclePoint<S>) -> CirclePoint<S> {
        if x == self.p {
            self.q
        } else {
            self.p
        }
    }

    #[inline]
    pub fn contains(&self, x: CirclePoint<S>) -> bool {
        x == self.p || x == self.q
    }

    /// Counterclockwise open arc from `p` to `q`.
    #[inline]
    pub fn arc_pos(&self) -> CircleArc<S> {
        CircleArc::ccw(self.p, self.q)
    }

    /// Counterclockwise open arc from `q` to `p`.
    #[inline]
    pub fn arc_neg(&self) -> CircleArc<S> {
        CircleArc::ccw(self.q, self.p)
    }

    /// The open arc of the complement containing `x`; `None` if `x` is an endpoint.
    pub fn arc_containing(&self, x: CirclePoint<S>) -> Option<CircleArc<S>> {
        if self.contains(x) {
            None
        } else if self.arc_pos().contains(x) {
            Some(self.arc_pos())
        } else {
            Some(self.arc_neg())
        }
    }

    /// True if the two pairs share no point and each one meets both arcs of the other.
    pub fn separates(&self, other: &Self) -> bool {
        if self.shares_point(other) {
            return false;
        }
        let arc = self.arc_pos();
        arc.contains(other.p) != arc.contains(other.q)
    }

    /// Strong causal relation: disjoint and not separating.
    pub fn strongly_causal(&self, other: &Self) -> bool {
        !self.shares_point(other) && !self.separates(other)
    }

    pub fn shares_point(&self, other: &Self) -> bool {
        self.contains(other.p) || self.contains(other.q)
    }

    /// Unordered equality up to an angular tolerance.
    pub fn approx_eq(&self, other: &Self, tol: S) -> bool {
        self.p.angular_distance(other.p) <= tol && self.q.angular_distance(other.q) <= tol
            || self.p.angular_distance(other.q) <= tol && self.q.angular_distance(other.p) <= tol
    }

    /// Smallest angular distance between the two points.
    pub fn span(&self) -> S {
        self.p.angular_distance(self.q)
    }
}

impl<S: Scalar> fmt::Display for PointPair<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.p, self.q)
    }
}

/// An ordered 4-tuple of circle points.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "S: Scalar", deserialize = "S: Scalar"))]
pub struct Tuple4<S = f64> {
    pub x: [CirclePoint<S>; 4],
}

impl<S: Scalar> Tuple4<S> {
    pub fn new(x: [CirclePoint<S>; 4]) -> Self {
        Self { x }
    }

    pub fn from_angles(a: [S; 4]) -> Result<Self> {
        Ok(Self::new([
            CirclePoint::new(a[0])?,
            CirclePoint::new(a[1])?,
            CirclePoint::new(a[2])?,
            CirclePoint::new(a[3])?,
        ]))
    }

    pub fn from_chart(omega: CirclePoint<S>, s: [S; 4]) -> Self {
        Self::new(s.map(|c| CirclePoint::from_chart(omega, c)))
    }

    /// No entry occurs three or more times.
    pub fn is_admissible(&self) -> bool {
        (0..4).all(|i| self.x.iter().filter(|y| **y == self.x[i]).count() < 3)
    }

    /// All four entries distinct.
    pub fn is_nondegenerate(&self) -> bool {
        (0..4).all(|i| (i + 1..4).all(|j| self.x[i] != self.x[j]))
    }

    /// Smallest angular distance among distinct entries.
    pub fn min_separation(&self) -> S {
        let mut m = S::PI();
        for i in 0..4 {
            for j in i + 1..4 {
                if self.x[i] != self.x[j] {
                    m = m.min(self.x[i].angular_distance(self.x[j]));
                }
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn normalizes() {
        let p = CirclePoint::new(-PI / 2.0).unwrap();
        assert!((p.theta() - 1.5 * PI).abs() < 1e-15);
        assert!(CirclePoint::new(f64::NAN).is_err());
        assert_eq!(CirclePoint::from_angle(2.0 * PI).theta(), 0.0);
    }

    #[test]
    fn north_chart() {
        let w = CirclePoint::<f64>::north();
        let s0 = CirclePoint::new(0.0).unwrap().chart_coord(w).unwrap();
        let s1 = CirclePoint::new(PI).unwrap().chart_coord(w).unwrap();
        assert!((s0 - 1.0).abs() < 1e-15 && (s1 + 1.0).abs() < 1e-15);
        for s in [-7.5, -1.0, 0.0, 0.3, 42.0] {
            let x = CirclePoint::from_chart(w, s);
            assert!((x.chart_coord(w).unwrap() - s).abs() < 1e-12 * (1.0 + s * s));
        }
        assert!(w.chart_coord(w).is_none());
    }

    #[test]
    fn chart_order_is_ccw_order() {
        let w = CirclePoint::<f64>::new(1.0).unwrap();
        let xs: Vec<_> = [-3.0, -0.5, 0.0, 2.0, 9.0].iter().map(|&s| CirclePoint::from_chart(w, s)).collect();
        for k in 1..xs.len() {
            assert!(xs[k].ccw_offset(w) > xs[k - 1].ccw_offset(w));
        }
    }

    #[test]
    fn separation_and_causality() {
        let a = PointPair::from_angles(0.0, 2.0).unwrap();
        let b = PointPair::from_angles(1.0, 3.0).unwrap();
        let c = PointPair::from_angles(0.5, 1.5).unwrap();
        let d = PointPair::from_angles(3.0, 4.0).unwrap();
        assert!(a.separates(&b) && b.separates(&a));
        assert!(a.strongly_causal(&c) && c.strongly_causal(&a));
        assert!(a.strongly_causal(&d));
        assert!(!a.separates(&c));
    }

    #[test]
    fn pair_is_unordered() {
        let a = PointPair::from_angles(2.0, 1.0).unwrap();
        let b = PointPair::from_angles(1.0, 2.0).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.p().theta(), 1.0);
        assert!(PointPair::from_angles(1.0, 1.0).is_err());
    }

    #[test]
    fn admissibility() {
        let t = Tuple4::from_angles([0.0, 0.0, 1.0, 1.0]).unwrap();
        assert!(t.is_admissible() && !t.is_nondegenerate());
        let t = Tuple4::from_angles([0.0, 0.0, 0.0, 1.0]).unwrap();
        assert!(!t.is_admissible());
    }

    #[test]
    fn directed_arcs() {
        let a = CirclePoint::new(1.0).unwrap();
        let b = CirclePoint::new(2.0).unwrap();
        let avoid = CirclePoint::new(1.5).unwrap();
        let arc = DirArc::avoiding(a, b, avoid);
        assert!(!arc.ccw);
        assert!((arc.len - (2.0 * PI - 1.0)).abs() < 1e-14);
        assert!(arc.contains(CirclePoint::new(0.0).unwrap()));
        let m = arc.at(0.5);
        assert!((m.theta() - 0.5).abs() < 1e-15);
        assert!((arc.param(m) - 0.5).abs() < 1e-15);
    }
}
