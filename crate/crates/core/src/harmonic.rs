//! Harmonic pairs, conjugation, lines, common perpendiculars and strips.

use serde::{Deserialize, Serialize};

use crate::bisect::bisect;
use crate::circle::{CirclePoint, PointPair};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::structure::MoebiusStructure;

/// Two mutually separating pairs with vanishing harmonicity residual.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "S: Scalar", deserialize = "S: Scalar"))]
pub struct HarmonicPair<S = f64> {
    pub a: PointPair<S>,
    pub b: PointPair<S>,
    pub residual: S,
}

impl<S: Scalar> HarmonicPair<S> {
    pub fn new(m: &MoebiusStructure<S>, a: PointPair<S>, b: PointPair<S>) -> Result<Self> {
        if !a.separates(&b) {
            return Err(Error::Domain("axes of a harmonic pair must separate each other".into()));
        }
        let residual = harmonic_residual(m, &a, &b)?;
        if residual > S::harm_tol() {
            return Err(Error::Domain(format!("pairs are not harmonic (residual {residual})")));
        }
        Ok(Self { a, b, residual })
    }

    /// Swaps left and right axes.
    pub fn swap(&self) -> Self {
        Self { a: self.b, b: self.a, residual: self.residual }
    }

    /// Equality as unordered pairs of unordered pairs.
    pub fn same_hm(&self, other: &Self, tol: S) -> bool {
        (self.a.approx_eq(&other.a, tol) && self.b.approx_eq(&other.b, tol))
            || (self.a.approx_eq(&other.b, tol) && self.b.approx_eq(&other.a, tol))
    }

    pub fn axes(&self) -> [PointPair<S>; 2] {
        [self.a, self.b]
    }

    /// True if `w` is an endpoint of either axis.
    pub fn touches(&self, w: CirclePoint<S>) -> bool {
        self.a.contains(w) || self.b.contains(w)
    }
}

/// `|ln(|xz||yu| / (|xu||yz|))|` for `a = (x, y)`, `b = (z, u)`.
pub fn harmonic_residual<S: Scalar>(m: &MoebiusStructure<S>, a: &PointPair<S>, b: &PointPair<S>) -> Result<S> {
    if a.shares_point(b) {
        return Err(Error::Domain("harmonic residual needs four distinct points".into()));
    }
    let pts = [a.p(), a.q(), b.p(), b.q()];
    for i in 0..4 {
        for j in i + 1..4 {
            if pts[i].angular_distance(pts[j]) < S::sep_min() {
                return Err(Error::Precision("points closer than SEP_MIN".into()));
            }
        }
    }
    Ok(m.log_cross(a.p(), a.q(), b.p(), b.q()).abs())
}

/// The harmonic conjugate `ρ_a(x)`: the point `y` with `(a, (x, y))` harmonic.
/// Endpoints of `a` are fixed.
pub fn conjugate<S: Scalar>(m: &MoebiusStructure<S>, a: &PointPair<S>, x: CirclePoint<S>) -> Result<CirclePoint<S>> {
    let Some(home) = a.arc_containing(x) else {
        return Ok(x);
    };
    let arc = if home == a.arc_pos() { a.arc_neg() } else { a.arc_pos() };
    let (e0, e1) = (arc.start, arc.end());
    // ln(|e0 x||e1 y| / (|e0 y||e1 x|)) runs from +∞ at e0 to -∞ at e1.
    let t = bisect(|t| m.log_cross(e0, e1, x, arc.at(t)), S::zero(), arc.len, true, S::zero(), "conjugate")?;
    Ok(arc.at(t))
}

/// A harmonic pair `((x, y), (z, ρ_{(x,y)}(z)))` from three random points.
pub fn random_harmonic_pair<S: Scalar>(m: &MoebiusStructure<S>, rng: &mut impl rand::Rng) -> Result<HarmonicPair<S>> {
    let p = crate::sampling::cyclic_points::<S>(rng, 3, false);
    let a = PointPair::new(p[0], p[1])?;
    let u = conjugate(m, &a, p[2])?;
    HarmonicPair::new(m, a, PointPair::new(p[2], u)?)
}

/// Projection `x_a = (x, ρ_a(x))` of a point onto the line with axis `a`.
pub fn project_point<S: Scalar>(m: &MoebiusStructure<S>, a: &PointPair<S>, x: CirclePoint<S>) -> Result<PointPair<S>> {
    if a.contains(x) {
        return Err(Error::Domain("cannot project an endpoint of the axis".into()));
    }
    PointPair::new(x, conjugate(m, a, x)?)
}

/// The unique pair harmonic to both `b` and `b1`, for strongly causal inputs.
pub fn common_perpendicular<S: Scalar>(m: &MoebiusStructure<S>, b: &PointPair<S>, b1: &PointPair<S>) -> Result<PointPair<S>> {
    if b.shares_point(b1) {
        return Err(Error::Domain("pairs share a point".into()));
    }
    if b.separates(b1) {
        return Err(Error::Domain("pairs separate each other: no common perpendicular".into()));
    }
    // A: arc of b away from b1; C: the complementary arc, containing b1.
    let (arc_a, arc_c) = if b.arc_pos().contains(b1.p()) {
        (b.arc_neg(), b.arc_pos())
    } else {
        (b.arc_pos(), b.arc_neg())
    };
    let mismatch = |t: S| -> S {
        let v = arc_a.at(t);
        match (conjugate(m, b, v), conjugate(m, b1, v)) {
            (Ok(w), Ok(u)) => arc_c.offset(w) - arc_c.offset(u),
            _ => S::nan(),
        }
    };
    // Near the start of A, ρ_b(v) sits at the far end of C; near its end, at the near end.
    let t = bisect(
        |t| {
            if t <= S::zero() {
                S::one()
            } else if t >= arc_a.len {
                -S::one()
            } else {
                mismatch(t)
            }
        },
        S::zero(),
        arc_a.len,
        true,
        S::zero(),
        "common perpendicular",
    )?;
    let v = arc_a.at(t);
    let w = conjugate(m, b, v)?;
    let axis = PointPair::new(v, w)?;
    for (name, other) in [("first", b), ("second", b1)] {
        let r = harmonic_residual(m, &axis, other)?;
        if r > S::harm_tol() {
            return Err(Error::Structure(format!("perpendicular misses the {name} pair (residual {r})")));
        }
    }
    Ok(axis)
}

/// Signed position of `b1` relative to `b` on the line with axis `axis`:
/// `ln(|x z1||y z| / (|x z||y z1|))` with `axis = (x, y)`, `z ∈ b`, `z1 ∈ b1`.
pub fn line_offset<S: Scalar>(m: &MoebiusStructure<S>, axis: &PointPair<S>, b: &PointPair<S>, b1: &PointPair<S>) -> S {
    m.log_cross(axis.p(), axis.q(), b1.p(), b.p())
}

fn check_on_line<S: Scalar>(m: &MoebiusStructure<S>, axis: &PointPair<S>, b: &PointPair<S>) -> Result<()> {
    if !axis.separates(b) {
        return Err(Error::Domain("pair does not lie on the line".into()));
    }
    let r = harmonic_residual(m, axis, b)?;
    if r > S::harm_tol() {
        return Err(Error::Domain(format!("pair does not lie on the line (residual {r})")));
    }
    Ok(())
}

/// Distance along the line with axis `axis` between its points `b` and `b1`.
pub fn line_distance<S: Scalar>(m: &MoebiusStructure<S>, axis: &PointPair<S>, b: &PointPair<S>, b1: &PointPair<S>) -> Result<S> {
    check_on_line(m, axis, b)?;
    check_on_line(m, axis, b1)?;
    Ok(line_offset(m, axis, b, b1).abs())
}

/// The line `h_a`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "S: Scalar", deserialize = "S: Scalar"))]
pub struct Line<S = f64> {
    pub axis: PointPair<S>,
}

impl<S: Scalar> Line<S> {
    pub fn new(axis: PointPair<S>) -> Self {
        Self { axis }
    }

    /// The point of the line through `x`.
    pub fn project(&self, m: &MoebiusStructure<S>, x: CirclePoint<S>) -> Result<PointPair<S>> {
        project_point(m, &self.axis, x)
    }

    /// The point of the line at signed offset `t` from `origin`.
    pub fn walk(&self, m: &MoebiusStructure<S>, origin: &PointPair<S>, t: S) -> Result<PointPair<S>> {
        check_on_line(m, &self.axis, origin)?;
        if t == S::zero() {
            return Ok(*origin);
        }
        // Move the endpoint of `origin` lying on the positive arc of the axis.
        let arc = self.axis.arc_pos();
        let z = if arc.contains(origin.p()) { origin.p() } else { origin.q() };
        let (x, y) = (self.axis.p(), self.axis.q());
        let f = |s: S| m.log_cross(x, y, arc.at(s), z) - t;
        // Offset tends to -∞ at the x-end of the arc and +∞ at the y-end.
        let s = bisect(f, S::zero(), arc.len, false, S::zero(), "line walk")?;
        self.project(m, arc.at(s))
    }
}

/// A segment of a line between two of its points.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "S: Scalar", deserialize = "S: Scalar"))]
pub struct Segment<S = f64> {
    pub axis: PointPair<S>,
    pub b_start: PointPair<S>,
    pub b_end: PointPair<S>,
    pub length: S,
}

impl<S: Scalar> Segment<S> {
    pub fn new(m: &MoebiusStructure<S>, axis: PointPair<S>, b_start: PointPair<S>, b_end: PointPair<S>) -> Result<Self> {
        let length = line_distance(m, &axis, &b_start, &b_end)?;
        Ok(Self { axis, b_start, b_end, length })
    }

    pub fn start(&self) -> (PointPair<S>, PointPair<S>) {
        (self.axis, self.b_start)
    }

    pub fn end(&self) -> (PointPair<S>, PointPair<S>) {
        (self.axis, self.b_end)
    }
}

/// Two strongly causal pairs together with their common perpendicular.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "S: Scalar", deserialize = "S: Scalar"))]
pub struct Strip<S = f64> {
    pub a: PointPair<S>,
    pub b: PointPair<S>,
    pub s: PointPair<S>,
    pub width: S,
}

/// Labels `(x, y, z, u)` of a strip `a = (x, y)`, `b = (u, z)`: the cyclic
/// order is `x y z u`, so the crossed pairs `(x, z)`, `(u, y)` separate.
pub fn strip_labels<S: Scalar>(a: &PointPair<S>, b: &PointPair<S>) -> Result<[CirclePoint<S>; 4]> {
    if !a.strongly_causal(b) {
        return Err(Error::Domain("not a strip: pairs are not in strong causal relation".into()));
    }
    let base = a.p();
    let mut pts = [a.p(), a.q(), b.p(), b.q()];
    pts.sort_by(|s, t| s.ccw_offset(base).partial_cmp(&t.ccw_offset(base)).unwrap());
    // Rotate so that the two points of `a` come first.
    let in_a = |x: &CirclePoint<S>| a.contains(*x);
    for r in 0..4 {
        let rot = [pts[r], pts[(r + 1) % 4], pts[(r + 2) % 4], pts[(r + 3) % 4]];
        if in_a(&rot[0]) && in_a(&rot[1]) {
            return Ok(rot);
        }
    }
    Err(Error::Domain("not a strip".into()))
}

/// `2 sqrt(|xu||yz| / (|xy||zu|))`, the a priori bound on the strip width.
pub fn strip_bound<S: Scalar>(m: &MoebiusStructure<S>, a: &PointPair<S>, b: &PointPair<S>) -> Result<S> {
    let [x, y, z, u] = strip_labels(a, b)?;
    Ok(S::lit(2.0) * (m.log_cross(x, z, u, y) / S::lit(2.0)).exp())
}

/// The associated strip `((x, u), (y, z))`.
pub fn associated_strip<S: Scalar>(a: &PointPair<S>, b: &PointPair<S>) -> Result<(PointPair<S>, PointPair<S>)> {
    let [x, y, z, u] = strip_labels(a, b)?;
    Ok((PointPair::new(x, u)?, PointPair::new(y, z)?))
}

/// Width of the strip `(a, b)` measured along the common perpendicular.
pub fn strip_width<S: Scalar>(m: &MoebiusStructure<S>, a: &PointPair<S>, b: &PointPair<S>) -> Result<Strip<S>> {
    strip_labels(a, b)?;
    let s = common_perpendicular(m, a, b)?;
    let width = line_distance(m, &s, a, b)?;
    Ok(Strip { a: *a, b: *b, s, width })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m() -> MoebiusStructure<f64> {
        MoebiusStructure::canonical()
    }
    fn w() -> CirclePoint {
        CirclePoint::north()
    }
    fn c(s: f64) -> CirclePoint {
        CirclePoint::from_chart(w(), s)
    }
    fn pair(a: f64, b: f64) -> PointPair {
        PointPair::new(c(a), c(b)).unwrap()
    }
    fn pair_inf(a: f64) -> PointPair {
        PointPair::new(c(a), w()).unwrap()
    }

    #[test]
    fn residual_examples() {
        let r = harmonic_residual(&m(), &pair(-1.0, 1.0), &pair_inf(0.0)).unwrap();
        assert!(r < 1e-12);
        let r = harmonic_residual(&m(), &pair(-1.0, 1.0), &pair(3.0, 1.0 / 3.0)).unwrap();
        assert!(r < 1e-12);
        let r = harmonic_residual(&m(), &pair(0.0, 2.0), &pair(1.0, 5.0)).unwrap();
        assert!((r - (3.0f64 / 5.0).ln().abs()).abs() < 1e-12);
    }

    #[test]
    fn conjugate_examples() {
        let y = conjugate(&m(), &pair(-1.0, 1.0), c(3.0)).unwrap();
        assert!((y.chart_coord(w()).unwrap() - 1.0 / 3.0).abs() < 1e-12);
        let y = conjugate(&m(), &pair(0.0, 2.0), c(1.0)).unwrap();
        assert!(y.angular_distance(w()) < 1e-12);
        let a = pair(0.0, 2.0);
        assert_eq!(conjugate(&m(), &a, a.p()).unwrap(), a.p());
    }

    #[test]
    fn perpendicular_symmetric_example() {
        let s = common_perpendicular(&m(), &pair(-1.0, 1.0), &pair(-4.0, 4.0)).unwrap();
        let expect = pair_inf(0.0);
        assert!(s.approx_eq(&expect, 1e-9), "{s}");
        assert!(matches!(
            common_perpendicular(&m(), &pair(0.0, 2.0), &pair(1.0, 3.0)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn line_distance_examples() {
        let d = line_distance(&m(), &pair(-1.0, 1.0), &pair_inf(0.0), &pair(0.5, 2.0)).unwrap();
        assert!((d - 3f64.ln()).abs() < 1e-12);
        let o = pair_inf(0.0);
        let d = line_distance(&m(), &o, &pair(-1.0, 1.0), &pair(-2.5, 2.5)).unwrap();
        assert!((d - 2.5f64.ln()).abs() < 1e-12);
        assert_eq!(line_distance(&m(), &o, &pair(-1.0, 1.0), &pair(-1.0, 1.0)).unwrap(), 0.0);
        assert!(line_distance(&m(), &o, &pair(-1.0, 2.0), &pair(-1.0, 1.0)).is_err());
    }

    #[test]
    fn strip_example() {
        let (a, b) = (pair(-1.0, 1.0), pair(-4.0, 4.0));
        let s = strip_width(&m(), &a, &b).unwrap();
        assert!((s.width - 4f64.ln()).abs() < 1e-9);
        assert!((strip_bound(&m(), &a, &b).unwrap() - 1.5).abs() < 1e-12);
    }

    #[test]
    fn line_walk_lands_at_offset() {
        let axis = pair(-1.0, 1.0);
        let line = Line::new(axis);
        let o = pair_inf(0.0);
        for t in [-2.0, 0.7, 3.0] {
            let b = line.walk(&m(), &o, t).unwrap();
            assert!((line_offset(&m(), &axis, &o, &b) - t).abs() < 1e-9);
        }
    }
}
