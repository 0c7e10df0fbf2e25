//! Spheres and the harmonic pairs they define in a fixed chart `X_ω`.

use serde::{Deserialize, Serialize};

use crate::bisect::{bisect, expand_until};
use crate::circle::{CirclePoint, PointPair};
use crate::error::{Error, Result};
use crate::harmonic::HarmonicPair;
use crate::scalar::Scalar;
use crate::structure::MoebiusStructure;

/// A sphere `S_r(o) = (a, b)` of `X_ω`, in chart coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "S: Scalar", deserialize = "S: Scalar"))]
pub struct Ball<S = f64> {
    pub center: S,
    pub radius: S,
    pub a: S,
    pub b: S,
}

impl<S: Scalar> Ball<S> {
    /// Solves `|ao|_ω = |ob|_ω = r` with `a < o < b`.
    pub fn new(m: &MoebiusStructure<S>, omega: CirclePoint<S>, o: S, r: S) -> Result<Self> {
        if !(r > S::zero()) || !o.is_finite() {
            return Err(Error::Parameter(format!("sphere needs r > 0 and finite center, got o={o}, r={r}")));
        }
        if m.is_canonical() {
            return Ok(Self { center: o, radius: r, a: o - r, b: o + r });
        }
        let lr = r.ln();
        let side = |dir: S| -> Result<S> {
            let f = |d: S| m.log_dist_coords(omega, o, o + dir * d) - lr;
            let hi = expand_until(S::zero(), r, |d| f(d) >= S::zero(), "sphere")?;
            bisect(f, S::zero(), hi, false, S::zero(), "sphere")
        };
        let (da, db) = (side(-S::one())?, side(S::one())?);
        Ok(Self { center: o, radius: r, a: o - da, b: o + db })
    }

    /// Closed-ball containment `self ⊂ other`.
    pub fn inside(&self, other: &Self) -> bool {
        other.a <= self.a && self.b <= other.b
    }

    /// Closed balls intersect.
    pub fn meets(&self, other: &Self) -> bool {
        self.a <= other.b && other.a <= self.b
    }

    /// The sphere as a pair of circle points.
    pub fn pair(&self, omega: CirclePoint<S>) -> Result<PointPair<S>> {
        PointPair::new(CirclePoint::from_chart(omega, self.a), CirclePoint::from_chart(omega, self.b))
    }

    /// The axis `(o, ω)`.
    pub fn axis(&self, omega: CirclePoint<S>) -> Result<PointPair<S>> {
        PointPair::new(CirclePoint::from_chart(omega, self.center), omega)
    }

    /// The harmonic pair `((a, b), (o, ω))`.
    pub fn harmonic(&self, m: &MoebiusStructure<S>, omega: CirclePoint<S>) -> Result<HarmonicPair<S>> {
        HarmonicPair::new(m, self.pair(omega)?, self.axis(omega)?)
    }
}

/// Reads a harmonic pair touching `omega` as a sphere of `X_ω`.
pub fn as_ball<S: Scalar>(m: &MoebiusStructure<S>, omega: CirclePoint<S>, q: &HarmonicPair<S>) -> Option<Ball<S>> {
    let (axis, sphere) = if q.b.contains(omega) {
        (q.b, q.a)
    } else if q.a.contains(omega) {
        (q.a, q.b)
    } else {
        return None;
    };
    let o = axis.other(omega).chart_coord(omega)?;
    let (mut a, mut b) = (sphere.p().chart_coord(omega)?, sphere.q().chart_coord(omega)?);
    if a > b {
        std::mem::swap(&mut a, &mut b);
    }
    let r = m.log_dist_coords(omega, a, o).exp();
    Some(Ball { center: o, radius: r, a, b })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::StructureSpec;

    #[test]
    fn canonical_sphere() {
        let m = MoebiusStructure::<f64>::canonical();
        let b = Ball::new(&m, CirclePoint::north(), 2.0, 0.5).unwrap();
        assert_eq!((b.a, b.b), (1.5, 2.5));
    }

    #[test]
    fn pullback_sphere_is_equidistant() {
        let m: MoebiusStructure<f64> = serde_json::from_str::<StructureSpec>(
            r#"{"structure":"pullback","phi":{"kind":"sine","eps":0.3}}"#,
        )
        .unwrap()
        .build()
        .unwrap();
        let w = CirclePoint::north();
        let b = Ball::new(&m, w, 0.7, 0.2).unwrap();
        let ra = m.log_dist_coords(w, b.a, 0.7).exp();
        let rb = m.log_dist_coords(w, 0.7, b.b).exp();
        assert!((ra - 0.2).abs() < 1e-12 && (rb - 0.2).abs() < 1e-12);
        let h = b.harmonic(&m, w).unwrap();
        assert!(h.residual < 1e-9);
        let back = as_ball(&m, w, &h).unwrap();
        assert!((back.center - 0.7).abs() < 1e-9 && (back.radius - 0.2).abs() < 1e-9);
    }
}
