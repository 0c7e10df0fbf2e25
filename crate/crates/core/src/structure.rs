//! Möbius structures: the canonical one, pullbacks by circle homeomorphisms,
//! and custom chart semimetrics.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::circle::{CirclePoint, Tuple4};
use crate::error::{Error, Result};
use crate::sampling::sample_rng;
use crate::scalar::Scalar;

/// An orientation-preserving homeomorphism of the circle, given by a lift
/// `Φ: R → R` with `Φ(θ + 2π) = Φ(θ) + 2π`.
pub trait CircleMap<S: Scalar>: Send + Sync {
    fn apply(&self, theta: S) -> S;

    /// `Φ(a) - Φ(b)`; override when a cancellation-free form exists.
    fn diff(&self, a: S, b: S) -> S {
        self.apply(a) - self.apply(b)
    }

    fn label(&self) -> String;
}

/// `θ ↦ θ + ε sin θ`, a homeomorphism for `|ε| < 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SineWarp<S> {
    eps: S,
}

impl<S: Scalar> SineWarp<S> {
    pub fn new(eps: S) -> Result<Self> {
        if !(eps.abs() < S::one()) {
            return Err(Error::Parameter(format!("sine warp needs |eps| < 1, got {eps}")));
        }
        Ok(Self { eps })
    }
}

impl<S: Scalar> CircleMap<S> for SineWarp<S> {
    fn apply(&self, t: S) -> S {
        t + self.eps * t.sin()
    }

    fn diff(&self, a: S, b: S) -> S {
        let two = S::lit(2.0);
        let d = a - b;
        d + two * self.eps * ((a + b) / two).cos() * (d / two).sin()
    }

    fn label(&self) -> String {
        format!("sine(eps={})", self.eps)
    }
}

/// The identity map.
#[derive(Clone, Copy, Debug, Default)]
pub struct IdentityMap;

impl<S: Scalar> CircleMap<S> for IdentityMap {
    fn apply(&self, t: S) -> S {
        t
    }
    fn diff(&self, a: S, b: S) -> S {
        a - b
    }
    fn label(&self) -> String {
        "identity".into()
    }
}

/// A user-supplied lift, certified monotone on a grid at construction.
pub struct FnMap<S> {
    f: Box<dyn Fn(S) -> S + Send + Sync>,
    label: String,
}

impl<S: Scalar> FnMap<S> {
    pub fn new(label: &str, f: impl Fn(S) -> S + Send + Sync + 'static) -> Result<Self> {
        let n = 4096;
        let tau = S::two_pi();
        let f0 = f(S::zero());
        let mut prev = f0;
        for k in 1..=n {
            let v = f(tau * S::lit(k as f64 / n as f64));
            if !(v > prev) {
                return Err(Error::Parameter(format!("map '{label}' is not strictly increasing")));
            }
            prev = v;
        }
        if ((prev - f0) - tau).abs() > S::lit(1e-9).max(S::epsilon() * S::lit(64.0)) {
            return Err(Error::Parameter(format!("map '{label}' is not a degree-one lift")));
        }
        Ok(Self { f: Box::new(f), label: label.to_string() })
    }
}

impl<S: Scalar> CircleMap<S> for FnMap<S> {
    fn apply(&self, t: S) -> S {
        (self.f)(t)
    }
    fn label(&self) -> String {
        self.label.clone()
    }
}

/// A semimetric on the stereographic coordinates of a fixed chart.
pub struct CustomSemimetric<S> {
    base: CirclePoint<S>,
    d: Box<dyn Fn(S, S) -> S + Send + Sync>,
    label: String,
}

impl<S: Scalar> CustomSemimetric<S> {
    /// `d` acts on chart coordinates of the chart based at `base`. The function
    /// is smoke-tested on 1000 random coordinate pairs.
    pub fn new(label: &str, base: CirclePoint<S>, d: impl Fn(S, S) -> S + Send + Sync + 'static) -> Result<Self> {
        let mut rng = sample_rng(0x5eed, 0);
        for _ in 0..1000 {
            let x = S::lit(rng.gen_range(-50.0..50.0));
            let y = S::lit(rng.gen_range(-50.0..50.0));
            let (dxy, dyx, dxx) = (d(x, y), d(y, x), d(x, x));
            let scale = dxy.abs().max(S::one());
            let ok = dxy.is_finite()
                && (x == y || dxy > S::zero())
                && (dxy - dyx).abs() <= S::lit(1e-12).max(S::epsilon() * S::lit(8.0)) * scale
                && dxx == S::zero();
            if !ok {
                return Err(Error::Parameter(format!(
                    "semimetric '{label}' failed the smoke test at ({x}, {y})"
                )));
            }
        }
        Ok(Self { base, d: Box::new(d), label: label.to_string() })
    }

    #[inline]
    fn g(&self, x: CirclePoint<S>, y: CirclePoint<S>) -> S {
        // Terms touching the base point cancel in every ratio we form.
        match (x.chart_coord(self.base), y.chart_coord(self.base)) {
            (Some(a), Some(b)) => (self.d)(a, b).ln(),
            _ => S::zero(),
        }
    }
}

#[derive(Clone)]
enum Kind<S: Scalar> {
    Canonical,
    Pullback(Arc<dyn CircleMap<S>>),
    Custom(Arc<CustomSemimetric<S>>),
}

/// A Möbius structure on the circle, accessed through chart semimetrics.
#[derive(Clone)]
pub struct MoebiusStructure<S: Scalar = f64> {
    kind: Kind<S>,
    spec: Option<StructureSpec>,
}

impl<S: Scalar> fmt::Debug for MoebiusStructure<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MoebiusStructure({})", self.label())
    }
}

/// Outcome of a chart distance evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum ChartDistance<S> {
    Finite(S),
    Infinite,
}

impl<S: Scalar> ChartDistance<S> {
    pub fn value(self) -> S {
        match self {
            Self::Finite(v) => v,
            Self::Infinite => S::infinity(),
        }
    }
}

/// The three cross-ratios of a 4-tuple, with their logarithms.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrossRatios<S = f64> {
    pub cr1: S,
    pub cr2: S,
    pub cr3: S,
    pub ln: [S; 3],
}

impl<S: Scalar> CrossRatios<S> {
    fn from_logs(l1: S, l2: S) -> Self {
        let l3 = -(l1 + l2);
        Self { cr1: l1.exp(), cr2: l2.exp(), cr3: l3.exp(), ln: [l1, l2, l3] }
    }
}

/// Serializable description of a structure.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "structure", rename_all = "lowercase")]
pub enum StructureSpec {
    Canonical,
    Pullback { phi: PhiSpec },
    /// `d(x, y) = |x - y|^exponent` in the north-pole chart.
    Power { exponent: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PhiSpec {
    Identity,
    Sine { eps: f64 },
}

impl StructureSpec {
    pub fn build<S: Scalar>(&self) -> Result<MoebiusStructure<S>> {
        let mut m = match self {
            Self::Canonical => MoebiusStructure::canonical(),
            Self::Pullback { phi: PhiSpec::Identity } => MoebiusStructure::pullback(Arc::new(IdentityMap)),
            Self::Pullback { phi: PhiSpec::Sine { eps } } => {
                MoebiusStructure::pullback(Arc::new(SineWarp::new(S::lit(*eps))?))
            }
            Self::Power { exponent } => {
                if !(*exponent > 0.0 && *exponent <= 1.0) {
                    return Err(Error::Parameter(format!("power exponent must lie in (0, 1], got {exponent}")));
                }
                let e = S::lit(*exponent);
                MoebiusStructure::custom(CustomSemimetric::new(
                    &format!("power({exponent})"),
                    CirclePoint::north(),
                    move |x: S, y: S| (x - y).abs().powf(e),
                )?)
            }
        };
        m.spec = Some(self.clone());
        Ok(m)
    }
}

impl<S: Scalar> MoebiusStructure<S> {
    pub fn canonical() -> Self {
        Self { kind: Kind::Canonical, spec: Some(StructureSpec::Canonical) }
    }

    pub fn pullback(phi: Arc<dyn CircleMap<S>>) -> Self {
        Self { kind: Kind::Pullback(phi), spec: None }
    }

    pub fn custom(d: CustomSemimetric<S>) -> Self {
        Self { kind: Kind::Custom(Arc::new(d)), spec: None }
    }

    pub fn is_canonical(&self) -> bool {
        matches!(self.kind, Kind::Canonical)
    }

    /// The descriptor this structure was built from, if any.
    pub fn spec(&self) -> Option<&StructureSpec> {
        self.spec.as_ref()
    }

    pub fn label(&self) -> String {
        match &self.kind {
            Kind::Canonical => "canonical".into(),
            Kind::Pullback(phi) => format!("pullback[{}]", phi.label()),
            Kind::Custom(c) => format!("custom[{}]", c.label),
        }
    }

    /// `ln |2 sin((Φx - Φy)/2)|`, the log chordal distance after the warp.
    #[inline]
    fn chord_log(&self, x: CirclePoint<S>, y: CirclePoint<S>) -> S {
        let d = match &self.kind {
            Kind::Pullback(phi) => phi.diff(x.theta(), y.theta()),
            _ => x.theta() - y.theta(),
        };
        (S::lit(2.0) * (d / S::lit(2.0)).sin()).abs().ln()
    }

    /// Chart-free `ln(|xz||yu| / (|xu||yz|))`.
    #[inline]
    pub fn log_cross(&self, x: CirclePoint<S>, y: CirclePoint<S>, z: CirclePoint<S>, u: CirclePoint<S>) -> S {
        match &self.kind {
            Kind::Custom(c) => c.g(x, z) + c.g(y, u) - c.g(x, u) - c.g(y, z),
            _ => self.chord_log(x, z) + self.chord_log(y, u) - self.chord_log(x, u) - self.chord_log(y, z),
        }
    }

    /// Unchecked `ln |xy|_ω`: `-∞` on the diagonal, `+∞` when one point is `ω`.
    #[inline]
    pub fn log_dist(&self, omega: CirclePoint<S>, x: CirclePoint<S>, y: CirclePoint<S>) -> S {
        if x == y {
            return S::neg_infinity();
        }
        if x == omega || y == omega {
            return S::infinity();
        }
        match &self.kind {
            Kind::Custom(c) => {
                if omega == c.base {
                    c.g(x, y)
                } else {
                    c.g(x, y) - c.g(x, omega) - c.g(y, omega)
                }
            }
            _ => S::LN_2() + self.chord_log(x, y) - self.chord_log(x, omega) - self.chord_log(y, omega),
        }
    }

    /// `ln |s1 s2|_ω` for two chart coordinates of the chart based at `omega`.
    #[inline]
    pub fn log_dist_coords(&self, omega: CirclePoint<S>, s1: S, s2: S) -> S {
        match &self.kind {
            Kind::Canonical => (s1 - s2).abs().ln(),
            Kind::Custom(c) if c.base == omega => (c.d)(s1, s2).ln(),
            _ => self.log_dist(omega, CirclePoint::from_chart(omega, s1), CirclePoint::from_chart(omega, s2)),
        }
    }

    /// Chart distance `|xy|_ω` with the documented error conventions.
    pub fn chart_distance(&self, omega: CirclePoint<S>, x: CirclePoint<S>, y: CirclePoint<S>) -> Result<ChartDistance<S>> {
        if x == y {
            return Ok(ChartDistance::Finite(S::zero()));
        }
        if x == omega || y == omega {
            return Ok(ChartDistance::Infinite);
        }
        if x.angular_distance(omega) < S::sep_min() || y.angular_distance(omega) < S::sep_min() {
            return Err(Error::Precision("point within SEP_MIN of the chart base".into()));
        }
        Ok(ChartDistance::Finite(self.log_dist(omega, x, y).exp()))
    }

    /// Chart base among 64 equispaced candidates that stays farthest from `pts`.
    pub fn select_chart(&self, pts: &[CirclePoint<S>]) -> CirclePoint<S> {
        if let Kind::Custom(c) = &self.kind {
            if pts.iter().all(|p| p.angular_distance(c.base) >= S::lit(0.05)) {
                return c.base;
            }
        }
        let mut best = (S::neg_infinity(), CirclePoint::from_angle(S::zero()));
        for k in 0..64 {
            let w = CirclePoint::from_angle(S::two_pi() * S::lit(k as f64 / 64.0));
            let m = pts.iter().map(|p| p.angular_distance(w)).fold(S::infinity(), |a, b| a.min(b));
            if m > best.0 {
                best = (m, w);
            }
        }
        best.1
    }

    /// The six log-distances `[xy, xz, xu, yz, yu, zu]` in the chart `omega`.
    pub fn six_logs(&self, omega: CirclePoint<S>, q: &Tuple4<S>) -> [S; 6] {
        let [x, y, z, u] = q.x;
        [
            self.log_dist(omega, x, y),
            self.log_dist(omega, x, z),
            self.log_dist(omega, x, u),
            self.log_dist(omega, y, z),
            self.log_dist(omega, y, u),
            self.log_dist(omega, z, u),
        ]
    }

    /// Cross-ratios evaluated in a safe chart.
    ///
    /// Tuples with an entry repeated three or more times are rejected.
    /// Admissible tuples with one repeated pair yield the limiting values
    /// `0` or `+∞`; distinct but nearly coincident entries are a precision error.
    pub fn cross_ratios(&self, q: &Tuple4<S>) -> Result<CrossRatios<S>> {
        self.cross_ratios_in(self.select_chart(&q.x), q)
    }

    /// Cross-ratios evaluated in a caller-chosen chart.
    pub fn cross_ratios_in(&self, omega: CirclePoint<S>, q: &Tuple4<S>) -> Result<CrossRatios<S>> {
        if !q.is_admissible() {
            return Err(Error::Domain("inadmissible tuple: an entry occurs at least three times".into()));
        }
        if q.min_separation() < S::sep_min() {
            return Err(Error::Precision("tuple entries closer than SEP_MIN".into()));
        }
        if q.x.contains(&omega) {
            return Err(Error::Domain("chart base is an entry of the tuple".into()));
        }
        let [xy, xz, xu, yz, yu, zu] = self.six_logs(omega, q);
        // cr1 = |x1x3||x2x4|/(|x1x4||x2x3|), cr2 = |x1x4||x2x3|/(|x1x2||x3x4|)
        let l1 = if q.x[0] == q.x[1] || q.x[2] == q.x[3] {
            S::zero()
        } else {
            xz + yu - xu - yz
        };
        let l2 = if q.x[0] == q.x[2] || q.x[1] == q.x[3] {
            S::zero()
        } else {
            xu + yz - xy - zu
        };
        let l3 = if q.x[0] == q.x[3] || q.x[1] == q.x[2] {
            S::zero()
        } else {
            xy + zu - xz - yu
        };
        // For a repeated pair exactly one log is finite (zero) and the other two
        // are opposite infinities; otherwise the three sum to zero.
        if l1.is_finite() && l2.is_finite() && l3.is_finite() {
            Ok(CrossRatios::from_logs(l1, l2))
        } else {
            Ok(CrossRatios { cr1: l1.exp(), cr2: l2.exp(), cr3: l3.exp(), ln: [l1, l2, l3] })
        }
    }

    /// The point `(ln cr1, ln cr2, ln cr3)` of the plane `a + b + c = 0`.
    pub fn moebius_map(&self, q: &Tuple4<S>) -> Result<[S; 3]> {
        Ok(self.cross_ratios(q)?.ln)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn pt(t: f64) -> CirclePoint {
        CirclePoint::new(t).unwrap()
    }

    #[test]
    fn north_pole_distance_is_two() {
        let m = MoebiusStructure::<f64>::canonical();
        let d = m.chart_distance(CirclePoint::north(), pt(0.0), pt(PI)).unwrap().value();
        assert!((d - 2.0).abs() < 1e-14);
    }

    #[test]
    fn chart_distance_conventions() {
        let m = MoebiusStructure::<f64>::canonical();
        let w = pt(1.0);
        assert_eq!(m.chart_distance(w, pt(2.0), pt(2.0)).unwrap(), ChartDistance::Finite(0.0));
        assert_eq!(m.chart_distance(w, w, pt(2.0)).unwrap(), ChartDistance::Infinite);
        assert!(matches!(m.chart_distance(w, pt(1.0 + 1e-12), pt(2.0)), Err(Error::Precision(_))));
    }

    #[test]
    fn canonical_cross_ratios_example() {
        let m = MoebiusStructure::<f64>::canonical();
        let q = Tuple4::from_chart(CirclePoint::north(), [0.0, 1.0, 2.0, 3.0]);
        let c = m.cross_ratios(&q).unwrap();
        assert!((c.cr1 - 4.0 / 3.0).abs() < 1e-12);
        assert!((c.cr2 - 3.0).abs() < 1e-12);
        assert!((c.cr3 - 0.25).abs() < 1e-12);
        assert!((c.cr1 * c.cr2 * c.cr3 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_admissible_tuple_gives_limits() {
        let m = MoebiusStructure::<f64>::canonical();
        let q = Tuple4::from_angles([0.5, 0.5, 2.0, 4.0]).unwrap();
        let c = m.cross_ratios(&q).unwrap();
        assert_eq!(c.cr1, 1.0);
        assert_eq!(c.cr2, f64::INFINITY);
        assert_eq!(c.cr3, 0.0);
        let bad = Tuple4::from_angles([0.5, 0.5, 0.5, 4.0]).unwrap();
        assert!(matches!(m.cross_ratios(&bad), Err(Error::Domain(_))));
    }

    #[test]
    fn sine_diff_matches_naive() {
        let w = SineWarp::<f64>::new(0.3).unwrap();
        for (a, b) in [(0.1, 2.0), (5.0, 1.0), (3.0, 3.0 + 1e-3)] {
            assert!((w.diff(a, b) - (w.apply(a) - w.apply(b))).abs() < 1e-14);
        }
        assert!(SineWarp::new(1.0f64).is_err());
    }

    #[test]
    fn fn_map_certification() {
        assert!(FnMap::<f64>::new("shift", |t| t + 0.5).is_ok());
        assert!(FnMap::<f64>::new("fold", |t| t + 1.5 * t.sin()).is_err());
        assert!(FnMap::<f64>::new("double", |t| 2.0 * t).is_err());
    }

    #[test]
    fn custom_smoke_test_rejects_asymmetric() {
        let r = CustomSemimetric::<f64>::new("skew", CirclePoint::north(), |x, y| (x - y).abs() * if x < y { 1.0 } else { 2.0 });
        assert!(r.is_err());
    }

    #[test]
    fn spec_round_trip() {
        let s: StructureSpec = serde_json::from_str(r#"{"structure":"pullback","phi":{"kind":"sine","eps":0.3}}"#).unwrap();
        assert_eq!(s, StructureSpec::Pullback { phi: PhiSpec::Sine { eps: 0.3 } });
        let c: StructureSpec = serde_json::from_str(r#"{"structure":"canonical"}"#).unwrap();
        assert_eq!(c, StructureSpec::Canonical);
        let m: MoebiusStructure<f64> = s.build().unwrap();
        assert_eq!(m.spec(), Some(&s));
    }

    #[test]
    fn power_structure_in_its_chart() {
        let m: MoebiusStructure<f64> = StructureSpec::Power { exponent: 0.5 }.build().unwrap();
        let w = CirclePoint::north();
        let d = m.log_dist_coords(w, 0.0, 4.0).exp();
        assert!((d - 2.0).abs() < 1e-12);
    }
}
