//! Fixed-point-free involutions, elliptic quasi-lines, the five-side path
//! between two points of a lifted quasi-line and its diameter bound.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bisect::bisect;
use crate::circle::{CircleArc, CirclePoint, DirArc, PointPair};
use crate::error::{Error, Result};
use crate::harmonic::{common_perpendicular, conjugate, harmonic_residual, HarmonicPair, Segment};
use crate::sampling::{par_samples, random_point};
use crate::scalar::Scalar;
use crate::structure::MoebiusStructure;
use crate::zigzag::ZZPath;

/// `12 + ln 54`, the bound on a five-side path under the `μ` hypothesis.
pub fn five_side_bound<S: Scalar>() -> S {
    S::lit(12.0) + S::lit(54.0).ln()
}

/// Bound on the diameter of a lifted quasi-line, twice [`five_side_bound`].
pub fn diameter_bound<S: Scalar>() -> S {
    S::lit(2.0) * five_side_bound::<S>()
}

type CircleFn<S> = Arc<dyn Fn(CirclePoint<S>) -> CirclePoint<S> + Send + Sync>;

#[derive(Clone)]
enum Generator<S: Scalar> {
    Harmonic { m: MoebiusStructure<S>, q: HarmonicPair<S>, plus: bool },
    Custom { f: CircleFn<S>, label: String },
}

/// An involution of the circle, either `ρ_q^±` or a user callable.
#[derive(Clone)]
pub struct Involution<S: Scalar = f64> {
    gen: Generator<S>,
}

impl<S: Scalar> fmt::Debug for Involution<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.gen {
            Generator::Harmonic { q, plus, .. } => {
                write!(f, "Involution(rho{}[{:?}])", if *plus { "+" } else { "-" }, q)
            }
            Generator::Custom { label, .. } => write!(f, "Involution({label})"),
        }
    }
}

/// Sampled certificate for an involution.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvolutionCert {
    pub samples: usize,
    pub max_roundtrip: f64,
    pub min_displacement: f64,
    pub separation_failures: usize,
}

impl<S: Scalar> Involution<S> {
    /// `ρ_q = ρ_q^+`, the orientation-canonical choice.
    pub fn from_harmonic(m: &MoebiusStructure<S>, q: &HarmonicPair<S>) -> Result<Self> {
        Self::from_harmonic_signed(m, q, true)
    }

    pub fn from_harmonic_signed(m: &MoebiusStructure<S>, q: &HarmonicPair<S>, plus: bool) -> Result<Self> {
        let r = harmonic_residual(m, &q.a, &q.b)?;
        if r > S::harm_tol() || !q.a.separates(&q.b) {
            return Err(Error::Structure(format!("generator is not harmonic (residual {r})")));
        }
        Ok(Self { gen: Generator::Harmonic { m: m.clone(), q: *q, plus } })
    }

    /// Wraps a callable; call [`Involution::certify`] before trusting it.
    pub fn custom(label: &str, f: impl Fn(CirclePoint<S>) -> CirclePoint<S> + Send + Sync + 'static) -> Self {
        Self { gen: Generator::Custom { f: Arc::new(f), label: label.to_string() } }
    }

    /// The antipodal map `θ ↦ θ + π`; in the canonical structure it reads
    /// `t ↦ -1/t` in the chart at the north pole.
    pub fn antipodal() -> Self {
        Self::custom("antipodal", |x: CirclePoint<S>| CirclePoint::from_angle(x.theta() + S::PI()))
    }

    pub fn eval(&self, x: CirclePoint<S>) -> Result<CirclePoint<S>> {
        match &self.gen {
            Generator::Custom { f, .. } => Ok(f(x)),
            Generator::Harmonic { m, q, plus } => {
                let on_plus = CircleArc::ccw(q.a.p(), q.a.q()).contains_closed(x);
                let (first, second) = if on_plus == *plus { (&q.a, &q.b) } else { (&q.b, &q.a) };
                conjugate(m, second, conjugate(m, first, x)?)
            }
        }
    }

    /// Checks involutivity, absence of fixed points and mutual separation of
    /// the pairs `(x, ρx)` on `n` equally spaced points.
    pub fn certify(&self, n: usize) -> Result<InvolutionCert> {
        let n = n.max(8);
        let step = S::two_pi() / S::lit(n as f64);
        let mut pairs = Vec::with_capacity(n);
        let (mut max_rt, mut min_disp) = (0.0f64, f64::INFINITY);
        for i in 0..n {
            let x = CirclePoint::from_angle(step * S::lit(i as f64 + 0.5));
            let y = self.eval(x)?;
            max_rt = max_rt.max(self.eval(y)?.angular_distance(x).f64());
            min_disp = min_disp.min(x.angular_distance(y).f64());
            pairs.push(PointPair::new_unchecked(x, y));
        }
        let mut sep_fail = 0;
        for i in 0..n {
            for j in [i + 1, i + n / 3, i + n / 2] {
                let (a, b) = (pairs[i], pairs[j % n]);
                if !a.approx_eq(&b, S::involution_tol()) && !a.shares_point(&b) && !a.separates(&b) {
                    sep_fail += 1;
                }
            }
        }
        let cert = InvolutionCert { samples: n, max_roundtrip: max_rt, min_displacement: min_disp, separation_failures: sep_fail };
        if max_rt > S::involution_tol().f64() {
            return Err(Error::Structure(format!("map is not an involution (round trip {max_rt})")));
        }
        if !(min_disp > S::sep_min().f64()) {
            return Err(Error::Structure("involution has a fixed point".into()));
        }
        if sep_fail > 0 {
            return Err(Error::Structure(format!("{sep_fail} sampled pairs fail to separate")));
        }
        Ok(cert)
    }

    /// The element `(x, ρx)` of the quasi-line.
    pub fn element(&self, x: CirclePoint<S>) -> Result<PointPair<S>> {
        PointPair::new(x, self.eval(x)?)
    }

    /// True if `a` is an element of the quasi-line within the involution tolerance.
    pub fn is_element(&self, a: &PointPair<S>) -> bool {
        let tol = S::involution_tol();
        match (self.eval(a.p()), self.eval(a.q())) {
            (Ok(x), Ok(y)) => x.angular_distance(a.q()) <= tol && y.angular_distance(a.p()) <= tol,
            _ => false,
        }
    }
}

/// The elliptic quasi-line `e_ρ = {(x, ρx)}` with its lift to harmonic pairs.
#[derive(Clone, Debug)]
pub struct EllipticQuasiLine<S: Scalar = f64> {
    pub rho: Involution<S>,
}

impl<S: Scalar> EllipticQuasiLine<S> {
    pub fn new(rho: Involution<S>) -> Self {
        Self { rho }
    }

    /// The point of the lifted quasi-line whose left axis is `(x, ρx)`.
    pub fn lift(&self, m: &MoebiusStructure<S>, x: CirclePoint<S>) -> Result<HarmonicPair<S>> {
        lift(m, &self.rho, x)
    }

    pub fn project(&self, m: &MoebiusStructure<S>, s: &PointPair<S>) -> Result<PointPair<S>> {
        quasiline_project(m, &self.rho, s)
    }
}

pub fn lift<S: Scalar>(m: &MoebiusStructure<S>, rho: &Involution<S>, x: CirclePoint<S>) -> Result<HarmonicPair<S>> {
    let a = rho.element(x)?;
    let b = quasiline_project(m, rho, &a)?;
    HarmonicPair::new(m, a, b)
}

/// True if both axes of `q` are elements of `e_ρ`.
pub fn on_lifted_quasiline<S: Scalar>(_m: &MoebiusStructure<S>, rho: &Involution<S>, q: &HarmonicPair<S>) -> bool {
    rho.is_element(&q.a) && rho.is_element(&q.b)
}

fn root_on_arc<S: Scalar>(
    m: &MoebiusStructure<S>,
    rho: &Involution<S>,
    s: &PointPair<S>,
    arc: CircleArc<S>,
) -> Result<CirclePoint<S>> {
    let (e0, e1) = (arc.start, arc.end());
    let f = |t: S| -> S {
        if t <= S::zero() {
            return S::one();
        }
        if t >= arc.len {
            return -S::one();
        }
        let z = arc.at(t);
        match rho.eval(z) {
            Ok(rz) => m.log_cross(z, rz, e1, e0),
            Err(_) => S::nan(),
        }
    };
    let _ = s;
    let t = bisect(f, S::zero(), arc.len, true, S::zero(), "quasi-line projection")
        .map_err(|e| Error::Structure(format!("quasi-line projection: {e}")))?;
    Ok(arc.at(t))
}

/// The unique element `t = (z, ρz)` of `e_ρ` harmonic to `s`.
pub fn quasiline_project<S: Scalar>(m: &MoebiusStructure<S>, rho: &Involution<S>, s: &PointPair<S>) -> Result<PointPair<S>> {
    let (r0, r1) = (rho.eval(s.p())?, rho.eval(s.q())?);
    let pos = s.arc_pos();
    let arc = if !pos.contains(r0) && !pos.contains(r1) { pos } else { s.arc_neg() };
    let z = root_on_arc(m, rho, s, arc)?;
    let t = rho.element(z)?;
    let r = harmonic_residual(m, s, &t)?;
    if r > S::harm_tol() {
        return Err(Error::Structure(format!("quasi-line projection residual {r}")));
    }
    Ok(t)
}

/// Roots of the projection equation on the arc of `s` not used by
/// [`quasiline_project`], found by a 64-point sign scan. Each root should be
/// the mirror `ρz` of the primary root, so it yields the same element.
pub fn complementary_roots<S: Scalar>(m: &MoebiusStructure<S>, rho: &Involution<S>, s: &PointPair<S>) -> Result<Vec<PointPair<S>>> {
    let (r0, r1) = (rho.eval(s.p())?, rho.eval(s.q())?);
    let pos = s.arc_pos();
    let arc = if !pos.contains(r0) && !pos.contains(r1) { s.arc_neg() } else { pos };
    let (e0, e1) = (arc.start, arc.end());
    let f = |t: S| -> S {
        let z = arc.at(t);
        rho.eval(z).map(|rz| m.log_cross(z, rz, e1, e0)).unwrap_or(S::nan())
    };
    let n = 64;
    let h = arc.len / S::lit(n as f64 + 1.0);
    let mut out = Vec::new();
    let mut prev = (h, f(h));
    for i in 2..=n {
        let t = h * S::lit(i as f64);
        let v = f(t);
        if prev.1.is_finite() && v.is_finite() && (prev.1 > S::zero()) != (v > S::zero()) {
            if let Ok(r) = bisect(&f, prev.0, t, prev.1 > S::zero(), S::zero(), "complementary root") {
                if let Ok(el) = rho.element(arc.at(r)) {
                    if harmonic_residual(m, s, &el).map(|x| x <= S::harm_tol()).unwrap_or(false) {
                        out.push(el);
                    }
                }
            }
        }
        prev = (t, v);
    }
    Ok(out)
}

/// `h_ω(q) = (s, t)` with `s = (ω, ρ_q ω)` and `t` the projection of `s` to
/// the quasi-line of `ρ_q`; the left axis contains `ω`.
pub fn virtual_projection<S: Scalar>(m: &MoebiusStructure<S>, q: &HarmonicPair<S>, omega: CirclePoint<S>) -> Result<HarmonicPair<S>> {
    let rho = Involution::from_harmonic(m, q)?;
    let s = rho.element(omega)?;
    let t = quasiline_project(m, &rho, &s)?;
    HarmonicPair::new(m, s, t)
}

/// Angular discrepancy between `ρ_q^+` and `ρ_q^-` over `n` equally spaced points.
pub fn plus_minus_discrepancy<S: Scalar>(m: &MoebiusStructure<S>, q: &HarmonicPair<S>, n: usize) -> Result<S> {
    let p = Involution::from_harmonic_signed(m, q, true)?;
    let mi = Involution::from_harmonic_signed(m, q, false)?;
    let step = S::two_pi() / S::lit(n.max(1) as f64);
    let mut worst = S::zero();
    for i in 0..n.max(1) {
        let x = CirclePoint::from_angle(step * S::lit(i as f64 + 0.5));
        worst = worst.max(p.eval(x)?.angular_distance(mi.eval(x)?));
    }
    Ok(worst)
}

/// Labels and equal-thirds data of the five-side construction.
#[derive(Clone, Copy, Debug)]
struct Frame<S> {
    s: CirclePoint<S>,
    t: CirclePoint<S>,
    z: CirclePoint<S>,
    t1: CirclePoint<S>,
    z1: CirclePoint<S>,
    x: CirclePoint<S>,
    y: CirclePoint<S>,
    ln_h: S,
    swapped: bool,
    thirds_spread: S,
}

fn frame<S: Scalar>(m: &MoebiusStructure<S>, p: &HarmonicPair<S>, q: &HarmonicPair<S>) -> Result<Frame<S>> {
    let (s, t) = (q.a.p(), q.a.q());
    let (mut z, mut u) = (p.a.p(), p.a.q());
    if !p.a.separates(&q.a) {
        return Err(Error::Domain("left axes of the two pairs must separate each other".into()));
    }
    let swapped = m.log_cross(u, z, s, t) < S::zero();
    if swapped {
        std::mem::swap(&mut z, &mut u);
    }
    let side = q.a.arc_containing(u).ok_or_else(|| Error::Domain("degenerate labels".into()))?;
    let t1 = if side.contains(q.b.p()) { q.b.p() } else { q.b.q() };
    let z1 = if side.contains(p.b.p()) { p.b.p() } else { p.b.q() };
    let us = DirArc::avoiding(u, s, z);
    let ld = |a: CirclePoint<S>, b: CirclePoint<S>| m.log_dist(t, a, b);
    // y(τ): the point past x = us(τ) with |xy|_t = |ux|_t.
    let y_of = |tau: S| -> Option<(CirclePoint<S>, S)> {
        let x = us.at(tau);
        let lh = ld(u, x);
        if ld(x, s) <= lh {
            return None;
        }
        let sig = bisect(|g| if g <= tau { -S::one() } else { ld(x, us.at(g)) - lh }, tau, us.len, false, S::zero(), "thirds")
            .ok()?;
        Some((us.at(sig), lh))
    };
    let resid = |tau: S| -> S {
        if tau <= S::zero() {
            return S::one();
        }
        match y_of(tau) {
            Some((y, lh)) => ld(y, s) - lh,
            None => -S::one(),
        }
    };
    let tau = bisect(resid, S::zero(), us.len, true, S::zero(), "equal thirds")?;
    let x = us.at(tau);
    let (y, ln_h) = y_of(tau).ok_or_else(|| Error::Precision("equal thirds collapsed".into()))?;
    let thirds = [ld(u, x), ld(x, y), ld(y, s)];
    let spread = thirds.iter().fold(S::neg_infinity(), |a, &b| a.max(b)) - thirds.iter().fold(S::infinity(), |a, &b| a.min(b));
    Ok(Frame { s, t, z, t1, z1, x, y, ln_h, swapped, thirds_spread: spread })
}

/// A five-side path `σ = μαγβν` from `q` to `p` with its side data.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(bound(serialize = "S: Scalar", deserialize = "S: Scalar"))]
pub struct FiveSide<S = f64> {
    pub path: ZZPath<S>,
    /// `[μ, α, γ, β, ν]`.
    pub sides: [S; 5],
    pub h: S,
    /// `h ≤ |st'|_t`, the hypothesis of the `μ` bound.
    pub hypothesis: bool,
    /// `|zz'|_t ≥ h`.
    pub zz_prime_ok: bool,
    /// Roles of `z`, `u` were exchanged to meet the normalization.
    pub swapped: bool,
    /// Relative spread of the three thirds.
    pub thirds_spread: S,
}

impl<S: Scalar> FiveSide<S> {
    pub fn length(&self) -> S {
        self.sides.iter().copied().sum()
    }
}

/// Builds the five-side path from `q` to `p`, two points of the lifted
/// quasi-line of `rho`. A failed hypothesis is flagged, not an error.
pub fn five_side_path<S: Scalar>(
    m: &MoebiusStructure<S>,
    p: &HarmonicPair<S>,
    q: &HarmonicPair<S>,
    rho: &Involution<S>,
) -> Result<FiveSide<S>> {
    if !on_lifted_quasiline(m, rho, p) || !on_lifted_quasiline(m, rho, q) {
        return Err(Error::Domain("both pairs must lie on the lifted quasi-line".into()));
    }
    let f = frame(m, p, q)?;
    let (st, zu) = (q.a, p.a);
    let xy = PointPair::new(f.x, f.y)?;
    let cd = common_perpendicular(m, &xy, &st)?;
    let ef = common_perpendicular(m, &xy, &zu)?;
    let segs = vec![
        Segment::new(m, st, q.b, cd)?,
        Segment::new(m, cd, st, xy)?,
        Segment::new(m, xy, cd, ef)?,
        Segment::new(m, ef, xy, zu)?,
        Segment::new(m, zu, ef, p.b)?,
    ];
    let sides = [segs[0].length, segs[1].length, segs[2].length, segs[3].length, segs[4].length];
    let mut path = ZZPath::new(segs)?;
    let slack = S::margin_tol();
    let hypothesis = m.log_dist(f.t, f.s, f.t1) >= f.ln_h - slack;
    let zz_prime_ok = m.log_dist(f.t, f.z, f.z1) >= f.ln_h - slack;
    if !hypothesis {
        path.flag("hypothesis_failed");
    }
    if f.swapped {
        path.flag("wlog_swap");
    }
    Ok(FiveSide { path, sides, h: f.ln_h.exp(), hypothesis, zz_prime_ok, swapped: f.swapped, thirds_spread: f.thirds_spread })
}

/// Outcome of the two-branch diameter argument for one pair `(p, q)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(bound(serialize = "S: Scalar", deserialize = "S: Scalar"))]
pub struct DiameterSample<S = f64> {
    /// `min` over valid branches; `None` if neither branch is valid.
    pub value: Option<S>,
    pub direct: Option<FiveSide<S>>,
    pub via_j: Option<(FiveSide<S>, FiveSide<S>)>,
}

/// `min(|σ(p,q)|, |σ(p,jq)| + |σ(jq,q)|)` over the branches whose `μ`
/// hypotheses hold.
pub fn quasiline_diameter<S: Scalar>(
    m: &MoebiusStructure<S>,
    rho: &Involution<S>,
    p: &HarmonicPair<S>,
    q: &HarmonicPair<S>,
) -> Result<DiameterSample<S>> {
    let tol = S::lit(1e-12);
    if p.same_hm(q, tol) && p.a.approx_eq(&q.a, tol) {
        return Ok(DiameterSample { value: Some(S::zero()), direct: None, via_j: None });
    }
    let jq = q.swap();
    let direct = if p.a.approx_eq(&q.a, tol) { None } else { Some(five_side_path(m, p, q, rho)?) };
    let via_j = if p.same_hm(&jq, tol) && p.a.approx_eq(&jq.a, tol) {
        None
    } else {
        Some((five_side_path(m, p, &jq, rho)?, five_side_path(m, &jq, q, rho)?))
    };
    let mut value: Option<S> = None;
    let mut take = |v: S| value = Some(value.map_or(v, |w| w.min(v)));
    match &direct {
        Some(d) if d.hypothesis => take(d.length()),
        None => take(S::zero()),
        _ => {}
    }
    if let Some((a, b)) = &via_j {
        if a.hypothesis && b.hypothesis {
            take(a.length() + b.length());
        }
    } else {
        // p = jq: the branch reduces to σ(jq, q).
        if let Some(d) = &direct {
            take(d.length());
        }
    }
    Ok(DiameterSample { value, direct, via_j })
}

/// Path from `from` to `to` along the better valid branch of the diameter
/// argument; flagged `"hypothesis_failed"` when neither branch is valid.
pub fn quasiline_path<S: Scalar>(
    m: &MoebiusStructure<S>,
    rho: &Involution<S>,
    from: &HarmonicPair<S>,
    to: &HarmonicPair<S>,
) -> Result<ZZPath<S>> {
    let d = quasiline_diameter(m, rho, to, from)?;
    let direct = d.direct.as_ref().map(|f| (f.hypothesis, f.length(), f.path.clone()));
    let via = match &d.via_j {
        Some((a, b)) => Some((a.hypothesis && b.hypothesis, a.length() + b.length(), b.path.clone().concat(a.path.clone())?)),
        None => None,
    };
    let mut cands: Vec<(bool, S, ZZPath<S>)> = direct.into_iter().chain(via).collect();
    if cands.is_empty() {
        return Ok(ZZPath::empty());
    }
    cands.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal)));
    let (ok, _, mut path) = cands.swap_remove(0);
    if !ok {
        path.flag("hypothesis_failed");
    }
    Ok(path)
}

/// Parameters `π(u0)`, `π(u1)` along the arc from `t` to `t'`: the first is
/// where the hypothesis of `σ(p(u), q)` starts to hold, the second where the
/// hypothesis of `σ(p(u), jq)` stops holding.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct OverlapSample {
    pub u0: f64,
    pub u1: f64,
    pub overlap: bool,
}

fn hypothesis_at<S: Scalar>(m: &MoebiusStructure<S>, p: &HarmonicPair<S>, q: &HarmonicPair<S>) -> Option<bool> {
    let f = frame(m, p, q).ok()?;
    Some(m.log_dist(f.t, f.s, f.t1) >= f.ln_h)
}

/// Overlap test for `q`, with `t = q.a.q` and `t'` the given endpoint of `q.b`.
pub fn overlap_check<S: Scalar>(
    m: &MoebiusStructure<S>,
    rho: &Involution<S>,
    q: &HarmonicPair<S>,
    t1: CirclePoint<S>,
) -> Result<OverlapSample> {
    let t = q.a.q();
    let arc = DirArc::avoiding(t, t1, q.a.p());
    let jq = q.swap();
    let at = |tau: S, which: bool| -> S {
        if tau <= S::zero() {
            return if which { -S::one() } else { S::one() };
        }
        if tau >= arc.len {
            return if which { S::one() } else { -S::one() };
        }
        let Ok(p) = lift(m, rho, arc.at(tau)) else { return S::nan() };
        let h = if which { hypothesis_at(m, &p, q) } else { hypothesis_at(m, &p, &jq) };
        match h {
            Some(true) => S::one(),
            Some(false) => -S::one(),
            None => S::nan(),
        }
    };
    let tol = arc.len * S::lit(1e-10);
    let u0 = bisect(|x| at(x, true), S::zero(), arc.len, false, tol, "overlap u0")?;
    let u1 = bisect(|x| at(x, false), S::zero(), arc.len, true, tol, "overlap u1")?;
    let (u0, u1) = ((u0 / arc.len).f64(), (u1 / arc.len).f64());
    Ok(OverlapSample { u0, u1, overlap: u0 <= u1 + 1e-9 })
}

/// A bound that failed, with its witness sample.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub sample: usize,
    pub what: String,
    pub value: f64,
    pub bound: f64,
}

/// Aggregate report of [`quasiline_diameter_check`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DiameterReport {
    pub samples: usize,
    pub seed: u64,
    pub max_diameter: f64,
    pub diameter_bound: f64,
    /// Largest `[μ, α, γ, β, ν]` seen; `μ` and `ν` only over paths meeting the hypothesis.
    pub max_sides: [f64; 5],
    pub side_bounds: [f64; 5],
    pub paths: usize,
    pub hypothesis_held: usize,
    /// Paths with `|zz'|_t < h`; informational, not part of `pass`.
    pub zz_prime_failures: usize,
    /// Paths whose `μ` hypothesis fails and whose `ν` exceeds `ln 18`;
    /// informational, not part of `pass`.
    pub nu_unconditional_failures: usize,
    pub max_nu_unconditional: f64,
    pub max_thirds_spread: f64,
    pub overlap_checked: usize,
    pub overlap_failures: usize,
    pub errors: usize,
    pub violations: Vec<Violation>,
    pub pass: bool,
}

fn exceeds(v: f64, bound: f64) -> bool {
    v > bound + 1e-9 * (1.0 + bound)
}

/// Number of samples that also run the overlap test, which is costly.
pub const OVERLAP_SAMPLES: usize = 50;

/// Samples pairs on the lifted quasi-line of `rho`, checks the side bounds,
/// the diameter bound and the overlap property.
pub fn quasiline_diameter_check<S: Scalar>(
    m: &MoebiusStructure<S>,
    rho: &Involution<S>,
    samples: usize,
    seed: u64,
) -> Result<DiameterReport> {
    rho.certify(1024)?;
    let side_bounds = [3f64.ln(), 2.0, 6.0, 4.0, 18f64.ln()];
    let dbound = diameter_bound::<S>().f64();
    struct One {
        value: Option<f64>,
        sides: Vec<([f64; 5], bool, bool, f64)>,
        overlap: Vec<bool>,
        err: bool,
    }
    let res = par_samples(samples, seed, |i, rng| {
        let mut run = || -> Result<One> {
            let lifted = |rng: &mut rand_chacha::ChaCha8Rng| -> Result<HarmonicPair<S>> {
                let q = lift(m, rho, random_point(rng))?;
                Ok(if rng.gen_bool(0.5) { q.swap() } else { q })
            };
            let q = lifted(rng)?;
            let p = lifted(rng)?;
            let d = quasiline_diameter(m, rho, &p, &q)?;
            let mut sides = Vec::new();
            let mut push = |f: &FiveSide<S>| {
                sides.push((f.sides.map(|x| x.f64()), f.hypothesis, f.zz_prime_ok, f.thirds_spread.f64()));
            };
            if let Some(f) = &d.direct {
                push(f);
            }
            if let Some((a, b)) = &d.via_j {
                push(a);
                push(b);
            }
            let mut overlap = Vec::new();
            if i < OVERLAP_SAMPLES {
                for t1 in q.b.points() {
                    overlap.push(overlap_check(m, rho, &q, t1)?.overlap);
                }
            }
            Ok(One { value: d.value.map(|v| v.f64()), sides, overlap, err: false })
        };
        run().unwrap_or(One { value: None, sides: Vec::new(), overlap: Vec::new(), err: true })
    });
    let mut rep = DiameterReport {
        samples,
        seed,
        max_diameter: 0.0,
        diameter_bound: dbound,
        max_sides: [0.0; 5],
        side_bounds,
        paths: 0,
        hypothesis_held: 0,
        zz_prime_failures: 0,
        nu_unconditional_failures: 0,
        max_nu_unconditional: 0.0,
        max_thirds_spread: 0.0,
        overlap_checked: 0,
        overlap_failures: 0,
        errors: 0,
        violations: Vec::new(),
        pass: true,
    };
    for (i, r) in res.into_iter().enumerate() {
        if r.err {
            rep.errors += 1;
            continue;
        }
        match r.value {
            Some(v) => {
                rep.max_diameter = rep.max_diameter.max(v);
                if exceeds(v, dbound) {
                    rep.violations.push(Violation { sample: i, what: "diameter".into(), value: v, bound: dbound });
                }
            }
            None => rep.violations.push(Violation { sample: i, what: "no_valid_branch".into(), value: f64::NAN, bound: dbound }),
        }
        for (sides, hyp, zz, spread) in r.sides {
            rep.max_thirds_spread = rep.max_thirds_spread.max(spread);
            rep.paths += 1;
            if hyp {
                rep.hypothesis_held += 1;
            }
            if !zz {
                rep.zz_prime_failures += 1;
            }
            if !hyp {
                rep.max_nu_unconditional = rep.max_nu_unconditional.max(sides[4]);
                if exceeds(sides[4], side_bounds[4]) {
                    rep.nu_unconditional_failures += 1;
                }
            }
            for k in 0..5 {
                // μ and ν are gated on the hypothesis; see `max_nu_unconditional`.
                if (k == 0 || k == 4) && !hyp {
                    continue;
                }
                rep.max_sides[k] = rep.max_sides[k].max(sides[k]);
                if exceeds(sides[k], side_bounds[k]) {
                    let name = ["mu", "alpha", "gamma", "beta", "nu"][k];
                    rep.violations.push(Violation { sample: i, what: name.into(), value: sides[k], bound: side_bounds[k] });
                }
            }
            if hyp {
                let total: f64 = sides.iter().sum();
                let b = five_side_bound::<S>().f64();
                if exceeds(total, b) {
                    rep.violations.push(Violation { sample: i, what: "five_side".into(), value: total, bound: b });
                }
            }
        }
        for ok in r.overlap {
            rep.overlap_checked += 1;
            if !ok {
                rep.overlap_failures += 1;
                rep.violations.push(Violation { sample: i, what: "overlap".into(), value: 0.0, bound: 0.0 });
            }
        }
    }
    rep.pass = rep.violations.is_empty() && rep.errors == 0;
    Ok(rep)
}
