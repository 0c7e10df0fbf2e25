//! Constructive upper bounds relating `δ` on `Harm_ω` to the graph metric of
//! `Z(σ)`, and falsification checks for the lower bounds.
//!
//! Every bound is checked on an explicit zigzag path, so a passing report is
//! a certificate: the path witnesses `δ ≤ length ≤ bound`.

use std::io::Write;
use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::chart::Ball;
use crate::circle::CirclePoint;
use crate::error::{Error, Result};
use crate::harmonic::{common_perpendicular, HarmonicPair, Segment};
use crate::hyperapprox::{grow_chain, ApproxGraph, BallVertex, DistanceTable, EdgeKind};
use crate::quasilines::diameter_bound;
use crate::sampling::par_samples;
use crate::scalar::Scalar;
use crate::structure::MoebiusStructure;
use crate::zigzag::{delta_upper, ZZPath};

const MAX_WITNESSES: usize = 20;

/// One checked sample.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleRow {
    pub sample: usize,
    pub measured: f64,
    pub bound: f64,
    pub ratio: f64,
    /// Chart coordinates (center, radius) of the pairs involved, or vertex ids.
    pub witness: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub bound_id: String,
    pub constant: f64,
    pub samples: usize,
    pub worst_ratio: f64,
    pub worst_value: f64,
    pub errors: usize,
    pub witnesses: Vec<SampleRow>,
    pub seed: u64,
    /// Only a necessary condition is tested; passing proves nothing.
    pub falsification_only: bool,
    pub pass: bool,
    #[serde(skip)]
    pub rows: Vec<SampleRow>,
}

impl BoundReport {
    fn from_rows(bound_id: &str, constant: f64, seed: u64, falsification_only: bool, rows: Vec<SampleRow>) -> Self {
        let mut rep = Self {
            bound_id: bound_id.to_string(),
            constant,
            samples: rows.len(),
            worst_ratio: f64::NEG_INFINITY,
            worst_value: f64::NEG_INFINITY,
            errors: 0,
            witnesses: Vec::new(),
            seed,
            falsification_only,
            pass: true,
            rows: Vec::new(),
        };
        let mut worst: Option<&SampleRow> = None;
        for r in &rows {
            if r.error.is_some() {
                rep.errors += 1;
                rep.pass = false;
                if rep.witnesses.len() < MAX_WITNESSES {
                    rep.witnesses.push(r.clone());
                }
                continue;
            }
            rep.worst_value = rep.worst_value.max(r.measured);
            if worst.is_none_or(|w| r.ratio > w.ratio) {
                worst = Some(r);
            }
            if r.ratio > 1.0 + 1e-9 {
                rep.pass = false;
                if rep.witnesses.len() < MAX_WITNESSES {
                    rep.witnesses.push(r.clone());
                }
            }
        }
        if let Some(w) = worst {
            rep.worst_ratio = w.ratio;
            if rep.witnesses.is_empty() {
                rep.witnesses.push(w.clone());
            }
        }
        rep.rows = rows;
        rep
    }
}

/// Writes the per-sample rows of all reports.
pub fn write_csv(reports: &[BoundReport], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["bound_id", "sample", "measured", "bound", "ratio", "witness", "error"])
        .map_err(|e| Error::Io(e.to_string()))?;
    for rep in reports {
        for r in &rep.rows {
            let wit: Vec<String> = r.witness.iter().map(|x| format!("{x:e}")).collect();
            w.write_record([
                rep.bound_id.clone(),
                r.sample.to_string(),
                format!("{:e}", r.measured),
                format!("{:e}", r.bound),
                format!("{:e}", r.ratio),
                wit.join(";"),
                r.error.clone().unwrap_or_default(),
            ])
            .map_err(|e| Error::Io(e.to_string()))?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_csv_file(reports: &[BoundReport], path: &Path) -> Result<()> {
    write_csv(reports, std::fs::File::create(path)?)
}

/// `2 ln 4`.
pub fn horizontal_bound() -> f64 {
    2.0 * 4f64.ln()
}

/// `√(2/σ) + 2 ln 3`.
pub fn radial_bound(sigma: f64) -> f64 {
    (2.0 / sigma).sqrt() + 2.0 * 3f64.ln()
}

/// `c₁/√σ + c₂` with `c₁ = √2 + 4 ln 4`, `c₂ = 2 ln 3`.
pub fn radial_chain_bound(sigma: f64) -> f64 {
    (2f64.sqrt() + 4.0 * 4f64.ln()) / sigma.sqrt() + 2.0 * 3f64.ln()
}

/// `4 ln 160`.
pub fn chain_cobound_constant() -> f64 {
    4.0 * 160f64.ln()
}

pub fn vertex_cobound_constant(sigma: f64) -> f64 {
    (1.0 / sigma).ln() + chain_cobound_constant()
}

/// `4 ln(3√(r/d) + √(d/r))` for separated spheres at chart distance `d`.
pub fn separated_bound(r: f64, d: f64) -> f64 {
    4.0 * (3.0 * (r / d).sqrt() + (d / r).sqrt()).ln()
}

/// Additive constant of the lower bound: `2(12 + ln 54) + (5/2) ln(1/σ)`.
pub fn lower_bound_offset(sigma: f64) -> f64 {
    diameter_bound::<f64>() + 2.5 * (1.0 / sigma).ln()
}

fn ball_of<S: Scalar>(v: &BallVertex) -> Ball<S> {
    Ball { center: S::lit(v.center), radius: S::lit(v.radius), a: S::lit(v.a), b: S::lit(v.b) }
}

/// The pair `((a, b), (o, ω))` of a sphere.
pub fn vertex_pair<S: Scalar>(m: &MoebiusStructure<S>, omega: CirclePoint<S>, v: &BallVertex) -> Result<HarmonicPair<S>> {
    ball_of::<S>(v).harmonic(m, omega)
}

/// Two-side path `q → q̂ → q'` between spheres whose pairs are harmonic.
pub fn horizontal_path<S: Scalar>(m: &MoebiusStructure<S>, omega: CirclePoint<S>, b0: &Ball<S>, b1: &Ball<S>) -> Result<ZZPath<S>> {
    let (p0, p1) = (b0.pair(omega)?, b1.pair(omega)?);
    ZZPath::new(vec![
        Segment::new(m, p0, b0.axis(omega)?, p1)?,
        Segment::new(m, p1, p0, b1.axis(omega)?)?,
    ])
}

/// Three-side path through the common perpendicular of two strongly causal
/// spheres; a single side along the shared axis when the centers agree.
pub fn perpendicular_path<S: Scalar>(m: &MoebiusStructure<S>, omega: CirclePoint<S>, b0: &Ball<S>, b1: &Ball<S>) -> Result<ZZPath<S>> {
    let (p0, p1) = (b0.pair(omega)?, b1.pair(omega)?);
    if b0.center == b1.center {
        return ZZPath::new(vec![Segment::new(m, b0.axis(omega)?, p0, p1)?]);
    }
    let c = common_perpendicular(m, &p0, &p1)?;
    ZZPath::new(vec![
        Segment::new(m, p0, b0.axis(omega)?, c)?,
        Segment::new(m, c, p0, p1)?,
        Segment::new(m, p1, c, b1.axis(omega)?)?,
    ])
}

fn edge_path<S: Scalar>(m: &MoebiusStructure<S>, g: &ApproxGraph, omega: CirclePoint<S>, u: usize, v: usize) -> Result<ZZPath<S>> {
    let (bu, bv) = (ball_of::<S>(&g.vertices[u]), ball_of::<S>(&g.vertices[v]));
    let (lu, lv) = (g.level(u), g.level(v));
    if lu == lv {
        return horizontal_path(m, omega, &bu, &bv);
    }
    if lu < lv {
        perpendicular_path(m, omega, &bu, &bv)
    } else {
        Ok(perpendicular_path(m, omega, &bv, &bu)?.reversed())
    }
}

fn omega_of<S: Scalar>(g: &ApproxGraph) -> CirclePoint<S> {
    CirclePoint::from_angle(S::lit(g.omega))
}

fn err_row(sample: usize, witness: Vec<f64>, e: Error) -> SampleRow {
    SampleRow { sample, measured: f64::NAN, bound: f64::NAN, ratio: f64::NAN, witness, error: Some(e.to_string()) }
}

fn row(sample: usize, measured: f64, bound: f64, witness: Vec<f64>) -> SampleRow {
    SampleRow { sample, measured, bound, ratio: measured / bound, witness, error: None }
}

/// Horizontal edges: the whole path against `2 ln 4` and each side against `ln 4`.
pub fn horizontal_edge_bound<S: Scalar>(m: &MoebiusStructure<S>, g: &ApproxGraph) -> Vec<BoundReport> {
    let omega = omega_of::<S>(g);
    let edges: Vec<_> = g.edges.iter().filter(|e| e.kind == EdgeKind::Horizontal).collect();
    let res = par_samples(edges.len(), 0, |i, _| {
        let e = edges[i];
        let wit = vec![e.u as f64, e.v as f64];
        match edge_path(m, g, omega, e.u, e.v) {
            Ok(p) => {
                let side = p.sides.iter().map(|s| s.length.f64()).fold(0.0, f64::max);
                (row(i, p.length().f64(), horizontal_bound(), wit.clone()), row(i, side, 4f64.ln(), wit))
            }
            Err(e) => (err_row(i, wit.clone(), e.clone()), err_row(i, wit, e)),
        }
    });
    let (a, b): (Vec<_>, Vec<_>) = res.into_iter().unzip();
    vec![
        BoundReport::from_rows("horizontal_edge", horizontal_bound(), 0, false, a),
        BoundReport::from_rows("horizontal_side", 4f64.ln(), 0, false, b),
    ]
}

/// Radial edges: the three-side path against `√(2/σ) + 2 ln 3`, its middle
/// side against `√(2/σ)`, and the chain form `c₁/√σ + c₂`.
pub fn radial_edge_bound<S: Scalar>(m: &MoebiusStructure<S>, g: &ApproxGraph) -> Vec<BoundReport> {
    let omega = omega_of::<S>(g);
    let sigma = g.sigma;
    let edges: Vec<_> = g.edges.iter().filter(|e| e.kind == EdgeKind::Radial).collect();
    let res = par_samples(edges.len(), 0, |i, _| {
        let e = edges[i];
        let wit = vec![e.u as f64, e.v as f64];
        let (u, v) = (&g.vertices[e.u], &g.vertices[e.v]);
        let (outer, inner) = if u.level < v.level { (u, v) } else { (v, u) };
        if !outer.contains(inner) {
            let e = Error::Domain("radial edge without containment".into());
            return [err_row(i, wit.clone(), e.clone()), err_row(i, wit.clone(), e.clone()), err_row(i, wit, e)];
        }
        match perpendicular_path(m, omega, &ball_of(outer), &ball_of(inner)) {
            Ok(p) => {
                let len = p.length().f64();
                let mid = if p.sides.len() == 3 { p.sides[1].length.f64() } else { 0.0 };
                [
                    row(i, len, radial_bound(sigma), wit.clone()),
                    row(i, mid, (2.0 / sigma).sqrt(), wit.clone()),
                    row(i, len, radial_chain_bound(sigma), wit),
                ]
            }
            Err(e) => [err_row(i, wit.clone(), e.clone()), err_row(i, wit.clone(), e.clone()), err_row(i, wit, e)],
        }
    });
    let mut cols: [Vec<SampleRow>; 3] = Default::default();
    for r in res {
        for (c, x) in cols.iter_mut().zip(r) {
            c.push(x);
        }
    }
    let [a, b, c] = cols;
    vec![
        BoundReport::from_rows("radial_edge", radial_bound(sigma), 0, false, a),
        BoundReport::from_rows("radial_middle_side", (2.0 / sigma).sqrt(), 0, false, b),
        BoundReport::from_rows("radial_chain", radial_chain_bound(sigma), 0, false, c),
    ]
}

struct ChainRoute {
    length: f64,
    /// `(αγβ length, formula bound)` of the separated-sphere leg.
    separated: Option<(f64, f64)>,
}

/// Route from the sphere `p` (same radius as the chain) to the chain member
/// `i`: a perpendicular path to a separated member `j` up to four steps
/// beyond `i`, then chain steps back to `i`. The shortest candidate is kept.
fn chain_route<S: Scalar>(m: &MoebiusStructure<S>, omega: CirclePoint<S>, p: &Ball<S>, chain: &[Ball<S>], i: usize) -> Result<ChainRoute> {
    let qi = &chain[i];
    if qi.center == p.center {
        return Ok(ChainRoute { length: 0.0, separated: None });
    }
    let right = qi.center > p.center;
    let mut best: Option<ChainRoute> = None;
    for k in 1..=4usize {
        let j = if right { i.checked_add(k) } else { i.checked_sub(k) };
        let Some(j) = j.filter(|&j| j < chain.len()) else { continue };
        let qj = &chain[j];
        let separated = if right { qj.a > p.b } else { qj.b < p.a };
        if !separated {
            continue;
        }
        let leg = perpendicular_path(m, omega, p, qj)?.length().f64();
        let gap = if right { m.log_dist_coords(omega, p.b, qj.a) } else { m.log_dist_coords(omega, qj.b, p.a) }.exp().f64();
        let mut total = leg;
        let (lo, hi) = (i.min(j), i.max(j));
        for w in lo..hi {
            total += horizontal_path(m, omega, &chain[w], &chain[w + 1])?.length().f64();
        }
        let cand = ChainRoute { length: total, separated: Some((leg, separated_bound(p.radius.f64(), gap))) };
        if best.as_ref().is_none_or(|b| cand.length < b.length) {
            best = Some(cand);
        }
    }
    best.ok_or_else(|| Error::Parameter("chain too short around the sample; widen the window".into()))
}

fn meeting<S: Scalar>(chain: &[Ball<S>], p: &Ball<S>) -> Vec<usize> {
    let start = chain.partition_point(|b| b.b < p.a);
    (start..chain.len()).take_while(|&i| chain[i].a <= p.b).collect()
}

/// Random spheres of radius `r` against the chain members they meet:
/// constructed route against `4 ln 160`, and each separated-sphere leg
/// against its formula bound.
pub fn chain_cobound<S: Scalar>(m: &MoebiusStructure<S>, omega: CirclePoint<S>, r: S, samples: usize, seed: u64) -> Result<Vec<BoundReport>> {
    let half = r.f64() * 40.0;
    let chain: Vec<Ball<S>> = grow_chain(m, omega, r, (-half, half), 64)?.into_iter().map(|x| x.1).collect();
    let span = r.f64() * 20.0;
    let res = par_samples(samples, seed, |s, rng| {
        let o: f64 = rng.gen_range(-span..span);
        let wit = vec![o, r.f64()];
        let run = || -> Result<(f64, Option<(f64, f64)>)> {
            let p = Ball::new(m, omega, S::lit(o), r)?;
            let ids = meeting(&chain, &p);
            if ids.is_empty() {
                return Err(Error::Parameter("no chain member meets the sphere".into()));
            }
            let mut worst = 0.0f64;
            let mut sep: Option<(f64, f64)> = None;
            for i in ids {
                let c = chain_route(m, omega, &p, &chain, i)?;
                worst = worst.max(c.length);
                if let Some(x) = c.separated {
                    if sep.is_none_or(|y| x.0 / x.1 > y.0 / y.1) {
                        sep = Some(x);
                    }
                }
            }
            Ok((worst, sep))
        };
        match run() {
            Ok((v, sep)) => (row(s, v, chain_cobound_constant(), wit.clone()), sep.map(|(l, b)| row(s, l, b, wit))),
            Err(e) => (err_row(s, wit, e), None),
        }
    });
    let (a, b): (Vec<_>, Vec<_>) = res.into_iter().unzip();
    Ok(vec![
        BoundReport::from_rows("chain_cobound", chain_cobound_constant(), seed, false, a),
        BoundReport::from_rows("separated_spheres", f64::NAN, seed, false, b.into_iter().flatten().collect()),
    ])
}

/// Random `p ∈ Harm_ω` with radius in `[σ^k1, σ^k0]` against the vertex set:
/// slide to radius `σ^k`, then route to a level-`k` vertex.
pub fn vertex_cobound<S: Scalar>(m: &MoebiusStructure<S>, g: &ApproxGraph, samples: usize, seed: u64) -> BoundReport {
    let omega = omega_of::<S>(g);
    let (k0, k1) = g.levels;
    let chains: Vec<Vec<Ball<S>>> = (k0..=k1).map(|k| g.level_vertices(k).iter().map(ball_of).collect()).collect();
    let fine = &chains[(k1 - k0) as usize];
    let pad = 8.min(fine.len() / 2);
    let (lo, hi) = (fine[pad].center.f64(), fine[fine.len() - 1 - pad].center.f64());
    let ls = g.sigma.ln();
    let bound = vertex_cobound_constant(g.sigma);
    let rows = par_samples(samples, seed, |s, rng| {
        let o: f64 = rng.gen_range(lo..=hi);
        let r = (ls * rng.gen_range(k0 as f64..=k1 as f64)).exp();
        let wit = vec![o, r];
        let run = || -> Result<f64> {
            let k = ((r.ln() / ls).floor() as i32).clamp(k0, k1);
            let rk = S::lit(g.sigma).powi(k);
            let p = Ball::new(m, omega, S::lit(o), S::lit(r))?;
            let q = Ball::new(m, omega, S::lit(o), rk)?;
            let slide = (rk / S::lit(r)).ln().abs().f64();
            let slide = if slide == 0.0 {
                0.0
            } else {
                Segment::new(m, p.axis(omega)?, p.pair(omega)?, q.pair(omega)?)?.length.f64()
            };
            let chain = &chains[(k - k0) as usize];
            let ids = meeting(chain, &q);
            let mut best = f64::INFINITY;
            for i in ids {
                if let Ok(c) = chain_route(m, omega, &q, chain, i) {
                    best = best.min(c.length);
                }
            }
            if !best.is_finite() {
                return Err(Error::Parameter("no routable vertex meets the sphere".into()));
            }
            Ok(slide + best)
        };
        match run() {
            Ok(v) => row(s, v, bound, wit),
            Err(e) => err_row(s, wit, e),
        }
    });
    BoundReport::from_rows("vertex_cobound", bound, seed, false, rows)
}

/// The edge paths of a graph geodesic, concatenated.
pub fn geodesic_zigzag<S: Scalar>(m: &MoebiusStructure<S>, g: &ApproxGraph, v: usize, w: usize) -> Result<(usize, ZZPath<S>)> {
    let nf = g.normal_form(v, w).ok_or_else(|| Error::Graph(format!("no normal form between {v} and {w}")))?;
    let omega = omega_of::<S>(g);
    let mut path = ZZPath::empty();
    for e in nf.path.windows(2) {
        path = path.concat(edge_path(m, g, omega, e[0], e[1])?)?;
    }
    Ok((nf.length, path))
}

fn interior_pairs(g: &ApproxGraph, pairs: usize, seed: u64) -> Vec<(usize, usize)> {
    let interior = g.interior();
    if interior.is_empty() {
        return Vec::new();
    }
    par_samples(pairs, seed, |_, rng| (interior[rng.gen_range(0..interior.len())], interior[rng.gen_range(0..interior.len())]))
}

/// Concatenated edge paths along a graph geodesic against `C·|vv'|` with
/// `C = √(2/σ) + 2 ln 3`.
pub fn qi_upper_check<S: Scalar>(m: &MoebiusStructure<S>, g: &ApproxGraph, dt: &DistanceTable, pairs: usize, seed: u64) -> BoundReport {
    let c = radial_bound(g.sigma);
    let ps = interior_pairs(g, pairs, seed);
    let rows = par_samples(ps.len(), seed, |s, _| {
        let (v, w) = ps[s];
        let wit = vec![v as f64, w as f64];
        let run = || -> Result<(f64, f64)> {
            let d = dt.dist(v, w)? as f64;
            let (n, p) = geodesic_zigzag(m, g, v, w)?;
            if n as f64 != d {
                return Err(Error::Graph(format!("normal form length {n} differs from distance {d}")));
            }
            Ok((p.length().f64(), c * d))
        };
        match run() {
            Ok((l, b)) if b <= 0.0 => row(s, l, 1.0, wit).with_ratio(if l == 0.0 { 0.0 } else { f64::INFINITY }),
            Ok((l, b)) => row(s, l, b, wit),
            Err(e) => err_row(s, wit, e),
        }
    });
    BoundReport::from_rows("qi_upper", c, seed, false, rows)
}

/// Necessary condition `δ_upper(v, v') ≥ ½ ln(1/σ)|vv'| - D`. The ratio is
/// `(½ ln(1/σ)|vv'| - D) / δ_upper`.
pub fn qi_lower_falsify<S: Scalar>(m: &MoebiusStructure<S>, g: &ApproxGraph, dt: &DistanceTable, pairs: usize, seed: u64) -> BoundReport {
    let c = 0.5 * (1.0 / g.sigma).ln();
    let dd = lower_bound_offset(g.sigma);
    let omega = omega_of::<S>(g);
    let ps = interior_pairs(g, pairs, seed);
    let rows = par_samples(ps.len(), seed, |s, _| {
        let (v, w) = ps[s];
        let wit = vec![v as f64, w as f64];
        let run = || -> Result<(f64, f64)> {
            let d = dt.dist(v, w)? as f64;
            let (_, p) = geodesic_zigzag(m, g, v, w)?;
            let mut up = p.length().f64();
            let need = c * d - dd;
            // A nonpositive requirement holds for any upper bound; only refine when it can fail.
            if need > 0.0 {
                let (qv, qw) = (vertex_pair(m, omega, &g.vertices[v])?, vertex_pair(m, omega, &g.vertices[w])?);
                if let Ok((x, _)) = delta_upper(m, &qv, &qw) {
                    up = up.min(x.f64());
                }
            }
            Ok((up, need))
        };
        match run() {
            Ok((up, need)) => {
                let ratio = if up > 0.0 { need / up } else if need <= 0.0 { 0.0 } else { f64::INFINITY };
                SampleRow { sample: s, measured: need, bound: up, ratio, witness: wit, error: None }
            }
            Err(e) => err_row(s, wit, e),
        }
    });
    BoundReport::from_rows("qi_lower", c, seed, true, rows)
}

impl SampleRow {
    fn with_ratio(mut self, ratio: f64) -> Self {
        self.ratio = ratio;
        self
    }
}

/// Sample counts for [`qi_report`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QiSamples {
    pub chain: usize,
    pub vertex: usize,
    pub pairs: usize,
}

impl Default for QiSamples {
    fn default() -> Self {
        Self { chain: 1000, vertex: 1000, pairs: 1000 }
    }
}

/// All bounds on one build.
pub fn qi_report<S: Scalar>(m: &MoebiusStructure<S>, g: &ApproxGraph, dt: &DistanceTable, n: QiSamples, seed: u64) -> Result<Vec<BoundReport>> {
    let mut out = horizontal_edge_bound(m, g);
    out.extend(radial_edge_bound(m, g));
    let r = S::lit(g.sigma).powi(g.levels.0);
    out.extend(chain_cobound(m, omega_of::<S>(g), r, n.chain, seed)?);
    out.push(vertex_cobound(m, g, n.vertex, seed));
    out.push(qi_upper_check(m, g, dt, n.pairs, seed));
    out.push(qi_lower_falsify(m, g, dt, n.pairs, seed));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_horizontal_path() {
        let m = MoebiusStructure::<f64>::canonical();
        let w = CirclePoint::north();
        let b0 = Ball::new(&m, w, 0.0, 1.0).unwrap();
        let b1 = Ball::new(&m, w, 2f64.sqrt(), 1.0).unwrap();
        let p = horizontal_path(&m, w, &b0, &b1).unwrap();
        let side = (1.0 + 2f64.sqrt()).ln();
        assert!((p.sides[0].length - side).abs() < 1e-9 && (p.sides[1].length - side).abs() < 1e-9);
    }

    #[test]
    fn concentric_radial_path() {
        let m = MoebiusStructure::<f64>::canonical();
        let w = CirclePoint::north();
        let b0 = Ball::new(&m, w, 0.5, 1.0).unwrap();
        let b1 = Ball::new(&m, w, 0.5, 1.0 / 24.0).unwrap();
        let p = perpendicular_path(&m, w, &b0, &b1).unwrap();
        assert!((p.length() - 24f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn constants() {
        assert!((radial_bound(1.0 / 24.0) - (48f64.sqrt() + 2.0 * 3f64.ln())).abs() < 1e-12);
        assert!((separated_bound(1.0, 1.0) - 4.0 * 4f64.ln()).abs() < 1e-12);
        assert!((chain_cobound_constant() - 20.3).abs() < 0.01);
    }
}
