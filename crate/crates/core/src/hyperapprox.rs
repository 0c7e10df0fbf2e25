//! Harmonic chains of spheres and the hyperbolic approximation graph `Z(σ)`.
//!
//! Level `k` holds a chain of spheres of radius `σ^k` in the chart `X_ω`, so
//! lower levels are coarser. Every chain is anchored at chart coordinate 0 and
//! grown in both directions while the center stays in the window and the
//! per-side cap is not exceeded; fine levels therefore cover a shrinking
//! neighbourhood of 0.

use std::collections::VecDeque;
use std::fmt;
use std::path::Path;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bisect::{bisect, expand_until};
use crate::chart::Ball;
use crate::circle::CirclePoint;
use crate::error::{Error, Result};
use crate::harmonic::harmonic_residual;
use crate::sampling::par_samples;
use crate::scalar::Scalar;
use crate::structure::{MoebiusStructure, StructureSpec};

/// Largest admissible `σ`.
pub const SIGMA_MAX: f64 = 1.0 / 24.0;
/// Dense distance tables are built only up to this many vertices.
pub const MAX_DENSE_VERTICES: usize = 8000;
pub const DEFAULT_CAP: usize = 384;

/// Snaps values within relative `1e-6` of `1/24` to `1/24` exactly and
/// rejects anything larger.
pub fn normalize_sigma(sigma: f64) -> Result<f64> {
    if ((sigma - SIGMA_MAX) / SIGMA_MAX).abs() < 1e-6 {
        return Ok(SIGMA_MAX);
    }
    if !(sigma > 0.0 && sigma <= SIGMA_MAX) {
        return Err(Error::Parameter(format!("sigma must lie in (0, 1/24], got {sigma}")));
    }
    Ok(sigma)
}

/// The neighbour of `cur` in a harmonic chain of radius `cur.radius`, to the
/// right if `right`, else to the left.
pub fn next_sphere<S: Scalar>(m: &MoebiusStructure<S>, omega: CirclePoint<S>, cur: &Ball<S>, right: bool) -> Result<Ball<S>> {
    let r = cur.radius;
    let dir = if right { S::one() } else { -S::one() };
    let ld = |x: S, y: S| m.log_dist_coords(omega, x, y);
    let ball = |d: S| Ball::new(m, omega, cur.center + dir * d, r);
    let f = |d: S| -> S {
        if d <= S::zero() {
            return -S::one();
        }
        let Ok(nb) = ball(d) else { return S::nan() };
        let (l, rr) = if right { (cur, &nb) } else { (&nb, cur) };
        if rr.a >= l.b {
            return S::one();
        }
        ld(l.a, rr.a) + ld(l.b, rr.b) - ld(l.a, rr.b) - ld(rr.a, l.b)
    };
    let hi = expand_until(S::zero(), r, |d| ball(d).map(|nb| if right { nb.a >= cur.b } else { nb.b <= cur.a }).unwrap_or(false), "chain step")?;
    let d = bisect(f, S::zero(), hi, false, S::zero(), "chain step")?;
    let nb = ball(d)?;
    let (pl, pr) = if right { (cur.pair(omega)?, nb.pair(omega)?) } else { (nb.pair(omega)?, cur.pair(omega)?) };
    let res = harmonic_residual(m, &pl, &pr)?;
    if res > S::harm_tol() {
        return Err(Error::Structure(format!("chain step residual {res}")));
    }
    Ok(nb)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BallVertex {
    pub id: usize,
    pub level: i32,
    pub center: f64,
    pub radius: f64,
    pub a: f64,
    pub b: f64,
    pub chain_index: i64,
}

impl BallVertex {
    pub fn contains(&self, other: &Self) -> bool {
        self.a <= other.a && other.b <= self.b
    }

    pub fn meets(&self, other: &Self) -> bool {
        self.a <= other.b && other.a <= self.b
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeKind {
    Horizontal,
    Radial,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub kind: EdgeKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InteriorMargin {
    pub levels: i32,
    pub positions: i64,
}

impl Default for InteriorMargin {
    fn default() -> Self {
        Self { levels: 2, positions: 4 }
    }
}

/// Build parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphConfig {
    pub sigma: f64,
    /// Angle of the chart base point.
    pub omega: f64,
    pub k0: i32,
    pub k1: i32,
    /// Chart interval for centers; defaults to half-width `24√2·σ^k0` around 0.
    pub window: Option<(f64, f64)>,
    /// Maximal number of spheres on each side of the anchor, per level.
    pub cap: usize,
    pub margin: InteriorMargin,
}

impl Default for GraphConfig {
    fn default() -> Self {
        Self {
            sigma: SIGMA_MAX,
            omega: std::f64::consts::FRAC_PI_2,
            k0: 0,
            k1: 4,
            window: None,
            cap: DEFAULT_CAP,
            margin: InteriorMargin::default(),
        }
    }
}

#[derive(Clone, Debug, Default)]
struct Index {
    parents: Vec<Vec<usize>>,
    children: Vec<Vec<usize>>,
    horizontal: Vec<Vec<usize>>,
    /// `(first id, chain index of the first id, count)` per level.
    levels: Vec<(usize, i64, usize)>,
}

/// The graph `Z(σ)` truncated to a window and a range of levels.
#[derive(Clone, Serialize, Deserialize)]
pub struct ApproxGraph {
    pub sigma: f64,
    pub omega: f64,
    pub levels: (i32, i32),
    pub window: (f64, f64),
    pub cap: usize,
    pub interior_margin: InteriorMargin,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub structure: Option<StructureSpec>,
    pub vertices: Vec<BallVertex>,
    pub edges: Vec<Edge>,
    #[serde(skip)]
    index: Index,
}

impl fmt::Debug for ApproxGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "ApproxGraph(sigma={}, levels={:?}, vertices={}, edges={})",
            self.sigma,
            self.levels,
            self.vertices.len(),
            self.edges.len()
        )
    }
}

pub(crate) fn grow_chain<S: Scalar>(
    m: &MoebiusStructure<S>,
    omega: CirclePoint<S>,
    r: S,
    window: (f64, f64),
    cap: usize,
) -> Result<Vec<(i64, Ball<S>)>> {
    let anchor = Ball::new(m, omega, S::zero(), r)?;
    let mut left = Vec::new();
    let mut cur = anchor;
    while left.len() < cap {
        let nb = next_sphere(m, omega, &cur, false)?;
        if nb.center.f64() < window.0 {
            break;
        }
        left.push(nb);
        cur = nb;
    }
    let mut out: Vec<(i64, Ball<S>)> = left.into_iter().enumerate().rev().map(|(i, b)| (-(i as i64) - 1, b)).collect();
    out.push((0, anchor));
    let mut cur = anchor;
    let mut i = 0;
    while i < cap {
        let nb = next_sphere(m, omega, &cur, true)?;
        if nb.center.f64() > window.1 {
            break;
        }
        i += 1;
        out.push((i as i64, nb));
        cur = nb;
    }
    Ok(out)
}

/// Builds `Z(σ)` on levels `k0..=k1`.
pub fn build_graph<S: Scalar>(m: &MoebiusStructure<S>, cfg: &GraphConfig) -> Result<ApproxGraph> {
    let sigma = normalize_sigma(cfg.sigma)?;
    if cfg.k1 < cfg.k0 {
        return Err(Error::Parameter(format!("empty level range {}..{}", cfg.k0, cfg.k1)));
    }
    let window = match cfg.window {
        Some(w) => w,
        None => {
            let h = 24.0 * std::f64::consts::SQRT_2 * sigma.powi(cfg.k0);
            (-h, h)
        }
    };
    if !(window.0 < 0.0 && 0.0 < window.1) || !window.0.is_finite() || !window.1.is_finite() {
        return Err(Error::Parameter(format!("window must be a bounded interval around 0, got {window:?}")));
    }
    let omega = CirclePoint::from_angle(S::lit(cfg.omega));
    let mut vertices = Vec::new();
    for k in cfg.k0..=cfg.k1 {
        let r = S::lit(sigma).powi(k);
        for (i, b) in grow_chain(m, omega, r, window, cfg.cap)? {
            vertices.push(BallVertex {
                id: vertices.len(),
                level: k,
                center: b.center.f64(),
                radius: r.f64(),
                a: b.a.f64(),
                b: b.b.f64(),
                chain_index: i,
            });
        }
    }
    let mut g = ApproxGraph {
        sigma,
        omega: cfg.omega,
        levels: (cfg.k0, cfg.k1),
        window,
        cap: cfg.cap,
        interior_margin: cfg.margin,
        structure: m.spec().cloned(),
        vertices,
        edges: Vec::new(),
        index: Index::default(),
    };
    g.edges = g.compute_edges();
    g.reindex()?;
    Ok(g)
}

impl ApproxGraph {
    fn level_slice(&self, k: i32) -> &[BallVertex] {
        let (lo, _, n) = self.index.levels[(k - self.levels.0) as usize];
        &self.vertices[lo..lo + n]
    }

    fn compute_edges(&self) -> Vec<Edge> {
        let mut idx = self.clone();
        idx.index.levels = level_table(&self.vertices, self.levels);
        let mut edges = Vec::new();
        for k in self.levels.0..=self.levels.1 {
            let lvl = idx.level_slice(k);
            for w in lvl.windows(2) {
                edges.push(Edge { u: w[0].id, v: w[1].id, kind: EdgeKind::Horizontal });
            }
            if k == self.levels.0 {
                continue;
            }
            let coarse = idx.level_slice(k - 1);
            for v in lvl {
                let start = coarse.partition_point(|w| w.b < v.b);
                for w in &coarse[start..] {
                    if w.a > v.a {
                        break;
                    }
                    if w.contains(v) {
                        edges.push(Edge { u: w.id, v: v.id, kind: EdgeKind::Radial });
                    }
                }
            }
        }
        edges
    }

    /// Rebuilds the adjacency index; needed after deserialization.
    pub fn reindex(&mut self) -> Result<()> {
        let n = self.vertices.len();
        for (i, v) in self.vertices.iter().enumerate() {
            if v.id != i {
                return Err(Error::Graph(format!("vertex ids must be 0..n in order (id {} at {i})", v.id)));
            }
        }
        let mut ix = Index {
            parents: vec![Vec::new(); n],
            children: vec![Vec::new(); n],
            horizontal: vec![Vec::new(); n],
            levels: level_table(&self.vertices, self.levels),
        };
        for e in &self.edges {
            if e.u >= n || e.v >= n {
                return Err(Error::Graph(format!("edge {e:?} refers to a missing vertex")));
            }
            let (lu, lv) = (self.vertices[e.u].level, self.vertices[e.v].level);
            match e.kind {
                EdgeKind::Horizontal if lu == lv => {
                    ix.horizontal[e.u].push(e.v);
                    ix.horizontal[e.v].push(e.u);
                }
                EdgeKind::Radial if (lu - lv).abs() == 1 => {
                    let (p, c) = if lu < lv { (e.u, e.v) } else { (e.v, e.u) };
                    ix.parents[c].push(p);
                    ix.children[p].push(c);
                }
                _ => return Err(Error::Graph(format!("edge {e:?} is inconsistent with vertex levels"))),
            }
        }
        self.index = ix;
        Ok(())
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let s = serde_json::to_string(self)?;
        std::fs::write(path, s)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let s = std::fs::read_to_string(path)?;
        Self::from_json(&s)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let mut g: Self = serde_json::from_str(s)?;
        g.reindex()?;
        Ok(g)
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn level(&self, v: usize) -> i32 {
        self.vertices[v].level
    }

    pub fn parents(&self, v: usize) -> &[usize] {
        &self.index.parents[v]
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.index.children[v]
    }

    pub fn horizontal(&self, v: usize) -> &[usize] {
        &self.index.horizontal[v]
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.parents(v).iter().chain(self.children(v)).chain(self.horizontal(v)).copied()
    }

    /// Vertices of level `k`, in chain order.
    pub fn level_vertices(&self, k: i32) -> &[BallVertex] {
        if k < self.levels.0 || k > self.levels.1 {
            return &[];
        }
        self.level_slice(k)
    }

    /// Vertex of level `k` with the given chain index.
    pub fn at(&self, k: i32, chain_index: i64) -> Option<usize> {
        if k < self.levels.0 || k > self.levels.1 {
            return None;
        }
        let (lo, first, n) = self.index.levels[(k - self.levels.0) as usize];
        let off = chain_index - first;
        (off >= 0 && (off as usize) < n).then(|| lo + off as usize)
    }

    pub fn is_interior(&self, v: usize) -> bool {
        let x = &self.vertices[v];
        let (_, first, n) = self.index.levels[(x.level - self.levels.0) as usize];
        let pos = x.chain_index - first;
        let mg = self.interior_margin;
        x.level >= self.levels.0 + mg.levels && pos >= mg.positions && (n as i64 - 1 - pos) >= mg.positions
    }

    pub fn interior(&self) -> Vec<usize> {
        (0..self.len()).filter(|&v| self.is_interior(v)).collect()
    }

    /// `D_k(v)`: level-`k` vertices reached from `v` by descending radial
    /// paths, for `k = ℓ(v), ℓ(v)-1, ..., k0` (index `ℓ(v) - k`).
    pub fn down_sets(&self, v: usize) -> Vec<Vec<usize>> {
        let mut out = vec![vec![v]];
        for _ in self.levels.0..self.level(v) {
            let last = out.last().unwrap();
            let mut next: Vec<usize> = last.iter().flat_map(|&x| self.parents(x).iter().copied()).collect();
            next.sort_unstable();
            next.dedup();
            out.push(next);
        }
        out
    }

    fn down_at<'a>(&self, d: &'a [Vec<usize>], top: i32, k: i32) -> &'a [usize] {
        if k > top || k < self.levels.0 {
            return &[];
        }
        &d[(top - k) as usize]
    }

    /// Branch point of a vertex set: the highest-level vertex reaching every
    /// member by a descending radial path (smallest id on ties).
    pub fn branch_point(&self, set: &[usize]) -> Option<usize> {
        let downs: Vec<_> = set.iter().map(|&v| (self.level(v), self.down_sets(v))).collect();
        let top = set.iter().map(|&v| self.level(v)).min()?;
        for k in (self.levels.0..=top).rev() {
            let mut common: Vec<usize> = self.down_at(&downs[0].1, downs[0].0, k).to_vec();
            for (l, d) in &downs[1..] {
                let other = self.down_at(d, *l, k);
                common.retain(|x| other.binary_search(x).is_ok());
            }
            if let Some(&u) = common.first() {
                return Some(u);
            }
        }
        None
    }

    /// True if `u` is a cone point of `set`.
    pub fn is_cone_point(&self, u: usize, set: &[usize]) -> bool {
        let k = self.level(u);
        set.iter().all(|&v| {
            let lv = self.level(v);
            lv >= k && self.down_at(&self.down_sets(v), lv, k).binary_search(&u).is_ok()
        })
    }

    /// Shortest path of the form descend, at most one horizontal edge at the
    /// lowest level, ascend.
    pub fn normal_form(&self, v: usize, w: usize) -> Option<NormalForm> {
        let (lv, lw) = (self.level(v), self.level(w));
        let (dv, dw) = (self.down_sets(v), self.down_sets(w));
        let mut best: Option<(usize, i32, usize, usize)> = None;
        for k in (self.levels.0..=lv.min(lw)).rev() {
            let base = (lv + lw - 2 * k) as usize;
            if best.is_some_and(|b| base >= b.0) {
                break;
            }
            let (a, b) = (self.down_at(&dv, lv, k), self.down_at(&dw, lw, k));
            if let Some(&x) = a.iter().find(|x| b.binary_search(x).is_ok()) {
                best = Some((base, k, x, x));
                continue;
            }
            'h: for &x in a {
                for &y in self.horizontal(x) {
                    if b.binary_search(&y).is_ok() {
                        if best.is_none_or(|bb| base + 1 < bb.0) {
                            best = Some((base + 1, k, x, y));
                        }
                        break 'h;
                    }
                }
            }
        }
        let (length, level, x, y) = best?;
        let mut path = self.radial_chain(&dv, lv, x);
        path.reverse();
        if x != y {
            path.push(y);
        }
        let mut up = self.radial_chain(&dw, lw, y);
        up.remove(0);
        path.extend(up);
        Some(NormalForm { length, level, horizontal: x != y, path })
    }

    /// Ascending chain from `x` (in some down-set of `v`) to `v`.
    fn radial_chain(&self, d: &[Vec<usize>], top: i32, x: usize) -> Vec<usize> {
        let mut out = vec![x];
        let mut cur = x;
        for k in self.level(x) + 1..=top {
            let set = self.down_at(d, top, k);
            let next = *self.children(cur).iter().find(|c| set.binary_search(c).is_ok()).expect("down-set chain");
            out.push(next);
            cur = next;
        }
        out
    }
}

fn level_table(vertices: &[BallVertex], levels: (i32, i32)) -> Vec<(usize, i64, usize)> {
    let mut out = Vec::new();
    let mut i = 0;
    for k in levels.0..=levels.1 {
        let lo = i;
        while i < vertices.len() && vertices[i].level == k {
            i += 1;
        }
        let first = vertices.get(lo).filter(|v| v.level == k).map_or(0, |v| v.chain_index);
        out.push((lo, first, i - lo));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormalForm {
    pub length: usize,
    /// Lowest level of the path.
    pub level: i32,
    pub horizontal: bool,
    pub path: Vec<usize>,
}

/// All-pairs graph distances, `u16::MAX` for unreachable pairs.
#[derive(Clone, Debug)]
pub struct DistanceTable {
    n: usize,
    d: Vec<u16>,
}

impl DistanceTable {
    pub fn build(g: &ApproxGraph) -> Result<Self> {
        let n = g.len();
        if n > MAX_DENSE_VERTICES {
            return Err(Error::Graph(format!("{n} vertices exceed the dense table limit {MAX_DENSE_VERTICES}; lower the cap")));
        }
        let rows: Vec<Vec<u16>> = (0..n).into_par_iter().map(|s| bfs(g, s)).collect();
        Ok(Self { n, d: rows.concat() })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, u: usize, v: usize) -> Option<u16> {
        let x = self.d[u * self.n + v];
        (x != u16::MAX).then_some(x)
    }

    pub fn dist(&self, u: usize, v: usize) -> Result<u16> {
        self.get(u, v).ok_or_else(|| Error::Graph(format!("vertices {u} and {v} are disconnected")))
    }

    /// `(v|v')_u`.
    pub fn gromov(&self, u: usize, v: usize, v1: usize) -> Result<HalfInt> {
        let s = self.dist(v, u)? as i32 + self.dist(v1, u)? as i32 - self.dist(v, v1)? as i32;
        Ok(HalfInt(s))
    }
}

/// Breadth-first distances from `s`.
pub fn bfs(g: &ApproxGraph, s: usize) -> Vec<u16> {
    let mut d = vec![u16::MAX; g.len()];
    d[s] = 0;
    let mut q = VecDeque::from([s]);
    while let Some(x) = q.pop_front() {
        for y in g.neighbors(x) {
            if d[y] == u16::MAX {
                d[y] = d[x] + 1;
                q.push_back(y);
            }
        }
    }
    d
}

/// A half-integer stored as twice its value; serialized as the value itself.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInt(pub i32);

impl Serialize for HalfInt {
    fn serialize<Z: serde::Serializer>(&self, s: Z) -> std::result::Result<Z::Ok, Z::Error> {
        s.serialize_f64(self.value())
    }
}

impl<'de> Deserialize<'de> for HalfInt {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = f64::deserialize(d)?;
        let twice = v * 2.0;
        if twice.fract() != 0.0 || twice.abs() > i32::MAX as f64 {
            return Err(serde::de::Error::custom(format!("{v} is not a half-integer")));
        }
        Ok(Self(twice as i32))
    }
}

impl HalfInt {
    pub fn from_int(x: i32) -> Self {
        Self(2 * x)
    }

    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}.5", self.0 / 2)
        }
    }
}

/// Chain step and overlap statistics, per level.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainStats {
    pub level: i32,
    pub balls: usize,
    pub min_step_ratio: f64,
    pub max_step_ratio: f64,
    /// Smallest `(b_i - a_{i+1}) / r`.
    pub min_overlap_ratio: f64,
    pub max_residual: f64,
}

pub fn chain_stats<S: Scalar>(m: &MoebiusStructure<S>, g: &ApproxGraph) -> Result<Vec<ChainStats>> {
    let omega = CirclePoint::from_angle(S::lit(g.omega));
    let mut out = Vec::new();
    for k in g.levels.0..=g.levels.1 {
        let lvl = g.level_vertices(k);
        let mut st = ChainStats {
            level: k,
            balls: lvl.len(),
            min_step_ratio: f64::INFINITY,
            max_step_ratio: 0.0,
            min_overlap_ratio: f64::INFINITY,
            max_residual: 0.0,
        };
        for w in lvl.windows(2) {
            let r = w[0].radius;
            let step = (w[1].center - w[0].center) / r;
            st.min_step_ratio = st.min_step_ratio.min(step);
            st.max_step_ratio = st.max_step_ratio.max(step);
            st.min_overlap_ratio = st.min_overlap_ratio.min((w[0].b - w[1].a) / r);
            let pair = |v: &BallVertex| {
                crate::circle::PointPair::new(
                    CirclePoint::from_chart(omega, S::lit(v.a)),
                    CirclePoint::from_chart(omega, S::lit(v.b)),
                )
            };
            let res = harmonic_residual(m, &pair(&w[0])?, &pair(&w[1])?)?;
            st.max_residual = st.max_residual.max(res.f64());
        }
        out.push(st);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphWitness {
    pub what: String,
    pub vertices: Vec<usize>,
    pub value: f64,
    pub bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HyperbolicityReport {
    pub vertices: usize,
    pub interior: usize,
    pub interior_connected: bool,
    pub ancestor_failures: usize,
    pub adjacent_ancestors_checked: usize,
    pub adjacent_ancestors_failures: usize,
    pub normal_form_checked: usize,
    pub normal_form_mismatches: usize,
    pub quadruples: usize,
    pub seed: u64,
    pub worst_four_point: f64,
    pub four_point_bound: f64,
    pub cone_checked: usize,
    pub cone_skipped: usize,
    pub worst_cone: f64,
    pub cone_bound: f64,
    pub branch_point_failures: usize,
    pub witnesses: Vec<GraphWitness>,
    pub pass: bool,
}

const MAX_WITNESSES: usize = 20;

/// Every interior vertex has a parent adjacent (radially) to it and to its
/// chain neighbours. Returns the failing vertices.
pub fn ancestor_failures(g: &ApproxGraph) -> Vec<usize> {
    g.interior()
        .into_iter()
        .filter(|&v| {
            let group: Vec<usize> = std::iter::once(v).chain(g.horizontal(v).iter().copied()).collect();
            !g.parents(v).iter().any(|&w| group.iter().all(|x| g.parents(*x).contains(&w)))
        })
        .collect()
}

/// Samples `quadruples` interior quadruples and checks the four-point
/// condition, the cone-point form, branch points, normal forms on
/// `pairs` interior pairs, ancestors and adjacency of parents.
pub fn hyperbolicity_check(g: &ApproxGraph, dt: &DistanceTable, quadruples: usize, pairs: usize, seed: u64) -> Result<HyperbolicityReport> {
    let interior = g.interior();
    if interior.len() < 4 {
        return Err(Error::Graph("fewer than four interior vertices; widen the window or add levels".into()));
    }
    let connected = interior.iter().all(|&u| interior.iter().all(|&v| dt.get(u, v).is_some()));
    let mut witnesses = Vec::new();
    let anc = ancestor_failures(g);
    for &v in anc.iter().take(MAX_WITNESSES) {
        witnesses.push(GraphWitness { what: "ancestor".into(), vertices: vec![v], value: 0.0, bound: 0.0 });
    }
    let (mut adj_checked, mut adj_fail) = (0, 0);
    for e in &g.edges {
        if e.kind != EdgeKind::Horizontal || !g.is_interior(e.u) || !g.is_interior(e.v) {
            continue;
        }
        for &w in g.parents(e.u) {
            for &w1 in g.parents(e.v) {
                adj_checked += 1;
                let d = dt.dist(w, w1)?;
                if d > 1 {
                    adj_fail += 1;
                    if witnesses.len() < MAX_WITNESSES {
                        witnesses.push(GraphWitness { what: "adjacent_parents".into(), vertices: vec![e.u, e.v, w, w1], value: d as f64, bound: 1.0 });
                    }
                }
            }
        }
    }
    let nf = par_samples(pairs, seed ^ 0x6e66, |_, rng| {
        let (v, w) = (interior[rng.gen_range(0..interior.len())], interior[rng.gen_range(0..interior.len())]);
        let ok = match (g.normal_form(v, w), dt.get(v, w)) {
            (Some(f), Some(d)) => f.length == d as usize && f.path.len() == f.length + 1 && path_ok(g, &f.path),
            _ => false,
        };
        (ok, v, w)
    });
    let nf_fail: Vec<_> = nf.iter().filter(|x| !x.0).collect();
    for x in nf_fail.iter().take(MAX_WITNESSES) {
        witnesses.push(GraphWitness { what: "normal_form".into(), vertices: vec![x.1, x.2], value: 0.0, bound: 0.0 });
    }
    struct Q {
        four: f64,
        cone: Option<f64>,
        remark_fail: bool,
        verts: Vec<usize>,
    }
    let qs = par_samples(quadruples, seed, |_, rng| -> Result<Q> {
        let mut pick = || interior[rng.gen_range(0..interior.len())];
        let (v, v1, v2, u) = (pick(), pick(), pick(), pick());
        let tri = [v, v1, v2];
        let defect = |u: usize| -> Result<f64> {
            let mut worst = f64::NEG_INFINITY;
            for (a, b, c) in [(v, v1, v2), (v, v2, v1), (v1, v2, v)] {
                let lhs = dt.gromov(u, a, b)?;
                let rhs = dt.gromov(u, a, c)?.min(dt.gromov(u, b, c)?);
                worst = worst.max(rhs.value() - lhs.value());
            }
            Ok(worst)
        };
        let four = defect(u)?;
        let bw = [g.branch_point(&[v1, v2]), g.branch_point(&[v, v2]), g.branch_point(&[v, v1])];
        let (mut cone, mut remark_fail) = (None, false);
        if let [Some(w), Some(w1), Some(w2)] = bw {
            if let Some(uc) = g.branch_point(&[w, w1, w2]) {
                cone = Some(defect(uc)?);
                for (pair, b) in [((v1, v2), w), ((v, v2), w1), ((v, v1), w2)] {
                    let gp = dt.gromov(uc, pair.0, pair.1)?.value();
                    if (dt.dist(uc, b)? as f64) < gp - 0.5 {
                        remark_fail = true;
                    }
                }
            }
        }
        let _ = tri;
        Ok(Q { four, cone, remark_fail, verts: vec![v, v1, v2, u] })
    });
    let mut rep = HyperbolicityReport {
        vertices: g.len(),
        interior: interior.len(),
        interior_connected: connected,
        ancestor_failures: anc.len(),
        adjacent_ancestors_checked: adj_checked,
        adjacent_ancestors_failures: adj_fail,
        normal_form_checked: pairs,
        normal_form_mismatches: nf_fail.len(),
        quadruples,
        seed,
        worst_four_point: f64::NEG_INFINITY,
        four_point_bound: 5.0,
        cone_checked: 0,
        cone_skipped: 0,
        worst_cone: f64::NEG_INFINITY,
        cone_bound: 2.5,
        branch_point_failures: 0,
        witnesses,
        pass: false,
    };
    for q in qs {
        let q = q?;
        rep.worst_four_point = rep.worst_four_point.max(q.four);
        if q.four > rep.four_point_bound + 1e-9 && rep.witnesses.len() < MAX_WITNESSES {
            rep.witnesses.push(GraphWitness { what: "four_point".into(), vertices: q.verts.clone(), value: q.four, bound: 5.0 });
        }
        match q.cone {
            Some(c) => {
                rep.cone_checked += 1;
                rep.worst_cone = rep.worst_cone.max(c);
                if c > rep.cone_bound + 1e-9 && rep.witnesses.len() < MAX_WITNESSES {
                    rep.witnesses.push(GraphWitness { what: "cone_point".into(), vertices: q.verts.clone(), value: c, bound: 2.5 });
                }
            }
            None => rep.cone_skipped += 1,
        }
        if q.remark_fail {
            rep.branch_point_failures += 1;
        }
    }
    rep.pass = rep.interior_connected
        && rep.ancestor_failures == 0
        && rep.adjacent_ancestors_failures == 0
        && rep.normal_form_mismatches == 0
        && rep.worst_four_point <= rep.four_point_bound + 1e-9
        && (rep.cone_checked == 0 || rep.worst_cone <= rep.cone_bound + 1e-9)
        && rep.branch_point_failures == 0;
    Ok(rep)
}

fn path_ok(g: &ApproxGraph, p: &[usize]) -> bool {
    p.windows(2).all(|w| g.neighbors(w[0]).any(|x| x == w[1]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> ApproxGraph {
        let m = MoebiusStructure::<f64>::canonical();
        build_graph(&m, &GraphConfig { k1: 2, cap: 64, ..Default::default() }).unwrap()
    }

    #[test]
    fn canonical_step_is_root_two() {
        let m = MoebiusStructure::<f64>::canonical();
        let w = CirclePoint::north();
        let b = Ball::new(&m, w, 0.0, 1.0).unwrap();
        let n = next_sphere(&m, w, &b, true).unwrap();
        assert!((n.center - 2f64.sqrt()).abs() < 1e-12);
        let l = next_sphere(&m, w, &b, false).unwrap();
        assert!((l.center + 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn sigma_snapping() {
        assert_eq!(normalize_sigma(0.0416667).unwrap(), 1.0 / 24.0);
        assert!(normalize_sigma(0.05).is_err());
        assert_eq!(normalize_sigma(0.01).unwrap(), 0.01);
    }

    #[test]
    fn json_round_trip() {
        let g = small();
        let s = serde_json::to_string(&g).unwrap();
        let h = ApproxGraph::from_json(&s).unwrap();
        assert_eq!(h.vertices, g.vertices);
        assert_eq!(h.edges, g.edges);
        assert_eq!(h.parents(h.len() - 1), g.parents(g.len() - 1));
    }

    #[test]
    fn half_int_display() {
        assert_eq!(HalfInt(5).to_string(), "2.5");
        assert_eq!(HalfInt::from_int(3).to_string(), "3");
    }

    #[test]
    fn normal_form_of_neighbours() {
        let g = small();
        let v = g.at(2, 0).unwrap();
        let w = g.at(2, 1).unwrap();
        assert_eq!(g.normal_form(v, w).unwrap().length, 1);
        let p = g.parents(v)[0];
        let gp = g.parents(p)[0];
        assert_eq!(g.normal_form(v, gp).unwrap().length, 2);
    }
}
