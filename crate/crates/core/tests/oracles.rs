//! Checks against independent computations: exact rational arithmetic,
//! closed forms of the canonical structure, brute force.

use moebius_core::axioms::increment_margin;
use moebius_core::circle::{CirclePoint, PointPair};
use moebius_core::harmonic::{common_perpendicular, conjugate};
use moebius_core::hyperapprox::{bfs, build_graph, EdgeKind, GraphConfig};
use moebius_core::structure::MoebiusStructure;
use num::{BigInt, BigRational, Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Q = BigRational;

fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Classical harmonic conjugate of `x` with respect to `{a, b}` on the line.
fn conj_q(a: &Q, b: &Q, x: &Q) -> Q {
    let two = q(2, 1);
    (x * (a + b) - &two * a * b) / (&two * x - a - b)
}

fn cr1_q(x: [&Q; 4]) -> Q {
    let d = |i: usize, j: usize| (x[i] - x[j]).abs();
    d(0, 2) * d(1, 3) / (d(0, 3) * d(1, 2))
}

fn canonical() -> MoebiusStructure {
    MoebiusStructure::canonical()
}

fn pt(s: f64) -> CirclePoint {
    CirclePoint::from_chart(CirclePoint::north(), s)
}

#[test]
fn increment_margin_matches_exact_arithmetic() {
    let m = canonical();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    while checked < 200 {
        let mut v: Vec<i64> = (0..5).map(|_| rng.gen_range(-400..400)).collect();
        v.sort();
        v.dedup();
        if v.len() < 5 {
            continue;
        }
        // Chart coordinates grow counterclockwise: x6 < x7 < x1 < x2 < x3.
        let [x6, x7, x1, x2, x3] = [0, 1, 2, 3, 4].map(|i| q(v[i], 16));
        if &x1 + &x1 == &x3 + &x6 || &x2 + &x2 == &x3 + &x6 {
            continue;
        }
        let x5 = conj_q(&x3, &x6, &x1);
        let x4 = conj_q(&x3, &x6, &x2);
        let exact = cr1_q([&x1, &x2, &x6, &x7]) - cr1_q([&x4, &x5, &x6, &x7]);
        let f = |x: &Q| pt(x.to_f64().unwrap());
        let pts = [f(&x1), f(&x2), f(&x3), f(&x4), f(&x5), f(&x6), f(&x7)];
        let Ok((margin, _)) = increment_margin(&m, &pts) else { continue };
        let e = exact.to_f64().unwrap();
        assert!(!exact.is_negative(), "exact increment margin is negative: {e}");
        assert!((margin - e).abs() <= 1e-8 * (1.0 + e.abs()), "f64 {margin} vs exact {e}");
        checked += 1;
    }
}

#[test]
fn conjugate_matches_closed_form() {
    let m = canonical();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..2000 {
        let (a, b, x): (f64, f64, f64) = (rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
        if (a - b).abs() < 1e-3 || (x - a).abs() < 1e-3 || (x - b).abs() < 1e-3 || (2.0 * x - a - b).abs() < 1e-2 {
            continue;
        }
        let want = (x * (a + b) - 2.0 * a * b) / (2.0 * x - a - b);
        let axis = PointPair::new(pt(a), pt(b)).unwrap();
        let got = conjugate(&m, &axis, pt(x)).unwrap().chart_coord(CirclePoint::north()).unwrap();
        assert!((got - want).abs() <= 1e-8 * (1.0 + want.abs()), "a={a} b={b} x={x}: {got} vs {want}");
    }
}

#[test]
fn exact_conjugate_example() {
    let y = conj_q(&q(-1, 1), &q(1, 1), &q(3, 1));
    assert_eq!(y, q(1, 3));
    let got = conjugate(&canonical(), &PointPair::new(pt(-1.0), pt(1.0)).unwrap(), pt(3.0)).unwrap();
    assert!((got.chart_coord(CirclePoint::north()).unwrap() - 1.0 / 3.0).abs() < 1e-12);
}

/// The perpendicular of `(0, 2)` and `(6, 12)` by grid search over `x ∈ (1, 2)`:
/// `y` is forced by harmonicity with `(0, 2)`; the mismatch with `(6, 12)` is
/// minimized on a grid refined around the best cell.
#[test]
fn perpendicular_matches_grid_search() {
    // Signed cross-ratio: -1 exactly for harmonic pairs, +1 on the diagonal x = y.
    let harm = |a: f64, b: f64, x: f64, y: f64| (x - a) * (y - b) / ((x - b) * (y - a)) + 1.0;
    let y_of = |x: f64| conj_q(&q(0, 1), &q(2, 1), &Q::from_float(x).unwrap()).to_f64().unwrap();
    let (mut lo, mut hi) = (1.0 + 1e-6, 2.0 - 1e-6);
    let mut best = 0.0;
    for _ in 0..8 {
        let n = 1000;
        let mut bv = f64::INFINITY;
        for i in 0..=n {
            let x = lo + (hi - lo) * i as f64 / n as f64;
            let r = harm(6.0, 12.0, x, y_of(x)).abs();
            if r < bv {
                bv = r;
                best = x;
            }
        }
        let h = (hi - lo) / n as f64;
        (lo, hi) = (best - 2.0 * h, best + 2.0 * h);
    }
    let m = canonical();
    let c = common_perpendicular(&m, &PointPair::new(pt(0.0), pt(2.0)).unwrap(), &PointPair::new(pt(6.0), pt(12.0)).unwrap()).unwrap();
    let mut got: Vec<f64> = c.points().iter().map(|p| p.chart_coord(CirclePoint::north()).unwrap()).collect();
    got.sort_by(f64::total_cmp);
    assert!((got[0] - best).abs() < 1e-8, "{got:?} vs x={best}");
    assert!((got[1] - y_of(best)).abs() < 1e-7, "{got:?} vs y={}", y_of(best));
}

#[test]
fn edge_counts_match_brute_force() {
    let m = canonical();
    let g = build_graph(&m, &GraphConfig { k1: 3, cap: 40, ..Default::default() }).unwrap();
    let v = &g.vertices;
    let mut radial = 0;
    let mut horizontal = 0;
    for (i, x) in v.iter().enumerate() {
        for y in &v[i + 1..] {
            if y.level == x.level + 1 && x.a <= y.a && y.b <= x.b {
                radial += 1;
            }
            if y.level == x.level && (y.chain_index - x.chain_index).abs() == 1 {
                horizontal += 1;
            }
        }
    }
    let count = |k: EdgeKind| g.edges.iter().filter(|e| e.kind == k).count();
    assert_eq!(count(EdgeKind::Radial), radial);
    assert_eq!(count(EdgeKind::Horizontal), horizontal);
    assert!(radial > 0 && horizontal > 0);
}

/// Two levels around the anchor, distances worked out by hand: the level-1
/// anchor `(-σ, σ)` lies only in the level-0 anchor `(-1, 1)`.
#[test]
fn hand_distance_table() {
    let m = canonical();
    let g = build_graph(&m, &GraphConfig { k1: 1, cap: 8, ..Default::default() }).unwrap();
    let a0 = g.at(0, 0).unwrap();
    let a1 = g.at(0, 1).unwrap();
    let a2 = g.at(0, 2).unwrap();
    let c = g.at(1, 0).unwrap();
    assert_eq!(g.parents(c), &[a0]);
    let d = bfs(&g, c);
    assert_eq!([d[c], d[a0], d[a1], d[a2]], [0, 1, 2, 3]);
    let c8 = g.at(1, 8).unwrap();
    // Center 8√2σ ≈ 0.47: through the anchor, not along the chain.
    assert_eq!(d[c8], 2);
}
