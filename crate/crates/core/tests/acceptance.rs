//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Run with `cargo test -p moebius-core --test acceptance`.

use std::time::Instant;

use moebius_core::axioms::{check_increment, check_monotonicity, check_ptolemy, default_alpha, AxiomReport};
use moebius_core::circle::{CirclePoint, PointPair};
use moebius_core::harmonic::{associated_strip, conjugate, harmonic_residual, random_harmonic_pair, strip_bound, strip_width};
use moebius_core::hyperapprox::{build_graph, hyperbolicity_check, BallVertex, DistanceTable, GraphConfig, HyperbolicityReport};
use moebius_core::qi_verify::{qi_report, BoundReport, QiSamples};
use moebius_core::quasilines::{diameter_bound, quasiline_diameter_check, DiameterReport, Involution};
use moebius_core::sampling::{configure_threads, cyclic_points, par_samples, sample_rng};
use moebius_core::structure::{MoebiusStructure, PhiSpec, StructureSpec};

const SEED: u64 = 20240917;

struct Outcome {
    pass: bool,
    detail: String,
}

fn canonical() -> MoebiusStructure {
    MoebiusStructure::canonical()
}

fn sine() -> MoebiusStructure {
    StructureSpec::Pullback { phi: PhiSpec::Sine { eps: 0.3 } }.build().unwrap()
}

fn axioms(m: &MoebiusStructure, n: usize) -> (Vec<AxiomReport>, Outcome) {
    let mono = check_monotonicity(m, default_alpha(), n, SEED);
    let pt = check_ptolemy(m, n, SEED);
    let pass = mono.pass() && pt.pass() && mono.worst_margin >= -1e-9 && pt.worst_margin >= -1e-9;
    let detail = format!(
        "M(√2-1) worst {:.3e} ({} viol, {} skipped), Ptolemy worst {:.3e} ({} viol, {} skipped) on {n} tuples",
        mono.worst_margin, mono.violations, mono.skipped, pt.worst_margin, pt.violations, pt.skipped
    );
    (vec![mono, pt], Outcome { pass, detail })
}

fn criterion_1(m: &MoebiusStructure, with_counterexample: bool) -> Outcome {
    let t = Instant::now();
    let (_, mut o) = axioms(m, 100_000);
    if with_counterexample {
        let pw: MoebiusStructure = StructureSpec::Power { exponent: 0.5 }.build().unwrap();
        let bad = check_monotonicity(&pw, default_alpha(), 10_000, SEED);
        o.pass &= bad.violations > 0;
        o.detail += &format!("; |x-y|^(1/2): {} M(α) violations", bad.violations);
    }
    let secs = t.elapsed().as_secs_f64();
    o.pass &= secs < 30.0;
    o.detail += &format!("; {secs:.1}s");
    o
}

fn criterion_2(m: &MoebiusStructure) -> Outcome {
    let r = check_increment(m, 10_000, SEED);
    let res = r.max_constraint_residual.unwrap_or(f64::NAN);
    Outcome {
        pass: r.pass() && r.worst_margin > -1e-9 && res <= 1e-9 && r.skipped * 100 <= r.samples,
        detail: format!(
            "worst cr1 increment {:.3e}, max constraint residual {:.2e}, {} of {} skipped as uncertifiable",
            r.worst_margin, res, r.skipped, r.samples
        ),
    }
}

/// Inverse of `θ ↦ θ + ε sin θ` by bisection.
fn inv_sine(eps: f64, y: f64) -> f64 {
    let y = y.rem_euclid(std::f64::consts::TAU);
    let (mut lo, mut hi) = (y - 1.0, y + 1.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid + eps * mid.sin() < y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Classical conjugate in the north-pole chart, transported by `Φ` when `eps > 0`.
fn closed_form_conjugate(eps: f64, a: f64, b: f64, x: f64) -> f64 {
    let w = CirclePoint::<f64>::north();
    let phi = |t: f64| t + eps * t.sin();
    let s = |t: f64| CirclePoint::from_angle(phi(t)).chart_coord(w).unwrap();
    let (a, b, x) = (s(a), s(b), s(x));
    let y = (x * (a + b) - 2.0 * a * b) / (2.0 * x - a - b);
    inv_sine(eps, CirclePoint::from_chart(w, y).theta())
}

fn criterion_3(m: &MoebiusStructure, eps: f64) -> Outcome {
    let w = CirclePoint::<f64>::north();
    let res = par_samples(10_000, SEED, |_, rng| {
        let p = cyclic_points::<f64>(rng, 3, false);
        let (a, b, x) = (p[0].theta(), p[1].theta(), p[2].theta());
        let axis = PointPair::new(p[0], p[1]).ok()?;
        let got = conjugate(m, &axis, p[2]).ok()?;
        let want = CirclePoint::from_angle(closed_form_conjugate(eps, a, b, x));
        // Chart units of the north-pole chart; skip conjugates too close to the chart base.
        let (g, h) = (got.chart_coord(w)?, want.chart_coord(w)?);
        if h.abs() > 1e4 {
            return None;
        }
        Some((g - h).abs() / (1.0 + h.abs()).max(1.0))
    });
    let n = res.iter().flatten().count();
    let worst = res.iter().flatten().fold(0.0f64, |a, &b| a.max(b));
    Outcome { pass: worst <= 1e-8 && n >= 9_000, detail: format!("max deviation {worst:.2e} chart units over {n} samples") }
}

fn criterion_4(m: &MoebiusStructure) -> Outcome {
    let cfg = GraphConfig::default();
    let g = build_graph(m, &cfg).unwrap();
    let w = CirclePoint::from_angle(g.omega);
    let (mut step_err, mut min_overlap, mut max_res) = (0.0f64, f64::INFINITY, 0.0f64);
    for k in g.levels.0..=g.levels.1 {
        for p in g.level_vertices(k).windows(2) {
            let r = p[0].radius;
            let step = m.log_dist_coords(w, p[0].center, p[1].center).exp() / r;
            step_err = step_err.max((step / 2f64.sqrt() - 1.0).abs());
            min_overlap = min_overlap.min(m.log_dist_coords(w, p[1].a, p[0].b).exp() / r);
            let pr = |v: &BallVertex| PointPair::from_chart(w, Some(v.a), Some(v.b)).unwrap();
            max_res = max_res.max(harmonic_residual(m, &pr(&p[0]), &pr(&p[1])).unwrap());
        }
    }
    Outcome {
        pass: step_err <= 1e-9 && min_overlap >= 0.25 && max_res <= 1e-9,
        detail: format!(
            "step/(√2 r) - 1 at most {step_err:.2e}, min overlap {min_overlap:.4} r, max residual {max_res:.2e}, {} balls",
            g.len()
        ),
    }
}

fn criterion_5(m: &MoebiusStructure) -> Outcome {
    let res = par_samples(10_000, SEED, |_, rng| {
        let p = cyclic_points::<f64>(rng, 4, false);
        let a = PointPair::new(p[0], p[1]).ok()?;
        let b = PointPair::new(p[2], p[3]).ok()?;
        let s = strip_width(m, &a, &b).ok()?;
        let bound = strip_bound(m, &a, &b).ok()?;
        let (a1, b1) = associated_strip(&a, &b).ok()?;
        let s1 = strip_width(m, &a1, &b1).ok()?;
        Some((s.width - bound, s.width * s1.width))
    });
    let n = res.iter().flatten().count();
    let slack = res.iter().flatten().fold(f64::NEG_INFINITY, |a, x| a.max(x.0));
    let prod = res.iter().flatten().fold(0.0f64, |a, x| a.max(x.1));
    Outcome {
        pass: slack <= 1e-9 && prod <= 4.0 + 1e-9 && n >= 9_900,
        detail: format!("max width - bound {slack:.3e}, max width·width' {prod:.4} over {n} strips"),
    }
}

fn diameter_reports(m: &MoebiusStructure) -> Vec<DiameterReport> {
    (0..10)
        .map(|i| {
            let mut rng = sample_rng(SEED ^ 0x7175_6173, i);
            let q = random_harmonic_pair(m, &mut rng).unwrap();
            let rho = Involution::from_harmonic(m, &q).unwrap();
            quasiline_diameter_check(m, &rho, 1000, SEED + i).unwrap()
        })
        .collect()
}

fn criterion_6(m: &MoebiusStructure) -> Outcome {
    let reps = diameter_reports(m);
    let max_d = reps.iter().map(|r| r.max_diameter).fold(0.0, f64::max);
    let mut sides = [0.0f64; 5];
    for r in &reps {
        for (s, x) in sides.iter_mut().zip(r.max_sides) {
            *s = s.max(x);
        }
    }
    let held: usize = reps.iter().map(|r| r.hypothesis_held).sum();
    let paths: usize = reps.iter().map(|r| r.paths).sum();
    let errors: usize = reps.iter().map(|r| r.errors).sum();
    let ovl: usize = reps.iter().map(|r| r.overlap_failures).sum();
    let zz: usize = reps.iter().map(|r| r.zz_prime_failures).sum();
    Outcome {
        pass: reps.iter().all(|r| r.pass),
        detail: format!(
            "10 involutions x 1000 pairs: max diameter {max_d:.3} (bound {:.3}); sides μ,α,γ,β,ν max {:.3},{:.3},{:.3},{:.3},{:.3} on {held}/{paths} paths meeting the hypothesis; {errors} errors, {ovl} overlap failures; {zz} informational |zz'| misses",
            diameter_bound::<f64>(),
            sides[0], sides[1], sides[2], sides[3], sides[4]
        ),
    }
}

fn hyperbolicity(m: &MoebiusStructure) -> (HyperbolicityReport, f64) {
    let t = Instant::now();
    let g = build_graph(m, &GraphConfig::default()).unwrap();
    let dt = DistanceTable::build(&g).unwrap();
    let rep = hyperbolicity_check(&g, &dt, 10_000, 1000, SEED).unwrap();
    (rep, t.elapsed().as_secs_f64())
}

fn criterion_7(m: &MoebiusStructure) -> Outcome {
    let (r, secs) = hyperbolicity(m);
    Outcome {
        pass: r.pass && secs < 60.0,
        detail: format!(
            "{} interior of {} vertices, {} ancestor failures, {} normal-form mismatches / {}, worst 4-point {} (≤ 5), worst cone {} (≤ 2.5) on {} of {} quadruples; {secs:.1}s",
            r.interior,
            r.vertices,
            r.ancestor_failures,
            r.normal_form_mismatches,
            r.normal_form_checked,
            r.worst_four_point,
            r.worst_cone,
            r.cone_checked,
            r.quadruples
        ),
    }
}

fn qi(m: &MoebiusStructure) -> Vec<BoundReport> {
    let g = build_graph(m, &GraphConfig::default()).unwrap();
    let dt = DistanceTable::build(&g).unwrap();
    qi_report(m, &g, &dt, QiSamples::default(), SEED).unwrap()
}

fn criterion_8(m: &MoebiusStructure) -> Outcome {
    let reps = qi(m);
    let parts: Vec<String> = reps.iter().map(|r| format!("{} {:.3}{}", r.bound_id, r.worst_ratio, if r.pass { "" } else { "!" })).collect();
    Outcome { pass: reps.iter().all(|r| r.pass), detail: format!("worst measured/bound: {}", parts.join(", ")) }
}

fn criterion_9() -> Outcome {
    let m = sine();
    let subs = [
        ("1", criterion_1(&m, false)),
        ("2", criterion_2(&m)),
        ("3", criterion_3(&m, 0.3)),
        ("4", criterion_4(&m)),
        ("5", criterion_5(&m)),
        ("6", criterion_6(&m)),
        ("7", criterion_7(&m)),
        ("8", criterion_8(&m)),
    ];
    let failed: Vec<String> = subs.iter().filter(|s| !s.1.pass).map(|s| format!("{}: {}", s.0, s.1.detail)).collect();
    Outcome {
        pass: failed.is_empty(),
        detail: if failed.is_empty() { "Φ(θ) = θ + 0.3 sin θ: criteria 1-8 pass".into() } else { format!("failing: {}", failed.join(" | ")) },
    }
}

fn criterion_10() -> Outcome {
    let m = canonical();
    let a = (js(&axioms(&m, 10_000).0), js(&check_increment(&m, 1000, SEED)));
    let b = (js(&axioms(&m, 10_000).0), js(&check_increment(&m, 1000, SEED)));
    let mut rng = sample_rng(SEED, 0);
    let q = random_harmonic_pair(&m, &mut rng).unwrap();
    let rho = Involution::from_harmonic(&m, &q).unwrap();
    let d1 = js(&quasiline_diameter_check(&m, &rho, 100, SEED).unwrap());
    let d2 = js(&quasiline_diameter_check(&m, &rho, 100, SEED).unwrap());
    let h1 = js(&hyperbolicity(&m).0);
    let h2 = js(&hyperbolicity(&m).0);
    let g = build_graph(&m, &GraphConfig::default()).unwrap();
    let dt = DistanceTable::build(&g).unwrap();
    let n = QiSamples { chain: 100, vertex: 100, pairs: 100 };
    let q1 = js(&qi_report(&m, &g, &dt, n, SEED).unwrap());
    let q2 = js(&qi_report(&m, &g, &dt, n, SEED).unwrap());
    let same = [a.0 == b.0, a.1 == b.1, d1 == d2, h1 == h2, q1 == q2];
    Outcome {
        pass: same.iter().all(|&x| x),
        detail: format!("byte-identical reruns (axioms, increment, diameter, hyperbolicity, qi): {same:?}"),
    }
}

fn js<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string(v).unwrap()
}

fn main() {
    configure_threads();
    let m = canonical();
    type Suite<'a> = (u32, &'static str, Box<dyn Fn() -> Outcome + 'a>);
    let suites: Vec<Suite> = vec![
        (1, "axiom suite", Box::new(|| criterion_1(&m, true))),
        (2, "increment", Box::new(|| criterion_2(&m))),
        (3, "conjugate oracle", Box::new(|| criterion_3(&m, 0.0))),
        (4, "chain geometry", Box::new(|| criterion_4(&m))),
        (5, "strip bounds", Box::new(|| criterion_5(&m))),
        (6, "quasi-line diameter", Box::new(|| criterion_6(&m))),
        (7, "graph hyperbolicity", Box::new(|| criterion_7(&m))),
        (8, "edge, cobound and qi bounds", Box::new(|| criterion_8(&m))),
        (9, "pullback robustness", Box::new(criterion_9)),
        (10, "determinism", Box::new(criterion_10)),
    ];
    let filter: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut all = true;
    for (id, name, f) in suites {
        if !filter.is_empty() && !filter.contains(&id) {
            continue;
        }
        let t = Instant::now();
        let o = f();
        all &= o.pass;
        println!("criterion {id:>2} [{}] {name}: {} ({:.1}s)", if o.pass { "PASS" } else { "FAIL" }, o.detail, t.elapsed().as_secs_f64());
    }
    if !all {
        std::process::exit(1);
    }
}
