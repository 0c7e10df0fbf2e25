//! `moebius`: batch front-end for the verification suites.
//!
//! Exit status: 0 when every check passes, 1 when a bound is violated (the
//! witness goes to stderr and into the report), 2 on usage or numeric errors.

mod config;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand};
use moebius_core::axioms::{check_increment, check_monotonicity, check_ptolemy, default_alpha};
use moebius_core::circle::{CirclePoint, PointPair};
use moebius_core::harmonic::{common_perpendicular, conjugate, random_harmonic_pair, HarmonicPair};
use moebius_core::hyperapprox::{build_graph, chain_stats, hyperbolicity_check, DistanceTable, GraphConfig};
use moebius_core::qi_verify::{qi_report, write_csv_file, QiSamples};
use moebius_core::quasilines::{quasiline_diameter_check, Involution};
use moebius_core::sampling::{configure_threads, sample_rng};
use moebius_core::structure::{MoebiusStructure, StructureSpec};
use moebius_core::svg::{render_graph, DiskScene};
use moebius_core::zigzag::delta_upper;
use moebius_core::{ApproxGraph, Scalar};
use serde::Serialize;
use serde_json::{json, Value};

use config::{parse_harmonic, parse_omega, parse_pair, parse_range, parse_structure, Precision, RunConfig};

#[derive(Parser)]
#[command(name = "moebius", version, about = "Checks for Möbius structures on the circle and their hyperbolic approximations")]
struct Cli {
    /// JSON run configuration; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// canonical, identity, sine:EPS or power:P.
    #[arg(long, global = true, value_parser = parse_structure)]
    structure: Option<StructureSpec>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    samples: Option<usize>,
    #[arg(long, global = true, value_enum)]
    precision: Option<Precision>,
    /// Output file (report JSON, graph JSON for `approx build`, SVG for `render`).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Monotonicity, Ptolemy and increment axioms on random tuples.
    CheckAxioms {
        #[arg(long)]
        alpha: Option<f64>,
    },
    /// Harmonic conjugate of a point with respect to an axis.
    Conjugate {
        #[arg(long, allow_hyphen_values = true, value_parser = parse_pair)]
        axis: (Option<f64>, Option<f64>),
        #[arg(long, allow_hyphen_values = true, value_parser = parse_point)]
        point: Coord,
        #[command(flatten)]
        chart: Chart,
    },
    /// Common perpendicular of two strongly causal pairs.
    Perp {
        #[arg(long, allow_hyphen_values = true, value_parser = parse_pair)]
        b: (Option<f64>, Option<f64>),
        #[arg(long, allow_hyphen_values = true, value_parser = parse_pair)]
        b1: (Option<f64>, Option<f64>),
        #[command(flatten)]
        chart: Chart,
    },
    /// Upper bound for the distance between two harmonic pairs, with its path.
    Delta {
        /// A,B/C,D
        #[arg(long, allow_hyphen_values = true, value_parser = parse_harmonic)]
        q: [(Option<f64>, Option<f64>); 2],
        #[arg(long, allow_hyphen_values = true, value_parser = parse_harmonic)]
        q1: [(Option<f64>, Option<f64>); 2],
        #[command(flatten)]
        chart: Chart,
    },
    /// Diameter of elliptic quasi-lines of random harmonic pairs.
    QuasilineDiam {
        #[arg(long, default_value_t = 10)]
        involutions: usize,
    },
    /// Hyperbolic approximation graphs.
    #[command(subcommand)]
    Approx(ApproxCmd),
    /// Bounds between the graph metric and the zigzag distance.
    #[command(subcommand)]
    Qi(QiCmd),
    /// SVG output.
    #[command(subcommand)]
    Render(RenderCmd),
}

#[derive(Args, Clone)]
struct Chart {
    /// Chart base point: `inf` (north pole) or an angle in radians.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_omega)]
    chart_omega: Option<f64>,
}

#[derive(Subcommand)]
enum ApproxCmd {
    Build {
        #[arg(long)]
        sigma: Option<f64>,
        /// K0..K1, inclusive.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_range::<i32>)]
        levels: Option<(i32, i32)>,
        /// LO..HI in chart coordinates.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_range::<f64>)]
        window: Option<(f64, f64)>,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_omega)]
        omega: Option<f64>,
        /// Spheres per side of the anchor, per level.
        #[arg(long)]
        cap: Option<usize>,
    },
    Hyperbolicity {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        quadruples: usize,
        /// Pairs for the normal-form check.
        #[arg(long, default_value_t = 1000)]
        pairs: usize,
    },
}

#[derive(Subcommand)]
enum QiCmd {
    Report {
        #[arg(long)]
        graph: PathBuf,
        /// Per-sample table.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum RenderCmd {
    /// Level layout of a graph.
    Graph {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Pairs and quasi-lines in the Poincaré disk.
    Disk {
        #[arg(long, allow_hyphen_values = true, value_parser = parse_pair)]
        pair: Vec<(Option<f64>, Option<f64>)>,
        /// Harmonic pairs A,B/C,D, drawn with their quasi-line.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_harmonic)]
        harmonic: Vec<[(Option<f64>, Option<f64>); 2]>,
        #[command(flatten)]
        chart: Chart,
    },
}

/// A chart coordinate, `None` for the chart base.
#[derive(Clone, Copy, Debug)]
struct Coord(Option<f64>);

fn parse_point(s: &str) -> Result<Coord, String> {
    config::parse_coord(s).map(Coord)
}

enum Outcome {
    Pass,
    Violated,
}

fn main() -> ExitCode {
    configure_threads();
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Violated) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<Outcome> {
    let file = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let mut flags = RunConfig {
        structure: cli.structure.clone(),
        seed: cli.seed,
        samples: cli.samples,
        precision: cli.precision,
        out: cli.out.clone(),
        ..Default::default()
    };
    if let Cmd::Approx(ApproxCmd::Build { sigma, levels, window, omega, cap }) = &cli.cmd {
        flags.sigma = *sigma;
        flags.levels = *levels;
        flags.window = *window;
        flags.omega = *omega;
        flags.cap = *cap;
    }
    if let Cmd::Qi(QiCmd::Report { csv, .. }) = &cli.cmd {
        flags.csv = csv.clone();
    }
    let cfg = file.merged(flags);
    cfg.validate()?;
    match cfg.precision.unwrap_or_default() {
        Precision::F64 => dispatch::<f64>(&cli.cmd, &cfg),
        Precision::F32 => dispatch::<f32>(&cli.cmd, &cfg),
    }
}

fn emit<T: Serialize>(cfg: &RunConfig, value: &T) -> Result<()> {
    let s = serde_json::to_string_pretty(value)? + "\n";
    match &cfg.out {
        Some(p) => std::fs::write(p, s).with_context(|| format!("writing {}", p.display()))?,
        None => print!("{s}"),
    }
    Ok(())
}

fn verdict(pass: bool, witnesses: Vec<Value>) -> Outcome {
    if pass {
        return Outcome::Pass;
    }
    for w in witnesses {
        eprintln!("violation: {w}");
    }
    Outcome::Violated
}

fn chart_base<S: Scalar>(c: &Chart) -> CirclePoint<S> {
    CirclePoint::from_angle(S::lit(c.chart_omega.unwrap_or(std::f64::consts::FRAC_PI_2)))
}

fn pair_of<S: Scalar>(w: CirclePoint<S>, p: (Option<f64>, Option<f64>)) -> Result<PointPair<S>> {
    Ok(PointPair::from_chart(w, p.0.map(S::lit), p.1.map(S::lit))?)
}

fn coord<S: Scalar>(w: CirclePoint<S>, x: CirclePoint<S>) -> Value {
    match x.chart_coord(w) {
        Some(s) => json!(s.f64()),
        None => json!("inf"),
    }
}

/// Nine decimals; a point within rounding of the chart base prints as `inf`.
fn fmt_coord<S: Scalar>(w: CirclePoint<S>, x: CirclePoint<S>) -> String {
    if x.angular_distance(w).f64() < 1e-12 {
        return "inf".into();
    }
    x.chart_coord(w).map_or("inf".into(), |s| {
        let t = format!("{:.9}", s.f64());
        match t.strip_prefix('-') {
            Some(r) if r.bytes().all(|b| b == b'0' || b == b'.') => r.to_string(),
            _ => t,
        }
    })
}

fn load_graph(path: &Path) -> Result<ApproxGraph> {
    ApproxGraph::load(path).with_context(|| format!("loading graph {}", path.display()))
}

fn dispatch<S: Scalar>(cmd: &Cmd, cfg: &RunConfig) -> Result<Outcome> {
    let m: MoebiusStructure<S> = cfg.structure().build()?;
    let seed = cfg.seed();
    match cmd {
        Cmd::CheckAxioms { alpha } => {
            let n = cfg.samples.unwrap_or(100_000);
            let alpha = alpha.map(S::lit).unwrap_or_else(default_alpha);
            let reps = vec![check_monotonicity(&m, alpha, n, seed), check_ptolemy(&m, n, seed), check_increment(&m, n / 10, seed)];
            emit(cfg, &reps)?;
            let bad = reps.iter().filter(|r| !r.pass()).map(|r| json!({"axiom": r.axiom, "margin": r.worst_margin, "angles": r.witness})).collect();
            Ok(verdict(reps.iter().all(|r| r.pass()), bad))
        }
        Cmd::Conjugate { axis, point, chart } => {
            let w = chart_base::<S>(chart);
            let a = pair_of(w, *axis)?;
            let x = point.0.map_or(w, |s| CirclePoint::from_chart(w, S::lit(s)));
            let y = conjugate(&m, &a, x)?;
            println!("{}", fmt_coord(w, y));
            Ok(Outcome::Pass)
        }
        Cmd::Perp { b, b1, chart } => {
            let w = chart_base::<S>(chart);
            let c = common_perpendicular(&m, &pair_of(w, *b)?, &pair_of(w, *b1)?)?;
            println!("{},{}", fmt_coord(w, c.p()), fmt_coord(w, c.q()));
            Ok(Outcome::Pass)
        }
        Cmd::Delta { q, q1, chart } => {
            let w = chart_base::<S>(chart);
            let h = |x: &[(Option<f64>, Option<f64>); 2]| -> Result<HarmonicPair<S>> { Ok(HarmonicPair::new(&m, pair_of(w, x[0])?, pair_of(w, x[1])?)?) };
            let (d, path) = delta_upper(&m, &h(q)?, &h(q1)?)?;
            let sides: Vec<Value> = path
                .sides
                .iter()
                .map(|s| {
                    json!({
                        "axis": [coord(w, s.axis.p()), coord(w, s.axis.q())],
                        "from": [coord(w, s.b_start.p()), coord(w, s.b_start.q())],
                        "to": [coord(w, s.b_end.p()), coord(w, s.b_end.q())],
                        "length": s.length.f64(),
                    })
                })
                .collect();
            emit(cfg, &json!({"delta_upper": d.f64(), "sides": sides, "flags": path.flags}))?;
            Ok(Outcome::Pass)
        }
        Cmd::QuasilineDiam { involutions } => {
            let n = cfg.samples.unwrap_or(1000);
            let mut out = Vec::new();
            let mut pass = true;
            let mut bad = Vec::new();
            for i in 0..*involutions {
                let mut rng = sample_rng(seed ^ 0x7175_6173, i as u64);
                let q = random_harmonic_pair(&m, &mut rng)?;
                let rho = Involution::from_harmonic(&m, &q)?;
                let rep = quasiline_diameter_check(&m, &rho, n, seed.wrapping_add(i as u64))?;
                let gen = [[q.a.p().theta().f64(), q.a.q().theta().f64()], [q.b.p().theta().f64(), q.b.q().theta().f64()]];
                if !rep.pass {
                    pass = false;
                    bad.push(json!({"generator": gen, "violations": rep.violations.iter().take(5).collect::<Vec<_>>()}));
                }
                out.push(json!({"generator": gen, "report": rep}));
            }
            emit(cfg, &out)?;
            Ok(verdict(pass, bad))
        }
        Cmd::Approx(ApproxCmd::Build { .. }) => {
            let out = cfg.out.clone().ok_or_else(|| anyhow!("approx build needs --out"))?;
            let mut gc = GraphConfig::default();
            if let Some(s) = cfg.sigma {
                gc.sigma = s;
            }
            if let Some(w) = cfg.omega {
                gc.omega = w;
            }
            if let Some((a, b)) = cfg.levels {
                (gc.k0, gc.k1) = (a, b);
            }
            gc.window = cfg.window;
            if let Some(c) = cfg.cap {
                gc.cap = c;
            }
            let g = build_graph(&m, &gc)?;
            g.save(&out)?;
            let stats = chain_stats(&m, &g)?;
            let summary = json!({"graph": out, "vertices": g.len(), "edges": g.edges.len(), "interior": g.interior().len(), "chains": stats});
            println!("{}", serde_json::to_string_pretty(&summary)?);
            Ok(Outcome::Pass)
        }
        Cmd::Approx(ApproxCmd::Hyperbolicity { graph, quadruples, pairs }) => {
            let g = load_graph(graph)?;
            let dt = DistanceTable::build(&g)?;
            let rep = hyperbolicity_check(&g, &dt, *quadruples, *pairs, seed)?;
            emit(cfg, &rep)?;
            let w = rep.witnesses.iter().map(|w| serde_json::to_value(w).unwrap_or(Value::Null)).collect();
            Ok(verdict(rep.pass, w))
        }
        Cmd::Qi(QiCmd::Report { graph, .. }) => {
            let g = load_graph(graph)?;
            let m: MoebiusStructure<S> = match (&cfg.structure, &g.structure) {
                (Some(s), _) | (None, Some(s)) => s.build()?,
                (None, None) => m,
            };
            let dt = DistanceTable::build(&g)?;
            let n = cfg.samples.unwrap_or(1000);
            let reps = qi_report(&m, &g, &dt, QiSamples { chain: n, vertex: n, pairs: n }, seed)?;
            emit(cfg, &reps)?;
            if let Some(p) = &cfg.csv {
                write_csv_file(&reps, p)?;
            }
            let bad = reps
                .iter()
                .filter(|r| !r.pass)
                .map(|r| json!({"bound": r.bound_id, "witnesses": r.witnesses}))
                .collect();
            Ok(verdict(reps.iter().all(|r| r.pass), bad))
        }
        Cmd::Render(RenderCmd::Graph { graph }) => {
            let g = load_graph(graph)?;
            write_svg(cfg, &render_graph(&g))
        }
        Cmd::Render(RenderCmd::Disk { pair, harmonic, chart }) => {
            let w = chart_base::<f64>(chart);
            let m64: MoebiusStructure<f64> = cfg.structure().build()?;
            let mut sc = DiskScene::default();
            for p in pair {
                sc.add_pair(pair_of(w, *p)?, "black");
            }
            for h in harmonic {
                let q = HarmonicPair::new(&m64, pair_of(w, h[0])?, pair_of(w, h[1])?)?;
                sc.add_quasiline(&Involution::from_harmonic(&m64, &q)?, 24, "#9ecae1");
                sc.add_pair(q.a, "#d62728");
                sc.add_pair(q.b, "#2ca02c");
            }
            write_svg(cfg, &sc.render())
        }
    }
}

fn write_svg(cfg: &RunConfig, svg: &str) -> Result<Outcome> {
    match &cfg.out {
        Some(p) => std::fs::write(p, svg).with_context(|| format!("writing {}", p.display()))?,
        None => print!("{svg}"),
    }
    Ok(Outcome::Pass)
}
