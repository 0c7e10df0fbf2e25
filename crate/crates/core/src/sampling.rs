//! Deterministic per-sample random streams and parallel fan-out.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::circle::CirclePoint;
use crate::scalar::Scalar;

/// Environment variable capping the worker count.
pub const THREADS_ENV: &str = "MOEBIUS_FILL_THREADS";

/// Independent stream for sample `index`: the result does not depend on which
/// thread draws it or in what order.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Installs a global pool sized by [`THREADS_ENV`], if set. Safe to call twice.
pub fn configure_threads() {
    if let Some(n) = std::env::var(THREADS_ENV).ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

/// Evaluates `f(i, rng_i)` for `i in 0..n` in parallel, preserving index order.
pub fn par_samples<T: Send>(n: usize, seed: u64, f: impl Fn(usize, &mut ChaCha8Rng) -> T + Sync + Send) -> Vec<T> {
    (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(seed, i as u64);
            f(i, &mut rng)
        })
        .collect()
}

pub fn random_point<S: Scalar>(rng: &mut impl Rng) -> CirclePoint<S> {
    CirclePoint::from_angle(S::lit(rng.gen_range(0.0..std::f64::consts::TAU)))
}

/// `k` points in counterclockwise order starting at a random angle.
///
/// Gaps are exponential; with `squeeze` one random gap is shrunk by a factor
/// drawn log-uniformly from `[1e-6, 1e-2]`, which populates the near-degenerate
/// stratum.
pub fn cyclic_points<S: Scalar>(rng: &mut impl Rng, k: usize, squeeze: bool) -> Vec<CirclePoint<S>> {
    let mut w: Vec<f64> = (0..k).map(|_| -(1.0 - rng.gen::<f64>()).ln() + 1e-3).collect();
    if squeeze {
        let j = rng.gen_range(0..k);
        w[j] *= 10f64.powf(rng.gen_range(-6.0..-2.0));
    }
    let total: f64 = w.iter().sum();
    let start = rng.gen_range(0.0..std::f64::consts::TAU);
    let mut acc = 0.0;
    let mut out = Vec::with_capacity(k);
    for wi in &w {
        out.push(CirclePoint::from_angle(S::lit(start + acc)));
        acc += wi / total * std::f64::consts::TAU;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: u64 = sample_rng(7, 3).gen();
        let b: u64 = sample_rng(7, 3).gen();
        let c: u64 = sample_rng(7, 4).gen();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn cyclic_points_are_ordered() {
        let mut rng = sample_rng(1, 0);
        for squeeze in [false, true] {
            let p: Vec<CirclePoint<f64>> = cyclic_points(&mut rng, 5, squeeze);
            let offs: Vec<f64> = p.iter().map(|x| x.ccw_offset(p[0])).collect();
            assert!(offs.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn par_samples_keeps_order() {
        let v = par_samples(100, 9, |i, _| i);
        assert_eq!(v, (0..100).collect::<Vec<_>>());
    }
}
