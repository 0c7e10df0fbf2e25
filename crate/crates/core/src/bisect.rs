//! Bracketed bisection for monotone functions.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const MAX_ITER: usize = 200;

/// Finds a sign change of `f` on `[lo, hi]`.
///
/// `sign_lo` is the sign of `f` near `lo` (`true` for positive). When the
/// endpoint values are computable they are checked against it; an endpoint that
/// evaluates to NaN is trusted. Iteration stops after [`MAX_ITER`] steps, when
/// the midpoint coincides with an endpoint, or when the bracket is narrower
/// than `tol`.
pub fn bisect<S: Scalar>(
    mut f: impl FnMut(S) -> S,
    lo: S,
    hi: S,
    sign_lo: bool,
    tol: S,
    what: &str,
) -> Result<S> {
    if !(lo < hi) {
        return Err(Error::Domain(format!("{what}: empty bracket")));
    }
    let (flo, fhi) = (f(lo), f(hi));
    let bad = |v: S, pos: bool| !v.is_nan() && v != S::zero() && ((v > S::zero()) != pos);
    if bad(flo, sign_lo) || bad(fhi, !sign_lo) {
        return Err(Error::Structure(format!("{what}: no sign change on bracket")));
    }
    let (mut a, mut b) = (lo, hi);
    let two = S::lit(2.0);
    for _ in 0..MAX_ITER {
        let m = a + (b - a) / two;
        if m <= a || m >= b || b - a < tol {
            break;
        }
        let fm = f(m);
        if fm.is_nan() {
            return Err(Error::Precision(format!("{what}: NaN inside bracket")));
        }
        if fm == S::zero() {
            return Ok(m);
        }
        if (fm > S::zero()) == sign_lo {
            a = m;
        } else {
            b = m;
        }
    }
    Ok(a + (b - a) / two)
}

/// Grows `hi = lo + step * 2^k` until `pred(hi)` holds.
pub fn expand_until<S: Scalar>(lo: S, step: S, mut pred: impl FnMut(S) -> bool, what: &str) -> Result<S> {
    let mut d = step;
    for _ in 0..200 {
        let hi = lo + d;
        if pred(hi) {
            return Ok(hi);
        }
        d = d + d;
        if !d.is_finite() {
            break;
        }
    }
    Err(Error::Structure(format!("{what}: could not bracket")))
}
