//! Shared numeric helpers: tolerance policy and 1-D root refinement.

/// Default absolute tolerance on algebraic residuals.
pub const DEFAULT_TOL: f64 = 1e-12;

/// Floor used by every mixed relative/absolute comparison so that
/// comparisons against exact zeros stay meaningful.
pub const SCALE_FLOOR: f64 = 1e-300;

/// Mixed relative/absolute comparison: `|a - b| <= tol * max(|a|, |b|, floor)`.
pub fn approx_eq(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(SCALE_FLOOR)
}

/// Residual test against a problem scale: `|r| <= tol * max(|scale|, floor)`.
pub fn residual_ok(r: f64, scale: f64, tol: f64) -> bool {
    r.abs() <= tol * scale.abs().max(SCALE_FLOOR)
}

/// Bisection with a secant-accelerated final polish.
///
/// Requires `f(lo)` and `f(hi)` of opposite (or zero) sign. Refines until the
/// bracket width drops below `xtol`, then returns the secant interpolant of
/// the final bracket.
pub fn bisect<F: FnMut(f64) -> f64>(mut f: F, mut lo: f64, mut hi: f64, xtol: f64) -> f64 {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return lo;
    }
    if fhi == 0.0 {
        return hi;
    }
    debug_assert!(
        flo.signum() != fhi.signum(),
        "bisect requires a sign change on [{lo}, {hi}]"
    );
    // f64 has 52 mantissa bits; 200 iterations is always enough.
    for _ in 0..200 {
        if (hi - lo).abs() <= xtol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        let fmid = f(mid);
        if fmid == 0.0 {
            return mid;
        }
        if fmid.signum() == flo.signum() {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    let fhi = f(hi);
    if (fhi - flo).abs() > 0.0 {
        let x = lo - flo * (hi - lo) / (fhi - flo);
        if x.is_finite() && x >= lo && x <= hi {
            return x;
        }
    }
    0.5 * (lo + hi)
}

/// Newton refinement of a root of `f` given its derivative, with a fallback
/// to the starting point if the iteration leaves `[lo, hi]` or stalls.
pub fn newton_polish<F, D>(mut f: F, mut df: D, x0: f64, lo: f64, hi: f64, iters: usize) -> f64
where
    F: FnMut(f64) -> f64,
    D: FnMut(f64) -> f64,
{
    let mut x = x0;
    let mut best = x0;
    let mut best_res = f(x0).abs();
    for _ in 0..iters {
        let d = df(x);
        if d == 0.0 || !d.is_finite() {
            break;
        }
        let step = f(x) / d;
        x -= step;
        if !x.is_finite() || x < lo || x > hi {
            break;
        }
        let r = f(x).abs();
        if r < best_res {
            best_res = r;
            best = x;
        }
        if step.abs() <= f64::EPSILON * x.abs().max(1.0) {
            break;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn approx_eq_handles_zero() {
        assert!(approx_eq(0.0, 0.0, 1e-12));
        assert!(!approx_eq(0.0, 1e-10, 1e-12));
        assert!(approx_eq(1.0, 1.0 + 1e-13, 1e-12));
    }

    #[test]
    fn bisect_finds_sqrt2() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-14);
        assert!((r - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn newton_polish_improves_root() {
        let coarse = 1.414;
        let r = newton_polish(|x| x * x - 2.0, |x| 2.0 * x, coarse, 1.0, 2.0, 8);
        assert!((r - 2f64.sqrt()).abs() < 1e-15);
    }
}
