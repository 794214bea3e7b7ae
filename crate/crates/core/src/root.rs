//! Bracketing root finders.
//!
//! Every implicit equation in the model is monotone in the variable being
//! solved for, so plain bisection on a sign-changing bracket is enough and
//! never fails once a bracket is found. The helpers here find brackets (by
//! expansion or by grid scan) and bisect them down to floating-point
//! resolution.

use crate::error::{Error, Result};

/// Iteration cap for bisection. 200 halvings exhaust any `f64` bracket.
pub const MAX_BISECTIONS: usize = 200;

/// Bisects `f` on `[lo, hi]`, which must straddle a sign change.
///
/// Stops when the midpoint can no longer be distinguished from an endpoint,
/// when `f` vanishes exactly, or after [`MAX_BISECTIONS`] steps. Returns the
/// endpoint with the smaller `|f|`.
pub fn bisect<F>(mut f: F, lo: f64, hi: f64) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() || fa.is_nan() || fb.is_nan() {
        return Err(Error::NoRoot {
            what: "bisection target",
            lo: a,
            hi: b,
        });
    }
    for _ in 0..MAX_BISECTIONS {
        let m = a + 0.5 * (b - a);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
            fb = fm;
        }
    }
    Ok(if fa.abs() <= fb.abs() { a } else { b })
}

/// Log-spaced grid scan of `[lo, hi]` (both positive) with `n` points,
/// returning every sub-interval on which `f` changes sign. Exact zeros at a
/// grid point are returned as degenerate intervals `(x, x)`.
pub fn scan_sign_changes<F>(mut f: F, lo: f64, hi: f64, n: usize) -> Vec<(f64, f64)>
where
    F: FnMut(f64) -> f64,
{
    assert!(lo > 0.0 && hi > lo && n >= 2);
    let (llo, lhi) = (lo.ln(), hi.ln());
    let step = (lhi - llo) / (n - 1) as f64;
    let mut out = Vec::new();
    let mut prev_x = lo;
    let mut prev_f = f(lo);
    if prev_f == 0.0 {
        out.push((lo, lo));
    }
    for i in 1..n {
        let x = if i == n - 1 {
            hi
        } else {
            (llo + step * i as f64).exp()
        };
        let fx = f(x);
        if fx == 0.0 {
            out.push((x, x));
        } else if prev_f != 0.0 && fx.signum() != prev_f.signum() {
            out.push((prev_x, x));
        }
        prev_x = x;
        prev_f = fx;
    }
    out
}

/// Real roots of the monic cubic `λ³ + c2 λ² + c1 λ + c0`, sorted ascending.
///
/// The cubic is split into monotone pieces at the critical points of its
/// derivative; each piece with a sign change is bisected and the result is
/// polished with two Newton steps.
pub fn cubic_real_roots(c2: f64, c1: f64, c0: f64) -> Vec<f64> {
    let p = |x: f64| ((x + c2) * x + c1) * x + c0;
    let dp = |x: f64| (3.0 * x + 2.0 * c2) * x + c1;
    let bound = 1.0 + c2.abs().max(c1.abs()).max(c0.abs());

    let mut knots = vec![-bound];
    // 3λ² + 2 c2 λ + c1 = 0
    let disc = 4.0 * c2 * c2 - 12.0 * c1;
    if disc > 0.0 {
        let sq = disc.sqrt();
        let mut crit = [(-2.0 * c2 - sq) / 6.0, (-2.0 * c2 + sq) / 6.0];
        crit.sort_by(f64::total_cmp);
        knots.extend(crit.iter().filter(|c| c.abs() < bound));
    }
    knots.push(bound);

    let mut roots: Vec<f64> = Vec::new();
    for w in knots.windows(2) {
        let (a, b) = (w[0], w[1]);
        let (pa, pb) = (p(a), p(b));
        let root = if pa == 0.0 {
            Some(a)
        } else if pb == 0.0 {
            Some(b)
        } else if pa.signum() != pb.signum() {
            bisect(p, a, b).ok()
        } else {
            None
        };
        if let Some(mut r) = root {
            for _ in 0..2 {
                let d = dp(r);
                if d != 0.0 {
                    let next = r - p(r) / d;
                    if p(next).abs() < p(r).abs() {
                        r = next;
                    }
                }
            }
            if !roots
                .iter()
                .any(|x| (x - r).abs() <= 1e-14 * r.abs().max(1.0))
            {
                roots.push(r);
            }
        }
    }
    roots.sort_by(f64::total_cmp);
    roots
}
