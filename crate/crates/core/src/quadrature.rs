//! Adaptive Simpson quadrature for smooth pieces.
//!
//! Callers split at known breakpoints first; this routine only ever sees a
//! single smooth piece.

/// Absolute accuracy target used by the piecewise integrator.
pub const DEFAULT_TOL: f64 = 1e-12;

const MAX_DEPTH: u32 = 48;

pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = simpson(a, b, fa, fm, fb);
    recurse(&f, a, b, fa, fm, fb, whole, tol, MAX_DEPTH)
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn recurse<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol || m <= a || m >= b {
        return left + right + delta / 15.0;
    }
    recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_smooth_functions() {
        let v = adaptive_simpson(f64::sin, 0.0, 1.0, 1e-12);
        assert!((v - (1.0 - 1f64.cos())).abs() < 1e-12);
        let w = adaptive_simpson(|x| x * x, 0.0, 1.0, 1e-12);
        assert!((w - 1.0 / 3.0).abs() < 1e-14);
        assert_eq!(adaptive_simpson(f64::exp, 2.0, 2.0, 1e-12), 0.0);
    }
}
