//! Executable checks of the one-sided calculus theorems on concrete
//! instances. Each check first verifies the hypotheses on samples, and
//! reports `PremiseFailed` when they do not hold, so that a bad instance is
//! never mistaken for a counterexample.

mod ftc;
mod lebesgue;
mod mvt;
pub mod suite;

pub use ftc::{check_ftc, check_second_ftc, check_translation_invariance, integrate_piecewise};
pub use lebesgue::{
    check_lipschitz_representation, essential_sup, lebesgue_point_ratio,
    lebesgue_point_ratio_simple, Deviation,
};
pub use mvt::{
    check_antiderivative_uniqueness, check_cartan, check_constancy, check_lipschitz_char,
    check_nondecreasing, check_strong_mvt, MvtInstance,
};

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::derivatives::{self, DiniKind, Grid, Scalar};
use crate::error::{Error, Result};
use crate::expr::Side;
use crate::piecewise::{PiecewiseFunc, Value};
use crate::prering::Interval;
use crate::rational::{self, Rational};

/// Conclusion tolerance on binary64 paths; exact paths use zero.
pub const FLOAT_TOL: f64 = 1e-9;
/// Premise tolerance when derivatives come from binary64 closed forms.
pub const PREMISE_TOL_FLOAT: f64 = 1e-12;
/// Premise tolerance when derivatives come from the Dini estimators.
pub const PREMISE_TOL_ESTIMATED: f64 = 1e-6;
pub const DEFAULT_SAMPLES: usize = 512;

/// Fixed seed for the pair sampling inside individual checks.
const PAIR_SEED: u64 = 0x5eed;

/// `n` midpoints of a uniform grid on `(a, b)` plus every breakpoint inside,
/// with the exceptional points removed.
pub(crate) fn premise_points(
    a: &Rational,
    b: &Rational,
    exceptional: &BTreeSet<Rational>,
    n: usize,
    fs: &[&PiecewiseFunc],
) -> Vec<Rational> {
    let width = b - a;
    let mut pts: Vec<Rational> = (0..n)
        .map(|k| a + &width * rational::frac(2 * k as i64 + 1, 2 * n as i64))
        .collect();
    for f in fs {
        pts.extend(f.breakpoints().into_iter().filter(|x| a < x && x < b));
    }
    pts.retain(|x| !exceptional.contains(x));
    pts.sort();
    pts.dedup();
    pts
}

/// Deterministic pairs `x < y` in `[a, b]`, starting with `(a, b)` itself.
pub(crate) fn sample_pairs(a: &Rational, b: &Rational, n: usize) -> Vec<(Rational, Rational)> {
    let mut rng = ChaCha8Rng::seed_from_u64(PAIR_SEED);
    let width = b - a;
    let den = 1i64 << 20;
    let mut out = vec![(a.clone(), b.clone())];
    while out.len() < n.max(1) {
        let (i, j) = (rng.gen_range(0..=den), rng.gen_range(0..=den));
        if i == j {
            continue;
        }
        let (i, j) = (i.min(j), i.max(j));
        out.push((
            a + &width * rational::frac(i, den),
            a + &width * rational::frac(j, den),
        ));
    }
    out
}

pub(crate) fn closed_bounds(interval: &Interval) -> Result<(Rational, Rational)> {
    if interval.is_empty() || interval.is_singleton() {
        return Err(Error::InvalidArgument(format!(
            "{interval} is not a proper interval"
        )));
    }
    Ok((interval.lo().clone(), interval.hi().clone()))
}

pub(crate) fn check_inside(f: &PiecewiseFunc, a: &Rational, b: &Rational) -> Result<()> {
    let (lo, hi) = f.bounds();
    if *a < lo || *b > hi {
        return Err(Error::OutOfDomain(if *a < lo {
            a.clone()
        } else {
            b.clone()
        }));
    }
    Ok(())
}

/// Right derivative at `x`: exact or binary64 from the piece when its form
/// is known, otherwise estimated. The flag tells which premise tolerance
/// applies.
pub(crate) enum RightSlope {
    Known(Value),
    Estimated(Vec<f64>),
}

pub(crate) fn right_slope(f: &PiecewiseFunc, x: &Rational) -> Result<RightSlope> {
    match f.one_sided_derivative(x, Side::Right) {
        Ok(v) => Ok(RightSlope::Known(v)),
        Err(Error::UnknownForm(_)) => {
            let xf = rational::to_f64(x);
            let est = (0..f.dim())
                .map(|k| {
                    let c = f.coordinate(k);
                    derivatives::dini(&Scalar(&c), xf, DiniKind::LowerRight, Grid::default())
                        .map(|e| e.value)
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(RightSlope::Estimated(est))
        }
        Err(e) => Err(e),
    }
}

/// Lipschitz right derivative `L+ f(x)`, exactly squared when possible.
pub(crate) enum Speed {
    ExactSquared(Rational),
    Float(f64, f64),
}

pub(crate) fn right_speed(f: &PiecewiseFunc, x: &Rational) -> Result<Speed> {
    match right_slope(f, x)? {
        RightSlope::Known(Value::Exact(v)) => Ok(Speed::ExactSquared(v.norm_sq())),
        RightSlope::Known(v) => Ok(Speed::Float(v.norm_f64(), PREMISE_TOL_FLOAT)),
        RightSlope::Estimated(_) => {
            let est = derivatives::lipschitz_one_sided(
                f,
                rational::to_f64(x),
                Side::Right,
                Grid::default(),
            )?;
            Ok(Speed::Float(est.value, PREMISE_TOL_ESTIMATED))
        }
    }
}

/// `D+l g(x)` for a real function.
pub(crate) enum LowerSlope {
    Exact(Rational),
    Float(f64, f64),
}

pub(crate) fn lower_right_dini(g: &PiecewiseFunc, x: &Rational) -> Result<LowerSlope> {
    match right_slope(g, x)? {
        RightSlope::Known(Value::Exact(v)) => Ok(LowerSlope::Exact(v.0[0].clone())),
        RightSlope::Known(Value::Approx(v)) => Ok(LowerSlope::Float(v[0], PREMISE_TOL_FLOAT)),
        RightSlope::Estimated(v) => Ok(LowerSlope::Float(v[0], PREMISE_TOL_ESTIMATED)),
    }
}

/// Distance between two values: exact squared norm when both are exact.
pub(crate) enum Gap {
    ExactSquared(Rational),
    Float(f64),
}

pub(crate) fn gap(a: &Value, b: &Value) -> Gap {
    match (a, b) {
        (Value::Exact(x), Value::Exact(y)) => {
            Gap::ExactSquared(x.sub(y).expect("same dim").norm_sq())
        }
        _ => Gap::Float(a.sub(b).norm_f64()),
    }
}

impl Gap {
    pub(crate) fn to_f64(&self) -> f64 {
        match self {
            Gap::ExactSquared(q) => rational::to_f64(q).sqrt(),
            Gap::Float(x) => *x,
        }
    }

    pub(crate) fn is_zero(&self, tol: f64) -> bool {
        match self {
            Gap::ExactSquared(q) => num_traits::Zero::is_zero(q),
            Gap::Float(x) => *x <= tol,
        }
    }
}
