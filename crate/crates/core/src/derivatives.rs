//! One-sided derivatives: exact values for piecewise functions and
//! numerical Dini and Lipschitz derivative estimates for general ones.

use std::fmt;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::expr::Side;
use crate::piecewise::{PiecewiseFunc, Value};
use crate::rational::{self, Rational};
use crate::report::{PremiseSample, Report};

/// Difference quotients beyond this magnitude set the `capped` flag.
pub const QUOTIENT_CAP: f64 = 1e12;

/// Right derivative at an interior point, from the piece to the right.
pub fn exact_right_derivative(f: &PiecewiseFunc, x: &Rational) -> Result<Value> {
    interior(f, x)?;
    f.one_sided_derivative(x, Side::Right)
}

/// Left derivative at an interior point, from the piece to the left.
pub fn exact_left_derivative(f: &PiecewiseFunc, x: &Rational) -> Result<Value> {
    interior(f, x)?;
    f.one_sided_derivative(x, Side::Left)
}

fn interior(f: &PiecewiseFunc, x: &Rational) -> Result<()> {
    let (lo, hi) = f.bounds();
    if *x <= lo || *x >= hi {
        return Err(Error::OutOfDomain(x.clone()));
    }
    Ok(())
}

/// A real function of a real variable, sampled in binary64.
pub trait RealFn: Sync {
    fn value(&self, x: f64) -> f64;

    /// `f(x + h) - f(x)`; implementors with exact arithmetic override this to
    /// avoid cancellation at tiny `h`.
    fn increment(&self, x: f64, h: f64) -> f64 {
        self.value(x + h) - self.value(x)
    }
}

impl<F: Fn(f64) -> f64 + Sync> RealFn for F {
    fn value(&self, x: f64) -> f64 {
        self(x)
    }
}

/// A vector function of a real variable, sampled in binary64.
pub trait VecFn: Sync {
    fn dim(&self) -> usize;

    fn value(&self, x: f64) -> Vec<f64>;

    fn increment(&self, x: f64, h: f64) -> Vec<f64> {
        let (a, b) = (self.value(x), self.value(x + h));
        b.iter().zip(a).map(|(b, a)| b - a).collect()
    }
}

/// Adapts a closure returning a vector.
pub struct VecClosure<F> {
    dim: usize,
    f: F,
}

impl<F: Fn(f64) -> Vec<f64> + Sync> VecClosure<F> {
    pub fn new(dim: usize, f: F) -> Self {
        VecClosure { dim, f }
    }
}

impl<F: Fn(f64) -> Vec<f64> + Sync> VecFn for VecClosure<F> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, x: f64) -> Vec<f64> {
        (self.f)(x)
    }
}

impl VecFn for PiecewiseFunc {
    fn dim(&self) -> usize {
        PiecewiseFunc::dim(self)
    }

    fn value(&self, x: f64) -> Vec<f64> {
        self.eval_f64(x)
    }

    fn increment(&self, x: f64, h: f64) -> Vec<f64> {
        self.increment_f64(x, h)
    }
}

/// First coordinate of a piecewise function as a real function.
pub struct Scalar<'a>(pub &'a PiecewiseFunc);

impl RealFn for Scalar<'_> {
    fn value(&self, x: f64) -> f64 {
        self.0.eval_f64(x)[0]
    }

    fn increment(&self, x: f64, h: f64) -> f64 {
        self.0.increment_f64(x, h)[0]
    }
}

/// `x sin(1/x)` extended by 0 at the origin.
pub fn x_sin_inv(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * (1.0 / x).sin()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DiniKind {
    #[serde(rename = "D+u")]
    UpperRight,
    #[serde(rename = "D+l")]
    LowerRight,
    #[serde(rename = "D-u")]
    UpperLeft,
    #[serde(rename = "D-l")]
    LowerLeft,
    #[serde(rename = "L+")]
    LipRight,
    #[serde(rename = "L-")]
    LipLeft,
}

impl DiniKind {
    pub fn side(self) -> Side {
        match self {
            DiniKind::UpperRight | DiniKind::LowerRight | DiniKind::LipRight => Side::Right,
            _ => Side::Left,
        }
    }

    fn is_upper(self) -> bool {
        !matches!(self, DiniKind::LowerRight | DiniKind::LowerLeft)
    }

    pub fn name(self) -> &'static str {
        match self {
            DiniKind::UpperRight => "D+u",
            DiniKind::LowerRight => "D+l",
            DiniKind::UpperLeft => "D-u",
            DiniKind::LowerLeft => "D-l",
            DiniKind::LipRight => "L+",
            DiniKind::LipLeft => "L-",
        }
    }
}

impl fmt::Display for DiniKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Geometric step sequence `h_j = h0 ratio^j`, `j < count`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub h0: f64,
    pub ratio: f64,
    pub count: usize,
}

impl Default for Grid {
    fn default() -> Self {
        Grid {
            h0: 1e-2,
            ratio: 0.5,
            count: 24,
        }
    }
}

impl Grid {
    /// Slowly shrinking grid that samples enough phases of a bounded
    /// oscillation to approach its envelope.
    pub fn dense() -> Self {
        Grid {
            h0: 1e-2,
            ratio: 0.9,
            count: 200,
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = self.count >= 8
            && self.h0.is_finite()
            && self.h0 > 0.0
            && self.ratio > 0.0
            && self.ratio < 1.0;
        if !ok {
            return Err(Error::InvalidArgument(format!(
                "grid needs h0 > 0, 0 < ratio < 1, count >= 8 (got {self:?})"
            )));
        }
        Ok(())
    }

    pub fn steps(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.count).map(|j| self.h0 * self.ratio.powi(j as i32))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiniEstimate {
    pub value: f64,
    pub kind: DiniKind,
    pub grid: Grid,
    /// Max minus min over the trailing window used.
    pub window_spread: f64,
    /// Whether the trailing window was taken from the extrapolated sequence.
    pub extrapolated: bool,
    /// Some quotient exceeded the cap; the true value may be infinite.
    pub capped: bool,
}

/// Extremum over the trailing half of `q` and of its first-order
/// extrapolation; whichever window is tighter wins. On smooth pieces the
/// extrapolated sequence converges at second order, on oscillating ones its
/// amplified spread hands the choice back to the raw quotients.
fn summarize(q: &[f64], kind: DiniKind, grid: Grid) -> DiniEstimate {
    let capped = q.iter().any(|v| v.abs() > QUOTIENT_CAP);
    let pick = |w: &[f64]| -> (f64, f64) {
        let hi = w.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lo = w.iter().copied().fold(f64::INFINITY, f64::min);
        (if kind.is_upper() { hi } else { lo }, hi - lo)
    };
    let (raw_value, raw_spread) = pick(&q[q.len() / 2..]);
    let rho = grid.ratio;
    let rich: Vec<f64> = q
        .windows(2)
        .map(|w| (w[1] - rho * w[0]) / (1.0 - rho))
        .collect();
    let (rich_value, rich_spread) = pick(&rich[rich.len() / 2..]);
    let extrapolated = !capped && rich_spread < raw_spread;
    let (value, window_spread) = if extrapolated {
        (rich_value, rich_spread)
    } else {
        (raw_value, raw_spread)
    };
    DiniEstimate {
        value,
        kind,
        grid,
        window_spread,
        extrapolated,
        capped,
    }
}

fn check_finite(v: f64, at: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::EvalFailure(at))
    }
}

/// Dini derivative estimate of a real function at `x`.
pub fn dini(f: &dyn RealFn, x: f64, kind: DiniKind, grid: Grid) -> Result<DiniEstimate> {
    grid.validate()?;
    if matches!(kind, DiniKind::LipRight | DiniKind::LipLeft) {
        return lipschitz_one_sided(&RealAsVec(f), x, kind.side(), grid);
    }
    let sign = if kind.side() == Side::Right {
        1.0
    } else {
        -1.0
    };
    let q = grid
        .steps()
        .map(|h| {
            let d = check_finite(f.increment(x, sign * h), x + sign * h)?;
            Ok(d / (sign * h))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(summarize(&q, kind, grid))
}

struct RealAsVec<'a>(&'a dyn RealFn);

impl VecFn for RealAsVec<'_> {
    fn dim(&self) -> usize {
        1
    }

    fn value(&self, x: f64) -> Vec<f64> {
        vec![self.0.value(x)]
    }

    fn increment(&self, x: f64, h: f64) -> Vec<f64> {
        vec![self.0.increment(x, h)]
    }
}

/// Estimate of `limsup ||f(x+h) - f(x)|| / |h|` on one side.
pub fn lipschitz_one_sided(f: &dyn VecFn, x: f64, side: Side, grid: Grid) -> Result<DiniEstimate> {
    grid.validate()?;
    let sign = if side == Side::Right { 1.0 } else { -1.0 };
    let q = grid
        .steps()
        .map(|h| {
            let d = f.increment(x, sign * h);
            for v in &d {
                check_finite(*v, x + sign * h)?;
            }
            Ok(crate::vector::norm_f64(&d) / h)
        })
        .collect::<Result<Vec<_>>>()?;
    let kind = if side == Side::Right {
        DiniKind::LipRight
    } else {
        DiniKind::LipLeft
    };
    Ok(summarize(&q, kind, grid))
}

/// Compares `L+ f(x)` with `||f'_r(x)||` at each sample point.
pub fn check_lipschitz_norm_identity(
    f: &PiecewiseFunc,
    xs: &[Rational],
    tol: f64,
) -> Result<Report> {
    check_lipschitz_norm_identity_with(Execution::default(), f, xs, tol)
}

pub fn check_lipschitz_norm_identity_with(
    exec: Execution,
    f: &PiecewiseFunc,
    xs: &[Rational],
    tol: f64,
) -> Result<Report> {
    let start = Instant::now();
    let samples = exec::map_slice(exec, xs, |x| -> Result<PremiseSample> {
        let exact = exact_right_derivative(f, x)?.norm_f64();
        let xf = rational::to_f64(x);
        let est = lipschitz_one_sided(f, xf, Side::Right, Grid::default())?.value;
        Ok(PremiseSample {
            point: xf,
            lhs: est,
            rhs: exact,
            margin: tol - (est - exact).abs(),
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let worst = samples
        .iter()
        .max_by(|a, b| (a.lhs - a.rhs).abs().total_cmp(&(b.lhs - b.rhs).abs()));
    let (lhs, rhs) = worst.map_or((0.0, 0.0), |s| (s.lhs, s.rhs));
    let pass = samples.iter().all(|s| s.margin >= 0.0);
    let report = Report::new("lipschitz_norm_identity", format!("{} points", xs.len()))
        .with_premise(samples)
        .conclude(lhs, rhs, tol, pass);
    Ok(Report::timed(start, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{Expr, Primitive};
    use crate::piecewise::PieceExpr;
    use crate::poly::Poly;
    use crate::rational::{frac, int};
    use crate::vector::QVector;

    fn poly1(domain: &str, p: Poly) -> PiecewiseFunc {
        PiecewiseFunc::polynomial(domain.parse().unwrap(), vec![p]).unwrap()
    }

    fn abs_fn() -> PiecewiseFunc {
        PiecewiseFunc::closed_form(
            "[-1,1]".parse().unwrap(),
            vec![Expr::call(Primitive::Abs, Expr::Var)],
        )
        .unwrap()
    }

    fn trig() -> PiecewiseFunc {
        PiecewiseFunc::closed_form(
            "[-2,2]".parse().unwrap(),
            vec![
                Expr::call(Primitive::Cos, Expr::Var),
                Expr::call(Primitive::Sin, Expr::Var),
            ],
        )
        .unwrap()
    }

    #[test]
    fn exact_one_sided() {
        let a = abs_fn();
        assert_eq!(
            exact_right_derivative(&a, &int(0)).unwrap(),
            Value::Exact(QVector::from_ints(&[1]))
        );
        assert_eq!(
            exact_left_derivative(&a, &int(0)).unwrap(),
            Value::Exact(QVector::from_ints(&[-1]))
        );
        let sq = poly1("[-3,3]", Poly::from_ints(&[0, 0, 1]));
        assert_eq!(
            exact_right_derivative(&sq, &int(1)).unwrap(),
            Value::Exact(QVector::from_ints(&[2]))
        );
        assert_eq!(
            exact_left_derivative(&sq, &int(1)).unwrap(),
            Value::Exact(QVector::from_ints(&[2]))
        );
        assert_eq!(
            exact_right_derivative(&trig(), &int(0)).unwrap(),
            Value::Exact(QVector::from_ints(&[0, 1]))
        );
        let kink = PiecewiseFunc::from_poly_knots(
            &[int(-1), int(0), int(1)],
            vec![vec![Poly::x()], vec![Poly::from_ints(&[0, 2])]],
        )
        .unwrap();
        assert_eq!(
            exact_left_derivative(&kink, &int(0)).unwrap(),
            Value::Exact(QVector::from_ints(&[1]))
        );
        assert_eq!(
            exact_right_derivative(&kink, &int(0)).unwrap(),
            Value::Exact(QVector::from_ints(&[2]))
        );
        assert!(exact_right_derivative(&kink, &int(1)).is_err());
    }

    #[test]
    fn dini_on_smooth_functions() {
        let sq = poly1("[-3,3]", Poly::from_ints(&[0, 0, 1]));
        for kind in [
            DiniKind::UpperRight,
            DiniKind::LowerRight,
            DiniKind::UpperLeft,
            DiniKind::LowerLeft,
        ] {
            let e = dini(&Scalar(&sq), 1.0, kind, Grid::default()).unwrap();
            assert!((e.value - 2.0).abs() < 1e-6, "{kind}: {e:?}");
        }
        for kind in [
            DiniKind::UpperRight,
            DiniKind::LowerLeft,
            DiniKind::LipRight,
        ] {
            assert_eq!(
                dini(&|_: f64| 5.0, 0.3, kind, Grid::default())
                    .unwrap()
                    .value,
                0.0
            );
        }
        let bad = Grid {
            count: 4,
            ..Grid::default()
        };
        assert!(dini(&|x: f64| x, 0.0, DiniKind::UpperRight, bad).is_err());
        assert!(matches!(
            dini(&|x: f64| x.ln(), 0.0, DiniKind::UpperLeft, Grid::default()),
            Err(Error::EvalFailure(_))
        ));
    }

    #[test]
    fn dini_on_oscillation() {
        let up = dini(&x_sin_inv, 0.0, DiniKind::UpperRight, Grid::dense()).unwrap();
        let low = dini(&x_sin_inv, 0.0, DiniKind::LowerRight, Grid::dense()).unwrap();
        assert!((up.value - 1.0).abs() < 5e-2, "{up:?}");
        assert!((low.value + 1.0).abs() < 5e-2, "{low:?}");
        assert!(up.window_spread > 1.0);
        assert!(!up.extrapolated);
    }

    #[test]
    fn capped_quotients() {
        let e = dini(
            &|x: f64| x.abs().sqrt(),
            0.0,
            DiniKind::UpperRight,
            Grid {
                count: 80,
                ..Grid::default()
            },
        )
        .unwrap();
        assert!(e.capped);
    }

    #[test]
    fn lipschitz_estimates() {
        let t = trig();
        for x in [-1.5, 0.0, 0.7] {
            for side in [Side::Right, Side::Left] {
                let e = lipschitz_one_sided(&t, x, side, Grid::default()).unwrap();
                assert!((e.value - 1.0).abs() < 1e-6, "{x} {side:?} {e:?}");
            }
        }
        let c = VecClosure::new(2, |_| vec![1.0, 2.0]);
        assert_eq!(
            lipschitz_one_sided(&c, 0.0, Side::Right, Grid::default())
                .unwrap()
                .value,
            0.0
        );
        let a = abs_fn();
        for side in [Side::Right, Side::Left] {
            let e = lipschitz_one_sided(&a, 0.0, side, Grid::default()).unwrap();
            assert!((e.value - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn norm_identity() {
        let cube = poly1("[-1,1]", Poly::from_ints(&[0, 0, 0, 1]));
        let xs: Vec<Rational> = (1..=50).map(|k| frac(2 * k - 51, 51)).collect();
        assert!(check_lipschitz_norm_identity(&cube, &xs, 1e-6)
            .unwrap()
            .passed());
        let konst = poly1("[-1,1]", Poly::from_ints(&[4]));
        let r = check_lipschitz_norm_identity(&konst, &xs, 1e-6).unwrap();
        assert!(r.passed() && r.conclusion.lhs == 0.0 && r.conclusion.rhs == 0.0);
        let kinked = PiecewiseFunc::new(vec![(
            "[-1,2]".parse().unwrap(),
            vec![
                PieceExpr::Poly(Poly::x()),
                PieceExpr::from_expr(Expr::call(
                    Primitive::Abs,
                    Expr::Poly(Poly::new(vec![frac(-1, 2), int(1)])),
                )),
            ],
        )])
        .unwrap();
        let off: Vec<Rational> = (0..40)
            .map(|k| frac(3 * k - 40, 41))
            .filter(|x| *x != frac(1, 2))
            .collect();
        assert!(check_lipschitz_norm_identity(&kinked, &off, 1e-6)
            .unwrap()
            .passed());
    }
}
