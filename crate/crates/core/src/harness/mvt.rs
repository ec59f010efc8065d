//! The strong mean-value theorem and its corollaries.

use std::collections::BTreeSet;
use std::time::Instant;

use num_traits::{Signed, Zero};

use super::{
    check_inside, closed_bounds, gap, lower_right_dini, premise_points, right_slope, right_speed,
    sample_pairs, Gap, LowerSlope, RightSlope, Speed, FLOAT_TOL, PREMISE_TOL_ESTIMATED,
    PREMISE_TOL_FLOAT,
};
use crate::error::{Error, Result};
use crate::piecewise::{PiecewiseFunc, Value};
use crate::prering::Interval;
use crate::rational::{self, Rational};
use crate::report::{PremiseSample, Report};
use crate::surd::Magnitude;

/// `f: [a,b] -> R^d` against `g: [a,b] -> R`, with a finite exceptional set.
#[derive(Debug, Clone)]
pub struct MvtInstance {
    pub name: String,
    pub f: PiecewiseFunc,
    pub g: PiecewiseFunc,
    pub interval: Interval,
    pub exceptional: BTreeSet<Rational>,
}

impl MvtInstance {
    pub fn new(
        name: impl Into<String>,
        f: PiecewiseFunc,
        g: PiecewiseFunc,
        interval: Interval,
        exceptional: impl IntoIterator<Item = Rational>,
    ) -> Result<Self> {
        let (a, b) = closed_bounds(&interval)?;
        if g.dim() != 1 {
            return Err(Error::DimMismatch {
                expected: 1,
                found: g.dim(),
            });
        }
        check_inside(&f, &a, &b)?;
        check_inside(&g, &a, &b)?;
        let exceptional: BTreeSet<Rational> = exceptional.into_iter().collect();
        if let Some(t) = exceptional.iter().find(|t| **t <= a || **t >= b) {
            return Err(Error::OutOfDomain(t.clone()));
        }
        Ok(MvtInstance {
            name: name.into(),
            f,
            g,
            interval: Interval::closed(a, b)?,
            exceptional,
        })
    }

    fn bounds(&self) -> (Rational, Rational) {
        (self.interval.lo().clone(), self.interval.hi().clone())
    }

    fn require_continuity(&self) -> Result<()> {
        if !self.f.is_continuous() || !self.g.is_continuous() {
            return Err(Error::PremiseFailed(format!(
                "{}: f and g must be continuous",
                self.name
            )));
        }
        Ok(())
    }
}

/// Samples `L+ f(x) <= D+l g(x)` off the exceptional set.
fn mvt_premise(inst: &MvtInstance, n_samples: usize) -> Result<Vec<PremiseSample>> {
    let (a, b) = inst.bounds();
    let pts = premise_points(&a, &b, &inst.exceptional, n_samples, &[&inst.f, &inst.g]);
    let mut out = Vec::with_capacity(pts.len());
    for x in pts {
        let speed = right_speed(&inst.f, &x)?;
        let slope = lower_right_dini(&inst.g, &x)?;
        let (lhs, rhs, ok) = match (&speed, &slope) {
            (Speed::ExactSquared(s2), LowerSlope::Exact(d)) => {
                let ok = !d.is_negative() && *s2 <= d * d;
                (
                    Magnitude::from_squared(s2.clone()).to_f64(),
                    rational::to_f64(d),
                    ok,
                )
            }
            _ => {
                let (s, t1) = match speed {
                    Speed::ExactSquared(s2) => (Magnitude::from_squared(s2).to_f64(), 0.0),
                    Speed::Float(s, t) => (s, t),
                };
                let (d, t2) = match slope {
                    LowerSlope::Exact(d) => (rational::to_f64(&d), 0.0),
                    LowerSlope::Float(d, t) => (d, t),
                };
                (s, d, s <= d + t1.max(t2))
            }
        };
        let margin = if ok { (rhs - lhs).max(0.0) } else { rhs - lhs };
        if !ok {
            return Err(Error::PremiseFailed(format!(
                "{}: L+f({}) = {lhs} exceeds D+l g = {rhs}",
                inst.name,
                rational::format(&x)
            )));
        }
        out.push(PremiseSample {
            point: rational::to_f64(&x),
            lhs,
            rhs,
            margin,
        });
    }
    Ok(out)
}

fn mvt_conclusion(
    inst: &MvtInstance,
    theorem: &str,
    samples: Vec<PremiseSample>,
) -> Result<Report> {
    let (a, b) = inst.bounds();
    let df = gap(&inst.f.eval(&b)?, &inst.f.eval(&a)?);
    let dg = inst.g.eval(&b)?.sub(&inst.g.eval(&a)?);
    let report = Report::new(theorem, inst.name.clone()).with_premise(samples);
    Ok(match (&df, &dg) {
        (Gap::ExactSquared(l2), Value::Exact(r)) => {
            let r = &r.0[0];
            let pass = !r.is_negative() && *l2 <= r * r;
            let lhs = Magnitude::from_squared(l2.clone());
            report
                .conclude(lhs.to_f64(), rational::to_f64(r), 0.0, pass)
                .with_exact_text(lhs.to_string(), rational::format(r))
        }
        _ => {
            let (l, r) = (df.to_f64(), dg.to_f64()[0]);
            report.conclude(l, r, FLOAT_TOL, l <= r + FLOAT_TOL)
        }
    })
}

/// `L+ f <= D+l g` off a null set implies `||f(b) - f(a)|| <= g(b) - g(a)`.
pub fn check_strong_mvt(inst: &MvtInstance, n_samples: usize) -> Result<Report> {
    let start = Instant::now();
    inst.require_continuity()?;
    let samples = mvt_premise(inst, n_samples)?;
    Ok(Report::timed(
        start,
        mvt_conclusion(inst, "strong_mvt", samples)?,
    ))
}

/// The everywhere version: `||f'_r|| <= g'_r` on all of `(a, b)`.
pub fn check_cartan(inst: &MvtInstance, n_samples: usize) -> Result<Report> {
    let start = Instant::now();
    if !inst.exceptional.is_empty() {
        return Err(Error::InvalidArgument(
            "the Cartan form takes no exceptional set".into(),
        ));
    }
    inst.require_continuity()?;
    let samples = mvt_premise(inst, n_samples)?;
    Ok(Report::timed(
        start,
        mvt_conclusion(inst, "cartan", samples)?,
    ))
}

fn require_continuous(f: &PiecewiseFunc, what: &str) -> Result<()> {
    if !f.is_continuous() {
        return Err(Error::PremiseFailed(format!("{what} is not continuous")));
    }
    Ok(())
}

/// `D+l g >= 0` off a null set implies `g` nondecreasing.
pub fn check_nondecreasing(
    g: &PiecewiseFunc,
    interval: &Interval,
    exceptional: &BTreeSet<Rational>,
    n_pairs: usize,
) -> Result<Report> {
    let start = Instant::now();
    let (a, b) = closed_bounds(interval)?;
    check_inside(g, &a, &b)?;
    require_continuous(g, "g")?;
    let mut samples = Vec::new();
    for x in premise_points(&a, &b, exceptional, super::DEFAULT_SAMPLES, &[g]) {
        let (d, tol) = match lower_right_dini(g, &x)? {
            LowerSlope::Exact(d) => {
                if d.is_negative() {
                    return Err(Error::PremiseFailed(format!(
                        "D+l g({}) = {} < 0",
                        rational::format(&x),
                        d
                    )));
                }
                (rational::to_f64(&d), 0.0)
            }
            LowerSlope::Float(d, tol) => (d, tol),
        };
        if d < -tol {
            return Err(Error::PremiseFailed(format!(
                "D+l g({}) = {d} < 0",
                rational::format(&x)
            )));
        }
        samples.push(PremiseSample {
            point: rational::to_f64(&x),
            lhs: d,
            rhs: 0.0,
            margin: d.max(0.0),
        });
    }
    // Worst drop g(x1) - g(x2) over pairs x1 < x2.
    let mut exact_worst: Option<Rational> = None;
    let mut float_worst = f64::NEG_INFINITY;
    let mut all_exact = true;
    for (x1, x2) in sample_pairs(&a, &b, n_pairs) {
        match g.eval(&x1)?.sub(&g.eval(&x2)?) {
            Value::Exact(v) => {
                let d = v.0[0].clone();
                float_worst = float_worst.max(rational::to_f64(&d));
                exact_worst = Some(match exact_worst {
                    Some(w) => rational::max(&w, &d),
                    None => d,
                });
            }
            Value::Approx(v) => {
                all_exact = false;
                float_worst = float_worst.max(v[0]);
            }
        }
    }
    let report = Report::new("nondecreasing", format!("{n_pairs} pairs on {interval}"))
        .with_premise(samples);
    let report = match exact_worst {
        Some(w) if all_exact => {
            let pass = !w.is_positive();
            report.conclude_exact(&w, &Rational::zero(), pass)
        }
        _ => report.conclude(float_worst, 0.0, FLOAT_TOL, float_worst <= FLOAT_TOL),
    };
    Ok(Report::timed(start, report))
}

/// `f'_r = 0` off a null set implies `f` constant.
pub fn check_constancy(
    f: &PiecewiseFunc,
    interval: &Interval,
    exceptional: &BTreeSet<Rational>,
    n_pairs: usize,
) -> Result<Report> {
    let start = Instant::now();
    let (a, b) = closed_bounds(interval)?;
    check_inside(f, &a, &b)?;
    require_continuous(f, "f")?;
    let mut samples = Vec::new();
    for x in premise_points(&a, &b, exceptional, super::DEFAULT_SAMPLES, &[f]) {
        let (size, ok) = match right_slope(f, &x)? {
            RightSlope::Known(Value::Exact(v)) => {
                (crate::vector::norm_f64(&v.to_f64()), v.is_zero())
            }
            RightSlope::Known(v) => {
                let n = v.norm_f64();
                (n, n <= PREMISE_TOL_FLOAT)
            }
            RightSlope::Estimated(v) => {
                let n = crate::vector::norm_f64(&v);
                (n, n <= PREMISE_TOL_ESTIMATED)
            }
        };
        if !ok {
            return Err(Error::PremiseFailed(format!(
                "f'_r({}) has norm {size}",
                rational::format(&x)
            )));
        }
        samples.push(PremiseSample {
            point: rational::to_f64(&x),
            lhs: size,
            rhs: 0.0,
            margin: -size,
        });
    }
    let mut worst = 0.0f64;
    let mut exact = true;
    for (x1, x2) in sample_pairs(&a, &b, n_pairs) {
        let d = gap(&f.eval(&x1)?, &f.eval(&x2)?);
        exact &= matches!(d, Gap::ExactSquared(_)) && d.is_zero(0.0);
        worst = worst.max(d.to_f64());
    }
    let report =
        Report::new("constancy", format!("{n_pairs} pairs on {interval}")).with_premise(samples);
    let report = if exact {
        report.conclude_exact(&Rational::zero(), &Rational::zero(), true)
    } else {
        report.conclude(worst, 0.0, FLOAT_TOL, worst <= FLOAT_TOL)
    };
    Ok(Report::timed(start, report))
}

/// `L+ f <= m` off a null set implies `||f(x) - f(y)|| <= m |x - y|`.
pub fn check_lipschitz_char(
    f: &PiecewiseFunc,
    interval: &Interval,
    m: &Rational,
    exceptional: &BTreeSet<Rational>,
    n_pairs: usize,
) -> Result<Report> {
    let start = Instant::now();
    let (a, b) = closed_bounds(interval)?;
    check_inside(f, &a, &b)?;
    require_continuous(f, "f")?;
    let m2 = m * m;
    let mf = rational::to_f64(m);
    let mut samples = Vec::new();
    for x in premise_points(&a, &b, exceptional, super::DEFAULT_SAMPLES, &[f]) {
        let (s, ok) = match right_speed(f, &x)? {
            Speed::ExactSquared(s2) => (Magnitude::from_squared(s2.clone()).to_f64(), s2 <= m2),
            Speed::Float(s, tol) => (s, s <= mf + tol),
        };
        if !ok {
            return Err(Error::PremiseFailed(format!(
                "L+f({}) = {s} exceeds m = {}",
                rational::format(&x),
                rational::format(m)
            )));
        }
        samples.push(PremiseSample {
            point: rational::to_f64(&x),
            lhs: s,
            rhs: mf,
            margin: (mf - s).max(0.0),
        });
    }
    let mut pairs = sample_pairs(&a, &b, n_pairs);
    let mut knots: Vec<Rational> = f
        .breakpoints()
        .into_iter()
        .filter(|x| a < *x && *x < b)
        .collect();
    knots.insert(0, a.clone());
    knots.push(b.clone());
    pairs.extend(knots.windows(2).map(|w| (w[0].clone(), w[1].clone())));

    let mut pass = true;
    let mut worst_ratio = 0.0f64;
    for (x, y) in pairs {
        let dx = &y - &x;
        match gap(&f.eval(&y)?, &f.eval(&x)?) {
            Gap::ExactSquared(d2) => {
                pass &= d2 <= &m2 * &dx * &dx;
                worst_ratio = worst_ratio.max(Magnitude::from_squared(d2 / (&dx * &dx)).to_f64());
            }
            Gap::Float(d) => {
                let dxf = rational::to_f64(&dx);
                pass &= d <= mf * dxf + FLOAT_TOL;
                worst_ratio = worst_ratio.max(d / dxf);
            }
        }
    }
    let report = Report::new(
        "lipschitz_char",
        format!("m={} on {interval}", rational::format(m)),
    )
    .with_premise(samples)
    .conclude(worst_ratio, mf, FLOAT_TOL, pass);
    Ok(Report::timed(start, report))
}

/// Two continuous right antiderivatives of the same function differ by a
/// constant. The offset reported is `f2 - f1`.
pub fn check_antiderivative_uniqueness(
    f1: &PiecewiseFunc,
    f2: &PiecewiseFunc,
    interval: &Interval,
    exceptional: &BTreeSet<Rational>,
    n_points: usize,
) -> Result<Report> {
    let start = Instant::now();
    let (a, b) = closed_bounds(interval)?;
    if f1.dim() != f2.dim() {
        return Err(Error::DimMismatch {
            expected: f1.dim(),
            found: f2.dim(),
        });
    }
    for f in [f1, f2] {
        check_inside(f, &a, &b)?;
        require_continuous(f, "antiderivative")?;
    }
    let mut samples = Vec::new();
    for x in premise_points(&a, &b, exceptional, super::DEFAULT_SAMPLES, &[f1, f2]) {
        let (d, tol) = match (right_slope(f1, &x)?, right_slope(f2, &x)?) {
            (RightSlope::Known(u), RightSlope::Known(v)) => {
                let tol = if u.is_exact() && v.is_exact() {
                    0.0
                } else {
                    PREMISE_TOL_FLOAT
                };
                (gap(&u, &v), tol)
            }
            (u, v) => {
                let flat = |s: RightSlope| match s {
                    RightSlope::Known(v) => v.to_f64(),
                    RightSlope::Estimated(v) => v,
                };
                let (u, v) = (flat(u), flat(v));
                let diff: Vec<f64> = u.iter().zip(&v).map(|(a, b)| a - b).collect();
                (
                    Gap::Float(crate::vector::norm_f64(&diff)),
                    PREMISE_TOL_ESTIMATED,
                )
            }
        };
        if !d.is_zero(tol) {
            return Err(Error::PremiseFailed(format!(
                "right derivatives differ at {} by {}",
                rational::format(&x),
                d.to_f64()
            )));
        }
        samples.push(PremiseSample {
            point: rational::to_f64(&x),
            lhs: d.to_f64(),
            rhs: 0.0,
            margin: -d.to_f64(),
        });
    }
    let offset_at = |t: &Rational| -> Result<Value> { Ok(f2.eval(t)?.sub(&f1.eval(t)?)) };
    let y0 = offset_at(&a)?;
    let n = n_points.max(1) as i64;
    let mut worst = 0.0f64;
    let mut exact = y0.is_exact();
    for k in 0..=n {
        let t = &a + (&b - &a) * rational::frac(k, n);
        let d = gap(&offset_at(&t)?, &y0);
        exact &= matches!(d, Gap::ExactSquared(ref q) if q.is_zero());
        worst = worst.max(d.to_f64());
    }
    let text = match &y0 {
        Value::Exact(v) => v.to_string(),
        Value::Approx(v) => format!("{v:?}"),
    };
    let report = Report::new(
        "antiderivative_uniqueness",
        format!("{} points on {interval}", n + 1),
    )
    .with_premise(samples);
    let report = if exact {
        report
            .conclude(0.0, 0.0, 0.0, true)
            .with_exact_text("0".into(), text)
    } else {
        let pass = worst <= FLOAT_TOL;
        report
            .conclude(worst, 0.0, FLOAT_TOL, pass)
            .with_exact_text(format!("{worst:e}"), text)
    };
    Ok(Report::timed(start, report))
}
