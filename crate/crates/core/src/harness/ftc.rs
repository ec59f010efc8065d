//! Integrals of piecewise functions and the two fundamental theorems.

use std::collections::BTreeSet;
use std::time::Instant;

use super::{gap, premise_points, Gap};
use crate::error::{Error, Result};
use crate::expr::Side;
use crate::piecewise::{PiecewiseFunc, Value};
use crate::rational::{self, Rational};
use crate::report::{PremiseSample, Report};

/// Tolerance for quadrature-backed comparisons.
pub const QUADRATURE_TOL: f64 = 1e-10;

/// `∫_{t1}^{t2} f(t) dt`, oriented.
pub fn integrate_piecewise(f: &PiecewiseFunc, t1: &Rational, t2: &Rational) -> Result<Value> {
    f.integrate(t1, t2)
}

fn value_text(v: &Value) -> String {
    match v {
        Value::Exact(q) => q.to_string(),
        Value::Approx(x) if x.len() == 1 => format!("{:.15}", x[0]),
        Value::Approx(x) => format!("{x:.15?}"),
    }
}

/// Exact equality when both sides are exact, else within `tol`.
fn compare(theorem: &str, instance: String, lhs: &Value, rhs: &Value, tol: f64) -> Report {
    let d = gap(lhs, rhs);
    let pass = d.is_zero(tol);
    let tol = if matches!(d, Gap::ExactSquared(_)) {
        0.0
    } else {
        tol
    };
    Report::new(theorem, instance)
        .conclude(lhs.norm_f64(), rhs.norm_f64(), tol, pass)
        .with_exact_text(value_text(lhs), value_text(rhs))
}

/// `∫_{t1}^{t2} f'_r = f(t2) - f(t1)` for continuous `f`.
pub fn check_ftc(
    f: &PiecewiseFunc,
    t1: &Rational,
    t2: &Rational,
    exceptional: &BTreeSet<Rational>,
) -> Result<Report> {
    let start = Instant::now();
    if !f.is_continuous() {
        return Err(Error::PremiseFailed("f is not continuous".into()));
    }
    let g = f.derivative()?;
    let (a, b) = (rational::min(t1, t2), rational::max(t1, t2));
    let mut samples = Vec::new();
    if a < b {
        let sizes = premise_points(&a, &b, exceptional, 64, &[f])
            .into_iter()
            .map(|x| -> Result<(Rational, f64)> {
                let v = g.eval(&x)?.norm_f64();
                if !v.is_finite() {
                    return Err(Error::PremiseFailed(format!(
                        "f'_r unbounded near {}",
                        rational::format(&x)
                    )));
                }
                Ok((x, v))
            })
            .collect::<Result<Vec<_>>>()?;
        // Declared bound: the Lipschitz bound for polynomial pieces, else
        // the largest sampled size.
        let bound = f.lipschitz_bound_on(&a, &b).map_or_else(
            || sizes.iter().map(|(_, v)| *v).fold(0.0, f64::max),
            |m| rational::to_f64(&m),
        );
        samples = sizes
            .into_iter()
            .map(|(x, v)| PremiseSample {
                point: rational::to_f64(&x),
                lhs: v,
                rhs: bound,
                margin: bound - v,
            })
            .collect();
    }
    let lhs = g.integrate(t1, t2)?;
    let rhs = f.eval(t2)?.sub(&f.eval(t1)?);
    let instance = format!("[{}, {}]", rational::format(t1), rational::format(t2));
    let report = compare("ftc", instance, &lhs, &rhs, QUADRATURE_TOL).with_premise(samples);
    Ok(Report::timed(start, report))
}

/// `∫_{t1}^{t2} f(u + h) du = ∫_{t1+h}^{t2+h} f(u) du`.
pub fn check_translation_invariance(
    f: &PiecewiseFunc,
    t1: &Rational,
    t2: &Rational,
    h: &Rational,
) -> Result<Report> {
    let start = Instant::now();
    let shifted = f.translate(h);
    let lhs = shifted.integrate(t1, t2)?;
    let rhs = f.integrate(&(t1 + h), &(t2 + h))?;
    let instance = format!(
        "[{}, {}] by {}",
        rational::format(t1),
        rational::format(t2),
        rational::format(h)
    );
    Ok(Report::timed(
        start,
        compare(
            "translation_invariance",
            instance,
            &lhs,
            &rhs,
            QUADRATURE_TOL,
        ),
    ))
}

/// `F(t) = ∫_{t0}^t g` has right derivative `g(s)` wherever `g` is
/// right-continuous.
pub fn check_second_ftc(g: &PiecewiseFunc, t0: &Rational, samples: &[Rational]) -> Result<Report> {
    let start = Instant::now();
    let mut premise = Vec::with_capacity(samples.len());
    for s in samples {
        let (at, right) = (g.eval(s)?, g.limit(s, Side::Right)?);
        let d = gap(&at, &right);
        if !d.is_zero(super::PREMISE_TOL_FLOAT) {
            return Err(Error::PremiseFailed(format!(
                "g is not right-continuous at {}",
                rational::format(s)
            )));
        }
        premise.push(PremiseSample {
            point: rational::to_f64(s),
            lhs: d.to_f64(),
            rhs: 0.0,
            margin: -d.to_f64(),
        });
    }
    let big_f = g.antiderivative(t0)?;
    let mut worst = 0.0f64;
    let mut exact = true;
    let mut all_zero = true;
    for s in samples {
        let d = gap(&big_f.one_sided_derivative(s, Side::Right)?, &g.eval(s)?);
        exact &= matches!(d, Gap::ExactSquared(_));
        all_zero &= d.is_zero(0.0);
        worst = worst.max(d.to_f64());
    }
    let tol = if exact { 0.0 } else { super::FLOAT_TOL };
    let pass = if exact { all_zero } else { worst <= tol };
    let report = Report::new(
        "second_ftc",
        format!("t0={} at {} points", rational::format(t0), samples.len()),
    )
    .with_premise(premise)
    .conclude(worst, 0.0, tol, pass);
    Ok(Report::timed(start, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{Expr, Primitive};
    use crate::poly::Poly;
    use crate::rational::{frac, int};
    use crate::vector::QVector;

    fn poly(domain: &str, coords: Vec<Poly>) -> PiecewiseFunc {
        PiecewiseFunc::polynomial(domain.parse().unwrap(), coords).unwrap()
    }

    #[test]
    fn oriented_integrals() {
        let sq = poly("[-5,5]", vec![Poly::from_ints(&[0, 0, 1])]);
        assert_eq!(
            integrate_piecewise(&sq, &int(0), &int(1)).unwrap(),
            Value::Exact(QVector::scalar(frac(1, 3)))
        );
        let one = poly("[-5,5]", vec![Poly::from_ints(&[1])]);
        assert_eq!(
            integrate_piecewise(&one, &int(2), &int(0)).unwrap(),
            Value::Exact(QVector::from_ints(&[-2]))
        );
        let (t1, t2, t3) = (frac(-7, 3), frac(9, 4), frac(1, 5));
        let chain = integrate_piecewise(&sq, &t1, &t2)
            .unwrap()
            .add(&integrate_piecewise(&sq, &t2, &t3).unwrap())
            .add(&integrate_piecewise(&sq, &t3, &t1).unwrap());
        assert_eq!(chain, Value::Exact(QVector::from_ints(&[0])));
    }

    #[test]
    fn fundamental_theorem() {
        let none = BTreeSet::new();
        let abs = PiecewiseFunc::closed_form(
            "[-1,2]".parse().unwrap(),
            vec![Expr::call(Primitive::Abs, Expr::Var)],
        )
        .unwrap();
        let r = check_ftc(&abs, &int(-1), &int(2), &[int(0)].into()).unwrap();
        assert!(r.passed());
        assert_eq!(r.conclusion.lhs_exact.as_deref(), Some("1"));
        assert_eq!(r.conclusion.rhs_exact.as_deref(), Some("1"));
        let p = poly(
            "[0,3]",
            vec![Poly::from_ints(&[1, -2, 0, 5]), Poly::from_ints(&[0, 7])],
        );
        let r = check_ftc(&p, &frac(1, 3), &frac(5, 2), &none).unwrap();
        assert!(r.passed() && r.conclusion.tol == 0.0);
        let trig = PiecewiseFunc::closed_form(
            "[0,1]".parse().unwrap(),
            vec![
                Expr::call(Primitive::Sin, Expr::Var),
                Expr::call(Primitive::Cos, Expr::Var),
            ],
        )
        .unwrap();
        let r = check_ftc(&trig, &int(0), &int(1), &none).unwrap();
        assert!(r.passed() && r.conclusion.tol == QUADRATURE_TOL);
        let step = PiecewiseFunc::from_poly_knots(
            &[int(0), int(1), int(2)],
            vec![vec![Poly::from_ints(&[0])], vec![Poly::from_ints(&[1])]],
        )
        .unwrap();
        assert!(matches!(
            check_ftc(&step, &int(0), &int(2), &none),
            Err(Error::PremiseFailed(_))
        ));
    }

    #[test]
    fn translation() {
        let p = poly("[-5,5]", vec![Poly::from_ints(&[2, 0, -1, 1])]);
        let r = check_translation_invariance(&p, &int(-1), &frac(3, 2), &frac(7, 5)).unwrap();
        assert!(r.passed() && r.conclusion.tol == 0.0);
        assert!(check_translation_invariance(&p, &int(0), &int(1), &int(0))
            .unwrap()
            .passed());
        let sin = PiecewiseFunc::closed_form(
            "[-3,3]".parse().unwrap(),
            vec![Expr::call(Primitive::Sin, Expr::Var)],
        )
        .unwrap();
        assert!(
            check_translation_invariance(&sin, &int(0), &int(2), &frac(1, 2))
                .unwrap()
                .passed()
        );
    }

    #[test]
    fn second_theorem() {
        let step = PiecewiseFunc::from_poly_knots(
            &[int(0), int(1), int(2)],
            vec![vec![Poly::from_ints(&[1])], vec![Poly::from_ints(&[3])]],
        )
        .unwrap();
        let r = check_second_ftc(&step, &int(0), &[int(1), frac(1, 2), frac(3, 2)]).unwrap();
        assert!(r.passed());
        let p = poly("[0,2]", vec![Poly::from_ints(&[1, 1, 1])]);
        assert!(check_second_ftc(&p, &int(0), &[frac(1, 3), int(1)])
            .unwrap()
            .passed());
        let left = PiecewiseFunc::new(vec![
            (
                "[0,1]".parse().unwrap(),
                vec![crate::piecewise::PieceExpr::Poly(Poly::from_ints(&[1]))],
            ),
            (
                "(1,2]".parse().unwrap(),
                vec![crate::piecewise::PieceExpr::Poly(Poly::from_ints(&[3]))],
            ),
        ])
        .unwrap();
        let r = check_second_ftc(&left, &int(0), &[int(1)]);
        assert!(matches!(r, Err(Error::PremiseFailed(_))), "{r:?}");
    }
}
