//! Lebesgue points, integral representation of Lipschitz functions, and
//! the essential supremum.

use std::time::Instant;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::piecewise::{Piece, PieceExpr, PiecewiseFunc, Value};
use crate::prering::Interval;
use crate::quadrature;
use crate::rational::{self, Rational};
use crate::report::{PremiseSample, Report};
use crate::simple::SimpleFunction;
use crate::surd::{Magnitude, SurdSum};
use crate::vector::QVector;

/// An averaged deviation, exact when the integrand allows it.
#[derive(Debug, Clone, PartialEq)]
pub enum Deviation {
    Exact(SurdSum),
    Approx(f64),
}

impl Deviation {
    pub fn to_f64(&self) -> f64 {
        match self {
            Deviation::Exact(s) => s.to_f64(),
            Deviation::Approx(x) => *x,
        }
    }

    pub fn as_rational(&self) -> Option<Rational> {
        match self {
            Deviation::Exact(s) => s.as_rational(),
            Deviation::Approx(_) => None,
        }
    }
}

/// `[s, s+h]` or `[s+h, s]`, with the length `|h|`.
fn window(s: &Rational, h: &Rational) -> Result<(Interval, Rational)> {
    if h.is_zero() {
        return Err(Error::InvalidArgument("h must be nonzero".into()));
    }
    let end = s + h;
    let w = Interval::closed(rational::min(s, &end), rational::max(s, &end))?;
    Ok((w, h.abs()))
}

/// `(1/|h|) ∫ |h(t) - h(s)| dt` over the window between `s` and `s + h`,
/// exactly, for each `h`.
pub fn lebesgue_point_ratio_simple(
    f: &SimpleFunction,
    s: &Rational,
    hs: &[Rational],
) -> Result<Vec<(Rational, Deviation)>> {
    let fs = f.eval(s);
    hs.iter()
        .map(|h| {
            let (w, len) = window(s, h)?;
            let mut acc = SurdSum::zero();
            let mut covered = Rational::zero();
            for t in f.terms() {
                let part = t
                    .carrier
                    .intersect(&crate::prering::SimpleSet::from_interval(w.clone()))
                    .length();
                if part.is_zero() {
                    continue;
                }
                let d = t.coeff.sub(&fs)?;
                acc = acc.add(&SurdSum::term(part.clone(), d.norm_sq()));
                covered += part;
            }
            acc = acc.add(&SurdSum::term(&len - covered, fs.norm_sq()));
            Ok((
                h.clone(),
                Deviation::Exact(acc.scale(&(rational::one() / &len))),
            ))
        })
        .collect()
}

/// Same ratio for a piecewise function: exact for real pieces of degree at
/// most one, adaptive quadrature otherwise.
pub fn lebesgue_point_ratio(
    f: &PiecewiseFunc,
    s: &Rational,
    hs: &[Rational],
) -> Result<Vec<(Rational, Deviation)>> {
    let fs = f.eval(s)?;
    hs.iter()
        .map(|h| {
            let (w, len) = window(s, h)?;
            let (lo, hi) = f.bounds();
            if *w.lo() < lo || *w.hi() > hi {
                return Err(Error::OutOfDomain(s + h));
            }
            let ratio = match exact_deviation(f, &fs, &w)? {
                Some(total) => Deviation::Exact(SurdSum::from_rational(total / &len)),
                None => {
                    Deviation::Approx(float_deviation(f.pieces(), &fs, &w) / rational::to_f64(&len))
                }
            };
            Ok((h.clone(), ratio))
        })
        .collect()
}

fn exact_deviation(f: &PiecewiseFunc, fs: &Value, w: &Interval) -> Result<Option<Rational>> {
    let Value::Exact(fs) = fs else {
        return Ok(None);
    };
    if f.dim() != 1 {
        return Ok(None);
    }
    let c = &fs.0[0];
    let mut total = Rational::zero();
    for piece in f.pieces() {
        let cut = piece.interval.intersect(w);
        if cut.is_empty() || cut.is_singleton() {
            continue;
        }
        let Some(p) = piece.coords[0].as_poly().filter(|p| p.degree() <= 1) else {
            return Ok(None);
        };
        let q = p.sub(&crate::poly::Poly::constant(c.clone()));
        let anti = q.antiderivative();
        let (a, b) = (cut.lo().clone(), cut.hi().clone());
        let mut cuts = vec![a.clone()];
        if q.degree() == 1 {
            let root = -&q.coeffs()[0] / &q.coeffs()[1];
            if a < root && root < b {
                cuts.push(root);
            }
        }
        cuts.push(b);
        for seg in cuts.windows(2) {
            total += (anti.eval(&seg[1]) - anti.eval(&seg[0])).abs();
        }
    }
    Ok(Some(total))
}

fn float_deviation(pieces: &[Piece], fs: &Value, w: &Interval) -> f64 {
    let fs = fs.to_f64();
    let mut total = 0.0;
    for piece in pieces {
        let cut = piece.interval.intersect(w);
        if cut.is_empty() || cut.is_singleton() {
            continue;
        }
        let coords: &[PieceExpr] = &piece.coords;
        let integrand = |t: f64| {
            let v: Vec<f64> = coords
                .iter()
                .zip(&fs)
                .map(|(c, y)| c.eval_f64(t) - y)
                .collect();
            crate::vector::norm_f64(&v)
        };
        total += quadrature::adaptive_simpson(
            integrand,
            rational::to_f64(cut.lo()),
            rational::to_f64(cut.hi()),
            quadrature::DEFAULT_TOL,
        );
    }
    total
}

/// A continuous piecewise-linear `f` with Lipschitz constant `m` equals
/// `f(t0) + ∫_{t0}^t g` for its slope function `g`, and `|g| <= m`.
pub fn check_lipschitz_representation(
    f: &PiecewiseFunc,
    m: &Rational,
    interval: &Interval,
    n_probes: usize,
) -> Result<Report> {
    let start = Instant::now();
    let (a, b) = super::closed_bounds(interval)?;
    super::check_inside(f, &a, &b)?;
    if !f.is_continuous() {
        return Err(Error::PremiseFailed("f is not continuous".into()));
    }
    let linear = f.pieces().iter().all(|p| {
        p.coords
            .iter()
            .all(|c| c.as_poly().is_some_and(|q| q.degree() <= 1))
    });
    if !linear {
        return Err(Error::PremiseFailed("f is not piecewise linear".into()));
    }
    let m2 = m * m;
    let mut knots: Vec<Rational> = f
        .breakpoints()
        .into_iter()
        .filter(|x| a < *x && *x < b)
        .collect();
    knots.insert(0, a.clone());
    knots.push(b.clone());
    // Consecutive knots suffice: on each gap f is affine, and the triangle
    // inequality carries the bound to any pair.
    let mut premise = Vec::with_capacity(knots.len());
    for w in knots.windows(2) {
        let d = f.eval_exact(&w[1])?.sub(&f.eval_exact(&w[0])?)?;
        let dx = &w[1] - &w[0];
        let lhs = d.norm_sq();
        let rhs = &m2 * &dx * &dx;
        if lhs > rhs {
            return Err(Error::PremiseFailed(format!(
                "slope on [{}, {}] exceeds m",
                rational::format(&w[0]),
                rational::format(&w[1])
            )));
        }
        let (lhs, rhs) = (
            Magnitude::from_squared(lhs).to_f64(),
            Magnitude::from_squared(rhs).to_f64(),
        );
        premise.push(PremiseSample {
            point: rational::to_f64(&w[0]),
            lhs,
            rhs,
            margin: rhs - lhs,
        });
    }

    let g = f.derivative()?;
    let mut sup2 = Rational::zero();
    for p in g.pieces() {
        let cut = p.interval.intersect(interval);
        if cut.is_empty() || cut.is_singleton() {
            continue;
        }
        let slope = QVector(
            p.coords
                .iter()
                .map(|c| c.as_poly().expect("constant").eval(cut.lo()))
                .collect(),
        );
        sup2 = rational::max(&sup2, &slope.norm_sq());
    }

    let mut probes = knots.clone();
    let n = n_probes.max(1) as i64;
    probes.extend((0..n).map(|k| &a + (&b - &a) * rational::frac(2 * k + 1, 2 * n)));
    probes.sort();
    probes.dedup();
    let f0 = f.eval_exact(&a)?;
    let mut mismatches = 0usize;
    for t in &probes {
        let lhs = f.eval_exact(t)?.sub(&f0)?;
        match g.integrate(&a, t)? {
            Value::Exact(rhs) if rhs == lhs => {}
            _ => mismatches += 1,
        }
    }
    let pass = sup2 <= m2 && mismatches == 0;
    let report = Report::new(
        "lipschitz_representation",
        format!("m={} with {} probes", rational::format(m), probes.len()),
    )
    .with_premise(premise)
    .conclude_exact(&sup2, &m2, pass)
    .with_exact_text(
        format!(
            "{} (|g|^2, {} mismatches)",
            rational::format(&sup2),
            mismatches
        ),
        rational::format(&m2),
    );
    Ok(Report::timed(start, report))
}

/// Largest coefficient norm on a carrier of positive length; null carriers
/// do not count.
pub fn essential_sup(h: &SimpleFunction) -> Magnitude {
    h.terms()
        .iter()
        .filter(|t| t.carrier.length().is_positive())
        .map(|t| Magnitude::from_squared(t.coeff.norm_sq()))
        .max()
        .unwrap_or_else(Magnitude::zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{Expr, Primitive};
    use crate::poly::Poly;
    use crate::prering::SimpleSet;
    use crate::rational::{frac, int};

    fn set(s: &str) -> SimpleSet {
        s.parse().unwrap()
    }

    #[test]
    fn step_function_ratios() {
        let c = SimpleFunction::indicator(set("{[0,1]}"));
        let hs: Vec<Rational> = [frac(1, 4), frac(-1, 3), frac(1, 1000)].into();
        for (_, r) in lebesgue_point_ratio_simple(&c, &frac(1, 2), &hs).unwrap() {
            assert_eq!(r.as_rational(), Some(int(0)));
        }
        for (_, r) in
            lebesgue_point_ratio_simple(&c, &int(1), &[frac(1, 8), frac(1, 1000)]).unwrap()
        {
            assert_eq!(r.as_rational(), Some(int(1)));
        }
        for (_, r) in lebesgue_point_ratio_simple(&c, &int(1), &[frac(-1, 8)]).unwrap() {
            assert_eq!(r.as_rational(), Some(int(0)));
        }
        let v = SimpleFunction::constant_on(QVector::from_ints(&[1, 1]), set("{[0,1)}"));
        let (_, r) = &lebesgue_point_ratio_simple(&v, &int(1), &[frac(-1, 2)]).unwrap()[0];
        assert_eq!(r, &Deviation::Exact(SurdSum::sqrt(int(2))));
    }

    #[test]
    fn linear_ratios() {
        let id = PiecewiseFunc::polynomial("[-2,2]".parse().unwrap(), vec![Poly::x()]).unwrap();
        for h in [frac(1, 2), frac(-1, 4), frac(1, 100)] {
            let r = lebesgue_point_ratio(&id, &frac(1, 3), std::slice::from_ref(&h)).unwrap();
            assert_eq!(r[0].1.as_rational(), Some(h.abs() / int(2)));
        }
        let abs = PiecewiseFunc::closed_form(
            "[-1,1]".parse().unwrap(),
            vec![Expr::call(Primitive::Abs, Expr::Var)],
        )
        .unwrap();
        // Window straddles the kink: ∫_{-1/2}^{1/2} ||t| - 1/2| dt / 1 = 1/4.
        let r = lebesgue_point_ratio(&abs, &frac(-1, 2), &[int(1)]).unwrap();
        assert_eq!(r[0].1.as_rational(), Some(frac(1, 4)));
        let sq =
            PiecewiseFunc::polynomial("[-2,2]".parse().unwrap(), vec![Poly::from_ints(&[0, 0, 1])])
                .unwrap();
        let r = lebesgue_point_ratio(&sq, &int(0), &[frac(1, 2)]).unwrap();
        assert!((r[0].1.to_f64() - 1.0 / 12.0).abs() < 1e-12);
        assert!(lebesgue_point_ratio(&sq, &int(0), &[int(0)]).is_err());
    }

    #[test]
    fn lipschitz_representation() {
        let v = PiecewiseFunc::closed_form(
            "[0,2]".parse().unwrap(),
            vec![Expr::call(
                Primitive::Abs,
                Expr::Poly(Poly::from_ints(&[-1, 1])),
            )],
        )
        .unwrap();
        let r = check_lipschitz_representation(&v, &int(1), &"[0,2]".parse().unwrap(), 64).unwrap();
        assert!(r.passed());
        let affine =
            PiecewiseFunc::polynomial("[0,1]".parse().unwrap(), vec![Poly::from_ints(&[2, -3])])
                .unwrap();
        assert!(
            check_lipschitz_representation(&affine, &int(3), &"[0,1]".parse().unwrap(), 16)
                .unwrap()
                .passed()
        );
        let zig = PiecewiseFunc::from_poly_knots(
            &[int(0), int(1), int(2), int(3)],
            vec![
                vec![Poly::from_ints(&[0, 3]), Poly::from_ints(&[0, 4])],
                vec![Poly::from_ints(&[6, -3]), Poly::from_ints(&[8, -4])],
                vec![Poly::from_ints(&[-6, 3]), Poly::from_ints(&[-8, 4])],
            ],
        )
        .unwrap();
        let r =
            check_lipschitz_representation(&zig, &int(5), &"[0,3]".parse().unwrap(), 64).unwrap();
        assert!(r.passed());
        assert_eq!(r.conclusion.rhs_exact.as_deref(), Some("25"));
        assert!(matches!(
            check_lipschitz_representation(&zig, &int(4), &"[0,3]".parse().unwrap(), 8),
            Err(Error::PremiseFailed(_))
        ));
    }

    #[test]
    fn essential_supremum() {
        let h = SimpleFunction::real([(int(1), set("{[0,1]}")), (int(7), set("{[2,2]}"))]).unwrap();
        assert_eq!(essential_sup(&h).as_rational(), Some(int(1)));
        assert_eq!(
            essential_sup(&SimpleFunction::zero(1)).as_rational(),
            Some(int(0))
        );
        let h3 = SimpleFunction::real([(int(-3), set("{(0,1)}"))]).unwrap();
        assert_eq!(essential_sup(&h3).as_rational(), Some(int(3)));
        let bumped = h3
            .add(&SimpleFunction::real([(int(100), set("{[5,5]}"))]).unwrap())
            .unwrap();
        assert_eq!(essential_sup(&bumped), essential_sup(&h3));
    }
}
