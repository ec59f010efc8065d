//! Piecewise functions of one real variable with values in R^d.
//!
//! Polynomial pieces are handled exactly in rational arithmetic; pieces
//! built from registered primitives (sin, cos, exp, abs) fall back to
//! binary64 where no exact value exists. This type is the oracle substrate
//! for the derivative, mean-value and FTC checks.

use std::cmp::Ordering;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::expr::{Expr, Side};
use crate::poly::Poly;
use crate::prering::Interval;
use crate::quadrature;
use crate::rational::{self, Rational};
use crate::vector::QVector;

/// One coordinate of one piece.
#[derive(Debug, Clone, PartialEq)]
pub enum PieceExpr {
    Poly(Poly),
    Closed(Expr),
    /// Right derivative of a closed-form expression.
    Slope(Expr),
}

impl PieceExpr {
    /// Converts to a polynomial piece when the expression is one.
    pub fn from_expr(e: Expr) -> Self {
        match e.to_poly() {
            Some(p) => PieceExpr::Poly(p),
            None => PieceExpr::Closed(e),
        }
    }

    pub fn as_poly(&self) -> Option<&Poly> {
        match self {
            PieceExpr::Poly(p) => Some(p),
            _ => None,
        }
    }

    fn eval_exact(&self, x: &Rational) -> Option<Rational> {
        match self {
            PieceExpr::Poly(p) => Some(p.eval(x)),
            PieceExpr::Closed(e) => e.eval(x),
            PieceExpr::Slope(e) => e.dual(x, Side::Right).map(|(_, d)| d),
        }
    }

    pub(crate) fn eval_f64(&self, x: f64) -> f64 {
        match self {
            PieceExpr::Poly(p) => p.eval_f64(x),
            PieceExpr::Closed(e) => e.eval(&x).unwrap_or(f64::NAN),
            PieceExpr::Slope(e) => e.dual(&x, Side::Right).map_or(f64::NAN, |(_, d)| d),
        }
    }

    fn derivative_exact(&self, x: &Rational, side: Side) -> Result<Option<Rational>> {
        match self {
            PieceExpr::Poly(p) => Ok(Some(p.derivative().eval(x))),
            PieceExpr::Closed(e) => Ok(e.dual(x, side).map(|(_, d)| d)),
            PieceExpr::Slope(_) => Err(Error::UnknownForm("derivative of a slope piece".into())),
        }
    }

    fn derivative_f64(&self, x: f64, side: Side) -> Result<f64> {
        match self {
            PieceExpr::Poly(p) => Ok(p.derivative().eval_f64(x)),
            PieceExpr::Closed(e) => Ok(e.dual(&x, side).map_or(f64::NAN, |(_, d)| d)),
            PieceExpr::Slope(_) => Err(Error::UnknownForm("derivative of a slope piece".into())),
        }
    }

    fn derivative_piece(&self) -> PieceExpr {
        match self {
            PieceExpr::Poly(p) => PieceExpr::Poly(p.derivative()),
            PieceExpr::Closed(e) => PieceExpr::Slope(e.clone()),
            // callers reject slope pieces before differentiating
            PieceExpr::Slope(e) => PieceExpr::Slope(e.clone()),
        }
    }
}

/// Result of an evaluation: exact when every coordinate resolved exactly.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Exact(QVector),
    Approx(Vec<f64>),
}

impl Value {
    pub fn to_f64(&self) -> Vec<f64> {
        match self {
            Value::Exact(v) => v.to_f64(),
            Value::Approx(v) => v.clone(),
        }
    }

    pub fn exact(&self) -> Option<&QVector> {
        match self {
            Value::Exact(v) => Some(v),
            Value::Approx(_) => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Value::Exact(_))
    }

    pub fn dim(&self) -> usize {
        match self {
            Value::Exact(v) => v.dim(),
            Value::Approx(v) => v.len(),
        }
    }

    pub fn sub(&self, other: &Value) -> Value {
        match (self, other) {
            (Value::Exact(a), Value::Exact(b)) => Value::Exact(a.sub(b).expect("equal dims")),
            _ => Value::Approx(
                self.to_f64()
                    .iter()
                    .zip(other.to_f64())
                    .map(|(a, b)| a - b)
                    .collect(),
            ),
        }
    }

    pub fn add(&self, other: &Value) -> Value {
        match (self, other) {
            (Value::Exact(a), Value::Exact(b)) => Value::Exact(a.add(b).expect("equal dims")),
            _ => Value::Approx(
                self.to_f64()
                    .iter()
                    .zip(other.to_f64())
                    .map(|(a, b)| a + b)
                    .collect(),
            ),
        }
    }

    pub fn neg(&self) -> Value {
        match self {
            Value::Exact(a) => Value::Exact(a.scale(&-rational::one())),
            Value::Approx(v) => Value::Approx(v.iter().map(|x| -x).collect()),
        }
    }

    pub fn norm_f64(&self) -> f64 {
        crate::vector::norm_f64(&self.to_f64())
    }

    fn collect(coords: Vec<Option<Rational>>, fallback: impl Fn(usize) -> f64) -> Value {
        if coords.iter().all(Option::is_some) {
            Value::Exact(QVector(coords.into_iter().map(Option::unwrap).collect()))
        } else {
            Value::Approx(
                coords
                    .iter()
                    .enumerate()
                    .map(|(i, c)| c.as_ref().map_or_else(|| fallback(i), rational::to_f64))
                    .collect(),
            )
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Piece {
    pub interval: Interval,
    pub coords: Vec<PieceExpr>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseFunc {
    dim: usize,
    pieces: Vec<Piece>,
    continuous: bool,
}

impl PiecewiseFunc {
    /// Assembles pieces, splitting at the kinks of affine `abs` arguments
    /// so that such pieces become exact polynomials.
    pub fn new(raw: Vec<(Interval, Vec<PieceExpr>)>) -> Result<Self> {
        let dim = raw
            .first()
            .map(|(_, c)| c.len())
            .ok_or_else(|| Error::Type("a function needs at least one piece".into()))?;
        if dim == 0 {
            return Err(Error::Type("zero-dimensional piece".into()));
        }
        let mut pieces = Vec::new();
        for (interval, coords) in raw {
            if coords.len() != dim {
                return Err(Error::DimMismatch {
                    expected: dim,
                    found: coords.len(),
                });
            }
            if interval.is_empty() {
                return Err(Error::Type("empty piece interval".into()));
            }
            pieces.extend(split_kinks(interval, coords));
        }
        pieces.sort_by(|a, b| {
            a.interval
                .lo()
                .cmp(b.interval.lo())
                .then_with(|| b.interval.lo_closed().cmp(&a.interval.lo_closed()))
        });
        for w in pieces.windows(2) {
            let (a, b) = (&w[0].interval, &w[1].interval);
            if !a.intersect(b).is_empty() {
                return Err(Error::Type(format!("overlapping pieces {a} and {b}")));
            }
            let touching = a.hi() == b.lo() && (a.hi_closed() != b.lo_closed());
            if !touching {
                return Err(Error::DomainGap(format!("hole between {a} and {b}")));
            }
        }
        let mut f = PiecewiseFunc {
            dim,
            pieces,
            continuous: true,
        };
        f.continuous = f.check_continuity();
        Ok(f)
    }

    pub fn polynomial(domain: Interval, coords: Vec<Poly>) -> Result<Self> {
        Self::new(vec![(
            domain,
            coords.into_iter().map(PieceExpr::Poly).collect(),
        )])
    }

    pub fn closed_form(domain: Interval, coords: Vec<Expr>) -> Result<Self> {
        Self::new(vec![(
            domain,
            coords.into_iter().map(PieceExpr::from_expr).collect(),
        )])
    }

    /// Pieces on `[k0,k1), [k1,k2), ..., [k_{m-1},k_m]`.
    pub fn from_knots(knots: &[Rational], pieces: Vec<Vec<PieceExpr>>) -> Result<Self> {
        if knots.len() != pieces.len() + 1 || pieces.is_empty() {
            return Err(Error::InvalidArgument(
                "need one more knot than pieces".into(),
            ));
        }
        let last = pieces.len() - 1;
        let raw = pieces
            .into_iter()
            .enumerate()
            .map(|(i, coords)| {
                Interval::new(knots[i].clone(), knots[i + 1].clone(), true, i == last)
                    .map(|iv| (iv, coords))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(raw)
    }

    pub fn from_poly_knots(knots: &[Rational], pieces: Vec<Vec<Poly>>) -> Result<Self> {
        Self::from_knots(
            knots,
            pieces
                .into_iter()
                .map(|c| c.into_iter().map(PieceExpr::Poly).collect())
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn domain(&self) -> Interval {
        let first = &self.pieces[0].interval;
        let last = &self.pieces[self.pieces.len() - 1].interval;
        Interval::new(
            first.lo().clone(),
            last.hi().clone(),
            first.lo_closed(),
            last.hi_closed(),
        )
        .expect("pieces are sorted")
    }

    /// Closed hull `[lo, hi]` of the domain.
    pub fn bounds(&self) -> (Rational, Rational) {
        (
            self.pieces[0].interval.lo().clone(),
            self.pieces[self.pieces.len() - 1].interval.hi().clone(),
        )
    }

    /// Interior knots where adjacent pieces meet.
    pub fn breakpoints(&self) -> Vec<Rational> {
        self.pieces
            .iter()
            .skip(1)
            .map(|p| p.interval.lo().clone())
            .collect()
    }

    pub fn is_continuous(&self) -> bool {
        self.continuous
    }

    pub fn is_polynomial(&self) -> bool {
        self.pieces
            .iter()
            .all(|p| p.coords.iter().all(|c| c.as_poly().is_some()))
    }

    fn check_continuity(&self) -> bool {
        self.pieces.windows(2).all(|w| {
            let x = w[1].interval.lo();
            let left = eval_coords(&w[0].coords, x);
            let right = eval_coords(&w[1].coords, x);
            match (&left, &right) {
                (Value::Exact(a), Value::Exact(b)) => a == b,
                _ => left
                    .to_f64()
                    .iter()
                    .zip(right.to_f64())
                    .all(|(a, b)| (a - b).abs() <= 1e-12 * (1.0 + a.abs())),
            }
        })
    }

    fn in_hull(&self, x: &Rational) -> Result<()> {
        let (lo, hi) = self.bounds();
        if x < &lo || x > &hi {
            return Err(Error::OutOfDomain(x.clone()));
        }
        Ok(())
    }

    /// Piece owning `x`; at an open domain end, the adjacent piece.
    fn piece_at(&self, x: &Rational) -> Result<&Piece> {
        self.in_hull(x)?;
        let idx = self.pieces.partition_point(|p| p.interval.lo() <= x);
        // Two pieces can share a lower endpoint only through an open one.
        for i in idx.saturating_sub(2)..idx.min(self.pieces.len()) {
            if self.pieces[i].interval.contains(x) {
                return Ok(&self.pieces[i]);
            }
        }
        Ok(&self.pieces[idx.saturating_sub(1).min(self.pieces.len() - 1)])
    }

    /// Piece covering points immediately to the given side of `x`.
    fn piece_toward(&self, x: &Rational, side: Side) -> Result<&Piece> {
        self.in_hull(x)?;
        let found = self.pieces.iter().find(|p| {
            let (lo, hi) = (p.interval.lo(), p.interval.hi());
            match side {
                Side::Right => lo <= x && x < hi,
                Side::Left => lo < x && x <= hi,
            }
        });
        found.ok_or_else(|| Error::OutOfDomain(x.clone()))
    }

    pub fn eval(&self, x: &Rational) -> Result<Value> {
        Ok(eval_coords(&self.piece_at(x)?.coords, x))
    }

    /// Exact value or an error naming the point.
    pub fn eval_exact(&self, x: &Rational) -> Result<QVector> {
        match self.eval(x)? {
            Value::Exact(v) => Ok(v),
            Value::Approx(_) => Err(Error::InexactGenerator(x.clone())),
        }
    }

    pub fn eval_f64(&self, x: f64) -> Vec<f64> {
        let Some(q) = rational::from_f64(x) else {
            return vec![f64::NAN; self.dim];
        };
        match self.piece_at(&q) {
            Ok(p) => p.coords.iter().map(|c| c.eval_f64(x)).collect(),
            Err(_) => vec![f64::NAN; self.dim],
        }
    }

    /// `f(x + h) - f(x)` with the increment taken exactly when both values
    /// are exact, so tiny steps lose no digits to cancellation.
    pub fn increment_f64(&self, x: f64, h: f64) -> Vec<f64> {
        let (Some(qx), Some(qh)) = (rational::from_f64(x), rational::from_f64(h)) else {
            return vec![f64::NAN; self.dim];
        };
        let qy = &qx + &qh;
        match (self.eval(&qx), self.eval(&qy)) {
            (Ok(Value::Exact(a)), Ok(Value::Exact(b))) => b.sub(&a).expect("same dim").to_f64(),
            (Ok(a), Ok(b)) => {
                let (a, b) = (a.to_f64(), b.to_f64());
                b.iter().zip(a).map(|(b, a)| b - a).collect()
            }
            _ => vec![f64::NAN; self.dim],
        }
    }

    /// One-sided derivative of the piece adjacent to `x` on `side`.
    pub fn one_sided_derivative(&self, x: &Rational, side: Side) -> Result<Value> {
        let piece = self.piece_toward(x, side)?;
        let exact = piece
            .coords
            .iter()
            .map(|c| c.derivative_exact(x, side))
            .collect::<Result<Vec<_>>>()?;
        if exact.iter().all(Option::is_some) {
            return Ok(Value::Exact(QVector(
                exact.into_iter().map(Option::unwrap).collect(),
            )));
        }
        let xf = rational::to_f64(x);
        Ok(Value::Approx(
            piece
                .coords
                .iter()
                .map(|c| c.derivative_f64(xf, side))
                .collect::<Result<Vec<_>>>()?,
        ))
    }

    /// The right-derivative function, defined on `[lo, hi)` pieces.
    pub fn derivative(&self) -> Result<PiecewiseFunc> {
        let last = self.pieces.len() - 1;
        let pieces = self
            .pieces
            .iter()
            .enumerate()
            .map(|(i, p)| {
                if p.coords.iter().any(|c| matches!(c, PieceExpr::Slope(_))) {
                    return Err(Error::UnknownForm("second derivative".into()));
                }
                let iv = &p.interval;
                let interval = Interval::new(
                    iv.lo().clone(),
                    iv.hi().clone(),
                    if i == 0 { iv.lo_closed() } else { true },
                    if i == last { iv.hi_closed() } else { false },
                )?;
                Ok(Piece {
                    interval,
                    coords: p.coords.iter().map(PieceExpr::derivative_piece).collect(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let mut f = PiecewiseFunc {
            dim: self.dim,
            pieces,
            continuous: true,
        };
        f.continuous = f.check_continuity();
        Ok(f)
    }

    /// `F(t) = value_at_start + ∫_{t0}^{t} f`, exact; polynomial pieces only.
    pub fn antiderivative(&self, t0: &Rational) -> Result<PiecewiseFunc> {
        self.in_hull(t0)?;
        let mut polys: Vec<Vec<Poly>> = Vec::with_capacity(self.pieces.len());
        for p in &self.pieces {
            let coords = p
                .coords
                .iter()
                .map(|c| c.as_poly().map(Poly::antiderivative))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| Error::UnknownForm("antiderivative of a closed form".into()))?;
            polys.push(coords);
        }
        // chain constants so F is continuous, starting from 0 at the left end
        let mut offset = QVector::zeros(self.dim);
        for (p, coords) in self.pieces.iter().zip(polys.iter_mut()) {
            let lo = p.interval.lo();
            for (k, c) in coords.iter_mut().enumerate() {
                let shift = &offset.0[k] - c.eval(lo);
                *c = c.add(&Poly::constant(shift));
            }
            let hi = p.interval.hi();
            offset = QVector(coords.iter().map(|c| c.eval(hi)).collect());
        }
        let raw: Vec<_> = self
            .pieces
            .iter()
            .zip(polys)
            .map(|(p, c)| {
                (
                    p.interval.clone(),
                    c.into_iter().map(PieceExpr::Poly).collect(),
                )
            })
            .collect();
        let f = PiecewiseFunc::new(raw)?;
        let base = f.eval_exact(t0)?;
        Ok(f.offset(&base.scale(&-rational::one())))
    }

    /// Oriented integral `∫_{t1}^{t2} f`; exact on polynomial pieces.
    pub fn integrate(&self, t1: &Rational, t2: &Rational) -> Result<Value> {
        self.in_hull(t1)?;
        self.in_hull(t2)?;
        match t1.cmp(t2) {
            Ordering::Equal => return Ok(Value::Exact(QVector::zeros(self.dim))),
            Ordering::Greater => return Ok(self.integrate(t2, t1)?.neg()),
            Ordering::Less => {}
        }
        let mut exact: Vec<Option<Rational>> = vec![Some(Rational::zero()); self.dim];
        let mut approx = vec![0.0f64; self.dim];
        for p in &self.pieces {
            let lo = rational::max(p.interval.lo(), t1);
            let hi = rational::min(p.interval.hi(), t2);
            if lo >= hi {
                continue;
            }
            for (k, c) in p.coords.iter().enumerate() {
                match c {
                    PieceExpr::Poly(poly) => {
                        let anti = poly.antiderivative();
                        let v = anti.eval(&hi) - anti.eval(&lo);
                        approx[k] += rational::to_f64(&v);
                        if let Some(e) = exact[k].as_mut() {
                            *e += v;
                        }
                    }
                    other => {
                        let (a, b) = (rational::to_f64(&lo), rational::to_f64(&hi));
                        approx[k] += quadrature::adaptive_simpson(
                            |x| other.eval_f64(x),
                            a,
                            b,
                            quadrature::DEFAULT_TOL,
                        );
                        exact[k] = None;
                    }
                }
            }
        }
        Ok(Value::collect(exact, |i| approx[i]))
    }

    /// Upper bound on the norm of the derivative over the whole domain.
    /// Polynomial pieces only.
    pub fn lipschitz_bound(&self) -> Option<Rational> {
        let mut best = Rational::zero();
        for p in &self.pieces {
            let (lo, hi) = (p.interval.lo(), p.interval.hi());
            let mut sum = Rational::zero();
            for c in &p.coords {
                sum += c.as_poly()?.lipschitz_bound(lo, hi);
            }
            best = rational::max(&best, &sum);
        }
        Some(best)
    }

    /// Like [`PiecewiseFunc::lipschitz_bound`] but restricted to `[lo, hi]`.
    pub fn lipschitz_bound_on(&self, lo: &Rational, hi: &Rational) -> Option<Rational> {
        let mut best = Rational::zero();
        for p in &self.pieces {
            let a = rational::max(p.interval.lo(), lo);
            let b = rational::min(p.interval.hi(), hi);
            if a > b {
                continue;
            }
            let mut sum = Rational::zero();
            for c in &p.coords {
                sum += c.as_poly()?.lipschitz_bound(&a, &b);
            }
            best = rational::max(&best, &sum);
        }
        Some(best)
    }

    pub fn scale(&self, k: &Rational) -> PiecewiseFunc {
        self.map_coords(|c| match c {
            PieceExpr::Poly(p) => PieceExpr::Poly(p.scale(k)),
            PieceExpr::Closed(e) => PieceExpr::Closed(Expr::mul(Expr::Const(k.clone()), e.clone())),
            PieceExpr::Slope(e) => PieceExpr::Slope(Expr::mul(Expr::Const(k.clone()), e.clone())),
        })
    }

    /// `f + y` for a constant vector `y`.
    pub fn offset(&self, y: &QVector) -> PiecewiseFunc {
        self.map_coords_indexed(|k, c| match c {
            PieceExpr::Poly(p) => PieceExpr::Poly(p.add(&Poly::constant(y.0[k].clone()))),
            PieceExpr::Closed(e) => {
                PieceExpr::Closed(Expr::add(e.clone(), Expr::Const(y.0[k].clone())))
            }
            PieceExpr::Slope(e) => PieceExpr::Slope(Expr::add(
                e.clone(),
                Expr::mul(Expr::Const(y.0[k].clone()), Expr::Var),
            )),
        })
    }

    /// `u -> f(u + h)`, on the domain shifted by `-h`.
    pub fn translate(&self, h: &Rational) -> PiecewiseFunc {
        let pieces = self
            .pieces
            .iter()
            .map(|p| Piece {
                interval: Interval::new(
                    p.interval.lo() - h,
                    p.interval.hi() - h,
                    p.interval.lo_closed(),
                    p.interval.hi_closed(),
                )
                .expect("translation keeps order"),
                coords: p
                    .coords
                    .iter()
                    .map(|c| match c {
                        PieceExpr::Poly(q) => PieceExpr::Poly(q.shifted(&-h)),
                        PieceExpr::Closed(e) => PieceExpr::Closed(e.translate(h)),
                        PieceExpr::Slope(e) => PieceExpr::Slope(e.translate(h)),
                    })
                    .collect(),
            })
            .collect();
        PiecewiseFunc {
            dim: self.dim,
            pieces,
            continuous: self.continuous,
        }
    }

    /// One-sided limit at `x`, read off the adjacent piece.
    pub fn limit(&self, x: &Rational, side: Side) -> Result<Value> {
        Ok(eval_coords(&self.piece_toward(x, side)?.coords, x))
    }

    /// Single coordinate as a scalar function.
    pub fn coordinate(&self, k: usize) -> PiecewiseFunc {
        let pieces = self
            .pieces
            .iter()
            .map(|p| Piece {
                interval: p.interval.clone(),
                coords: vec![p.coords[k].clone()],
            })
            .collect();
        let mut f = PiecewiseFunc {
            dim: 1,
            pieces,
            continuous: true,
        };
        f.continuous = f.check_continuity();
        f
    }

    fn map_coords(&self, f: impl Fn(&PieceExpr) -> PieceExpr) -> PiecewiseFunc {
        self.map_coords_indexed(|_, c| f(c))
    }

    fn map_coords_indexed(&self, f: impl Fn(usize, &PieceExpr) -> PieceExpr) -> PiecewiseFunc {
        let pieces = self
            .pieces
            .iter()
            .map(|p| Piece {
                interval: p.interval.clone(),
                coords: p.coords.iter().enumerate().map(|(k, c)| f(k, c)).collect(),
            })
            .collect();
        let mut g = PiecewiseFunc {
            dim: self.dim,
            pieces,
            continuous: true,
        };
        g.continuous = g.check_continuity();
        g
    }
}

fn eval_coords(coords: &[PieceExpr], x: &Rational) -> Value {
    let exact: Vec<Option<Rational>> = coords.iter().map(|c| c.eval_exact(x)).collect();
    let xf = rational::to_f64(x);
    Value::collect(exact, |i| coords[i].eval_f64(xf))
}

fn split_kinks(interval: Interval, coords: Vec<PieceExpr>) -> Vec<Piece> {
    let mut kinks = Vec::new();
    for c in &coords {
        if let PieceExpr::Closed(e) = c {
            e.abs_kinks(&mut kinks);
        }
    }
    kinks.retain(|k| interval.lo() < k && k < interval.hi());
    kinks.sort();
    kinks.dedup();
    if kinks.is_empty() && coords.iter().all(|c| !matches!(c, PieceExpr::Closed(_))) {
        return vec![Piece { interval, coords }];
    }
    let mut cuts = vec![interval.lo().clone()];
    cuts.extend(kinks);
    cuts.push(interval.hi().clone());
    let n = cuts.len() - 1;
    (0..n)
        .map(|i| {
            let sub = Interval::new(
                cuts[i].clone(),
                cuts[i + 1].clone(),
                if i == 0 { interval.lo_closed() } else { true },
                if i == n - 1 {
                    interval.hi_closed()
                } else {
                    false
                },
            )
            .expect("cuts are sorted");
            let probe = (&cuts[i] + &cuts[i + 1]) / rational::int(2);
            let coords = coords
                .iter()
                .map(|c| match c {
                    PieceExpr::Closed(e) => PieceExpr::from_expr(e.resolve_abs(&probe)),
                    other => other.clone(),
                })
                .collect();
            Piece {
                interval: sub,
                coords,
            }
        })
        .collect()
}
