//! Expression trees for closed-form pieces of a function.
//!
//! Evaluation is generic over [`Scalar`]: exact rationals (transcendental
//! primitives only resolve at argument zero) or binary64 floats. One-sided
//! derivatives use forward-mode dual numbers, so `abs` gets the correct
//! one-sided slope at its kink.

use num_traits::{One, Signed, Zero};

use crate::poly::Poly;
use crate::rational::{self, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Primitive {
    Sin,
    Cos,
    Exp,
    Abs,
}

impl Primitive {
    pub fn name(self) -> &'static str {
        match self {
            Primitive::Sin => "sin",
            Primitive::Cos => "cos",
            Primitive::Exp => "exp",
            Primitive::Abs => "abs",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "sin" => Primitive::Sin,
            "cos" => Primitive::Cos,
            "exp" => Primitive::Exp,
            "abs" => Primitive::Abs,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Const(Rational),
    Var,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Call(Primitive, Box<Expr>),
    Poly(Poly),
}

/// Which side a one-sided derivative looks at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Right,
    Left,
}

pub trait Scalar: Clone {
    fn from_rational(q: &Rational) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn abs(&self) -> Self;
    /// -1, 0 or 1.
    fn sign(&self) -> i8;
    fn sin(&self) -> Option<Self>;
    fn cos(&self) -> Option<Self>;
    fn exp(&self) -> Option<Self>;
    fn from_int(n: i64) -> Self {
        Self::from_rational(&rational::int(n))
    }
}

impl Scalar for Rational {
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn abs(&self) -> Self {
        Signed::abs(self)
    }
    fn sign(&self) -> i8 {
        if self.is_positive() {
            1
        } else if self.is_negative() {
            -1
        } else {
            0
        }
    }
    fn sin(&self) -> Option<Self> {
        self.is_zero().then(Rational::zero)
    }
    fn cos(&self) -> Option<Self> {
        self.is_zero().then(Rational::one)
    }
    fn exp(&self) -> Option<Self> {
        self.is_zero().then(Rational::one)
    }
}

impl Scalar for f64 {
    fn from_rational(q: &Rational) -> Self {
        rational::to_f64(q)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn sign(&self) -> i8 {
        if *self > 0.0 {
            1
        } else if *self < 0.0 {
            -1
        } else {
            0
        }
    }
    fn sin(&self) -> Option<Self> {
        Some(f64::sin(*self))
    }
    fn cos(&self) -> Option<Self> {
        Some(f64::cos(*self))
    }
    fn exp(&self) -> Option<Self> {
        Some(f64::exp(*self))
    }
}

fn powi<S: Scalar>(base: &S, e: u32) -> S {
    let mut acc = S::from_int(1);
    for _ in 0..e {
        acc = acc.mul(base);
    }
    acc
}

impl Expr {
    pub fn constant(q: Rational) -> Self {
        Expr::Const(q)
    }

    pub fn call(p: Primitive, arg: Expr) -> Self {
        Expr::Call(p, Box::new(arg))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(a: Expr, b: Expr) -> Self {
        Expr::Add(Box::new(a), Box::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn sub(a: Expr, b: Expr) -> Self {
        Expr::Sub(Box::new(a), Box::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(a: Expr, b: Expr) -> Self {
        Expr::Mul(Box::new(a), Box::new(b))
    }

    pub fn pow(a: Expr, e: u32) -> Self {
        Expr::Pow(Box::new(a), e)
    }

    pub fn eval<S: Scalar>(&self, x: &S) -> Option<S> {
        Some(match self {
            Expr::Const(q) => S::from_rational(q),
            Expr::Var => x.clone(),
            Expr::Neg(a) => a.eval(x)?.neg(),
            Expr::Add(a, b) => a.eval(x)?.add(&b.eval(x)?),
            Expr::Sub(a, b) => a.eval(x)?.sub(&b.eval(x)?),
            Expr::Mul(a, b) => a.eval(x)?.mul(&b.eval(x)?),
            Expr::Pow(a, e) => powi(&a.eval(x)?, *e),
            Expr::Call(p, a) => {
                let u = a.eval(x)?;
                match p {
                    Primitive::Sin => u.sin()?,
                    Primitive::Cos => u.cos()?,
                    Primitive::Exp => u.exp()?,
                    Primitive::Abs => u.abs(),
                }
            }
            Expr::Poly(p) => {
                let mut acc = S::from_int(0);
                for c in p.coeffs().iter().rev() {
                    acc = acc.mul(x).add(&S::from_rational(c));
                }
                acc
            }
        })
    }

    /// Value and one-sided derivative at `x`.
    pub fn dual<S: Scalar>(&self, x: &S, side: Side) -> Option<(S, S)> {
        Some(match self {
            Expr::Const(q) => (S::from_rational(q), S::from_int(0)),
            Expr::Var => (x.clone(), S::from_int(1)),
            Expr::Neg(a) => {
                let (u, du) = a.dual(x, side)?;
                (u.neg(), du.neg())
            }
            Expr::Add(a, b) => {
                let (u, du) = a.dual(x, side)?;
                let (v, dv) = b.dual(x, side)?;
                (u.add(&v), du.add(&dv))
            }
            Expr::Sub(a, b) => {
                let (u, du) = a.dual(x, side)?;
                let (v, dv) = b.dual(x, side)?;
                (u.sub(&v), du.sub(&dv))
            }
            Expr::Mul(a, b) => {
                let (u, du) = a.dual(x, side)?;
                let (v, dv) = b.dual(x, side)?;
                (u.mul(&v), du.mul(&v).add(&u.mul(&dv)))
            }
            Expr::Pow(a, e) => {
                let (u, du) = a.dual(x, side)?;
                if *e == 0 {
                    (S::from_int(1), S::from_int(0))
                } else {
                    let prev = powi(&u, e - 1);
                    (prev.mul(&u), S::from_int(*e as i64).mul(&prev).mul(&du))
                }
            }
            Expr::Call(p, a) => {
                let (u, du) = a.dual(x, side)?;
                match p {
                    Primitive::Sin => (u.sin()?, u.cos()?.mul(&du)),
                    Primitive::Cos => (u.cos()?, u.sin()?.neg().mul(&du)),
                    Primitive::Exp => {
                        let e = u.exp()?;
                        let d = e.mul(&du);
                        (e, d)
                    }
                    Primitive::Abs => {
                        let d = match (u.sign(), side) {
                            (1, _) => du,
                            (-1, _) => du.neg(),
                            (_, Side::Right) => du.abs(),
                            (_, Side::Left) => du.abs().neg(),
                        };
                        (u.abs(), d)
                    }
                }
            }
            Expr::Poly(p) => {
                let q = Expr::Poly(p.derivative());
                (self.eval(x)?, q.eval(x)?)
            }
        })
    }

    /// The expression as a polynomial, when it is one.
    pub fn to_poly(&self) -> Option<Poly> {
        Some(match self {
            Expr::Const(q) => Poly::constant(q.clone()),
            Expr::Var => Poly::x(),
            Expr::Neg(a) => a.to_poly()?.scale(&-Rational::one()),
            Expr::Add(a, b) => a.to_poly()?.add(&b.to_poly()?),
            Expr::Sub(a, b) => a.to_poly()?.sub(&b.to_poly()?),
            Expr::Mul(a, b) => a.to_poly()?.mul(&b.to_poly()?),
            Expr::Pow(a, e) => a.to_poly()?.pow(*e),
            Expr::Poly(p) => p.clone(),
            Expr::Call(Primitive::Abs, a) => {
                let p = a.to_poly()?;
                if p.degree() == 0 {
                    Poly::constant(Signed::abs(&p.eval(&Rational::zero())))
                } else {
                    return None;
                }
            }
            Expr::Call(..) => return None,
        })
    }

    /// Roots of affine `abs` arguments; the expression is polynomial on
    /// every gap between them when no other primitive occurs.
    /// `e(x + h)`.
    pub fn translate(&self, h: &Rational) -> Expr {
        let b = |e: &Expr| Box::new(e.translate(h));
        match self {
            Expr::Const(_) => self.clone(),
            Expr::Var => Expr::add(Expr::Var, Expr::Const(h.clone())),
            Expr::Neg(a) => Expr::Neg(b(a)),
            Expr::Add(x, y) => Expr::Add(b(x), b(y)),
            Expr::Sub(x, y) => Expr::Sub(b(x), b(y)),
            Expr::Mul(x, y) => Expr::Mul(b(x), b(y)),
            Expr::Pow(x, n) => Expr::Pow(b(x), *n),
            Expr::Call(f, x) => Expr::Call(*f, b(x)),
            Expr::Poly(p) => Expr::Poly(p.shifted(&-h)),
        }
    }

    pub fn abs_kinks(&self, out: &mut Vec<Rational>) {
        match self {
            Expr::Const(_) | Expr::Var | Expr::Poly(_) => {}
            Expr::Neg(a) | Expr::Pow(a, _) => a.abs_kinks(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
                a.abs_kinks(out);
                b.abs_kinks(out);
            }
            Expr::Call(p, a) => {
                a.abs_kinks(out);
                if *p == Primitive::Abs {
                    if let Some(poly) = a.to_poly() {
                        if poly.degree() == 1 {
                            let c = poly.coeffs();
                            out.push(-&c[0] / &c[1]);
                        }
                    }
                }
            }
        }
    }

    /// Replaces each `abs(u)` whose argument is polynomial by `±u`, with
    /// the sign taken at `probe`.
    pub fn resolve_abs(&self, probe: &Rational) -> Expr {
        let rec = |e: &Expr| Box::new(e.resolve_abs(probe));
        match self {
            Expr::Const(_) | Expr::Var | Expr::Poly(_) => self.clone(),
            Expr::Neg(a) => Expr::Neg(rec(a)),
            Expr::Pow(a, e) => Expr::Pow(rec(a), *e),
            Expr::Add(a, b) => Expr::Add(rec(a), rec(b)),
            Expr::Sub(a, b) => Expr::Sub(rec(a), rec(b)),
            Expr::Mul(a, b) => Expr::Mul(rec(a), rec(b)),
            Expr::Call(Primitive::Abs, a) => {
                let inner = a.resolve_abs(probe);
                match inner.to_poly() {
                    Some(p) if p.eval(probe).is_negative() => Expr::Neg(Box::new(inner)),
                    Some(_) => inner,
                    None => Expr::call(Primitive::Abs, inner),
                }
            }
            Expr::Call(p, a) => Expr::Call(*p, rec(a)),
        }
    }

    pub fn is_polynomial(&self) -> bool {
        self.to_poly().is_some()
    }
}
