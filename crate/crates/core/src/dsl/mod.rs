//! A small language for piecewise functions.
//!
//! ```text
//! piecewise { [-1,0): -x; [0,2]: x^2 }
//! (: cos t, sin t :) on [0, 2]
//! abs(t - 1/3) + poly(1, 0, 2) on [-1, 1]
//! ```
//!
//! Literals stay exact: `1/3` is one token and `0.25` means `1/4`. There is
//! no division operator. A primitive applies to the next factor, so
//! `cos t^2` is `cos(t^2)`.

mod lexer;
mod parser;

use std::fmt::{self, Write};

use crate::error::{Error, Result};
use crate::expr::{Expr, Primitive};
use crate::piecewise::{PieceExpr, PiecewiseFunc};
use crate::poly::Poly;
use crate::prering::Interval;
use crate::rational::{self, Rational};

pub use parser::parse_func;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    X,
    T,
}

impl Var {
    pub fn name(self) -> &'static str {
        match self {
            Var::X => "x",
            Var::T => "t",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Node {
    Num(Rational),
    Var(Var),
    Neg(Box<Node>),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Pow(Box<Node>, u32),
    Call(Primitive, Box<Node>),
    /// `poly(c0, c1, ...)`, coefficients in increasing degree, kept as written.
    Poly(Vec<Rational>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Body {
    Scalar(Node),
    Tuple(Vec<Node>),
}

impl Body {
    pub fn coords(&self) -> &[Node] {
        match self {
            Body::Scalar(n) => std::slice::from_ref(n),
            Body::Tuple(ns) => ns,
        }
    }
}

/// How the spec was written, so printing gives back the same shape.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Form {
    Piecewise,
    On,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FuncSpec {
    pub form: Form,
    pub pieces: Vec<(Interval, Body)>,
}

impl FuncSpec {
    pub fn dim(&self) -> usize {
        self.pieces.first().map_or(0, |(_, b)| b.coords().len())
    }
}

// Binding strength used by the printer.
const SUM: u8 = 1;
const PRODUCT: u8 = 2;
const UNARY: u8 = 3;
const POWER: u8 = 4;
const ATOM: u8 = 5;

fn write_num(out: &mut String, q: &Rational, min: u8) {
    if q < &Rational::from_integer(0.into()) && min > UNARY {
        let _ = write!(out, "({})", rational::format(q));
    } else {
        out.push_str(&rational::format(q));
    }
}

fn write_node(out: &mut String, n: &Node, min: u8) {
    let (prec, open) = match n {
        Node::Add(..) | Node::Sub(..) => (SUM, true),
        Node::Mul(..) => (PRODUCT, true),
        Node::Neg(_) => (UNARY, true),
        Node::Pow(..) => (POWER, true),
        _ => (ATOM, false),
    };
    let paren = open && prec < min;
    if paren {
        out.push('(');
    }
    match n {
        Node::Num(q) => write_num(out, q, min),
        Node::Var(v) => out.push_str(v.name()),
        Node::Neg(a) => {
            out.push('-');
            write_node(out, a, UNARY);
        }
        Node::Add(a, b) | Node::Sub(a, b) => {
            write_node(out, a, SUM);
            out.push_str(if matches!(n, Node::Add(..)) {
                " + "
            } else {
                " - "
            });
            write_node(out, b, PRODUCT);
        }
        Node::Mul(a, b) => {
            write_node(out, a, PRODUCT);
            out.push_str(" * ");
            write_node(out, b, UNARY);
        }
        Node::Pow(a, e) => {
            write_node(out, a, ATOM);
            let _ = write!(out, "^{e}");
        }
        Node::Call(p, a) => {
            out.push_str(p.name());
            out.push('(');
            write_node(out, a, 0);
            out.push(')');
        }
        Node::Poly(cs) => {
            out.push_str("poly(");
            for (i, c) in cs.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                out.push_str(&rational::format(c));
            }
            out.push(')');
        }
    }
    if paren {
        out.push(')');
    }
}

fn write_body(out: &mut String, b: &Body) {
    match b {
        Body::Scalar(n) => write_node(out, n, 0),
        Body::Tuple(ns) => {
            out.push_str("(: ");
            for (i, n) in ns.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_node(out, n, 0);
            }
            out.push_str(" :)");
        }
    }
}

fn write_interval(out: &mut String, i: &Interval) {
    let _ = write!(
        out,
        "{}{}, {}{}",
        if i.lo_closed() { '[' } else { '(' },
        rational::format(i.lo()),
        rational::format(i.hi()),
        if i.hi_closed() { ']' } else { ')' }
    );
}

/// Canonical source text; parsing it gives back an equal spec.
pub fn print(spec: &FuncSpec) -> String {
    let mut out = String::new();
    match spec.form {
        Form::On => {
            let (i, b) = &spec.pieces[0];
            write_body(&mut out, b);
            out.push_str(" on ");
            write_interval(&mut out, i);
        }
        Form::Piecewise => {
            out.push_str("piecewise { ");
            for (k, (i, b)) in spec.pieces.iter().enumerate() {
                if k > 0 {
                    out.push_str("; ");
                }
                write_interval(&mut out, i);
                out.push_str(": ");
                write_body(&mut out, b);
            }
            out.push_str(" }");
        }
    }
    out
}

impl fmt::Display for FuncSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print(self))
    }
}

fn to_expr(n: &Node) -> Expr {
    let b = |n: &Node| Box::new(to_expr(n));
    match n {
        Node::Num(q) => Expr::Const(q.clone()),
        Node::Var(_) => Expr::Var,
        Node::Neg(a) => Expr::Neg(b(a)),
        Node::Add(x, y) => Expr::Add(b(x), b(y)),
        Node::Sub(x, y) => Expr::Sub(b(x), b(y)),
        Node::Mul(x, y) => Expr::Mul(b(x), b(y)),
        Node::Pow(a, e) => Expr::Pow(b(a), *e),
        Node::Call(p, a) => Expr::Call(*p, b(a)),
        Node::Poly(cs) => Expr::Poly(Poly::new(cs.clone())),
    }
}

fn collect_vars(n: &Node, out: &mut Vec<Var>) {
    match n {
        Node::Var(v) => {
            if !out.contains(v) {
                out.push(*v);
            }
        }
        Node::Neg(a) | Node::Pow(a, _) | Node::Call(_, a) => collect_vars(a, out),
        Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) => {
            collect_vars(a, out);
            collect_vars(b, out);
        }
        Node::Num(_) | Node::Poly(_) => {}
    }
}

/// Builds the function. Polynomial expressions become exact polynomial
/// pieces. Pieces must share one dimension and one variable name, must not
/// overlap, and must leave no hole in the domain.
pub fn eval_spec(spec: &FuncSpec) -> Result<PiecewiseFunc> {
    let dim = spec.dim();
    let mut vars = Vec::new();
    let mut raw = Vec::with_capacity(spec.pieces.len());
    for (k, (interval, body)) in spec.pieces.iter().enumerate() {
        let coords = body.coords();
        if coords.len() != dim {
            return Err(Error::Type(format!(
                "piece {} on {interval} has dimension {}, expected {dim}",
                k + 1,
                coords.len()
            )));
        }
        coords.iter().for_each(|n| collect_vars(n, &mut vars));
        if vars.len() > 1 {
            return Err(Error::Type(format!(
                "piece {} mixes the variables x and t",
                k + 1
            )));
        }
        raw.push((
            interval.clone(),
            coords
                .iter()
                .map(|n| PieceExpr::from_expr(to_expr(n)))
                .collect(),
        ));
    }
    PiecewiseFunc::new(raw)
}

/// `parse_func` then `eval_spec`.
pub fn parse_piecewise(src: &str) -> Result<PiecewiseFunc> {
    eval_spec(&parse_func(src)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    #[test]
    fn spec_examples() {
        let s = parse_func("piecewise { [-1,0): -x; [0,2]: x^2 }").unwrap();
        assert_eq!(s.pieces.len(), 2);
        let s = parse_func("(: cos t, sin t :) on [0, 2]").unwrap();
        assert_eq!(s.dim(), 2);
        assert!(matches!(
            parse_func("piecewise { [0,1]: }"),
            Err(Error::Syntax {
                line: 1,
                col: 20,
                ..
            })
        ));
    }

    #[test]
    fn exact_literals() {
        let s = parse_func("0.25 + 1/3 on [0,1]").unwrap();
        let f = eval_spec(&s).unwrap();
        assert_eq!(f.eval_exact(&int(0)).unwrap().0[0], frac(7, 12));
        assert!(matches!(
            parse_func("x / 2 on [0,1]"),
            Err(Error::Syntax { col: 3, .. })
        ));
    }

    #[test]
    fn evaluation() {
        let f = parse_piecewise("piecewise { [-1,0): -x; [0,1]: x }").unwrap();
        assert_eq!(f.breakpoints(), vec![int(0)]);
        assert!(f.is_continuous() && f.is_polynomial());
        let f = parse_piecewise("abs(t) on [-1,1]").unwrap();
        assert_eq!(f.breakpoints(), vec![int(0)]);
        assert!(matches!(
            parse_piecewise("piecewise { [0,2]: x; [1,3]: x }"),
            Err(Error::Type(_))
        ));
        assert!(matches!(
            parse_piecewise("piecewise { [0,1): x; (1,3]: x }"),
            Err(Error::DomainGap(_))
        ));
        assert_eq!(
            parse_piecewise("(: cos t, sin t :) on [0, 2]")
                .unwrap()
                .dim(),
            2
        );
        assert!(matches!(
            parse_piecewise("x + t on [0,1]"),
            Err(Error::Type(_))
        ));
    }

    #[test]
    fn printing_round_trips() {
        for src in [
            "piecewise { [-1,0): -x; [0,2]: x^2 }",
            "(: cos t, sin t :) on [0, 2]",
            "-2^2 - -3 * (x + 1)^3 + poly(1, 0, -1/2) on (0, 1]",
            "cos t^2 * exp(-t) - abs(t - 1/3) on [-1/2, 7]",
            "(-3)^2 - (x - 1) - x * (x - -1) on [0, 1]",
            "cos(t)^2 + sin t^2 - --t on [0, 1]",
        ] {
            let a = parse_func(src).unwrap();
            let b = parse_func(&print(&a)).unwrap();
            assert_eq!(a, b, "{src} -> {}", print(&a));
        }
    }
}
