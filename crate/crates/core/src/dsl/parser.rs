use num_traits::{Signed, ToPrimitive};

use super::lexer::{syntax, tokenize, Tok, Token};
use super::{Body, Form, FuncSpec, Node, Var};
use crate::error::{Error, Result};
use crate::expr::Primitive;
use crate::prering::Interval;
use crate::rational::Rational;

/// Parses a function spec. Errors carry the line and column of the
/// offending token and what was expected there.
pub fn parse_func(src: &str) -> Result<FuncSpec> {
    let mut p = Parser {
        toks: tokenize(src)?,
        pos: 0,
    };
    let spec = p.spec()?;
    p.expect(Tok::Eof, "end of input")?;
    Ok(spec)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &str) -> Error {
        let t = &self.toks[self.pos];
        syntax(
            t.line,
            t.col,
            format!("{expected}, found {}", t.tok.describe()),
        )
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if self.eat(&tok) {
            Ok(())
        } else {
            Err(self.error(what))
        }
    }

    fn at_ident(&self, name: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == name)
    }

    fn spec(&mut self) -> Result<FuncSpec> {
        if self.at_ident("piecewise") {
            self.bump();
            self.expect(Tok::LBrace, "'{'")?;
            let mut pieces = Vec::new();
            loop {
                if self.peek() == &Tok::RBrace && !pieces.is_empty() {
                    break;
                }
                let i = self.interval()?;
                self.expect(Tok::Colon, "':'")?;
                pieces.push((i, self.body()?));
                if !self.eat(&Tok::Semi) {
                    break;
                }
            }
            self.expect(Tok::RBrace, "';' or '}'")?;
            return Ok(FuncSpec {
                form: Form::Piecewise,
                pieces,
            });
        }
        let body = self.body()?;
        if !self.at_ident("on") {
            return Err(self.error("'on' and a domain interval"));
        }
        self.bump();
        let i = self.interval()?;
        Ok(FuncSpec {
            form: Form::On,
            pieces: vec![(i, body)],
        })
    }

    fn body(&mut self) -> Result<Body> {
        if self.eat(&Tok::TupleOpen) {
            let mut coords = vec![self.expr()?];
            while self.eat(&Tok::Comma) {
                coords.push(self.expr()?);
            }
            self.expect(Tok::TupleClose, "',' or ':)'")?;
            return Ok(Body::Tuple(coords));
        }
        Ok(Body::Scalar(self.expr()?))
    }

    fn signed_literal(&mut self) -> Result<Rational> {
        let neg = self.eat(&Tok::Minus);
        match self.peek().clone() {
            Tok::Num(q) => {
                self.bump();
                Ok(if neg { -q } else { q })
            }
            _ => Err(self.error("a rational literal")),
        }
    }

    fn interval(&mut self) -> Result<Interval> {
        let start = self.toks[self.pos].clone();
        let lo_closed = match self.peek() {
            Tok::LBracket => true,
            Tok::LParen => false,
            _ => return Err(self.error("an interval such as [0,1)")),
        };
        self.bump();
        let lo = self.signed_literal()?;
        self.expect(Tok::Comma, "','")?;
        let hi = self.signed_literal()?;
        let hi_closed = match self.peek() {
            Tok::RBracket => true,
            Tok::RParen => false,
            _ => return Err(self.error("']' or ')'")),
        };
        self.bump();
        Interval::new(lo, hi, lo_closed, hi_closed).map_err(|_| {
            syntax(
                start.line,
                start.col,
                "an interval with lower endpoint at most the upper one",
            )
        })
    }

    fn expr(&mut self) -> Result<Node> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(&Tok::Plus) {
                lhs = Node::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(&Tok::Minus) {
                lhs = Node::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Node> {
        let mut lhs = self.unary()?;
        while self.eat(&Tok::Star) {
            lhs = Node::Mul(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Node> {
        if self.eat(&Tok::Minus) {
            // A negated literal is itself a literal.
            return Ok(match self.unary()? {
                Node::Num(q) => Node::Num(-q),
                n => Node::Neg(Box::new(n)),
            });
        }
        self.power()
    }

    fn power(&mut self) -> Result<Node> {
        let base = self.atom()?;
        if !self.eat(&Tok::Caret) {
            return Ok(base);
        }
        match self.peek().clone() {
            Tok::Num(q) if q.is_integer() && !q.is_negative() => {
                let e = q
                    .to_integer()
                    .to_u32()
                    .ok_or_else(|| self.error("a small exponent"))?;
                self.bump();
                Ok(Node::Pow(Box::new(base), e))
            }
            _ => Err(self.error("a nonnegative integer exponent")),
        }
    }

    fn atom(&mut self) -> Result<Node> {
        match self.peek().clone() {
            Tok::Num(q) => {
                self.bump();
                Ok(Node::Num(q))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(e)
            }
            Tok::Ident(name) => match name.as_str() {
                "x" => {
                    self.bump();
                    Ok(Node::Var(Var::X))
                }
                "t" => {
                    self.bump();
                    Ok(Node::Var(Var::T))
                }
                "poly" => {
                    self.bump();
                    self.expect(Tok::LParen, "'('")?;
                    let mut cs = vec![self.signed_literal()?];
                    while self.eat(&Tok::Comma) {
                        cs.push(self.signed_literal()?);
                    }
                    self.expect(Tok::RParen, "',' or ')'")?;
                    Ok(Node::Poly(cs))
                }
                other => match Primitive::from_name(other) {
                    Some(p) => {
                        self.bump();
                        // `cos(t)^2` squares the call; `cos t^2` does not.
                        let arg = if self.peek() == &Tok::LParen {
                            self.atom()?
                        } else {
                            self.power()?
                        };
                        Ok(Node::Call(p, Box::new(arg)))
                    }
                    None => {
                        Err(self.error("a variable (x or t), a number, a function name or '('"))
                    }
                },
            },
            _ => Err(self.error("an expression")),
        }
    }
}
