use crate::error::{Error, Result};
use crate::rational::Rational;
use num_bigint::BigInt;
use num_traits::{One, Pow};

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Tok {
    Num(Rational),
    Ident(String),
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    LParen,
    RParen,
    TupleOpen,
    TupleClose,
    Comma,
    Semi,
    Colon,
    Plus,
    Minus,
    Star,
    Caret,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Num(q) => format!("number {q}"),
            Tok::Ident(s) => format!("'{s}'"),
            Tok::Eof => "end of input".into(),
            t => format!("'{}'", t.symbol()),
        }
    }

    fn symbol(&self) -> &'static str {
        match self {
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::TupleOpen => "(:",
            Tok::TupleClose => ":)",
            Tok::Comma => ",",
            Tok::Semi => ";",
            Tok::Colon => ":",
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Star => "*",
            Tok::Caret => "^",
            _ => "",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

pub(crate) fn syntax(line: usize, col: usize, expected: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        col,
        expected: expected.into(),
    }
}

/// Splits the source into tokens. A `/` is only legal inside a rational
/// literal such as `3/4`; decimals become exact rationals.
pub(crate) fn tokenize(src: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let start = (line, col);
        let next = chars.get(i + 1).copied();
        let (tok, len) = match c {
            '(' if next == Some(':') => (Tok::TupleOpen, 2),
            ':' if next == Some(')') => (Tok::TupleClose, 2),
            '{' => (Tok::LBrace, 1),
            '}' => (Tok::RBrace, 1),
            '[' => (Tok::LBracket, 1),
            ']' => (Tok::RBracket, 1),
            '(' => (Tok::LParen, 1),
            ')' => (Tok::RParen, 1),
            ',' => (Tok::Comma, 1),
            ';' => (Tok::Semi, 1),
            ':' => (Tok::Colon, 1),
            '+' => (Tok::Plus, 1),
            '-' => (Tok::Minus, 1),
            '*' => (Tok::Star, 1),
            '^' => (Tok::Caret, 1),
            '0'..='9' => number(&chars, i, start)?,
            c if c.is_ascii_alphabetic() || c == '_' => {
                let len = chars[i..]
                    .iter()
                    .take_while(|c| c.is_ascii_alphanumeric() || **c == '_')
                    .count();
                (Tok::Ident(chars[i..i + len].iter().collect()), len)
            }
            '/' => {
                return Err(syntax(
                    line,
                    col,
                    "a digit before '/' (division is only allowed in rational literals)",
                ))
            }
            _ => return Err(syntax(line, col, "a number, name, operator or bracket")),
        };
        out.push(Token {
            tok,
            line: start.0,
            col: start.1,
        });
        i += len;
        col += len;
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}

fn digits(chars: &[char], from: usize) -> usize {
    chars[from..]
        .iter()
        .take_while(|c| c.is_ascii_digit())
        .count()
}

fn number(chars: &[char], i: usize, (line, col): (usize, usize)) -> Result<(Tok, usize)> {
    let int_len = digits(chars, i);
    let int: BigInt = chars[i..i + int_len]
        .iter()
        .collect::<String>()
        .parse()
        .expect("digits");
    let mut len = int_len;
    match chars.get(i + len) {
        Some('.') => {
            let frac_len = digits(chars, i + len + 1);
            if frac_len == 0 {
                return Err(syntax(line, col + len + 1, "digits after '.'"));
            }
            let frac: BigInt = chars[i + len + 1..i + len + 1 + frac_len]
                .iter()
                .collect::<String>()
                .parse()
                .expect("digits");
            let scale = BigInt::from(10).pow(frac_len as u32);
            len += 1 + frac_len;
            Ok((Tok::Num(Rational::new(int * &scale + frac, scale)), len))
        }
        Some('/') => {
            let den_len = digits(chars, i + len + 1);
            if den_len == 0 {
                return Err(syntax(line, col + len + 1, "a denominator after '/'"));
            }
            let den: BigInt = chars[i + len + 1..i + len + 1 + den_len]
                .iter()
                .collect::<String>()
                .parse()
                .expect("digits");
            if den == BigInt::from(0) {
                return Err(syntax(line, col + len + 1, "a nonzero denominator"));
            }
            len += 1 + den_len;
            Ok((Tok::Num(Rational::new(int, den)), len))
        }
        _ => Ok((Tok::Num(Rational::new(int, BigInt::one())), len)),
    }
}
