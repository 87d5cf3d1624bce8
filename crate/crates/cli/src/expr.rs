//! Expressions for demo functions and domains: a Pratt parser over
//! literals (`1.5`, `i`, `pi`, `e`), variables (`x`, `y`, `z`, `|z|`,
//! `theta`), the functions `abs conj exp log re im`, unary minus and the
//! binary operators `+ - * /` and `^` with an integer exponent.
//!
//! Binding, tightest first: `^` (right associative), unary `-`, `* /`,
//! `+ -`. So `-z^2` is `-(z^2)`.

use std::fmt;

use banach_reduce::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    X,
    Y,
    Z,
    AbsZ,
    Theta,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Abs,
    Conj,
    Exp,
    Log,
    Re,
    Im,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    I,
    Pi,
    E,
    Var(Var),
    Neg(Box<Expr>),
    Call(Func, Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("syntax error at byte {offset}: expected {}", expected.join(" or "))]
pub struct SyntaxError {
    pub offset: usize,
    pub expected: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("cannot evaluate: {0}")]
pub struct EvalError(pub String);

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    AbsZ,
    Op(char),
    LParen,
    RParen,
    End,
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, SyntaxError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut k = 0;
    while k < bytes.len() {
        let ch = bytes[k];
        if ch.is_ascii_whitespace() {
            k += 1;
            continue;
        }
        let start = k;
        if ch.is_ascii_digit() || ch == b'.' {
            while k < bytes.len() && (bytes[k].is_ascii_digit() || bytes[k] == b'.') {
                k += 1;
            }
            if k < bytes.len() && (bytes[k] == b'e' || bytes[k] == b'E') {
                let mut j = k + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    k = j;
                }
            }
            let value = src[start..k].parse::<f64>().map_err(|_| SyntaxError {
                offset: start,
                expected: vec!["number".into()],
            })?;
            out.push((Tok::Num(value), start));
        } else if ch.is_ascii_alphabetic() {
            while k < bytes.len() && bytes[k].is_ascii_alphanumeric() {
                k += 1;
            }
            out.push((Tok::Ident(src[start..k].to_string()), start));
        } else if src[k..].starts_with("|z|") {
            k += 3;
            out.push((Tok::AbsZ, start));
        } else {
            let tok = match ch {
                b'+' | b'-' | b'*' | b'/' | b'^' => Tok::Op(ch as char),
                b'(' => Tok::LParen,
                b')' => Tok::RParen,
                _ => {
                    return Err(SyntaxError {
                        offset: start,
                        expected: vec!["token".into()],
                    })
                }
            };
            k += 1;
            out.push((tok, start));
        }
    }
    out.push((Tok::End, src.len()));
    Ok(out)
}

const PREFIX_BP: u8 = 5;

fn infix_bp(op: char) -> Option<(u8, u8, BinOp)> {
    Some(match op {
        '+' => (1, 2, BinOp::Add),
        '-' => (1, 2, BinOp::Sub),
        '*' => (3, 4, BinOp::Mul),
        '/' => (3, 4, BinOp::Div),
        '^' => (8, 7, BinOp::Pow),
        _ => return None,
    })
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

fn operand_expected() -> Vec<String> {
    ["number", "variable", "function", "\"(\"", "\"-\""]
        .iter()
        .map(|s| s.to_string())
        .collect()
}

impl Parser {
    fn peek(&self) -> &(Tok, usize) {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect_rparen(&mut self) -> Result<(), SyntaxError> {
        match self.bump() {
            (Tok::RParen, _) => Ok(()),
            (_, offset) => Err(SyntaxError {
                offset,
                expected: vec!["\")\"".into(), "operator".into()],
            }),
        }
    }

    fn expr(&mut self, min_bp: u8) -> Result<Expr, SyntaxError> {
        let (tok, offset) = self.bump();
        let mut lhs = match tok {
            Tok::Num(v) => Expr::Num(v),
            Tok::AbsZ => Expr::Var(Var::AbsZ),
            Tok::LParen => {
                let e = self.expr(0)?;
                self.expect_rparen()?;
                e
            }
            Tok::Op('-') => Expr::Neg(Box::new(self.expr(PREFIX_BP)?)),
            Tok::Ident(name) => match name.as_str() {
                "i" => Expr::I,
                "pi" => Expr::Pi,
                "e" => Expr::E,
                "x" => Expr::Var(Var::X),
                "y" => Expr::Var(Var::Y),
                "z" => Expr::Var(Var::Z),
                "theta" => Expr::Var(Var::Theta),
                _ => {
                    let func = match name.as_str() {
                        "abs" => Func::Abs,
                        "conj" => Func::Conj,
                        "exp" => Func::Exp,
                        "log" => Func::Log,
                        "re" => Func::Re,
                        "im" => Func::Im,
                        _ => {
                            return Err(SyntaxError {
                                offset,
                                expected: operand_expected(),
                            })
                        }
                    };
                    match self.bump() {
                        (Tok::LParen, _) => {}
                        (_, offset) => {
                            return Err(SyntaxError {
                                offset,
                                expected: vec!["\"(\"".into()],
                            })
                        }
                    }
                    let arg = self.expr(0)?;
                    self.expect_rparen()?;
                    Expr::Call(func, Box::new(arg))
                }
            },
            _ => {
                return Err(SyntaxError {
                    offset,
                    expected: operand_expected(),
                })
            }
        };
        loop {
            let (tok, offset) = self.peek().clone();
            let op = match tok {
                Tok::Op(op) => op,
                Tok::End | Tok::RParen => break,
                _ => {
                    return Err(SyntaxError {
                        offset,
                        expected: vec!["operator".into()],
                    })
                }
            };
            let (l_bp, r_bp, bin) = infix_bp(op).expect("lexer emits known operators");
            if l_bp < min_bp {
                break;
            }
            self.bump();
            let exp_offset = self.peek().1;
            let rhs = self.expr(r_bp)?;
            if bin == BinOp::Pow && integer_value(&rhs).is_none() {
                return Err(SyntaxError {
                    offset: exp_offset,
                    expected: vec!["integer exponent".into()],
                });
            }
            lhs = Expr::Binary(bin, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }
}

/// The value of a constant integer expression such as `3`, `-2` or `2^3`.
fn integer_value(e: &Expr) -> Option<i64> {
    match e {
        Expr::Num(v) if v.fract() == 0.0 && v.abs() < 1e9 => Some(*v as i64),
        Expr::Neg(inner) => integer_value(inner).map(|v| -v),
        Expr::Binary(op, a, b) => {
            let (a, b) = (integer_value(a)?, integer_value(b)?);
            match op {
                BinOp::Add => a.checked_add(b),
                BinOp::Sub => a.checked_sub(b),
                BinOp::Mul => a.checked_mul(b),
                BinOp::Pow if (0..=62).contains(&b) => a.checked_pow(b as u32),
                _ => None,
            }
            .filter(|v| v.abs() < 1_000_000_000)
        }
        _ => None,
    }
}

pub fn parse_expr(src: &str) -> Result<Expr, SyntaxError> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr(0)?;
    match p.peek() {
        (Tok::End, _) => Ok(e),
        (_, offset) => Err(SyntaxError {
            offset: *offset,
            expected: vec!["operator".into(), "end of input".into()],
        }),
    }
}

/// Coordinates of the point an expression is evaluated at.
#[derive(Debug, Clone, Copy)]
pub struct Point {
    pub x: f64,
    pub y: f64,
    pub theta: f64,
}

impl Point {
    pub fn planar(x: f64, y: f64) -> Self {
        Point {
            x,
            y,
            theta: y.atan2(x),
        }
    }
}

impl Expr {
    pub fn eval(&self, p: &Point) -> Result<Scalar, EvalError> {
        let v = match self {
            Expr::Num(v) => Scalar::new(*v, 0.0),
            Expr::I => Scalar::new(0.0, 1.0),
            Expr::Pi => Scalar::new(std::f64::consts::PI, 0.0),
            Expr::E => Scalar::new(std::f64::consts::E, 0.0),
            Expr::Var(v) => match v {
                Var::X => Scalar::new(p.x, 0.0),
                Var::Y => Scalar::new(p.y, 0.0),
                Var::Z => Scalar::new(p.x, p.y),
                Var::AbsZ => Scalar::new(p.x.hypot(p.y), 0.0),
                Var::Theta => Scalar::new(p.theta, 0.0),
            },
            Expr::Neg(a) => -a.eval(p)?,
            Expr::Call(f, a) => {
                let a = a.eval(p)?;
                match f {
                    Func::Abs => Scalar::new(a.norm(), 0.0),
                    Func::Conj => a.conj(),
                    Func::Exp => a.exp(),
                    Func::Log => {
                        if a.norm() == 0.0 {
                            return Err(EvalError("log(0)".into()));
                        }
                        a.ln()
                    }
                    Func::Re => Scalar::new(a.re, 0.0),
                    Func::Im => Scalar::new(a.im, 0.0),
                }
            }
            Expr::Binary(op, a, b) => {
                let a = a.eval(p)?;
                match op {
                    BinOp::Pow => {
                        let k = integer_value(b)
                            .ok_or_else(|| EvalError("non-integer exponent".into()))?;
                        if k < 0 && a.norm() == 0.0 {
                            return Err(EvalError("negative power of 0".into()));
                        }
                        a.powi(k as i32)
                    }
                    _ => {
                        let b = b.eval(p)?;
                        match op {
                            BinOp::Add => a + b,
                            BinOp::Sub => a - b,
                            BinOp::Mul => a * b,
                            BinOp::Div => {
                                if b.norm() == 0.0 {
                                    return Err(EvalError("division by 0".into()));
                                }
                                a / b
                            }
                            BinOp::Pow => unreachable!(),
                        }
                    }
                }
            }
        };
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            Err(EvalError(format!("non-finite value at ({}, {})", p.x, p.y)))
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => write!(f, "{v}"),
            Expr::I => f.write_str("i"),
            Expr::Pi => f.write_str("pi"),
            Expr::E => f.write_str("e"),
            Expr::Var(v) => f.write_str(match v {
                Var::X => "x",
                Var::Y => "y",
                Var::Z => "z",
                Var::AbsZ => "|z|",
                Var::Theta => "theta",
            }),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Call(func, a) => {
                let name = match func {
                    Func::Abs => "abs",
                    Func::Conj => "conj",
                    Func::Exp => "exp",
                    Func::Log => "log",
                    Func::Re => "re",
                    Func::Im => "im",
                };
                write!(f, "{name}({a})")
            }
            Expr::Binary(op, a, b) => {
                let sym = match op {
                    BinOp::Add => "+",
                    BinOp::Sub => "-",
                    BinOp::Mul => "*",
                    BinOp::Div => "/",
                    BinOp::Pow => "^",
                };
                write!(f, "({a} {sym} {b})")
            }
        }
    }
}
