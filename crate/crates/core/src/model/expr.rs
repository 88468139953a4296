//! Arithmetic expressions in one variable (`x` or `t`).
//!
//! Grammar: numbers, the variable, `pi` (or `π`), `e`, `+ - * / ^`, parentheses,
//! implicit multiplication (`4pi`, `3x`), and the functions `exp`, `sin`, `cos`.

use super::exppoly::ExpPoly;
use crate::error::{Error, Result};
use num_complex::Complex64 as C;
use std::f64::consts::PI;

const MAX_DEPTH: usize = 64;
const MAX_LEN: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Exp,
    Sin,
    Cos,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(f64),
    Var,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
}

fn lex(s: &str) -> Result<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = s.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].1.is_ascii_digit() || chars[i].1 == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i].1 == 'e' || chars[i].1 == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j].1 == '+' || chars[j].1 == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].1.is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].1.is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let end = if i < chars.len() { chars[i].0 } else { s.len() };
            let text = &s[chars[start].0..end];
            let v: f64 = text.parse().map_err(|_| Error::Parse { pos, msg: format!("bad number '{text}'") })?;
            out.push((pos, Tok::Num(v)));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].1.is_alphanumeric() || chars[i].1 == '_') {
                i += 1;
            }
            let end = if i < chars.len() { chars[i].0 } else { s.len() };
            out.push((pos, Tok::Ident(s[chars[start].0..end].to_string())));
        } else {
            let tok = match c {
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '+' | '-' | '/' | '^' => Tok::Op(c),
                '*' => {
                    if i + 1 < chars.len() && chars[i + 1].1 == '*' {
                        i += 1;
                        Tok::Op('^')
                    } else {
                        Tok::Op('*')
                    }
                }
                _ => return Err(Error::Parse { pos, msg: format!("unexpected character '{c}'") }),
            };
            out.push((pos, tok));
            i += 1;
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    i: usize,
    depth: usize,
    var: Option<char>,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|t| &t.1)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.i).map(|t| t.0).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Parse { pos: self.pos(), msg: msg.to_string() })
    }

    fn enter(&mut self) -> Result<()> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return self.err("expression nested too deeply");
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<Expr> {
        self.enter()?;
        let mut lhs = self.term()?;
        while let Some(Tok::Op(c @ ('+' | '-'))) = self.peek() {
            let c = *c;
            self.i += 1;
            let rhs = self.term()?;
            lhs = if c == '+' { Expr::Add(lhs.into(), rhs.into()) } else { Expr::Sub(lhs.into(), rhs.into()) };
        }
        self.depth -= 1;
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Op(c @ ('*' | '/'))) => {
                    let c = *c;
                    self.i += 1;
                    let rhs = self.unary()?;
                    lhs = if c == '*' { Expr::Mul(lhs.into(), rhs.into()) } else { Expr::Div(lhs.into(), rhs.into()) };
                }
                Some(Tok::Num(_)) | Some(Tok::Ident(_)) | Some(Tok::LParen) => {
                    let rhs = self.power()?;
                    lhs = Expr::Mul(lhs.into(), rhs.into());
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        self.enter()?;
        let out = match self.peek() {
            Some(Tok::Op('-')) => {
                self.i += 1;
                Expr::Neg(self.unary()?.into())
            }
            Some(Tok::Op('+')) => {
                self.i += 1;
                self.unary()?
            }
            _ => self.power()?,
        };
        self.depth -= 1;
        Ok(out)
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.primary()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.i += 1;
            let exp = self.unary()?;
            return Ok(Expr::Pow(base.into(), exp.into()));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr> {
        match self.peek().cloned() {
            Some(Tok::Num(v)) => {
                self.i += 1;
                Ok(Expr::Num(v))
            }
            Some(Tok::LParen) => {
                self.i += 1;
                let e = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.err("expected ')'");
                }
                self.i += 1;
                Ok(e)
            }
            Some(Tok::Ident(name)) => {
                self.i += 1;
                let func = match name.as_str() {
                    "exp" => Some(Func::Exp),
                    "sin" => Some(Func::Sin),
                    "cos" => Some(Func::Cos),
                    _ => None,
                };
                if let Some(f) = func {
                    if self.peek() != Some(&Tok::LParen) {
                        return self.err("expected '(' after function name");
                    }
                    self.i += 1;
                    let arg = self.expr()?;
                    if self.peek() != Some(&Tok::RParen) {
                        return self.err("expected ')'");
                    }
                    self.i += 1;
                    return Ok(Expr::Call(f, arg.into()));
                }
                match name.as_str() {
                    "pi" | "π" => Ok(Expr::Num(PI)),
                    "e" => Ok(Expr::Num(std::f64::consts::E)),
                    "x" | "t" => {
                        let c = name.chars().next().unwrap();
                        match self.var {
                            Some(v) if v != c => {
                                self.i -= 1;
                                self.err("expression mixes x and t")
                            }
                            _ => {
                                self.var = Some(c);
                                Ok(Expr::Var)
                            }
                        }
                    }
                    _ => {
                        self.i -= 1;
                        self.err(&format!("unknown identifier '{name}'"))
                    }
                }
            }
            Some(_) => self.err("unexpected token"),
            None => self.err("unexpected end of input"),
        }
    }
}

/// A parsed expression together with the variable name it used, if any.
#[derive(Clone, Debug, PartialEq)]
pub struct Parsed {
    pub expr: Expr,
    pub var: Option<char>,
}

/// Parses an expression in `x` or `t`.
pub fn parse(s: &str) -> Result<Parsed> {
    if s.len() > MAX_LEN {
        return Err(Error::Parse { pos: MAX_LEN, msg: "expression too long".into() });
    }
    let toks = lex(s)?;
    let mut p = Parser { toks, i: 0, depth: 0, var: None, end: s.len() };
    let expr = p.expr()?;
    if p.i != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(Parsed { expr, var: p.var })
}

fn b(e: Expr) -> Box<Expr> {
    Box::new(e)
}

impl Expr {
    pub fn eval(&self, v: C) -> C {
        match self {
            Expr::Num(a) => C::new(*a, 0.0),
            Expr::Var => v,
            Expr::Neg(a) => -a.eval(v),
            Expr::Add(a, c) => a.eval(v) + c.eval(v),
            Expr::Sub(a, c) => a.eval(v) - c.eval(v),
            Expr::Mul(a, c) => a.eval(v) * c.eval(v),
            Expr::Div(a, c) => a.eval(v) / c.eval(v),
            Expr::Pow(a, c) => {
                let base = a.eval(v);
                let e = c.eval(v);
                if e.im == 0.0 && e.re.fract() == 0.0 && e.re.abs() <= 64.0 {
                    base.powi(e.re as i32)
                } else {
                    base.powc(e)
                }
            }
            Expr::Call(f, a) => {
                let z = a.eval(v);
                match f {
                    Func::Exp => z.exp(),
                    Func::Sin => z.sin(),
                    Func::Cos => z.cos(),
                }
            }
        }
    }

    pub fn is_constant(&self) -> bool {
        match self {
            Expr::Num(_) => true,
            Expr::Var => false,
            Expr::Neg(a) | Expr::Call(_, a) => a.is_constant(),
            Expr::Add(a, c) | Expr::Sub(a, c) | Expr::Mul(a, c) | Expr::Div(a, c) | Expr::Pow(a, c) => {
                a.is_constant() && c.is_constant()
            }
        }
    }

    /// Symbolic derivative with respect to the variable.
    pub fn derivative(&self) -> Result<Expr> {
        if self.is_constant() {
            return Ok(Expr::Num(0.0));
        }
        Ok(match self {
            Expr::Num(_) => Expr::Num(0.0),
            Expr::Var => Expr::Num(1.0),
            Expr::Neg(a) => Expr::Neg(b(a.derivative()?)),
            Expr::Add(a, c) => Expr::Add(b(a.derivative()?), b(c.derivative()?)),
            Expr::Sub(a, c) => Expr::Sub(b(a.derivative()?), b(c.derivative()?)),
            Expr::Mul(a, c) => Expr::Add(
                b(Expr::Mul(b(a.derivative()?), c.clone())),
                b(Expr::Mul(a.clone(), b(c.derivative()?))),
            ),
            Expr::Div(a, c) => Expr::Div(
                b(Expr::Sub(
                    b(Expr::Mul(b(a.derivative()?), c.clone())),
                    b(Expr::Mul(a.clone(), b(c.derivative()?))),
                )),
                b(Expr::Pow(c.clone(), b(Expr::Num(2.0)))),
            ),
            Expr::Pow(a, c) => {
                if !c.is_constant() {
                    return Err(Error::Unsupported("derivative of a variable exponent".into()));
                }
                Expr::Mul(
                    b(Expr::Mul(c.clone(), b(Expr::Pow(a.clone(), b(Expr::Sub(c.clone(), b(Expr::Num(1.0)))))))),
                    b(a.derivative()?),
                )
            }
            Expr::Call(f, a) => {
                let inner = a.derivative()?;
                let outer = match f {
                    Func::Exp => Expr::Call(Func::Exp, a.clone()),
                    Func::Sin => Expr::Call(Func::Cos, a.clone()),
                    Func::Cos => Expr::Neg(b(Expr::Call(Func::Sin, a.clone()))),
                };
                Expr::Mul(b(outer), b(inner))
            }
        })
    }

    /// Converts to a closed exponential-polynomial form when possible.
    pub fn to_exppoly(&self) -> Option<ExpPoly> {
        Some(match self {
            Expr::Num(a) => ExpPoly::constant(C::new(*a, 0.0)),
            Expr::Var => ExpPoly::var(),
            Expr::Neg(a) => a.to_exppoly()?.scale(C::new(-1.0, 0.0)),
            Expr::Add(a, c) => a.to_exppoly()?.add(&c.to_exppoly()?),
            Expr::Sub(a, c) => a.to_exppoly()?.sub(&c.to_exppoly()?),
            Expr::Mul(a, c) => a.to_exppoly()?.mul(&c.to_exppoly()?),
            Expr::Div(a, c) => {
                let d = c.to_exppoly()?.as_constant()?;
                if d == C::new(0.0, 0.0) {
                    return None;
                }
                a.to_exppoly()?.scale(1.0 / d)
            }
            Expr::Pow(a, c) => {
                let e = c.to_exppoly()?.as_constant()?;
                if e.im != 0.0 || e.re.fract() != 0.0 || !(0.0..=16.0).contains(&e.re) {
                    return None;
                }
                let base = a.to_exppoly()?;
                let mut acc = ExpPoly::constant(C::new(1.0, 0.0));
                for _ in 0..e.re as u32 {
                    acc = acc.mul(&base);
                }
                acc
            }
            Expr::Call(f, a) => {
                let (p, q) = a.to_exppoly()?.as_linear()?;
                match f {
                    Func::Exp => ExpPoly::exp_linear(p, q),
                    Func::Sin => ExpPoly::sin_linear(p, q),
                    Func::Cos => ExpPoly::cos_linear(p, q),
                }
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(s: &str, v: f64) -> C {
        parse(s).unwrap().expr.eval(C::new(v, 0.0))
    }

    #[test]
    fn precedence_and_implicit_products() {
        assert!((ev("1 + 2*3^2", 0.0).re - 19.0).abs() < 1e-15);
        assert!((ev("-2^2", 0.0).re + 4.0).abs() < 1e-15);
        assert!((ev("4pi", 0.0).re - 4.0 * PI).abs() < 1e-15);
        assert!((ev("3x exp(-x)", 1.0).re - 3.0 / std::f64::consts::E).abs() < 1e-15);
        assert!((ev("2**3", 0.0).re - 8.0).abs() < 1e-15);
        assert!((ev("1.5e-1 * 2", 0.0).re - 0.3).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_input() {
        for s in ["", "sin x", "(1", "x t", "foo(1)", "1 +", "#", "exp"] {
            assert!(parse(s).is_err(), "{s}");
        }
        let deep = "(".repeat(200) + "1" + &")".repeat(200);
        assert!(parse(&deep).is_err());
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let p = parse("exp(-2x)*(sin(4*pi*x)+1)/2 + x^3/(1+x^2)").unwrap();
        let d = p.expr.derivative().unwrap();
        for &x in &[0.1, 0.5, 2.0] {
            let fd = (p.expr.eval(C::new(x + 1e-6, 0.0)) - p.expr.eval(C::new(x - 1e-6, 0.0))) / 2e-6;
            assert!((fd - d.eval(C::new(x, 0.0))).norm() < 1e-7);
        }
    }

    #[test]
    fn exppoly_conversion() {
        let p = parse("1/2 + (1 - 2*pi)*t*exp(-t)").unwrap();
        assert_eq!(p.var, Some('t'));
        let e = p.expr.to_exppoly().unwrap();
        for &t in &[0.0, 0.3, 1.7] {
            assert!((e.eval(t) - p.expr.eval(C::new(t, 0.0))).norm() < 1e-14);
        }
        assert!(parse("1/(1+x)").unwrap().expr.to_exppoly().is_none());
        assert!(parse("sin(x^2)").unwrap().expr.to_exppoly().is_none());
    }
}
