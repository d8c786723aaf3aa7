//! A small expression language for the load `q(t)` and nonlinearity `f(y)`.
//!
//! Grammar, loosest binding first:
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' unary)?          // right-associative
//! primary := number | var | func '(' expr ')' | '(' expr ')'
//! func    := ln | exp | sqrt | abs | gamma
//! ```
//!
//! So `-y^2` is `-(y^2)` and `2^3^2` is `2^9`.

use std::fmt;

use crate::error::{Error, Result};
use crate::specfun;

const MAX_DEPTH: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Ln,
    Exp,
    Sqrt,
    Abs,
    Gamma,
}

impl Func {
    fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "ln" => Func::Ln,
            "exp" => Func::Exp,
            "sqrt" => Func::Sqrt,
            "abs" => Func::Abs,
            "gamma" => Func::Gamma,
            _ => return None,
        })
    }

    fn name(self) -> &'static str {
        match self {
            Func::Ln => "ln",
            Func::Exp => "exp",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
            Func::Gamma => "gamma",
        }
    }

    fn apply(self, x: f64) -> Result<f64> {
        match self {
            Func::Ln if x <= 0.0 => Err(Error::Eval(format!("ln of nonpositive value {x}"))),
            Func::Ln => Ok(x.ln()),
            Func::Exp => Ok(x.exp()),
            Func::Sqrt if x < 0.0 => Err(Error::Eval(format!("sqrt of negative value {x}"))),
            Func::Sqrt => Ok(x.sqrt()),
            Func::Abs => Ok(x.abs()),
            Func::Gamma => specfun::gamma(x).map_err(|e| Error::Eval(e.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
            BinOp::Pow => '^',
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Num(f64),
    Var,
    Neg(Box<Node>),
    Bin(BinOp, Box<Node>, Box<Node>),
    Call(Func, Box<Node>),
}

impl Node {
    fn eval(&self, x: f64) -> Result<f64> {
        let v = match self {
            Node::Num(v) => *v,
            Node::Var => x,
            Node::Neg(inner) => -inner.eval(x)?,
            Node::Call(func, arg) => func.apply(arg.eval(x)?)?,
            Node::Bin(op, lhs, rhs) => {
                let (l, r) = (lhs.eval(x)?, rhs.eval(x)?);
                match op {
                    BinOp::Add => l + r,
                    BinOp::Sub => l - r,
                    BinOp::Mul => l * r,
                    BinOp::Div if r == 0.0 => {
                        return Err(Error::Eval("division by zero".into()));
                    }
                    BinOp::Div => l / r,
                    BinOp::Pow => l.powf(r),
                }
            }
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Eval(format!("non-finite intermediate value {v}")))
        }
    }

    fn write(&self, var: &str, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Num(v) => write!(out, "{v:?}"),
            Node::Var => out.write_str(var),
            Node::Neg(inner) => {
                out.write_str("(-")?;
                inner.write(var, out)?;
                out.write_str(")")
            }
            Node::Call(func, arg) => {
                write!(out, "{}(", func.name())?;
                arg.write(var, out)?;
                out.write_str(")")
            }
            Node::Bin(op, lhs, rhs) => {
                out.write_str("(")?;
                lhs.write(var, out)?;
                write!(out, " {} ", op.symbol())?;
                rhs.write(var, out)?;
                out.write_str(")")
            }
        }
    }
}

/// A parsed univariate expression.
#[derive(Debug, Clone)]
pub struct Expr {
    root: Node,
    var: String,
    source: String,
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        self.root == other.root && self.var == other.var
    }
}

impl Expr {
    /// Parses `src`, whose only free variable may be `var_name`.
    pub fn parse(src: &str, var_name: &str) -> Result<Self> {
        let mut parser = Parser {
            src,
            tokens: tokenize(src)?,
            pos: 0,
            var: var_name,
            depth: 0,
        };
        if parser.tokens.len() == 1 {
            return Err(Error::Parse {
                offset: 0,
                message: "empty expression".into(),
            });
        }
        let root = parser.expr()?;
        let tok = parser.peek();
        if tok.kind != Tok::End {
            return Err(Error::Parse {
                offset: tok.offset,
                message: format!("unexpected {}", tok.describe(src)),
            });
        }
        Ok(Self {
            root,
            var: var_name.to_string(),
            source: src.to_string(),
        })
    }

    /// Evaluates the expression with the free variable bound to `value`.
    pub fn eval(&self, value: f64) -> Result<f64> {
        self.root.eval(value)
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    /// The text this expression was parsed from.
    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    /// True when the expression is the bare variable, e.g. `f(y) = y`.
    pub fn is_identity(&self) -> bool {
        self.root == Node::Var
    }
}

/// Fully parenthesised form; parses back to the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.root.write(&self.var, f)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
    Comma,
    End,
}

#[derive(Debug, Clone)]
struct Token {
    kind: Tok,
    offset: usize,
    len: usize,
}

impl Token {
    fn describe(&self, src: &str) -> String {
        match self.kind {
            Tok::End => "end of input".into(),
            _ => format!("`{}`", &src[self.offset..self.offset + self.len]),
        }
    }
}

fn tokenize(src: &str) -> Result<Vec<Token>> {
    let bytes = src.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let kind = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' | b'-' | b'*' | b'/' | b'^' => {
                i += 1;
                Tok::Op(c as char)
            }
            b'(' => {
                i += 1;
                Tok::LParen
            }
            b')' => {
                i += 1;
                Tok::RParen
            }
            b',' => {
                i += 1;
                Tok::Comma
            }
            b'0'..=b'9' | b'.' => {
                i = scan_number(bytes, i);
                let text = &src[start..i];
                let value: f64 = text.parse().map_err(|_| Error::Parse {
                    offset: start,
                    message: format!("malformed number `{text}`"),
                })?;
                if !value.is_finite() {
                    return Err(Error::Parse {
                        offset: start,
                        message: format!("number `{text}` is out of range"),
                    });
                }
                Tok::Num(value)
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                Tok::Ident(src[start..i].to_string())
            }
            _ => {
                let ch = src[start..].chars().next().unwrap_or('?');
                return Err(Error::Parse {
                    offset: start,
                    message: format!("unexpected character `{ch}`"),
                });
            }
        };
        tokens.push(Token {
            kind,
            offset: start,
            len: i - start,
        });
    }
    tokens.push(Token {
        kind: Tok::End,
        offset: src.len(),
        len: 0,
    });
    Ok(tokens)
}

/// Decimal literal: digits, optional fraction, optional exponent.
fn scan_number(bytes: &[u8], mut i: usize) -> usize {
    let digits = |i: &mut usize| {
        while *i < bytes.len() && bytes[*i].is_ascii_digit() {
            *i += 1;
        }
    };
    digits(&mut i);
    if i < bytes.len() && bytes[i] == b'.' {
        i += 1;
        digits(&mut i);
    }
    if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
        let mut j = i + 1;
        if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
            j += 1;
        }
        if j < bytes.len() && bytes[j].is_ascii_digit() {
            i = j;
            digits(&mut i);
        }
    }
    i
}

struct Parser<'a> {
    src: &'a str,
    tokens: Vec<Token>,
    pos: usize,
    var: &'a str,
    depth: usize,
}

impl Parser<'_> {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn bump(&mut self) -> Token {
        let tok = self.tokens[self.pos].clone();
        if tok.kind != Tok::End {
            self.pos += 1;
        }
        tok
    }

    fn unexpected<T>(&self, expected: &str) -> Result<T> {
        let tok = self.peek();
        Err(Error::Parse {
            offset: tok.offset,
            message: format!("expected {expected}, found {}", tok.describe(self.src)),
        })
    }

    fn enter(&mut self) -> Result<()> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(Error::Parse {
                offset: self.peek().offset,
                message: format!("nesting deeper than {MAX_DEPTH}"),
            });
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<Node> {
        self.enter()?;
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek().kind {
                Tok::Op('+') => BinOp::Add,
                Tok::Op('-') => BinOp::Sub,
                _ => break,
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Node::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        self.depth -= 1;
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Node> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek().kind {
                Tok::Op('*') => BinOp::Mul,
                Tok::Op('/') => BinOp::Div,
                _ => break,
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = Node::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Node> {
        if self.peek().kind == Tok::Op('-') {
            self.bump();
            self.enter()?;
            let inner = self.unary()?;
            self.depth -= 1;
            return Ok(Node::Neg(Box::new(inner)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Node> {
        let base = self.primary()?;
        if self.peek().kind == Tok::Op('^') {
            self.bump();
            self.enter()?;
            let exponent = self.unary()?;
            self.depth -= 1;
            return Ok(Node::Bin(BinOp::Pow, Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Node> {
        let tok = self.bump();
        match tok.kind {
            Tok::Num(v) => Ok(Node::Num(v)),
            Tok::LParen => {
                let inner = self.expr()?;
                self.close_paren()?;
                Ok(inner)
            }
            Tok::Ident(name) => {
                if let Some(func) = Func::from_name(&name) {
                    if self.peek().kind != Tok::LParen {
                        return self.unexpected(&format!("`(` after `{name}`"));
                    }
                    self.bump();
                    let arg = self.expr()?;
                    if self.peek().kind == Tok::Comma {
                        return Err(Error::Parse {
                            offset: self.peek().offset,
                            message: format!("`{name}` takes exactly one argument"),
                        });
                    }
                    self.close_paren()?;
                    Ok(Node::Call(func, Box::new(arg)))
                } else if name == self.var {
                    Ok(Node::Var)
                } else if name == "t" || name == "y" {
                    Err(Error::WrongVariable {
                        found: name,
                        expected: self.var.to_string(),
                        offset: tok.offset,
                    })
                } else {
                    Err(Error::UnknownIdentifier {
                        name,
                        offset: tok.offset,
                    })
                }
            }
            _ => {
                self.pos -= usize::from(tok.kind != Tok::End);
                self.unexpected("a number, variable, function or `(`")
            }
        }
    }

    fn close_paren(&mut self) -> Result<()> {
        if self.peek().kind == Tok::RParen {
            self.bump();
            Ok(())
        } else {
            self.unexpected("`)`")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(src: &str, var: &str, x: f64) -> f64 {
        Expr::parse(src, var).unwrap().eval(x).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(ev("(2*t+1)/2", "t", 0.5), 1.0);
        let f = ev("ln(2+y)/gamma(6)", "y", 0.0);
        assert!((f - std::f64::consts::LN_2 / 120.0).abs() < 1e-15);
        assert!((f - 0.0057762).abs() < 1e-7);
        assert_eq!(ev("1/(y+20)", "y", 0.0), 0.05);
        assert_eq!(ev("2^3^2", "y", 0.0), 512.0);
        assert_eq!(ev("t", "t", 3.25), 3.25);
        assert!((ev("gamma(6)", "y", 0.0) - 120.0).abs() < 1e-10);
        assert_eq!(ev("-y^2", "y", 2.0), -4.0);
    }

    #[test]
    fn precedence() {
        assert_eq!(ev("1+2*3", "t", 0.0), 7.0);
        assert_eq!(ev("8/4/2", "t", 0.0), 1.0);
        assert_eq!(ev("10-4-3", "t", 0.0), 3.0);
        assert_eq!(ev("2*-3", "t", 0.0), -6.0);
        assert_eq!(ev("2^-1", "t", 0.0), 0.5);
        assert_eq!(ev("-2^2", "t", 0.0), -4.0);
        assert_eq!(ev("(-2)^2", "t", 0.0), 4.0);
        assert_eq!(ev("--t", "t", 5.0), 5.0);
        assert_eq!(ev("1.5e2 + .5", "t", 0.0), 150.5);
        assert_eq!(ev("abs(-t) + sqrt(4) + exp(0)", "t", 1.0), 4.0);
    }

    #[test]
    fn error_positions() {
        match Expr::parse("1 + * 2", "t") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 4),
            other => panic!("{other:?}"),
        }
        match Expr::parse("(1 + 2", "t") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 6),
            other => panic!("{other:?}"),
        }
        match Expr::parse("2 $ 3", "t") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 2),
            other => panic!("{other:?}"),
        }
        match Expr::parse("1 2", "t") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 2),
            other => panic!("{other:?}"),
        }
        match Expr::parse("   ", "t") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 0),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn identifiers() {
        assert!(matches!(
            Expr::parse("sin(t)", "t"),
            Err(Error::UnknownIdentifier { offset: 0, .. })
        ));
        assert!(matches!(
            Expr::parse("1 + y", "t"),
            Err(Error::WrongVariable { offset: 4, .. })
        ));
        assert!(matches!(
            Expr::parse("ln 2", "t"),
            Err(Error::Parse { offset: 3, .. })
        ));
        assert!(matches!(
            Expr::parse("ln(1, 2)", "t"),
            Err(Error::Parse { offset: 4, .. })
        ));
    }

    #[test]
    fn eval_errors() {
        let check = |src: &str, x: f64| {
            let e = Expr::parse(src, "y").unwrap();
            assert!(matches!(e.eval(x), Err(Error::Eval(_))), "{src} at {x}");
        };
        check("ln(y)", 0.0);
        check("ln(y)", -1.0);
        check("sqrt(y)", -1.0);
        check("gamma(y)", 0.0);
        check("gamma(y)", -2.5);
        check("1/y", 0.0);
        check("exp(y)", 1000.0);
    }

    #[test]
    fn display_round_trip() {
        for src in [
            "(2*t+1)/2",
            "-t^2^-1",
            "gamma(t+1)/abs(t-3)",
            "1e-5*t",
            "--t",
        ] {
            let e = Expr::parse(src, "t").unwrap();
            let again = Expr::parse(&e.to_string(), "t").unwrap();
            assert_eq!(e, again, "{src} -> {e}");
        }
    }

    #[test]
    fn depth_limit() {
        let deep = format!("{}1{}", "(".repeat(500), ")".repeat(500));
        assert!(matches!(Expr::parse(&deep, "t"), Err(Error::Parse { .. })));
        let ok = format!("{}t{}", "(".repeat(50), ")".repeat(50));
        assert!(Expr::parse(&ok, "t").is_ok());
    }

    #[test]
    fn identity_detection() {
        assert!(Expr::parse("y", "y").unwrap().is_identity());
        assert!(!Expr::parse("y*1", "y").unwrap().is_identity());
    }
}
