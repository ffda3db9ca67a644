//! Small infix expression language over complex numbers.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' '-'? INTEGER)?
//! atom  := NUMBER | 'i' | 'pi' | u<k> | x<k> | FUNC '(' expr ')' | '(' expr ')'
//! ```
//!
//! `u1..ug` are complex base coordinates and `x1..x2g` their real parts in
//! the order `(Re u1, Im u1, Re u2, ...)`. `exp`, `sin`, `cos` are
//! holomorphic; `re`, `im`, `abs` and the `x` variables are not.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{message} at offset {offset} in `{source_text}`")]
pub struct ExprError {
    pub source_text: String,
    pub offset: usize,
    pub message: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Exp,
    Sin,
    Cos,
    Re,
    Im,
    Abs,
}

impl Func {
    fn from_name(s: &str) -> Option<Self> {
        Some(match s {
            "exp" => Func::Exp,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "re" => Func::Re,
            "im" => Func::Im,
            "abs" => Func::Abs,
            _ => return None,
        })
    }

    fn is_holomorphic(self) -> bool {
        matches!(self, Func::Exp | Func::Sin | Func::Cos)
    }

    fn apply(self, z: Complex64) -> Complex64 {
        match self {
            Func::Exp => z.exp(),
            Func::Sin => z.sin(),
            Func::Cos => z.cos(),
            Func::Re => Complex64::new(z.re, 0.0),
            Func::Im => Complex64::new(z.im, 0.0),
            Func::Abs => Complex64::new(z.norm(), 0.0),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Node {
    Const(Complex64),
    /// Zero-based complex coordinate `u_{k+1}`.
    U(usize),
    /// Zero-based real coordinate `x_{k+1}`.
    X(usize),
    Neg(Box<Node>),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>),
    Pow(Box<Node>, i32),
    Call(Func, Box<Node>),
}

impl Node {
    fn eval(&self, u: &[Complex64]) -> Complex64 {
        match self {
            Node::Const(c) => *c,
            Node::U(k) => u[*k],
            Node::X(k) => {
                let z = u[k / 2];
                Complex64::new(if k % 2 == 0 { z.re } else { z.im }, 0.0)
            }
            Node::Neg(a) => -a.eval(u),
            Node::Add(a, b) => a.eval(u) + b.eval(u),
            Node::Sub(a, b) => a.eval(u) - b.eval(u),
            Node::Mul(a, b) => a.eval(u) * b.eval(u),
            Node::Div(a, b) => a.eval(u) / b.eval(u),
            Node::Pow(a, n) => a.eval(u).powi(*n),
            Node::Call(f, a) => f.apply(a.eval(u)),
        }
    }

    fn visit(&self, f: &mut impl FnMut(&Node)) {
        f(self);
        match self {
            Node::Neg(a) | Node::Pow(a, _) | Node::Call(_, a) => a.visit(f),
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            _ => {}
        }
    }
}

/// A parsed expression that remembers its source text.
#[derive(Clone, Debug, PartialEq)]
pub struct Expression {
    source: String,
    root: Node,
}

impl Expression {
    pub fn parse(source: &str) -> Result<Self, ExprError> {
        let mut p = Parser { src: source, bytes: source.as_bytes(), pos: 0 };
        let root = p.expr()?;
        p.skip_ws();
        if p.pos != p.bytes.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(Self { source: source.to_string(), root })
    }

    pub fn constant(c: Complex64) -> Self {
        Self { source: format!("({:?}+{:?}*i)", c.re, c.im), root: Node::Const(c) }
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    /// Evaluate at base point `u` (complex coordinates).
    pub fn eval(&self, u: &[Complex64]) -> Complex64 {
        self.root.eval(u)
    }

    /// True when the expression is built only from `u` variables, constants,
    /// field operations, integer powers and holomorphic functions.
    pub fn is_holomorphic(&self) -> bool {
        let mut ok = true;
        self.root.visit(&mut |n| match n {
            Node::X(_) => ok = false,
            Node::Call(f, _) if !f.is_holomorphic() => ok = false,
            _ => {}
        });
        ok
    }

    /// Number of complex coordinates the expression needs.
    pub fn required_g(&self) -> usize {
        let mut g = 0;
        self.root.visit(&mut |n| match n {
            Node::U(k) => g = g.max(k + 1),
            Node::X(k) => g = g.max(k / 2 + 1),
            _ => {}
        });
        g
    }

    pub fn is_constant(&self) -> bool {
        self.required_g() == 0
    }
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.source)
    }
}

impl FromStr for Expression {
    type Err = ExprError;
    fn from_str(s: &str) -> Result<Self, ExprError> {
        Expression::parse(s)
    }
}

impl Serialize for Expression {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.source)
    }
}

impl<'de> Deserialize<'de> for Expression {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Expression::parse(&s).map_err(serde::de::Error::custom)
    }
}

struct Parser<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error(&self, msg: &str) -> ExprError {
        ExprError { source_text: self.src.to_string(), offset: self.pos, message: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Node, ExprError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                lhs = Node::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(b'-') {
                lhs = Node::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Node, ExprError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat(b'*') {
                lhs = Node::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat(b'/') {
                lhs = Node::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Node, ExprError> {
        if self.eat(b'-') {
            return Ok(Node::Neg(Box::new(self.unary()?)));
        }
        if self.eat(b'+') {
            return self.unary();
        }
        let base = self.atom()?;
        if self.eat(b'^') {
            let neg = self.eat(b'-');
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if start == self.pos {
                return Err(self.error("exponent must be an integer literal"));
            }
            let n: i32 = self.src[start..self.pos].parse().map_err(|_| self.error("exponent too large"))?;
            return Ok(Node::Pow(Box::new(base), if neg { -n } else { n }));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Node, ExprError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.error("expected `)`"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => self.ident(),
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn number(&mut self) -> Result<Node, ExprError> {
        let start = self.pos;
        let b = self.bytes;
        while self.pos < b.len() && (b[self.pos].is_ascii_digit() || b[self.pos] == b'.') {
            self.pos += 1;
        }
        if self.pos < b.len() && (b[self.pos] == b'e' || b[self.pos] == b'E') {
            let mut q = self.pos + 1;
            if q < b.len() && (b[q] == b'+' || b[q] == b'-') {
                q += 1;
            }
            if q < b.len() && b[q].is_ascii_digit() {
                while q < b.len() && b[q].is_ascii_digit() {
                    q += 1;
                }
                self.pos = q;
            }
        }
        let text = &self.src[start..self.pos];
        let v: f64 = text.parse().map_err(|_| ExprError {
            source_text: self.src.to_string(),
            offset: start,
            message: format!("bad number `{text}`"),
        })?;
        Ok(Node::Const(Complex64::new(v, 0.0)))
    }

    fn ident(&mut self) -> Result<Node, ExprError> {
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_alphanumeric() {
            self.pos += 1;
        }
        let name = &self.src[start..self.pos];
        let err = |msg: String| ExprError { source_text: self.src.to_string(), offset: start, message: msg };
        match name {
            "i" => return Ok(Node::Const(Complex64::new(0.0, 1.0))),
            "pi" => return Ok(Node::Const(Complex64::new(std::f64::consts::PI, 0.0))),
            _ => {}
        }
        if let Some(f) = Func::from_name(name) {
            if !self.eat(b'(') {
                return Err(err(format!("expected `(` after `{name}`")));
            }
            let arg = self.expr()?;
            if !self.eat(b')') {
                return Err(self.error("expected `)`"));
            }
            return Ok(Node::Call(f, Box::new(arg)));
        }
        let (kind, digits) = name.split_at(1);
        if let (Some(k), true) = (digits.parse::<usize>().ok(), kind == "u" || kind == "x") {
            if k == 0 {
                return Err(err("variables are numbered from 1".into()));
            }
            return Ok(if kind == "u" { Node::U(k - 1) } else { Node::X(k - 1) });
        }
        Err(err(format!("unknown identifier `{name}`")))
    }
}
