//! Expression trees over Q_p and their text syntax.
//!
//! Grammar (whitespace is insignificant):
//!
//! ```text
//! outputs := expr (';' expr)*
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := atom ('^' integer)?
//! atom    := integer | literal | 'x' index | '(' expr ')'
//!          | 'ch' '(' point ';' integer ')'
//!          | 'comp' '(' expr (',' expr)+ ')'
//! point   := coord ('|' coord)*        coord := '-'? integer | literal
//! ```
//!
//! `literal` is the p-adic literal `d0,d1,...eV@p`. In `comp(f, g0, g1, ...)`
//! the variables of `f` refer to the values of `g0, g1, ...`.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::function::PointFunction;
use crate::padic::{Ball, PAdicNumber, PAdicVector, DEFAULT_PREC};

#[derive(Clone, Debug)]
pub enum Expr {
    Const(PAdicNumber),
    Var(usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    /// Characteristic function of a ball in the space of the current variables.
    Indicator(Ball),
    Compose { outer: Box<Expr>, args: Vec<Expr> },
}

impl Expr {
    pub fn var(i: usize) -> Self {
        Expr::Var(i)
    }

    pub fn constant(x: PAdicNumber) -> Self {
        Expr::Const(x)
    }

    pub fn add(a: Expr, b: Expr) -> Self {
        Expr::Add(Box::new(a), Box::new(b))
    }

    pub fn sub(a: Expr, b: Expr) -> Self {
        Expr::Sub(Box::new(a), Box::new(b))
    }

    pub fn mul(a: Expr, b: Expr) -> Self {
        Expr::Mul(Box::new(a), Box::new(b))
    }

    pub fn div(a: Expr, b: Expr) -> Self {
        Expr::Div(Box::new(a), Box::new(b))
    }

    pub fn pow(a: Expr, n: u32) -> Self {
        Expr::Pow(Box::new(a), n)
    }

    pub fn eval(&self, x: &[PAdicNumber], p: u32, prec: u32) -> Result<PAdicNumber> {
        Ok(match self {
            Expr::Const(c) => *c,
            Expr::Var(i) => *x.get(*i).ok_or(Error::DimensionMismatch { expected: i + 1, got: x.len() })?,
            Expr::Neg(a) => -a.eval(x, p, prec)?,
            Expr::Add(a, b) => a.eval(x, p, prec)?.try_add(&b.eval(x, p, prec)?)?,
            Expr::Sub(a, b) => a.eval(x, p, prec)?.try_sub(&b.eval(x, p, prec)?)?,
            Expr::Mul(a, b) => a.eval(x, p, prec)?.try_mul(&b.eval(x, p, prec)?)?,
            Expr::Div(a, b) => a.eval(x, p, prec)?.try_div(&b.eval(x, p, prec)?)?,
            Expr::Pow(a, n) => {
                let base = a.eval(x, p, prec)?;
                if *n == 0 {
                    PAdicNumber::p_pow(p, 0, prec)?
                } else {
                    base.pow(*n)
                }
            }
            Expr::Indicator(b) => {
                let pt = PAdicVector::new(x.to_vec())?;
                if pt.dim() != b.dim() {
                    return Err(Error::DimensionMismatch { expected: b.dim(), got: pt.dim() });
                }
                let inside = b.contains(&pt)?;
                if inside {
                    PAdicNumber::p_pow(p, 0, prec)?
                } else {
                    PAdicNumber::zero(p)
                }
            }
            Expr::Compose { outer, args } => {
                let inner = args.iter().map(|g| g.eval(x, p, prec)).collect::<Result<Vec<_>>>()?;
                outer.eval(&inner, p, prec)?
            }
        })
    }

    /// Largest variable index referenced at this level, plus one.
    pub fn arity(&self) -> usize {
        match self {
            Expr::Const(_) => 0,
            Expr::Var(i) => i + 1,
            Expr::Neg(a) | Expr::Pow(a, _) => a.arity(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => a.arity().max(b.arity()),
            Expr::Indicator(b) => b.dim(),
            Expr::Compose { args, .. } => args.iter().map(|g| g.arity()).max().unwrap_or(0),
        }
    }

    pub fn has_indicator(&self) -> bool {
        match self {
            Expr::Const(_) | Expr::Var(_) => false,
            Expr::Indicator(_) => true,
            Expr::Neg(a) | Expr::Pow(a, _) => a.has_indicator(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.has_indicator() || b.has_indicator()
            }
            Expr::Compose { outer, args } => outer.has_indicator() || args.iter().any(|g| g.has_indicator()),
        }
    }

    fn prec_level(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Pow(..) => 4,
            _ => 5,
        }
    }
}

fn fmt_point(b: &Ball, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let parts: Vec<String> = b.center.coords().iter().map(|c| c.to_string()).collect();
    write!(f, "ch({};{})", parts.join("|"), b.rad_exp)
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |e: &Expr, min: u8, f: &mut fmt::Formatter<'_>| -> fmt::Result {
            if e.prec_level() < min {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        };
        match self {
            Expr::Const(c) => write!(f, "{c}"),
            Expr::Var(i) => write!(f, "x{i}"),
            Expr::Neg(a) => {
                write!(f, "-")?;
                wrap(a, 4, f)
            }
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                wrap(a, 1, f)?;
                write!(f, " {} ", if matches!(self, Expr::Add(..)) { '+' } else { '-' })?;
                wrap(b, 2, f)
            }
            Expr::Mul(a, b) | Expr::Div(a, b) => {
                wrap(a, 2, f)?;
                write!(f, " {} ", if matches!(self, Expr::Mul(..)) { '*' } else { '/' })?;
                wrap(b, 3, f)
            }
            Expr::Pow(a, n) => {
                wrap(a, 5, f)?;
                write!(f, "^{n}")
            }
            Expr::Indicator(b) => fmt_point(b, f),
            Expr::Compose { outer, args } => {
                write!(f, "comp({outer}")?;
                for g in args {
                    write!(f, ", {g}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// An expression-defined map `Q_p^m -> Q_p^n`, optionally restricted to a ball.
#[derive(Clone, Debug)]
pub struct SymbolicFunction {
    p: u32,
    dim_in: usize,
    outputs: Vec<Expr>,
    domain: Option<Ball>,
    prec: u32,
}

impl SymbolicFunction {
    pub fn new(p: u32, dim_in: usize, outputs: Vec<Expr>) -> Result<Self> {
        if outputs.is_empty() {
            return Err(Error::Invalid("function needs at least one output".into()));
        }
        if let Some(e) = outputs.iter().find(|e| e.arity() > dim_in) {
            return Err(Error::DimensionMismatch { expected: dim_in, got: e.arity() });
        }
        Ok(SymbolicFunction { p, dim_in, outputs, domain: None, prec: DEFAULT_PREC })
    }

    /// Parses `src`; the input dimension defaults to the highest variable used.
    pub fn parse(p: u32, src: &str, dim_in: Option<usize>) -> Result<Self> {
        Self::parse_with_prec(p, src, dim_in, DEFAULT_PREC)
    }

    pub fn parse_with_prec(p: u32, src: &str, dim_in: Option<usize>, prec: u32) -> Result<Self> {
        let outputs = Parser::new(src, p, prec).parse_outputs()?;
        let need = outputs.iter().map(|e| e.arity()).max().unwrap_or(0).max(1);
        let mut f = Self::new(p, dim_in.unwrap_or(need), outputs)?;
        f.prec = prec;
        Ok(f)
    }

    pub fn with_domain(mut self, domain: Ball) -> Result<Self> {
        if domain.dim() != self.dim_in {
            return Err(Error::DimensionMismatch { expected: self.dim_in, got: domain.dim() });
        }
        self.domain = Some(domain);
        Ok(self)
    }

    pub fn outputs(&self) -> &[Expr] {
        &self.outputs
    }

    pub fn domain(&self) -> Option<&Ball> {
        self.domain.as_ref()
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    /// The `i`-th component as a scalar function.
    pub fn component(&self, i: usize) -> SymbolicFunction {
        SymbolicFunction { outputs: vec![self.outputs[i].clone()], ..self.clone() }
    }
}

impl PointFunction for SymbolicFunction {
    fn prime(&self) -> u32 {
        self.p
    }

    fn dim_in(&self) -> usize {
        self.dim_in
    }

    fn dim_out(&self) -> usize {
        self.outputs.len()
    }

    fn eval(&self, x: &PAdicVector) -> Result<PAdicVector> {
        if x.prime() != self.p {
            return Err(Error::PrimeMismatch(self.p, x.prime()));
        }
        if x.dim() != self.dim_in {
            return Err(Error::DimensionMismatch { expected: self.dim_in, got: x.dim() });
        }
        if let Some(d) = &self.domain {
            if !d.contains(x)? {
                return Err(Error::DomainEscape);
            }
        }
        let vals = self
            .outputs
            .iter()
            .map(|e| e.eval(x.coords(), self.p, self.prec))
            .collect::<Result<Vec<_>>>()?;
        PAdicVector::new(vals)
    }
}

impl fmt::Display for SymbolicFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.outputs.iter().map(|e| e.to_string()).collect();
        write!(f, "{}", parts.join("; "))
    }
}

impl Serialize for SymbolicFunction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

struct Parser<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
    p: u32,
    prec: u32,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, p: u32, prec: u32) -> Self {
        Parser { src, bytes: src.as_bytes(), pos: 0, p, prec }
    }

    fn err<T>(&self, offset: usize, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse { offset, message: message.into() })
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

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            let what = self.peek().map_or("end of input".to_string(), |b| format!("'{}'", b as char));
            self.err(self.pos, format!("expected '{}', found {what}", c as char))
        }
    }

    fn parse_outputs(&mut self) -> Result<Vec<Expr>> {
        let mut out = vec![self.expr()?];
        while self.eat(b';') {
            out.push(self.expr()?);
        }
        if let Some(c) = self.peek() {
            return self.err(self.pos, format!("unexpected '{}'", c as char));
        }
        Ok(out)
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut e = self.term()?;
        loop {
            if self.eat(b'+') {
                e = Expr::add(e, self.term()?);
            } else if self.eat(b'-') {
                e = Expr::sub(e, self.term()?);
            } else {
                return Ok(e);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut e = self.unary()?;
        loop {
            if self.eat(b'*') {
                e = Expr::mul(e, self.unary()?);
            } else if self.eat(b'/') {
                e = Expr::div(e, self.unary()?);
            } else {
                return Ok(e);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat(b'-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        let base = self.atom()?;
        if self.eat(b'^') {
            self.skip_ws();
            let start = self.pos;
            let digits = self.digits();
            let n: u32 = digits.parse().or_else(|_| self.err(start, "expected a natural exponent"))?;
            return Ok(Expr::pow(base, n));
        }
        Ok(base)
    }

    fn digits(&mut self) -> &'a str {
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        &self.src[start..self.pos]
    }

    /// An integer or a full p-adic literal starting at the cursor.
    fn number(&mut self) -> Result<PAdicNumber> {
        self.skip_ws();
        let start = self.pos;
        let mut end = self.pos;
        let b = self.bytes;
        while end < b.len() && (b[end].is_ascii_digit() || b[end] == b',') {
            end += 1;
        }
        // a trailing comma belongs to the surrounding syntax
        while end > start && b[end - 1] == b',' {
            end -= 1;
        }
        let mut lit_end = end;
        if lit_end < b.len() && b[lit_end] == b'e' {
            let mut k = lit_end + 1;
            if k < b.len() && b[k] == b'-' {
                k += 1;
            }
            let ds = k;
            while k < b.len() && b[k].is_ascii_digit() {
                k += 1;
            }
            if k > ds {
                lit_end = k;
            }
        }
        if lit_end < b.len() && b[lit_end] == b'@' {
            let mut k = lit_end + 1;
            while k < b.len() && b[k].is_ascii_digit() {
                k += 1;
            }
            let text = &self.src[start..k];
            let x: PAdicNumber = text.parse().map_err(|e| match e {
                Error::Parse { offset, message } => Error::Parse { offset: start + offset, message },
                other => Error::Parse { offset: start, message: other.to_string() },
            })?;
            if x.prime() != self.p {
                return self.err(start, format!("literal has prime {} but the function uses {}", x.prime(), self.p));
            }
            self.pos = k;
            return Ok(x);
        }
        let ds = self.digits();
        if ds.is_empty() {
            return self.err(start, "expected a number");
        }
        let n: i64 = ds.parse().or_else(|_| self.err(start, "integer out of range"))?;
        PAdicNumber::from_int(self.p, n, self.prec)
    }

    fn ident(&mut self) -> &'a str {
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_alphabetic() {
            self.pos += 1;
        }
        &self.src[start..self.pos]
    }

    fn atom(&mut self) -> Result<Expr> {
        let start = match self.peek() {
            Some(_) => self.pos,
            None => return self.err(self.pos, "unexpected end of input"),
        };
        let c = self.bytes[start];
        if c.is_ascii_digit() {
            return Ok(Expr::Const(self.number()?));
        }
        if c == b'(' {
            self.pos += 1;
            let e = self.expr()?;
            self.expect(b')')?;
            return Ok(e);
        }
        if c.is_ascii_alphabetic() {
            let id = self.ident();
            match id {
                "x" => {
                    let ds = self.digits();
                    let i: usize = ds.parse().or_else(|_| self.err(start, "expected a variable index after 'x'"))?;
                    return Ok(Expr::Var(i));
                }
                "ch" => return self.indicator(),
                "comp" => return self.compose(),
                _ => return self.err(start, format!("unknown identifier '{id}'")),
            }
        }
        self.err(start, format!("unexpected '{}'", c as char))
    }

    fn signed_number(&mut self) -> Result<PAdicNumber> {
        if self.eat(b'-') {
            Ok(-self.number()?)
        } else {
            self.number()
        }
    }

    fn indicator(&mut self) -> Result<Expr> {
        self.expect(b'(')?;
        let mut coords = vec![self.signed_number()?];
        while self.eat(b'|') {
            coords.push(self.signed_number()?);
        }
        self.expect(b';')?;
        let neg = self.eat(b'-');
        self.skip_ws();
        let start = self.pos;
        let k: i64 = self.digits().parse().or_else(|_| self.err(start, "expected a radius exponent"))?;
        self.expect(b')')?;
        let center = PAdicVector::new(coords)?;
        Ok(Expr::Indicator(Ball::new(center, if neg { -k } else { k })))
    }

    fn compose(&mut self) -> Result<Expr> {
        self.expect(b'(')?;
        let outer = self.expr()?;
        let mut args = Vec::new();
        while self.eat(b',') {
            args.push(self.expr()?);
        }
        let at = self.pos;
        self.expect(b')')?;
        if args.is_empty() {
            return self.err(at, "comp needs at least one inner function");
        }
        if outer.arity() > args.len() {
            return self.err(at, format!("outer function uses {} variables but {} were given", outer.arity(), args.len()));
        }
        Ok(Expr::Compose { outer: Box::new(outer), args })
    }
}
