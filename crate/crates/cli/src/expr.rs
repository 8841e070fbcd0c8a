//! Coefficient expressions.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | primary
//! primary := number | 'x' | 'u' | 'pi' | '(' expr ')'
//!          | 'pow' '(' expr ',' const ')'
//!          | 'exp' '(' expr ')'
//!          | 'bump' '(' const ',' const ')'
//! ```
//!
//! `bump(c, w)` is the Gaussian `exp(−((x − c)/w)²)`. A `const` is an
//! expression without variables. `u` is only accepted where the expression
//! is a nonlinearity `F(x, u)`.

use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    X,
    U,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, f64),
    Exp(Box<Expr>),
    Bump { center: f64, width: f64 },
}

/// Parse failure at a character offset of the source.
#[derive(Debug, Clone, PartialEq)]
pub struct ExprError {
    pub offset: usize,
    pub msg: String,
}

impl fmt::Display for ExprError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at offset {}: {}", self.offset, self.msg)
    }
}

impl std::error::Error for ExprError {}

impl Expr {
    /// Parse an expression in `x`.
    pub fn parse(src: &str) -> Result<Expr, ExprError> {
        Parser::new(src, false).finish()
    }

    /// Parse an expression in `x` and `u`.
    pub fn parse_nonlinearity(src: &str) -> Result<Expr, ExprError> {
        Parser::new(src, true).finish()
    }

    pub fn eval(&self, x: f64, u: f64) -> f64 {
        match self {
            Expr::Num(c) => *c,
            Expr::X => x,
            Expr::U => u,
            Expr::Neg(a) => -a.eval(x, u),
            Expr::Add(a, b) => a.eval(x, u) + b.eval(x, u),
            Expr::Sub(a, b) => a.eval(x, u) - b.eval(x, u),
            Expr::Mul(a, b) => a.eval(x, u) * b.eval(x, u),
            Expr::Div(a, b) => a.eval(x, u) / b.eval(x, u),
            Expr::Pow(a, e) => a.eval(x, u).powf(*e),
            Expr::Exp(a) => a.eval(x, u).exp(),
            Expr::Bump { center, width } => {
                let z = (x - center) / width;
                (-z * z).exp()
            }
        }
    }

    fn is_const(&self) -> bool {
        match self {
            Expr::Num(_) => true,
            Expr::X | Expr::U | Expr::Bump { .. } => false,
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Exp(a) => a.is_const(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => a.is_const() && b.is_const(),
        }
    }
}

struct Parser<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    src: &'a str,
    allow_u: bool,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, allow_u: bool) -> Self {
        Parser {
            chars: src.chars().enumerate().collect(),
            pos: 0,
            src,
            allow_u,
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ExprError> {
        Err(ExprError {
            offset: self.offset(),
            msg: msg.into(),
        })
    }

    fn offset(&self) -> usize {
        self.chars.get(self.pos).map_or(self.chars.len(), |c| c.0)
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.1.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).map(|c| c.1)
    }

    fn expect(&mut self, want: char) -> Result<(), ExprError> {
        match self.peek() {
            Some(c) if c == want => {
                self.pos += 1;
                Ok(())
            }
            Some(c) => self.err(format!("expected '{want}', found '{c}'")),
            None => self.err(format!("expected '{want}', found end of input")),
        }
    }

    fn finish(mut self) -> Result<Expr, ExprError> {
        if self.src.trim().is_empty() {
            return self.err("empty expression");
        }
        let e = self.expr()?;
        match self.peek() {
            None => Ok(e),
            Some(c) => self.err(format!("unexpected '{c}'")),
        }
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some('-') => {
                    self.pos += 1;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Some('/') => {
                    self.pos += 1;
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        if self.peek() == Some('-') {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.primary()
    }

    fn constant(&mut self) -> Result<f64, ExprError> {
        let start = self.pos;
        let e = self.expr()?;
        if !e.is_const() {
            self.pos = start;
            self.skip_ws();
            return self.err("expected a constant");
        }
        Ok(e.eval(0.0, 0.0))
    }

    fn primary(&mut self) -> Result<Expr, ExprError> {
        match self.peek() {
            None => self.err("unexpected end of input"),
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == '.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                let mut name = String::new();
                while let Some(&(_, c)) = self.chars.get(self.pos) {
                    if !(c.is_ascii_alphanumeric() || c == '_') {
                        break;
                    }
                    name.push(c);
                    self.pos += 1;
                }
                match name.as_str() {
                    "x" => Ok(Expr::X),
                    "u" if self.allow_u => Ok(Expr::U),
                    "pi" => Ok(Expr::Num(std::f64::consts::PI)),
                    "pow" => {
                        self.expect('(')?;
                        let base = self.expr()?;
                        self.expect(',')?;
                        let e = self.constant()?;
                        self.expect(')')?;
                        Ok(Expr::Pow(Box::new(base), e))
                    }
                    "exp" => {
                        self.expect('(')?;
                        let arg = self.expr()?;
                        self.expect(')')?;
                        Ok(Expr::Exp(Box::new(arg)))
                    }
                    "bump" => {
                        self.expect('(')?;
                        let center = self.constant()?;
                        self.expect(',')?;
                        let width = self.constant()?;
                        self.expect(')')?;
                        if !(width > 0.0) {
                            return self.err("bump width must be positive");
                        }
                        Ok(Expr::Bump { center, width })
                    }
                    _ => {
                        self.pos = start;
                        self.err(format!("unknown identifier '{name}'"))
                    }
                }
            }
            Some(c) => self.err(format!("unexpected '{c}'")),
        }
    }

    fn number(&mut self) -> Result<Expr, ExprError> {
        let start = self.pos;
        let mut text = String::new();
        let mut prev = ' ';
        while let Some(&(_, c)) = self.chars.get(self.pos) {
            let sign_in_exponent = (c == '+' || c == '-') && (prev == 'e' || prev == 'E');
            if !(c.is_ascii_digit() || c == '.' || c == 'e' || c == 'E' || sign_in_exponent) {
                break;
            }
            text.push(c);
            prev = c;
            self.pos += 1;
        }
        match text.parse::<f64>() {
            Ok(v) => Ok(Expr::Num(v)),
            Err(_) => {
                self.pos = start;
                self.err(format!("malformed number '{text}'"))
            }
        }
    }
}
