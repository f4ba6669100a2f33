//! Coefficient-function expressions: a tiny grammar over the profile
//! coordinate `t`, evaluated in jet arithmetic so custom metrics defined in
//! config files get exact derivatives without recompilation.
//!
//! Grammar (whitespace-insensitive, `^` right-associative):
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := factor (('*' | '/') factor)*
//! factor  := unary ('^' factor)?
//! unary   := '-' unary | primary
//! primary := number | ident | ident '(' expr ')' | '(' expr ')'
//! ```
//!
//! Numbers are decimal with optional fraction and exponent. Known functions
//! are `sqrt`, `sin`, `cos`. Note that per the grammar `-t^2` parses as
//! `(-t)^2`, not `-(t^2)`.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::jet::{Jet2, JetError};

pub type Span = (usize, usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sqrt,
    Sin,
    Cos,
}

impl Func {
    fn name(self) -> &'static str {
        match self {
            Func::Sqrt => "sqrt",
            Func::Sin => "sin",
            Func::Cos => "cos",
        }
    }

    fn from_name(name: &str) -> Option<Func> {
        match name {
            "sqrt" => Some(Func::Sqrt),
            "sin" => Some(Func::Sin),
            "cos" => Some(Func::Cos),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExprKind {
    Number(f64),
    /// The profile coordinate `t`.
    Var,
    Constant(String),
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

/// Parsed expression tree; spans are byte ranges into the source text.
#[derive(Debug, Clone)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

// Structural equality only; spans are source metadata and do not
// participate (round-tripping through the printer changes offsets).
impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: found {found}, expected {}", expected.join(" | "))]
    Syntax {
        offset: usize,
        found: String,
        expected: Vec<&'static str>,
    },
    #[error("unknown function `{name}` at byte {offset}")]
    UnknownFunction { name: String, offset: usize },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvalError {
    #[error("unknown constant `{name}` at bytes {span:?}")]
    UnknownConstant { name: String, span: Span },
    #[error("domain error at bytes {span:?}: {source}")]
    Domain { span: Span, source: JetError },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConstantsError {
    #[error("constant name {0:?} is reserved")]
    Reserved(String),
    #[error("{0:?} is not a valid constant name")]
    Invalid(String),
}

/// Named constants visible to an expression. `pi` is predeclared.
#[derive(Debug, Clone, Default)]
pub struct Constants {
    map: BTreeMap<String, f64>,
}

impl Constants {
    /// Just the predeclared `pi`.
    pub fn standard() -> Self {
        let mut c = Constants::default();
        c.map.insert("pi".into(), std::f64::consts::PI);
        c
    }

    pub fn define(&mut self, name: &str, value: f64) -> Result<(), ConstantsError> {
        if name == "t" || name == "pi" || Func::from_name(name).is_some() {
            return Err(ConstantsError::Reserved(name.into()));
        }
        let valid = !name.is_empty()
            && name.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
            && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !valid {
            return Err(ConstantsError::Invalid(name.into()));
        }
        self.map.insert(name.into(), value);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.map.get(name).copied()
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Eof,
}

impl Token {
    fn describe(&self) -> String {
        match self {
            Token::Num(v) => format!("number {v}"),
            Token::Ident(s) => format!("identifier `{s}`"),
            Token::Plus => "'+'".into(),
            Token::Minus => "'-'".into(),
            Token::Star => "'*'".into(),
            Token::Slash => "'/'".into(),
            Token::Caret => "'^'".into(),
            Token::LParen => "'('".into(),
            Token::RParen => "')'".into(),
            Token::Eof => "end of input".into(),
        }
    }
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src: src.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    /// Next token plus its starting byte offset.
    fn next(&mut self) -> Result<(Token, usize), ParseError> {
        self.skip_ws();
        let start = self.pos;
        if self.pos >= self.src.len() {
            return Ok((Token::Eof, start));
        }
        let b = self.src[self.pos];
        let simple = match b {
            b'+' => Some(Token::Plus),
            b'-' => Some(Token::Minus),
            b'*' => Some(Token::Star),
            b'/' => Some(Token::Slash),
            b'^' => Some(Token::Caret),
            b'(' => Some(Token::LParen),
            b')' => Some(Token::RParen),
            _ => None,
        };
        if let Some(tok) = simple {
            self.pos += 1;
            return Ok((tok, start));
        }
        if b.is_ascii_digit() {
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if self.pos < self.src.len() && self.src[self.pos] == b'.' {
                self.pos += 1;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
            }
            if self.pos < self.src.len() && (self.src[self.pos] | 0x20) == b'e' {
                let mark = self.pos;
                self.pos += 1;
                if self.pos < self.src.len() && (self.src[self.pos] == b'+' || self.src[self.pos] == b'-')
                {
                    self.pos += 1;
                }
                if self.pos >= self.src.len() || !self.src[self.pos].is_ascii_digit() {
                    return Err(ParseError::Syntax {
                        offset: mark,
                        found: "incomplete exponent".into(),
                        expected: vec!["digit"],
                    });
                }
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
            }
            let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
            let value: f64 = text.parse().map_err(|_| ParseError::Syntax {
                offset: start,
                found: format!("unparseable number `{text}`"),
                expected: vec!["number"],
            })?;
            return Ok((Token::Num(value), start));
        }
        if b.is_ascii_alphabetic() || b == b'_' {
            while self.pos < self.src.len()
                && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
            {
                self.pos += 1;
            }
            let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
            return Ok((Token::Ident(text.into()), start));
        }
        Err(ParseError::Syntax {
            offset: start,
            found: format!("character {:?}", char::from(b)),
            expected: vec!["number", "identifier", "operator", "'('", "')'"],
        })
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    lookahead: (Token, usize),
}

const PRIMARY_EXPECTED: [&str; 4] = ["number", "identifier", "'('", "'-'"];

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Result<Self, ParseError> {
        let mut lexer = Lexer::new(src);
        let lookahead = lexer.next()?;
        Ok(Parser { lexer, lookahead })
    }

    fn peek(&self) -> &Token {
        &self.lookahead.0
    }

    fn peek_offset(&self) -> usize {
        self.lookahead.1
    }

    fn advance(&mut self) -> Result<(Token, usize), ParseError> {
        let next = self.lexer.next()?;
        Ok(std::mem::replace(&mut self.lookahead, next))
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Token::Plus => BinOp::Add,
                Token::Minus => BinOp::Sub,
                _ => break,
            };
            self.advance()?;
            let rhs = self.term()?;
            lhs = binary(op, lhs, rhs);
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            let op = match self.peek() {
                Token::Star => BinOp::Mul,
                Token::Slash => BinOp::Div,
                _ => break,
            };
            self.advance()?;
            let rhs = self.factor()?;
            lhs = binary(op, lhs, rhs);
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let base = self.unary()?;
        if matches!(self.peek(), Token::Caret) {
            self.advance()?;
            let exponent = self.factor()?;
            return Ok(binary(BinOp::Pow, base, exponent));
        }
        Ok(base)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if matches!(self.peek(), Token::Minus) {
            let (_, start) = self.advance()?;
            let inner = self.unary()?;
            let span = (start, inner.span.1);
            return Ok(Expr {
                kind: ExprKind::Neg(Box::new(inner)),
                span,
            });
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        match self.peek().clone() {
            Token::Num(value) => {
                let (_, start) = self.advance()?;
                Ok(Expr {
                    kind: ExprKind::Number(value),
                    span: (start, self.peek_offset()),
                })
            }
            Token::Ident(name) => {
                let (_, start) = self.advance()?;
                if matches!(self.peek(), Token::LParen) {
                    let func = Func::from_name(&name).ok_or(ParseError::UnknownFunction {
                        name: name.clone(),
                        offset: start,
                    })?;
                    self.advance()?; // '('
                    let arg = self.expr()?;
                    let close = self.expect_rparen()?;
                    return Ok(Expr {
                        kind: ExprKind::Call(func, Box::new(arg)),
                        span: (start, close + 1),
                    });
                }
                let end = start + name.len();
                let kind = if name == "t" {
                    ExprKind::Var
                } else {
                    ExprKind::Constant(name)
                };
                Ok(Expr {
                    kind,
                    span: (start, end),
                })
            }
            Token::LParen => {
                let (_, start) = self.advance()?;
                let mut inner = self.expr()?;
                let close = self.expect_rparen()?;
                inner.span = (start, close + 1);
                Ok(inner)
            }
            other => Err(ParseError::Syntax {
                offset: self.peek_offset(),
                found: other.describe(),
                expected: PRIMARY_EXPECTED.to_vec(),
            }),
        }
    }

    fn expect_rparen(&mut self) -> Result<usize, ParseError> {
        if matches!(self.peek(), Token::RParen) {
            let (_, offset) = self.advance()?;
            Ok(offset)
        } else {
            Err(ParseError::Syntax {
                offset: self.peek_offset(),
                found: self.peek().describe(),
                expected: vec!["')'", "operator"],
            })
        }
    }
}

fn binary(op: BinOp, lhs: Expr, rhs: Expr) -> Expr {
    let span = (lhs.span.0, rhs.span.1);
    Expr {
        kind: ExprKind::Binary(op, Box::new(lhs), Box::new(rhs)),
        span,
    }
}

/// Parse a coefficient expression. Unknown function names fail here;
/// constant names are checked against a [`Constants`] set separately.
pub fn parse_expression(text: &str) -> Result<Expr, ParseError> {
    let mut parser = Parser::new(text)?;
    let expr = parser.expr()?;
    if !matches!(parser.peek(), Token::Eof) {
        return Err(ParseError::Syntax {
            offset: parser.peek_offset(),
            found: parser.peek().describe(),
            expected: vec!["operator", "end of input"],
        });
    }
    Ok(expr)
}

impl Expr {
    /// Evaluate in jet arithmetic at `t`, with derivative tracking through
    /// every operation. Domain failures carry the span of the offending
    /// subexpression.
    pub fn eval(&self, t: Jet2, constants: &Constants) -> Result<Jet2, EvalError> {
        match &self.kind {
            ExprKind::Number(v) => Ok(Jet2::constant(*v)),
            ExprKind::Var => Ok(t),
            ExprKind::Constant(name) => constants
                .get(name)
                .map(Jet2::constant)
                .ok_or_else(|| EvalError::UnknownConstant {
                    name: name.clone(),
                    span: self.span,
                }),
            ExprKind::Neg(inner) => Ok(-inner.eval(t, constants)?),
            ExprKind::Binary(op, l, r) => {
                let lv = l.eval(t, constants)?;
                let rv = r.eval(t, constants)?;
                let domain = |source| EvalError::Domain {
                    span: self.span,
                    source,
                };
                match op {
                    BinOp::Add => Ok(lv + rv),
                    BinOp::Sub => Ok(lv - rv),
                    BinOp::Mul => Ok(lv * rv),
                    BinOp::Div => lv.try_div(rv).map_err(domain),
                    BinOp::Pow => lv.try_pow(rv).map_err(domain),
                }
            }
            ExprKind::Call(func, arg) => {
                let av = arg.eval(t, constants)?;
                match func {
                    Func::Sqrt => av.try_sqrt().map_err(|source| EvalError::Domain {
                        span: self.span,
                        source,
                    }),
                    Func::Sin => Ok(av.sin()),
                    Func::Cos => Ok(av.cos()),
                }
            }
        }
    }

    /// Verify every named constant is declared, without evaluating.
    pub fn check_identifiers(&self, constants: &Constants) -> Result<(), EvalError> {
        match &self.kind {
            ExprKind::Number(_) | ExprKind::Var => Ok(()),
            ExprKind::Constant(name) => {
                if constants.get(name).is_some() {
                    Ok(())
                } else {
                    Err(EvalError::UnknownConstant {
                        name: name.clone(),
                        span: self.span,
                    })
                }
            }
            ExprKind::Neg(inner) => inner.check_identifiers(constants),
            ExprKind::Binary(_, l, r) => {
                l.check_identifiers(constants)?;
                r.check_identifiers(constants)
            }
            ExprKind::Call(_, arg) => arg.check_identifiers(constants),
        }
    }

    fn precedence(&self) -> u8 {
        match &self.kind {
            ExprKind::Binary(BinOp::Add | BinOp::Sub, ..) => 1,
            ExprKind::Binary(BinOp::Mul | BinOp::Div, ..) => 2,
            ExprKind::Binary(BinOp::Pow, ..) => 3,
            ExprKind::Neg(_) => 4,
            _ => 5,
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let child = |f: &mut fmt::Formatter<'_>, e: &Expr, parens: bool| -> fmt::Result {
            if parens {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        };
        match &self.kind {
            ExprKind::Number(v) => write!(f, "{v}"),
            ExprKind::Var => f.write_str("t"),
            ExprKind::Constant(name) => f.write_str(name),
            ExprKind::Neg(inner) => {
                f.write_str("-")?;
                // `- unary` only nests negations and primaries directly
                child(f, inner, inner.precedence() <= 3)
            }
            ExprKind::Binary(op, l, r) => {
                let prec = self.precedence();
                let symbol = match op {
                    BinOp::Add => "+",
                    BinOp::Sub => "-",
                    BinOp::Mul => "*",
                    BinOp::Div => "/",
                    BinOp::Pow => "^",
                };
                match op {
                    // ^ is right-associative and binds below unary minus
                    BinOp::Pow => {
                        child(f, l, l.precedence() <= prec)?;
                        f.write_str(symbol)?;
                        child(f, r, r.precedence() < prec)
                    }
                    _ => {
                        child(f, l, l.precedence() < prec)?;
                        f.write_str(symbol)?;
                        child(f, r, r.precedence() <= prec)
                    }
                }
            }
            ExprKind::Call(func, arg) => write!(f, "{}({arg})", func.name()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Expr {
        parse_expression(text).unwrap()
    }

    #[test]
    fn parses_and_evaluates_scaled_sqrt() {
        let e = parse("2*sqrt(t)");
        assert!(matches!(
            &e.kind,
            ExprKind::Binary(BinOp::Mul, l, r)
                if matches!(l.kind, ExprKind::Number(_))
                    && matches!(r.kind, ExprKind::Call(Func::Sqrt, _))
        ));
        let v = e.eval(Jet2::variable(4.0), &Constants::standard()).unwrap();
        assert_eq!(v.val, 4.0);
        assert_eq!(v.d1, 0.5);
    }

    #[test]
    fn caret_is_right_associative() {
        let e = parse("t^2^3");
        // t^(2^3) = t^8
        let v = e.eval(Jet2::variable(2.0), &Constants::standard()).unwrap();
        assert_eq!(v.val, 256.0);
        assert_eq!(v.d1, 8.0 * 128.0);
    }

    #[test]
    fn double_star_is_a_syntax_error_at_offset_two() {
        match parse_expression("2**t") {
            Err(ParseError::Syntax { offset, .. }) => assert_eq!(offset, 2),
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn square_of_variable_jet() {
        let v = parse("t^2")
            .eval(Jet2::variable(3.0), &Constants::standard())
            .unwrap();
        assert_eq!(v, Jet2::new(9.0, 6.0, 2.0));
    }

    #[test]
    fn cosine_kills_the_constant_at_half_pi() {
        let mut consts = Constants::standard();
        consts.define("aa", 0.7).unwrap();
        let v = parse("1 - aa^2*cos(t)^2")
            .eval(Jet2::variable(std::f64::consts::FRAC_PI_2), &consts)
            .unwrap();
        assert_eq!(v.val, 1.0);
    }

    #[test]
    fn page_style_profile_expression_at_half_pi() {
        let mut consts = Constants::standard();
        consts.define("aa", 0.3).unwrap();
        let e = parse("4/(3 + 6*aa^2 - aa^4)*(1 - aa^2*cos(t)^2)");
        let v = e
            .eval(Jet2::variable(std::f64::consts::FRAC_PI_2), &consts)
            .unwrap();
        // cos(pi/2) kills the second factor, leaving the plain constant
        let expect = 4.0 / (3.0 + 6.0 * 0.09 - 0.3_f64.powi(4));
        assert!((v.val - expect).abs() < 1e-15);
    }

    #[test]
    fn unary_minus_binds_inside_the_power() {
        // per the grammar, -t^2 is (-t)^2
        let v = parse("-t^2")
            .eval(Jet2::variable(3.0), &Constants::standard())
            .unwrap();
        assert_eq!(v.val, 9.0);
        let w = parse("t^-2")
            .eval(Jet2::variable(2.0), &Constants::standard())
            .unwrap();
        assert_eq!(w.val, 0.25);
    }

    #[test]
    fn unknown_function_is_named() {
        match parse_expression("foo(t)") {
            Err(ParseError::UnknownFunction { name, offset }) => {
                assert_eq!(name, "foo");
                assert_eq!(offset, 0);
            }
            other => panic!("expected unknown function, got {other:?}"),
        }
    }

    #[test]
    fn unknown_constant_is_named_with_span() {
        let e = parse("2*q + t");
        match e.eval(Jet2::variable(1.0), &Constants::standard()) {
            Err(EvalError::UnknownConstant { name, span }) => {
                assert_eq!(name, "q");
                assert_eq!(span, (2, 3));
            }
            other => panic!("expected unknown constant, got {other:?}"),
        }
        assert!(e.check_identifiers(&Constants::standard()).is_err());
    }

    #[test]
    fn division_by_zero_carries_the_offending_span() {
        let e = parse("1 + 1/(t-2)");
        match e.eval(Jet2::variable(2.0), &Constants::standard()) {
            Err(EvalError::Domain { span, source }) => {
                assert_eq!(span, (4, 11));
                assert!(matches!(source, JetError::DivisionByZero { .. }));
            }
            other => panic!("expected domain error, got {other:?}"),
        }
    }

    #[test]
    fn sqrt_domain_error_at_evaluation_time() {
        let e = parse("sqrt(t - 5)");
        assert!(e.eval(Jet2::variable(1.0), &Constants::standard()).is_err());
        assert!(e.eval(Jet2::variable(9.0), &Constants::standard()).is_ok());
    }

    #[test]
    fn reserved_constant_names_rejected() {
        let mut c = Constants::standard();
        assert!(c.define("t", 1.0).is_err());
        assert!(c.define("pi", 3.0).is_err());
        assert!(c.define("sqrt", 1.0).is_err());
        assert!(c.define("2bad", 1.0).is_err());
        assert!(c.define("a_1", 1.0).is_ok());
    }

    #[test]
    fn printer_round_trips_fixed_cases() {
        for text in [
            "t^2^3",
            "-t^2",
            "t^-2",
            "1-aa^2*cos(t)^2",
            "2*sqrt(t)/(1+t)",
            "-(t^2)",
            "--t",
            "(1+t)*(1-t)",
            "t-(1-t)",
        ] {
            let e = parse(text);
            let printed = e.to_string();
            let back = parse(&printed);
            assert_eq!(e, back, "round trip failed: {text} -> {printed}");
        }
    }
}
