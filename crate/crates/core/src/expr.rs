//! Surface syntax for operator expressions.
//!
//! Grammar: `expr := ['-'] term (('+'|'-') term)*`,
//! `term := factor (('*'|'/') factor)*`, `factor := atom postfix*` with the
//! postfix apostrophe as adjoint, and atoms being generators, numbers, `r2`,
//! `i`, compact basis literals `V+(D(d,j),D(d',j'))`, or parenthesised
//! expressions. Division is defined when the divisor evaluates to a nonzero
//! scalar, which subsumes scalar literals such as `(1+i)/r2`.

use crate::algebra::{generators, AlgebraElement};
use crate::pisometry::BasisIsometry;
use crate::scalar::Scalar;
use num_bigint::BigInt;
use num_rational::BigRational;
use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown symbol {name:?} at offset {offset}")]
    UnknownSymbol { offset: usize, name: String },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("division by an element that is not a nonzero scalar")]
    DivisorNotScalar,
    #[error("division by zero")]
    DivisionByZero,
    #[error("generator {0} has no binding in this substitution")]
    UnmappedGenerator(&'static str),
    #[error("depth ceiling exceeded: term depth {depth} > ceiling {ceiling}")]
    DepthCeiling { depth: u32, ceiling: u32 },
}

/// The named generator symbols of the surface syntax.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Generator {
    S1,
    S2,
    W,
    U,
    T,
    V,
    B1,
    B2,
    /// The identity element.
    I0,
    /// The zero element.
    Z0,
}

impl Generator {
    pub fn name(self) -> &'static str {
        match self {
            Generator::S1 => "S1",
            Generator::S2 => "S2",
            Generator::W => "W",
            Generator::U => "U",
            Generator::T => "T",
            Generator::V => "V",
            Generator::B1 => "B1",
            Generator::B2 => "B2",
            Generator::I0 => "I0",
            Generator::Z0 => "Z0",
        }
    }

    pub fn from_name(name: &str) -> Option<Generator> {
        Some(match name {
            "S1" => Generator::S1,
            "S2" => Generator::S2,
            "W" => Generator::W,
            "U" => Generator::U,
            "T" => Generator::T,
            "V" => Generator::V,
            "B1" => Generator::B1,
            "B2" => Generator::B2,
            "I0" => Generator::I0,
            "Z0" => Generator::Z0,
            _ => return None,
        })
    }

    /// The default binding in the dyadic representation.
    pub fn element(self) -> AlgebraElement {
        match self {
            Generator::S1 => generators::s1(),
            Generator::S2 => generators::s2(),
            Generator::W => generators::w(),
            Generator::U => generators::u(),
            Generator::T => generators::t(),
            Generator::V => generators::v(),
            Generator::B1 => generators::b1(),
            Generator::B2 => generators::b2(),
            Generator::I0 => AlgebraElement::one(),
            Generator::Z0 => AlgebraElement::zero(),
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A parsed operator expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Int(BigInt),
    Sqrt2,
    ImagUnit,
    Gen(Generator),
    Basis(BasisIsometry),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Adjoint(Box<Expr>),
}

// ---------------------------------------------------------------------------
// Lexer

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Plus,
    Minus,
    Star,
    Slash,
    Prime,
    LParen,
    RParen,
    Int(BigInt),
    Ident(String),
    Basis(BasisIsometry),
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    offset: usize,
}

/// A basis literal starts exactly with `V+(D(` or `V-(D(`; anything else
/// beginning with `V` is the generator.
fn try_lex_basis(input: &str, start: usize) -> Option<Result<(BasisIsometry, usize), ParseError>> {
    let bytes = input.as_bytes();
    let tail = &bytes[start..];
    if tail.len() < 5 || tail[0] != b'V' {
        return None;
    }
    if tail[1] != b'+' && tail[1] != b'-' {
        return None;
    }
    if &tail[2..5] != b"(D(" {
        return None;
    }
    // find the paren that closes the one at offset start+2
    let mut depth = 0usize;
    for (k, &c) in bytes.iter().enumerate().skip(start + 2) {
        match c {
            b'(' => depth += 1,
            b')' => {
                depth -= 1;
                if depth == 0 {
                    let text = &input[start..=k];
                    return Some(match text.parse::<BasisIsometry>() {
                        Ok(key) => Ok((key, k + 1)),
                        Err(message) => Err(ParseError::Syntax {
                            offset: start,
                            message,
                        }),
                    });
                }
            }
            _ => {}
        }
    }
    Some(Err(ParseError::Syntax {
        offset: start,
        message: "unterminated basis literal".to_string(),
    }))
}

fn lex(input: &str) -> Result<Vec<Spanned>, ParseError> {
    let bytes = input.as_bytes();
    let mut out = Vec::new();
    let mut k = 0;
    while k < bytes.len() {
        let c = bytes[k];
        if c.is_ascii_whitespace() {
            k += 1;
            continue;
        }
        let simple = match c {
            b'+' => Some(Tok::Plus),
            b'-' => Some(Tok::Minus),
            b'*' => Some(Tok::Star),
            b'/' => Some(Tok::Slash),
            b'\'' => Some(Tok::Prime),
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(tok) = simple {
            out.push(Spanned { tok, offset: k });
            k += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = k;
            while k < bytes.len() && bytes[k].is_ascii_digit() {
                k += 1;
            }
            let n: BigInt = input[start..k].parse().expect("digits parse");
            out.push(Spanned {
                tok: Tok::Int(n),
                offset: start,
            });
            continue;
        }
        if c.is_ascii_alphabetic() {
            if let Some(result) = try_lex_basis(input, k) {
                let (key, end) = result?;
                out.push(Spanned {
                    tok: Tok::Basis(key),
                    offset: k,
                });
                k = end;
                continue;
            }
            let start = k;
            while k < bytes.len() && bytes[k].is_ascii_alphanumeric() {
                k += 1;
            }
            out.push(Spanned {
                tok: Tok::Ident(input[start..k].to_string()),
                offset: start,
            });
            continue;
        }
        return Err(ParseError::Syntax {
            offset: k,
            message: format!("unexpected character {:?}", c as char),
        });
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Parser

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn offset(&self) -> usize {
        self.toks
            .get(self.pos)
            .map(|s| s.offset)
            .unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|s| s.tok.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut acc = if self.peek() == Some(&Tok::Minus) {
            self.bump();
            Expr::Neg(Box::new(self.term()?))
        } else {
            self.term()?
        };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = Expr::Add(Box::new(acc), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = Expr::Sub(Box::new(acc), Box::new(self.term()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    acc = Expr::Mul(Box::new(acc), Box::new(self.factor()?));
                }
                Some(Tok::Slash) => {
                    self.bump();
                    acc = Expr::Div(Box::new(acc), Box::new(self.factor()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.atom()?;
        while self.peek() == Some(&Tok::Prime) {
            self.bump();
            acc = Expr::Adjoint(Box::new(acc));
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let offset = self.offset();
        match self.bump() {
            Some(Tok::Int(n)) => Ok(Expr::Int(n)),
            Some(Tok::Basis(key)) => Ok(Expr::Basis(key)),
            Some(Tok::Ident(name)) => match name.as_str() {
                "r2" => Ok(Expr::Sqrt2),
                "i" => Ok(Expr::ImagUnit),
                _ => Generator::from_name(&name)
                    .map(Expr::Gen)
                    .ok_or(ParseError::UnknownSymbol { offset, name }),
            },
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                if self.peek() == Some(&Tok::RParen) {
                    self.bump();
                    Ok(inner)
                } else {
                    Err(ParseError::Syntax {
                        offset: self.offset(),
                        message: "expected ')'".to_string(),
                    })
                }
            }
            _ => Err(ParseError::Syntax {
                offset,
                message: "expected a generator, number, basis literal or '('".to_string(),
            }),
        }
    }
}

/// Parse an operator expression.
pub fn parse(input: &str) -> Result<Expr, ParseError> {
    let toks = lex(input)?;
    let mut parser = Parser {
        toks,
        pos: 0,
        end: input.len(),
    };
    let expr = parser.expr()?;
    if parser.peek().is_some() {
        return Err(ParseError::Syntax {
            offset: parser.offset(),
            message: "trailing input".to_string(),
        });
    }
    Ok(expr)
}

fn eval_inner(
    expr: &Expr,
    bind: &dyn Fn(Generator) -> Result<AlgebraElement, EvalError>,
    ceiling: u32,
) -> Result<AlgebraElement, EvalError> {
    let guard = |a: AlgebraElement| {
        let depth = a.max_depth();
        if depth > ceiling {
            Err(EvalError::DepthCeiling { depth, ceiling })
        } else {
            Ok(a)
        }
    };
    match expr {
        Expr::Int(n) => Ok(AlgebraElement::scalar(Scalar::new(
            BigRational::from_integer(n.clone()),
            BigRational::from_integer(0.into()),
            BigRational::from_integer(0.into()),
            BigRational::from_integer(0.into()),
        ))),
        Expr::Sqrt2 => Ok(AlgebraElement::scalar(Scalar::sqrt2())),
        Expr::ImagUnit => Ok(AlgebraElement::scalar(Scalar::i())),
        Expr::Gen(g) => bind(*g),
        Expr::Basis(key) => Ok(AlgebraElement::basis(*key)),
        Expr::Neg(e) => Ok(-&eval_inner(e, bind, ceiling)?),
        Expr::Add(a, b) => Ok(&eval_inner(a, bind, ceiling)? + &eval_inner(b, bind, ceiling)?),
        Expr::Sub(a, b) => Ok(&eval_inner(a, bind, ceiling)? - &eval_inner(b, bind, ceiling)?),
        Expr::Mul(a, b) => guard(&eval_inner(a, bind, ceiling)? * &eval_inner(b, bind, ceiling)?),
        Expr::Div(a, b) => {
            let num = eval_inner(a, bind, ceiling)?;
            let den = eval_inner(b, bind, ceiling)?;
            let s = den.as_scalar().ok_or(EvalError::DivisorNotScalar)?;
            let inv = s.inv().map_err(|_| EvalError::DivisionByZero)?;
            Ok(num.scale(&inv))
        }
        Expr::Adjoint(e) => Ok(eval_inner(e, bind, ceiling)?.adjoint()),
    }
}

/// Evaluate with the default generator bindings and depth ceiling.
pub fn eval(expr: &Expr) -> Result<AlgebraElement, EvalError> {
    eval_with_ceiling(expr, crate::DEFAULT_DEPTH_CEILING)
}

pub fn eval_with_ceiling(expr: &Expr, ceiling: u32) -> Result<AlgebraElement, EvalError> {
    eval_inner(expr, &|g| Ok(g.element()), ceiling)
}

/// Evaluate with generators replaced by the given elements; a generator
/// occurring in the expression but not in the mapping is an error. This is a
/// *-homomorphism on syntax trees.
pub fn substitute(
    expr: &Expr,
    mapping: &HashMap<Generator, AlgebraElement>,
) -> Result<AlgebraElement, EvalError> {
    eval_inner(
        expr,
        &|g| {
            mapping
                .get(&g)
                .cloned()
                .ok_or(EvalError::UnmappedGenerator(g.name()))
        },
        crate::DEFAULT_DEPTH_CEILING,
    )
}

/// Render an element as a parseable expression: coefficients in parentheses
/// against compact basis literals.
pub fn to_expr_string(a: &AlgebraElement) -> String {
    if a.is_zero() {
        return "0".to_string();
    }
    a.terms()
        .map(|(k, c)| format!("({c})*{k}"))
        .collect::<Vec<_>>()
        .join("+")
}
