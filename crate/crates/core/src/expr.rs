//! Concrete syntax for superfunctions, forms and vector fields.
//!
//! ```text
//! expr   := ['+' | '-'] term (('+' | '-') term)*
//! term   := power (('*' | '^' | '/') power)*
//! power  := factor ['**' integer]
//! factor := integer ['/' integer] | param | coord | 'd'coord | 'del_'coord
//!         | ('cos' | 'sin') '(' [integer '*'] coord ')' | '(' expr ')'
//! ```
//!
//! `*` multiplies by a function, `^` is the wedge product, `del_x` is the
//! coordinate derivation `d/dx`. Circle coordinates only enter functions
//! through `cos`/`sin`. Every printer in this module emits text this parser
//! accepts.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::fmt_rational;
use crate::scalar::Scalar;
use crate::superalgebra::{BaseFactor, Coord, Signature, Superfunction};
use crate::supercalculus::{SuperForm, SuperVectorField};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TrigKind {
    Cos,
    Sin,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Ast {
    Rational(BigRational),
    Param(String),
    Coordinate(String),
    Differential(String),
    Derivation(String),
    Trig {
        kind: TrigKind,
        multiple: u32,
        coord: String,
    },
    Neg(Box<Ast>),
    Add(Box<Ast>, Box<Ast>),
    Sub(Box<Ast>, Box<Ast>),
    Mul(Box<Ast>, Box<Ast>),
    Wedge(Box<Ast>, Box<Ast>),
    Div(Box<Ast>, Box<Ast>),
    Pow(Box<Ast>, u32),
}

// ---------------------------------------------------------------------------
// lexer

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    StarStar,
    Caret,
    Slash,
    LParen,
    RParen,
    End,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(src: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut column) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let start = (line, column);
        let push = |out: &mut Vec<Token>, tok| {
            out.push(Token {
                tok,
                line: start.0,
                column: start.1,
            })
        };
        if c == '\n' {
            line += 1;
            column = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            column += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let mut j = i;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            let digits: String = chars[i..j].iter().collect();
            push(&mut out, Tok::Int(digits.parse().expect("digits")));
            column += j - i;
            i = j;
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut j = i;
            while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                j += 1;
            }
            push(&mut out, Tok::Ident(chars[i..j].iter().collect()));
            column += j - i;
            i = j;
            continue;
        }
        let (tok, len) = match c {
            '+' => (Tok::Plus, 1),
            '-' => (Tok::Minus, 1),
            '*' if chars.get(i + 1) == Some(&'*') => (Tok::StarStar, 2),
            '*' => (Tok::Star, 1),
            '^' => (Tok::Caret, 1),
            '/' => (Tok::Slash, 1),
            '(' => (Tok::LParen, 1),
            ')' => (Tok::RParen, 1),
            _ => {
                return Err(Error::Syntax {
                    line,
                    column,
                    expected: format!("an operator, number or identifier (found `{c}`)"),
                })
            }
        };
        push(&mut out, tok);
        i += len;
        column += len;
    }
    out.push(Token {
        tok: Tok::End,
        line,
        column,
    });
    Ok(out)
}

// ---------------------------------------------------------------------------
// parser

struct Parser<'a> {
    toks: Vec<Token>,
    pos: usize,
    sig: &'a Signature,
}

const FACTOR_START: &str = "one of: number, identifier, cos, sin, '('";

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn here(&self) -> (usize, usize) {
        let t = &self.toks[self.pos];
        (t.line, t.column)
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expected<T>(&self, what: &str) -> Result<T> {
        let (line, column) = self.here();
        Err(Error::Syntax {
            line,
            column,
            expected: what.to_string(),
        })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.expected(what)
        }
    }

    fn expr(&mut self) -> Result<Ast> {
        let mut lhs = match self.peek() {
            Tok::Minus => {
                self.bump();
                Ast::Neg(Box::new(self.term()?))
            }
            Tok::Plus => {
                self.bump();
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = Ast::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Ast::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Ast> {
        let mut lhs = self.power()?;
        loop {
            let op = match self.peek() {
                Tok::Star => Ast::Mul as fn(Box<Ast>, Box<Ast>) -> Ast,
                Tok::Caret => Ast::Wedge,
                Tok::Slash => Ast::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            lhs = op(Box::new(lhs), Box::new(self.power()?));
        }
    }

    fn power(&mut self) -> Result<Ast> {
        let base = self.factor()?;
        if *self.peek() == Tok::StarStar {
            self.bump();
            let Tok::Int(n) = self.peek().clone() else {
                return self.expected("an integer exponent");
            };
            self.bump();
            let e: u32 = n.try_into().map_err(|_| {
                let (line, column) = self.here();
                Error::Syntax {
                    line,
                    column,
                    expected: "a small exponent".into(),
                }
            })?;
            return Ok(Ast::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn factor(&mut self) -> Result<Ast> {
        let start = self.pos;
        let token = self.bump();
        match token.tok {
            Tok::Int(n) => {
                // `p/q` with two literals is a rational literal
                if *self.peek() == Tok::Slash {
                    if let Tok::Int(d) = self.toks[self.pos + 1].tok.clone() {
                        if d.is_zero() {
                            return self.expected("a nonzero denominator");
                        }
                        self.bump();
                        self.bump();
                        return Ok(Ast::Rational(BigRational::new(n, d)));
                    }
                }
                Ok(Ast::Rational(BigRational::from_integer(n)))
            }
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(e)
            }
            Tok::Ident(name) if (name == "cos" || name == "sin") && *self.peek() == Tok::LParen => {
                self.bump();
                let mut multiple = 1u32;
                if let Tok::Int(k) = self.peek().clone() {
                    self.bump();
                    self.expect(Tok::Star, "'*' after the frequency")?;
                    multiple = k.try_into().map_err(|_| {
                        let (line, column) = self.here();
                        Error::Syntax {
                            line,
                            column,
                            expected: "a small frequency".into(),
                        }
                    })?;
                }
                let (line, column) = self.here();
                let Tok::Ident(coord) = self.bump().tok else {
                    return Err(Error::Syntax {
                        line,
                        column,
                        expected: "a coordinate name".into(),
                    });
                };
                if !matches!(self.sig.coord(&coord), Ok(Coord::Even(_))) {
                    return Err(Error::UnknownSymbol {
                        name: coord,
                        line,
                        column,
                    });
                }
                self.expect(Tok::RParen, "')'")?;
                Ok(Ast::Trig {
                    kind: if name == "cos" { TrigKind::Cos } else { TrigKind::Sin },
                    multiple,
                    coord,
                })
            }
            Tok::Ident(name) => self.resolve(name, token.line, token.column),
            _ => {
                self.pos = start;
                self.expected(FACTOR_START)
            }
        }
    }

    fn resolve(&self, name: String, line: usize, column: usize) -> Result<Ast> {
        if self.sig.coord(&name).is_ok() {
            return Ok(Ast::Coordinate(name));
        }
        if self.sig.param_index(&name).is_some() {
            return Ok(Ast::Param(name));
        }
        if let Some(rest) = name.strip_prefix("del_") {
            if self.sig.coord(rest).is_ok() {
                return Ok(Ast::Derivation(rest.to_string()));
            }
        }
        if let Some(rest) = name.strip_prefix('d') {
            if self.sig.coord(rest).is_ok() {
                return Ok(Ast::Differential(rest.to_string()));
            }
        }
        Err(Error::UnknownSymbol { name, line, column })
    }
}

/// Parses `src` against the symbols of `sig`.
pub fn parse_expr(src: &str, sig: &Signature) -> Result<Ast> {
    let mut p = Parser {
        toks: lex(src)?,
        pos: 0,
        sig,
    };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return p.expected("an operator or end of input");
    }
    Ok(e)
}

// ---------------------------------------------------------------------------
// AST printing

impl Ast {
    fn precedence(&self) -> u8 {
        match self {
            Ast::Add(..) | Ast::Sub(..) | Ast::Neg(_) => 0,
            Ast::Mul(..) | Ast::Wedge(..) | Ast::Div(..) => 1,
            Ast::Pow(..) => 2,
            Ast::Rational(r) if !r.is_integer() => 1,
            _ => 3,
        }
    }

    fn write(&self, out: &mut String) {
        let wrap = |a: &Ast, min: u8, out: &mut String| {
            if a.precedence() < min {
                out.push('(');
                a.write(out);
                out.push(')');
            } else {
                a.write(out);
            }
        };
        match self {
            Ast::Rational(r) => {
                if r.is_negative() {
                    out.push('(');
                    out.push_str(&fmt_rational(r));
                    out.push(')');
                } else {
                    out.push_str(&fmt_rational(r));
                }
            }
            Ast::Param(s) | Ast::Coordinate(s) => out.push_str(s),
            Ast::Differential(s) => {
                out.push('d');
                out.push_str(s);
            }
            Ast::Derivation(s) => {
                out.push_str("del_");
                out.push_str(s);
            }
            Ast::Trig {
                kind,
                multiple,
                coord,
            } => {
                out.push_str(match kind {
                    TrigKind::Cos => "cos(",
                    TrigKind::Sin => "sin(",
                });
                if *multiple != 1 {
                    out.push_str(&format!("{multiple}*"));
                }
                out.push_str(coord);
                out.push(')');
            }
            Ast::Neg(a) => {
                out.push('-');
                wrap(a, 1, out);
            }
            Ast::Add(a, b) | Ast::Sub(a, b) => {
                a.write(out);
                out.push_str(if matches!(self, Ast::Add(..)) { " + " } else { " - " });
                wrap(b, 1, out);
            }
            Ast::Mul(a, b) | Ast::Wedge(a, b) | Ast::Div(a, b) => {
                wrap(a, 1, out);
                out.push(match self {
                    Ast::Mul(..) => '*',
                    Ast::Wedge(..) => '^',
                    _ => '/',
                });
                if let Ast::Rational(r) = b.as_ref() {
                    if !r.is_integer() {
                        out.push('(');
                        b.write(out);
                        out.push(')');
                        return;
                    }
                }
                wrap(b, 2, out);
            }
            Ast::Pow(a, e) => {
                wrap(a, 3, out);
                out.push_str(&format!("**{e}"));
            }
        }
    }
}

impl fmt::Display for Ast {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.write(&mut s);
        f.write_str(&s)
    }
}

// ---------------------------------------------------------------------------
// evaluation

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Function(Superfunction),
    Form(SuperForm),
    Field(SuperVectorField),
}

impl Value {
    fn kind(&self) -> &'static str {
        match self {
            Value::Function(_) => "function",
            Value::Form(_) => "form",
            Value::Field(_) => "vector field",
        }
    }

    pub fn into_form(self) -> Result<SuperForm> {
        match self {
            Value::Function(f) => Ok(SuperForm::from_function(f)),
            Value::Form(w) => Ok(w),
            Value::Field(_) => Err(Error::Type("expected a form, found a vector field".into())),
        }
    }

    pub fn into_function(self) -> Result<Superfunction> {
        match self {
            Value::Function(f) => Ok(f),
            Value::Form(w) => {
                if w.terms().all(|(m, _)| m.degree() == 0) {
                    Ok(w.coefficient(&crate::supercalculus::FormMonomial::one()))
                } else {
                    Err(Error::Type("expected a function, found a form".into()))
                }
            }
            Value::Field(_) => Err(Error::Type("expected a function, found a vector field".into())),
        }
    }

    pub fn into_field(self) -> Result<SuperVectorField> {
        match self {
            Value::Field(x) => Ok(x),
            Value::Function(f) if f.is_zero() => Ok(SuperVectorField::zero(f.signature())),
            other => Err(Error::Type(format!("expected a vector field, found a {}", other.kind()))),
        }
    }
}

pub fn eval(ast: &Ast, sig: &Signature) -> Result<Value> {
    let f = |v: Superfunction| Ok(Value::Function(v));
    match ast {
        Ast::Rational(r) => f(Superfunction::constant(sig, Scalar::from_rational(r.clone()))),
        Ast::Param(p) => f(Superfunction::param(sig, p)?),
        Ast::Coordinate(c) => f(Superfunction::coordinate(sig, sig.coord(c)?)?),
        Ast::Differential(c) => Ok(Value::Form(SuperForm::differential(sig, sig.coord(c)?))),
        Ast::Derivation(c) => Ok(Value::Field(SuperVectorField::coordinate(sig, sig.coord(c)?))),
        Ast::Trig {
            kind,
            multiple,
            coord,
        } => {
            let Coord::Even(i) = sig.coord(coord)? else {
                return Err(Error::Type(format!("`{coord}` is odd")));
            };
            f(Superfunction::trig(sig, i, *multiple, *kind == TrigKind::Sin)?)
        }
        Ast::Neg(a) => Ok(match eval(a, sig)? {
            Value::Function(v) => Value::Function(v.neg()),
            Value::Form(v) => Value::Form(v.neg()),
            Value::Field(v) => Value::Field(v.neg()),
        }),
        Ast::Add(a, b) => add(eval(a, sig)?, eval(b, sig)?, false),
        Ast::Sub(a, b) => add(eval(a, sig)?, eval(b, sig)?, true),
        Ast::Mul(a, b) => match (eval(a, sig)?, eval(b, sig)?) {
            (Value::Function(x), Value::Function(y)) => f(x.mul(&y)),
            (Value::Function(x), Value::Form(w)) => Ok(Value::Form(w.left_mul(&x))),
            (Value::Form(w), Value::Function(y)) => {
                Ok(Value::Form(w.wedge(&SuperForm::from_function(y))?))
            }
            (Value::Function(x), Value::Field(v)) => Ok(Value::Field(v.left_mul(&x))),
            (Value::Form(_), Value::Form(_)) => {
                Err(Error::Type("`*` needs a function operand; use `^` to wedge forms".into()))
            }
            (x, y) => Err(Error::Type(format!(
                "cannot multiply a {} by a {} (vector field coefficients go on the left)",
                x.kind(),
                y.kind()
            ))),
        },
        Ast::Wedge(a, b) => {
            let (x, y) = (eval(a, sig)?, eval(b, sig)?);
            if matches!(x, Value::Field(_)) || matches!(y, Value::Field(_)) {
                return Err(Error::Type("`^` is only defined for forms".into()));
            }
            Ok(Value::Form(x.into_form()?.wedge(&y.into_form()?)?))
        }
        Ast::Div(a, b) => {
            let denom = eval(b, sig)?
                .into_function()
                .map_err(|_| Error::Type("can only divide by a function".into()))?;
            let inv = denom
                .invert()
                .map_err(|_| Error::Type("divisor is not invertible".into()))?;
            match eval(a, sig)? {
                Value::Function(x) => f(x.mul(&inv)),
                Value::Form(w) => Ok(Value::Form(w.left_mul(&inv))),
                Value::Field(v) => Ok(Value::Field(v.left_mul(&inv))),
            }
        }
        Ast::Pow(a, e) => match eval(a, sig)? {
            Value::Function(x) => f(x.pow(*e)),
            Value::Form(w) => {
                let mut out = SuperForm::from_function(Superfunction::one(sig));
                for _ in 0..*e {
                    out = out.wedge(&w)?;
                }
                Ok(Value::Form(out))
            }
            Value::Field(_) => Err(Error::Type("cannot raise a vector field to a power".into())),
        },
    }
}

fn add(x: Value, y: Value, subtract: bool) -> Result<Value> {
    let y = if subtract {
        match y {
            Value::Function(v) => Value::Function(v.neg()),
            Value::Form(v) => Value::Form(v.neg()),
            Value::Field(v) => Value::Field(v.neg()),
        }
    } else {
        y
    };
    match (x, y) {
        (Value::Function(a), Value::Function(b)) => Ok(Value::Function(a.add(&b))),
        (Value::Field(a), Value::Field(b)) => Ok(Value::Field(a.add(&b))),
        (Value::Field(_), _) | (_, Value::Field(_)) => {
            Err(Error::Type("cannot add a vector field and a form or function".into()))
        }
        (a, b) => Ok(Value::Form(a.into_form()?.add(&b.into_form()?))),
    }
}

pub fn parse_value(src: &str, sig: &Signature) -> Result<Value> {
    eval(&parse_expr(src, sig)?, sig)
}

pub fn parse_function(src: &str, sig: &Signature) -> Result<Superfunction> {
    parse_value(src, sig)?.into_function()
}

pub fn parse_form(src: &str, sig: &Signature) -> Result<SuperForm> {
    parse_value(src, sig)?.into_form()
}

pub fn parse_field(src: &str, sig: &Signature) -> Result<SuperVectorField> {
    parse_value(src, sig)?.into_field()
}

// ---------------------------------------------------------------------------
// value printing

/// Renders a scalar coefficient followed by non-scalar factors as one
/// summand; returns whether it should be subtracted.
fn summand(coeff: &Scalar, factors: &[String], names: &[String]) -> (bool, String) {
    let joined = factors.join("*");
    let joined = joined.replace("*^", "^");
    if factors.is_empty() {
        if coeff.is_negative_term() {
            return (true, coeff.neg().fmt_with(names));
        }
        let s = coeff.fmt_with(names);
        return (false, if coeff.is_polynomial() && coeff.numer().len() > 1 { format!("({s})") } else { s });
    }
    if coeff.is_one() {
        return (false, joined);
    }
    if coeff.is_negative_term() {
        let abs = coeff.neg();
        if abs.is_one() {
            return (true, joined);
        }
        return (true, format!("{}*{joined}", abs.fmt_with(names)));
    }
    let c = coeff.fmt_with(names);
    if coeff.is_polynomial() && coeff.numer().len() > 1 {
        (false, format!("({c})*{joined}"))
    } else {
        (false, format!("{c}*{joined}"))
    }
}

fn join_summands(parts: Vec<(bool, String)>) -> String {
    if parts.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (neg, s)) in parts.into_iter().enumerate() {
        match (i, neg) {
            (0, true) => {
                out.push('-');
                out.push_str(&s);
            }
            (0, false) => out.push_str(&s),
            (_, true) => {
                out.push_str(" - ");
                out.push_str(&s);
            }
            (_, false) => {
                out.push_str(" + ");
                out.push_str(&s);
            }
        }
    }
    out
}

/// Factors of one function term `base-monomial * theta^mask`.
fn function_factors(sig: &Signature, base: &crate::superalgebra::BaseMonomial, mask: u64) -> Vec<String> {
    let mut out = Vec::new();
    for (i, f) in base.factors().iter().enumerate() {
        let name = &sig.even()[i].name;
        match f {
            BaseFactor::Pow(0) => {}
            BaseFactor::Pow(1) => out.push(name.clone()),
            BaseFactor::Pow(e) => out.push(format!("{name}**{e}")),
            BaseFactor::Cos(1) => out.push(format!("cos({name})")),
            BaseFactor::Cos(k) => out.push(format!("cos({k}*{name})")),
            BaseFactor::Sin(1) => out.push(format!("sin({name})")),
            BaseFactor::Sin(k) => out.push(format!("sin({k}*{name})")),
        }
    }
    let mut rest = mask;
    while rest != 0 {
        out.push(sig.odd()[rest.trailing_zeros() as usize].clone());
        rest &= rest - 1;
    }
    out
}

fn function_summands(f: &Superfunction, tail: &[String]) -> Vec<(bool, String)> {
    let sig = f.signature();
    let names = sig.params();
    let mut parts = Vec::new();
    let mut keyed: Vec<_> = f
        .terms()
        .flat_map(|(mask, c)| c.terms().map(move |(m, s)| (*mask, m.clone(), s.clone())))
        .collect();
    keyed.sort_by(|a, b| (a.0.count_ones(), a.0, &a.1).cmp(&(b.0.count_ones(), b.0, &b.1)));
    for (mask, m, s) in keyed {
        let mut factors = function_factors(sig, &m, mask);
        factors.extend(tail.iter().cloned());
        parts.push(summand(&s, &factors, names));
    }
    parts
}

pub fn print_function(f: &Superfunction) -> String {
    join_summands(function_summands(f, &[]))
}

pub fn print_form(w: &SuperForm) -> String {
    let sig = w.signature();
    let mut parts = Vec::new();
    let mut terms: Vec<_> = w.terms().collect();
    terms.sort_by_key(|(m, _)| (m.degree(), (*m).clone()));
    for (m, f) in terms {
        let mut gens = Vec::new();
        let mut rest = m.dx_mask();
        while rest != 0 {
            gens.push(format!("d{}", sig.even()[rest.trailing_zeros() as usize].name));
            rest &= rest - 1;
        }
        for (j, e) in m.dtheta_exps().iter().enumerate() {
            match e {
                0 => {}
                1 => gens.push(format!("d{}", sig.odd()[j])),
                e => gens.push(format!("d{}**{e}", sig.odd()[j])),
            }
        }
        if gens.is_empty() {
            parts.extend(function_summands(f, &[]));
        } else {
            // the first generator follows `*`, later ones follow `^`
            let mut tail = vec![gens[0].clone()];
            tail.extend(gens[1..].iter().map(|g| format!("^{g}")));
            parts.extend(function_summands(f, &tail));
        }
    }
    join_summands(parts)
}

pub fn print_field(x: &SuperVectorField) -> String {
    let sig = x.signature();
    let mut parts = Vec::new();
    for (c, f) in x.components() {
        let name = format!("del_{}", sig.coord_name(*c));
        parts.extend(function_summands(f, &[name]));
    }
    join_summands(parts)
}

pub fn print_scalar(s: &Scalar, sig: &Signature) -> String {
    let (neg, body) = summand(s, &[], sig.params());
    if neg {
        format!("-{body}")
    } else {
        body
    }
}
