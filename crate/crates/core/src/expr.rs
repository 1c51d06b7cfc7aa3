//! The input expression language.
//!
//! Expressions are built from integer literals, the series variable `t`
//! (with rational exponents), matrix entries `x[i][j]`, vector coordinates
//! `x[i]` (with `x` and `y` as shorthands for `x[1]` and `x[2]`), parameters
//! `s1, s2, …`, the operators `+ - * /`, integer powers `^` and parentheses.
//! All indices are 1-based. The grammar is documented in `docs/grammar.md`.
//!
//! Precedence from tightest to loosest: `^`, unary `-`, `* /`, `+ -`. Binary
//! operators associate to the left. There is no implicit multiplication.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rat::{fmt_big, q, Q};
use crate::series::{PuiseuxSeries, DEFAULT_PRECISION};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variable {
    /// Matrix entry `x[i][j]`.
    Entry(usize, usize),
    /// Vector coordinate `x[i]`.
    Coord(usize),
    /// Family parameter `s<k>`.
    Param(usize),
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Variable::Entry(i, j) => write!(f, "x[{i}][{j}]"),
            Variable::Coord(i) => write!(f, "x[{i}]"),
            Variable::Param(k) => write!(f, "s{k}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expression {
    Const(BigRational),
    /// `t^q`.
    T(Q),
    Var(Variable),
    Neg(Box<Expression>),
    Add(Box<Expression>, Box<Expression>),
    Sub(Box<Expression>, Box<Expression>),
    Mul(Box<Expression>, Box<Expression>),
    Div(Box<Expression>, Box<Expression>),
    Pow(Box<Expression>, i64),
}

impl Expression {
    pub fn parse(text: &str) -> Result<Expression> {
        parse(text)
    }

    pub fn constant(n: i64) -> Expression {
        Expression::Const(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn var(v: Variable) -> Expression {
        Expression::Var(v)
    }

    /// All variables occurring in the expression, sorted.
    pub fn variables(&self) -> Vec<Variable> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out.sort();
        out.dedup();
        out
    }

    fn collect_vars(&self, out: &mut Vec<Variable>) {
        match self {
            Expression::Const(_) | Expression::T(_) => {}
            Expression::Var(v) => out.push(*v),
            Expression::Neg(a) | Expression::Pow(a, _) => a.collect_vars(out),
            Expression::Add(a, b)
            | Expression::Sub(a, b)
            | Expression::Mul(a, b)
            | Expression::Div(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    pub fn mentions_t(&self) -> bool {
        match self {
            Expression::T(_) => true,
            Expression::Const(_) | Expression::Var(_) => false,
            Expression::Neg(a) | Expression::Pow(a, _) => a.mentions_t(),
            Expression::Add(a, b)
            | Expression::Sub(a, b)
            | Expression::Mul(a, b)
            | Expression::Div(a, b) => a.mentions_t() || b.mentions_t(),
        }
    }

    /// Pulls the expression back along a point: every variable is replaced
    /// by its assigned series and the result is computed exactly.
    pub fn evaluate(&self, assignment: &Assignment) -> Result<PuiseuxSeries> {
        let p = assignment.precision;
        Ok(match self {
            Expression::Const(c) => PuiseuxSeries::constant(c.clone(), p),
            Expression::T(e) => PuiseuxSeries::monomial(BigRational::one(), *e, p),
            Expression::Var(v) => assignment
                .get(v)
                .cloned()
                .ok_or_else(|| Error::MissingAssignment(v.to_string()))?,
            Expression::Neg(a) => a.evaluate(assignment)?.neg(),
            Expression::Add(a, b) => a.evaluate(assignment)?.add(&b.evaluate(assignment)?),
            Expression::Sub(a, b) => a.evaluate(assignment)?.sub(&b.evaluate(assignment)?),
            Expression::Mul(a, b) => a.evaluate(assignment)?.mul(&b.evaluate(assignment)?),
            Expression::Div(a, b) => {
                let den = b.evaluate(assignment)?.invert()?;
                a.evaluate(assignment)?.mul(&den)
            }
            Expression::Pow(a, k) => a.evaluate(assignment)?.pow(*k)?,
        })
    }

    /// Expands a division-free polynomial in the variables (rational
    /// constants, including division by nonzero constants, are allowed; `t`
    /// is not).
    pub fn expand(&self) -> Result<Polynomial> {
        Ok(match self {
            Expression::Const(c) => Polynomial::constant(c.clone()),
            Expression::T(_) => {
                return Err(Error::invalid("the series variable t has no polynomial expansion"))
            }
            Expression::Var(v) => Polynomial::variable(*v),
            Expression::Neg(a) => a.expand()?.scale(&-BigRational::one()),
            Expression::Add(a, b) => a.expand()?.add(&b.expand()?),
            Expression::Sub(a, b) => a.expand()?.add(&b.expand()?.scale(&-BigRational::one())),
            Expression::Mul(a, b) => a.expand()?.mul(&b.expand()?),
            Expression::Div(a, b) => {
                let den = b.expand()?;
                match den.as_constant() {
                    Some(c) if !c.is_zero() => a.expand()?.scale(&c.recip()),
                    _ => return Err(Error::invalid("polynomial division by a non-constant")),
                }
            }
            Expression::Pow(a, k) => {
                if *k < 0 {
                    return Err(Error::invalid("negative power in a polynomial"));
                }
                let base = a.expand()?;
                let mut acc = Polynomial::constant(BigRational::one());
                for _ in 0..*k {
                    acc = acc.mul(&base);
                }
                acc
            }
        })
    }

    fn precedence(&self) -> u8 {
        match self {
            Expression::Add(..) | Expression::Sub(..) => 1,
            Expression::Mul(..) | Expression::Div(..) => 2,
            Expression::Neg(_) => 3,
            Expression::Pow(..) => 4,
            Expression::T(e) if !e.is_one() => 4,
            Expression::Const(_) | Expression::T(_) | Expression::Var(_) => 6,
        }
    }
}

/// Canonical printer. Parsing its output gives back the same tree.
impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn child(f: &mut fmt::Formatter<'_>, e: &Expression, min: u8) -> fmt::Result {
            if e.precedence() < min {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        }
        match self {
            Expression::Const(c) => {
                if c.is_integer() && !c.is_negative() {
                    write!(f, "{}", fmt_big(c))
                } else {
                    write!(f, "({})", fmt_big(c))
                }
            }
            Expression::T(e) => write!(f, "{}", crate::series::fmt_t_power(e)),
            Expression::Var(v) => write!(f, "{v}"),
            Expression::Neg(a) => {
                write!(f, "-")?;
                child(f, a, 3)
            }
            Expression::Add(a, b) => {
                child(f, a, 1)?;
                write!(f, " + ")?;
                child(f, b, 2)
            }
            Expression::Sub(a, b) => {
                child(f, a, 1)?;
                write!(f, " - ")?;
                child(f, b, 2)
            }
            Expression::Mul(a, b) => {
                child(f, a, 2)?;
                write!(f, "*")?;
                child(f, b, 3)
            }
            Expression::Div(a, b) => {
                child(f, a, 2)?;
                write!(f, "/")?;
                child(f, b, 3)
            }
            Expression::Pow(a, k) => {
                child(f, a, 6)?;
                write!(f, "^{k}")
            }
        }
    }
}

/// Values for the variables of an expression plus the working precision
/// given to literals.
#[derive(Clone, Debug)]
pub struct Assignment {
    values: HashMap<Variable, PuiseuxSeries>,
    pub precision: Q,
}

impl Default for Assignment {
    fn default() -> Self {
        Assignment::new(q(DEFAULT_PRECISION))
    }
}

impl Assignment {
    pub fn new(precision: Q) -> Self {
        Assignment {
            values: HashMap::new(),
            precision,
        }
    }

    pub fn set(&mut self, v: Variable, value: PuiseuxSeries) -> &mut Self {
        self.values.insert(v, value);
        self
    }

    pub fn with(mut self, v: Variable, value: PuiseuxSeries) -> Self {
        self.values.insert(v, value);
        self
    }

    pub fn get(&self, v: &Variable) -> Option<&PuiseuxSeries> {
        self.values.get(v)
    }
}

/// Sparse multivariate polynomial with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Polynomial {
    terms: BTreeMap<BTreeMap<Variable, u32>, BigRational>,
}

impl Polynomial {
    pub fn constant(c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(BTreeMap::new(), c);
        }
        Polynomial { terms }
    }

    pub fn variable(v: Variable) -> Self {
        let mut mono = BTreeMap::new();
        mono.insert(v, 1);
        let mut terms = BTreeMap::new();
        terms.insert(mono, BigRational::one());
        Polynomial { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn constant_term(&self) -> BigRational {
        self.terms
            .get(&BTreeMap::new())
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&BTreeMap::new()).cloned(),
            _ => None,
        }
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn variables(&self) -> Vec<Variable> {
        let mut vs: Vec<Variable> = self.terms.keys().flat_map(|m| m.keys().copied()).collect();
        vs.sort();
        vs.dedup();
        vs
    }

    fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Polynomial::default();
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    fn add(&self, other: &Polynomial) -> Self {
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            *terms.entry(m.clone()).or_insert_with(BigRational::zero) += c;
        }
        terms.retain(|_, c| !c.is_zero());
        Polynomial { terms }
    }

    fn mul(&self, other: &Polynomial) -> Self {
        let mut terms: BTreeMap<BTreeMap<Variable, u32>, BigRational> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let mut m = ma.clone();
                for (v, e) in mb {
                    *m.entry(*v).or_insert(0) += e;
                }
                *terms.entry(m).or_insert_with(BigRational::zero) += ca * cb;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Polynomial { terms }
    }
}

// ---------------------------------------------------------------------------
// Lexer

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Eof,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'[' => Tok::LBracket,
            b']' => Tok::RBracket,
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = text[start..i].parse().expect("digits");
                out.push((Tok::Int(n), start));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(text[start..i].to_string()), start));
                continue;
            }
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(Error::parse(start, format!("unexpected character '{ch}'")));
            }
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Tok::Eof, text.len()));
    Ok(out)
}

// ---------------------------------------------------------------------------
// Parser

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(Error::parse(self.offset(), format!("expected {what}")))
        }
    }

    fn expr(&mut self) -> Result<Expression> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = Expression::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Expression::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expression> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    lhs = Expression::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Tok::Slash => {
                    self.bump();
                    lhs = Expression::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expression> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(Expression::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expression> {
        let is_t = matches!(self.peek(), Tok::Ident(s) if s == "t");
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let at = self.offset();
        let e = self.exponent()?;
        if is_t {
            return Ok(Expression::T(e));
        }
        if !e.is_integer() {
            return Err(Error::parse(at, "only t may carry a non-integer exponent"));
        }
        Ok(Expression::Pow(Box::new(base), e.to_integer()))
    }

    fn small_int(&mut self) -> Result<i64> {
        let at = self.offset();
        match self.bump() {
            Tok::Int(n) => i64::try_from(n).map_err(|_| Error::parse(at, "integer too large")),
            _ => Err(Error::parse(at, "expected an integer")),
        }
    }

    fn signed_int(&mut self) -> Result<i64> {
        let negative = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let n = self.small_int()?;
        Ok(if negative { -n } else { n })
    }

    fn exponent(&mut self) -> Result<Q> {
        if *self.peek() == Tok::LParen {
            self.bump();
            let n = self.signed_int()?;
            let mut d = 1;
            if *self.peek() == Tok::Slash {
                self.bump();
                let at = self.offset();
                d = self.small_int()?;
                if d == 0 {
                    return Err(Error::parse(at, "zero denominator in exponent"));
                }
            }
            self.expect(Tok::RParen, "')' closing the exponent")?;
            return Ok(Q::new(n, d));
        }
        Ok(q(self.signed_int()?))
    }

    fn index(&mut self) -> Result<usize> {
        self.expect(Tok::LBracket, "'['")?;
        let at = self.offset();
        let i = self.small_int()?;
        if i < 1 {
            return Err(Error::parse(at, "indices start at 1"));
        }
        self.expect(Tok::RBracket, "']'")?;
        Ok(i as usize)
    }

    fn atom(&mut self) -> Result<Expression> {
        let at = self.offset();
        match self.bump() {
            Tok::Int(n) => Ok(Expression::Const(BigRational::from_integer(n))),
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(e)
            }
            Tok::Ident(name) => self.identifier(&name, at),
            Tok::Eof => Err(Error::parse(at, "unexpected end of input")),
            other => Err(Error::parse(at, format!("unexpected token {}", describe(&other)))),
        }
    }

    fn identifier(&mut self, name: &str, at: usize) -> Result<Expression> {
        match name {
            "t" => Ok(Expression::T(q(1))),
            "y" => Ok(Expression::Var(Variable::Coord(2))),
            "x" => {
                if *self.peek() != Tok::LBracket {
                    return Ok(Expression::Var(Variable::Coord(1)));
                }
                let i = self.index()?;
                if *self.peek() == Tok::LBracket {
                    let j = self.index()?;
                    Ok(Expression::Var(Variable::Entry(i, j)))
                } else {
                    Ok(Expression::Var(Variable::Coord(i)))
                }
            }
            _ => {
                if let Some(digits) = name.strip_prefix('s') {
                    if !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()) {
                        let k: usize = digits
                            .parse()
                            .map_err(|_| Error::parse(at, "parameter index too large"))?;
                        if k == 0 {
                            return Err(Error::parse(at, "parameters are numbered from s1"));
                        }
                        return Ok(Expression::Var(Variable::Param(k)));
                    }
                }
                Err(Error::parse(at, format!("unknown identifier '{name}'")))
            }
        }
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Int(n) => n.to_string(),
        Tok::Ident(s) => format!("'{s}'"),
        Tok::Plus => "'+'".into(),
        Tok::Minus => "'-'".into(),
        Tok::Star => "'*'".into(),
        Tok::Slash => "'/'".into(),
        Tok::Caret => "'^'".into(),
        Tok::LParen => "'('".into(),
        Tok::RParen => "')'".into(),
        Tok::LBracket => "'['".into(),
        Tok::RBracket => "']'".into(),
        Tok::Eof => "end of input".into(),
    }
}

/// Parses one expression; the whole input must be consumed.
pub fn parse(text: &str) -> Result<Expression> {
    parse_at(text, 0)
}

fn parse_at(text: &str, base: usize) -> Result<Expression> {
    let shift = |e: Error| match e {
        Error::Parse { offset, message } => Error::Parse {
            offset: offset + base,
            message,
        },
        other => other,
    };
    let toks = lex(text).map_err(shift)?;
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr().map_err(shift)?;
    if *p.peek() != Tok::Eof {
        let at = p.offset();
        return Err(shift(Error::parse(at, format!("unexpected {}", describe(p.peek())))));
    }
    Ok(e)
}

/// Splits on a separator byte, returning each piece with its byte offset.
fn split_with_offsets(text: &str, sep: char) -> Vec<(&str, usize)> {
    let mut out = Vec::new();
    let mut start = 0;
    for (i, c) in text.char_indices() {
        if c == sep {
            out.push((&text[start..i], start));
            start = i + c.len_utf8();
        }
    }
    out.push((&text[start..], start));
    out
}

/// Comma separated expressions.
pub fn parse_list(text: &str) -> Result<Vec<Expression>> {
    split_with_offsets(text, ',')
        .into_iter()
        .map(|(piece, off)| parse_at(piece, off))
        .collect()
}

/// Matrix literal: rows separated by `;`, entries by `,`. The result must be
/// square.
pub fn parse_matrix(text: &str) -> Result<Vec<Vec<Expression>>> {
    let mut rows = Vec::new();
    for (row, off) in split_with_offsets(text, ';') {
        if row.trim().is_empty() && off > 0 && off == text.len() {
            // trailing ';'
            continue;
        }
        let entries = split_with_offsets(row, ',')
            .into_iter()
            .map(|(piece, o)| parse_at(piece, off + o))
            .collect::<Result<Vec<_>>>()?;
        rows.push(entries);
    }
    let n = rows.len();
    for (i, r) in rows.iter().enumerate() {
        if r.len() != n {
            return Err(Error::parse(
                0,
                format!("matrix is not square: row {} has {} entries, expected {n}", i + 1, r.len()),
            ));
        }
    }
    Ok(rows)
}
