//! Parser and printer for one-variable rational functions over Q.
//!
//! ```text
//! expr     := poly ("/" term)?
//! poly     := "-"? term (("+" | "-") term)*
//! term     := factor ("*" factor)*
//! factor   := base ("^" uint)?
//! base     := rational | "x" | "(" poly ")"
//! rational := uint ("/" uint)?
//! ```
//!
//! The top-level `/` binds last and appears at most once. Its right side is
//! a single term, so `1/x + x^2` is rejected: write `(x^3+1)/x`. A slash
//! between two integer literals is a rational constant, so `x^2 + 1/2` is a
//! polynomial. The Unicode minus `−` is read as `-`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use preperiodic::Rat;
use thiserror::Error;

/// Exponents above this are rejected before any expansion happens.
pub const MAX_EXPONENT: u32 = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at column {}: {message}", .pos + 1)]
pub struct ParseError {
    /// Zero-based character offset into the source.
    pub pos: usize,
    pub message: String,
}

/// A polynomial in `x`, ascending coefficients, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly(Vec<Rat>);

impl Poly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn constant(c: Rat) -> Self {
        Poly::new(vec![c])
    }

    pub fn x() -> Self {
        Poly(vec![Rat::zero(), Rat::one()])
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::constant(Rat::one());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

impl Add for &Poly {
    type Output = Poly;

    fn add(self, rhs: &Poly) -> Poly {
        let n = self.0.len().max(rhs.0.len());
        let zero = Rat::zero();
        Poly::new(
            (0..n)
                .map(|i| self.0.get(i).unwrap_or(&zero) + rhs.0.get(i).unwrap_or(&zero))
                .collect(),
        )
    }
}

impl Neg for &Poly {
    type Output = Poly;

    fn neg(self) -> Poly {
        Poly(self.0.iter().map(|c| -c).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;

    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Mul for &Poly {
    type Output = Poly;

    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::default();
        }
        let mut out = vec![Rat::zero(); self.0.len() + rhs.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in rhs.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

fn write_rat(f: &mut fmt::Formatter<'_>, q: &Rat) -> fmt::Result {
    if q.denom().is_one() {
        write!(f, "{}", q.numer())
    } else {
        write!(f, "{}/{}", q.numer(), q.denom())
    }
}

/// Descending powers, e.g. `3/2*x^2 - x + 1`.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            match (first, c.is_negative()) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            first = false;
            let a = c.abs();
            match k {
                0 => write_rat(f, &a)?,
                _ => {
                    if !a.is_one() {
                        write_rat(f, &a)?;
                        f.write_str("*")?;
                    }
                    f.write_str("x")?;
                    if k > 1 {
                        write!(f, "^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// A parsed map `x ↦ num(x)/den(x)`. The pair is kept as written: no common
/// factor is cancelled, so the printed form reparses to the same pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapExpr {
    pub source: String,
    pub num: Poly,
    pub den: Poly,
}

impl MapExpr {
    pub fn den_is_one(&self) -> bool {
        self.den == Poly::constant(Rat::one())
    }
}

impl fmt::Display for MapExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den_is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    X,
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Int(n) => write!(f, "number {n}"),
            Tok::X => f.write_str("'x'"),
            Tok::Plus => f.write_str("'+'"),
            Tok::Minus => f.write_str("'-'"),
            Tok::Star => f.write_str("'*'"),
            Tok::Caret => f.write_str("'^'"),
            Tok::Slash => f.write_str("'/'"),
            Tok::LParen => f.write_str("'('"),
            Tok::RParen => f.write_str("')'"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

fn err<T>(pos: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        pos,
        message: message.into(),
    })
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let tok = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                out.push((Tok::Int(digits.parse().expect("ascii digits")), start));
                continue;
            }
            'x' | 'X' => Tok::X,
            '+' => Tok::Plus,
            '-' | '\u{2212}' => Tok::Minus,
            '*' => Tok::Star,
            '^' => Tok::Caret,
            '/' => Tok::Slash,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            other => return err(i, format!("unexpected character {other:?}")),
        };
        out.push((tok, i));
        i += 1;
    }
    out.push((Tok::End, chars.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.at + 1).min(self.toks.len() - 1)].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<(), ParseError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            err(self.pos(), format!("expected {want}, found {}", self.peek()))
        }
    }

    fn poly(&mut self) -> Result<Poly, ParseError> {
        let negate = *self.peek() == Tok::Minus;
        if negate {
            self.bump();
        }
        let mut acc = self.term()?;
        if negate {
            acc = -&acc;
        }
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.factor()?;
        while *self.peek() == Tok::Star {
            self.bump();
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly, ParseError> {
        let base = self.base()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let pos = self.pos();
        match self.bump() {
            Tok::Int(e) => match u32::try_from(&e) {
                Ok(e) if e <= MAX_EXPONENT => Ok(base.pow(e)),
                _ => err(pos, format!("exponent {e} exceeds {MAX_EXPONENT}")),
            },
            other => err(pos, format!("expected an exponent, found {other}")),
        }
    }

    fn base(&mut self) -> Result<Poly, ParseError> {
        let pos = self.pos();
        match self.bump() {
            Tok::X => Ok(Poly::x()),
            Tok::LParen => {
                let p = self.poly()?;
                self.expect(Tok::RParen)?;
                Ok(p)
            }
            Tok::Int(n) => {
                if *self.peek() == Tok::Slash && matches!(self.peek2(), Tok::Int(_)) {
                    self.bump();
                    let dpos = self.pos();
                    let Tok::Int(d) = self.bump() else { unreachable!() };
                    if d.is_zero() {
                        return err(dpos, "zero denominator in a rational constant");
                    }
                    Ok(Poly::constant(Rat::new(n, d)))
                } else {
                    Ok(Poly::constant(Rat::from_integer(n)))
                }
            }
            other => err(pos, format!("expected a number, 'x' or '(', found {other}")),
        }
    }
}

/// Parse `text` into a numerator and denominator.
pub fn parse_map(text: &str) -> Result<MapExpr, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
    };
    if *p.peek() == Tok::End {
        return err(0, "empty expression");
    }
    let num = p.poly()?;
    let mut den = Poly::constant(Rat::one());
    if *p.peek() == Tok::Slash {
        p.bump();
        let den_pos = p.pos();
        den = p.term()?;
        if den.is_zero() {
            return err(den_pos, "the denominator is zero");
        }
        match p.peek() {
            Tok::Plus | Tok::Minus => {
                return err(
                    p.pos(),
                    "the denominator must be a single term; parenthesize it or combine over a common denominator",
                )
            }
            Tok::Slash => return err(p.pos(), "at most one top-level '/' is allowed"),
            _ => {}
        }
    }
    if *p.peek() != Tok::End {
        return err(p.pos(), format!("unexpected {}", p.peek()));
    }
    Ok(MapExpr {
        source: text.to_string(),
        num,
        den,
    })
}
