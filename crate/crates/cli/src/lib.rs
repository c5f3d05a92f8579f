//! Concrete syntax for Mahler operators: `z`, `M`, rational literals, `+ - * / ^` and
//! parentheses, with `M f(z) = f(z^ell) M`.

use std::path::Path;

use mahler_hahn::rational::Rational;
use mahler_hahn::{MahlerOperator, Polynomial, SortedRationalSet};
use num::{One, Zero};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("division by a non-constant at position {pos}: coefficients must be polynomials, clear denominators")]
    RationalFunction { pos: usize },
    #[error("coefficient contains M at position {pos}")]
    UnexpectedM { pos: usize },
    #[error(transparent)]
    Operator(#[from] mahler_hahn::Error),
    #[error("{0}")]
    File(String),
}

pub type ParseResult<T> = std::result::Result<T, ParseError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Tok {
    Num,
    Z,
    M,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

struct Token<'a> {
    kind: Tok,
    text: &'a str,
    pos: usize,
}

fn tokenize(src: &str) -> ParseResult<Vec<Token<'_>>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let kind = match c {
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push(Token { kind: Tok::Num, text: &src[start..i], pos: start });
                continue;
            }
            b'z' => Tok::Z,
            b'M' => Tok::M,
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            _ => {
                let ch = src[start..].chars().next().unwrap_or('?');
                return Err(ParseError::Syntax { pos: start, msg: format!("unexpected character '{ch}'") });
            }
        };
        i += 1;
        out.push(Token { kind, text: &src[start..i], pos: start });
    }
    out.push(Token { kind: Tok::End, text: "", pos: src.len() });
    Ok(out)
}

/// `sum a_i(z) M^i`, indexed by `i`.
#[derive(Clone, Debug)]
struct Skew {
    coeffs: Vec<Polynomial>,
}

impl Skew {
    fn constant(c: Rational) -> Self {
        Self { coeffs: vec![Polynomial::constant(c)] }
    }

    fn z() -> Self {
        Self { coeffs: vec![Polynomial::monomial(1, Rational::one())] }
    }

    fn m() -> Self {
        Self { coeffs: vec![Polynomial::zero(), Polynomial::constant(Rational::one())] }
    }

    fn trimmed(mut self) -> Self {
        while self.coeffs.len() > 1 && self.coeffs.last().is_some_and(Polynomial::is_zero) {
            self.coeffs.pop();
        }
        self
    }

    fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = Polynomial::zero();
        let coeffs = (0..n)
            .map(|i| self.coeffs.get(i).unwrap_or(&zero).add(other.coeffs.get(i).unwrap_or(&zero)))
            .collect();
        Self { coeffs }.trimmed()
    }

    fn scale(&self, c: &Rational) -> Self {
        Self { coeffs: self.coeffs.iter().map(|a| a.scale(c)).collect() }.trimmed()
    }

    /// `(a_i M^i)(b_j M^j) = a_i b_j(z^(ell^i)) M^(i+j)`.
    fn mul(&self, other: &Self, ell: u64, pos: usize) -> ParseResult<Self> {
        let overflow = || ParseError::Syntax { pos, msg: "operator degree overflows".into() };
        let mut coeffs = vec![Polynomial::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let factor = ell.checked_pow(u32::try_from(i).map_err(|_| overflow())?).ok_or_else(overflow)?;
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.degree().is_some_and(|d| d.checked_mul(factor).is_none()) {
                    return Err(overflow());
                }
                coeffs[i + j] = coeffs[i + j].add(&a.mul(&b.substitute_power(factor)));
            }
        }
        Ok(Self { coeffs }.trimmed())
    }

    fn as_constant(&self) -> Option<Rational> {
        match self.coeffs.as_slice() {
            [a] if a.degree().is_none_or(|d| d == 0) => Some(a.coeff(0).cloned().unwrap_or_else(Rational::zero)),
            _ => None,
        }
    }
}

struct Parser<'a> {
    toks: Vec<Token<'a>>,
    at: usize,
    ell: u64,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Token<'a> {
        &self.toks[self.at]
    }

    fn bump(&mut self) -> &Token<'a> {
        let t = &self.toks[self.at];
        if t.kind != Tok::End {
            self.at += 1;
        }
        t
    }

    fn error<T>(&self, msg: impl Into<String>) -> ParseResult<T> {
        Err(ParseError::Syntax { pos: self.peek().pos, msg: msg.into() })
    }

    fn expr(&mut self) -> ParseResult<Skew> {
        let mut acc = self.term()?;
        loop {
            match self.peek().kind {
                Tok::Plus => {
                    self.bump();
                    acc = acc.add(&self.term()?);
                }
                Tok::Minus => {
                    self.bump();
                    acc = acc.add(&self.term()?.scale(&-Rational::one()));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> ParseResult<Skew> {
        let mut acc = self.unary()?;
        loop {
            match self.peek().kind {
                Tok::Star => {
                    let pos = self.bump().pos;
                    let rhs = self.unary()?;
                    acc = acc.mul(&rhs, self.ell, pos)?;
                }
                Tok::Slash => {
                    let pos = self.bump().pos;
                    let rhs = self.unary()?;
                    match rhs.as_constant() {
                        Some(c) if c.is_zero() => return Err(ParseError::Syntax { pos, msg: "division by zero".into() }),
                        Some(c) => acc = acc.scale(&c.recip()),
                        None => return Err(ParseError::RationalFunction { pos }),
                    }
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> ParseResult<Skew> {
        match self.peek().kind {
            Tok::Minus => {
                self.bump();
                Ok(self.unary()?.scale(&-Rational::one()))
            }
            Tok::Plus => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> ParseResult<Skew> {
        let base = self.atom()?;
        if self.peek().kind != Tok::Caret {
            return Ok(base);
        }
        let pos = self.bump().pos;
        let tok = self.bump();
        if tok.kind != Tok::Num {
            return Err(ParseError::Syntax { pos: tok.pos, msg: "expected a non-negative integer exponent".into() });
        }
        let e: u32 = tok
            .text
            .parse()
            .map_err(|_| ParseError::Syntax { pos: tok.pos, msg: format!("exponent {} is too large", tok.text) })?;
        let mut acc = Skew::constant(Rational::one());
        for _ in 0..e {
            acc = acc.mul(&base, self.ell, pos)?;
        }
        Ok(acc)
    }

    fn atom(&mut self) -> ParseResult<Skew> {
        let tok = self.bump();
        let pos = tok.pos;
        match tok.kind {
            Tok::Num => Ok(Skew::constant(
                tok.text.parse::<num::BigInt>().map(Rational::from_integer).expect("digits only"),
            )),
            Tok::Z => Ok(Skew::z()),
            Tok::M => Ok(Skew::m()),
            Tok::LParen => {
                let inner = self.expr()?;
                if self.peek().kind != Tok::RParen {
                    return self.error("expected ')'");
                }
                self.bump();
                Ok(inner)
            }
            Tok::End => Err(ParseError::Syntax { pos, msg: "unexpected end of input".into() }),
            _ => Err(ParseError::Syntax { pos, msg: format!("unexpected '{}'", tok.text) }),
        }
    }
}

fn parse_skew(ell: u64, src: &str) -> ParseResult<Skew> {
    let mut p = Parser { toks: tokenize(src)?, at: 0, ell };
    let out = p.expr()?;
    if p.peek().kind != Tok::End {
        return p.error(format!("unexpected '{}'", p.peek().text));
    }
    Ok(out)
}

/// Parses `sum a_i(z) M^i`; `M` may appear anywhere and is moved right of every `z`.
pub fn parse_operator(ell: u64, src: &str) -> ParseResult<MahlerOperator> {
    if ell < 2 {
        return Err(mahler_hahn::Error::InvalidOperator(format!("ell = {ell} must be at least 2")).into());
    }
    let skew = parse_skew(ell, src)?;
    Ok(MahlerOperator::new(ell, skew.coeffs)?)
}

pub fn parse_polynomial(src: &str) -> ParseResult<Polynomial> {
    let skew = parse_skew(2, src)?;
    if skew.coeffs.len() > 1 {
        let pos = src.find('M').unwrap_or(0);
        return Err(ParseError::UnexpectedM { pos });
    }
    Ok(skew.coeffs.into_iter().next().unwrap_or_default())
}

/// `{"ell": 2, "coefficients": ["-2", "z-1", "z"]}`, entry `i` being the coefficient of `M^i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperatorFile {
    pub ell: u64,
    pub coefficients: Vec<String>,
}

impl OperatorFile {
    pub fn to_operator(&self) -> ParseResult<MahlerOperator> {
        let coeffs = self.coefficients.iter().map(|c| parse_polynomial(c)).collect::<ParseResult<Vec<_>>>()?;
        Ok(MahlerOperator::new(self.ell, coeffs)?)
    }

    pub fn from_operator(l: &MahlerOperator) -> Self {
        Self { ell: l.ell(), coefficients: l.coeffs().iter().map(|a| a.to_string()).collect() }
    }
}

pub fn read_operator_file(path: &Path) -> ParseResult<MahlerOperator> {
    let text = std::fs::read_to_string(path).map_err(|e| ParseError::File(format!("{}: {e}", path.display())))?;
    let file: OperatorFile =
        serde_json::from_str(&text).map_err(|e| ParseError::File(format!("{}: {e}", path.display())))?;
    file.to_operator()
}

/// Comma-separated rationals; the empty string gives the empty set.
pub fn parse_exponents(src: &str) -> ParseResult<SortedRationalSet> {
    src.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| mahler_hahn::parse_rational(s).map_err(ParseError::from))
        .collect()
}
