use std::collections::BTreeMap;
use std::fmt;

use num::BigInt;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::rational::Rational;

/// Polynomial in `z` with nonnegative integer exponents and no stored zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial<K = Rational> {
    terms: BTreeMap<u64, K>,
}

impl<K: Field> Default for Polynomial<K> {
    fn default() -> Self {
        Self { terms: BTreeMap::new() }
    }
}

impl<K: Field> Polynomial<K> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: K) -> Self {
        Self::monomial(0, c)
    }

    pub fn monomial(exp: u64, c: K) -> Self {
        let mut p = Self::zero();
        p.add_term(exp, c);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (u64, K)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, exp: u64, c: K) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&exp) {
            Some(old) => {
                let sum = old + c;
                if !sum.is_zero() {
                    self.terms.insert(exp, sum);
                }
            }
            None => {
                self.terms.insert(exp, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn val(&self) -> Option<u64> {
        self.terms.keys().next().copied()
    }

    pub fn degree(&self) -> Option<u64> {
        self.terms.keys().next_back().copied()
    }

    pub fn coeff(&self, exp: u64) -> Option<&K> {
        self.terms.get(&exp)
    }

    pub fn lowest_coeff(&self) -> Option<&K> {
        self.terms.values().next()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (u64, &K)> + '_ {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(e, c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (a, x) in self.terms() {
            for (b, y) in other.terms() {
                out.add_term(a + b, x.clone() * y.clone());
            }
        }
        out
    }

    pub fn scale(&self, c: &K) -> Self {
        Self::from_terms(self.terms().map(|(e, x)| (e, x.clone() * c.clone())))
    }

    /// `p(z^factor)`.
    pub fn substitute_power(&self, factor: u64) -> Self {
        Self::from_terms(self.terms().map(|(e, x)| (e * factor, x.clone())))
    }
}

fn write_signed<T: fmt::Display>(f: &mut fmt::Formatter<'_>, first: bool, c: &T, rest: &str) -> fmt::Result {
    let text = c.to_string();
    let (negative, magnitude) = match text.strip_prefix('-') {
        Some(m) => (true, m.to_string()),
        None => (false, text),
    };
    match (first, negative) {
        (true, true) => f.write_str("-")?,
        (true, false) => {}
        (false, true) => f.write_str(" - ")?,
        (false, false) => f.write_str(" + ")?,
    }
    match (magnitude == "1", rest.is_empty()) {
        (true, false) => f.write_str(rest),
        (_, true) => f.write_str(&magnitude),
        (false, false) => write!(f, "{magnitude}*{rest}"),
    }
}

impl<K: Field> fmt::Display for Polynomial<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (e, c)) in self.terms().rev().enumerate() {
            let z = match e {
                0 => String::new(),
                1 => "z".to_string(),
                _ => format!("z^{e}"),
            };
            write_signed(f, k == 0, c, &z)?;
        }
        Ok(())
    }
}

/// One monomial `a_{i,j} z^j` of the coefficient `a_i`; its support point is `(ell^i, j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SupportPoint<K = Rational> {
    pub index: usize,
    pub ordinate: u64,
    pub coeff: K,
}

impl<K> SupportPoint<K> {
    pub fn abscissa(&self, ell: u64) -> BigInt {
        num::pow(BigInt::from(ell), self.index)
    }
}

/// `a_n(z) M^n + ... + a_0(z)` where `M f(z) = f(z^ell)`.
#[derive(Clone, Debug, PartialEq)]
pub struct MahlerOperator<K = Rational> {
    ell: u64,
    coeffs: Vec<Polynomial<K>>,
}

impl<K: Field> MahlerOperator<K> {
    pub fn new(ell: u64, mut coeffs: Vec<Polynomial<K>>) -> Result<Self> {
        if ell < 2 {
            return Err(Error::InvalidOperator(format!("ell must be at least 2, got {ell}")));
        }
        while coeffs.last().is_some_and(Polynomial::is_zero) {
            coeffs.pop();
        }
        if coeffs.first().is_none_or(Polynomial::is_zero) {
            return Err(Error::InvalidOperator("a_0 * a_n = 0: a_0 vanishes".into()));
        }
        if coeffs.len() < 2 {
            return Err(Error::InvalidOperator("order n must be at least 1".into()));
        }
        Ok(Self { ell, coeffs })
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Polynomial<K>] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &Polynomial<K> {
        &self.coeffs[i]
    }

    pub fn support_points(&self) -> Vec<SupportPoint<K>> {
        self.coeffs
            .iter()
            .enumerate()
            .flat_map(|(index, p)| {
                p.terms().map(move |(ordinate, c)| SupportPoint { index, ordinate, coeff: c.clone() })
            })
            .collect()
    }

    pub fn from_support_points(ell: u64, points: &[SupportPoint<K>]) -> Result<Self> {
        let n = points.iter().map(|p| p.index).max().unwrap_or(0);
        let mut coeffs = vec![Polynomial::zero(); n + 1];
        for p in points {
            coeffs[p.index].add_term(p.ordinate, p.coeff.clone());
        }
        Self::new(ell, coeffs)
    }
}

impl<K: Field> fmt::Display for MahlerOperator<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, p) in self.coeffs.iter().enumerate().rev() {
            if p.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "({p})")?,
                1 => write!(f, "({p})*M")?,
                _ => write!(f, "({p})*M^{i}")?,
            }
        }
        Ok(())
    }
}
