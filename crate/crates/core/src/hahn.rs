use std::collections::BTreeMap;
use std::fmt;

use num::Zero;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::field::Field;
use crate::operator::MahlerOperator;
use crate::rational::{parse_rational, pow, ExtRational, Rational};
use crate::set::SortedRationalSet;

/// Series `sum f_g z^g` with finitely many rational exponents and no stored zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteHahn<K = Rational> {
    terms: BTreeMap<Rational, K>,
}

impl<K: Field> Default for FiniteHahn<K> {
    fn default() -> Self {
        Self { terms: BTreeMap::new() }
    }
}

impl<K: Field> FiniteHahn<K> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(exp: Rational, c: K) -> Self {
        let mut f = Self::zero();
        f.add_term(exp, c);
        f
    }

    pub fn from_terms<I: IntoIterator<Item = (Rational, K)>>(terms: I) -> Self {
        let mut f = Self::zero();
        for (e, c) in terms {
            f.add_term(e, c);
        }
        f
    }

    pub fn add_term(&mut self, exp: Rational, c: K) {
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

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: &Rational) -> Option<&K> {
        self.terms.get(exp)
    }

    pub fn coeff_or_zero(&self, exp: &Rational) -> K {
        self.terms.get(exp).cloned().unwrap_or_else(K::zero)
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Rational, &K)> + '_ {
        self.terms.iter()
    }

    pub fn val(&self) -> ExtRational {
        match self.terms.keys().next() {
            Some(e) => ExtRational::Finite(e.clone()),
            None => ExtRational::PosInf,
        }
    }

    pub fn leading(&self) -> Option<(&Rational, &K)> {
        self.terms.iter().next()
    }

    pub fn support(&self) -> SortedRationalSet {
        SortedRationalSet::from_sorted(self.terms.keys().cloned().collect())
    }

    pub fn restrict(&self, q: &SortedRationalSet) -> Self {
        Self {
            terms: self.terms.iter().filter(|(e, _)| q.contains(e)).map(|(e, c)| (e.clone(), c.clone())).collect(),
        }
    }

    pub fn mahler_substitute(&self, ell: u64, i: usize) -> Self {
        let factor = pow(ell, i);
        Self { terms: self.terms.iter().map(|(e, c)| (e * &factor, c.clone())).collect() }
    }

    /// Multiplies by `c z^shift`.
    pub fn mul_monomial(&self, shift: &Rational, c: &K) -> Self {
        Self::from_terms(self.terms.iter().map(|(e, x)| (e + shift, x.clone() * c.clone())))
    }

    pub fn scale(&self, c: &K) -> Self {
        self.mul_monomial(&Rational::zero(), c)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (e, c) in other.terms() {
            self.add_term(e.clone(), c.clone());
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-K::one()))
    }
}

/// `L(f) = sum_i a_i(z) f(z^(ell^i))`.
pub fn apply_operator<K: Field>(l: &MahlerOperator<K>, f: &FiniteHahn<K>) -> FiniteHahn<K> {
    let mut out = FiniteHahn::zero();
    for (i, a) in l.coeffs().iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        let factor = pow(l.ell(), i);
        for (e, c) in f.terms() {
            let base = e * &factor;
            for (j, x) in a.terms() {
                out.add_term(&base + Rational::from_integer(j.into()), c.clone() * x.clone());
            }
        }
    }
    out
}

fn exponent_text(e: &Rational) -> String {
    if e.is_integer() && !num::Signed::is_negative(e) {
        e.to_string()
    } else {
        format!("({e})")
    }
}

impl<K: Field> fmt::Display for FiniteHahn<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (e, c)) in self.terms.iter().enumerate() {
            let text = c.to_string();
            let (negative, magnitude) = match text.strip_prefix('-') {
                Some(m) => (true, m.to_string()),
                None => (false, text),
            };
            match (k == 0, negative) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            let z = if e.is_zero() {
                String::new()
            } else if e == &Rational::from_integer(1.into()) {
                "z".into()
            } else {
                format!("z^{}", exponent_text(e))
            };
            match (magnitude == "1", z.is_empty()) {
                (true, false) => f.write_str(&z)?,
                (_, true) => f.write_str(&magnitude)?,
                (false, false) => write!(f, "{magnitude}*{z}")?,
            }
        }
        Ok(())
    }
}

/// One term of the JSON series form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesTerm {
    pub exponent: String,
    pub coefficient: String,
}

impl FiniteHahn<Rational> {
    pub fn to_json_terms(&self) -> Vec<SeriesTerm> {
        self.terms
            .iter()
            .map(|(e, c)| SeriesTerm { exponent: e.to_string(), coefficient: c.to_string() })
            .collect()
    }

    pub fn from_json_terms(terms: &[SeriesTerm]) -> Result<Self> {
        let mut f = Self::zero();
        for t in terms {
            f.add_term(parse_rational(&t.exponent)?, parse_rational(&t.coefficient)?);
        }
        Ok(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::Polynomial;
    use crate::rational::{int, rat};

    fn rs() -> MahlerOperator {
        let p = |t: &[(u64, i64)]| Polynomial::from_terms(t.iter().map(|&(e, c)| (e, int(c))));
        MahlerOperator::new(2, vec![p(&[(0, -2)]), p(&[(0, -1), (1, 1)]), p(&[(1, 1)])]).unwrap()
    }

    fn series(t: &[((i64, i64), i64)]) -> FiniteHahn {
        FiniteHahn::from_terms(t.iter().map(|&((a, b), c)| (rat(a, b), int(c))))
    }

    #[test]
    fn valuation() {
        assert_eq!(FiniteHahn::<Rational>::zero().val(), ExtRational::PosInf);
        let f = series(&[((-1, 2), 1), ((-1, 4), 1), ((-1, 8), 1)]);
        assert_eq!(f.val(), ExtRational::Finite(rat(-1, 2)));
        assert_eq!(series(&[((1, 1), 2), ((0, 1), -3)]).val(), ExtRational::Finite(int(0)));
    }

    #[test]
    fn substitution() {
        let f = series(&[((-1, 2), 1), ((1, 1), 1)]);
        assert_eq!(f.mahler_substitute(2, 1), series(&[((-1, 1), 1), ((2, 1), 1)]));
        assert_eq!(f.mahler_substitute(2, 0), f);
        assert_eq!(series(&[((1, 4), 1)]).mahler_substitute(2, 2), series(&[((1, 1), 1)]));
    }

    #[test]
    fn operator_application() {
        let l = rs();
        assert_eq!(
            apply_operator(&l, &series(&[((1, 1), 1)])),
            series(&[((5, 1), 1), ((3, 1), 1), ((2, 1), -1), ((1, 1), -2)])
        );
        assert_eq!(apply_operator(&l, &series(&[((0, 1), 1)])), series(&[((1, 1), 2), ((0, 1), -3)]));
        assert_eq!(apply_operator(&l, &series(&[((-1, 2), 1)])), series(&[((0, 1), 1), ((-1, 2), -2)]));
    }

    #[test]
    fn display_and_json() {
        let f = FiniteHahn::from_terms([(rat(-1, 2), int(1)), (rat(-1, 4), int(-2)), (int(0), rat(-1, 3)), (int(8), rat(-1, 48))]);
        assert_eq!(f.to_string(), "z^(-1/2) - 2*z^(-1/4) - 1/3 - 1/48*z^8");
        assert_eq!(FiniteHahn::from_json_terms(&f.to_json_terms()).unwrap(), f);
    }
}
