use std::fmt;
use std::str::FromStr;

use num::{BigInt, BigRational, Integer, One, Signed, Zero};


use crate::error::{Error, Result};
use crate::set::SortedRationalSet;

pub type Rational = BigRational;

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn parse_rational(text: &str) -> Result<Rational> {
    let bad = || Error::BadRational(text.to_string());
    let s = text.trim();
    let (numer, denom) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let numer = BigInt::from_str(numer).map_err(|_| bad())?;
    let denom = BigInt::from_str(denom).map_err(|_| bad())?;
    if denom.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(numer, denom))
}

/// Rationals extended by the two infinities, ordered `NegInf < Finite(_) < PosInf`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtRational {
    NegInf,
    Finite(Rational),
    PosInf,
}

impl ExtRational {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            ExtRational::Finite(q) => Some(q),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtRational::Finite(_))
    }
}

impl std::ops::Neg for ExtRational {
    type Output = ExtRational;

    fn neg(self) -> ExtRational {
        match self {
            ExtRational::NegInf => ExtRational::PosInf,
            ExtRational::Finite(q) => ExtRational::Finite(-q),
            ExtRational::PosInf => ExtRational::NegInf,
        }
    }
}

impl From<Rational> for ExtRational {
    fn from(q: Rational) -> Self {
        ExtRational::Finite(q)
    }
}

impl fmt::Display for ExtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRational::NegInf => f.write_str("-inf"),
            ExtRational::Finite(q) => write!(f, "{q}"),
            ExtRational::PosInf => f.write_str("+inf"),
        }
    }
}

fn strip(mut b: BigInt, by: &BigInt) -> BigInt {
    loop {
        let g = b.gcd(by);
        if g.is_one() {
            return b;
        }
        b /= g;
    }
}

/// Whether `d * ell^i * v` is an integer for some `i >= 0`.
pub fn in_zdl(v: &Rational, d: u64, ell: u64) -> bool {
    let b = v.denom().clone();
    let g = b.gcd(&BigInt::from(d));
    strip(b / g, &BigInt::from(ell)).is_one()
}

/// Least `i` with `d * ell^i * v` an integer.
pub fn height_h(v: &Rational, d: u64, ell: u64) -> Result<u64> {
    if !in_zdl(v, d, ell) {
        return Err(Error::NotInZdl { value: v.to_string(), d, ell });
    }
    let ell = BigInt::from(ell);
    let mut scaled = v * Rational::from_integer(BigInt::from(d));
    let mut i = 0;
    while !scaled.is_integer() {
        scaled *= Rational::from_integer(ell.clone());
        i += 1;
    }
    Ok(i)
}

pub fn naive_height(v: &Rational) -> BigInt {
    v.numer().abs().max(v.denom().clone())
}

/// All rationals `a/b` in lowest terms with `max(|a|, |b|) <= n`.
pub fn naive_height_set(n: u64) -> SortedRationalSet {
    let n = n as i64;
    let mut out = Vec::new();
    for b in 1..=n {
        for a in -n..=n {
            if a.gcd(&b) == 1 || (a == 0 && b == 1) {
                out.push(rat(a, b));
            }
        }
    }
    SortedRationalSet::from_vec(out)
}

/// `v * mul + add` for integers `mul > 0` and `add`; only the small gcd with `mul` is taken.
pub fn mul_add(v: &Rational, mul: &BigInt, add: &BigInt) -> Rational {
    let g = mul.gcd(v.denom());
    let (m, d) = (mul / &g, v.denom() / &g);
    let numer = v.numer() * m + add * &d;
    Rational::new_raw(numer, d)
}

/// `(q - sub) / div` for integers `div > 0` and `sub`; only the small gcd with `div` is taken.
pub fn sub_div(q: &Rational, sub: &BigInt, div: &BigInt) -> Rational {
    let numer = q.numer() - sub * q.denom();
    let g = numer.gcd(div);
    if g.is_zero() {
        return Rational::zero();
    }
    Rational::new_raw(&numer / &g, q.denom() * (div / &g))
}

pub fn floor_to_u64(q: &Rational) -> Result<u64> {
    let f = q.floor().to_integer();
    if f.is_negative() {
        return Err(Error::Precondition(format!("negative floor {f}")));
    }
    u64::try_from(f).map_err(|e| Error::Precondition(e.to_string()))
}

pub fn pow(base: u64, exp: usize) -> Rational {
    Rational::from_integer(num::pow(BigInt::from(base), exp))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zdl_membership() {
        assert!(in_zdl(&rat(-3, 8), 2, 2));
        assert!(in_zdl(&int(5), 2, 2));
        assert!(!in_zdl(&rat(1, 7), 2, 2));
        assert!(in_zdl(&rat(1, 12), 3, 2));
        assert!(!in_zdl(&rat(1, 9), 3, 2));
        assert!(in_zdl(&rat(1, 9), 1, 3));
    }

    #[test]
    fn heights() {
        assert_eq!(height_h(&rat(-1, 2), 2, 2).unwrap(), 0);
        assert_eq!(height_h(&rat(-1, 4), 2, 2).unwrap(), 1);
        assert_eq!(height_h(&rat(-3, 8), 2, 2).unwrap(), 2);
        assert!(height_h(&rat(1, 7), 2, 2).is_err());
    }

    #[test]
    fn small_height_sets() {
        let e1: Vec<_> = naive_height_set(1).iter().cloned().collect();
        assert_eq!(e1, vec![int(-1), int(0), int(1)]);
        let e2: Vec<_> = naive_height_set(2).iter().cloned().collect();
        assert_eq!(e2, vec![int(-2), int(-1), rat(-1, 2), int(0), rat(1, 2), int(1), int(2)]);
    }

    #[test]
    fn extended_order() {
        let a = ExtRational::Finite(int(-1000));
        assert!(ExtRational::NegInf < a && a < ExtRational::PosInf);
        assert_eq!(
            [ExtRational::PosInf, a.clone(), ExtRational::NegInf].iter().min(),
            Some(&ExtRational::NegInf)
        );
    }

    #[test]
    fn affine_helpers() {
        let (four, one) = (BigInt::from(4), BigInt::from(1));
        for v in [rat(-3, 8), rat(5, 6), int(0), rat(1, 2)] {
            assert_eq!(mul_add(&v, &four, &one), &v * int(4) + int(1));
            assert_eq!(sub_div(&v, &one, &four), (&v - int(1)) / int(4));
        }
        assert_eq!(sub_div(&int(1), &one, &four), int(0));
    }

    #[test]
    fn text_round_trip() {
        for s in ["-3/8", "5", "0", "7/2"] {
            assert_eq!(parse_rational(s).unwrap().to_string(), s);
        }
        assert_eq!(parse_rational("4/6").unwrap(), rat(2, 3));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}
