use num::{BigInt, Integer, One, ToPrimitive, Zero};

use crate::field::Field;
use crate::operator::MahlerOperator;
use crate::rational::{pow, ExtRational, Rational};
use crate::set::SortedRationalSet;

/// A support point `(ell^index, ordinate)` of the operator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Point {
    pub index: usize,
    pub ordinate: u64,
    pub abscissa: Rational,
    pub height: Rational,
    pub(crate) abscissa_int: BigInt,
    pub(crate) height_int: BigInt,
}

/// Newton polygon of an operator. Vertex `k` is `(ell^alpha[k], beta[k])` for `k = 0..=kappa`,
/// and `slopes[k - 1]` is the slope `mu_k` of the edge ending at vertex `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonData {
    pub ell: u64,
    pub n: usize,
    pub points: Vec<Point>,
    pub alpha: Vec<usize>,
    pub beta: Vec<u64>,
    pub slopes: Vec<Rational>,
    pub d: u64,
    pub(crate) ell_pow: Vec<Rational>,
    pub(crate) ell_pow_int: Vec<BigInt>,
    pub(crate) thresholds: Vec<Rational>,
}

fn cross(o: &(Rational, Rational), a: &(Rational, Rational), b: &(Rational, Rational)) -> Rational {
    (&a.0 - &o.0) * (&b.1 - &o.1) - (&a.1 - &o.1) * (&b.0 - &o.0)
}

/// Lower convex hull by monotone chain; collinear points are dropped.
fn lower_hull(mut pts: Vec<(Rational, Rational)>) -> Vec<(Rational, Rational)> {
    pts.sort();
    pts.dedup_by(|b, a| a.0 == b.0);
    let mut hull: Vec<(Rational, Rational)> = Vec::with_capacity(pts.len());
    for p in pts {
        while hull.len() >= 2 && cross(&hull[hull.len() - 2], &hull[hull.len() - 1], &p) <= Rational::zero() {
            hull.pop();
        }
        hull.push(p);
    }
    hull
}

fn hull_slopes(hull: &[(Rational, Rational)]) -> Vec<Rational> {
    hull.windows(2).map(|w| (&w[1].1 - &w[0].1) / (&w[1].0 - &w[0].0)).collect()
}

pub fn build_polygon<K: Field>(l: &MahlerOperator<K>) -> NewtonData {
    let ell = l.ell();
    let n = l.order();
    let ell_pow: Vec<Rational> = (0..=n).map(|i| pow(ell, i)).collect();
    let points = l
        .support_points()
        .into_iter()
        .map(|p| Point {
            index: p.index,
            ordinate: p.ordinate,
            abscissa: ell_pow[p.index].clone(),
            height: Rational::from_integer(p.ordinate.into()),
            abscissa_int: ell_pow[p.index].to_integer(),
            height_int: p.ordinate.into(),
        })
        .collect();
    let lowest: Vec<(Rational, Rational)> = l
        .coeffs()
        .iter()
        .enumerate()
        .filter_map(|(i, a)| a.val().map(|v| (ell_pow[i].clone(), Rational::from_integer(v.into()))))
        .collect();
    let hull = lower_hull(lowest);
    let alpha: Vec<usize> = hull.iter().map(|(x, _)| ell_pow.iter().position(|p| p == x).unwrap()).collect();
    let beta: Vec<u64> = hull.iter().map(|(_, y)| y.to_integer().to_u64().unwrap()).collect();
    let slopes = hull_slopes(&hull);
    let d = slopes
        .iter()
        .fold(BigInt::one(), |acc, s| acc.lcm(s.denom()))
        .to_u64()
        .expect("slope denominator fits in u64");
    let thresholds = slopes
        .iter()
        .enumerate()
        .map(|(k, mu)| -(&ell_pow[alpha[k + 1]] * mu) + Rational::from_integer(beta[k + 1].into()))
        .collect();
    let ell_pow_int = ell_pow.iter().map(Rational::to_integer).collect();
    NewtonData { ell, n, points, alpha, beta, slopes, d, ell_pow, ell_pow_int, thresholds }
}

impl NewtonData {
    pub fn kappa(&self) -> usize {
        self.slopes.len()
    }

    /// `mu_k` with `mu_0 = -inf` and `mu_(kappa+1) = +inf`.
    pub fn mu(&self, k: usize) -> ExtRational {
        if k == 0 {
            ExtRational::NegInf
        } else if k > self.kappa() {
            ExtRational::PosInf
        } else {
            ExtRational::Finite(self.slopes[k - 1].clone())
        }
    }

    /// `-mu_k` for `1 <= k <= kappa`.
    pub fn neg_mu(&self, k: usize) -> Rational {
        -&self.slopes[k - 1]
    }

    pub fn mu_kappa(&self) -> &Rational {
        self.slopes.last().expect("kappa >= 1")
    }

    /// `ell^i` for `0 <= i <= n`.
    pub fn ell_pow(&self, i: usize) -> &Rational {
        &self.ell_pow[i]
    }

    pub fn vertices(&self) -> Vec<(Rational, Rational)> {
        self.alpha
            .iter()
            .zip(&self.beta)
            .map(|(&a, &b)| (self.ell_pow[a].clone(), Rational::from_integer(b.into())))
            .collect()
    }

    /// `-S(L) = {-mu_1, ..., -mu_kappa}`.
    pub fn neg_slopes(&self) -> SortedRationalSet {
        self.slopes.iter().map(|m| -m).collect()
    }

    pub fn in_zdl(&self, v: &Rational) -> bool {
        crate::rational::in_zdl(v, self.d, self.ell)
    }

    pub fn height_h(&self, v: &Rational) -> crate::error::Result<u64> {
        crate::rational::height_h(v, self.d, self.ell)
    }

    /// Slopes of the lower hull of `{(0, q)}` together with the valuation points.
    pub fn inhomogeneous_slopes(&self, q: &Rational) -> SortedRationalSet {
        let mut pts: Vec<(Rational, Rational)> = self
            .points
            .iter()
            .map(|p| (p.abscissa.clone(), p.height.clone()))
            .collect();
        pts.push((Rational::zero(), q.clone()));
        hull_slopes(&lower_hull(pts)).into_iter().collect()
    }
}
