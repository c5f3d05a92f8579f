use num::BigInt;

use crate::error::{Error, Result};
use crate::newton::NewtonData;
use crate::rational::{mul_add, sub_div, ExtRational, Rational};
use crate::set::SortedRationalSet;

impl NewtonData {
    fn image(&self, p: &crate::newton::Point, v: &Rational) -> Rational {
        mul_add(v, &p.abscissa_int, &p.height_int)
    }

    fn preimage(&self, p: &crate::newton::Point, q: &Rational) -> Rational {
        sub_div(q, &p.height_int, &p.abscissa_int)
    }

    /// `Psi(v) = { v ell^i + j : (ell^i, j) in P(L) }`.
    pub fn psi_set(&self, v: &Rational) -> SortedRationalSet {
        self.points.iter().map(|p| self.image(p, v)).collect()
    }

    pub fn psi_direct(&self, v: &Rational) -> Rational {
        self.points.iter().map(|p| self.image(p, v)).min().expect("P(L) is nonempty")
    }

    pub fn pi_direct(&self, q: &Rational) -> Rational {
        self.points.iter().map(|p| self.preimage(p, q)).max().expect("P(L) is nonempty")
    }

    /// Vertex index `k - 1` where `-mu_k <= v <= -mu_(k-1)`.
    fn psi_vertex(&self, v: &Rational) -> usize {
        self.slopes.iter().position(|mu| &-mu <= v).unwrap_or(self.kappa())
    }

    fn pi_vertex(&self, q: &Rational) -> usize {
        self.thresholds.iter().position(|t| t <= q).unwrap_or(self.kappa())
    }

    pub fn psi(&self, v: &Rational) -> Rational {
        let k = self.psi_vertex(v);
        let out = mul_add(v, &self.ell_pow_int[self.alpha[k]], &BigInt::from(self.beta[k]));
        debug_assert_eq!(out, self.psi_direct(v));
        out
    }

    pub fn pi(&self, q: &Rational) -> Rational {
        let k = self.pi_vertex(q);
        let out = sub_div(q, &BigInt::from(self.beta[k]), &self.ell_pow_int[self.alpha[k]]);
        debug_assert_eq!(out, self.pi_direct(q));
        out
    }

    pub fn psi_ext(&self, v: &ExtRational) -> ExtRational {
        match v {
            ExtRational::Finite(q) => ExtRational::Finite(self.psi(q)),
            other => other.clone(),
        }
    }

    pub fn pi_ext(&self, q: &ExtRational) -> ExtRational {
        match q {
            ExtRational::Finite(x) => ExtRational::Finite(self.pi(x)),
            other => other.clone(),
        }
    }

    /// `pi(Psi(v))`; its least element is `v`.
    pub fn pi_psi(&self, v: &Rational) -> SortedRationalSet {
        SortedRationalSet::from_vec(self.pi_psi_raw(v))
    }

    /// `pi(Psi(v))` without sorting.
    pub(crate) fn pi_psi_raw(&self, v: &Rational) -> Vec<Rational> {
        self.points.iter().map(|p| self.pi(&self.image(p, v))).collect()
    }

    /// `min(pi(Psi(v)) \ {v}) - v`, or `None` when `pi(Psi(v)) = {v}`.
    pub fn pi_psi_gap(&self, v: &Rational) -> Option<Rational> {
        self.pi_psi(v).successor(v).map(|w| w - v)
    }

    /// The candidates `(psi(w) - beta) / ell^alpha` over `P(L)`, with their `alpha`.
    pub(crate) fn predecessors(&self, w: &Rational) -> Vec<(Rational, usize)> {
        let target = self.psi(w);
        self.points.iter().map(|p| (self.preimage(p, &target), p.index)).collect()
    }

    /// `Delta(w) = { (psi(w) - beta) / ell^alpha : (ell^alpha, beta) in P(L) } \ {w}`.
    pub fn delta(&self, w: &Rational) -> SortedRationalSet {
        self.predecessors(w).into_iter().map(|(x, _)| x).filter(|x| x != w).collect()
    }

    /// Least `alpha` with `w' = (psi(w) - beta) / ell^alpha` for some `(ell^alpha, beta)` in `P(L)`.
    pub fn d_index(&self, w: &Rational, wprime: &Rational) -> Result<usize> {
        if wprime == w {
            return Err(Error::Precondition(format!("{wprime} is not in Delta({w})")));
        }
        self.predecessors(w)
            .into_iter()
            .filter(|(x, _)| x == wprime)
            .map(|(_, alpha)| alpha)
            .min()
            .ok_or_else(|| Error::Precondition(format!("{wprime} is not in Delta({w})")))
    }
}
