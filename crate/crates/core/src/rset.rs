use num::{Signed, Zero};

use crate::epsilon::lb_tau;
use crate::error::{Error, Result};
use crate::newton::NewtonData;
use crate::rational::{floor_to_u64, Rational};
use crate::receptacle::{compute_v, ReceptacleRun};
use crate::set::SortedRationalSet;
use crate::Options;

/// The finite set `R` together with the parameters used to compute it.
#[derive(Clone, Debug)]
pub struct RsetRun {
    pub levels: Vec<SortedRationalSet>,
    pub final_set: SortedRationalSet,
    pub exponents: SortedRationalSet,
    pub n_cap: Rational,
    pub h: u64,
    pub m: usize,
    pub c: u64,
    pub tau_lb: Rational,
    pub steps: usize,
    pub receptacle: ReceptacleRun,
}

/// Parameters `(E restricted to Z_(d,l), H, N)` of an exponent set.
pub fn exponent_params(nd: &NewtonData, e: &SortedRationalSet) -> Result<(SortedRationalSet, u64, Rational)> {
    let filtered: SortedRationalSet = e.iter().filter(|v| nd.in_zdl(v)).cloned().collect();
    let mut h = 0;
    for v in &filtered {
        h = h.max(nd.height_h(v)?);
    }
    let top = filtered.union(&nd.neg_slopes()).max().cloned().expect("-S(L) is nonempty");
    let n_cap = if top.is_negative() { Rational::zero() } else { top };
    Ok((filtered, h, n_cap))
}

/// `floor((n + 1)(N + mu_kappa) / tau_lb) + H`.
pub fn c_bound(nd: &NewtonData, e: &SortedRationalSet, tau_lb: &Rational) -> Result<u64> {
    if !tau_lb.is_positive() {
        return Err(Error::Precondition(format!("tau lower bound {tau_lb} is not positive")));
    }
    let (_, h, n_cap) = exponent_params(nd, e)?;
    let n1 = Rational::from_integer((nd.n + 1).into());
    Ok(floor_to_u64(&(n1 * (n_cap + nd.mu_kappa()) / tau_lb))? + h)
}

pub fn compute_r(nd: &NewtonData, e: &SortedRationalSet, opts: &Options) -> Result<RsetRun> {
    let tau = lb_tau(nd)?;
    compute_r_with_tau(nd, e, tau, opts)
}

/// `R_0 = (E + -S(L)) & V_M`, `R_(i+1) = union over P(L) of ell^-alpha (psi(R_i) - beta) & V_M`,
/// with every `V_M` pruned to `Q_(<= N)`.
pub fn compute_r_with_tau(nd: &NewtonData, e: &SortedRationalSet, tau_lb: Rational, opts: &Options) -> Result<RsetRun> {
    let (exponents, h, n_cap) = exponent_params(nd, e)?;
    let c = c_bound(nd, e, &tau_lb)?;
    let m = usize::try_from((nd.n as u64 + 1) * c).map_err(|e| Error::Precondition(e.to_string()))?;
    let receptacle = compute_v(nd, m, Some(&n_cap), opts)?;
    let vm = receptacle.final_level();
    let mut levels = vec![exponents.union(&nd.neg_slopes()).intersection(vm)];
    loop {
        let current = levels.last().expect("R_0 present");
        let images = opts.exec.flat_map(current.as_slice(), |g| {
            let target = nd.psi(g);
            nd.points.iter().map(|p| (&target - &p.height) / &p.abscissa).collect::<Vec<_>>()
        });
        let next = SortedRationalSet::from_vec(images).intersection(vm).union(current);
        if &next == current {
            break;
        }
        levels.push(next);
        if levels.len() - 1 > c as usize {
            return Err(Error::Invariant(format!("R did not stabilise within c = {c} steps")));
        }
    }
    let steps = levels.len() - 1;
    let final_set = levels.last().expect("nonempty").clone();
    Ok(RsetRun { levels, final_set, exponents, n_cap, h, m, c, tau_lb, steps, receptacle })
}

/// Checks `-S(L) <= R` and that no `v` in `probe \ R` has `pi(Psi(v))` meeting `R`.
pub fn check_star(nd: &NewtonData, r: &SortedRationalSet, probe: &SortedRationalSet) -> bool {
    nd.neg_slopes().is_subset(r)
        && probe.difference(r).iter().all(|v| nd.pi_psi(v).intersection(r).is_empty())
}
