use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num::{Signed, Zero};

use crate::epsilon::lb_tau;
use crate::error::{Error, Result};
use crate::newton::NewtonData;
use crate::rational::{floor_to_u64, Rational};
use crate::set::SortedRationalSet;
use crate::Options;

/// Levels `V_0 <= V_1 <= ... <= V_M`, each intersected with `Q_(<= cap)` when a cap is set.
/// Every element is stored once together with the first level containing it.
#[derive(Clone, Debug)]
pub struct ReceptacleRun {
    depth: usize,
    cap: Option<Rational>,
    elems: SortedRationalSet,
    birth: Vec<usize>,
    sizes: Vec<usize>,
}

impl ReceptacleRun {
    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn cap(&self) -> Option<&Rational> {
        self.cap.as_ref()
    }

    /// `V_M`.
    pub fn final_level(&self) -> &SortedRationalSet {
        &self.elems
    }

    pub fn level(&self, i: usize) -> SortedRationalSet {
        SortedRationalSet::from_sorted(
            self.elems.iter().zip(&self.birth).filter(|(_, &b)| b <= i).map(|(v, _)| v.clone()).collect(),
        )
    }

    pub fn level_size(&self, i: usize) -> usize {
        self.sizes[i.min(self.sizes.len() - 1)]
    }

    /// `|V_0|, ..., |V_M|`.
    pub fn sizes(&self) -> Vec<usize> {
        (0..=self.depth).map(|i| self.level_size(i)).collect()
    }

    /// Level after which no new element appears, if reached before `M`.
    pub fn stable_from(&self) -> Option<usize> {
        (self.sizes.len() <= self.depth).then(|| self.sizes.len() - 1)
    }

    pub fn birth(&self, v: &Rational) -> Option<usize> {
        self.elems.index_of(v).map(|k| self.birth[k])
    }

    pub fn contains_at(&self, v: &Rational, i: usize) -> bool {
        self.birth(v).is_some_and(|b| b <= i)
    }
}

/// `V_0 = -S(L)`, `V_(i+1) = union of pi(Psi(v))` over `v` in `V_i`, expanding only the newest
/// elements at each step.
pub fn compute_v(nd: &NewtonData, m: usize, cap: Option<&Rational>, opts: &Options) -> Result<ReceptacleRun> {
    let keep = |x: &Rational| cap.is_none_or(|b| x <= b);
    let mut birth: HashMap<Rational, usize> = nd.neg_slopes().into_iter().filter(keep).map(|v| (v, 0)).collect();
    let mut frontier: Vec<Rational> = birth.keys().cloned().collect();
    frontier.sort_unstable();
    let mut sizes = vec![birth.len()];
    for i in 1..=m {
        if frontier.is_empty() {
            break;
        }
        let mut images = opts.exec.flat_map(&frontier, |v| {
            let mut out = nd.pi_psi_raw(v);
            out.retain(|x| x != v && keep(x));
            out
        });
        opts.exec.sort(&mut images);
        images.dedup();
        images.retain(|x| !birth.contains_key(x));
        for x in &images {
            birth.insert(x.clone(), i);
        }
        frontier = images;
        sizes.push(birth.len());
        if birth.len() > opts.budget {
            return Err(Error::BudgetExceeded { size: birth.len(), budget: opts.budget });
        }
    }
    let mut pairs: Vec<(Rational, usize)> = birth.into_iter().collect();
    opts.exec.sort(&mut pairs);
    let (elems, birth): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
    Ok(ReceptacleRun { depth: m, cap: cap.cloned(), elems: SortedRationalSet::from_sorted(elems), birth, sizes })
}

/// `floor((n + 1)(v + mu_kappa) / tau_lb + h(v))`.
pub fn iota_bound(nd: &NewtonData, v: &Rational, tau_lb: &Rational) -> Result<u64> {
    if !tau_lb.is_positive() {
        return Err(Error::Precondition(format!("tau lower bound {tau_lb} is not positive")));
    }
    let shifted = v + nd.mu_kappa();
    if shifted.is_negative() {
        return Err(Error::Precondition(format!("{v} is below -mu_kappa")));
    }
    let h = nd.height_h(v)?;
    let n1 = Rational::from_integer((nd.n + 1).into());
    floor_to_u64(&(n1 * shifted / tau_lb + Rational::from_integer(h.into())))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MembershipAnswer {
    pub in_v: bool,
    pub iota: Option<u64>,
}

/// Membership in `V` for one operator; the tau bound and the deepest receptacle run are cached.
#[derive(Debug)]
pub struct Membership {
    nd: NewtonData,
    opts: Options,
    tau: OnceLock<Rational>,
    run: Mutex<Option<ReceptacleRun>>,
}

impl Membership {
    pub fn new(nd: NewtonData, opts: Options) -> Self {
        Self { nd, opts, tau: OnceLock::new(), run: Mutex::new(None) }
    }

    pub fn with_tau(nd: NewtonData, opts: Options, tau: Rational) -> Self {
        let out = Self::new(nd, opts);
        out.tau.set(tau).expect("fresh cell");
        out
    }

    pub fn newton(&self) -> &NewtonData {
        &self.nd
    }

    pub fn tau_lb(&self) -> Result<&Rational> {
        if let Some(t) = self.tau.get() {
            return Ok(t);
        }
        let t = lb_tau(&self.nd)?;
        Ok(self.tau.get_or_init(|| t))
    }

    pub fn query(&self, v: &Rational) -> Result<MembershipAnswer> {
        if !self.nd.in_zdl(v) || v < &-self.nd.mu_kappa() {
            return Ok(MembershipAnswer { in_v: false, iota: None });
        }
        let iota = iota_bound(&self.nd, v, self.tau_lb()?)?;
        let depth = usize::try_from(iota).map_err(|e| Error::Precondition(e.to_string()))?;
        let mut guard = self.run.lock().expect("membership cache poisoned");
        let fits = guard.as_ref().is_some_and(|r| r.depth() >= depth && r.cap().is_some_and(|c| c >= v));
        if !fits {
            let (depth, cap) = match guard.as_ref() {
                Some(r) => (r.depth().max(depth), r.cap().cloned().unwrap_or_else(Rational::zero).max(v.clone())),
                None => (depth, v.clone()),
            };
            *guard = Some(compute_v(&self.nd, depth, Some(&cap), &self.opts)?);
        }
        let in_v = guard.as_ref().expect("run present").contains_at(v, depth);
        Ok(MembershipAnswer { in_v, iota: Some(iota) })
    }

    pub fn contains(&self, v: &Rational) -> Result<bool> {
        self.query(v).map(|a| a.in_v)
    }
}

pub fn v_membership(nd: &NewtonData, v: &Rational) -> Result<bool> {
    Membership::new(nd.clone(), Options::default()).contains(v)
}
