use std::collections::HashMap;
use std::fmt;

use num::{One, Signed};

use crate::error::{Error, Result};
use crate::newton::NewtonData;
use crate::rational::{ExtRational, Rational};
use crate::receptacle::compute_v;
use crate::set::SortedRationalSet;
use crate::Options;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Call {
    Param,
    Interval,
}

/// One evaluated node of the lower-bound recursion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceEvent {
    pub depth: usize,
    pub call: Call,
    pub kappa0: usize,
    pub w: Rational,
    pub bound: Rational,
}

impl fmt::Display for TraceEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.call {
            Call::Param => "param",
            Call::Interval => "interval",
        };
        write!(f, "{:indent$}{name}({}, {}) = {}", "", self.kappa0, self.w, self.bound, indent = 2 * self.depth)
    }
}

/// State of one run of the epsilon lower-bound recursion: the certified bounds `theta_k` on
/// `epsilon(-mu_k)` and memo tables keyed by `(kappa0, w)`.
#[derive(Debug)]
pub struct EpsilonContext<'a> {
    nd: &'a NewtonData,
    theta: Vec<Option<Rational>>,
    memo_param: HashMap<(usize, Rational), Rational>,
    memo_interval: HashMap<(usize, Rational), Rational>,
    v1: Option<SortedRationalSet>,
    trace: Option<Vec<TraceEvent>>,
    depth: usize,
    max_chain: usize,
}

fn ell_power(nd: &NewtonData, exp: i64) -> Rational {
    let p = Rational::from_integer(num::pow(num::BigInt::from(nd.ell), exp.unsigned_abs() as usize));
    if exp >= 0 {
        p
    } else {
        p.recip()
    }
}

impl<'a> EpsilonContext<'a> {
    pub fn new(nd: &'a NewtonData) -> Self {
        Self {
            nd,
            theta: vec![None; nd.kappa() + 1],
            memo_param: HashMap::new(),
            memo_interval: HashMap::new(),
            v1: None,
            trace: None,
            depth: 0,
            max_chain: 0,
        }
    }

    pub fn with_trace(mut self) -> Self {
        self.trace = Some(Vec::new());
        self
    }

    pub fn trace(&self) -> &[TraceEvent] {
        self.trace.as_deref().unwrap_or(&[])
    }

    pub fn theta(&self, k: usize) -> Option<&Rational> {
        self.theta.get(k).and_then(Option::as_ref)
    }

    pub fn thetas(&self) -> Vec<(usize, Rational)> {
        (1..=self.nd.kappa()).filter_map(|k| self.theta(k).map(|t| (k, t.clone()))).collect()
    }

    /// Longest chain of interval recursions seen so far.
    pub fn max_chain(&self) -> usize {
        self.max_chain
    }

    /// `theta_k = lb_eps_param(k, -mu_k)` for `k = kappa, ..., 1`.
    pub fn seed_thetas(&mut self) -> Result<()> {
        for k in (1..=self.nd.kappa()).rev() {
            if self.theta[k].is_none() {
                let t = self.lb_eps_param(k, &self.nd.neg_mu(k))?;
                self.theta[k] = Some(t);
            }
        }
        Ok(())
    }

    fn record(&mut self, call: Call, kappa0: usize, w: &Rational, bound: &Rational) {
        if let Some(t) = self.trace.as_mut() {
            t.push(TraceEvent { depth: self.depth, call, kappa0, w: w.clone(), bound: bound.clone() });
        }
    }

    fn check_input(&self, kappa0: usize, v: &Rational) -> Result<()> {
        if !self.nd.in_zdl(v) {
            return Err(Error::NotInZdl { value: v.to_string(), d: self.nd.d, ell: self.nd.ell });
        }
        if kappa0 > self.nd.kappa() {
            return Err(Error::Precondition(format!("kappa0 = {kappa0} exceeds kappa")));
        }
        if let Some(k) = (kappa0 + 1..=self.nd.kappa()).find(|&k| self.theta(k).is_none()) {
            return Err(Error::Precondition(format!("theta_{k} is not set")));
        }
        Ok(())
    }

    fn v1_gap(&mut self) -> Result<Rational> {
        if self.v1.is_none() {
            self.v1 = Some(compute_v(self.nd, 1, None, &Options::default())?.final_level().clone());
        }
        let v1 = self.v1.as_ref().expect("just computed");
        let bottom = self.nd.neg_mu(self.nd.kappa());
        Ok(match v1.successor(&bottom) {
            Some(w) => w - bottom,
            None => Rational::one(),
        })
    }

    /// Positive lower bound on `epsilon(v)`.
    pub fn lb_eps_param(&mut self, kappa0: usize, v: &Rational) -> Result<Rational> {
        self.check_input(kappa0, v)?;
        if ExtRational::Finite(v.clone()) > -self.nd.mu(kappa0) {
            return Err(Error::Precondition(format!("{v} lies above -mu_{kappa0}")));
        }
        let key = (kappa0, v.clone());
        if let Some(m) = self.memo_param.get(&key) {
            return Ok(m.clone());
        }
        let kappa = self.nd.kappa();
        let bottom = self.nd.neg_mu(kappa);
        let out = if v < &bottom {
            &bottom - v
        } else if v == &bottom {
            self.v1_gap()?
        } else if let Some(k) = (kappa0 + 1..=kappa)
            .find(|&k| v > &self.nd.neg_mu(k) && ExtRational::Finite(v.clone()) < -self.nd.mu(k - 1))
        {
            self.depth += 1;
            let m = self.interval_at(k - 1, v, 0, v);
            self.depth -= 1;
            m?
        } else if let Some(k) = (kappa0 + 1..=kappa).find(|&k| k >= 2 && v == &self.nd.neg_mu(k - 1)) {
            self.vertex_case(k, v)?
        } else {
            return Err(Error::Precondition(format!("cannot locate {v} among the slopes")));
        };
        self.record(Call::Param, kappa0, v, &out);
        self.memo_param.insert(key, out.clone());
        Ok(out)
    }

    /// Bound at `v = -mu_(k-1)` from the predecessors `Delta(v)`.
    fn vertex_case(&mut self, k: usize, v: &Rational) -> Result<Rational> {
        let mut best = ExtRational::PosInf;
        let shift = self.nd.alpha[k - 2] as i64;
        for wp in self.nd.delta(v).iter() {
            self.depth += 1;
            let m = self.lb_eps_param(k - 1, wp);
            self.depth -= 1;
            let d = self.nd.d_index(v, wp)? as i64;
            best = best.min(ExtRational::Finite(m? * ell_power(self.nd, d - shift)));
        }
        if k >= 3 {
            best = best.min(ExtRational::Finite(&self.nd.slopes[k - 2] - &self.nd.slopes[k - 3]));
        }
        if let Some(g) = self.nd.pi_psi_gap(v) {
            best = best.min(ExtRational::Finite(g));
        }
        best.finite().cloned().ok_or_else(|| Error::Invariant(format!("empty minimum at {v}")))
    }

    /// Positive lower bound on `epsilon(w)` for `w < -mu_kappa0`, returned with `w`.
    pub fn lb_eps_interval(&mut self, kappa0: usize, w: &Rational) -> Result<(Rational, Rational)> {
        let m = self.interval_at(kappa0, w, 0, w)?;
        Ok((w.clone(), m))
    }

    fn chain_limit(&self, kappa0: usize, root: &Rational) -> Result<Rational> {
        let k = kappa0 + 1;
        let theta = self.theta(k).expect("checked on entry");
        let floor = (Rational::from_integer(self.nd.d.into())
            * self.nd.ell_pow(self.nd.n))
        .recip();
        let n1 = Rational::from_integer((self.nd.n + 1).into());
        let h = Rational::from_integer(self.nd.height_h(root)?.into());
        Ok(n1 * (root + &self.nd.slopes[k - 1]) / theta.min(&floor) + h + Rational::one())
    }

    fn interval_at(&mut self, kappa0: usize, w: &Rational, chain: usize, root: &Rational) -> Result<Rational> {
        if kappa0 >= self.nd.kappa() {
            return Err(Error::Precondition(format!("kappa0 = {kappa0} must be below kappa")));
        }
        self.check_input(kappa0, w)?;
        if ExtRational::Finite(w.clone()) >= -self.nd.mu(kappa0) {
            return Err(Error::Precondition(format!("{w} is not below -mu_{kappa0}")));
        }
        self.max_chain = self.max_chain.max(chain);
        if root > &self.nd.neg_mu(kappa0 + 1) {
            let limit = self.chain_limit(kappa0, root)?;
            if Rational::from_integer(chain.into()) > limit {
                return Err(Error::Invariant(format!("recursion below {root} deeper than {limit}")));
            }
        }
        let key = (kappa0, w.clone());
        if let Some(m) = self.memo_interval.get(&key) {
            return Ok(m.clone());
        }
        let k = kappa0 + 1;
        let floor = self.nd.neg_mu(k);
        let leaf = &floor + self.theta(k).expect("checked on entry");
        let out = if w < &leaf {
            if w < &floor {
                self.depth += 1;
                let m = self.lb_eps_param(k, w);
                self.depth -= 1;
                m?
            } else {
                leaf - w
            }
        } else {
            let mut best = ExtRational::PosInf;
            let shift = self.nd.alpha[kappa0] as i64;
            for wp in self.nd.delta(w).iter() {
                self.depth += 1;
                let m = self.interval_at(kappa0, wp, chain + 1, root);
                self.depth -= 1;
                let d = self.nd.d_index(w, wp)? as i64;
                best = best.min(ExtRational::Finite(m? * ell_power(self.nd, d - shift)));
            }
            if kappa0 >= 1 {
                best = best.min(ExtRational::Finite(self.nd.neg_mu(kappa0) - w));
            }
            if let Some(g) = self.nd.pi_psi_gap(w) {
                best = best.min(ExtRational::Finite(g));
            }
            best.finite().cloned().ok_or_else(|| Error::Invariant(format!("empty minimum at {w}")))?
        };
        if !out.is_positive() {
            return Err(Error::Invariant(format!("non-positive bound {out} at {w}")));
        }
        self.record(Call::Interval, kappa0, w, &out);
        self.memo_interval.insert(key, out.clone());
        Ok(out)
    }
}

/// Positive lower bound on `epsilon(v) = min V_(>v) - v`.
pub fn lb_eps(nd: &NewtonData, v: &Rational) -> Result<Rational> {
    let mut ctx = EpsilonContext::new(nd);
    ctx.seed_thetas()?;
    ctx.lb_eps_param(0, v)
}

/// Positive lower bound on `tau = min(epsilon(-mu_1), ..., epsilon(-mu_kappa), 1/(d ell^n))`.
pub fn lb_tau(nd: &NewtonData) -> Result<Rational> {
    let mut ctx = EpsilonContext::new(nd);
    ctx.seed_thetas()?;
    Ok(tau_from_context(&ctx))
}

pub fn tau_from_context(ctx: &EpsilonContext<'_>) -> Rational {
    let nd = ctx.nd;
    let floor = (Rational::from_integer(nd.d.into()) * nd.ell_pow(nd.n)).recip();
    ctx.thetas().into_iter().map(|(_, t)| t).fold(floor, |a, b| a.min(b))
}
