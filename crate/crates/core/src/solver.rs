use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::hahn::{apply_operator, FiniteHahn};
use crate::newton::{build_polygon, NewtonData};
use crate::operator::MahlerOperator;
use crate::rational::Rational;
use crate::receptacle::Membership;
use crate::rset::{compute_r, RsetRun};
use crate::set::SortedRationalSet;
use crate::Options;

/// Matrix of the equations `[z^delta] L(f) = 0`, rows `delta` in `psi(R)`, columns `gamma` in `R`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearSystem<K = Rational> {
    pub rows: SortedRationalSet,
    pub cols: SortedRationalSet,
    pub entries: Vec<Vec<K>>,
}

impl<K: Field> LinearSystem<K> {
    pub fn entry(&self, delta: &Rational, gamma: &Rational) -> Option<&K> {
        Some(&self.entries[self.rows.index_of(delta)?][self.cols.index_of(gamma)?])
    }
}

pub fn assemble_system<K: Field>(
    nd: &NewtonData,
    l: &MahlerOperator<K>,
    r: &SortedRationalSet,
    opts: &Options,
) -> LinearSystem<K> {
    let rows: SortedRationalSet = r.iter().map(|g| nd.psi(g)).collect();
    let points = l.support_points();
    let columns = opts.exec.map(r.as_slice(), |g| {
        points
            .iter()
            .filter_map(|p| {
                let delta = g * nd.ell_pow(p.index) + Rational::from_integer(p.ordinate.into());
                rows.index_of(&delta).map(|row| (row, p.coeff.clone()))
            })
            .collect::<Vec<_>>()
    });
    let mut entries = vec![vec![K::zero(); r.len()]; rows.len()];
    for (col, scattered) in columns.into_iter().enumerate() {
        for (row, c) in scattered {
            let cell = &mut entries[row][col];
            *cell = cell.clone() + c;
        }
    }
    LinearSystem { rows, cols: r.clone(), entries }
}

/// Reduces `m` in place to reduced row echelon form and returns the pivot columns. Among the
/// candidate rows for a pivot the one with fewest nonzero entries is chosen.
pub fn rref<K: Field>(m: &mut [Vec<K>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..ncols {
        let candidate = (rank..m.len())
            .filter(|&r| !m[r][col].is_zero())
            .min_by_key(|&r| m[r].iter().filter(|x| !x.is_zero()).count());
        let Some(p) = candidate else { continue };
        m.swap(rank, p);
        let inv = K::one() / m[rank][col].clone();
        for x in m[rank].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        let pivot_row = m[rank].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r == rank || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x = x.clone() - factor.clone() * y.clone();
                }
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    pivots
}

/// Nullspace basis in canonical form: reduced echelon over increasing exponents, so each vector
/// has a 1 at its smallest-exponent nonzero coordinate.
pub fn kernel_basis<K: Field>(s: &LinearSystem<K>) -> Vec<Vec<K>> {
    let ncols = s.cols.len();
    let mut m = s.entries.clone();
    let pivots = rref(&mut m, ncols);
    let mut basis: Vec<Vec<K>> = (0..ncols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![K::zero(); ncols];
            v[free] = K::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[row][free].clone();
            }
            v
        })
        .collect();
    rref(&mut basis, ncols);
    basis
}

pub fn rank<K: Field>(vectors: &[Vec<K>]) -> usize {
    let ncols = vectors.first().map_or(0, Vec::len);
    let mut m = vectors.to_vec();
    rref(&mut m, ncols).len()
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolutionElement<K = Rational> {
    pub full: FiniteHahn<K>,
    pub restricted: FiniteHahn<K>,
}

/// Output of [`solve_on`].
#[derive(Clone, Debug)]
pub struct Solution<K = Rational> {
    pub newton: NewtonData,
    pub rset: RsetRun,
    pub system: LinearSystem<K>,
    pub basis: Vec<SolutionElement<K>>,
    pub restricted_rank: usize,
}

impl<K: Field> Solution<K> {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }
}

/// Truncations to `e` of a basis of the Hahn-series solutions of `L y = 0`.
pub fn solve_on<K: Field>(l: &MahlerOperator<K>, e: &SortedRationalSet, opts: &Options) -> Result<Solution<K>> {
    let newton = build_polygon(l);
    let rset = compute_r(&newton, e, opts)?;
    let system = assemble_system(&newton, l, &rset.final_set, opts);
    let basis: Vec<SolutionElement<K>> = kernel_basis(&system)
        .into_iter()
        .map(|v| {
            let full = FiniteHahn::from_terms(rset.final_set.iter().cloned().zip(v));
            let restricted = full.restrict(e);
            SolutionElement { full, restricted }
        })
        .collect();
    let restricted_vectors: Vec<Vec<K>> =
        basis.iter().map(|b| e.iter().map(|x| b.restricted.coeff_or_zero(x)).collect()).collect();
    let restricted_rank = rank(&restricted_vectors);
    Ok(Solution { newton, rset, system, basis, restricted_rank })
}

/// Exponents of `L(f)` lying in `psi(R)`.
pub fn residual_in<K: Field>(
    nd: &NewtonData,
    l: &MahlerOperator<K>,
    f: &FiniteHahn<K>,
    r: &SortedRationalSet,
) -> SortedRationalSet {
    let rows: SortedRationalSet = r.iter().map(|g| nd.psi(g)).collect();
    apply_operator(l, f).support().intersection(&rows)
}

pub const DEFAULT_GREEDY_LIMIT: usize = 100_000;

/// Coefficient of `z^delta` in `L(z^gamma)`.
fn image_coeff<K: Field>(nd: &NewtonData, l: &MahlerOperator<K>, gamma: &Rational, delta: &Rational) -> K {
    l.support_points()
        .into_iter()
        .filter(|p| &(gamma * nd.ell_pow(p.index) + Rational::from_integer(p.ordinate.into())) == delta)
        .fold(K::zero(), |acc, p| acc + p.coeff)
}

/// Extends `f0` term by term: each step adds `a z^gamma` with `gamma = pi(val g)`, `g = -L(f)`,
/// until `g = 0` or `pi(val g)` exceeds `bound`.
pub fn greedy_extend<K: Field>(
    l: &MahlerOperator<K>,
    f0: &FiniteHahn<K>,
    bound: &Rational,
    limit: usize,
) -> Result<FiniteHahn<K>> {
    let nd = build_polygon(l);
    let bottom = nd.neg_slopes();
    let mut f = f0.clone();
    let mut g = apply_operator(l, &f).scale(&-K::one());
    for _ in 0..limit {
        let (val, lead) = match g.leading() {
            Some((v, c)) => (v.clone(), c.clone()),
            None => return Ok(f),
        };
        let gamma = nd.pi(&val);
        if &gamma > bound {
            return Ok(f);
        }
        if bottom.contains(&gamma) {
            return Err(Error::DoesNotExtend(format!("next exponent {gamma} lies in -S(L)")));
        }
        let c = image_coeff(&nd, l, &gamma, &val);
        if c.is_zero() {
            return Err(Error::DoesNotExtend(format!("vanishing leading coefficient at {gamma}")));
        }
        let a = lead / c;
        let step = FiniteHahn::monomial(gamma, a);
        g = g.sub(&apply_operator(l, &step));
        f.add_assign(&step);
    }
    Err(Error::IterationLimit(limit))
}

/// Coefficients on `targets` of the solution whose coefficients on `-S(L)` are those of `f0`.
/// Each coefficient is solved from the equation at `z^psi(gamma)` in terms of the coefficients
/// at `Delta(gamma)`, which are smaller; exponents outside `V` carry zero.
pub fn extend_on<K: Field>(
    l: &MahlerOperator<K>,
    f0: &FiniteHahn<K>,
    targets: &SortedRationalSet,
    membership: &Membership,
) -> Result<FiniteHahn<K>> {
    let nd = membership.newton();
    let mut memo: HashMap<Rational, K> = HashMap::new();
    let mut out = FiniteHahn::zero();
    for t in targets {
        let c = extension_coeff(nd, l, f0, t, membership, &mut memo)?;
        out.add_term(t.clone(), c);
    }
    Ok(out)
}

fn extension_coeff<K: Field>(
    nd: &NewtonData,
    l: &MahlerOperator<K>,
    f0: &FiniteHahn<K>,
    gamma: &Rational,
    membership: &Membership,
    memo: &mut HashMap<Rational, K>,
) -> Result<K> {
    if let Some(c) = memo.get(gamma) {
        return Ok(c.clone());
    }
    let value = if nd.neg_slopes().contains(gamma) {
        f0.coeff_or_zero(gamma)
    } else if !membership.contains(gamma)? {
        K::zero()
    } else {
        let delta = nd.psi(gamma);
        let mut diagonal = K::zero();
        let mut rest = K::zero();
        for p in l.support_points() {
            let w = (&delta - Rational::from_integer(p.ordinate.into())) / nd.ell_pow(p.index);
            if &w == gamma {
                diagonal = diagonal + p.coeff;
            } else {
                let fw = extension_coeff(nd, l, f0, &w, membership, memo)?;
                rest = rest + p.coeff * fw;
            }
        }
        if diagonal.is_zero() {
            return Err(Error::DoesNotExtend(format!("vanishing diagonal coefficient at {gamma}")));
        }
        -(rest / diagonal)
    };
    memo.insert(gamma.clone(), value.clone());
    Ok(value)
}

/// For `n = 1`: whether the lowest coefficients of `a_0` and `a_1` are opposite.
pub fn order_one_existence<K: Field>(l: &MahlerOperator<K>) -> Result<bool> {
    if l.order() != 1 {
        return Err(Error::Precondition(format!("order is {}, expected 1", l.order())));
    }
    let a0 = l.coeff(0).lowest_coeff().expect("a_0 is nonzero").clone();
    let a1 = l.coeff(1).lowest_coeff().expect("a_1 is nonzero").clone();
    Ok(a0 == -a1)
}
