//! Truncations of the Hahn-series solutions of linear Mahler equations
//! `a_n(z) y(z^(l^n)) + ... + a_0(z) y(z) = 0`.
//!
//! The pipeline runs Newton polygon, the maps `Psi`, `psi`, `pi`, the receptacle `V`, lower
//! bounds on the gaps of `V`, the finite exponent set `R`, and an exact kernel computation.

pub mod epsilon;
pub mod error;
pub mod field;
pub mod hahn;
pub mod maps;
pub mod newton;
pub mod operator;
pub mod par;
pub mod rational;
pub mod receptacle;
pub mod rset;
pub mod set;
pub mod solver;

pub use epsilon::{lb_eps, lb_tau, EpsilonContext};
pub use error::{Error, Result};
pub use field::{Field, Fp};
pub use hahn::{apply_operator, FiniteHahn, SeriesTerm};
pub use newton::{build_polygon, NewtonData};
pub use operator::{MahlerOperator, Polynomial, SupportPoint};
pub use par::Exec;
pub use rational::{in_zdl, height_h, naive_height_set, parse_rational, ExtRational, Rational};
pub use receptacle::{compute_v, iota_bound, v_membership, Membership, ReceptacleRun};
pub use rset::{c_bound, check_star, compute_r, RsetRun};
pub use set::SortedRationalSet;
pub use solver::{
    assemble_system, extend_on, greedy_extend, kernel_basis, order_one_existence, solve_on, LinearSystem,
    Solution, SolutionElement,
};

/// Element cap for receptacle runs.
pub const DEFAULT_BUDGET: usize = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Options {
    pub exec: Exec,
    pub budget: usize,
}

impl Default for Options {
    fn default() -> Self {
        Self { exec: Exec::default(), budget: DEFAULT_BUDGET }
    }
}

impl Options {
    pub fn sequential() -> Self {
        Self { exec: Exec::Sequential, ..Self::default() }
    }
}
