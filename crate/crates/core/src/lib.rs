//! Solvers for the knapsack interdiction problem.
//!
//! A leader deletes items under a cost budget to minimize the best profit a
//! follower can pack under one or more capacity constraints. This crate
//! provides:
//!
//! * an exact pseudopolynomial solver for the LP-relaxed leader problem
//!   ([`dual::opt_f_exact`]), which is a 2-approximation for one constraint;
//! * a profit-rounding approximation scheme for the relaxed value and the
//!   resulting `(2+ε)` / `(1+t+ε)` interdiction approximations
//!   ([`fptas::approx_opt_f`], [`fptas::approx_interdiction`]);
//! * brute-force oracles for small instances ([`oracles`]).
//!
//! All arithmetic is exact ([`Rat`]).

pub mod dual;
pub mod error;
pub mod fptas;
pub mod generator;
pub mod instance;
pub mod linalg;
pub mod nominal;
pub mod oracles;
pub mod rat;
pub mod solution;

pub use dual::{CandidateSet, DualPoint};
pub use error::{Error, Result};
pub use instance::{parse_instance, preprocess, Instance, InterdictionVector, Preprocessed};
pub use rat::{ceil_div_rat, rat_pow, Rat};
pub use solution::{Guarantee, Solution, SolveStats};
