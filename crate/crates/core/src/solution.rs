use std::fmt;

use serde::Serialize;

use crate::dual::DualPoint;
use crate::instance::InterdictionVector;
use crate::rat::Rat;

/// Which bound a returned interdiction certifies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Guarantee {
    /// `F(x)` equals the relaxed optimum (also `K(x) = 0 = OPT_I` when it is zero).
    #[serde(rename = "exact-opt-f")]
    ExactOptF,
    /// `F(x) ≤ (1+ε)·OPT_F`.
    #[serde(rename = "1+eps-of-opt-f")]
    OnePlusEpsOptF,
    /// `K(x) ≤ F(x) ≤ (2+ε)·OPT_I`, single capacity constraint.
    #[serde(rename = "2+eps-of-opt-i")]
    TwoPlusEpsOptI,
    /// `K(x) ≤ F(x) ≤ (1+t+ε)·OPT_I`, `t` capacity constraints.
    #[serde(rename = "1+t+eps-of-opt-i")]
    OnePlusTPlusEpsOptI,
}

impl Guarantee {
    pub fn as_str(self) -> &'static str {
        match self {
            Guarantee::ExactOptF => "exact-opt-f",
            Guarantee::OnePlusEpsOptF => "1+eps-of-opt-f",
            Guarantee::TwoPlusEpsOptI => "2+eps-of-opt-i",
            Guarantee::OnePlusTPlusEpsOptI => "1+t+eps-of-opt-i",
        }
    }
}

impl fmt::Display for Guarantee {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Work counters for one solve. All counts are deterministic.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SolveStats {
    pub candidates: usize,
    pub accept_tests: usize,
    pub dp_tables: usize,
    pub dp_states: usize,
    pub max_table_states: usize,
}

impl SolveStats {
    pub(crate) fn absorb(&mut self, other: &SolveStats) {
        self.accept_tests += other.accept_tests;
        self.dp_tables += other.dp_tables;
        self.dp_states += other.dp_states;
        self.max_table_states = self.max_table_states.max(other.max_table_states);
    }
}

/// An interdiction produced by one of the approximation drivers, reported in
/// the caller's original item indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub x: InterdictionVector,
    /// Exact `F(x)` on the preprocessed instance, recomputed after the search.
    pub f_value: Rat,
    pub guarantee: Guarantee,
    /// The ε the guarantee is stated for.
    pub eps: Rat,
    /// The ε′ the rounding grid actually used.
    pub eps_internal: Option<Rat>,
    pub z_star: Option<Rat>,
    pub alpha_star: Option<DualPoint>,
    /// `F(x) - max surviving profit`, a lower bound on `K(x)`.
    pub additive_cert: Rat,
    pub stats: SolveStats,
}

impl Solution {
    pub fn interdicted(&self) -> Vec<usize> {
        (0..self.x.len())
            .filter(|&i| self.x.is_interdicted(i))
            .collect()
    }
}
