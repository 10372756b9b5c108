//! Profit-rounding approximation scheme for the relaxed interdiction value.
//!
//! A guess `z` for `OPT_F` fixes the rounding unit `δ = ε′z/n`. For every dual
//! candidate `α` the reduced profits are rounded up to whole units and a DP
//! indexed by (item, rounded profit) finds the cheapest interdiction leaving at
//! most `k` units behind. Only `kδ ≤ (1+ε′)z` is tabulated, so a guess that is
//! too small prunes every solution and is rejected. The smallest accepted
//! guess on the geometric grid `z = (1+ε′)^j` is found by binary search.

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::dual::{
    candidate_alphas, dual_offset, f_exact, reduced_profits, CandidateSet, DualPoint,
};
use crate::error::{Error, Result};
use crate::instance::{preprocess, Instance, InterdictionVector};
use crate::nominal::max_surviving_profit;
use crate::rat::{ceil_div_rat, Rat};
use crate::solution::{Guarantee, Solution, SolveStats};

/// Largest grid denominator tried first by [`eps_split`].
const SPLIT_DENOMINATOR: u64 = 1_000_000;

/// A rational `ε′ > 0` with `(1+ε′)² ≤ 1+ε`, within `1/10⁶` of `√(1+ε) − 1`
/// whenever that is at least `10⁻⁶`.
pub fn eps_split(eps: &Rat) -> Result<Rat> {
    if !eps.is_positive() {
        return Err(Error::NonPositiveEps(eps.to_string()));
    }
    let target = Rat::one() + eps;
    let mut den = BigInt::from(SPLIT_DENOMINATOR);
    loop {
        let den_rat = Rat::from_int(den.clone());
        let fits = |k: &BigInt| {
            let step = Rat::one() + Rat::new(k.clone(), den.clone());
            &step * &step <= target
        };
        // √(1+ε) − 1 ≤ ε/2, so k never exceeds ⌈ε·den/2⌉.
        let mut lo = BigInt::zero();
        let mut hi = (eps * &den_rat / Rat::from(2)).ceil() + 1;
        while &lo + 1 < hi {
            let mid: BigInt = (&lo + &hi) / 2;
            if fits(&mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        if !lo.is_zero() {
            return Ok(Rat::new(lo, den));
        }
        den *= 1000;
    }
}

/// The geometric grid of guesses `z_j = (1+ε′)^j`, `j ∈ [0, J]`, where `J` is
/// the first exponent with `z_J ≥ Σp`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZGrid {
    pub eps_internal: Rat,
    pub j_max: u64,
    n: usize,
}

/// One grid point with its rounding unit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZPoint {
    pub j: u64,
    pub z: Rat,
    pub delta: Rat,
}

impl ZGrid {
    pub fn new(inst: &Instance, eps_internal: Rat) -> Result<Self> {
        if !eps_internal.is_positive() {
            return Err(Error::NonPositiveEps(eps_internal.to_string()));
        }
        let total = Rat::from_uint(&inst.total_profit());
        let base = Rat::one() + &eps_internal;
        let mut z = Rat::one();
        let mut j_max = 0;
        while z < total {
            z = &z * &base;
            j_max += 1;
        }
        Ok(ZGrid {
            eps_internal,
            j_max,
            n: inst.n(),
        })
    }

    pub fn point(&self, j: u64) -> ZPoint {
        assert!(self.n > 0, "grid needs at least one item");
        let z = (Rat::one() + &self.eps_internal).pow(j);
        let delta = &self.eps_internal * &z / Rat::from(self.n as i64);
        ZPoint { j, z, delta }
    }

    /// Upper limit on tabulated profit: `(1+ε′)·z`.
    pub fn profit_cap(&self, point: &ZPoint) -> Rat {
        (Rat::one() + &self.eps_internal) * &point.z
    }

    /// `⌊(1+ε′)z / δ⌋ = ⌊n(1+ε′)/ε′⌋`, the same at every grid point.
    pub fn kmax(&self) -> usize {
        let k = Rat::from(self.n as i64) * (Rat::one() + &self.eps_internal) / &self.eps_internal;
        k.floor().to_usize().expect("kmax fits in memory")
    }
}

/// `u_i = ⌈max(0, p_i − w_i·α) / δ⌉`.
pub fn unit_costs(inst: &Instance, a: &DualPoint, delta: &Rat) -> Result<Vec<BigUint>> {
    reduced_profits(inst, a)
        .iter()
        .map(|r| ceil_div_rat(r, delta))
        .collect()
}

/// Minimum interdiction budget per (item suffix, rounded profit allowance).
///
/// `f(i, k)` is the least cost of interdicting among items `i..n` so that the
/// survivors carry at most `k` units; `None` means no choice achieves it.
#[derive(Clone, Debug)]
pub struct DpTable {
    pub delta: Rat,
    pub kmax: usize,
    n: usize,
    f: Vec<Option<BigUint>>,
    interdict: Vec<bool>,
    units: Vec<Option<usize>>,
}

impl DpTable {
    pub fn n(&self) -> usize {
        self.n
    }

    /// `f(i, k)` with 0-based `i ∈ [0, n]`.
    pub fn f(&self, i: usize, k: usize) -> Option<&BigUint> {
        self.f[i * (self.kmax + 1) + k].as_ref()
    }

    /// Number of non-base states, `n·(kmax+1)`.
    pub fn states(&self) -> usize {
        self.n * (self.kmax + 1)
    }

    /// Smallest `k ≤ kmax` with `f(0, k) ≤ budget`.
    pub fn min_allowance(&self, budget: &BigUint) -> Option<usize> {
        (0..=self.kmax).find(|&k| self.f(0, k).is_some_and(|c| c <= budget))
    }

    /// Follows the back-pointers from `(0, k)`.
    pub fn reconstruct(&self, k: usize) -> Vec<bool> {
        let mut bits = vec![false; self.n];
        let mut k = k;
        for (i, bit) in bits.iter_mut().enumerate() {
            let idx = i * (self.kmax + 1) + k;
            debug_assert!(self.f[idx].is_some());
            if self.interdict[idx] {
                *bit = true;
            } else {
                k -= self.units[i].expect("kept item has finite units");
            }
        }
        bits
    }
}

/// Builds the min-budget DP over unit costs `u`. Keeping item `i` spends
/// `u_i` units of allowance, interdicting it spends `c_i` budget; when both
/// are optimal the interdiction is recorded.
pub fn dp_min_budget(u: &[BigUint], costs: &[BigUint], kmax: usize, delta: Rat) -> DpTable {
    assert_eq!(u.len(), costs.len());
    let n = u.len();
    let width = kmax + 1;
    let units: Vec<Option<usize>> = u
        .iter()
        .map(|v| v.to_usize().filter(|&v| v <= kmax))
        .collect();

    let mut f: Vec<Option<BigUint>> = vec![None; (n + 1) * width];
    let mut interdict = vec![false; (n + 1) * width];
    for slot in &mut f[n * width..] {
        *slot = Some(BigUint::zero());
    }
    for i in (0..n).rev() {
        let (head, tail) = f.split_at_mut((i + 1) * width);
        let row = &mut head[i * width..];
        let next = &tail[..width];
        let flags = &mut interdict[i * width..(i + 1) * width];
        for k in 0..width {
            let cut = next[k].as_ref().map(|v| v + &costs[i]);
            let keep = units[i]
                .filter(|&u| u <= k)
                .and_then(|u| next[k - u].as_ref());
            row[k] = match (cut, keep) {
                (Some(c), Some(kp)) if c <= *kp => {
                    flags[k] = true;
                    Some(c)
                }
                (_, Some(kp)) => Some(kp.clone()),
                (Some(c), None) => {
                    flags[k] = true;
                    Some(c)
                }
                (None, None) => None,
            };
        }
    }
    DpTable {
        delta,
        kmax,
        n,
        f,
        interdict,
        units,
    }
}

/// Outcome of the rounded evaluation at one dual point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GTilde {
    Value {
        value: Rat,
        x: InterdictionVector,
    },
    /// Every feasible interdiction exceeded the profit cap.
    Reject,
}

impl GTilde {
    pub fn value(&self) -> Option<&Rat> {
        match self {
            GTilde::Value { value, .. } => Some(value),
            GTilde::Reject => None,
        }
    }
}

/// `g̃(α) = α·C + min{F̃_α(x) : c·x ≤ B, F̃_α(x) ≤ (1+ε′)z}`.
///
/// Returns the DP table alongside so callers can inspect its size.
pub fn g_tilde(
    inst: &Instance,
    a: &DualPoint,
    grid: &ZGrid,
    point: &ZPoint,
) -> Result<(GTilde, DpTable)> {
    let u = unit_costs(inst, a, &point.delta)?;
    let table = dp_min_budget(&u, &inst.costs, grid.kmax(), point.delta.clone());
    let outcome = match table.min_allowance(&inst.budget) {
        Some(k) => {
            let x = InterdictionVector::from_bits(inst, table.reconstruct(k));
            let value = dual_offset(inst, a) + Rat::from(k as i64) * &point.delta;
            GTilde::Value { value, x }
        }
        None => GTilde::Reject,
    };
    Ok((outcome, table))
}

/// Best rounded evaluation across the candidate set at one grid point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Acceptance {
    pub pass: bool,
    pub point: ZPoint,
    /// `(g̃(α*), x, α*)`, absent when every candidate rejected.
    pub best: Option<(Rat, InterdictionVector, DualPoint)>,
    pub stats: SolveStats,
}

/// Evaluates `g̃` at every candidate and accepts `z` iff the minimum is at
/// most `(1+ε′)z`. Rejections count as `+∞`; ties go to the earlier candidate.
pub fn accept_test(
    inst: &Instance,
    grid: &ZGrid,
    j: u64,
    candidates: &CandidateSet,
) -> Result<Acceptance> {
    let point = grid.point(j);
    let evals = candidates
        .points
        .par_iter()
        .map(|a| g_tilde(inst, a, grid, &point).map(|(g, table)| (g, table.states())))
        .collect::<Result<Vec<_>>>()?;

    let mut stats = SolveStats {
        accept_tests: 1,
        dp_tables: evals.len(),
        ..SolveStats::default()
    };
    let mut best: Option<(Rat, InterdictionVector, DualPoint)> = None;
    for ((g, states), a) in evals.into_iter().zip(&candidates.points) {
        stats.dp_states += states;
        stats.max_table_states = stats.max_table_states.max(states);
        if let GTilde::Value { value, x } = g {
            if best.as_ref().is_none_or(|(b, _, _)| value < *b) {
                best = Some((value, x, a.clone()));
            }
        }
    }
    let cap = grid.profit_cap(&point);
    let pass = best.as_ref().is_some_and(|(v, _, _)| *v <= cap);
    Ok(Acceptance {
        pass,
        point,
        best,
        stats,
    })
}

/// Result of the binary search over the grid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchResult {
    pub j_star: u64,
    pub z_star: Rat,
    pub value: Rat,
    pub x: InterdictionVector,
    pub alpha: DualPoint,
    pub stats: SolveStats,
}

/// Binary search for the smallest accepted grid point. Requires `Σp > 0`.
pub fn search_z(
    inst: &Instance,
    eps_internal: &Rat,
    candidates: &CandidateSet,
) -> Result<SearchResult> {
    if inst.total_profit().is_zero() {
        return Err(Error::InvalidParameter(
            "grid search needs a positive total profit".into(),
        ));
    }
    let grid = ZGrid::new(inst, eps_internal.clone())?;
    let mut stats = SolveStats {
        candidates: candidates.len(),
        ..SolveStats::default()
    };

    let mut lo = 0;
    let mut hi = grid.j_max;
    let mut accepted: Option<Acceptance> = None;
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        let test = accept_test(inst, &grid, mid, candidates)?;
        stats.absorb(&test.stats);
        if test.pass {
            hi = mid;
            accepted = Some(test);
        } else {
            lo = mid + 1;
        }
    }
    let accepted = match accepted.filter(|a| a.point.j == lo) {
        Some(a) => a,
        None => {
            let test = accept_test(inst, &grid, lo, candidates)?;
            stats.absorb(&test.stats);
            if !test.pass {
                return Err(Error::InvariantViolation(format!(
                    "grid point j = {lo} (z ≥ Σp) was not accepted"
                )));
            }
            test
        }
    };
    let (value, x, alpha) = accepted.best.expect("accepted test has a best candidate");
    Ok(SearchResult {
        j_star: lo,
        z_star: accepted.point.z,
        value,
        x,
        alpha,
        stats,
    })
}

/// Exact check for `OPT_F = 0`: every positive-profit item can be interdicted
/// within budget. Expects a preprocessed instance.
pub fn zero_optimum(inst: &Instance) -> Option<InterdictionVector> {
    let bits: Vec<bool> = inst.profits.iter().map(|p| !p.is_zero()).collect();
    let x = InterdictionVector::from_bits(inst, bits);
    x.is_feasible(inst).then_some(x)
}

/// `(1+ε)`-approximation of the relaxed interdiction value.
pub fn approx_opt_f(inst: &Instance, eps: &Rat) -> Result<Solution> {
    solve_relaxed(inst, eps, eps, Guarantee::OnePlusEpsOptF)
}

/// `(2+ε)`-approximation for one capacity constraint, `(1+t+ε)` for `t`.
pub fn approx_interdiction(inst: &Instance, eps: &Rat) -> Result<Solution> {
    if !eps.is_positive() {
        return Err(Error::NonPositiveEps(eps.to_string()));
    }
    let t = inst.t() as i64;
    let (inner, tag) = if t == 1 {
        (eps / &Rat::from(2), Guarantee::TwoPlusEpsOptI)
    } else {
        (eps / &Rat::from(1 + t), Guarantee::OnePlusTPlusEpsOptI)
    };
    solve_relaxed(inst, &inner, eps, tag)
}

fn solve_relaxed(
    inst: &Instance,
    inner_eps: &Rat,
    stated_eps: &Rat,
    tag: Guarantee,
) -> Result<Solution> {
    if !inner_eps.is_positive() {
        return Err(Error::NonPositiveEps(inner_eps.to_string()));
    }
    let pre = preprocess(inst);
    let reduced = &pre.instance;

    let finish = |x: InterdictionVector,
                  guarantee: Guarantee,
                  eps_internal: Option<Rat>,
                  z_star: Option<Rat>,
                  alpha_star: Option<DualPoint>,
                  stats: SolveStats|
     -> Result<Solution> {
        let f_value = f_exact(reduced, &x)?;
        let additive_cert = &f_value - &Rat::from_uint(&max_surviving_profit(reduced, &x));
        Ok(Solution {
            x: pre.lift(inst, &x),
            f_value,
            guarantee,
            eps: stated_eps.clone(),
            eps_internal,
            z_star,
            alpha_star,
            additive_cert,
            stats,
        })
    };

    if let Some(x) = zero_optimum(reduced) {
        return finish(
            x,
            Guarantee::ExactOptF,
            None,
            None,
            None,
            SolveStats::default(),
        );
    }

    // After preprocessing any surviving positive-profit item packs on its own,
    // so OPT_F ≥ 1 here and the grid may start at z = 1.
    let eps_internal = eps_split(inner_eps)?;
    let candidates = candidate_alphas(reduced);
    let found = search_z(reduced, &eps_internal, &candidates)?;
    finish(
        found.x,
        tag,
        Some(eps_internal),
        Some(found.z_star),
        Some(found.alpha),
        found.stats,
    )
}
